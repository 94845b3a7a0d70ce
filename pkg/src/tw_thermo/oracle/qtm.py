"""Dense quantum transfer matrices, their fusions and the t-W identities.

Operators act on ``(C^d)^{(x) N}``; site ``k`` (1-based) sits at tensor
position ``N - k`` so site N is the most significant digit.  All builders
return dense complex matrices.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, TwThermoError
from .rmatrix import ETA, fuse_pair, r_blocks, rt_blocks, sym_antisym_isometries

__all__ = [
    "TrotterParams", "RootSet", "chain_transfer", "qtm_build_xxx", "fused_w_build_xxx",
    "xxx_a_d", "verify_tw_xxx", "qtm_build_su3", "su3_fused_builds", "verify_tw_su3",
    "eigen_top", "eigenvalue_on", "interpolate_roots", "eigenvalue_roots",
    "antisym_channel_xxx",
]

MAX_DIM = 4096


@dataclass(frozen=True)
class TrotterParams:
    """Trotter number N, tau = 2 J beta / N and the inhomogeneities of the XXX QTM."""

    N: int
    tau: float

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"Trotter number must be even and >= 2, got {self.N}")

    @property
    def M(self):
        return self.N // 2

    @property
    def theta(self):
        """theta_k = eta*tau on even sites, eta - eta*tau on odd sites (k = 1..N)."""
        k = np.arange(1, self.N + 1)
        return np.where(k % 2 == 0, ETA * self.tau, ETA - ETA * self.tau)

    @classmethod
    def from_model(cls, N, p):
        return cls(int(N), 2.0 * p.J * p.beta / N)


@dataclass(frozen=True)
class RootSet:
    kind: str
    values: np.ndarray
    model: str = "xxx"
    level: int = 1

    def __len__(self):
        return len(self.values)


def _check_dim(d, N):
    if d ** N > MAX_DIM:
        raise DimensionError(f"{d}^{N} = {d ** N} exceeds the dense limit {MAX_DIM}")


def chain_transfer(blocks, twist):
    """tr_0[twist * L_N ... L_1] for per-site blocks listed from site 1 to N."""
    acc = blocks[0]
    for L in blocks[1:-1]:
        da, s, ds = L.shape[0], acc.shape[2], L.shape[2]
        acc = np.einsum("abij,bcxy->acixjy", L, acc).reshape(da, da, ds * s, ds * s)
    if len(blocks) == 1:
        return np.einsum("ca,acxy->xy", twist, acc)
    last = blocks[-1]
    da = last.shape[0]
    out = None
    for a in range(da):
        for b in range(da):
            m = np.einsum("c,cxy->xy", twist[:, a], acc[b])
            term = np.kron(last[a, b], m)
            out = term if out is None else out + term
    return out


def _twist(weights, x):
    return np.diag(np.exp(x * np.asarray(weights, dtype=float)))


# ---------------------------------------------------------------- XXX

def _xxx_blocks(u, tp):
    return [r_blocks(u - th, 2) for th in tp.theta]


def xxx_a_d(u, tp, p):
    """a(u) = e^{h beta/2} prod(u - theta + eta), d(u) = e^{-h beta/2} prod(u - theta)."""
    x = 0.5 * p.h * p.beta
    th = tp.theta
    return np.exp(x) * np.prod(u - th + ETA), np.exp(-x) * np.prod(u - th)


def qtm_build_xxx(u, tp, p):
    """t(u) = tr_0 e^{h beta sigma^z/2} R_0N(u - theta_N) ... R_01(u - theta_1)."""
    _check_dim(2, tp.N)
    return chain_transfer(_xxx_blocks(complex(u), tp), _twist((1, -1), 0.5 * p.h * p.beta))


def _fused_xxx_blocks(u, tp):
    Vs, _ = sym_antisym_isometries(2)
    return [fuse_pair(r_blocks(u - th, 2), r_blocks(u - th - ETA, 2), Vs) / (u - th) for th in tp.theta]


def fused_w_build_xxx(u, tp, p):
    """W(u) = tr over Sym^2 of e^{h beta sigma^z_{12}/2} times the fused monodromy."""
    _check_dim(2, tp.N)
    u = complex(u)
    return chain_transfer(_fused_xxx_blocks(u, tp), _twist((2, 0, -2), 0.5 * p.h * p.beta))


def antisym_channel_xxx(u, tp):
    """P- T_2(u) T_1(u - eta) P- restricted to the singlet, as an operator."""
    _check_dim(2, tp.N)
    u = complex(u)
    _, Va = sym_antisym_isometries(2)
    blocks = [fuse_pair(r_blocks(u - th, 2), r_blocks(u - th - ETA, 2), Va) for th in tp.theta]
    return chain_transfer(blocks, np.eye(1))


def _rel_residual(lhs, rhs):
    scale = np.max(np.abs(lhs))
    return float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0 else float(np.max(np.abs(rhs)))


def verify_tw_xxx(u, tp, p, w_perturb=0.0):
    """Relative residual of t(u)t(u-eta) = a(u)d(u-eta) + e^{h beta/2} d(u) W(u).

    ``w_perturb`` scales W by (1 + w_perturb); a nonzero value is a negative
    control for the identity check.
    """
    if tp.N > 10:
        raise DimensionError("t-W verification is limited to N <= 10")
    u = complex(u)
    t_u = qtm_build_xxx(u, tp, p)
    t_m = qtm_build_xxx(u - ETA, tp, p)
    a_u, d_u = xxx_a_d(u, tp, p)
    _, d_m = xxx_a_d(u - ETA, tp, p)
    W = fused_w_build_xxx(u, tp, p) * (1.0 + w_perturb)
    lhs = t_u @ t_m
    rhs = a_u * d_m * np.eye(lhs.shape[0]) + np.exp(0.5 * p.h * p.beta) * d_u * W
    return _rel_residual(lhs, rhs)


# ---------------------------------------------------------------- SU(3)

SU3_WEIGHTS = (1.0, 0.0, -1.0)


def _su3_site_blocks(u, tp):
    """Even sites R(u - eta tau); odd sites -R^t(-u - eta tau)."""
    et = ETA * tp.tau
    return [(-rt_blocks(-u - et, 3)) if k % 2 else r_blocks(u - et, 3) for k in range(1, tp.N + 1)]


def qtm_build_su3(u, tp, p):
    _check_dim(3, tp.N)
    return chain_transfer(_su3_site_blocks(complex(u), tp), _twist(SU3_WEIGHTS, 0.5 * p.h * p.beta))


def _level2_blocks(x, tp):
    """Antifundamental-aux blocks of t2(x), from the antisymmetric fusion at u = x + eta/2."""
    _, Va = sym_antisym_isometries(3)
    et = ETA * tp.tau
    hi, lo = _su3_site_blocks(x + ETA / 2, tp), _su3_site_blocks(x - ETA / 2, tp)
    out = []
    for k in range(1, tp.N + 1):
        u = x + ETA / 2
        fac = (u + et) if k % 2 else (u - et - ETA)
        out.append(fuse_pair(hi[k - 1], lo[k - 1], Va) / fac)
    return out


def _level_twist(weights, x, V):
    g = _twist(weights, x)
    return V.conj().T @ np.kron(g, g) @ V


def su3_fused_builds(u, tp, p):
    """Dense t2(u), W1(u) and W2(u).

    t2 and W1 come from the antisymmetric and symmetric parts of the doubled
    fundamental auxiliary space; W2 from the symmetric part of two
    antifundamental auxiliary spaces.  Each site factor is divided by its
    scalar zero so that every operator is a degree-N polynomial.
    """
    _check_dim(3, tp.N)
    u = complex(u)
    x = 0.5 * p.h * p.beta
    et = ETA * tp.tau
    Vs, Va = sym_antisym_isometries(3)
    t2 = chain_transfer(_level2_blocks(u, tp), _level_twist(SU3_WEIGHTS, x, Va))
    hi, lo = _su3_site_blocks(u, tp), _su3_site_blocks(u - ETA, tp)
    w1_blocks = [fuse_pair(hi[k - 1], lo[k - 1], Vs) / ((u + et - ETA) if k % 2 else (u - et))
                 for k in range(1, tp.N + 1)]
    W1 = chain_transfer(w1_blocks, _level_twist(SU3_WEIGHTS, x, Vs))
    # two antifundamental aux spaces, basis given by Va
    Vs3, _ = sym_antisym_isometries(3)
    h2, l2 = _level2_blocks(u, tp), _level2_blocks(u - ETA, tp)
    w2_blocks = [fuse_pair(h2[k - 1], l2[k - 1], Vs3)
                 / ((u + et - 1.5 * ETA) if k % 2 else (u - et + 0.5 * ETA))
                 for k in range(1, tp.N + 1)]
    g2 = Va.conj().T @ np.kron(_twist(SU3_WEIGHTS, x), _twist(SU3_WEIGHTS, x)) @ Va
    W2 = chain_transfer(w2_blocks, Vs3.conj().T @ np.kron(g2, g2) @ Vs3)
    return {"t2": t2, "W1": W1, "W2": W2}


def verify_tw_su3(u, tp, p, w_perturb=0.0):
    """Relative residuals of the two SU(3) t-W relations at ``u``."""
    if tp.N > 6:
        raise DimensionError("SU(3) t-W verification is limited to N <= 6")
    u = complex(u)
    et = ETA * tp.tau
    M = tp.M
    t1_u = qtm_build_su3(u, tp, p)
    t1_m = qtm_build_su3(u - ETA, tp, p)
    t1_h = qtm_build_su3(u - ETA / 2, tp, p)
    f = su3_fused_builds(u, tp, p)
    t2_h = chain_transfer(_level2_blocks(u - ETA / 2, tp),
                          _level_twist(SU3_WEIGHTS, 0.5 * p.h * p.beta, sym_antisym_isometries(3)[1]))
    t2_m = chain_transfer(_level2_blocks(u - ETA, tp),
                          _level_twist(SU3_WEIGHTS, 0.5 * p.h * p.beta, sym_antisym_isometries(3)[1]))
    scale = 1.0 + w_perturb
    lhs1 = t1_u @ t1_m
    rhs1 = (((u + et) * (u - et - ETA)) ** M * t2_h
            + ((u + et - ETA) * (u - et)) ** M * f["W1"] * scale)
    lhs2 = f["t2"] @ t2_m
    rhs2 = (((u + et - 2.5 * ETA) * (u - et + 1.5 * ETA)) ** M * t1_h
            + ((u + et - 1.5 * ETA) * (u - et + 0.5 * ETA)) ** M * f["W2"] * scale)
    return _rel_residual(lhs1, rhs1), _rel_residual(lhs2, rhs2)


# ---------------------------------------------------------------- spectra and roots

def eigen_top(t0, gap_tol=1e-8):
    """Eigenpair of maximal |eigenvalue|; warns when the top pair is nearly degenerate."""
    t0 = np.asarray(t0)
    if not np.all(np.isfinite(t0)):
        raise TwThermoError("operator has non-finite entries")
    vals, vecs = np.linalg.eig(t0)
    order = np.argsort(-np.abs(vals))
    top = vals[order[0]]
    if len(vals) > 1 and abs(abs(top) - abs(vals[order[1]])) < gap_tol * abs(top):
        warnings.warn("top eigenvalue is nearly degenerate", RuntimeWarning, stacklevel=2)
    v = vecs[:, order[0]]
    return top, v / np.linalg.norm(v)


def eigenvalue_on(build, vec, u, min_overlap=0.9):
    """Eigenvalue of the operator ``build(u)`` on the fixed eigenvector ``vec``.

    The family commutes, so ``vec`` stays an eigenvector; the overlap of
    ``build(u) vec`` with ``vec`` measures that and must exceed ``min_overlap``.
    """
    w = build(u) @ vec
    lam = np.vdot(vec, w)
    nw = np.linalg.norm(w)
    if nw > 0 and abs(lam) / nw < min_overlap:
        raise TwThermoError(f"eigenvector tracking lost at u={u}: overlap {abs(lam) / nw:.3f}")
    return lam


def interpolate_roots(func, degree, radius=2.0):
    """Zeros of a degree-``degree`` polynomial known only through ``func``.

    Samples on a circle give the monomial coefficients by FFT; the zeros are
    the eigenvalues of the companion matrix (numpy.roots).  Returns the roots
    and the leading coefficient.
    """
    n = degree + 1
    z = radius * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([func(zz) for zz in z])
    coef = np.fft.fft(vals) / n / radius ** np.arange(n)
    return np.roots(coef[::-1]), coef[-1]


def eigenvalue_roots(model, tp, p, kind="z", level=1, radius=2.0):
    """Zeros of the top-state eigenvalue of t (kind 'z') or W (kind 'w')."""
    if model == "xxx":
        t0 = qtm_build_xxx(0.0, tp, p)
        _, vec = eigen_top(t0)
        build = (lambda u: qtm_build_xxx(u, tp, p)) if kind == "z" else (lambda u: fused_w_build_xxx(u, tp, p))
    elif model == "su3":
        t0 = qtm_build_su3(0.0, tp, p)
        _, vec = eigen_top(t0)
        if kind == "z":
            build = (lambda u: qtm_build_su3(u, tp, p)) if level == 1 else \
                (lambda u: su3_fused_builds(u, tp, p)["t2"])
        else:
            build = lambda u: su3_fused_builds(u, tp, p)["W1" if level == 1 else "W2"]
    else:
        raise ValueError(f"unknown model {model!r}")
    roots, _ = interpolate_roots(lambda u: eigenvalue_on(build, vec, u), tp.N, radius)
    return RootSet(kind + "-roots", np.sort_complex(roots), model, level)
