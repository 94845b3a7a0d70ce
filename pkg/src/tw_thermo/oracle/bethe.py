"""Bethe-ansatz route to the top QTM eigenvalue.

XXX: M = N/2 roots solve the logarithmic Bethe equations

    M [arctan(l/tau) + arctan(l/(1-tau))] - sum_k arctan(l - l_k) + i h beta/2 = pi I_j

with I_j = j - (M+1)/2, which at h = 0 and small beta start from
l_j = tau tan(pi I_j / M).  The roots are followed from beta ~ 0 to the
target beta by Newton steps.

SU(3): two levels of M roots each.  At beta -> 0 the rescaled roots are the
zeros of explicit degree-M polynomials; they are then continued in beta
with the Bethe equations in ratio form.
"""

import numpy as np

from ..errors import ConvergenceError, TwThermoError
from ..numerics import newton_solve_system
from .qtm import RootSet, TrotterParams
from .rmatrix import ETA

__all__ = [
    "bae_solve_xxx", "tq_lambda_bar", "log_tq_lambda_bar", "bae_free_energy_xxx",
    "xxx_eigen_zeros", "bae_solve_su3", "tq_lambda_su3", "su3_field_factors",
]

BETA_STEP = 0.05


# ---------------------------------------------------------------- XXX

def _xxx_residual(lam, M, tau, hb, I):
    c = 1.0 - tau
    diff = lam[:, None] - lam[None, :]
    return (M * (np.arctan(lam / tau) + np.arctan(lam / c))
            - np.arctan(diff).sum(1) + 0.5j * hb - np.pi * I)


def _xxx_jacobian(lam, M, tau):
    c = 1.0 - tau
    diff = lam[:, None] - lam[None, :]
    K = 1.0 / (1.0 + diff * diff)
    J = K.copy()
    np.fill_diagonal(J, 0.0)
    diag = M * (tau / (lam * lam + tau * tau) + c / (lam * lam + c * c)) - (K.sum(1) - 1.0)
    J[np.diag_indices_from(J)] = diag
    return J


def bae_solve_xxx(M, p, beta_step=BETA_STEP, tol=1e-10):
    """Roots of the top state for M = N/2, continued in beta from ~0."""
    if M < 1 or M > 400:
        raise ValueError("need 1 <= M <= 400")
    if p.J * p.beta >= M:
        raise ValueError("Trotter number too small: need tau = J beta / M < 1")
    I = np.arange(1, M + 1) - 0.5 * (M + 1)
    n_steps = max(1, int(np.ceil(p.beta * p.J / beta_step)))
    betas = np.linspace(p.beta / n_steps, p.beta, n_steps)
    tau0 = p.J * betas[0] / M
    lam = tau0 * np.tan(np.pi * I / M) + 0j
    complex_mode = p.h != 0.0
    for b in betas:
        tau = p.J * b / M
        hb = p.h * b
        if complex_mode:
            f = lambda x, tau=tau, hb=hb: _xxx_residual(x, M, tau, hb, I)
            jac = lambda x, tau=tau: _xxx_jacobian(x, M, tau)
            lam = newton_solve_system(f, lam, jacobian=jac, tol=tol, max_iter=60)
        else:
            f = lambda x, tau=tau: _xxx_residual(x, M, tau, 0.0, I).real
            jac = lambda x, tau=tau: _xxx_jacobian(x, M, tau).real
            lam = newton_solve_system(f, lam.real, jacobian=jac, tol=tol, max_iter=60) + 0j
    res = np.max(np.abs(_xxx_residual(lam, M, p.J * p.beta / M, p.h * p.beta, I)))
    if res > 10 * tol:
        raise ConvergenceError(f"Bethe equations residual {res:.2e}", residual=res)
    return RootSet("bethe-lambda", np.sort_complex(lam), "xxx", 1)


def _roots(roots):
    return np.asarray(roots.values if isinstance(roots, RootSet) else roots, dtype=complex)


def log_tq_lambda_bar(u, roots, p):
    """Logarithm of the normalized eigenvalue from the T-Q relation.

    Lambda is entire, but the T-Q form is 0/0 at a Bethe root (at h = 0 and
    odd M one root sits at u = 0). Such points are evaluated as the mean
    over a small circle, which is exact for an analytic function up to
    O(radius^8).
    """
    lam = _roots(roots)
    u = np.asarray(u, dtype=complex)
    near = np.min(np.abs(u[..., None] - lam), axis=-1, initial=np.inf) < 1e-6
    if not np.any(near):
        return _log_tq_raw(u, lam, p)
    with np.errstate(all="ignore"):
        out = np.array(_log_tq_raw(u, lam, p), dtype=complex)
    ring = 1e-3 * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)
    vals = _log_tq_raw(u[near][..., None] + ring, lam, p)
    top = vals.real.max(-1, keepdims=True)
    out[near] = top[..., 0] + np.log(np.mean(np.exp(vals - top), axis=-1))
    return out if out.ndim else out[()]


def _log_tq_raw(u, lam, p):
    M = lam.size
    tau = p.J * p.beta / M
    x = 0.5 * p.h * p.beta
    et = ETA * tau
    u = np.asarray(u, dtype=complex)[..., None]
    lq = np.log(u - lam).sum(-1)
    t1 = x + M * (np.log(u[..., 0] + et) - np.log(u[..., 0] + et - ETA)) + np.log(u - lam - ETA).sum(-1) - lq
    t2 = -x + M * (np.log(u[..., 0] - et) - np.log(u[..., 0] - et + ETA)) + np.log(u - lam + ETA).sum(-1) - lq
    hi = np.where(t1.real >= t2.real, t1, t2)
    lo = np.where(t1.real >= t2.real, t2, t1)
    return hi + np.log1p(np.exp(lo - hi))


def tq_lambda_bar(u, roots, p):
    """Normalized eigenvalue Lambda(u) / ((u - eta tau + eta)(u + eta tau - eta))^M."""
    return np.exp(log_tq_lambda_bar(u, roots, p))


def bae_free_energy_xxx(M, p, roots=None):
    """f = J - T ln Lambda_bar(0) at Trotter number N = 2M."""
    roots = roots if roots is not None else bae_solve_xxx(M, p)
    return float(p.J - log_tq_lambda_bar(0.0, roots, p).real / p.beta)


def _tq_terms_xxx(u, lam, p, M):
    """log A(u), log D(u) and their u-derivatives, Lambda = (A + D)/Q."""
    tau = p.J * p.beta / M
    x = 0.5 * p.h * p.beta
    et = ETA * tau
    a = x + M * (np.log(u - et + ETA) + np.log(u + et))
    da = M * (1 / (u - et + ETA) + 1 / (u + et))
    d = -x + M * (np.log(u - et) + np.log(u + et - ETA))
    dd = M * (1 / (u - et) + 1 / (u + et - ETA))
    lA = a + np.log(u - lam - ETA).sum()
    dA = da + (1 / (u - lam - ETA)).sum()
    lD = d + np.log(u - lam + ETA).sum()
    dD = dd + (1 / (u - lam + ETA)).sum()
    return lA, dA, lD, dD


def _lambda_logderiv(u, lam, p, M):
    """(log Lambda(u), Lambda'/Lambda) from the T-Q form."""
    lA, dA, lD, dD = _tq_terms_xxx(u, lam, p, M)
    r = np.exp(lD - lA)
    lq = np.log(u - lam).sum()
    return lA + np.log1p(r) - lq, (dA + r * dD) / (1 + r) - (1 / (u - lam)).sum()


def _aberth(logderiv, z0, tol=1e-12, max_iter=1000):
    """Aberth-Ehrlich iteration given u -> p'(u)/p(u)."""
    z = np.array(z0, dtype=complex)
    n = z.size
    for _ in range(max_iter):
        shift = np.empty(n, dtype=complex)
        for k in range(n):
            with np.errstate(all="ignore"):
                ratio = 1.0 / logderiv(z[k])
                others = np.sum(1.0 / (z[k] - np.delete(z, k)))
                shift[k] = ratio / (1.0 - ratio * others)
            if not np.isfinite(shift[k]):
                # landed on a pole of the log-derivative; step off it
                shift[k] = 1e-6 * (1.0 + 1.0j)
        z -= shift
        if np.max(np.abs(shift)) < tol * max(1.0, np.max(np.abs(z))):
            return z
    raise ConvergenceError("Aberth iteration did not converge", residual=float(np.max(np.abs(shift))))


def xxx_eigen_zeros(roots, p):
    """z-roots (zeros of Lambda) and w-roots (zeros of W) of the top state.

    Seeds follow the observed patterns (z near lambda_j +- eta, w near
    lambda_j + 2 eta and lambda_j - eta), moved slightly off the T-Q poles.
    """
    lam = _roots(roots)
    M = lam.size

    def lam_ld(u):
        return _lambda_logderiv(u, lam, p, M)[1]

    z = _aberth(lam_ld, np.concatenate([lam + 0.9 * ETA + 0.01, lam - 0.9 * ETA - 0.01]))

    tau = p.J * p.beta / M
    et = ETA * tau

    def w_logderiv(u):
        l0, d0 = _lambda_logderiv(u, lam, p, M)
        l1, d1 = _lambda_logderiv(u - ETA, lam, p, M)
        # a(u) d(u - eta)
        lad = M * (np.log(u - et + ETA) + np.log(u + et) + np.log(u - ETA - et) + np.log(u + et - 2 * ETA))
        dad = M * (1 / (u - et + ETA) + 1 / (u + et) + 1 / (u - ETA - et) + 1 / (u + et - 2 * ETA))
        s = np.exp(lad - (l0 + l1))
        # W e^{x} d(u) = Lambda(u)Lambda(u-eta) - a(u)d(u-eta)
        num = (d0 + d1) - s * dad
        dd = M * (1 / (u - et) + 1 / (u + et - ETA))
        return num / (1.0 - s) - dd

    w = _aberth(w_logderiv, np.concatenate([lam + 1.9 * ETA + 0.01, lam - 0.9 * ETA - 0.01]))
    return (RootSet("z-roots", np.sort_complex(z), "xxx", 1),
            RootSet("w-roots", np.sort_complex(w), "xxx", 1))


# ---------------------------------------------------------------- SU(3)

def su3_field_factors(p):
    """Field weights (f1, f2, f3) of the three level-1 T-Q terms.

    The level-2 terms carry the pair products (f2 f3, f1 f3, f1 f2).
    """
    x = 0.5 * p.h * p.beta
    return np.exp(0.0), np.exp(-x), np.exp(x)


def _su3_residual(z, M, tau, f):
    f1, f2, f3 = f
    l1, l2 = z[:M], z[M:]
    et = ETA * tau
    d11p = l1[:, None] - l1[None, :] + ETA
    d11m = l1[:, None] - l1[None, :] - ETA
    r1 = (f1 / f3 * ((l1 - et) / (l1 - et + ETA)) ** M
          * np.prod(d11p / d11m, 1)
          * np.prod((l1[:, None] - l2[None, :] - ETA) / (l1[:, None] - l2[None, :]), 1) + 1.0)
    d22p = l2[:, None] - l2[None, :] + ETA
    d22m = l2[:, None] - l2[None, :] - ETA
    r2 = (f1 / f2 * ((l2 + et) / (l2 + et - ETA)) ** M
          * np.prod((l2[:, None] - l1[None, :] + ETA) / (l2[:, None] - l1[None, :]), 1)
          * np.prod(d22m / d22p, 1) + 1.0)
    return np.concatenate([r1, r2])


def _su3_start(M, tau, f):
    """Zeros at beta -> 0: Q1 ~ (1+c')(y-i)^M + c (y+i)^M, Q2 ~ (1+c)(y+i)^M + c'(y-i)^M."""
    f1, f2, f3 = f
    c, cp = f3 / f1, f2 / f1
    base_m = np.poly(np.full(M, 1j))
    base_p = np.poly(np.full(M, -1j))
    y = np.roots((1 + cp) * base_m + c * base_p)
    v = np.roots((1 + c) * base_p + cp * base_m)
    return tau * np.concatenate([y, v])


def bae_solve_su3(tp, p, beta_step=BETA_STEP, tol=1e-10):
    """Two-level roots of the top state in the L1 = L2 = N/2 sector."""
    M = tp.M
    if p.J * p.beta >= M:
        raise ValueError("Trotter number too small: need tau = J beta / M < 1")
    f = su3_field_factors(p)
    n_steps = max(1, int(np.ceil(p.beta * p.J / beta_step)))
    betas = np.linspace(p.beta / n_steps, p.beta, n_steps)
    z = _su3_start(M, p.J * betas[0] / M, f)
    for b in betas:
        tau = p.J * b / M
        fb = su3_field_factors(type(p)(J=p.J, h=p.h, beta=b))
        z = newton_solve_system(lambda q, tau=tau, fb=fb: _su3_residual(q, M, tau, fb), z,
                                tol=tol, max_iter=60)
    res = float(np.max(np.abs(_su3_residual(z, M, p.J * p.beta / M, f))))
    if res > 10 * tol:
        raise ConvergenceError(f"SU(3) Bethe equations residual {res:.2e}", residual=res)
    return (RootSet("bethe-lambda", np.sort_complex(z[:M]), "su3", 1),
            RootSet("bethe-lambda", np.sort_complex(z[M:]), "su3", 2))


def tq_lambda_su3(u, roots, p, level=1):
    """Normalized eigenvalues of t1 (level 1) or t2 (level 2) from the T-Q forms."""
    r1, r2 = roots
    l1, l2 = _roots(r1), _roots(r2)
    M = l1.size
    tau = p.J * p.beta / M
    et = ETA * tau
    f1, f2, f3 = su3_field_factors(p)
    u = complex(u)
    Q1 = lambda v: np.prod(v - l1)
    Q2 = lambda v: np.prod(v - l2)
    if level == 1:
        lam = (f1 * ((u - et) * (u + et)) ** M * Q1(u + ETA) * Q2(u - ETA) / (Q1(u) * Q2(u))
               + f2 * ((u - et) * (u + et - ETA)) ** M * Q2(u + ETA) / Q2(u)
               + f3 * ((u - et + ETA) * (u + et)) ** M * Q1(u - ETA) / Q1(u))
        return lam / ((u - et + ETA) * (u + et - ETA)) ** M
    if level == 2:
        h = ETA / 2
        lam = (f2 * f3 * ((u - et + 3 * h) * (u + et - 3 * h)) ** M
               * Q1(u - h) * Q2(u + h) / (Q1(u + h) * Q2(u - h))
               + f1 * f3 * ((u - et + 3 * h) * (u + et - h)) ** M * Q2(u - 3 * h) / Q2(u - h)
               + f1 * f2 * ((u - et + h) * (u + et - 3 * h)) ** M * Q1(u + 3 * h) / Q1(u + h))
        return lam / ((u - et + 3 * h) * (u + et - 3 * h)) ** M
    raise ValueError("level must be 1 or 2")
