"""Finite-temperature NLIE for the spin-1/2 XXX chain.

Hamiltonian: ``H = J sum_j sigma_j . sigma_{j+1} + (h/2) sum_j sigma^z_j``.

The unknown ``epsbar`` lives on the two outer lines ``Im v = +-(1/2 + Delta)``.
One sweep of the fixed-point map

1. continues ``epsbar`` to the four contour lines ``+-(1/2 +- delta)``
   with Cauchy's formula on the strip between the outer lines,
2. forms ``xi = log((q + a exp(-beta epsbar)) / (4 cosh^2(beta h / 2)))``,
3. integrates ``xi`` around the two contours enclosing ``Im v = +-1/2``,
4. solves the outer-line identity for the new ``epsbar``.

The free energy follows from the dressed energy on the real axis.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError
from .numerics import LineFunction, LineGrid, cauchy_apply, log_add_exp, sech_kernel

__all__ = [
    "ModelParams", "XxxNlieConfig", "XxxSolution",
    "q_of", "log_q_of", "xi_of", "cauchy_shift", "nlie_rhs", "solve", "solve_xxx",
    "dressed_energy", "free_energy", "ground_state_energy", "xxx_free_energy",
]

ETA = 1j


@dataclass(frozen=True)
class ModelParams:
    """Coupling, field and inverse temperature; the crossing parameter is ``i``."""

    J: float = 1.0
    h: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def eta(self):
        return ETA

    @property
    def T(self):
        return 1.0 / self.beta

    @classmethod
    def from_T(cls, T, J=1.0, h=0.0):
        if not T > 0:
            raise ValueError("temperature must be positive")
        return cls(J=J, h=h, beta=1.0 / T)


@dataclass(frozen=True)
class XxxNlieConfig:
    delta: float = 0.1
    Delta: float = 0.25
    half_extent: float = 24.0
    count: int = 1537
    tol: float = 1e-10
    max_iter: int = 500
    damping: float = 0.5
    decay_tol: float = 2e-2

    def __post_init__(self):
        if not 0.0 < self.delta < self.Delta < 0.5:
            raise ValueError(f"need 0 < delta < Delta < 1/2, got delta={self.delta}, Delta={self.Delta}")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter >= 1")
        LineGrid(0.0, self.half_extent, self.count)

    @property
    def grid(self):
        return LineGrid(0.0, self.half_extent, self.count)

    @property
    def outer_offset(self):
        return 0.5 + self.Delta

    @property
    def inner_offsets(self):
        d = self.delta
        return (0.5 + d, 0.5 - d, -(0.5 - d), -(0.5 + d))


@dataclass(frozen=True)
class XxxSolution:
    params: ModelParams
    config: XxxNlieConfig
    eps_bar_plus: LineFunction = field(repr=False)
    eps_bar_minus: LineFunction = field(repr=False)
    eps_bar_inner: dict = field(repr=False)
    free_energy: float = float("nan")
    iterations: int = 0
    final_residual: float = float("nan")
    history: tuple = field(default=(), repr=False)

    @property
    def T(self):
        return self.params.T

    def eps_bar_on(self, imag_offset):
        """Continue epsbar from the outer lines to any line inside the strip."""
        return _shift_to(self.eps_bar_plus, self.eps_bar_minus, imag_offset)


def _log_4cosh2(x):
    """log(4 cosh^2 x) without overflow."""
    ax = abs(x)
    return 2.0 * (ax + np.log1p(np.exp(-2.0 * ax)))


def _log_a(log4c2):
    """log(4 cosh^2 x - 1) from log(4 cosh^2 x)."""
    return log4c2 + np.log(-np.expm1(-log4c2))


def log_q_of(u, p):
    """Analytic logarithm of q(u): 2 J beta / (u^2 + 1/4)."""
    u = np.asarray(u, dtype=complex)
    den = u * u + 0.25
    if np.any(np.abs(den) < 1e-14):
        raise ZeroDivisionError("q(u) has essential singularities at u = +-i/2")
    return 2.0 * p.J * p.beta / den


def q_of(u, p):
    """q(u) = exp(2 J beta / (u^2 + 1/4))."""
    return np.exp(log_q_of(u, p))


def xi_of(u, eps_bar, p):
    """xi(u) = ln((q + a e^{-beta epsbar}) / (4 cosh^2(h beta/2))), a = 4cosh^2 - 1."""
    l4 = _log_4cosh2(0.5 * p.h * p.beta)
    eb = np.asarray(eps_bar, dtype=complex)
    return log_add_exp(log_q_of(u, p), _log_a(l4) - p.beta * eb) - l4


def _shift_to(plus, minus, target):
    c = plus.grid.imag_offset
    if not (minus.grid.imag_offset == -c and abs(target) < c):
        raise ValueError("target line must lie strictly between the outer lines +-c")
    g = plus.grid
    vals = (cauchy_apply(plus.values, g, 1j * (c - target))
            - cauchy_apply(minus.values, g, 1j * (-c - target)))
    return LineFunction(g.at(target), vals)


def cauchy_shift(eps_plus, eps_minus, cfg):
    """epsbar on the four inner lines from its values on the outer lines."""
    return {s: _shift_to(eps_plus, eps_minus, s) for s in cfg.inner_offsets}


def _contour_terms(cfg):
    # (line, sign, kernel shifts in units of eta): the contour around +i/2 uses
    # 1/(u-v) + 1/(u-v-eta), the one around -i/2 uses 1/(u-v+eta) + 1/(u-v).
    up, lo, mlo, mup = cfg.inner_offsets
    return ((up, -1.0, (0.0, 1.0)), (lo, +1.0, (0.0, 1.0)),
            (mlo, -1.0, (-1.0, 0.0)), (mup, +1.0, (-1.0, 0.0)))


def _rhs_on(xi_lines, target, log4c2, cfg):
    g = cfg.grid
    total = np.full(g.count, log4c2, dtype=complex)
    for s, sign, shifts in _contour_terms(cfg):
        for k in shifts:
            total += sign * cauchy_apply(xi_lines[s].values, g, 1j * (k + s - target))
    return total


def nlie_rhs(xi_lines, p, cfg):
    """New epsbar on the outer lines from xi on the four contour lines.

    The contour integrals give ``ln(q + a e^{-beta epsbar})`` on each outer
    line; epsbar is recovered as ``-(1/beta) ln((e^{RHS} - q)/a)``.
    """
    l4 = _log_4cosh2(0.5 * p.h * p.beta)
    la = _log_a(l4)
    out = []
    g = cfg.grid
    for t in (cfg.outer_offset, -cfg.outer_offset):
        rhs = _rhs_on(xi_lines, t, l4, cfg)
        lq = log_q_of(g.real_nodes + 1j * t, p)
        out.append(LineFunction(g.at(t), -(log_add_exp(rhs, lq, sign=-1.0) - la) / p.beta))
    return tuple(out)


def _sweep(plus, minus, p, cfg):
    inner = cauchy_shift(plus, minus, cfg)
    xi = {s: LineFunction(f.grid, xi_of(f.grid.points, f.values, p)) for s, f in inner.items()}
    return nlie_rhs(xi, p, cfg), inner


def _warn_narrow_contour(p, cfg):
    # In a field the eigenvalue zeros spread away from Im = +-1/2 and may
    # leave the band enclosed by the contour lines.
    if p.h != 0 and abs(p.h) * p.beta > 1.0 and cfg.delta < 0.3:
        warnings.warn(
            f"h/T = {abs(p.h) * p.beta:.2g} with delta = {cfg.delta}: contours may not enclose all "
            "eigenvalue zeros; consider delta=0.3, Delta=0.45", RuntimeWarning, stacklevel=3)


def solve(p, cfg=None, warm_start=None):
    """Damped fixed-point iteration of the XXX NLIE."""
    cfg = cfg or XxxNlieConfig()
    if p.J <= 0:
        raise ValueError("J must be positive (antiferromagnetic regime)")
    _warn_narrow_contour(p, cfg)
    g = cfg.grid
    c = cfg.outer_offset
    if warm_start is not None and warm_start.eps_bar_plus.grid == g.at(c):
        plus, minus = warm_start.eps_bar_plus, warm_start.eps_bar_minus
    else:
        plus = LineFunction(g.at(c), np.zeros(g.count))
        minus = LineFunction(g.at(-c), np.zeros(g.count))
    history = []
    w = cfg.damping
    for it in range(1, cfg.max_iter + 1):
        (new_p, new_m), _ = _sweep(plus, minus, p, cfg)
        diff = max(np.max(np.abs(new_p.values - plus.values)),
                   np.max(np.abs(new_m.values - minus.values)))
        if not np.isfinite(diff):
            raise ConvergenceError(f"XXX NLIE diverged at T={p.T:g}", residual=diff, history=history)
        history.append(float(diff))
        plus = LineFunction(plus.grid, (1 - w) * plus.values + w * new_p.values)
        minus = LineFunction(minus.grid, (1 - w) * minus.values + w * new_m.values)
        if diff < cfg.tol:
            break
    else:
        raise ConvergenceError(
            f"XXX NLIE did not converge at T={p.T:g} after {cfg.max_iter} iterations "
            f"(residual {history[-1]:.3e})", residual=history[-1], history=history)
    plus.check_decay(cfg.decay_tol)
    minus.check_decay(cfg.decay_tol)
    sol = XxxSolution(p, cfg, plus, minus, cauchy_shift(plus, minus, cfg),
                      iterations=it, final_residual=history[-1], history=tuple(history))
    return replace(sol, free_energy=free_energy(sol, p))


def dressed_energy(u, sol, p=None):
    """epsilon(u) = 2J/(u^2 + 1/4) + epsbar(u) at real ``u`` (scalar or array).

    Values off the grid nodes are obtained by evaluating the Cauchy integral
    at those points directly.
    """
    p = p or sol.params
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    c = sol.eps_bar_plus.grid.imag_offset
    g = sol.eps_bar_plus.grid
    v = g.real_nodes
    wp = g.weights * sol.eps_bar_plus.values
    wm = g.weights * sol.eps_bar_minus.values
    d = u_arr[:, None] - v[None, :]
    eb = ((wp / (d - 1j * c)).sum(1) - (wm / (d + 1j * c)).sum(1)) / (2j * np.pi)
    out = 2 * p.J / (u_arr ** 2 + 0.25) + eb.real
    return out[0] if np.ndim(u) == 0 else out


def _dressed_on_grid(sol, p):
    eb = sol.eps_bar_on(0.0)
    v = eb.grid.real_nodes
    return eb.grid, 2 * p.J / (v * v + 0.25) + eb.values.real


def free_energy(sol, p=None):
    """e_g - T int ln(1 + a e^{-beta epsilon(v)}) / (2cosh pi v) dv."""
    p = p or sol.params
    g, eps = _dressed_on_grid(sol, p)
    la = _log_a(_log_4cosh2(0.5 * p.h * p.beta))
    integrand = np.logaddexp(0.0, la - p.beta * eps) * sech_kernel(g.real_nodes)
    return float(ground_state_energy(p.J) - np.dot(g.weights, integrand) / p.beta)


def ground_state_energy(J=1.0):
    """J - J int dv / (cosh(pi v)(v^2 + 1/4)) = J (1 - 4 ln 2)."""
    return J * (1.0 - 4.0 * np.log(2.0))


def solve_xxx(T, J=1.0, h=0.0, config=None, warm_start=None, **overrides):
    """Convenience front end taking a temperature."""
    cfg = config or XxxNlieConfig()
    if overrides:
        cfg = replace(cfg, **overrides)
    return solve(ModelParams.from_T(T, J, h), cfg, warm_start)


def xxx_free_energy(T, J=1.0, h=0.0, **overrides):
    return solve_xxx(T, J, h, **overrides).free_energy
