"""Finite-temperature NLIEs for the SU(3)-invariant chain.

Four auxiliary functions are carried:

* ``epsbar_2``, ``epsbar_3`` on ``Im v = +-(1/2 + Delta)`` (singular only on
  ``Im v = +-3/2``), continued to the xi_1 contour lines ``+-(1/2 +- delta)``;
* ``epsbar_4`` on ``Im v = +-(1 + Delta2)`` (singular on ``+-2``), continued
  to the xi_2 contour lines ``+-(1 +- delta2)``;
* ``epsbar_1`` (singular on ``+-1``) is not iterated: it is rebuilt on the
  xi_2 lines and on ``+-(1 + Delta2)`` from the contour integral of xi_1.

The xi_2 contours get their own offsets ``delta2``/``Delta2`` so that the
kernels of the epsbar_1 representation never have a pole on a xi_1 line
(``delta2 > delta`` puts ``u - i/2`` strictly above or below those lines).

The model described is ``H = 2J sum_j P_{j,j+1} + (h/2) sum_j S^z_j``.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError
from .numerics import LineFunction, LineGrid, cauchy_apply, log_add_exp, sech_kernel
from .xxx import ModelParams

__all__ = ["Su3Params", "Su3NlieConfig", "Su3NlieState", "b_of", "xi1_of", "xi2_of",
           "nlie_rhs_1", "eps1_from_xi1", "nlie_rhs_2", "eps2_from_xi2", "cauchy_shift_su3",
           "solve_su3", "free_energy_su3", "su3_free_energy"]

WEIGHTS = (1.0, 0.0, -1.0)


class Su3Params(ModelParams):
    """Same fields as :class:`ModelParams`; S^z weights fixed to (1, 0, -1)."""

    @property
    def weights(self):
        return WEIGHTS


@dataclass(frozen=True)
class Su3NlieConfig:
    delta: float = 0.1
    Delta: float = 0.25
    delta2: float = 0.25
    Delta2: float = 0.4
    half_extent: float = 24.0
    count: int = 1537
    tol: float = 1e-10
    max_iter: int = 500
    damping: float = 0.5
    decay_tol: float = 2e-2

    def __post_init__(self):
        if not 0.0 < self.delta < self.Delta < 0.5:
            raise ValueError("need 0 < delta < Delta < 1/2")
        if not self.delta < self.delta2 < self.Delta2 < 1.0:
            raise ValueError("need delta < delta2 < Delta2 < 1")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.tol <= 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter >= 1")
        LineGrid(0.0, self.half_extent, self.count)

    @property
    def grid(self):
        return LineGrid(0.0, self.half_extent, self.count)

    @property
    def half_lines(self):
        d = self.delta
        return (0.5 + d, 0.5 - d, -(0.5 - d), -(0.5 + d))

    @property
    def one_lines(self):
        d = self.delta2
        return (1 + d, 1 - d, -(1 - d), -(1 + d))


@dataclass(frozen=True)
class Su3NlieState:
    """Auxiliary functions keyed by line offset, plus diagnostics."""

    params: ModelParams
    config: Su3NlieConfig
    eps1: dict = field(repr=False)
    eps2: dict = field(repr=False)
    eps3: dict = field(repr=False)
    eps4: dict = field(repr=False)
    free_energy: float = float("nan")
    iterations: int = 0
    final_residual: float = float("nan")
    history: tuple = field(default=(), repr=False)

    @property
    def T(self):
        return self.params.T


def b_of(p):
    """b = 2cosh(h beta / 2) + 1."""
    return 2.0 * np.cosh(0.5 * p.h * p.beta) + 1.0


def _log_b(p):
    x = abs(0.5 * p.h * p.beta)
    # log(2cosh x + 1) = x + log(1 + e^{-x} + e^{-2x})
    return x + np.log1p(np.exp(-x) + np.exp(-2 * x))


def _log_bm1(p):
    x = abs(0.5 * p.h * p.beta)
    return x + np.log1p(np.exp(-2 * x))


def _log_q(u, p):
    u = np.asarray(u, dtype=complex)
    return 2.0 * p.J * p.beta / (u * u + 0.25)


def xi1_of(u, eps2, eps3, p):
    """ln((q e^{-beta eps2} + (b-1) e^{-beta eps3}) / b)."""
    return log_add_exp(_log_q(u, p) - p.beta * np.asarray(eps2),
                       _log_bm1(p) - p.beta * np.asarray(eps3)) - _log_b(p)


def xi2_of(u, eps1, eps4, p):
    """ln((e^{-beta eps1} + (b-1) e^{-beta eps4}) / b)."""
    del u
    return log_add_exp(-p.beta * np.asarray(eps1, dtype=complex),
                       _log_bm1(p) - p.beta * np.asarray(eps4)) - _log_b(p)


def _ccw(lines, center, shifts, target, grid):
    """(1/2 pi i) ccw contour integral of sum_k xi(v)/(u - v - k i) around ``center``.

    ``lines`` maps line offsets to samples; the contour runs along the
    bottom line ``center - d`` to the right and the top line back.
    """
    offs = sorted((s for s in lines if abs(s - center) < 0.5), reverse=True)
    top, bottom = offs[0], offs[-1]
    total = np.zeros(grid.count, dtype=complex)
    for s, sign in ((top, -1.0), (bottom, +1.0)):
        for k in shifts:
            total += sign * cauchy_apply(lines[s], grid, 1j * (k + s - target))
    return total


def nlie_rhs_1(xi1, targets, p, cfg):
    """ln(q e^{-beta eps2} + (b-1) e^{-beta eps3}) on ``targets`` from xi_1."""
    g = cfg.grid
    return {t: _log_b(p) + _ccw(xi1, 0.5, (0.0, 1.0), t, g) + _ccw(xi1, -0.5, (-1.0, 0.0), t, g)
            for t in targets}


def eps1_from_xi1(xi1, targets, p, cfg):
    """epsbar_1 = -(1/beta) [ccw integrals of xi_1 with kernel shifts +-i/2]."""
    g = cfg.grid
    return {t: -(_ccw(xi1, 0.5, (0.5,), t, g) + _ccw(xi1, -0.5, (-0.5,), t, g)) / p.beta
            for t in targets}


def nlie_rhs_2(xi2, targets, p, cfg):
    """ln(e^{-beta eps1} + (b-1) e^{-beta eps4}) on ``targets`` from xi_2."""
    g = cfg.grid
    return {t: _log_b(p) + _ccw(xi2, 1.0, (0.0, 1.0), t, g) + _ccw(xi2, -1.0, (-1.0, 0.0), t, g)
            for t in targets}


def eps2_from_xi2(xi2, targets, p, cfg):
    """epsbar_2 = -(1/beta) [ccw integrals of xi_2 with kernel shifts +-i/2]."""
    g = cfg.grid
    return {t: -(_ccw(xi2, 1.0, (0.5,), t, g) + _ccw(xi2, -1.0, (-0.5,), t, g)) / p.beta
            for t in targets}


def _strip_shift(plus, minus, c, target, grid):
    return (cauchy_apply(plus, grid, 1j * (c - target))
            - cauchy_apply(minus, grid, 1j * (-c - target)))


def cauchy_shift_su3(eps2, eps3, eps4, cfg, half_targets=None, one_targets=None):
    """Continue eps2, eps3 from +-(1/2+Delta) and eps4 from +-(1+Delta2) inward."""
    g = cfg.grid
    c, c2 = 0.5 + cfg.Delta, 1.0 + cfg.Delta2
    half_targets = cfg.half_lines if half_targets is None else half_targets
    one_targets = cfg.one_lines if one_targets is None else one_targets
    e2 = {t: _strip_shift(eps2[c], eps2[-c], c, t, g) for t in half_targets}
    e3 = {t: _strip_shift(eps3[c], eps3[-c], c, t, g) for t in half_targets}
    e4 = {t: _strip_shift(eps4[c2], eps4[-c2], c2, t, g) for t in one_targets}
    return e2, e3, e4


class _Su3Map:
    def __init__(self, p, cfg):
        self.p, self.cfg = p, cfg
        self.g = cfg.grid
        self.c, self.c2 = 0.5 + cfg.Delta, 1.0 + cfg.Delta2
        self.v = self.g.real_nodes
        self.lbm1 = _log_bm1(p)

    def derived(self, eps2, eps3, eps4):
        """xi_1, eps1 and xi_2 from the iterated functions."""
        cfg, p = self.cfg, self.p
        e2, e3, e4 = cauchy_shift_su3(eps2, eps3, eps4, cfg)
        xi1 = {s: xi1_of(self.v + 1j * s, e2[s], e3[s], p) for s in cfg.half_lines}
        eps1 = eps1_from_xi1(xi1, cfg.one_lines + (self.c2, -self.c2), p, cfg)
        xi2 = {s: xi2_of(None, eps1[s], e4[s], p) for s in cfg.one_lines}
        return xi1, eps1, xi2

    def __call__(self, eps2, eps3, eps4):
        p, cfg = self.p, self.cfg
        xi1, eps1, xi2 = self.derived(eps2, eps3, eps4)
        outer = (self.c, -self.c)
        new2 = eps2_from_xi2(xi2, outer, p, cfg)
        r1 = nlie_rhs_1(xi1, outer, p, cfg)
        new3 = {}
        for t in outer:
            lq = _log_q(self.v + 1j * t, p)
            new3[t] = -(log_add_exp(r1[t], lq - p.beta * new2[t], sign=-1.0) - self.lbm1) / p.beta
        outer2 = (self.c2, -self.c2)
        r2 = nlie_rhs_2(xi2, outer2, p, cfg)
        new4 = {t: -(log_add_exp(r2[t], -p.beta * eps1[t], sign=-1.0) - self.lbm1) / p.beta
                for t in outer2}
        return new2, new3, new4, eps1


def solve_su3(p, cfg=None, warm_start=None):
    """Damped fixed-point iteration of the SU(3) NLIEs."""
    cfg = cfg or Su3NlieConfig()
    if p.J <= 0:
        raise ValueError("J must be positive")
    if p.h != 0 and abs(p.h) * p.beta > 1.0 and cfg.delta < 0.3:
        warnings.warn(f"h/T = {abs(p.h) * p.beta:.2g}: contours may not enclose all eigenvalue "
                      "zeros at this delta", RuntimeWarning, stacklevel=2)
    m = _Su3Map(p, cfg)
    n = m.g.count
    if warm_start is not None and warm_start.config.grid == cfg.grid and \
            set(warm_start.eps4) >= {m.c2, -m.c2} and set(warm_start.eps2) >= {m.c, -m.c}:
        eps2 = {t: np.array(warm_start.eps2[t].values) for t in (m.c, -m.c)}
        eps3 = {t: np.array(warm_start.eps3[t].values) for t in (m.c, -m.c)}
        eps4 = {t: np.array(warm_start.eps4[t].values) for t in (m.c2, -m.c2)}
    else:
        eps2 = {t: np.zeros(n, complex) for t in (m.c, -m.c)}
        eps3 = {t: np.zeros(n, complex) for t in (m.c, -m.c)}
        eps4 = {t: np.zeros(n, complex) for t in (m.c2, -m.c2)}
    w = cfg.damping
    history = []
    for it in range(1, cfg.max_iter + 1):
        new2, new3, new4, _ = m(eps2, eps3, eps4)
        diff = max(max(np.max(np.abs(new[t] - old[t])) for t in old)
                   for new, old in ((new2, eps2), (new3, eps3), (new4, eps4)))
        if not np.isfinite(diff):
            raise ConvergenceError(f"SU(3) NLIE diverged at T={p.T:g}", residual=diff, history=history)
        history.append(float(diff))
        eps2 = {t: (1 - w) * eps2[t] + w * new2[t] for t in eps2}
        eps3 = {t: (1 - w) * eps3[t] + w * new3[t] for t in eps3}
        eps4 = {t: (1 - w) * eps4[t] + w * new4[t] for t in eps4}
        if diff < cfg.tol:
            break
    else:
        raise ConvergenceError(
            f"SU(3) NLIE did not converge at T={p.T:g} after {cfg.max_iter} iterations "
            f"(residual {history[-1]:.3e})", residual=history[-1], history=history)
    state = _package(m, eps2, eps3, eps4, it, history)
    return replace(state, free_energy=free_energy_su3(state, p))


def _package(m, eps2, eps3, eps4, it, history):
    cfg, g = m.cfg, m.g
    _, eps1, _ = m.derived(eps2, eps3, eps4)
    e2, e3, e4 = cauchy_shift_su3(eps2, eps3, eps4, cfg)
    e2.update(eps2)
    e3.update(eps3)
    e4.update(eps4)
    wrap = lambda d: {t: LineFunction(g.at(t), vals) for t, vals in sorted(d.items())}
    state = Su3NlieState(m.p, cfg, wrap(eps1), wrap(e2), wrap(e3), wrap(e4),
                         iterations=it, final_residual=history[-1], history=tuple(history))
    for d in (state.eps2, state.eps3):
        for t in (m.c, -m.c):
            d[t].check_decay(cfg.decay_tol)
    for t in (m.c2, -m.c2):
        state.eps4[t].check_decay(cfg.decay_tol)
    return state


def epsbar_on_real_axis(state):
    """(eps2, eps3) on the real line."""
    cfg = state.config
    c, c2 = 0.5 + cfg.Delta, 1.0 + cfg.Delta2
    raw = lambda d, k: {t: d[t].values for t in (k, -k)}
    e2, e3, _ = cauchy_shift_su3(raw(state.eps2, c), raw(state.eps3, c), raw(state.eps4, c2),
                                 cfg, half_targets=(0.0,), one_targets=())
    return e2[0.0].real, e3[0.0].real


def free_energy_su3(state, p=None):
    """2J - T int ln(b q e^{-beta eps2} + (b^2-b) e^{-beta eps3}) / (2cosh pi v) dv."""
    p = p or state.params
    g = state.config.grid
    v = g.real_nodes
    e2, e3 = epsbar_on_real_axis(state)
    lb = _log_b(p)
    lq = (2.0 * p.J * p.beta / (v * v + 0.25))
    integrand = np.logaddexp(lb + lq - p.beta * e2, lb + _log_bm1(p) - p.beta * e3)
    return float(2.0 * p.J - np.dot(g.weights, integrand * sech_kernel(v)) / p.beta)


def solve_su3_T(T, J=1.0, h=0.0, config=None, warm_start=None, **overrides):
    cfg = config or Su3NlieConfig()
    if overrides:
        cfg = replace(cfg, **overrides)
    return solve_su3(Su3Params.from_T(T, J, h), cfg, warm_start)


def su3_free_energy(T, J=1.0, h=0.0, **overrides):
    return solve_su3_T(T, J, h, **overrides).free_energy
