"""Line grids, quadrature and Cauchy transforms used by the NLIE solvers.

All integrals run along horizontal lines ``v + i*c`` of the complex plane,
discretized on a uniform grid and integrated with the trapezoid rule.  For
functions analytic in a strip of half-width ``d`` around the line the rule
converges like ``exp(-2*pi*d/h)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft as sfft

from .errors import (
    BranchCutError,
    ConvergenceError,
    ExtentTooSmallError,
    PoleCollisionError,
    SingularJacobianError,
)

__all__ = [
    "LineGrid",
    "LineFunction",
    "trapezoid_integrate",
    "cauchy_transform",
    "cauchy_apply",
    "cosh_convolve",
    "sech_kernel",
    "log_add_exp",
    "newton_solve_system",
]


@dataclass(frozen=True)
class LineGrid:
    """Uniform grid on the line ``Im v = imag_offset``, ``Re v in [-V, V]``."""

    imag_offset: float = 0.0
    half_extent: float = 24.0
    count: int = 1537

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 3 or self.count % 2 == 0:
            raise ValueError(f"grid count must be an odd integer >= 3, got {self.count}")
        if not self.half_extent > 0:
            raise ValueError("half_extent must be positive")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "imag_offset", float(self.imag_offset))
        object.__setattr__(self, "half_extent", float(self.half_extent))

    @property
    def spacing(self):
        return 2.0 * self.half_extent / (self.count - 1)

    @property
    def real_nodes(self):
        return np.linspace(-self.half_extent, self.half_extent, self.count)

    @property
    def points(self):
        return self.real_nodes + 1j * self.imag_offset

    @property
    def weights(self):
        w = np.full(self.count, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def at(self, imag_offset):
        """Same real discretization on another horizontal line."""
        return LineGrid(imag_offset, self.half_extent, self.count)

    def same_nodes(self, other):
        return self.count == other.count and self.half_extent == other.half_extent


@dataclass(frozen=True)
class LineFunction:
    """Samples of a function on the nodes of a :class:`LineGrid`."""

    grid: LineGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.count,):
            raise ValueError(f"expected {self.grid.count} samples, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid, func):
        return cls(grid, func(grid.points))

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def endpoint_ratio(self):
        scale = self.max_abs()
        if scale == 0.0:
            return 0.0
        return float(max(abs(self.values[0]), abs(self.values[-1])) / scale)

    def check_decay(self, rel_bound=1e-12):
        ratio = self.endpoint_ratio()
        if ratio > rel_bound:
            raise ExtentTooSmallError(
                f"line function at Im={self.grid.imag_offset:g} has endpoint/max ratio "
                f"{ratio:.3e} > {rel_bound:.1e}; enlarge the grid extent"
            )
        return ratio

    def __add__(self, other):
        if isinstance(other, LineFunction):
            self._check_same_line(other)
            return LineFunction(self.grid, self.values + other.values)
        return LineFunction(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, LineFunction):
            self._check_same_line(other)
            return LineFunction(self.grid, self.values - other.values)
        return LineFunction(self.grid, self.values - other)

    def __mul__(self, scalar):
        return LineFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def _check_same_line(self, other):
        if self.grid != other.grid:
            raise ValueError("line functions live on different grids")


def trapezoid_integrate(f, rel_bound=1e-12):
    """Integral of ``f`` along its line, ``dv`` measured along the real direction."""
    if rel_bound is not None:
        f.check_decay(rel_bound)
    return complex(np.dot(f.grid.weights, f.values))


@lru_cache(maxsize=256)
def _kernel_spectrum(count, spacing, offset_re, offset_im):
    """FFT of the circulant embedding of t_m = 1/(m h - c), |m| < count."""
    c = complex(offset_re, offset_im)
    m = np.arange(-(count - 1), count)
    t = 1.0 / (m * spacing - c)
    size = sfft.next_fast_len(2 * count - 1)
    col = np.zeros(size, dtype=complex)
    col[:count] = t[count - 1:]
    col[size - count + 1:] = t[:count - 1]
    return sfft.fft(col), size


def _check_collision(count, spacing, c):
    if abs(c.imag) > 1e-12 * max(1.0, spacing):
        return
    m = np.arange(-(count - 1), count)
    dist = np.abs(m * spacing - c.real)
    j = int(np.argmin(dist))
    if dist[j] <= 0.5 * spacing:
        raise PoleCollisionError(
            f"kernel pole at real offset {c.real:g} lies within half a spacing of "
            f"node separation {m[j]}", node=int(m[j]))


def cauchy_apply(values, grid, kernel_offset):
    """Raw-array form of :func:`cauchy_transform` (source and target share nodes)."""
    c = complex(kernel_offset)
    _check_collision(grid.count, grid.spacing, c)
    spec, size = _kernel_spectrum(grid.count, grid.spacing, c.real, c.imag)
    wf = np.zeros(size, dtype=complex)
    wf[:grid.count] = grid.weights * values
    out = sfft.ifft(spec * sfft.fft(wf))[:grid.count]
    return out / (2j * np.pi)


def cauchy_transform(f, kernel_offset, target):
    """g(u) = (1/2 pi i) int dv f(v) / (u - v - kernel_offset).

    ``u`` and ``v`` are the real parts of the target and source nodes; the
    imaginary offsets of both lines are carried by ``kernel_offset``.  The
    discrete sum is a Toeplitz product evaluated with FFTs.
    """
    if not f.grid.same_nodes(target):
        raise ValueError("source and target grids must share real nodes")
    return LineFunction(target, cauchy_apply(f.values, f.grid, kernel_offset))


def sech_kernel(x):
    """1 / (2 cosh(pi x)) without overflow."""
    a = np.exp(-np.pi * np.abs(np.asarray(x, dtype=float)))
    return a / (1.0 + a * a)


def cosh_convolve(f, u):
    """int dv f(v) / (2 cosh(pi (u - v))) at real point(s) ``u``."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    v = f.grid.real_nodes
    k = sech_kernel(u_arr[:, None] - v[None, :])
    out = k @ (f.grid.weights * f.values)
    return out[0] if np.ndim(u) == 0 else out


def log_add_exp(x1, x2, sign=1.0, guard=0.1):
    """log(exp(x1) + sign*exp(x2)) with the larger term factored out.

    The result is ``x_dom + log1p(z)`` with ``|z| <= 1`` and the principal
    branch of log1p, so the phase carried by the continuous logarithms
    ``x1`` and ``x2`` is kept.  Since ``|z| <= 1`` the remainder ``1 + z``
    only reaches the branch cut where it vanishes; :class:`BranchCutError`
    is raised when it lies within ``guard`` radians of the negative real
    axis or cancels to below 1e-13 (rounding noise).
    """
    y1 = np.asarray(x1, dtype=complex)
    y2 = np.asarray(x2, dtype=complex) + np.log(complex(sign))
    dom = y1.real >= y2.real
    base = np.where(dom, y1, y2)
    w = 1.0 + np.exp(np.where(dom, y2 - y1, y1 - y2))
    bad = (np.abs(np.angle(w)) > np.pi - guard) | (np.abs(w) < 1e-13)
    if np.any(bad):
        node = int(np.flatnonzero(np.ravel(bad))[0])
        raise BranchCutError(
            f"log argument within {guard} rad of the branch cut at node {node}", node=node)
    return base + np.log(w)


def _fd_jacobian(residual, x, r0, step):
    n = x.size
    jac = np.empty((r0.size, n), dtype=np.result_type(x, r0))
    for j in range(n):
        h = step * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        jac[:, j] = (residual(xp) - r0) / h
    return jac


def newton_solve_system(residual, x0, jacobian=None, tol=1e-12, max_iter=50,
                        fd_step=1e-7, min_step=1e-6):
    """Damped Newton iteration for ``residual(x) = 0``.

    Works for real or complex ``x``; a complex ``x`` with a finite-difference
    Jacobian assumes the residual is holomorphic.  A backtracking step halving
    keeps the residual norm from growing.  Returns the solution vector.
    """
    x = np.array(x0, dtype=np.result_type(np.asarray(x0), float), copy=True)
    r = np.asarray(residual(x))
    norm = float(np.linalg.norm(r, np.inf))
    history = [norm]
    for _ in range(max_iter):
        if not np.isfinite(norm):
            raise ConvergenceError("residual became non-finite", residual=norm, history=history)
        if norm < tol:
            return x
        jac = jacobian(x) if jacobian is not None else _fd_jacobian(residual, x, r, fd_step)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError(f"singular Jacobian: {exc}") from exc
        if not np.all(np.isfinite(dx)):
            raise SingularJacobianError("Newton step is not finite")
        lam = 1.0
        while True:
            x_new = x + lam * dx
            r_new = np.asarray(residual(x_new))
            n_new = float(np.linalg.norm(r_new, np.inf))
            if np.isfinite(n_new) and (n_new < norm or lam <= min_step):
                break
            lam *= 0.5
        x, r, norm = x_new, r_new, n_new
        history.append(norm)
    if norm < tol:
        return x
    raise ConvergenceError(f"Newton did not converge: residual {norm:.3e}", residual=norm, history=history)
