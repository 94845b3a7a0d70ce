"""High-temperature expansions of the free energy to order 1/T^2.

``hte_xxx`` is for ``H = J sum sigma.sigma + (h/2) sum sigma^z``.
``hte_su3`` is for the SU(3) chain as described by the NLIE with coupling
``J``, i.e. ``H = 2J sum P + (h/2) sum S^z``.  Both come from expanding the
NLIE to second order and agree with exact diagonalization of short chains
up to a residual that scales like 1/T^3.

The literature forms are kept as ``hte_xxx_printed`` and
``hte_su3_printed`` for comparison; they do not match the exact free
energy (see the package README).

The expansion functions of the auxiliary functions, ``epsbar = e1 + beta*e2
+ ...``, are provided by ``hte_eps_xxx`` and ``hte_eps_su3``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["HteResult", "hte_xxx", "hte_su3", "hte_xxx_printed", "hte_su3_printed",
           "hte_eps_xxx", "hte_eps_su3"]


@dataclass(frozen=True)
class HteResult:
    """f/T and its contributions at orders beta^0, beta^1, beta^2."""

    T: float
    terms: tuple

    @property
    def f_over_T(self):
        return float(sum(self.terms))

    @property
    def f(self):
        return self.T * self.f_over_T


def _check_T(T):
    if not T > 0:
        raise ValueError("temperature must be positive")


def _log_2cosh(x):
    ax = abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


def hte_xxx(T, h=0.0, J=1.0):
    """f/T = -ln 2cosh(h/2T) + (J/T) tanh^2(h/2T) - (3/2)(J/T)^2 (1 - tanh^4(h/2T))."""
    _check_T(T)
    t = np.tanh(h / (2.0 * T))
    k = J / T
    return HteResult(T, (-_log_2cosh(h / (2.0 * T)), k * t * t, -1.5 * k * k * (1.0 - t ** 4)))


def hte_su3(T, h=0.0, J=1.0):
    """f/T = -ln b + (2J/T)(1 - 2/b) - 2(J/T)^2 (1 + 2 s3 - 3 s2^2).

    ``b = 2cosh(h/2T) + 1`` and ``s_n = sum_a p_a^n`` with the single-site
    weights ``p = (e^x, 1, e^-x)/b``, ``x = h/2T``.
    """
    _check_T(T)
    x = h / (2.0 * T)
    b = 2.0 * np.cosh(x) + 1.0
    p = np.array([np.exp(x), 1.0, np.exp(-x)]) / b
    s2, s3 = np.sum(p ** 2), np.sum(p ** 3)
    k = J / T
    return HteResult(T, (-np.log(b), 2.0 * k * (1.0 - 2.0 / b),
                         -2.0 * k * k * (1.0 + 2.0 * s3 - 3.0 * s2 * s2)))


def hte_xxx_printed(T, h=0.0, J=1.0):
    """Literature form with argument h/T and a minus sign on the J term."""
    _check_T(T)
    t = np.tanh(h / T)
    k = J / T
    return HteResult(T, (-_log_2cosh(h / T), -k * t * t, -1.5 * k * k * (1.0 - t ** 4)))


def hte_su3_printed(T, h=0.0, J=1.0):
    """Literature form: -ln b + (J/T) 4/b - (J/T)^2 24 cosh(h/2T)/b^2."""
    _check_T(T)
    c = np.cosh(h / (2.0 * T))
    b = 2.0 * c + 1.0
    k = J / T
    return HteResult(T, (-np.log(b), 4.0 * k / b, -24.0 * k * k * c / b ** 2))


def _guard(u, poles):
    u = np.asarray(u, dtype=complex)
    for z in poles:
        if np.any(np.abs(u - z) < 1e-12):
            raise ZeroDivisionError(f"expansion function has a pole at u = {z}")
    return u


def hte_eps_xxx(u, order, T, h=0.0, J=1.0):
    """Expansion functions of the XXX epsbar, a = 4cosh^2(h/2T) - 1.

    order 1: -(1/a) 6J/(u^2+9/4)
    order 2: -(9(a - 1/a)(2J/(u^2+9/4))^2 + 4(a-3)(2J)^2/(u^2+9/4)) / (2(a^2+a))
    """
    u = _guard(u, (1.5j, -1.5j))
    a = 4.0 * np.cosh(h / (2.0 * T)) ** 2 - 1.0
    r = 1.0 / (u * u + 2.25)
    if order == 1:
        return -(6.0 * J / a) * r
    if order == 2:
        return -(9.0 * (a - 1.0 / a) * (2.0 * J * r) ** 2 + 4.0 * (a - 3.0) * (2.0 * J) ** 2 * r) \
            / (2.0 * (a * a + a))
    raise ValueError("order must be 1 or 2")


def hte_eps_su3(u, index, order, T, h=0.0, J=1.0):
    """Expansion functions of the SU(3) epsbar_index, b = 2cosh(h/2T) + 1.

    Order 1 (checked against the NLIE solver, error O(beta)):
      e1 = -(4J/b)/(u^2+1), e2 = -(6J/b^2)/(u^2+9/4),
      e3 = -(6J(b+1)/b^2)/(u^2+9/4), e4 = -(8J/(b(b-1)))/(u^2+4).
    Order 2 returns the literature closed forms.  They were derived from an
    order-1 input with e2 = e3 = -(6J/b)/(u^2+9/4) and do not match the
    solver; they are provided for reference only.
    """
    if index not in (1, 2, 3, 4):
        raise ValueError("index must be 1..4")
    poles = {1: (1j, -1j), 2: (1.5j, -1.5j), 3: (1.5j, -1.5j), 4: (2j, -2j)}[index]
    u = _guard(u, poles)
    b = 2.0 * np.cosh(h / (2.0 * T)) + 1.0
    u2 = u * u
    if order == 1:
        return {1: -(4.0 * J / b) / (u2 + 1.0),
                2: -(6.0 * J / b ** 2) / (u2 + 2.25),
                3: -(6.0 * J * (b + 1.0) / b ** 2) / (u2 + 2.25),
                4: -(8.0 * J / (b * (b - 1.0))) / (u2 + 4.0)}[index]
    if order != 2:
        raise ValueError("order must be 1 or 2")
    J2 = (2.0 * J) ** 2
    if index == 1:
        return -(b - 1.0) / (2 * b * b) * (4.0 / (u2 + 1.0) ** 2 + 2.0 / (u2 + 1.0)) * J2
    if index == 2:
        return -1.0 / (2 * b ** 4) * (9 * (b * b - 1) / (u2 + 2.25) ** 2
                                      + (4 * b * b - 3 * b - 9) / (u2 + 2.25)) * J2
    if index == 3:
        return -1.0 / (2 * b ** 4) * (9 * (b ** 3 - b - 1) / (u2 + 2.25) ** 2
                                      + (4 * b ** 4 - 4 * b ** 3 - 4 * b * b + 3 * b + 9)
                                      / ((b - 1) * (u2 + 2.25))) * J2
    return -1.0 / (2 * (b ** 3 - b * b)) * (16 * (b * b - b - 1) / ((b - 1) * (u2 + 4) ** 2)
                                            + 2 * (3 * b * b - 2 * b - 9) / (b * (u2 + 4))) * J2
