"""Randomized verification suites over the dense oracle.

Each check returns a :class:`CheckResult`; ``run_suite`` collects them for
a model and a list of Trotter numbers.  Random tuples draw ``u`` from the
unit square around the origin, ``T`` from [0.2, 10] and ``h`` from [0, 2].
"""

from dataclasses import dataclass

import numpy as np

from ..xxx import ModelParams
from .bethe import bae_solve_su3, bae_solve_xxx, tq_lambda_bar, tq_lambda_su3
from .qtm import (TrotterParams, eigen_top, eigenvalue_on, eigenvalue_roots, fused_w_build_xxx,
                  qtm_build_su3, qtm_build_xxx, su3_fused_builds, verify_tw_su3, verify_tw_xxx,
                  xxx_a_d)
from .rmatrix import ETA

__all__ = ["CheckResult", "random_tuples", "commutator_residual", "tq_operator_residual",
           "zero_substitution_residual", "run_suite", "THRESHOLDS"]

THRESHOLDS = {
    "tw": 1e-9,
    "tw-su3": 1e-8,
    "commute": 1e-10,
    "tq": 1e-7,
    "zeros": 1e-8,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    model: str
    N: int
    u: complex
    T: float
    h: float
    residual: float
    threshold: float

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual < self.threshold)


def random_tuples(rng, count, t_range=(0.2, 10.0), h_range=(0.0, 2.0)):
    """``count`` tuples (u, T, h) from a numpy Generator."""
    out = []
    for _ in range(count):
        u = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        out.append((u, float(rng.uniform(*t_range)), float(rng.uniform(*h_range))))
    return out


def commutator_residual(A, B):
    """max|AB - BA| / (max|A| max|B|)."""
    scale = np.max(np.abs(A)) * np.max(np.abs(B))
    return float(np.max(np.abs(A @ B - B @ A)) / scale)


def _xxx_norm(u, tp):
    et = ETA * tp.tau
    return ((u - et + ETA) * (u + et - ETA)) ** tp.M


def _su3_norms(u, tp):
    et = ETA * tp.tau
    return ((u - et + ETA) * (u + et - ETA)) ** tp.M, ((u - et + 1.5 * ETA) * (u + et - 1.5 * ETA)) ** tp.M


def tq_operator_residual(model, tp, p, us):
    """Max relative gap between T-Q eigenvalues at Bethe roots and operator eigenvalues."""
    worst = 0.0
    if model == "xxx":
        _, vec = eigen_top(qtm_build_xxx(0.0, tp, p))
        roots = bae_solve_xxx(tp.M, p)
        for u in us:
            op = eigenvalue_on(lambda x: qtm_build_xxx(x, tp, p), vec, u) / _xxx_norm(u, tp)
            worst = max(worst, abs(op / tq_lambda_bar(u, roots, p) - 1))
        return float(worst)
    _, vec = eigen_top(qtm_build_su3(0.0, tp, p))
    roots = bae_solve_su3(tp, p)
    for u in us:
        n1, n2 = _su3_norms(u, tp)
        op1 = eigenvalue_on(lambda x: qtm_build_su3(x, tp, p), vec, u) / n1
        op2 = eigenvalue_on(lambda x: su3_fused_builds(x, tp, p)["t2"], vec, u) / n2
        worst = max(worst, abs(op1 / tq_lambda_su3(u, roots, p, 1) - 1),
                    abs(op2 / tq_lambda_su3(u, roots, p, 2) - 1))
    return float(worst)


def zero_substitution_residual(tp, p):
    """At every zero z of Lambda: a(z)d(z-eta) + e^{h beta/2} d(z) W(z) = 0 (relative)."""
    _, vec = eigen_top(qtm_build_xxx(0.0, tp, p))
    zs = eigenvalue_roots("xxx", tp, p, "z").values
    x = 0.5 * p.h * p.beta
    worst = 0.0
    for z in zs:
        a, d = xxx_a_d(z, tp, p)
        _, dm = xxx_a_d(z - ETA, tp, p)
        w = eigenvalue_on(lambda v: fused_w_build_xxx(v, tp, p), vec, z)
        first = a * dm
        worst = max(worst, abs(first + np.exp(x) * d * w) / abs(first))
    return float(worst)


def _tq_allowed(tp, p):
    # Bethe continuation needs tau = J beta / M < 1
    return p.J * p.beta < 0.9 * tp.M


def run_suite(model, Ns, seed=0, count=3, J=1.0, w_perturb=0.0):
    """All oracle invariants at ``count`` random tuples per N.

    ``w_perturb`` corrupts the fused operators (negative control).
    """
    rng = np.random.default_rng(seed)
    results = []
    for N in Ns:
        for u, T, h in random_tuples(rng, count):
            p = ModelParams.from_T(T, J, h)
            tp = TrotterParams.from_model(N, p)
            v = u + complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            add = lambda name, r, thr: results.append(CheckResult(name, model, N, u, T, h, r, thr))
            if model == "xxx":
                add("t-W identity", verify_tw_xxx(u, tp, p, w_perturb), THRESHOLDS["tw"])
                t_u = qtm_build_xxx(u, tp, p)
                add("[t(u), t(v)]", commutator_residual(t_u, qtm_build_xxx(v, tp, p)), THRESHOLDS["commute"])
                add("[t(u), W(v)]", commutator_residual(t_u, fused_w_build_xxx(v, tp, p)),
                    THRESHOLDS["commute"])
                if _tq_allowed(tp, p):
                    add("T-Q vs operator", tq_operator_residual("xxx", tp, p, [u]), THRESHOLDS["tq"])
                if N <= 8:
                    add("zeros in a d + d W", zero_substitution_residual(tp, p), THRESHOLDS["zeros"])
            elif model == "su3":
                r1, r2 = verify_tw_su3(u, tp, p, w_perturb)
                add("t-W identity (level 1)", r1, THRESHOLDS["tw-su3"])
                add("t-W identity (level 2)", r2, THRESHOLDS["tw-su3"])
                t_u = qtm_build_su3(u, tp, p)
                f_v = su3_fused_builds(v, tp, p)
                add("[t1(u), t1(v)]", commutator_residual(t_u, qtm_build_su3(v, tp, p)), THRESHOLDS["commute"])
                add("[t1(u), t2(v)]", commutator_residual(t_u, f_v["t2"]), THRESHOLDS["commute"])
                add("[t1(u), W1(v)]", commutator_residual(t_u, f_v["W1"]), THRESHOLDS["commute"])
                if _tq_allowed(tp, p):
                    add("T-Q vs operator", tq_operator_residual("su3", tp, p, [u]), THRESHOLDS["tq"])
            else:
                raise ValueError(f"unknown model {model!r}")
    return results
