"""Finite-temperature free energy of the spin-1/2 XXX and SU(3) chains.

The NLIE solvers live in :mod:`tw_thermo.xxx` and :mod:`tw_thermo.su3`, the
high-temperature expansions in :mod:`tw_thermo.hte`, and the exact small-N
transfer-matrix, Bethe-ansatz and diagonalization oracles in
:mod:`tw_thermo.oracle`.
"""

from .errors import (BranchCutError, ConvergenceError, DimensionError, ExtentTooSmallError,
                     PoleCollisionError, SingularJacobianError, TwThermoError)
from .hte import HteResult, hte_su3, hte_xxx
from .su3 import Su3NlieConfig, Su3Params, solve_su3, su3_free_energy
from .xxx import ModelParams, XxxNlieConfig, solve, solve_xxx, xxx_free_energy

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "XxxNlieConfig", "solve", "solve_xxx", "xxx_free_energy",
    "Su3Params", "Su3NlieConfig", "solve_su3", "su3_free_energy",
    "HteResult", "hte_xxx", "hte_su3",
    "TwThermoError", "ConvergenceError", "SingularJacobianError", "ExtentTooSmallError",
    "PoleCollisionError", "BranchCutError", "DimensionError",
]
