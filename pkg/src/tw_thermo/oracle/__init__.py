"""Exact small-N oracles: dense transfer matrices, Bethe roots and diagonalization."""

from .bethe import (bae_free_energy_xxx, bae_solve_su3, bae_solve_xxx, tq_lambda_bar, tq_lambda_su3,
                    xxx_eigen_zeros)
from .ed import ed_free_energy, ed_free_energy_chain
from .qtm import (RootSet, TrotterParams, eigen_top, eigenvalue_roots, fused_w_build_xxx, qtm_build_su3,
                  qtm_build_xxx, su3_fused_builds, verify_tw_su3, verify_tw_xxx)
from .rmatrix import r_matrix_su3, r_matrix_xxx

__all__ = [
    "TrotterParams", "RootSet", "r_matrix_xxx", "r_matrix_su3",
    "qtm_build_xxx", "fused_w_build_xxx", "verify_tw_xxx",
    "qtm_build_su3", "su3_fused_builds", "verify_tw_su3",
    "eigen_top", "eigenvalue_roots",
    "bae_solve_xxx", "tq_lambda_bar", "bae_free_energy_xxx", "xxx_eigen_zeros",
    "bae_solve_su3", "tq_lambda_su3",
    "ed_free_energy", "ed_free_energy_chain",
]
