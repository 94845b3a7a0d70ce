"""Rational R-matrices with crossing parameter eta = i and their fusion.

Local operators are stored as arrays ``L[a, b, i, j]``: the (a, b) block in
the auxiliary space is an operator on one quantum site.  For ``R = u + eta*P``
the block is ``u*delta_ab + eta*E^{ba}``.
"""

import numpy as np

ETA = 1j

__all__ = ["ETA", "permutation", "r_matrix_xxx", "r_matrix_su3", "r_blocks", "rt_blocks",
           "sym_antisym_isometries", "fuse_pair", "fused_r_xxx", "fused_r_xxx_printed",
           "blocks_to_matrix"]


def permutation(d):
    """Swap operator on C^d (x) C^d."""
    P = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            P[b * d + a, a * d + b] = 1.0
    return P


def r_matrix_xxx(u):
    u = complex(u)
    return np.array([[u + ETA, 0, 0, 0],
                     [0, u, ETA, 0],
                     [0, ETA, u, 0],
                     [0, 0, 0, u + ETA]], dtype=complex)


def r_matrix_su3(u):
    return complex(u) * np.eye(9) + ETA * permutation(3)


def r_blocks(u, d):
    """Blocks of R_{0k}(u) = u + eta*P_{0k}."""
    L = np.zeros((d, d, d, d), dtype=complex)
    for a in range(d):
        L[a, a] += u * np.eye(d)
        for b in range(d):
            L[a, b, b, a] += ETA
    return L


def rt_blocks(u, d):
    """Blocks of R_{0k}(u) transposed in the quantum space: u + eta*P^t."""
    L = np.zeros((d, d, d, d), dtype=complex)
    for a in range(d):
        L[a, a] += u * np.eye(d)
        for b in range(d):
            L[a, b, a, b] += ETA
    return L


def blocks_to_matrix(L):
    """Dense matrix on aux (x) site from blocks."""
    da, _, d, _ = L.shape
    return np.einsum("abij->aibj", L).reshape(da * d, da * d)


def sym_antisym_isometries(d):
    """Orthonormal bases (columns) of the symmetric and antisymmetric subspaces.

    The symmetric basis is ordered |aa>, (|ab>+|ba>)/sqrt2 for a < b, row by row;
    for d = 2 this is {|11>, (|12>+|21>)/sqrt2, |22>}.
    """
    sym, anti = [], []
    for a in range(d):
        for b in range(a, d):
            v = np.zeros(d * d)
            if a == b:
                v[a * d + a] = 1.0
                sym.append(v)
                continue
            v[a * d + b] = v[b * d + a] = 1 / np.sqrt(2)
            sym.append(v)
            w = np.zeros(d * d)
            w[a * d + b], w[b * d + a] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            anti.append(w)
    return np.array(sym).T, np.array(anti).T


def fuse_pair(L_hi, L_lo, V):
    """Projected blocks of L_2(hi) L_1(lo) on the subspace spanned by ``V``.

    Aux space 1 is the major index of the doubled aux space.  Returns blocks
    of shape (k, k, d, d) with k = V.shape[1].
    """
    da = L_hi.shape[0]
    # (L_2 L_1)[(a1 a2), (c1 c2)] = L_hi[a2, c2] @ L_lo[a1, c1]
    M = np.einsum("ycij,xzjk->xyzcik", L_hi, L_lo).reshape(da * da, da * da, *L_hi.shape[2:])
    return np.einsum("ai,abxy,bj->ijxy", V.conj(), M, V)


def fused_r_xxx(u):
    """P+ R_23(u) R_13(u - eta) P+ / u on Sym^2(C^2) (x) C^2, as a 6x6 matrix."""
    Vs, _ = sym_antisym_isometries(2)
    blocks = fuse_pair(r_blocks(u, 2), r_blocks(u - ETA, 2), Vs) / u
    return blocks_to_matrix(blocks)


def fused_r_xxx_printed(u, offdiag=np.sqrt(2) * ETA):
    """Closed form of the spin-1 (x) spin-1/2 fused R-matrix.

    The literature form shows ``sqrt(2)`` off the diagonal; the projection
    gives ``sqrt(2)*eta``, which is the default here.
    """
    u = complex(u)
    R = np.zeros((6, 6), dtype=complex)
    R[0, 0] = R[5, 5] = u + ETA
    R[1, 1] = R[4, 4] = u - ETA
    R[2, 2] = R[3, 3] = u
    R[1, 2] = R[2, 1] = R[3, 4] = R[4, 3] = offdiag
    return R
