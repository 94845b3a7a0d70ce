"""Exact diagonalization of short periodic chains.

Both models are permutation Hamiltonians ``H = c sum_j P_{j,j+1} + const +
(h/2) sum_j w(s_j)`` with a diagonal field.  The number of sites in each
local state is conserved, so the Hamiltonian is diagonalized one
occupation sector at a time.
"""

from itertools import product

import numpy as np

from ..errors import DimensionError

__all__ = ["permutation_spectrum", "xxx_spectrum", "su3_spectrum", "free_energy_from_spectrum",
           "ed_free_energy", "ed_free_energy_chain"]

MAX_STATES = 6561


def _sector_blocks(L, d):
    idx = np.arange(d ** L)
    digits = np.array([(idx // d ** k) % d for k in range(L)])
    counts = np.stack([(digits == s).sum(0) for s in range(d)])
    key = np.zeros(d ** L, dtype=np.int64)
    for s in range(d):
        key = key * (L + 1) + counts[s]
    return idx, digits, key


def permutation_spectrum(L, d, coupling, field_weights, h, offset=0.0):
    """All eigenvalues of ``coupling * sum P + (h/2) sum w + offset*L``."""
    if L < 2:
        raise ValueError("need at least two sites")
    if d ** L > MAX_STATES:
        raise DimensionError(f"{d}^{L} states exceed the dense limit {MAX_STATES}")
    idx, digits, key = _sector_blocks(L, d)
    w = np.asarray(field_weights, dtype=float)
    diag = 0.5 * h * w[digits].sum(0) + offset * L
    eigs = []
    for k in np.unique(key):
        members = idx[key == k]
        pos = {int(s): n for n, s in enumerate(members)}
        H = np.diag(diag[members]).astype(float)
        for i in range(L):
            j = (i + 1) % L
            di, dj = digits[i][members], digits[j][members]
            swapped = members + (dj - di) * d ** i + (di - dj) * d ** j
            rows = np.fromiter((pos[int(s)] for s in swapped), dtype=int, count=members.size)
            np.add.at(H, (rows, np.arange(members.size)), coupling)
        eigs.append(np.linalg.eigvalsh(H))
    return np.sort(np.concatenate(eigs))


def xxx_spectrum(L, J=1.0, h=0.0):
    """``J sum sigma.sigma + (h/2) sum sigma^z``, using ``sigma.sigma = 2P - 1``."""
    return permutation_spectrum(L, 2, 2.0 * J, (1.0, -1.0), h, offset=-J)


def su3_spectrum(L, J=1.0, h=0.0):
    """``J sum P + (h/2) sum S^z`` with ``S^z = diag(1, 0, -1)``."""
    return permutation_spectrum(L, 3, J, (1.0, 0.0, -1.0), h)


def free_energy_from_spectrum(energies, T, L):
    e = np.asarray(energies, dtype=float)
    e0 = e.min()
    return float((e0 - T * np.log(np.sum(np.exp(-(e - e0) / T)))) / L)


def ed_free_energy(model, L, T, J=1.0, h=0.0):
    if model == "xxx":
        return free_energy_from_spectrum(xxx_spectrum(L, J, h), T, L)
    if model == "su3":
        return free_energy_from_spectrum(su3_spectrum(L, J, h), T, L)
    raise ValueError(f"unknown model {model!r}")


def ed_free_energy_chain(L, T, h, model, J=1.0):
    """Free energy per site of the periodic chain of length ``L``.

    ``model="su3"`` uses ``J sum P``; compare with the NLIE at coupling J/2.
    """
    return ed_free_energy(model, L, T, J, h)


def brute_force_spectrum(L, d, coupling, field_weights, h, offset=0.0):
    """Unblocked construction from Kronecker products (test reference)."""
    D = d ** L
    w = np.asarray(field_weights, dtype=float)
    H = np.zeros((D, D))
    for n, state in enumerate(product(range(d), repeat=L)):
        s = state[::-1]
        H[n, n] += 0.5 * h * w[list(s)].sum() + offset * L
        for i in range(L):
            j = (i + 1) % L
            t = list(s)
            t[i], t[j] = t[j], t[i]
            m = sum(t[k] * d ** k for k in range(L))
            H[m, n] += coupling
    return np.linalg.eigvalsh(H)
