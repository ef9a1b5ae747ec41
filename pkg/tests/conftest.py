"""Shared generators for the definite structured classes."""

import numpy as np

from nospillover.linalg import eig_pencil
from nospillover.pencil import (
    HERMITIAN,
    STAR_EVEN,
    STAR_ODD,
    T_EVEN,
    T_ODD,
    StructuredPencil,
)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _split(eigs, p, key=None):
    eigs = sorted(eigs, key=key) if key else list(eigs)
    change, fixed = eigs[:p], eigs[p:]
    xc = np.hstack([e.vector.reshape(-1, 1) for e in change])
    lam_c = np.array([e.value for e in change])
    xf = np.hstack([e.vector.reshape(-1, 1) for e in fixed])
    lam_f = np.array([e.value for e in fixed])
    return xc, lam_c, xf, lam_f


def plant_hermitian_definite(seed, n=6, p=2):
    """Hermitian pencil with M > 0; returns pencil and split eigendata."""
    rng = np.random.default_rng([seed, 1])
    b = crandn(rng, n, n)
    m = b @ b.conj().T + n * np.eye(n)
    h = crandn(rng, n, n)
    k = h + h.conj().T
    pencil = StructuredPencil(m, k, HERMITIAN)
    return (pencil,) + _split(eig_pencil(m, k), p, key=lambda e: e.value.real)


def plant_hermitian_definite_pd_k(seed, n=6, p=2):
    """Hermitian pencil with M > 0 and K > 0 (all eigenvalues negative)."""
    rng = np.random.default_rng([seed, 2])
    b = crandn(rng, n, n)
    m = b @ b.conj().T + n * np.eye(n)
    c = crandn(rng, n, n)
    k = c @ c.conj().T + n * np.eye(n)
    pencil = StructuredPencil(m, k, HERMITIAN)
    return (pencil,) + _split(eig_pencil(m, k), p, key=lambda e: e.value.real)


def plant_star_odd(seed, n=6, p=2):
    """star-odd pencil with M > 0; eigenvalues purely imaginary."""
    rng = np.random.default_rng([seed, 3])
    b = crandn(rng, n, n)
    m = b @ b.conj().T + n * np.eye(n)
    c = crandn(rng, n, n)
    k = (c - c.conj().T) / 2
    pencil = StructuredPencil(m, k, STAR_ODD)
    return (pencil,) + _split(eig_pencil(m, k), p, key=lambda e: e.value.imag)


def plant_star_even(seed, n=6, p=2):
    """star-even pencil with K > 0; eigenvalues purely imaginary nonzero."""
    rng = np.random.default_rng([seed, 4])
    a = crandn(rng, n, n)
    m = (a - a.conj().T) / 2
    b = crandn(rng, n, n)
    k = b @ b.conj().T + n * np.eye(n)
    pencil = StructuredPencil(m, k, STAR_EVEN)
    return (pencil,) + _split(eig_pencil(m, k), p, key=lambda e: e.value.imag)


def plant_t_odd_real(seed, n=6, pairs=1):
    """Real T-odd pencil with M > 0; returns conjugate-pair eigendata.

    Gives (pencil, change_eigenpairs, fixed_eigs) where change_eigenpairs
    holds one (lam, x) per chosen conjugate pair (im(lam) > 0) and
    fixed_eigs the remaining eigenpairs.
    """
    rng = np.random.default_rng([seed, 5])
    b = rng.standard_normal((n, n))
    m = b @ b.T + n * np.eye(n)
    c = rng.standard_normal((n, n))
    k = c - c.T
    pencil = StructuredPencil(m, k, T_ODD)
    eigs = [e for e in eig_pencil(m, k) if e.finite]
    ups = sorted(
        [e for e in eigs if e.value.imag > 1e-8], key=lambda e: -e.value.imag
    )
    chosen = ups[:pairs]
    chosen_vals = {id(e) for e in chosen}
    partners = []
    for e in chosen:
        for f in eigs:
            if abs(f.value - np.conj(e.value)) <= 1e-8 * (1 + abs(e.value)):
                partners.append(f)
                break
    fixed = [
        e
        for e in eigs
        if id(e) not in chosen_vals and all(e is not f for f in partners)
    ]
    change = [(e.value, e.vector.reshape(-1, 1)) for e in chosen]
    return pencil, change, fixed


def plant_t_even_real(seed, n=6, pairs=1):
    """Real T-even pencil with K > 0 (n must be even)."""
    rng = np.random.default_rng([seed, 6])
    a = rng.standard_normal((n, n))
    m = a - a.T
    b = rng.standard_normal((n, n))
    k = b @ b.T + n * np.eye(n)
    pencil = StructuredPencil(m, k, T_EVEN)
    eigs = [e for e in eig_pencil(m, k) if e.finite]
    ups = sorted(
        [e for e in eigs if e.value.imag > 1e-8], key=lambda e: -e.value.imag
    )
    chosen = ups[:pairs]
    partners = []
    for e in chosen:
        for f in eigs:
            if abs(f.value - np.conj(e.value)) <= 1e-8 * (1 + abs(e.value)):
                partners.append(f)
                break
    fixed = [
        e
        for e in eigs
        if all(e is not c for c in chosen) and all(e is not f for f in partners)
    ]
    change = [(e.value, e.vector.reshape(-1, 1)) for e in chosen]
    return pencil, change, fixed


def spillover_residual(pencil, delta_m, delta_k, fixed_eigs):
    """Relative fixed-pair residual of the updated pencil."""
    from nospillover.linalg import fnorm

    xf = np.hstack([e.vector.reshape(-1, 1) for e in fixed_eigs])
    lf = np.diag([e.value for e in fixed_eigs])
    m1, k1 = pencil.m + delta_m, pencil.k + delta_k
    return fnorm(m1 @ xf @ lf + k1 @ xf) / (fnorm(m1) * (1 + fnorm(lf)) + fnorm(k1))
