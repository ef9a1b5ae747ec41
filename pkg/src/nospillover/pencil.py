"""Structured pencils lambda*M + K and deflating-pair algebra.

A pencil has (star, eps1, eps2)-structure when M^star = eps1*M and
K^star = eps2*K with star in {transpose, conjugate-transpose}. Deflating
pairs (X, Lambda) satisfy M X Lambda + K X = 0 with X of full column rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    BadCompletionBasis,
    DimensionMismatch,
    IsotropicVector,
    MissingStar,
    NotEigenpair,
    NotPositiveDefinite,
    RealEigenvalue,
    SingularG1,
    SingularM,
)
from .linalg import (
    EIG_MATCH_TOL,
    TAU_DEFL,
    TAU_NUM,
    TAU_STRUCT,
    as_matrix,
    fnorm,
    match_multisets,
    require_square,
)

STAR_CONJ = "*"
STAR_TRANS = "T"


def star(a: np.ndarray, which: str) -> np.ndarray:
    """A^star: conjugate transpose for '*', plain transpose for 'T'."""
    if which == STAR_CONJ:
        return a.conj().T
    if which == STAR_TRANS:
        return a.T
    raise ValueError(f"unknown adjoint type {which!r}")


def star_scalar(z: complex, which: str) -> complex:
    return np.conj(z) if which == STAR_CONJ else z


@dataclass(frozen=True)
class StructureTag:
    """One of the six symmetry classes (star, eps1, eps2)."""

    star: str
    eps1: int
    eps2: int

    def __post_init__(self):
        if self.star not in (STAR_CONJ, STAR_TRANS):
            raise ValueError(f"star must be '*' or 'T', got {self.star!r}")
        if self.eps1 not in (-1, 1) or self.eps2 not in (-1, 1):
            raise ValueError("eps1 and eps2 must be +1 or -1")

    @property
    def name(self) -> str:
        return _TAG_NAMES[self]


SYMMETRIC = StructureTag(STAR_TRANS, 1, 1)
HERMITIAN = StructureTag(STAR_CONJ, 1, 1)
T_ODD = StructureTag(STAR_TRANS, 1, -1)
STAR_ODD = StructureTag(STAR_CONJ, 1, -1)
T_EVEN = StructureTag(STAR_TRANS, -1, 1)
STAR_EVEN = StructureTag(STAR_CONJ, -1, 1)

ALL_TAGS = (SYMMETRIC, HERMITIAN, T_ODD, STAR_ODD, T_EVEN, STAR_EVEN)

_TAG_NAMES = {
    SYMMETRIC: "symmetric",
    HERMITIAN: "hermitian",
    T_ODD: "t-odd",
    STAR_ODD: "star-odd",
    T_EVEN: "t-even",
    STAR_EVEN: "star-even",
}

TAG_BY_NAME = {name: tag for tag, name in _TAG_NAMES.items()}


def structure_residuals(m: np.ndarray, k: np.ndarray, tag: StructureTag):
    """Relative symmetry residuals (for M and K) under the given tag."""
    rm = fnorm(star(m, tag.star) - tag.eps1 * m) / max(fnorm(m), 1e-300)
    rk = fnorm(star(k, tag.star) - tag.eps2 * k) / max(fnorm(k), 1e-300)
    return rm, rk


def classify_structure(m, k, tol: float = TAU_STRUCT) -> list[StructureTag]:
    """All structure tags whose symmetry residuals pass the tolerance."""
    m = require_square(as_matrix(m, "M"), "M")
    k = as_matrix(k, "K")
    if k.shape != m.shape:
        raise DimensionMismatch(f"M is {m.shape} but K is {k.shape}")
    found = []
    for tag in ALL_TAGS:
        rm, rk = structure_residuals(m, k, tag)
        if rm <= tol and rk <= tol:
            found.append(tag)
    return found


@dataclass(frozen=True)
class StructuredPencil:
    """Square pencil lambda*M + K with an optional structure tag."""

    m: np.ndarray
    k: np.ndarray
    tag: StructureTag | None = None

    def __post_init__(self):
        m = require_square(as_matrix(self.m, "M"), "M")
        k = as_matrix(self.k, "K")
        if k.shape != m.shape:
            raise DimensionMismatch(f"M is {m.shape} but K is {k.shape}")
        if self.tag is not None:
            rm, rk = structure_residuals(m, k, self.tag)
            if rm > TAU_STRUCT or rk > TAU_STRUCT:
                raise ValueError(
                    f"pencil does not have {self.tag.name} structure "
                    f"(residuals {rm:.2e}, {rk:.2e})"
                )
        m.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "k", k)

    @property
    def n(self) -> int:
        return self.m.shape[0]

    @property
    def star(self) -> str:
        if self.tag is None:
            raise MissingStar("pencil is unstructured; supply an adjoint type")
        return self.tag.star

    def eig(self):
        return linalg.eig_pencil(self.m, self.k)

    def scale(self) -> float:
        return fnorm(self.m) + fnorm(self.k)


@dataclass(frozen=True)
class DeflatingPair:
    """(X, Lambda) with M X Lambda + K X = 0; Lambda need not be diagonal."""

    x: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        x = as_matrix(self.x, "X")
        lam = require_square(as_matrix(self.lam, "Lambda"), "Lambda")
        if lam.shape[0] != x.shape[1]:
            raise DimensionMismatch(
                f"X has {x.shape[1]} columns but Lambda is {lam.shape}"
            )
        if x.shape[1] > 0 and linalg.rcond_estimate(x) <= TAU_NUM:
            raise DimensionMismatch("X is column rank deficient")
        x.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "lam", lam)

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.lam)


@dataclass(frozen=True)
class ResidualReport:
    absolute: float
    relative: float
    scale: float
    tol: float = TAU_DEFL

    @property
    def passed(self) -> bool:
        return self.relative <= self.tol


def deflation_residual(
    pencil: StructuredPencil, pair: DeflatingPair, tol: float = TAU_DEFL
) -> ResidualReport:
    """Residual ||M X Lambda + K X||_F, absolute and relative.

    The relative scale is ||M|| ||X|| ||Lambda|| + ||K|| ||X||.
    """
    if pair.x.shape[0] != pencil.n:
        raise DimensionMismatch(
            f"X has {pair.x.shape[0]} rows but pencil has size {pencil.n}"
        )
    res = fnorm(pencil.m @ pair.x @ pair.lam + pencil.k @ pair.x)
    scale = fnorm(pencil.m) * fnorm(pair.x) * fnorm(pair.lam) + fnorm(
        pencil.k
    ) * fnorm(pair.x)
    return ResidualReport(res, res / max(scale, 1e-300), scale, tol)


def gramians(pencil: StructuredPencil, x1, x2, adjoint: str | None = None):
    """(G12, F12) = (X1^star M X2, X1^star K X2).

    The adjoint comes from the pencil tag; for an unstructured pencil an
    explicit ``adjoint`` override is required.
    """
    x1 = as_matrix(x1, "X1")
    x2 = as_matrix(x2, "X2")
    if x1.shape[0] != pencil.n or x2.shape[0] != pencil.n:
        raise DimensionMismatch("X1/X2 row counts must equal the pencil size")
    which = adjoint if adjoint is not None else pencil.star
    x1s = star(x1, which)
    return x1s @ pencil.m @ x2, x1s @ pencil.k @ x2


def rayleigh_eigenvalue(pencil: StructuredPencil, x, adjoint: str | None = None) -> complex:
    """Rayleigh estimate -x^star K x / x^star M x.

    Raises IsotropicVector when x^star M x vanishes at tolerance (the
    orthogonality regime where the quotient carries no information).
    """
    x = as_matrix(x, "x")
    if x.shape != (pencil.n, 1):
        raise DimensionMismatch("x must be a single column of pencil size")
    which = adjoint if adjoint is not None else (
        pencil.tag.star if pencil.tag is not None else STAR_CONJ
    )
    xs = star(x, which)
    den = complex((xs @ pencil.m @ x)[0, 0])
    scale = fnorm(pencil.m) * float(np.linalg.norm(x)) ** 2
    if abs(den) <= TAU_NUM * max(scale, 1e-300):
        raise IsotropicVector("x^star M x vanishes; Rayleigh quotient undefined")
    num = complex((xs @ pencil.k @ x)[0, 0])
    return -num / den


def _check_eigenpair(pencil: StructuredPencil, lam: complex, x: np.ndarray):
    res = fnorm(pencil.m @ x * lam + pencil.k @ x)
    scale = (abs(lam) * fnorm(pencil.m) + fnorm(pencil.k)) * float(
        np.linalg.norm(x)
    )
    if res > TAU_DEFL * max(scale, 1e-300):
        raise NotEigenpair(
            f"({lam}, x) fails the eigenpair residual test ({res:.2e} vs scale {scale:.2e})"
        )


def couple_eigenpair(pencil: StructuredPencil, lam0: complex, x, lam1: complex, xhat):
    """Assemble the 2-column pair ([x xhat], diag(lam0, lam1)) and scale g.

    Requires lam1 = eps1*eps2*lam0^star and lam0 != lam1. x is rescaled so
    that g = xhat^star M x is exactly 1 (or reported as exact 0 when it
    vanishes at tolerance). Returns (X, Lambda, g).
    """
    if pencil.tag is None:
        raise MissingStar("coupling needs a structure tag")
    x = as_matrix(x, "x")
    xhat = as_matrix(xhat, "xhat")
    tag = pencil.tag
    partner = tag.eps1 * tag.eps2 * star_scalar(lam0, tag.star)
    if abs(lam1 - partner) > EIG_MATCH_TOL * (1 + max(abs(lam1), abs(partner))):
        raise NotEigenpair(
            f"second eigenvalue {lam1} is not the symmetry partner {partner}"
        )
    if abs(lam0 - partner) <= EIG_MATCH_TOL * (1 + abs(lam0)):
        raise NotEigenpair("lam0 coincides with its symmetry partner; no couple")
    _check_eigenpair(pencil, lam0, x)
    _check_eigenpair(pencil, lam1, xhat)
    g = complex((star(xhat, tag.star) @ pencil.m @ x)[0, 0])
    scale = fnorm(pencil.m) * float(np.linalg.norm(x)) * float(np.linalg.norm(xhat))
    if abs(g) > TAU_NUM * max(scale, 1e-300):
        x = x / g
        g = 1.0 + 0.0j
    else:
        g = 0.0 + 0.0j
    bigx = np.hstack([x, xhat])
    biglam = np.diag([lam0, lam1]).astype(np.complex128)
    return bigx, biglam, g


def realify_eigenpair(lam: complex, x) -> DeflatingPair:
    """Real 2-column deflating pair for a nonreal eigenpair of a real pencil.

    X_r = [re(x) im(x)],  Lambda_r = [[re l, im l], [-im l, re l]].
    """
    lam = complex(lam)
    if lam.imag == 0.0:
        raise RealEigenvalue("realification needs a nonreal eigenvalue")
    x = as_matrix(x, "x")
    xr = np.hstack([x.real, x.imag]).astype(np.complex128)
    lr = np.array(
        [[lam.real, lam.imag], [-lam.imag, lam.real]], dtype=np.complex128
    )
    return DeflatingPair(xr, lr)


def realify_block(lam: complex) -> np.ndarray:
    """The 2x2 real block [[re, im], [-im, re]] for one eigenvalue."""
    lam = complex(lam)
    return np.array([[lam.real, lam.imag], [-lam.imag, lam.real]])


def complete_deflating_pair(
    pencil: StructuredPencil, pair: DeflatingPair, x_extend
) -> DeflatingPair:
    """Construct the complementary deflating pair from a basis extension.

    Given (X1, Lambda1) with nonsingular G1 = X1^star M X1 and columns X
    making [X1 X] nonsingular, returns (X2, Lambda2) with
    X2 = X - X1 G1^{-1} (X1^star M X) and Lambda2 = -G2^{-1} (X2^star K X2).
    The output is M- and K-orthogonal to X1.
    """
    if pencil.tag is None:
        raise MissingStar("completion needs a structure tag")
    x1 = pair.x
    xe = as_matrix(x_extend, "X")
    n, p = x1.shape
    if xe.shape != (n, n - p):
        raise DimensionMismatch(f"extension must be {n}x{n - p}, got {xe.shape}")
    if linalg.rcond_estimate(pencil.m) <= TAU_NUM:
        raise SingularM("M must be nonsingular for the completion")
    s = pencil.star
    g1 = star(x1, s) @ pencil.m @ x1
    if linalg.scaled_rcond(g1, linalg.gramian_scale(pencil.m, x1)) <= TAU_NUM:
        raise SingularG1("X1^star M X1 is singular")
    if linalg.rcond_estimate(np.hstack([x1, xe])) <= TAU_NUM:
        raise BadCompletionBasis("[X1 X] is singular")
    x2 = xe - x1 @ np.linalg.solve(g1, star(x1, s) @ pencil.m @ xe)
    g2 = star(x2, s) @ pencil.m @ x2
    lam2 = -np.linalg.solve(g2, star(x2, s) @ pencil.k @ x2)
    return DeflatingPair(x2, lam2)


def normalize_columns(
    pencil: StructuredPencil, x, mode: str = "M"
) -> np.ndarray:
    """Rescale columns so that X^* W X = I (W = M or K by ``mode``).

    Works when the column-space Gramian is Hermitian positive definite
    (e.g. eigenvectors of a pencil with W > 0); repeated-eigenvalue blocks
    are handled by the Cholesky factor, which performs Gram-Schmidt in the
    W-inner product. Each output column is phase-rotated so its
    largest-magnitude entry is real positive.
    """
    x = as_matrix(x, "X")
    if mode not in ("M", "K"):
        raise ValueError("mode must be 'M' or 'K'")
    w = pencil.m if mode == "M" else pencil.k
    c = x.conj().T @ w @ x
    evals = linalg.herm_eigs(c)  # raises NotHermitian for bad W/X
    if evals[0] <= TAU_NUM * max(fnorm(c), 1e-300):
        raise NotPositiveDefinite(
            f"{mode}-Gramian of X is not positive definite (min eig {evals[0]:.2e})"
        )
    r = np.linalg.cholesky((c + c.conj().T) / 2.0).conj().T  # c = r^* r
    out = np.linalg.solve(r.T, x.T).T  # x @ inv(r)
    for j in range(out.shape[1]):
        out[:, j] = linalg._fix_phase(out[:, j])
    return out


def spectrum_is_symmetry_closed(lam, tag: StructureTag) -> bool:
    """True iff sigma(Lambda) equals sigma(eps1*eps2*Lambda^star) as multisets.

    When true, the spectral no-spillover condition reduces to plain
    disjointness from the fixed spectrum.
    """
    lam = require_square(as_matrix(lam, "Lambda"), "Lambda")
    ev = np.linalg.eigvals(lam)
    partner = tag.eps1 * tag.eps2 * np.array(
        [star_scalar(v, tag.star) for v in ev]
    )
    maxdist, unmatched = match_multisets(ev, partner)
    return unmatched == 0 and maxdist <= EIG_MATCH_TOL


def symmetry_partner(lam_values, tag: StructureTag) -> np.ndarray:
    """eps1*eps2*lambda^star applied entrywise to a list of eigenvalues."""
    vals = np.atleast_1d(np.asarray(lam_values, dtype=np.complex128))
    return tag.eps1 * tag.eps2 * np.array(
        [star_scalar(v, tag.star) for v in vals]
    )
