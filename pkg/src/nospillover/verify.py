"""Verification certificates for computed updates.

Everything is reported, nothing is thrown: a Certificate collects residuals
(target, spillover), structure residuals, definiteness margins and an
optional spectrum match, and aggregates them into a single pass flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularPencil
from .linalg import (
    TAU_DEFL,
    TAU_STRUCT,
    as_matrix,
    eig_pencil,
    finite_eigenvalues,
    fnorm,
    herm_eigs,
    match_multisets,
)
from .pencil import StructuredPencil, structure_residuals
from .unstructured import UpdateProblem, UpdateResult


@dataclass
class SpectrumMatch:
    max_distance: float
    unmatched: int
    infinite_computed: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.unmatched == 0 and self.max_distance <= self.tol


@dataclass
class Certificate:
    target_residual: float
    target_relative: float
    spillover_residual: float | None = None
    spillover_relative: float | None = None
    structure_residuals: dict = field(default_factory=dict)
    definiteness: dict = field(default_factory=dict)
    spectrum: SpectrumMatch | None = None
    tol_defl: float = TAU_DEFL
    tol_struct: float = TAU_STRUCT
    tol_psd: float = 1e-10

    @property
    def passed(self) -> bool:
        ok = self.target_relative <= self.tol_defl
        if self.spillover_relative is not None:
            ok = ok and self.spillover_relative <= self.tol_defl
        for value in self.structure_residuals.values():
            ok = ok and value <= self.tol_struct
        for value in self.definiteness.values():
            ok = ok and value >= -self.tol_psd
        if self.spectrum is not None:
            ok = ok and self.spectrum.passed
        return bool(ok)

    def summary_lines(self) -> list[str]:
        lines = [
            f"target residual    {self.target_residual:.3e} "
            f"(relative {self.target_relative:.3e})"
        ]
        if self.spillover_residual is not None:
            lines.append(
                f"spillover residual {self.spillover_residual:.3e} "
                f"(relative {self.spillover_relative:.3e})"
            )
        for name, value in self.structure_residuals.items():
            lines.append(f"structure[{name}]    {value:.3e}")
        for name, value in self.definiteness.items():
            lines.append(f"min eig[{name}]      {value:.3e}")
        if self.spectrum is not None:
            lines.append(
                f"spectrum match     max dist {self.spectrum.max_distance:.3e}, "
                f"unmatched {self.spectrum.unmatched}"
            )
        lines.append("PASS" if self.passed else "FAIL")
        return lines


def spectrum_match(
    pencil_or_mk, expected, tol: float = 1e-7, allow_subset: bool = False
) -> SpectrumMatch:
    """Match the computed spectrum against an expected multiset.

    Minimum-cost exact assignment under |a-b|/(1+max(|a|,|b|)). With
    ``allow_subset`` the expected values only need to appear somewhere in
    the spectrum. Raises SingularPencil for non-regular pencils.
    """
    if isinstance(pencil_or_mk, StructuredPencil):
        m, k = pencil_or_mk.m, pencil_or_mk.k
    else:
        m, k = pencil_or_mk
    eigs = eig_pencil(m, k)
    computed = finite_eigenvalues(eigs)
    infinite = len(eigs) - computed.size
    expected = np.atleast_1d(np.asarray(expected, dtype=np.complex128))
    if allow_subset:
        if expected.size > computed.size:
            return SpectrumMatch(np.inf, expected.size - computed.size, infinite, tol)
        from scipy.optimize import linear_sum_assignment

        cost = np.abs(expected[:, None] - computed[None, :]) / (
            1.0
            + np.maximum(np.abs(expected)[:, None], np.abs(computed)[None, :])
        )
        rows, cols = linear_sum_assignment(cost)
        return SpectrumMatch(float(cost[rows, cols].max()), 0, infinite, tol)
    maxdist, unmatched = match_multisets(expected, computed)
    unmatched += infinite
    return SpectrumMatch(maxdist, unmatched, infinite, tol)


def certify(
    pencil: StructuredPencil,
    result: UpdateResult,
    problem: UpdateProblem,
    expected_spectrum=None,
    psd: tuple[str, ...] = (),
    check_structure: bool = True,
    tol_defl: float = TAU_DEFL,
    spectrum_tol: float = 1e-7,
) -> Certificate:
    """Certificate for (dM, dK) against the problem's target and fixed pairs.

    ``psd`` names matrices whose minimum Hermitian eigenvalue should be
    reported ('delta_m', 'delta_k', 'm_updated', 'k_updated'). Structure
    residuals are computed against the pencil's tag when present.
    """
    dm, dk = as_matrix(result.delta_m, "dM"), as_matrix(result.delta_k, "dK")
    m1, k1 = pencil.m + dm, pencil.k + dk
    xa, la = problem.xa, problem.target_lam
    tres = fnorm(m1 @ xa @ la + k1 @ xa)
    tscale = (fnorm(m1) * fnorm(la) + fnorm(k1)) * fnorm(xa)
    cert = Certificate(
        target_residual=tres,
        target_relative=tres / max(tscale, 1e-300),
        tol_defl=tol_defl,
    )
    if problem.fixed is not None:
        xf, lf = problem.fixed.x, problem.fixed.lam
        sres = fnorm(m1 @ xf @ lf + k1 @ xf)
        sscale = (fnorm(m1) * fnorm(lf) + fnorm(k1)) * fnorm(xf)
        cert.spillover_residual = sres
        cert.spillover_relative = sres / max(sscale, 1e-300)
    if check_structure and pencil.tag is not None:
        rm, rk = structure_residuals(m1, k1, pencil.tag)
        cert.structure_residuals = {"m_updated": rm, "k_updated": rk}
    for name in psd:
        matrix = {
            "delta_m": dm,
            "delta_k": dk,
            "m_updated": m1,
            "k_updated": k1,
        }[name]
        evals = herm_eigs(matrix)
        scale = max(fnorm(matrix), 1e-300)
        cert.definiteness[name] = float(evals[0]) / scale
    if expected_spectrum is not None:
        try:
            cert.spectrum = spectrum_match(
                (m1, k1), expected_spectrum, tol=spectrum_tol
            )
        except SingularPencil:
            cert.spectrum = SpectrumMatch(np.inf, len(expected_spectrum), 0, spectrum_tol)
    return cert
