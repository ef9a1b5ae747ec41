"""Tests for the definite-class update recipes and the quadratic lift."""

import numpy as np
import pytest
from conftest import (
    plant_hermitian_definite,
    plant_hermitian_definite_pd_k,
    plant_star_even,
    plant_star_odd,
    plant_t_even_real,
    plant_t_odd_real,
    spillover_residual,
)

from nospillover.errors import (
    EigenvalueOutsideClass,
    NotImaginaryDiagonal,
    NotPositiveDefinite,
    NotRealDiagonal,
    PositiveTargetEigenvalue,
    ZeroChangeEigenvalue,
)
from nospillover.linalg import fnorm, herm_eigs
from nospillover.pencil import (
    HERMITIAN,
    STAR_EVEN,
    STAR_ODD,
    T_EVEN,
    T_ODD,
    classify_structure,
)
from nospillover.special import (
    QuadraticSpec,
    hermitian_core,
    hermitian_update,
    lift_quadratic,
    commuting_family_params,
    select_psd_params,
    star_even_core,
    star_even_update,
    star_odd_core,
    star_odd_update,
    t_even_real_update,
    t_odd_real_update,
)


def herm_res(a):
    return fnorm(a - a.conj().T) / max(fnorm(a), 1e-300)


def skew_res(a):
    return fnorm(a + a.conj().T) / max(fnorm(a), 1e-300)


class TestHermitianCore:
    def test_trivial(self):
        mh, kh = hermitian_core([3.0, -1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0])
        np.testing.assert_allclose(mh, [0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(kh, [3.0, -1.0], atol=1e-15)

    def test_core_equation(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            p = int(rng.integers(1, 5))
            lc, la = rng.standard_normal(p), rng.standard_normal(p)
            z1, z2 = rng.standard_normal(p), rng.standard_normal(p)
            mh, kh = hermitian_core(lc, la, z1, z2)
            scale = 1.0 + abs(lc).max() + abs(la).max() + abs(mh).max()
            assert np.abs(mh * la + kh - (lc - la)).max() <= 1e-12 * scale

    def test_rejects_complex(self):
        with pytest.raises(NotRealDiagonal):
            hermitian_core([1j], [0.0], [0.0], [0.0])


class TestHermitianUpdate:
    def test_zero_mhat_branch(self):
        pencil, xc, lc, xf, lf = plant_hermitian_definite(7)
        res = hermitian_update(pencil, xc, lc, lc - 0.5, mhat=np.zeros(2))
        assert fnorm(res.delta_m) == 0.0
        xn = res.provenance["xc_normalized"]
        want = pencil.m @ xn @ np.diag(lc - (lc - 0.5)) @ xn.conj().T @ pencil.m
        assert fnorm(res.delta_k - want) <= 1e-13 * fnorm(want)

    def test_zero_delta_k_branch(self):
        pencil, xc, lc, xf, lf = plant_hermitian_definite(8)
        la = lc.real * 1.2
        mhat = lc.real / la - 1.0
        res = hermitian_update(pencil, xc, lc, la, mhat=mhat)
        assert fnorm(res.delta_k) <= 1e-12 * fnorm(pencil.k)
        assert fnorm(res.delta_m) > 0

    def test_real_inputs_real_outputs(self):
        rng = np.random.default_rng(9)
        n = 5
        b = rng.standard_normal((n, n))
        m = b @ b.T + n * np.eye(n)
        c = rng.standard_normal((n, n))
        k = c + c.T
        from nospillover.linalg import eig_pencil
        from nospillover.pencil import StructuredPencil

        pencil = StructuredPencil(m, k, HERMITIAN)
        eigs = eig_pencil(m, k)
        xc = np.hstack([e.vector.reshape(-1, 1) for e in eigs[:2]])
        lc = np.array([e.value for e in eigs[:2]]).real
        res = hermitian_update(
            pencil, xc.real, lc, lc * 1.1, z1=[0.3, 0.1], z2=[0.0, 0.2]
        )
        assert np.abs(res.delta_m.imag).max() == 0.0
        assert np.abs(res.delta_k.imag).max() == 0.0

    def test_requires_definite_m(self):
        rng = np.random.default_rng(10)
        h = rng.standard_normal((4, 4))
        m = (h + h.T) / 2  # indefinite
        k = np.eye(4)
        from nospillover.pencil import StructuredPencil

        pencil = StructuredPencil(m, k, HERMITIAN)
        with pytest.raises(NotPositiveDefinite):
            hermitian_update(pencil, np.eye(4)[:, :1], [1.0], [2.0])

    def test_spillover_and_structure(self):
        rng = np.random.default_rng(11)
        for seed in range(5):
            pencil, xc, lc, xf, lf = plant_hermitian_definite(seed + 20)
            la = lc.real + rng.standard_normal(2)
            res = hermitian_update(
                pencil,
                xc,
                lc,
                la,
                z1=rng.standard_normal(2),
                z2=rng.standard_normal(2),
            )
            assert herm_res(res.delta_m) <= 1e-12
            assert herm_res(res.delta_k) <= 1e-12
            m1, k1 = pencil.m + res.delta_m, pencil.k + res.delta_k
            assert HERMITIAN in classify_structure(m1, k1)
            sres = fnorm(m1 @ xf @ np.diag(lf) + k1 @ xf)
            assert sres <= 1e-10 * (fnorm(m1) * (1 + abs(lf).max()) + fnorm(k1))


class TestCommutingFamilyRecovery:
    def test_core_matches_closed_form(self):
        rng = np.random.default_rng(12)
        p = 3
        lc = -np.abs(rng.standard_normal(p)) - 0.5
        la = -np.abs(rng.standard_normal(p)) - 0.5
        phi = np.abs(rng.standard_normal(p)) + 0.5
        z1, z2 = commuting_family_params(lc, la, phi)
        mh, kh = hermitian_core(lc, la, z1, z2)
        np.testing.assert_allclose(mh.real, phi - 1.0, atol=1e-12)
        np.testing.assert_allclose(kh.real, lc - phi * la, atol=1e-12)

    def test_admissible_draws_are_psd(self):
        # Phi chosen above the PSD threshold makes both updates PSD
        rng = np.random.default_rng(13)
        for seed in range(10):
            pencil, xc, lc, xf, lf = plant_hermitian_definite_pd_k(seed + 30)
            lc = lc.real
            la = lc * (1 + 0.2 * rng.uniform(size=lc.size))
            bound = np.maximum((la - lc) * la, lc / la - 1.0)
            phi_min = 1.0 + (np.maximum(bound, 0.0) + (lc - la) * la) / (la**2 + 1.0)
            phi = phi_min + rng.uniform(0.01, 1.0, size=lc.size)
            z1, z2 = commuting_family_params(lc, la, phi)
            res = hermitian_update(pencil, xc, lc, la, z1=z1, z2=z2)
            for delta in (res.delta_m, res.delta_k):
                evals = herm_eigs(delta)
                assert evals[0] >= -1e-10 * max(fnorm(delta), 1.0)


class TestPsdSelection:
    def test_unchanged_targets_zero(self):
        params = select_psd_params([-2.0, -3.0], [-2.0, -3.0])
        np.testing.assert_allclose(params.z1, 0.0, atol=1e-15)
        np.testing.assert_allclose(params.z2, 0.0, atol=1e-15)

    def test_positive_target_rejected(self):
        with pytest.raises(PositiveTargetEigenvalue):
            select_psd_params([-1.0], [0.5])

    def test_random_draws_psd(self):
        rng = np.random.default_rng(14)
        for seed in range(8):
            pencil, xc, lc, xf, lf = plant_hermitian_definite_pd_k(seed + 50)
            lc = lc.real
            la = lc * (1 + 0.3 * rng.uniform(-1, 1, size=lc.size))
            params = select_psd_params(lc, la, slack=0.0)
            res = hermitian_update(pencil, xc, lc, la, z1=params.z1, z2=params.z2)
            for delta in (res.delta_m, res.delta_k):
                evals = herm_eigs(delta)
                assert evals[0] >= -1e-10 * max(fnorm(delta), 1.0)


class TestStarOdd:
    def test_zero_case(self):
        pencil, xc, lc, xf, lf = plant_star_odd(15)
        res = star_odd_update(pencil, xc, lc, lc, z1=np.zeros(2), z2=np.zeros(2))
        assert fnorm(res.delta_m) <= 1e-12
        assert fnorm(res.delta_k) <= 1e-12

    def test_core_equation_and_shapes(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            p = int(rng.integers(1, 4))
            lc = 1j * rng.standard_normal(p)
            la = 1j * rng.standard_normal(p)
            z1 = rng.standard_normal(p)
            z2 = 1j * rng.standard_normal(p)
            mh, kh = star_odd_core(lc, la, z1, z2)
            scale = 1.0 + np.abs(lc).max() + np.abs(la).max() + np.abs(mh).max()
            assert np.abs(mh * la + kh - (lc - la)).max() <= 1e-12 * scale
            assert np.abs(mh.imag).max() <= 1e-12 * scale  # Mh real
            assert np.abs(kh.real).max() <= 1e-12 * scale  # Kh imaginary

    def test_rejects_nonimaginary_targets(self):
        with pytest.raises(NotImaginaryDiagonal):
            star_odd_core([1j], [0.5 + 1j], [0.0], [0.0])

    def test_plant_and_check(self):
        rng = np.random.default_rng(17)
        for seed in range(5):
            pencil, xc, lc, xf, lf = plant_star_odd(seed + 60)
            la = 1j * (lc.imag + rng.standard_normal(2))
            res = star_odd_update(
                pencil, xc, lc, la,
                z1=rng.standard_normal(2),
                z2=1j * rng.standard_normal(2),
            )
            assert herm_res(res.delta_m) <= 1e-12
            assert skew_res(res.delta_k) <= 1e-12
            m1, k1 = pencil.m + res.delta_m, pencil.k + res.delta_k
            assert STAR_ODD in classify_structure(m1, k1)
            sres = fnorm(m1 @ xf @ np.diag(lf) + k1 @ xf)
            assert sres <= 1e-10 * (fnorm(m1) * (1 + np.abs(lf).max()) + fnorm(k1))

    def test_psd_bracket_condition(self):
        pencil, xc, lc, xf, lf = plant_star_odd(18)
        la = 1j * (lc.imag * 1.3)
        bracket = ((la - lc) * la).real
        z1 = np.maximum(-bracket, 0.0) + 0.1  # makes the bracket nonnegative
        res = star_odd_update(pencil, xc, lc, la, z1=z1, z2=np.zeros(2))
        assert herm_eigs(res.delta_m)[0] >= -1e-10 * max(fnorm(res.delta_m), 1.0)


class TestStarEven:
    def test_delta_k_zero_shortcut(self):
        pencil, xc, lc, xf, lf = plant_star_even(19)
        la = 1j * lc.imag * 1.4
        mhat = 1.0 / lc - 1.0 / la
        res = star_even_update(pencil, xc, lc, la, mhat=mhat)
        assert fnorm(res.delta_k) <= 1e-11 * fnorm(pencil.k)
        assert skew_res(res.delta_m) <= 1e-12

    def test_zero_change_eigenvalue_rejected(self):
        with pytest.raises(ZeroChangeEigenvalue):
            star_even_core([0.0], [1j], [0.0], [0.0])

    def test_plant_and_check(self):
        rng = np.random.default_rng(20)
        for seed in range(5):
            pencil, xc, lc, xf, lf = plant_star_even(seed + 70)
            la = 1j * (lc.imag + rng.standard_normal(2))
            res = star_even_update(
                pencil, xc, lc, la,
                z1=1j * rng.standard_normal(2),
                z2=rng.standard_normal(2),
            )
            assert skew_res(res.delta_m) <= 1e-12
            assert herm_res(res.delta_k) <= 1e-12
            m1, k1 = pencil.m + res.delta_m, pencil.k + res.delta_k
            assert STAR_EVEN in classify_structure(m1, k1)
            sres = fnorm(m1 @ xf @ np.diag(lf) + k1 @ xf)
            assert sres <= 1e-10 * (fnorm(m1) * (1 + np.abs(lf).max()) + fnorm(k1))

    def test_psd_bracket_condition(self):
        pencil, xc, lc, xf, lf = plant_star_even(21)
        la = 1j * lc.imag * 0.8
        bracket = ((la - lc) / lc).real  # with z1 = z2 = 0
        z2 = np.minimum(bracket / (la.imag**2), 0.0) * 0  # start from zero
        res = star_even_update(pencil, xc, lc, la, z1=np.zeros(2), z2=z2)
        kh = res.provenance["khat"]
        if np.all(kh.real >= 0):
            assert herm_eigs(res.delta_k)[0] >= -1e-10 * max(
                fnorm(res.delta_k), 1.0
            )


class TestTOddReal:
    def test_zero_case(self):
        pencil, change, fixed = plant_t_odd_real(22, n=6, pairs=2)
        targets = [lam for lam, _ in change]
        res = t_odd_real_update(pencil, change, targets, [0.0, 0.0], [0.0, 0.0])
        assert fnorm(res.delta_m) <= 1e-12
        assert fnorm(res.delta_k) <= 1e-12

    def test_realified_outputs_real(self):
        pencil, change, fixed = plant_t_odd_real(23, n=6, pairs=1)
        lam = change[0][0]
        res = t_odd_real_update(
            pencil, change, [1j * (lam.imag * 1.2)], [0.4], [-0.3]
        )
        assert np.abs(res.delta_m.imag).max() == 0.0
        assert np.abs(res.delta_k.imag).max() == 0.0

    def test_plant_and_check(self):
        rng = np.random.default_rng(24)
        for seed in range(5):
            pencil, change, fixed = plant_t_odd_real(seed + 80, n=6, pairs=2)
            targets = [
                1j * (lam.imag * (1 + 0.2 * rng.uniform())) for lam, _ in change
            ]
            res = t_odd_real_update(
                pencil, change, targets, rng.standard_normal(2), rng.standard_normal(2)
            )
            m1, k1 = pencil.m + res.delta_m, pencil.k + res.delta_k
            assert T_ODD in classify_structure(m1, k1)
            assert spillover_residual(pencil, res.delta_m, res.delta_k, fixed) <= 1e-10

    def test_block_core_equation(self):
        pencil, change, fixed = plant_t_odd_real(25, n=6, pairs=2)
        rng = np.random.default_rng(25)
        targets = [1j * (lam.imag + rng.standard_normal()) for lam, _ in change]
        res = t_odd_real_update(
            pencil, change, targets, rng.standard_normal(2), rng.standard_normal(2)
        )
        mh, kh = res.provenance["mhat"], res.provenance["khat"]
        lam_c, lam_a = res.provenance["lam_c"], res.provenance["lam_a"]
        resid = fnorm(mh @ lam_a + kh - (lam_c - lam_a))
        assert resid <= 1e-12 * (1 + fnorm(lam_c) + fnorm(mh) * fnorm(lam_a))


class TestTEvenReal:
    def test_zero_case(self):
        pencil, change, fixed = plant_t_even_real(26, n=6, pairs=1)
        targets = [lam for lam, _ in change]
        res = t_even_real_update(pencil, change, targets, [0.0], [0.0])
        assert fnorm(res.delta_m) <= 1e-12
        assert fnorm(res.delta_k) <= 1e-12

    def test_plant_and_check(self):
        rng = np.random.default_rng(27)
        for seed in range(5):
            pencil, change, fixed = plant_t_even_real(seed + 90, n=6, pairs=1)
            targets = [
                1j * (lam.imag * (1 + 0.2 * rng.uniform())) for lam, _ in change
            ]
            res = t_even_real_update(
                pencil, change, targets, rng.standard_normal(1), rng.standard_normal(1)
            )
            m1, k1 = pencil.m + res.delta_m, pencil.k + res.delta_k
            assert T_EVEN in classify_structure(m1, k1)
            assert spillover_residual(pencil, res.delta_m, res.delta_k, fixed) <= 1e-10

    def test_block_core_equation(self):
        # G = -Lc^{-1} in block form; the core solves the small equation
        pencil, change, fixed = plant_t_even_real(28, n=6, pairs=1)
        rng = np.random.default_rng(28)
        targets = [1j * (lam.imag * 1.5) for lam, _ in change]
        res = t_even_real_update(
            pencil, change, targets, rng.standard_normal(1), rng.standard_normal(1)
        )
        mh, kh = res.provenance["mhat"], res.provenance["khat"]
        lam_c, lam_a = res.provenance["lam_c"], res.provenance["lam_a"]
        g = -np.linalg.inv(lam_c)
        resid = fnorm(mh @ lam_a + kh - g @ (lam_c - lam_a))
        assert resid <= 1e-12 * (1 + fnorm(g) * fnorm(lam_c) + fnorm(mh) * fnorm(lam_a))


class TestQuadraticLift:
    def test_hermitian_lift_values(self):
        spec = QuadraticSpec("hermitian", (57.4206j,), (57.4247j,))
        lam_c, lam_a, tag = lift_quadratic(spec)
        assert tag is HERMITIAN
        assert lam_c[0].real == pytest.approx(-3297.125, rel=1e-4)
        assert abs(lam_c[0].imag) <= 1e-9 * abs(lam_c[0])

    def test_star_odd_lift_values(self):
        lam = 1.30078 * (1 + 1j)
        spec = QuadraticSpec("star-odd", (lam,), (lam,))
        lam_c, _, tag = lift_quadratic(spec)
        assert tag is STAR_ODD
        assert lam_c[0].imag == pytest.approx(3.3841, rel=1e-4)
        assert abs(lam_c[0].real) <= 1e-12

    def test_exact_membership(self):
        a = 2.7
        lam = np.sqrt(a / 2) * (1 + 1j)
        spec = QuadraticSpec("star-even", (lam,), (lam,))
        lam_c, _, _ = lift_quadratic(spec)
        assert lam_c[0] == pytest.approx(a * 1j)

    def test_rejects_outside_class(self):
        with pytest.raises(EigenvalueOutsideClass):
            lift_quadratic(QuadraticSpec("hermitian", (1 + 1j,), (1j,)))
        with pytest.raises(EigenvalueOutsideClass):
            lift_quadratic(QuadraticSpec("star-odd", (1.5 + 0.2j,), (1j,)))
        with pytest.raises(EigenvalueOutsideClass):
            lift_quadratic(QuadraticSpec("star-even", (0.0,), (1j,)))


class TestZeroMhatRecovery:
    def test_reference_data_closed_form(self):
        from nospillover.cases import CASES
        from nospillover.special import solve_quadratic

        case = CASES["herm-6.1"]
        spec = QuadraticSpec("hermitian", case.lam_change, case.lam_target)
        res, info = solve_quadratic(case.m, case.k, spec, mhat=np.zeros(2))
        assert fnorm(res.delta_m) == 0.0
        xn = res.provenance["xc_normalized"]
        lam_c, lam_a = info["lam_c"], info["lam_a"]
        direct = case.m @ xn @ np.diag(lam_c - lam_a) @ xn.conj().T @ case.m
        assert fnorm(res.delta_k - direct) <= 1e-13 * fnorm(direct)
        # Psi form: Psi = Lc_quad^2 - La_quad^2 with the resolved quadratic
        # eigenvalues (lam_quad = i*sqrt(-mu) for the negative lifted values)
        lam_c_quad = 1j * np.sqrt(-lam_c.real)
        lam_a_quad = np.array(case.lam_target)
        psi = np.diag(lam_c_quad**2 - lam_a_quad**2)
        via_psi = case.m @ xn @ psi @ xn.conj().T @ case.m
        assert fnorm(res.delta_k - via_psi) <= 1e-12 * fnorm(via_psi)
