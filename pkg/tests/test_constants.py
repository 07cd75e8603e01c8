import math

import pytest

from otbounds import (
    ConstantDetail,
    DomainError,
    NormKind,
    UnsupportedDimensionError,
    eps_p,
    gamma_lower_bound,
    h_factor,
    kappa_euclidean,
    kappa_max_norm,
    kd_upper,
    theta_factor,
    zeta_low_moment,
)


class TestEpsP:
    def test_values(self):
        assert eps_p(1) == 0.5
        assert eps_p(2) == 0.5
        assert eps_p(0.5) == pytest.approx(2 ** -0.5, rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            eps_p(0)
        with pytest.raises(DomainError):
            eps_p(-1)


class TestHFactor:
    def test_closed_form_x0(self):
        # (0 + 1*(4/2)^(4/2))^(2/4) * 4/2 = 2 * 2 = 4
        assert h_factor(0.0, 2.0, 4.0) == pytest.approx(4.0, rel=1e-14)

    def test_large_q_limit(self):
        v = h_factor(1.0, 2.0, 1000.0)
        assert 1.0 < v < 1.05

    def test_domain(self):
        with pytest.raises(DomainError):
            h_factor(1.0, 2.0, 2.0)
        with pytest.raises(DomainError):
            h_factor(-0.1, 2.0, 4.0)


class TestKdUpper:
    def test_d8_component(self):
        k1 = 64.0 * (math.log(8) + math.log(math.log(8)) + 5.0)
        assert k1 == pytest.approx(499.938, abs=5e-3)
        assert kd_upper(8) >= k1

    def test_root_limit(self):
        assert kd_upper(100) ** (1.0 / 100) == pytest.approx(1.0, abs=0.2)

    def test_rejects_small_d(self):
        with pytest.raises(UnsupportedDimensionError):
            kd_upper(7)


class TestKappaMaxNorm:
    def test_supercritical_d1(self):
        assert kappa_max_norm(1, 1).value == pytest.approx(2.41421, abs=1e-5)

    def test_subcritical_d3(self):
        assert kappa_max_norm(3, 1).value == pytest.approx(3.72, abs=5e-3)

    def test_critical_is_affine_in_log_n(self):
        # d=2, p=1: 0.72135 ln N + 1 for N >= 4
        for n in [4, 100, 10 ** 6]:
            detail = kappa_max_norm(2, 1, n=n)
            assert detail.n_dependent
            expected = math.log(n) / (2 * math.log(2)) + 1.0
            assert detail.value == pytest.approx(expected, rel=1e-12)

    def test_critical_requires_n(self):
        with pytest.raises(DomainError):
            kappa_max_norm(2, 1)

    def test_d5_p2(self):
        assert kappa_max_norm(5, 2).value == pytest.approx(7.5447, abs=1e-3)

    def test_root_increasing_in_p(self):
        for d in [3, 5, 10]:
            grid = [0.2 + 0.1 * i for i in range(int((d / 2 - 0.3) / 0.1))]
            vals = [kappa_max_norm(d, p).value ** (1 / p) for p in grid]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_large_d_limit(self):
        for p in [1, 2]:
            assert abs(kappa_max_norm(10 ** 6, p).value - 2 ** p) < 1e-3


class TestKappaEuclidean:
    def test_d8_p1(self):
        detail = kappa_euclidean(8, 1)
        assert detail.value == pytest.approx(23.44, abs=0.01)
        assert detail.chosen_r is not None and detail.chosen_r > 2

    def test_d100_p1(self):
        assert kappa_euclidean(100, 1).value == pytest.approx(8.93, abs=0.01)

    def test_large_d_limit(self):
        detail = kappa_euclidean(10 ** 5, 1)
        assert abs(detail.value - 8.0) / 8.0 < 0.01
        assert abs(detail.chosen_r - 4.0) / 4.0 < 0.05

    def test_rejects_small_d(self):
        with pytest.raises(UnsupportedDimensionError):
            kappa_euclidean(5, 1)

    def test_root_increasing_in_p_fixed_r(self):
        # p -> (kappa^(2)_{d,p,r})^{1/p} increasing on (0, d/2) for fixed r
        import math as _m

        d, r = 10, 3.5
        kd = kd_upper(d)

        def kappa_r(p):
            return (
                (kd / 4.0) ** (p / d)
                * r ** (2 * p) * (1 - r ** (-d / 2)) ** (1 - 2 * p / d)
                / ((r - 2) ** p * (1 - r ** (p - d / 2)))
            )

        grid = [0.5 + 0.25 * i for i in range(18)]
        vals = [kappa_r(p) ** (1 / p) for p in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))


class TestTheta:
    def test_table5_threshold_d3(self):
        assert theta_factor(3, 1, 7.3, NormKind.MAX) <= 2.0
        assert theta_factor(3, 1, 7.2, NormKind.MAX) > 2.0

    def test_table8_threshold_d8(self):
        assert math.sqrt(theta_factor(8, 2, 20.5, NormKind.EUCLIDEAN)) <= 1.25

    def test_limit_one(self):
        assert theta_factor(3, 1, 1e6, NormKind.MAX) == pytest.approx(1.0, abs=1e-3)

    def test_decreasing_in_q(self):
        qs = [2.1 + 0.5 * i for i in range(20)]
        vals = [theta_factor(1, 1, q, NormKind.MAX) for q in qs]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_critical_nonincreasing_in_n(self):
        ns = [1, 10, 100, 10 ** 4, 10 ** 6]
        vals = [theta_factor(2, 1, 3.0, NormKind.MAX, n=n) for n in ns]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_below_threshold_rejected(self):
        with pytest.raises(DomainError):
            theta_factor(3, 1, 1.5, NormKind.MAX)  # q = dp/(d-p) exactly


class TestZeta:
    def test_d3_p2_q3(self):
        detail = zeta_low_moment(3, 2, 3)
        assert detail.value > 0 and math.isfinite(detail.value)
        assert detail.chosen_a is not None and detail.chosen_a > 1
        # dense grid over a as an independent oracle for the minimum
        bracket_min = min(
            a ** 2 / (a ** 0.5 - 1) + a ** 2 / (1 - a ** -1.0)
            for a in [1.001 + 0.002 * i for i in range(5000)]
        )
        eps2 = 0.5
        bracket = (
            eps2 * 2 ** (4 / 3 - 1)
            + (2 ** 2 / (2 ** 1.5 - 1)) ** (2 / 3) * (1 - 0.25) / (1 - 2 ** (3 - 2 - 2))
        )
        assert detail.value <= bracket * bracket_min + 1e-9
        assert detail.value >= bracket * 0.999 * bracket_min

    def test_boundary_excluded(self):
        with pytest.raises(DomainError):
            zeta_low_moment(3, 2, 4)  # q = 2p

    def test_d2_p1_q15(self):
        detail = zeta_low_moment(2, 1, 1.5)
        assert math.isfinite(detail.value) and detail.value > 0


class TestGamma:
    def test_values(self):
        assert gamma_lower_bound(1, 1) == pytest.approx(0.5, rel=1e-12)
        assert gamma_lower_bound(3, 1) == pytest.approx(0.44630, abs=2e-4)

    def test_ranges(self):
        for d in range(3, 501):
            assert 0.44 < gamma_lower_bound(d, 1) < 0.5
        for d in range(5, 501):
            assert 0.47 < math.sqrt(gamma_lower_bound(d, 2)) < 0.5

    def test_below_kappa(self):
        for d in [3, 5, 10, 50]:
            assert gamma_lower_bound(d, 1) < kappa_max_norm(d, 1).value


class TestConstantDetail:
    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            ConstantDetail(value=0.0)
        with pytest.raises(DomainError):
            ConstantDetail(value=float("inf"))
