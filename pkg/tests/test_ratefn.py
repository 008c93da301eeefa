"""
Rate Function Tests
"""
import math
from unittest.mock import MagicMock

import numpy as np
import pytest

from ldp_toolkit.core.distributions import GaussianMixture, LpBall, Product, norm_ldp
from ldp_toolkit.core.ratefn import measures as measures_module
from ldp_toolkit.core.ratefn import (
    GaussianMeasure,
    HistogramMeasure,
    RateFunctionHandle,
    RateKind,
    chi_square_rate,
    constant_regime_qnorm,
    entropy_H_lambda,
    fp_star,
    gaussian_abs_moment,
    gaussian_ratio_rate,
    lambda_q_star,
    lln_ratio,
    log_mgf_square_pgn,
    lp_critical_root,
    mp,
    predict_rate,
    rate_constant_regime,
    rate_J_q_lambda,
    rate_linear_empirical,
    rate_linear_qnorm,
    rate_lp_norm,
    rate_lp_projection,
    rate_pgn_partial_sum,
    rate_product,
    rate_speed,
    rate_sublinear_empirical,
    rate_sublinear_norm,
    rate_sublinear_qnorm,
    relative_entropy_to_gaussian,
)
from ldp_toolkit.errors import (
    Diverging,
    InvalidMeasure,
    InvalidP,
    InvalidQ,
    InvalidSimplex,
    Unsupported,
)
from ldp_toolkit.protocol.models import (
    ConstantVariant,
    LinearCase,
    LpCase,
    MarginalKind,
    QuantityKind,
    QuantitySpec,
    RegimeKind,
    RegimeSpec,
    SpeedCase,
    SublinearCase,
)

NORM = QuantitySpec(kind=QuantityKind.NORM, q=2.0)
NORM_KN = QuantitySpec(kind=QuantityKind.NORM_KN, q=2.0)
EMPIRICAL = QuantitySpec(kind=QuantityKind.EMPIRICAL)
GAUSSIAN = Product(MarginalKind.NORMAL)
CHI = RateFunctionHandle(func=lambda y: chi_square_rate(y * y), center=1.0)


def constant(k: int) -> RegimeSpec:
    return RegimeSpec(kind=RegimeKind.CONSTANT, k=k)


def sublinear(alpha: float) -> RegimeSpec:
    return RegimeSpec(kind=RegimeKind.SUBLINEAR, alpha=alpha)


def linear(lam: float) -> RegimeSpec:
    return RegimeSpec(kind=RegimeKind.LINEAR, lam=lam)


class TestClosedForms:
    """闭式速率测试"""

    def test_chi_square_rate(self):
        """测试 χ² 速率"""
        assert chi_square_rate(1.0) == 0.0
        assert chi_square_rate(0.0) == math.inf
        assert chi_square_rate(4.0) == pytest.approx(1.5 - math.log(2.0))

    def test_mp_values(self):
        """测试薄壳中心 m(p)"""
        assert mp(2.0) == pytest.approx(1.0)
        assert mp(1.0) == pytest.approx(math.sqrt(2.0))

    def test_gaussian_abs_moment(self):
        """测试高斯绝对矩"""
        assert gaussian_abs_moment(2.0) == pytest.approx(1.0)
        assert gaussian_abs_moment(1.0) == pytest.approx(math.sqrt(2.0 / math.pi))

    def test_lp_norm_rate(self):
        """测试 ℓ_p 球的范数速率"""
        assert rate_lp_norm(1.0, 2.0) == pytest.approx(2.0)
        assert rate_lp_norm(2.0, 0.5) == pytest.approx(math.log(2.0))
        assert rate_lp_norm(2.0, 1.5) == math.inf

    def test_gaussian_ratio_rate(self):
        """测试高斯比值速率"""
        expected = 0.25 * math.log(0.5 / 0.64) + 0.25 * math.log(0.5 / 0.36)
        assert gaussian_ratio_rate(0.5, 0.8) == pytest.approx(expected)
        assert gaussian_ratio_rate(0.5, 0.8) == pytest.approx(0.020411, abs=1e-6)
        assert gaussian_ratio_rate(0.5, 1.0) == math.inf
        assert gaussian_ratio_rate(1.0, 0.5) == pytest.approx(math.log(2.0))

    def test_gaussian_ratio_rate_lambda_range(self):
        """测试 λ 范围"""
        with pytest.raises(InvalidP):
            gaussian_ratio_rate(1.5, 0.5)

    def test_pgn_partial_sum(self):
        """测试 t^{p/2}/p"""
        assert rate_pgn_partial_sum(1.5, 4.0) == pytest.approx(4.0 ** 0.75 / 1.5)
        assert rate_pgn_partial_sum(2.0, -1.0) == math.inf
        with pytest.raises(InvalidP):
            rate_pgn_partial_sum(3.0, 1.0)

    def test_fp_star(self):
        """测试 F_p^* 在 m(p)² 处为零, 其他位置为正"""
        center = mp(4.0) ** 2
        assert fp_star(4.0, center) == pytest.approx(0.0, abs=1e-6)
        assert fp_star(4.0, 0.5 * center) > 1e-3
        with pytest.raises(InvalidP):
            fp_star(2.0, 0.5)
        with pytest.raises(Diverging):
            fp_star(4.0, 1.5)

    def test_critical_root(self):
        """测试 c^{p+2} - c^p - x^p = 0 的根"""
        assert lp_critical_root(1.0, 6.0) == pytest.approx(2.0, abs=1e-9)
        assert lp_critical_root(1.5, 0.0) == 1.0
        with pytest.raises(InvalidP):
            lp_critical_root(2.0, 1.0)

    def test_critical_root_random_points(self, rng):
        """测试随机 (p, x) 上的残差与括号"""
        for p, x in zip(rng.uniform(1.0, 2.0, 100), rng.uniform(0.01, 10.0, 100)):
            c = lp_critical_root(p, x)
            xp = x ** p
            assert abs(c ** (p + 2.0) - c ** p - xp) <= 1e-10 * max(1.0, xp)
            assert (1.0 + xp) ** (1.0 / (p + 2.0)) <= c * (1.0 + 1e-12)
            assert c * c - 1.0 == pytest.approx(xp / c ** p, rel=1e-8, abs=1e-10)
            assert c * c - 1.0 <= x ** (2.0 * p / (p + 2.0)) * (1.0 + 1e-9) + 1e-10

    def test_lp_projection_critical_case(self):
        """测试临界情形的闭式值"""
        result = rate_lp_projection(1.0, LpCase.SUB_CRIT, 6.0)
        assert result.value == pytest.approx(1.5 * 6.0 / 2.0 - math.log(2.0), abs=1e-8)
        assert result.speed_tag == "n^0.666667"

    def test_lp_projection_fast_case(self):
        """测试 s_n ≫ k_n 情形"""
        result = rate_lp_projection(1.5, LpCase.SUB_FAST, 2.0)
        assert result.value == pytest.approx(2.0 ** 1.5 / 1.5)
        assert result.speed_tag == "n^1.5*k_n^-0.75"

    @pytest.mark.parametrize("p", [1.0, 1.25, 1.75])
    def test_lp_projection_fast_case_is_norm_rate(self, p):
        """测试 s_n ≫ k_n 时与范数速率一致"""
        for x in (0.3, 1.0, 2.5):
            assert rate_lp_projection(p, LpCase.SUB_FAST, x).value == \
                pytest.approx(rate_lp_norm(p, x), abs=1e-12)


class TestVariationalForms:
    """变分形式测试"""

    @pytest.mark.parametrize("p", [1.0, 1.5])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_gaussian_angular_infimum_matches_closed_form(self, p, x):
        """测试 inf_c {(x/c)^p/p + c²/2} 的数值解与闭式一致"""
        jx = RateFunctionHandle(func=lambda y: y ** p / p, center=0.0)
        numeric = rate_constant_regime(jx, ConstantVariant.B, x)
        closed = (p + 2.0) / (2.0 * p) * x ** (2.0 * p / (p + 2.0))
        assert numeric == pytest.approx(closed, rel=1e-6)

    def test_constant_regime_at_zero(self):
        """测试原点处取闭包值"""
        assert rate_constant_regime(CHI, ConstantVariant.A_STAR, 0.0) == 0.0
        assert rate_constant_regime(CHI, ConstantVariant.A_STAR, -1.0) == math.inf

    def test_degenerate_norm_sphere_cost(self):
        """测试退化范数速率下的球面角度代价"""
        jx = RateFunctionHandle.degenerate(1.0)
        value = rate_constant_regime(jx, ConstantVariant.A_STAR, 0.5)
        assert value == pytest.approx(-0.5 * math.log(0.75))
        assert rate_constant_regime(jx, ConstantVariant.A_STAR, 1.0) == math.inf

    def test_rate_product_gaussian(self):
        """测试 Λ^*(x²) 与 χ² 速率一致"""
        lam = log_mgf_square_pgn(2.0)
        assert rate_product(lam, 1.5) == pytest.approx(chi_square_rate(2.25), abs=1e-8)
        assert rate_product(lam, -1.0) == math.inf

    def test_lambda_q_star_gaussian(self):
        """测试 q = 2 时 Λ_q^* 为 χ² 速率"""
        assert lambda_q_star(2.0, 3.0) == pytest.approx(chi_square_rate(3.0), abs=1e-8)
        assert lambda_q_star(2.0, 0.0) == math.inf

    def test_constant_regime_qnorm_radius(self):
        """测试 q 范数取最小欧氏半径 x·k^{min(0, 1/2-1/q)}"""
        x = 1.3
        base = rate_constant_regime(CHI, ConstantVariant.B, x)
        assert constant_regime_qnorm(CHI, ConstantVariant.B, 2.0, 4, x) == pytest.approx(base)
        assert constant_regime_qnorm(CHI, ConstantVariant.B, 4.0, 4, x) == pytest.approx(base)
        assert constant_regime_qnorm(CHI, ConstantVariant.B, 1.0, 4, x) == \
            pytest.approx(rate_constant_regime(CHI, ConstantVariant.B, x / 2.0))
        with pytest.raises(InvalidQ):
            constant_regime_qnorm(CHI, ConstantVariant.B, 0.5, 4, x)

    def test_sublinear_norm_cases(self):
        """测试次线性范数速率的各情形"""
        jx = RateFunctionHandle.degenerate(1.0)
        assert rate_sublinear_norm(SublinearCase.R0, CHI, 2.0) == pytest.approx(chi_square_rate(4.0))
        assert rate_sublinear_norm(SublinearCase.R_INF, jx, 0.6) == pytest.approx(0.18)
        assert rate_sublinear_norm(SublinearCase.A_STAR, jx, 0.6) == \
            pytest.approx(-0.5 * math.log(0.64))
        assert rate_sublinear_norm(SublinearCase.A_STAR, jx, 1.2) == math.inf
        assert rate_sublinear_norm(SublinearCase.R_POS, jx, 1.0, 4.0) == \
            pytest.approx(1.5 - math.log(2.0))
        assert rate_sublinear_norm(SublinearCase.R_INF, CHI, 0.0) == 0.0
        assert rate_sublinear_norm(SublinearCase.R_INF, CHI, -1.0) == math.inf
        with pytest.raises(InvalidP):
            rate_sublinear_norm(SublinearCase.R_POS, CHI, 1.0, 0.0)

    def test_sublinear_empirical_cases(self):
        """测试次线性经验测度速率的各情形"""
        wide = GaussianMeasure(2.0)
        assert rate_sublinear_empirical(SpeedCase.FAST, CHI, 1.0, wide) == \
            pytest.approx(1.5 - math.log(2.0))
        assert rate_sublinear_empirical(SpeedCase.SLOW, CHI, 1.0, GaussianMeasure(1.5)) == \
            pytest.approx(chi_square_rate(2.25))
        hist = HistogramMeasure(np.array([-1.0, 1.0]), np.array([1.0]))
        assert rate_sublinear_empirical(SpeedCase.SLOW, CHI, 1.0, hist) == math.inf
        assert rate_sublinear_empirical(SpeedCase.BALANCED, CHI, 1.0, GaussianMeasure(1.0)) == \
            pytest.approx(0.0, abs=1e-7)
        degenerate = RateFunctionHandle.degenerate(2.0)
        assert rate_sublinear_empirical(SpeedCase.BALANCED, degenerate, 2.0, GaussianMeasure(1.0)) == \
            pytest.approx(relative_entropy_to_gaussian(GaussianMeasure(1.0), 2.0))

    def test_sublinear_slow_case(self):
        """测试 s_n ≪ k_n 时按 LLN 缩放"""
        value = rate_sublinear_qnorm(1.0, SpeedCase.SLOW, CHI, 1.0, 2.0)
        assert value == pytest.approx(chi_square_rate((2.0 / gaussian_abs_moment(1.0)) ** 2))

    def test_sublinear_qnorm_range(self):
        """测试 q 超出 [1, 2]"""
        with pytest.raises(InvalidQ):
            rate_sublinear_qnorm(3.0, SpeedCase.FAST, CHI, 1.0, 1.0)

    @pytest.mark.parametrize("x", [0.5, 1.0, 1.5])
    def test_sublinear_fast_q2_is_chi_square(self, x):
        """测试 q = 2, m = 1 时 fast 情形退化为 χ² 速率"""
        value = rate_sublinear_qnorm(2.0, SpeedCase.FAST, CHI, 1.0, x)
        assert value == pytest.approx(chi_square_rate(x * x), abs=1e-8)


class TestLinearRegime:
    """线性规模测试"""

    @pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
    def test_ratio_rate_vanishes_at_lln_point(self, lam):
        """测试 J_{2,λ} 在 LLN 点为零"""
        assert rate_J_q_lambda(2.0, lam, lln_ratio(2.0, lam)) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.slow
    def test_ratio_rate_vanishes_at_lln_point_q1(self):
        """测试 J_{1,λ} 在 LLN 点为零且两侧为正"""
        lam = 0.5
        z0 = lln_ratio(1.0, lam)
        assert rate_J_q_lambda(1.0, lam, z0) == pytest.approx(0.0, abs=1e-5)
        assert rate_J_q_lambda(1.0, lam, 1.2 * z0) > 1e-4

    def test_ratio_rate_outside_cone(self):
        """测试可达范围之外"""
        assert rate_J_q_lambda(1.0, 0.5, 10.0) == math.inf

    @pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
    @pytest.mark.parametrize("z", [0.3, 0.6, 0.9])
    def test_gaussian_family_entropy_is_ratio_rate(self, lam, z):
        """测试 λσ² = z² 的高斯测度上 H_λ 等于 J_{2,λ}(z)"""
        nu = GaussianMeasure(z / math.sqrt(lam))
        expected = gaussian_ratio_rate(lam, z)
        assert entropy_H_lambda(lam, nu) == pytest.approx(expected, abs=1e-6)
        assert rate_J_q_lambda(2.0, lam, z) == pytest.approx(expected, abs=1e-6)

    def test_gaussian_linear_qnorm(self):
        """测试高斯向量在线性规模下的闭式速率 λ·χ(x²/λ)"""
        lam, x = 0.5, 1.0
        value = rate_linear_qnorm(2.0, lam, CHI, LinearCase.FULL, x)
        assert value == pytest.approx(lam * chi_square_rate(x * x / lam), abs=1e-6)

    def test_linear_slow_case(self):
        """测试 slow 情形"""
        value = rate_linear_qnorm(2.0, 0.5, CHI, LinearCase.SLOW, 1.0)
        assert value == pytest.approx(chi_square_rate(2.0))

    def test_linear_invalid_lambda(self):
        """测试非法 λ"""
        with pytest.raises(InvalidMeasure):
            rate_linear_qnorm(2.0, 0.0, CHI, LinearCase.FULL, 1.0)

    def test_linear_empirical_zero_at_gaussian(self):
        """测试经验测度速率在标准高斯处为零"""
        value = rate_linear_empirical(0.5, CHI, LinearCase.FULL, GaussianMeasure(1.0))
        assert value == pytest.approx(0.0, abs=1e-7)

    def test_linear_empirical_slow(self):
        """测试 slow 情形只接受高斯测度"""
        assert rate_linear_empirical(0.5, CHI, LinearCase.SLOW, GaussianMeasure(2.0)) == \
            pytest.approx(chi_square_rate(4.0))
        hist = HistogramMeasure(np.array([-1.0, 1.0]), np.array([1.0]))
        assert rate_linear_empirical(0.5, CHI, LinearCase.SLOW, hist) == math.inf


class TestMeasures:
    """测度参数测试"""

    @pytest.mark.parametrize("lam", [0.3, 1.0])
    def test_entropy_vanishes_at_standard_gaussian(self, lam):
        """测试 H_λ(γ₁) = 0"""
        assert entropy_H_lambda(lam, GaussianMeasure(1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_entropy_outside_moment_bound(self):
        """测试 λ M₂ >= 1"""
        assert entropy_H_lambda(0.5, GaussianMeasure(1.5)) == math.inf
        assert entropy_H_lambda(1.0, GaussianMeasure(1.1)) == math.inf

    def test_relative_entropy(self):
        """测试相对熵"""
        assert relative_entropy_to_gaussian(GaussianMeasure(2.0), 1.0) == \
            pytest.approx(1.5 - math.log(2.0))
        hist = HistogramMeasure(np.array([-1.0, 1.0]), np.array([1.0]))
        expected = -math.log(2.0) + 0.5 * math.log(2.0 * math.pi) + 1.0 / 6.0
        assert relative_entropy_to_gaussian(hist, 1.0) == pytest.approx(expected)

    def test_histogram_rate_roundoff_is_clamped(self, monkeypatch):
        """测试舍入误差内的负值截断为 0 且不告警"""
        hist = HistogramMeasure(np.array([-1.0, 1.0]), np.array([1.0]))
        exact = 0.5 * math.log(2.0 * math.pi) + 1.0 / 6.0
        monkeypatch.setattr(HistogramMeasure, "entropy", lambda self: exact + 1e-12)
        recorder = MagicMock()
        monkeypatch.setattr(measures_module, "logger", recorder)
        assert relative_entropy_to_gaussian(hist, 1.0) == 0.0
        recorder.warning.assert_not_called()

    def test_histogram_rate_negative_bias_is_reported(self, monkeypatch):
        """测试直方图速率明显为负时原样返回并告警"""
        hist = HistogramMeasure(np.array([-1.0, 1.0]), np.array([1.0]))
        monkeypatch.setattr(HistogramMeasure, "entropy", lambda self: 5.0)
        recorder = MagicMock()
        monkeypatch.setattr(measures_module, "logger", recorder)
        value = relative_entropy_to_gaussian(hist, 1.0)
        assert value == pytest.approx(-5.0 + 0.5 * math.log(2.0 * math.pi) + 1.0 / 6.0)
        assert entropy_H_lambda(0.5, hist) < 0.0
        assert recorder.warning.call_count == 2
        assert recorder.warning.call_args.args[0] == "negative_measure_rate"

    def test_histogram_validation(self):
        """测试直方图校验"""
        with pytest.raises(InvalidSimplex):
            HistogramMeasure(np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.6]))
        with pytest.raises(InvalidMeasure):
            HistogramMeasure(np.array([0.0, 0.0]), np.array([1.0]))

    def test_histogram_from_samples(self, rng):
        """测试从样本构造直方图"""
        hist = HistogramMeasure.from_samples(rng.standard_normal(5000))
        assert hist.second_moment() == pytest.approx(1.0, abs=0.1)

    def test_gaussian_measure_sigma(self):
        """测试非正 σ"""
        with pytest.raises(InvalidMeasure):
            GaussianMeasure(0.0)


class TestRateHandle:
    """速率句柄测试"""

    def test_domain_and_clamp(self):
        """测试定义域外为 +inf, 微小负值截断"""
        handle = RateFunctionHandle(func=lambda x: -1e-15, domain=(0.0, 1.0))
        assert handle(0.5) == 0.0
        assert handle(2.0) == math.inf

    def test_degenerate(self):
        """测试退化速率"""
        handle = RateFunctionHandle.degenerate(2.0)
        assert handle.kind == RateKind.DEGENERATE
        assert handle(2.0) == 0.0
        assert handle(2.5) == math.inf

    @pytest.mark.parametrize("dist, two_sided", [
        (GAUSSIAN, True),
        (LpBall(2.0), True),
        (LpBall(1.0), False),
        (LpBall(1.5), False),
        (Product(MarginalKind.PGN, p=3.0), True),
        (GaussianMixture((4.0,), (1.0,)), True),
    ])
    def test_norm_handles_vanish_at_center(self, dist, two_sided):
        """测试范数速率在 m 处为零, 离开 0.2 后为正"""
        ldp = norm_ldp(dist)
        m = ldp.m
        assert ldp.jx(m) == pytest.approx(0.0, abs=1e-6)
        assert ldp.jx(m + 0.2) > 0.0
        if two_sided:
            assert ldp.jx(m - 0.2) > 0.0


class TestPredictRate:
    """速率分派测试"""

    @pytest.mark.parametrize("k", [1, 3])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_gaussian_constant(self, k, x):
        """测试高斯向量常数维数投影的速率 x²/2"""
        value, tag = predict_rate(GAUSSIAN, constant(k), NORM, x)
        assert value == pytest.approx(0.5 * x * x, abs=1e-6)
        assert tag == "n"

    def test_l2_ball_constant(self):
        """测试 ℓ_2 球一维投影的速率 -½ log(1-x²)"""
        value, _ = predict_rate(LpBall(2.0), constant(1), NORM, 0.5)
        assert value == pytest.approx(0.143841, abs=1e-6)

    @pytest.mark.parametrize("p", [1.0, 1.5])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_lp_ball_constant(self, p, x):
        """测试 p < 2 的 ℓ_p 球常数维数投影"""
        value, tag = predict_rate(LpBall(p), constant(2), NORM, x)
        assert value == pytest.approx((p + 2.0) / (2.0 * p) * x ** (2.0 * p / (p + 2.0)))
        assert tag == f"n^{2.0 * p / (2.0 + p):.6g}"

    def test_gaussian_sublinear_norm(self):
        """测试高斯向量次线性规模下的范数速率"""
        value, tag = predict_rate(GAUSSIAN, sublinear(0.5), NORM, 1.0)
        assert value == pytest.approx(0.5, abs=1e-6)
        assert tag == "n"

    def test_gaussian_sublinear_norm_kn(self):
        """测试 k_n 归一化范数的速度与速率"""
        value, tag = predict_rate(GAUSSIAN, sublinear(0.5), NORM_KN, 1.5)
        assert value == pytest.approx(chi_square_rate(2.25), abs=1e-7)
        assert tag == "k_n"
        speed, _ = rate_speed(GAUSSIAN, sublinear(0.5), NORM_KN)
        assert speed(100) == 10.0

    def test_l1_ball_sublinear_fast(self):
        """测试 ℓ_1 球 α > 2/3 时的速率 x"""
        value, tag = predict_rate(LpBall(1.0), sublinear(0.8), NORM, 1.7)
        assert value == pytest.approx(1.7)
        assert tag == "n^1*k_n^-0.5"

    def test_gaussian_linear(self):
        """测试高斯向量线性规模下的速率"""
        value, tag = predict_rate(GAUSSIAN, linear(0.5), NORM, 1.0)
        assert value == pytest.approx(0.5 * chi_square_rate(2.0), abs=1e-6)
        assert tag == "n"

    def test_constant_rejects_kn_quantity(self):
        """测试常数规模不支持 k_n 归一化"""
        with pytest.raises(Unsupported):
            predict_rate(GAUSSIAN, constant(2), NORM_KN, 1.0)

    @pytest.mark.parametrize("regime", [sublinear(0.5), linear(0.5)])
    def test_empirical_is_measure_valued(self, regime):
        """测试经验测度没有标量速率"""
        with pytest.raises(Unsupported):
            predict_rate(GAUSSIAN, regime, EMPIRICAL, 1.0)

    def test_mixture_without_center(self):
        """测试没有唯一中心的混合分布"""
        mixture = GaussianMixture((1.0, 4.0), (0.5, 0.5))
        with pytest.raises(Unsupported):
            predict_rate(mixture, sublinear(0.5), NORM_KN, 1.0)

    def test_sublinear_norm_requires_q2(self):
        """测试次线性范数速率只支持 q = 2"""
        with pytest.raises(InvalidQ):
            predict_rate(GAUSSIAN, sublinear(0.5), QuantitySpec(kind=QuantityKind.NORM, q=1.0), 1.0)
