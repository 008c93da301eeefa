"""
Distribution Family Tests
"""
import math

import numpy as np
import pytest
from scipy import stats

from ldp_toolkit.core.distributions import (
    GaussianMixture,
    GrowthKind,
    LpBall,
    OrliczBall,
    OrliczFunction,
    Product,
    classify_speed_ratio,
    family_name,
    ldp_metadata,
    norm_ldp,
    sample_gaussian_mixture,
    sample_lp_ball,
    sample_norm2,
    sample_orlicz_ball,
    sample_pgn,
    sample_product,
    sample_vector,
    thin_shell_center,
    thin_shell_centers,
)
from ldp_toolkit.core.ratefn import mp
from ldp_toolkit.errors import (
    DegenerateBody,
    InvalidP,
    InvalidSimplex,
    NotSuperquadratic,
    SemanticError,
    Unsupported,
)
from ldp_toolkit.protocol.models import (
    AssumptionTag,
    ConstantVariant,
    LinearCase,
    MarginalKind,
    RegimeKind,
    RegimeSpec,
    SpeedCase,
    SublinearCase,
)


class TestValidation:
    """参数校验测试"""

    @pytest.mark.parametrize("p", [0.5, 0.0, math.inf])
    def test_lp_ball_rejects_small_p(self, p):
        """测试 p < 1 的 ℓ_p 球"""
        with pytest.raises(InvalidP):
            LpBall(p)

    def test_mixture_weights_must_sum_to_one(self):
        """测试权重不在单纯形上"""
        with pytest.raises(InvalidSimplex):
            GaussianMixture((1.0, 2.0), (0.5, 0.6))

    def test_mixture_lengths(self):
        """测试方差与权重长度不一致"""
        with pytest.raises(InvalidSimplex):
            GaussianMixture((1.0, 2.0), (1.0,))

    def test_mixture_positive_variances(self):
        """测试非正方差"""
        with pytest.raises(InvalidSimplex):
            GaussianMixture((0.0,), (1.0,))

    def test_pgn_product_p(self):
        """测试 pgn 边缘的指数"""
        with pytest.raises(InvalidP):
            Product(MarginalKind.PGN, 0.5)

    def test_labels(self):
        """测试分布标签"""
        assert LpBall(1.0).label() == "lp:p=1"
        assert Product(MarginalKind.NORMAL).label() == "product:normal"
        assert Product(MarginalKind.PGN, 3.0).label() == "product:pgn:p=3"
        assert GaussianMixture((1.0, 4.0), (0.5, 0.5)).label() == "mixture:v=1,4;w=0.5,0.5"
        assert family_name(LpBall(2.0)) == "lp"


class TestSamplers:
    """采样器测试"""

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
    def test_lp_samples_in_ball(self, rng, p):
        """测试样本落在 n^{1/p} B_p^n 内"""
        n = 50
        x = sample_lp_ball(p, n, rng, size=500)
        assert x.shape == (500, n)
        radius = np.sum(np.abs(x) ** p, axis=1) ** (1.0 / p)
        assert np.all(radius <= n ** (1.0 / p) * (1.0 + 1e-12))

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
    def test_pgn_moment(self, rng, p):
        """测试 p-广义正态的 E|ξ|^p = 1"""
        xi = sample_pgn(p, 100_000, rng)
        assert np.mean(np.abs(xi) ** p) == pytest.approx(1.0, abs=0.03)

    def test_pgn_second_moment_matches_center(self, rng):
        """测试 E ξ² = m(p)²"""
        p = 3.0
        xi = sample_pgn(p, 200_000, rng)
        assert np.mean(xi * xi) == pytest.approx(mp(p) ** 2, rel=0.02)

    def test_single_vector_shape(self, rng):
        """测试不指定 size 时返回一维数组"""
        assert sample_vector(Product(MarginalKind.RADEMACHER), 7, rng).shape == (7,)
        assert sample_vector(GaussianMixture((1.0,), (1.0,)), 7, rng).shape == (7,)

    def test_point_marginal(self, rng):
        """测试点质量边缘"""
        assert np.all(sample_vector(Product(MarginalKind.POINT), 5, rng, size=3) == 1.0)

    def test_product_marginals(self, rng):
        """测试乘积分布的边缘"""
        signs = sample_product(MarginalKind.RADEMACHER, 1000, rng)
        assert set(np.unique(signs)) == {-1.0, 1.0}
        assert abs(signs.mean()) < 0.15
        gauss = sample_product(MarginalKind.NORMAL, 3, rng, size=20000)
        assert gauss.shape == (20000, 3)
        assert np.mean(gauss ** 2) == pytest.approx(1.0, abs=0.03)

    def test_mixture_draws_one_component_per_vector(self, rng):
        """测试每个向量只抽一次分量"""
        x = sample_gaussian_mixture([1.0, 100.0], [0.5, 0.5], 400, rng, size=200)
        per_vector = np.mean(x ** 2, axis=1)
        # 每行的经验方差接近 1 或 100
        assert np.all((np.abs(per_vector - 1.0) < 0.5) | (np.abs(per_vector - 100.0) < 50.0))
        assert 40 < np.sum(per_vector > 10.0) < 160

    def test_mixture_rejects_bad_weights(self, rng):
        """测试权重不在单纯形上"""
        with pytest.raises(InvalidSimplex):
            sample_gaussian_mixture([1.0, 2.0], [0.7, 0.7], 3, rng)

    def test_norm2_radial_shortcut(self, rng):
        """测试 ℓ_2 球的径向采样"""
        norms = sample_norm2(LpBall(2.0), 100, 1000, rng)
        assert np.all(norms <= 10.0)
        assert np.median(norms) > 9.5

    def test_norm2_generic_path(self, rng):
        """测试没有径向表示时按块生成向量"""
        norms = sample_norm2(LpBall(1.0), 40, 200, rng)
        assert norms.shape == (200,)
        assert np.all(np.isfinite(norms))

    def test_orlicz_hit_and_run_stays_inside(self, rng, quartic):
        """测试 hit-and-run 样本满足 Σ V(x_i) <= n"""
        n = 20
        x = sample_orlicz_ball(quartic, n, burnin=5, thin=1, rng=rng, size=50)
        assert x.shape == (50, n)
        assert np.all(np.sum(quartic(x), axis=1) <= n * (1.0 + 1e-9))

    def test_pgn_two_is_standard_normal(self, rng):
        """测试 p = 2 时与 Φ 的 KS 检验"""
        xi = sample_pgn(2.0, 100_000, rng)
        assert stats.kstest(xi, "norm").pvalue >= 0.01

    @pytest.mark.parametrize("p", [1.0, 3.0])
    def test_lp_radial_law(self, rng, p):
        """测试 ‖X‖_p / n^{1/p} 的分布函数为 t^n (DKW 带)"""
        n, size = 20, 100_000
        x = sample_lp_ball(p, n, rng, size=size)
        radius = np.sum(np.abs(x) ** p, axis=1) ** (1.0 / p) / n ** (1.0 / p)
        band = math.sqrt(math.log(2.0 / 0.01) / (2.0 * size))
        assert abs(np.mean(radius <= 0.9) - 0.9 ** n) <= band
        assert stats.kstest(radius, lambda t: np.clip(t, 0.0, 1.0) ** n).statistic <= band

    @pytest.mark.slow
    def test_orlicz_hit_and_run_quadratic_marginal(self, rng, quadratic):
        """测试 V = x² 时坐标边缘密度 ∝ (1 - x²/n)^{(n-1)/2}"""
        n = 50
        x = sample_orlicz_ball(quadratic, n, burnin=200, thin=10, rng=rng, size=10_000)
        # (x_1/√n + 1)/2 ~ Beta((n+1)/2, (n+1)/2)
        w = 0.5 * (x[:, 0] / math.sqrt(n) + 1.0)
        law = stats.beta(0.5 * (n + 1), 0.5 * (n + 1))
        assert stats.kstest(w, law.cdf).pvalue >= 0.01

    def test_orlicz_sampler_degenerate_body(self, rng):
        """测试水平点越界时条件区间塌缩"""
        broken = OrliczFunction(func=lambda a: a * a, label="broken",
                                inverse=lambda level: 3.0 * np.sqrt(level))
        with pytest.raises(DegenerateBody):
            sample_orlicz_ball(broken, 5, burnin=5, thin=1, rng=rng, size=50)

    def test_orlicz_sampler_sweeps(self, rng, quartic):
        """测试预热与间隔参数"""
        with pytest.raises(InvalidP):
            sample_orlicz_ball(quartic, 5, burnin=0, thin=1, rng=rng)


class TestOrliczFunction:
    """Orlicz 函数测试"""

    @pytest.mark.parametrize("V, kind", [
        (OrliczFunction.power(4.0), GrowthKind.SUPER),
        (OrliczFunction.cosh(), GrowthKind.SUPER),
        (OrliczFunction.power(2.0), GrowthKind.BORDERLINE),
        (OrliczFunction.power(1.5), GrowthKind.SUB),
    ])
    def test_growth(self, V, kind):
        """测试增长类型"""
        assert V.growth() == kind

    def test_subquadratic_ball_rejected(self):
        """测试次二次 Orlicz 球"""
        with pytest.raises(NotSuperquadratic):
            OrliczBall(OrliczFunction.power(1.5))

    def test_validate_nonzero_origin(self):
        """测试 V(0) != 0"""
        with pytest.raises(SemanticError):
            OrliczFunction(func=lambda a: a * a + 1.0).validate()

    def test_validate_nonconvex(self):
        """测试非凸函数"""
        with pytest.raises(SemanticError):
            OrliczFunction(func=np.sqrt).validate()

    def test_bounded_domain(self):
        """测试 D_V 之外取 +inf"""
        V = OrliczFunction(func=lambda a: a * a, bound=1.0)
        assert V(0.5) == pytest.approx(0.25)
        assert V(1.5) == math.inf

    def test_level_point_with_inverse(self, quartic):
        """测试解析反函数"""
        assert quartic.level_point(np.array([16.0]))[0] == pytest.approx(2.0)

    def test_level_point_bisection(self):
        """测试无反函数时的二分"""
        V = OrliczFunction(func=lambda a: np.cosh(a) - 1.0)
        t = V.level_point(np.array([math.cosh(1.0) - 1.0, 0.0]))
        assert t[0] == pytest.approx(1.0, abs=1e-12)
        assert t[1] == pytest.approx(0.0, abs=1e-7)


class TestLdpMetadata:
    """LDP 元数据测试"""

    def test_gaussian_norm(self):
        """测试高斯向量的范数 LDP"""
        ldp = norm_ldp(Product(MarginalKind.NORMAL))
        assert ldp.speed_tag == "n"
        assert ldp.m == 1.0
        assert ldp.assumption_tag == AssumptionTag.A_STAR
        assert ldp.jx(1.0) == 0.0
        assert ldp.jx(2.0) == pytest.approx(0.5 * 3 - math.log(2.0))

    def test_rademacher_is_degenerate(self):
        """测试 Rademacher 的退化速率"""
        ldp = norm_ldp(Product(MarginalKind.RADEMACHER))
        assert ldp.jx.is_degenerate
        assert ldp.jx(1.0) == 0.0
        assert ldp.jx(1.1) == math.inf

    def test_l2_ball_rate(self):
        """测试 ℓ_2 球的范数速率 -log x"""
        ldp = norm_ldp(LpBall(2.0))
        assert ldp.jx(0.5) == pytest.approx(math.log(2.0))
        assert ldp.jx(1.2) == math.inf

    def test_small_p_ball_uses_recentred_rate(self):
        """测试 p < 2 的 ℓ_p 球 (Assumption A)"""
        ldp = norm_ldp(LpBall(1.0))
        assert ldp.assumption_tag == AssumptionTag.A
        assert ldp.m == pytest.approx(math.sqrt(2.0))
        assert ldp.jx(ldp.m) == 0.0

    def test_pgn_below_two_unsupported(self):
        """测试 p < 2 的 pgn 乘积"""
        with pytest.raises(Unsupported):
            norm_ldp(Product(MarginalKind.PGN, 1.5))

    def test_mixture_has_no_unique_center(self):
        """测试多分量混合没有唯一极小点"""
        ldp = norm_ldp(GaussianMixture((1.0, 4.0), (0.5, 0.5)))
        assert ldp.m is None
        assert ldp.jx(1.0) == 0.0
        assert ldp.jx(2.0) == 0.0

    def test_lp_metadata_by_regime(self):
        """测试 ℓ_1 球在各规模下的情形"""
        ball = LpBall(1.0)
        constant = ldp_metadata(ball, RegimeSpec(kind=RegimeKind.CONSTANT, k=2))
        assert constant.assumption_tag == AssumptionTag.B
        assert constant.case == ConstantVariant.B.value
        assert constant.speed_tag == "n^0.666667"
        slow = ldp_metadata(ball, RegimeSpec(kind=RegimeKind.SUBLINEAR, alpha=0.5))
        assert slow.case == SublinearCase.R_INF.value
        fast = ldp_metadata(ball, RegimeSpec(kind=RegimeKind.SUBLINEAR, alpha=0.8))
        assert fast.case == SublinearCase.R0.value
        assert fast.speed(100) == pytest.approx(100 / math.sqrt(40))
        linear = ldp_metadata(ball, RegimeSpec(kind=RegimeKind.LINEAR, lam=0.5))
        assert linear.case == LinearCase.SLOW.value

    def test_default_metadata_case(self):
        """测试 A* 情形的默认分派"""
        meta = ldp_metadata(Product(MarginalKind.NORMAL), RegimeSpec(kind=RegimeKind.LINEAR, lam=0.3))
        assert meta.case == LinearCase.FULL.value
        assert meta.speed(10) == 10.0


class TestSpeedRatio:
    """速度比较测试"""

    @pytest.mark.parametrize("speed, k_of, case", [
        (lambda n: float(n), lambda n: math.ceil(n ** 0.5), SpeedCase.FAST),
        (lambda n: n ** 0.5, lambda n: n, SpeedCase.SLOW),
        (lambda n: float(n), lambda n: n, SpeedCase.BALANCED),
        (lambda n: 2.0 * n, lambda n: n, SpeedCase.RATIO),
    ])
    def test_classification(self, speed, k_of, case):
        """测试 s_n 与 k_n 的比较"""
        result, _ = classify_speed_ratio(speed, k_of)
        assert result == case

    def test_ratio_value(self):
        """测试阶梯末端的比值"""
        _, ratio = classify_speed_ratio(lambda n: 2.0 * n, lambda n: n, ladder=[10, 100])
        assert ratio == pytest.approx(2.0)

    def test_short_ladder(self):
        """测试阶梯过短"""
        with pytest.raises(Unsupported):
            classify_speed_ratio(lambda n: n, lambda n: n, ladder=[10])


class TestThinShell:
    """薄壳中心测试"""

    def test_centers(self, quadratic):
        """测试各族的薄壳中心"""
        assert thin_shell_center(LpBall(2.0)) == pytest.approx(1.0)
        assert thin_shell_center(LpBall(1.0)) == pytest.approx(math.sqrt(2.0))
        assert thin_shell_center(Product(MarginalKind.NORMAL)) == 1.0
        assert thin_shell_center(OrliczBall(quadratic)) == pytest.approx(1.0, abs=1e-6)

    def test_mixture_centers(self):
        """测试混合分布每个分量一个中心"""
        dist = GaussianMixture((1.0, 4.0), (0.5, 0.5))
        assert thin_shell_centers(dist) == [1.0, 2.0]
        assert thin_shell_center(dist) == 1.0
