"""
Specification Grammar Tests
"""
import numpy as np
import pytest

from ldp_toolkit.core.distributions import GaussianMixture, LpBall, OrliczBall, Product
from ldp_toolkit.errors import NotSuperquadratic, ParseError, SemanticError
from ldp_toolkit.protocol.grammar import parse_distribution, parse_quantity, parse_regime
from ldp_toolkit.protocol.models import MarginalKind, QuantityKind, RegimeKind
from ldp_toolkit.protocol.orlicz_expr import parse_orlicz, parse_orlicz_function, tokenize


class TestDistributionGrammar:
    """分布字符串测试"""

    def test_families(self):
        """测试各分布族"""
        assert parse_distribution("lp:p=1") == LpBall(1.0)
        assert parse_distribution("product:normal") == Product(MarginalKind.NORMAL)
        assert parse_distribution("product:rademacher") == Product(MarginalKind.RADEMACHER)
        assert parse_distribution("product:pgn:p=3") == Product(MarginalKind.PGN, 3.0)
        assert parse_distribution("mixture:v=1,4;w=0.5,0.5") == \
            GaussianMixture((1.0, 4.0), (0.5, 0.5))

    def test_orlicz(self):
        """测试 Orlicz 球"""
        dist = parse_distribution("orlicz:abs(x)^4")
        assert isinstance(dist, OrliczBall)
        assert dist.V(2.0) == pytest.approx(16.0)
        assert dist.V(-2.0) == pytest.approx(16.0)

    def test_surrounding_whitespace(self):
        """测试首尾空白"""
        assert parse_distribution("  lp:p=2 ") == LpBall(2.0)

    @pytest.mark.parametrize("src, offset", [
        ("cube:n=3", 0),
        ("lp:q=1", 3),
        ("lp:p=abc", 5),
        ("product:cauchy", 8),
        ("lp:p", 3),
        ("", 0),
    ])
    def test_parse_errors(self, src, offset):
        """测试语法错误与字节偏移"""
        with pytest.raises(ParseError) as exc_info:
            parse_distribution(src)
        assert exc_info.value.offset == offset
        assert exc_info.value.code == "LDP_CLI_001"

    def test_byte_offset_after_multibyte_character(self):
        """测试多字节字符之后的偏移按字节计"""
        with pytest.raises(ParseError) as exc_info:
            parse_distribution("mixture:v=١,x;w=1")
        assert exc_info.value.offset == 13

    @pytest.mark.parametrize("src, offset", [
        ("orlicz:abs(x)^", 14),
        ("orlicz:abs(x", 12),
        ("orlicz:foo(x)", 7),
        ("orlicz:abs(x)^4 $", 16),
        ("orlicz:abs(x)^(2*x)", 14),
    ])
    def test_orlicz_offsets(self, src, offset):
        """测试 Orlicz 表达式错误的偏移相对整个字符串"""
        with pytest.raises(ParseError) as exc_info:
            parse_distribution(src)
        assert exc_info.value.offset == offset

    @pytest.mark.parametrize("src", ["orlicz:x", "orlicz:x^2 + 1", "orlicz:-x^2"])
    def test_orlicz_semantic_errors(self, src):
        """测试不是 Orlicz 函数的表达式"""
        with pytest.raises(SemanticError):
            parse_distribution(src)

    def test_subquadratic_orlicz_ball(self):
        """测试次二次 Orlicz 球"""
        with pytest.raises(NotSuperquadratic):
            parse_distribution("orlicz:abs(x)^1.5")


class TestRegimeGrammar:
    """规模字符串测试"""

    def test_regimes(self):
        """测试三种规模"""
        constant = parse_regime("constant:k=3")
        assert constant.kind == RegimeKind.CONSTANT and constant.k == 3
        assert parse_regime("sublinear:alpha=0.6").alpha == pytest.approx(0.6)
        assert parse_regime("linear:lambda=0.5").lam == pytest.approx(0.5)

    def test_non_integer_k(self):
        """测试非整数 k"""
        with pytest.raises(ParseError) as exc_info:
            parse_regime("constant:k=2.5")
        assert exc_info.value.offset == 11

    @pytest.mark.parametrize("src", ["linear:lambda=1.5", "sublinear:alpha=1", "constant:k=0"])
    def test_out_of_range(self, src):
        """测试参数越界"""
        with pytest.raises(SemanticError):
            parse_regime(src)

    @pytest.mark.parametrize("src", ["quadratic:k=1", "constant:alpha=0.5", "constant:k=1;k2=3"])
    def test_malformed(self, src):
        """测试格式错误"""
        with pytest.raises(ParseError):
            parse_regime(src)


class TestQuantityGrammar:
    """统计量字符串测试"""

    def test_quantities(self):
        """测试统计量"""
        assert parse_quantity("norm").q == 2.0
        kn = parse_quantity("norm_kn:q=1")
        assert kn.kind == QuantityKind.NORM_KN and kn.q == 1.0
        assert parse_quantity("empirical").kind == QuantityKind.EMPIRICAL

    def test_empirical_takes_no_parameters(self):
        """测试 empirical 带参数"""
        with pytest.raises(ParseError):
            parse_quantity("empirical:q=2")

    def test_q_below_one(self):
        """测试 q < 1"""
        with pytest.raises(SemanticError):
            parse_quantity("norm:q=0.5")

    def test_unknown(self):
        """测试未知统计量"""
        with pytest.raises(ParseError):
            parse_quantity("frobenius")


class TestOrliczExpression:
    """Orlicz 表达式测试"""

    def test_precedence(self):
        """测试 ^ 高于一元负号高于乘除高于加减"""
        expr = parse_orlicz("2*x^2 + x^4/4")
        assert float(expr(np.array([2.0]))[0]) == pytest.approx(12.0)

    def test_fractional_power_uses_absolute_value(self):
        """测试非整数指数取绝对值"""
        V = parse_orlicz_function("x^2.5")
        assert V(-4.0) == pytest.approx(32.0)

    def test_cosh(self, cosh_orlicz):
        """测试 cosh(x) - 1 与内置函数一致"""
        V = parse_orlicz_function("cosh(x) - 1")
        grid = np.linspace(-3.0, 3.0, 13)
        assert np.allclose(V(grid), cosh_orlicz(grid))
        assert V.label == "cosh(x) - 1"

    def test_tokens(self):
        """测试词法分析"""
        kinds = [t.kind for t in tokenize("abs(x)^1.5e0")]
        assert kinds == ["name", "(", "name", ")", "^", "number", "end"]

    def test_deep_nesting(self):
        """测试过深嵌套"""
        src = "(" * 5000 + "x" + ")" * 5000
        with pytest.raises(ParseError):
            parse_orlicz(src)

    @pytest.mark.parametrize("src", ["", "   "])
    def test_empty(self, src):
        """测试空表达式"""
        with pytest.raises(ParseError):
            parse_orlicz(src)

    @pytest.mark.parametrize("src", ["x^(1/0)", "x^(0/0)"])
    def test_non_finite_exponent(self, src):
        """测试指数不是有限数"""
        with pytest.raises(ParseError):
            parse_orlicz(src)

    def test_fuzz(self):
        """测试随机输入只产生解析错误或语义错误"""
        rng = np.random.default_rng(7)
        alphabet = list("x()+-*/^0123456789. abscohe")
        for _ in range(500):
            length = int(rng.integers(1, 20))
            src = "".join(rng.choice(alphabet, size=length))
            try:
                parse_orlicz(src)
            except (ParseError, SemanticError):
                pass
