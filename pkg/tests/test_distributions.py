"""Alternative distribution catalog: samplers, CDFs, and the spec grammar.

Every sampler is validated against its own distribution function with a
KS distance bound, the CDFs carry closed-form anchors, and densities are
cross-checked as numerical derivatives of the CDFs.
"""

import numpy as np
import pytest

from unigof import (
    AlternativeSpec,
    cdf,
    parse_spec,
    pdf,
    sample,
    sampler_goodness,
    supports_unit_interval,
)
from unigof.distributions import FAMILIES

# one representative per family, plus decorated composites
CATALOG = [
    "uniform",
    "beta(2,3)",
    "tn(0.25,0.5)",
    "kum(1.5,2.5)",
    "s1(0.7)",
    "s2(1.5)",
    "s3(0.7)",
    "weibull(0.8)",
    "gamma(0.7)",
    "sn(2.5)",
    "lfr(0.5)",
    "eg(0.3)",
    "t(5)",
    "chisq(5)",
    "hn(1)",
    "normal(1,9)",
    "pareto(2)",
    "mix(0.75,beta(2,3),u)",
    "gamma(0.8)+1",
    "mix(0.75,gamma(0.7)+1,pareto(1))",
    "mix(0.5,z,n(1,9))",
]


def spec_of(text: str) -> AlternativeSpec:
    return parse_spec(text)


# ---------------------------------------------------------------------------
# samplers against their own CDFs


@pytest.mark.parametrize("text", CATALOG)
def test_sampler_matches_own_cdf(text, rng):
    # KS distance should sit well inside the 1% band 1.63 / sqrt(n)
    n = 40000
    d = sampler_goodness(spec_of(text), n, rng)
    assert d < 1.63 / np.sqrt(n), f"{text}: d={d:.5f}"


def test_every_family_appears_in_catalog():
    covered = set()

    def visit(s: AlternativeSpec):
        covered.add(s.family)
        if s.mixture is not None:
            visit(s.mixture[1])
            visit(s.mixture[2])

    for text in CATALOG:
        visit(spec_of(text))
    assert covered == set(FAMILIES)


def test_sampling_is_deterministic_given_generator(rng):
    spec = spec_of("beta(2,3)")
    a = sample(spec, 100, np.random.default_rng(7)).values
    b = sample(spec, 100, np.random.default_rng(7)).values
    np.testing.assert_array_equal(a, b)


def test_sample_rejects_empty(rng):
    with pytest.raises(ValueError):
        sample(spec_of("uniform"), 0, rng)


# ---------------------------------------------------------------------------
# CDF anchors and identities


class TestCdf:
    def test_closed_form_anchors(self):
        assert cdf(spec_of("pareto(1)"), 2.0) == pytest.approx(0.5, abs=1e-15)
        assert cdf(spec_of("s2(1.5)"), 0.5) == pytest.approx(0.5, abs=1e-15)
        assert cdf(spec_of("s3(0.7)"), 0.5) == pytest.approx(0.5, abs=1e-15)
        assert cdf(spec_of("beta(2,2)"), 0.5) == pytest.approx(0.5, abs=1e-15)
        assert cdf(spec_of("lfr(0)"), np.log(2.0)) == pytest.approx(0.5, abs=1e-15)
        assert cdf(spec_of("weibull(1)"), np.log(2.0)) == pytest.approx(0.5, abs=1e-15)
        # S1(k) inverts to 1 - (1-x)^k
        assert cdf(spec_of("s1(0.7)"), 0.3) == pytest.approx(
            1.0 - 0.7**0.7, abs=1e-15
        )

    def test_kumaraswamy_unit_shape_is_uniform(self):
        x = np.linspace(0.0, 1.0, 21)
        np.testing.assert_allclose(cdf(spec_of("kum(1,1)"), x), x, atol=1e-15)

    def test_stephens1_unit_shape_is_uniform(self):
        x = np.linspace(0.0, 1.0, 21)
        np.testing.assert_allclose(cdf(spec_of("s1(1)"), x), x, atol=1e-15)

    def test_mixture_is_convex_combination(self):
        a, b = spec_of("beta(2,3)"), spec_of("uniform")
        m = spec_of("mix(0.75,beta(2,3),u)")
        x = np.linspace(0.0, 1.0, 31)
        np.testing.assert_allclose(
            cdf(m, x), 0.75 * np.asarray(cdf(a, x)) + 0.25 * np.asarray(cdf(b, x)),
            atol=1e-15,
        )

    def test_translation_shifts_cdf(self):
        base, shifted = spec_of("gamma(0.8)"), spec_of("gamma(0.8)+1")
        x = np.linspace(0.5, 6.0, 23)
        np.testing.assert_allclose(cdf(shifted, x + 1.0), cdf(base, x), atol=1e-15)
        assert cdf(shifted, 1.0) == 0.0

    def test_monotone_and_bounded(self, rng):
        for text in CATALOG:
            x = np.sort(rng.normal(scale=3.0, size=200)) + 1.0
            F = np.asarray(cdf(spec_of(text), x))
            assert np.all((F >= 0.0) & (F <= 1.0)), text
            assert np.all(np.diff(F) >= -1e-15), text

    def test_normal_second_parameter_is_variance(self):
        # quartiles of N(1, 9) sit at 1 +/- 0.6745 * 3
        assert cdf(spec_of("normal(1,9)"), 1.0 + 3.0 * 0.6744897501960817) == (
            pytest.approx(0.75, abs=1e-12)
        )

    def test_truncnormal_second_parameter_is_variance(self):
        # TN(0, 4): large variance flattens the density towards uniform,
        # and the CDF at the midpoint stays above 1/2 for mu = 0
        assert cdf(spec_of("tn(0,4)"), 0.5) > 0.5


class TestPdf:
    @pytest.mark.parametrize(
        "text, x",
        [
            ("weibull(0.8)", 1.3),
            ("lfr(0.5)", 0.7),
            ("eg(0.3)", 0.9),
            ("sn(2.5)", 0.4),
            ("sn(-1.5)", -0.2),
            ("kum(1.5,2.5)", 0.6),
            ("pareto(2)", 1.8),
            ("gamma(0.8)+1", 2.1),
            ("mix(0.5,z,n(1,9))", 0.3),
        ],
    )
    def test_pdf_is_cdf_derivative(self, text, x):
        spec = spec_of(text)
        h = 1e-6
        slope = (cdf(spec, x + h) - cdf(spec, x - h)) / (2.0 * h)
        assert pdf(spec, x) == pytest.approx(slope, rel=1e-5, abs=1e-8)

    def test_pdf_zero_outside_support(self):
        assert pdf(spec_of("pareto(2)"), 0.5) == 0.0
        assert pdf(spec_of("gamma(1)+1"), 0.5) == 0.0
        assert pdf(spec_of("beta(2,3)"), -0.2) == 0.0

    def test_skewnormal_integrates_to_one(self):
        x = np.linspace(-10.0, 10.0, 20001)
        total = np.trapezoid(pdf(spec_of("sn(2.5)"), x), x)
        assert total == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# validation


class TestSpecValidation:
    def test_unknown_family(self):
        with pytest.raises(ValueError):
            AlternativeSpec("cauchy", (1.0,))

    def test_wrong_arity(self):
        with pytest.raises(ValueError, match="parameter"):
            AlternativeSpec("beta", (2.0,))

    def test_positive_shape_required(self):
        with pytest.raises(ValueError):
            AlternativeSpec("beta", (-1.0, 2.0))
        with pytest.raises(ValueError):
            AlternativeSpec("normal", (0.0, 0.0))

    def test_expgeometric_parameter_range(self):
        AlternativeSpec("expgeometric", (0.0,))
        with pytest.raises(ValueError):
            AlternativeSpec("expgeometric", (1.0,))

    def test_mixture_weight_range(self):
        u = AlternativeSpec("uniform")
        with pytest.raises(ValueError):
            AlternativeSpec("mixture", mixture=(1.2, u, u))

    def test_mixture_triple_required(self):
        with pytest.raises(ValueError):
            AlternativeSpec("mixture")

    def test_non_mixture_rejects_triple(self):
        u = AlternativeSpec("uniform")
        with pytest.raises(ValueError):
            AlternativeSpec("beta", (2.0, 3.0), mixture=(0.5, u, u))


class TestSupportsUnitInterval:
    def test_unit_families(self):
        for text in ("uniform", "beta(2,3)", "tn(0,1)", "kum(2,2)", "s1(0.7)"):
            assert supports_unit_interval(spec_of(text)), text

    def test_real_line_families(self):
        for text in ("gamma(1)", "normal(0,1)", "pareto(2)", "t(5)"):
            assert not supports_unit_interval(spec_of(text)), text

    def test_translation_leaves_unit_interval(self):
        assert not supports_unit_interval(spec_of("beta(2,3)+1"))

    def test_mixture_requires_both_components(self):
        assert supports_unit_interval(spec_of("mix(0.5,u,beta(2,2))"))
        assert not supports_unit_interval(spec_of("mix(0.5,u,gamma(1))"))


# ---------------------------------------------------------------------------
# grammar


class TestGrammar:
    @pytest.mark.parametrize("text", CATALOG)
    def test_label_round_trips(self, text):
        spec = spec_of(text)
        assert parse_spec(spec.label()) == spec

    def test_aliases(self):
        assert parse_spec("z") == parse_spec("normal(0,1)")
        assert parse_spec("p(2)") == parse_spec("pareto(2)")
        assert parse_spec("g(1)") == parse_spec("gamma(1)")
        assert parse_spec("w(0.8)") == parse_spec("weibull(0.8)")
        assert parse_spec("k(2,3)") == parse_spec("kum(2,3)")
        assert parse_spec("chi2(5)") == parse_spec("chisq(5)")

    def test_whitespace_and_case_insensitive(self):
        assert parse_spec("Beta( 2 , 3 )") == parse_spec("beta(2,3)")

    def test_translation_suffix(self):
        spec = parse_spec("gamma(0.8)+1")
        assert spec.translate_by_one
        assert spec.family == "gamma"

    def test_nested_mixtures(self):
        spec = parse_spec("mix(0.5,mix(0.5,u,beta(2,2)),u)")
        assert spec.family == "mixture"
        assert spec.mixture[1].family == "mixture"

    @pytest.mark.parametrize(
        "text",
        [
            "beta(2)",  # wrong arity
            "frobnitz(1)",  # unknown name
            "beta(2,3)junk",  # trailing garbage
            "mix(1.5,u,u)",  # weight out of range
            "beta(2,,3)",
            "",
            "+1",
        ],
    )
    def test_parse_errors_carry_position_and_grammar(self, text):
        with pytest.raises(ValueError) as err:
            parse_spec(text)
        msg = str(err.value)
        assert "cannot parse spec" in msg or "spec :=" in msg

    def test_error_message_shows_grammar(self):
        with pytest.raises(ValueError, match="spec :="):
            parse_spec("frobnitz(1)")


def test_labels_are_canonical():
    assert spec_of("mix(0.5,z,n(1,9))").label() == "mix(0.5,normal(0,1),normal(1,9))"
    assert spec_of("g(0.7)+1").label() == "gamma(0.7)+1"
