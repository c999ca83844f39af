import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phistat import DomainError, EntropyFamily, RangeError, UnsupportedOutcome, weight_function
from phistat.expfam import (
    Bernoulli,
    Categorical,
    CurvedBernoulli,
    CurvedGeometric,
    Geometric,
    exact_mean,
    log_mass,
    natural_parameter,
    natural_parameter_inverse,
    normalization_check,
    sample,
)


def mass_sum(model, N=2000):
    return math.fsum(math.exp(model.log_mass(n)) for n in range(N))


class TestExamples:
    def test_log_mass(self):
        assert log_mass(Bernoulli(0.5), 1) == pytest.approx(math.log(0.5))
        assert log_mass(Geometric(1.0), 0) == pytest.approx(math.log(0.5))
        assert log_mass(CurvedGeometric(1.0, 1.0), 2) == pytest.approx(math.log(1 / 8))

    def test_natural_parameter(self):
        assert natural_parameter(Bernoulli(0.5)) == 0.0
        assert natural_parameter(Geometric(1.0)) == pytest.approx(-math.log(2))
        assert natural_parameter(CurvedGeometric(1.0, 0.5)) == pytest.approx(math.log(2 / 3))

    def test_inverse(self):
        assert natural_parameter_inverse("bernoulli", 0.0) == 0.5
        assert natural_parameter_inverse("geometric", -math.log(2)) == pytest.approx(1.0)
        assert natural_parameter_inverse("curved_geometric", math.log(2 / 3), eps=0.5) == pytest.approx(1.0)

    def test_exact_mean(self):
        assert exact_mean(Geometric(1.0)) == pytest.approx(1.0)
        assert exact_mean(CurvedGeometric(1.0, 1.0)) == pytest.approx(1.0)
        assert exact_mean(CurvedBernoulli(1 / 3, -1.0)) == pytest.approx(1 / 3)

    def test_normalization(self):
        assert normalization_check(Bernoulli(0.3)) <= 1e-15
        assert normalization_check(Geometric(2.0)) <= 1e-12
        assert normalization_check(CurvedGeometric(0.7, 0.5)) <= 1e-12

    def test_sampling(self):
        s = sample(Bernoulli(0.5), 10**6, 42)
        assert abs(s.mean - 0.5) <= 3 * 0.5 / math.sqrt(10**6)
        s = sample(Geometric(1.0), 10**6, 7)
        assert abs(s.mean - 1.0) <= 3 * math.sqrt(2.0) / math.sqrt(10**6)
        for m in (Bernoulli(0.2), Geometric(3.0), CurvedBernoulli(0.5, -0.5), CurvedGeometric(0.4, 0.3)):
            assert sample(m, 1, 99) == sample(m, 1, 99)


class TestModels:
    def test_curved_bernoulli_degenerate_boundary(self):
        with pytest.raises(DomainError):
            CurvedBernoulli(1.0, -1.0)

    @pytest.mark.parametrize(
        "make",
        [
            lambda: Bernoulli(1.0),
            lambda: Bernoulli(0.0),
            lambda: Geometric(0.0),
            lambda: CurvedBernoulli(0.5, 0.5),
            lambda: CurvedBernoulli(3.0, -0.5),
            lambda: CurvedGeometric(0.5, -0.5),
            lambda: CurvedGeometric(3.0, 0.5),
        ],
    )
    def test_parameter_domains(self, make):
        with pytest.raises(DomainError):
            make()

    def test_unsupported_outcomes(self):
        with pytest.raises(UnsupportedOutcome):
            Bernoulli(0.3).log_mass(2)
        with pytest.raises(UnsupportedOutcome):
            Geometric(1.0).log_mass(-1)
        with pytest.raises(UnsupportedOutcome):
            Geometric(1.0).log_mass(1.5)

    @pytest.mark.parametrize(
        "model", [Geometric(0.3), Geometric(5.0), CurvedGeometric(0.7, 0.5), CurvedGeometric(2.0, 1.0)], ids=repr
    )
    def test_masses_by_partial_sums(self, model):
        assert mass_sum(model) == pytest.approx(1.0, abs=1e-12)
        mean = math.fsum(n * math.exp(model.log_mass(n)) for n in range(2000))
        assert mean == pytest.approx(model.exact_mean(), rel=1e-10)
        second = math.fsum(n * n * math.exp(model.log_mass(n)) for n in range(2000))
        assert second - mean**2 == pytest.approx(model.exact_variance(), rel=1e-9)

    def test_log_mass_is_affine_in_outcome(self):
        for m in (Bernoulli(0.3), Geometric(2.0), CurvedBernoulli(0.4, -0.6), CurvedGeometric(0.7, 0.5)):
            eta = m.natural_parameter()
            assert m.log_mass(1) - m.log_mass(0) == pytest.approx(eta, abs=1e-14)

    def test_categorical(self):
        m = Categorical([0.2, 0.3, 0.5], [0.0, 1.0, 3.0])
        np.testing.assert_allclose(natural_parameter_inverse("categorical", m.natural_parameter()), m.p.p)
        assert m.log_mass(3.0) == pytest.approx(math.log(0.5))
        assert m.exact_mean() == pytest.approx(1.8)
        assert normalization_check(m) <= 1e-15
        s = m.sample(10**5, 3)
        assert abs(s.mean - 1.8) <= 4 * math.sqrt(m.exact_variance() / 10**5)
        with pytest.raises(UnsupportedOutcome):
            m.log_mass(2.0)


class TestRoundTrips:
    @given(st.floats(1e-6, 1 - 1e-6))
    def test_bernoulli(self, p):
        assert natural_parameter_inverse("bernoulli", Bernoulli(p).natural_parameter()) == pytest.approx(p, rel=1e-12)

    @given(st.floats(1e-6, 1e6))
    def test_geometric(self, p):
        assert natural_parameter_inverse("geometric", Geometric(p).natural_parameter()) == pytest.approx(p, rel=1e-12)

    @given(st.floats(-1, -1e-3), st.floats(1e-6, 0.999))
    def test_curved_bernoulli(self, eps, frac):
        p = frac / -eps if eps > -1 else frac
        eta = CurvedBernoulli(p, eps).natural_parameter()
        assert natural_parameter_inverse("curved_bernoulli", eta, eps=eps) == pytest.approx(p, rel=1e-12)

    @given(st.floats(1e-3, 1), st.floats(1e-6, 0.999))
    def test_curved_geometric(self, eps, frac):
        p = frac / (1 - eps) if eps < 1 else 1e3 * frac
        eta = CurvedGeometric(p, eps).natural_parameter()
        assert natural_parameter_inverse("curved_geometric", eta, eps=eps) == pytest.approx(p, rel=1e-12)

    def test_weight_function_link(self):
        # the weights are the natural-parameter inverses at eta = -(a + bE)
        for eps in (-1.0, -0.5, 0.5, 1.0):
            tag = {-1.0: "bernoulli", 1.0: "geometric"}.get(eps, "curved_bernoulli" if eps < 0 else "curved_geometric")
            for a in np.linspace(-3, 3, 7):
                for b in np.linspace(-3, 3, 7):
                    for E in np.linspace(-3, 3, 7):
                        x = a + b * E
                        if eps > 0 and x <= math.log(eps):
                            continue
                        assert natural_parameter_inverse(tag, -x, eps=eps) == weight_function(
                            EntropyFamily.epsilon(eps), a, b, E
                        )

    def test_inverse_errors(self):
        with pytest.raises(ValueError):
            natural_parameter_inverse("poisson", 0.0)
        with pytest.raises(ValueError):
            natural_parameter_inverse("curved_geometric", -1.0)
        with pytest.raises(RangeError):
            natural_parameter_inverse("geometric", 0.5)


def test_sample_stats_json():
    s = Geometric(1.0).sample(1000, 5)
    doc = json.loads(json.dumps(s.to_dict()))
    assert doc == {"count": 1000, "mean": s.mean, "variance": s.variance, "seed": 5}
    assert s.variance >= 0


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seed_range(seed):
    with pytest.raises(ValueError):
        Bernoulli(0.5).sample(10, seed)
