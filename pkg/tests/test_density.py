import math

import numpy as np
import pytest
from scipy import integrate

from cs_sharp.density import (
    BasisFamily,
    DomainMap,
    Linear,
    Tabulated,
    TruncatedNormal,
    Uniform,
    basis_eval,
    cs_divergence_exact,
    cs_p_divergence_exact,
    divergence_gap,
    estimate_coefficients,
    estimate_divergence,
    exact_coefficients,
    l2_inner,
    l2_norm_squared,
)
from cs_sharp.errors import DomainError, EmptySample, InvalidParameter, UndefinedDivergence
from cs_sharp.summation import pairwise_sum, squared_norm

HALF_LOG_FOUR_THIRDS = 0.5 * math.log(4.0 / 3.0)
F2_LINEAR = -4.0 * math.sqrt(2.0) / math.pi**2
COSINE = BasisFamily()
TRIG = BasisFamily(kind="trigonometric")


def _two_cell(left_weight):
    return Tabulated.from_weights([0.0, 0.5, 1.0], [left_weight, 1.0 - left_weight])


def test_cosine_basis_examples():
    assert basis_eval(COSINE, 1, 0.37) == 1.0
    assert basis_eval(COSINE, 2, 0.0) == pytest.approx(math.sqrt(2))
    assert basis_eval(COSINE, 3, 0.5) == pytest.approx(-math.sqrt(2))


def test_trigonometric_basis_examples():
    assert basis_eval(TRIG, 1, 0.2) == 1.0
    assert basis_eval(TRIG, 2, 0.0) == pytest.approx(math.sqrt(2))
    assert basis_eval(TRIG, 3, 0.25) == pytest.approx(math.sqrt(2))
    assert basis_eval(TRIG, 4, 0.5) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("basis", [COSINE, TRIG], ids=["cosine", "trigonometric"])
def test_basis_is_orthonormal(basis):
    for j in range(1, 11):
        for k in range(j, 11):
            value, _ = integrate.quad(
                lambda u: basis_eval(basis, j, u) * basis_eval(basis, k, u), 0.0, 1.0, limit=200
            )
            assert value == pytest.approx(1.0 if j == k else 0.0, abs=1e-8)


def test_basis_rejects_bad_arguments():
    with pytest.raises(DomainError):
        basis_eval(COSINE, 2, 1.5)
    with pytest.raises(InvalidParameter):
        basis_eval(COSINE, 0, 0.5)
    with pytest.raises(InvalidParameter):
        BasisFamily(kind="legendre")


def test_domain_map():
    dmap = DomainMap(-2.0, 2.0)
    assert np.array_equal(dmap.to_unit([-2.0, 0.0, 2.0]), [0.0, 0.5, 1.0])
    with pytest.raises(DomainError):
        dmap.to_unit([3.0])
    with pytest.raises(InvalidParameter):
        DomainMap(1.0, 1.0)
    auto = DomainMap.auto([0.0, 1.0], [2.0])
    assert auto.a == pytest.approx(-0.1)
    assert auto.b == pytest.approx(2.1)
    with pytest.raises(EmptySample):
        DomainMap.auto([])


def test_models_integrate_to_one():
    for model in (Uniform(), Linear(), TruncatedNormal(), TruncatedNormal(0.2, 0.1), _two_cell(0.8)):
        assert model.total_mass() == pytest.approx(1.0, abs=1e-8)


def test_tabulated_validation():
    with pytest.raises(InvalidParameter):
        Tabulated((0.0, 0.5, 1.0), (1.0, 2.0))
    with pytest.raises(InvalidParameter):
        Tabulated((0.0, 1.0), (1.0, 1.0))
    with pytest.raises(InvalidParameter):
        Tabulated((0.0, 0.7, 0.5, 1.0), (1.0, 1.0, 1.0))


def test_model_samples_stay_in_the_unit_interval(rng):
    for model in (Uniform(), Linear(), TruncatedNormal(), _two_cell(0.9)):
        sample = model.sample(2000, rng)
        assert sample.shape == (2000,)
        assert sample.min() >= 0.0
        assert sample.max() <= 1.0
    assert np.mean(_two_cell(0.9).sample(20_000, rng) < 0.5) == pytest.approx(0.9, abs=0.02)


def test_exact_coefficients_examples():
    uniform = exact_coefficients(Uniform(), COSINE, 6)
    assert len(uniform) == 6
    assert uniform.n == 0
    assert np.allclose(uniform.values, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0], atol=1e-10)
    assert exact_coefficients(Linear(), COSINE, 2).values[1] == pytest.approx(F2_LINEAR, abs=1e-10)
    assert exact_coefficients(TruncatedNormal(0.4, 0.15), COSINE, 1).values[0] == pytest.approx(1.0, abs=1e-10)
    # same coefficient on the trigonometric system: sqrt(2) * int 2u cos(2 pi u) = 0
    assert exact_coefficients(Linear(), TRIG, 2).values[1] == pytest.approx(0.0, abs=1e-10)


def test_l2_oracles():
    assert l2_inner(Uniform(), Linear()) == pytest.approx(1.0, abs=1e-12)
    assert l2_norm_squared(Linear()) == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert l2_norm_squared(_two_cell(0.8)) == pytest.approx(1.36, abs=1e-12)


def test_cs_divergence_examples():
    assert cs_divergence_exact(Uniform(), Linear()) == pytest.approx(HALF_LOG_FOUR_THIRDS, abs=1e-6)
    for model in (Uniform(), Linear(), TruncatedNormal(), _two_cell(0.3)):
        assert cs_divergence_exact(model, model) == pytest.approx(0.0, abs=1e-12)


def test_cs_divergence_is_symmetric():
    f, g = TruncatedNormal(0.3, 0.15), Linear()
    assert cs_divergence_exact(f, g) == pytest.approx(cs_divergence_exact(g, f), rel=1e-9)


def test_disjoint_supports_are_undefined():
    with pytest.raises(UndefinedDivergence):
        cs_divergence_exact(_two_cell(1.0), _two_cell(0.0))
    with pytest.raises(UndefinedDivergence):
        cs_p_divergence_exact(_two_cell(1.0), _two_cell(0.0), COSINE, 4)


def test_projected_divergence_on_the_diagonal():
    for model in (Uniform(), Linear(), TruncatedNormal()):
        for N in (1, 4, 16):
            assert cs_p_divergence_exact(model, model, COSINE, N) == pytest.approx(0.0, abs=1e-12)


def test_projected_divergence_against_uniform():
    g = TruncatedNormal(0.35, 0.2)
    for N in (1, 3, 8):
        expected = 0.5 * math.log(squared_norm(exact_coefficients(g, COSINE, N).values))
        assert cs_p_divergence_exact(Uniform(), g, COSINE, N) == pytest.approx(expected, abs=1e-8)


def test_projected_divergence_converges_and_stays_below():
    full = cs_divergence_exact(Uniform(), Linear())
    for N in (1, 2, 4, 8, 16, 32, 64):
        value = cs_p_divergence_exact(Uniform(), Linear(), COSINE, N)
        assert -1e-12 <= value <= full + 1e-9
    assert abs(cs_p_divergence_exact(Uniform(), Linear(), COSINE, 64) - full) <= 1e-6


def test_ordering_holds_for_other_pairs():
    pairs = [(TruncatedNormal(0.3, 0.15), Linear()), (_two_cell(0.7), TruncatedNormal()), (Uniform(), _two_cell(0.2))]
    for f, g in pairs:
        full = cs_divergence_exact(f, g)
        for N in (1, 2, 4, 8):
            assert cs_p_divergence_exact(f, g, TRIG, N) <= full + 1e-9
            assert cs_p_divergence_exact(f, g, COSINE, N) <= full + 1e-9


def test_divergence_gap_matches_difference():
    f, g = Uniform(), Linear()
    for N in (1, 4):
        gap = divergence_gap(f, g, COSINE, N)
        assert gap >= 0.0
        expected = cs_divergence_exact(f, g) - cs_p_divergence_exact(f, g, COSINE, N)
        assert gap == pytest.approx(expected, abs=1e-9)


def test_triangle_inequality_fails():
    # the divergence is only a pseudo-distance
    f, g, h = _two_cell(0.8), _two_cell(0.5), _two_cell(0.2)
    direct = cs_divergence_exact(f, h)
    via_g = cs_divergence_exact(f, g) + cs_divergence_exact(g, h)
    assert direct == pytest.approx(math.log(2.125), abs=1e-9)
    assert via_g == pytest.approx(math.log(1.36), abs=1e-9)
    assert direct > via_g


def test_estimate_coefficients_examples(rng):
    uniform = Uniform().sample(1234, rng)
    coeffs = estimate_coefficients(uniform, COSINE, 4)
    assert coeffs.values[0] == 1.0
    assert coeffs.n == 1234
    assert np.all(np.abs(coeffs.values[1:]) < 0.15)

    n = 100_000
    sample = Linear().sample(n, rng)
    f2 = estimate_coefficients(sample, COSINE, 2).values[1]
    se = np.std(COSINE.evaluate(2, sample)) / math.sqrt(n)
    assert abs(f2 - F2_LINEAR) <= 3 * se


def test_estimate_coefficients_errors():
    with pytest.raises(EmptySample):
        estimate_coefficients([], COSINE, 2)
    with pytest.raises(DomainError):
        estimate_coefficients([0.5, 1.2], COSINE, 2)
    with pytest.raises(InvalidParameter):
        estimate_coefficients([0.5], COSINE, 0)


def test_estimate_divergence_diagonal_is_exactly_zero(rng):
    sample = TruncatedNormal().sample(500, rng)
    for N in (1, 2, 5, 16):
        estimate = estimate_divergence(sample, sample.copy(), COSINE, N)
        assert estimate.value == 0.0
        assert estimate.t_hat_f == estimate.t_hat_g
        assert estimate.r_hat_f == estimate.r_hat_g


def test_estimate_divergence_on_uniform_samples(rng):
    estimate = estimate_divergence(Uniform().sample(50_000, rng), Uniform().sample(50_000, rng), COSINE, 1)
    assert estimate.denom == pytest.approx(1.0, abs=0.02)
    assert estimate.t_hat_f == 1.0
    assert estimate.r_hat_f == pytest.approx(0.0, abs=1e-3)
    assert abs(estimate.value) < 0.01


def test_estimate_divergence_consistency():
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        estimate = estimate_divergence(Uniform().sample(100_000, rng), Linear().sample(100_000, rng), COSINE, 8)
        assert estimate.N == 8
        assert estimate.t_hat_f >= 0.0 and estimate.r_hat_g >= 0.0
        hits += abs(estimate.value - HALF_LOG_FOUR_THIRDS) <= 0.02
    assert hits >= 18


def test_estimate_divergence_allows_unequal_sizes_and_other_ranges(rng):
    dmap = DomainMap(10.0, 20.0)
    basis = BasisFamily(domain=dmap)
    f = 10.0 + 10.0 * Uniform().sample(40_000, rng)
    g = 10.0 + 10.0 * Linear().sample(60_000, rng)
    estimate = estimate_divergence(f, g, basis, 8)
    assert (estimate.n_f, estimate.n_g) == (40_000, 60_000)
    assert estimate.value == pytest.approx(HALF_LOG_FOUR_THIRDS, abs=0.03)


def test_estimate_divergence_undefined_on_tiny_disjoint_samples():
    with pytest.raises(UndefinedDivergence) as info:
        estimate_divergence([0.0, 0.1], [0.9, 1.0], COSINE, 1)
    assert info.value.details["denom"] < 0
    assert info.value.exit_code == 5


def test_estimate_coefficients_reduces_each_column_like_the_full_matrix(rng):
    sample = TruncatedNormal().sample(3001, rng)
    for basis in (COSINE, TRIG):
        coeffs = estimate_coefficients(sample, basis, 7)
        columns = np.column_stack([basis.evaluate(k, sample) for k in range(1, 8)])
        assert np.array_equal(coeffs.values, pairwise_sum(columns, axis=0) / sample.size)
