import math

import pytest

from pdmkepler.errors import (
    ConsistencyError,
    FallToCenterError,
    NoBoundStateError,
    NumericalError,
    ParameterDomainError,
    PhysicsDomainError,
)
from pdmkepler.model import ModelParams, QuantumNumbers, discriminant, states_up_to
from pdmkepler.spectrum import (
    NO_BOUND_STATE_MESSAGE,
    binding_energy,
    casimir_energy,
    energy_exact,
    energy_free_case,
    ground_state_energy,
    l_star,
    mean_effective_mass,
    n_star,
    quadratic_residual,
    sommerfeld_energy,
)

S_HALF = QuantumNumbers(n_r=0, l=0, two_j=1)


def bisect_quadratic(params, qn):
    """Independent root of (eps^2 - 1)/2 + (eps alpha - a)^2 / (2 n*^2) on (a/alpha, 1)."""
    ns = n_star(params, qn)

    def f(eps):
        return (eps * eps - 1.0) / 2.0 + (eps * params.alpha - params.a) ** 2 / (2.0 * ns * ns)

    low = max(params.a / params.alpha, 0.0) if params.alpha > 0 else 0.0
    high = 1.0
    # f < 0 just above the effective-charge zero, f(1) >= 0
    for _ in range(200):
        mid = 0.5 * (low + high)
        if f(mid) < 0.0:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)


@pytest.mark.parametrize(
    "alpha, a, qn, expected",
    [
        (0.0, 0.0, S_HALF, 1.0),
        (0.5, 0.0, S_HALF, 0.75),
        (0.1, -0.2, QuantumNumbers(n_r=0, l=1, two_j=3), 4.03),
    ],
)
def test_discriminant_examples(alpha, a, qn, expected):
    assert discriminant(ModelParams(alpha=alpha, a=a), qn) == pytest.approx(expected, rel=1e-15)


def test_l_star_examples():
    assert l_star(ModelParams(alpha=0.0, a=0.0), S_HALF) == 0.0
    assert l_star(ModelParams(alpha=0.0, a=0.0), QuantumNumbers(n_r=0, l=1, two_j=1)) == 1.0
    assert l_star(ModelParams(alpha=0.5, a=0.0), S_HALF) == pytest.approx(math.sqrt(0.75) - 1.0, rel=1e-15)


def test_n_star_examples():
    assert n_star(ModelParams(alpha=0.0, a=0.0), S_HALF) == 1.0
    assert n_star(ModelParams(alpha=0.0, a=-1.0), S_HALF) == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_sommerfeld_ground_state():
    level = energy_exact(ModelParams(alpha=0.5, a=0.0), S_HALF)
    assert level.epsilon == pytest.approx(math.sqrt(0.75), rel=1e-15)


@pytest.mark.parametrize("alpha", [0.01, 0.1, 0.5])
def test_sommerfeld_reduction(alpha):
    """a = 0 reproduces the Dirac-Coulomb fine structure for every state up to n = 3."""
    params = ModelParams(alpha=alpha, a=0.0)
    for qn in states_up_to(3):
        assert energy_exact(params, qn).epsilon == pytest.approx(sommerfeld_energy(alpha, qn), rel=1e-14)


@pytest.mark.parametrize("alpha", [0.0073, 0.3, 0.9])
def test_single_level_boundary(alpha):
    """At a = alpha every state sits at epsilon = 1."""
    params = ModelParams(alpha=alpha, a=alpha)
    for qn in states_up_to(4):
        level = energy_exact(params, qn)
        assert abs(level.epsilon - 1.0) <= 1e-12
        assert not level.is_bound


@pytest.mark.parametrize(
    "alpha, a, qn",
    [
        (0.2, -0.4, S_HALF),
        (0.3, 0.1, S_HALF),
        (0.6, 0.3, QuantumNumbers(n_r=2, l=1, two_j=1)),
        (0.1, -3.0, QuantumNumbers(n_r=1, l=2, two_j=5)),
    ],
)
def test_energy_matches_bisection(alpha, a, qn):
    params = ModelParams(alpha=alpha, a=a)
    level = energy_exact(params, qn)
    assert level.epsilon == pytest.approx(bisect_quadratic(params, qn), rel=1e-13)
    assert abs(quadratic_residual(params, level.n_star, level.epsilon)) < 1e-12
    assert level.e_star_sq == pytest.approx(level.epsilon * alpha - a, rel=1e-12)


@pytest.mark.parametrize("a", [-0.5, -1.0, -3.0])
def test_free_case(a):
    """alpha = 0 gives sqrt(1 - (a/n*)^2) and the ground level 1/sqrt(1 + a^2)."""
    params = ModelParams(alpha=0.0, a=a)
    for qn in states_up_to(3):
        expected = math.sqrt(1.0 - (a / n_star(params, qn)) ** 2)
        assert energy_exact(params, qn).epsilon == pytest.approx(expected, rel=1e-14)
        assert energy_free_case(params, qn) == pytest.approx(expected, rel=1e-14)
    assert energy_exact(params, S_HALF).epsilon == pytest.approx(1.0 / math.sqrt(1.0 + a * a), rel=1e-14)


def test_free_case_examples():
    assert energy_free_case(ModelParams(alpha=0.0, a=-1.0), S_HALF) == pytest.approx(1.0 / math.sqrt(2.0))
    weak = energy_free_case(ModelParams(alpha=0.0, a=-0.001), S_HALF)
    assert 1.0 - weak == pytest.approx(5e-7, rel=1e-5)
    deep = energy_exact(ModelParams(alpha=0.0, a=-100.0), S_HALF).epsilon
    assert deep == pytest.approx(0.0099995, abs=1e-7)
    assert deep == pytest.approx(casimir_energy(-100.0), rel=1e-4)


def test_free_case_requires_zero_coupling():
    with pytest.raises(ParameterDomainError):
        energy_free_case(ModelParams(alpha=0.1, a=-1.0), S_HALF)
    with pytest.raises(NoBoundStateError):
        energy_free_case(ModelParams(alpha=0.0, a=0.5), S_HALF)


def test_ground_state_energy():
    assert ground_state_energy(ModelParams(alpha=0.0, a=-1.0)) == pytest.approx(1.0 / math.sqrt(2.0))
    assert ground_state_energy(ModelParams(alpha=0.0, a=0.0)) == 1.0
    params = ModelParams(alpha=0.3, a=0.1)
    assert ground_state_energy(params) == pytest.approx(bisect_quadratic(params, S_HALF), rel=1e-13)
    assert ground_state_energy(params) == pytest.approx(energy_exact(params, S_HALF).epsilon, rel=1e-14)


@pytest.mark.parametrize("a, expected", [(-1.0, 1.0 / math.sqrt(2.0)), (0.0, 1.0), (-3.0, 0.31622776601683794)])
def test_mean_effective_mass(a, expected):
    assert mean_effective_mass(ModelParams(alpha=0.0, a=a)) == pytest.approx(expected, rel=1e-15)


def test_degenerate_partners_are_identical():
    """nS1/2 and nP1/2 share n* bit for bit, so their energies agree exactly."""
    for alpha, a in [(0.3, 0.05), (0.1, -2.0), (0.6, 0.3)]:
        params = ModelParams(alpha=alpha, a=a)
        for n_r in range(3):
            s_level = energy_exact(params, QuantumNumbers(n_r=n_r + 1, l=0, two_j=1))
            p_level = energy_exact(params, QuantumNumbers(n_r=n_r, l=1, two_j=1))
            assert s_level.epsilon == p_level.epsilon


def test_energy_increases_with_a():
    """Below the boundary the ground level rises monotonically towards 1."""
    values = [energy_exact(ModelParams(alpha=0.3, a=a), S_HALF).epsilon for a in [-3.0, -1.0, -0.2, 0.0, 0.2, 0.3]]
    assert values == sorted(values)
    assert values[-1] == 1.0


def test_no_bound_states_above_boundary():
    with pytest.raises(NoBoundStateError, match=NO_BOUND_STATE_MESSAGE):
        energy_exact(ModelParams(alpha=0.3, a=0.31), S_HALF)
    with pytest.raises(NoBoundStateError):
        binding_energy(ModelParams(alpha=0.0, a=0.1), S_HALF)


def test_fall_to_center():
    with pytest.raises(FallToCenterError):
        energy_exact(ModelParams(alpha=1.2, a=0.0), S_HALF)
    # a vanishing radicand on the upper branch would give l* = -1
    with pytest.raises(FallToCenterError):
        l_star(ModelParams(alpha=1.0, a=0.0), S_HALF)
    # the lower branch tolerates it: l* = 0
    assert l_star(ModelParams(alpha=1.0, a=0.0), QuantumNumbers(n_r=0, l=1, two_j=1)) == 0.0


def test_binding_keeps_precision_at_small_coupling():
    """1 - epsilon stays accurate where epsilon itself rounds to 1."""
    params = ModelParams(alpha=1e-9, a=0.0)
    assert binding_energy(params, S_HALF) == pytest.approx(0.5e-18, rel=1e-9)


def test_casimir_energy():
    assert casimir_energy(-4.0) == 0.25
    with pytest.raises(ParameterDomainError):
        casimir_energy(0.0)


def test_error_families():
    assert issubclass(ConsistencyError, NumericalError)
    assert issubclass(FallToCenterError, PhysicsDomainError)
    assert not issubclass(NoBoundStateError, NumericalError)
