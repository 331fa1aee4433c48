import pytest
from pydantic import ValidationError

from pdmkepler.errors import ParameterDomainError
from pdmkepler.expansion import (
    ExpansionInput,
    bohr_term,
    energy_expansion,
    exact_binding,
    expansion_terms,
    linearization_consistency,
    residual_order_probe,
    residual_ratios,
    rest_energy_estimate,
)
from pdmkepler.model import QuantumNumbers, states_up_to
from pdmkepler.spectrum import energy_exact

ALPHA = 0.0072973525693
S_HALF = QuantumNumbers(n_r=0, l=0, two_j=1)


def test_fine_structure_limit():
    """a_bar = 0 is the textbook alpha^4 fine-structure expansion."""
    inp = ExpansionInput.for_state(ALPHA, 0.0, S_HALF)
    expected = 1.0 - ALPHA ** 2 / 2.0 - ALPHA ** 4 * (1.0 - 0.75) / 2.0
    assert energy_expansion(inp) == pytest.approx(expected, rel=1e-16)


def test_boundary_is_exactly_one():
    for qn in states_up_to(3):
        assert energy_expansion(ExpansionInput.for_state(0.3, 1.0, qn)) == 1.0


def test_term_by_term_value():
    """a_bar = 0.5, 2S1/2, alpha = 0.1."""
    qn = QuantumNumbers(n_r=1, l=0, two_j=1)
    inp = ExpansionInput.for_state(0.1, 0.5, qn)
    second, fourth = expansion_terms(inp)
    assert second == pytest.approx(-0.01 / 8.0 * 0.25, rel=1e-15)
    bracket = 2.0 * 1.5 / 1.0 - 0.75 * (1.0 + 0.5 / 3.0)
    assert fourth == pytest.approx(-1e-4 / 32.0 * 0.125 * bracket, rel=1e-15)
    exact = energy_exact(inp.params, qn).epsilon
    assert abs(energy_expansion(inp) - exact) < 10.0 * 0.1 ** 6


@pytest.mark.parametrize("a_bar", [-2.0, -0.5, 0.0, 0.3, 0.8])
def test_mass_renormalization(a_bar):
    """The alpha^2 term is the Bohr level of a particle of mass m(1 - a_bar)^2."""
    for qn in states_up_to(3):
        inp = ExpansionInput.for_state(0.05, a_bar, qn)
        second, _ = expansion_terms(inp)
        assert second == pytest.approx(bohr_term(0.05, inp.n, (1.0 - a_bar) ** 2), rel=1e-14)


@pytest.mark.parametrize(
    "a_bar, n, expected",
    [(0.0, 1, 1.0 - 0.005), (0.5, 1, 1.0), (0.2, 2, 0.99925)],
)
def test_rest_energy_estimate(a_bar, n, expected):
    qn = QuantumNumbers(n_r=n - 1, l=0, two_j=1)
    assert rest_energy_estimate(ExpansionInput.for_state(0.1, a_bar, qn)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "a_bar, n, expected",
    [(0.0, 1, 0.0), (0.01, 1, 5e-7), (0.05, 2, 3.125e-6)],
)
def test_linearization_consistency(a_bar, n, expected):
    qn = QuantumNumbers(n_r=n - 1, l=0, two_j=1)
    assert linearization_consistency(a_bar, qn, 0.1) == pytest.approx(expected, rel=1e-9, abs=1e-20)


def test_linearization_difference_is_quadratic():
    qn = S_HALF
    ratios = [linearization_consistency(a_bar, qn, 0.1) / a_bar ** 2 for a_bar in (0.1, 0.01, 0.001)]
    assert max(ratios) == pytest.approx(min(ratios), rel=1e-6)


@pytest.mark.parametrize(
    "a_bar, qn",
    [
        (0.0, S_HALF),
        (0.3, QuantumNumbers(n_r=1, l=0, two_j=1)),
        (-1.0, QuantumNumbers(n_r=0, l=1, two_j=3)),
        (0.5, QuantumNumbers(n_r=0, l=1, two_j=1)),
        (0.3, S_HALF),
        (0.8, S_HALF),
        (0.8, QuantumNumbers(n_r=1, l=0, two_j=1)),
    ],
)
def test_residual_is_sixth_order(a_bar, qn):
    """Halving alpha divides the residual by about 2^6."""
    residuals = residual_order_probe(a_bar, qn, (0.02, 0.01))
    (ratio,) = residual_ratios(residuals)
    assert ratio == pytest.approx(64.0, rel=0.2)


def test_residual_vanishes_on_boundary():
    residuals = residual_order_probe(1.0, S_HALF)
    assert all(residual == 0.0 for _, residual in residuals)


def test_exact_binding_matches_energy():
    inp = ExpansionInput.for_state(0.1, -0.5, S_HALF)
    assert exact_binding(inp) == pytest.approx(1.0 - energy_exact(inp.params, S_HALF).epsilon, rel=1e-12)


def test_residual_order_rejects_bad_couplings():
    with pytest.raises(ParameterDomainError):
        residual_order_probe(0.0, S_HALF, (0.01, 0.02))
    with pytest.raises(ParameterDomainError):
        residual_order_probe(0.0, S_HALF, (0.02, 0.0))


def test_input_validation():
    with pytest.raises(ValidationError):
        ExpansionInput(alpha=0.1, a_bar=0.0, n=2, qn=S_HALF)
    with pytest.raises(ValidationError):
        ExpansionInput.for_state(0.1, 1.5, S_HALF)
