"""Quasirelativistic expansion of the levels in powers of alpha.

With a = a_bar * alpha the exact level is expanded to
    epsilon = 1 - (alpha^2/2n^2)(1 - a_bar)^2
                - (alpha^4/2n^4)(1 - a_bar)^3 [n(1 + a_bar)/(j + 1/2) - (3/4)(1 + a_bar/3)],
n = n_r + l + 1. The helpers here evaluate the two terms exactly as written
and measure the truncation order against the closed form.
"""
import logging
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pdmkepler.errors import ParameterDomainError
from pdmkepler.model import ModelParams, QuantumNumbers, principal_number
from pdmkepler.spectrum import binding_energy

logger = logging.getLogger(__name__)

DEFAULT_RESIDUAL_ALPHAS = (0.04, 0.02, 0.01)


class ExpansionInput(BaseModel):
    """One level in the classical-radius parameterization a = a_bar * alpha."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., ge=0.0, description="Fine-structure constant")
    a_bar: float = Field(..., le=1.0, description="Mass length in classical electron radii")
    n: int = Field(..., ge=1, description="Principal quantum number n_r + l + 1")
    qn: QuantumNumbers

    @model_validator(mode="after")
    def _check_principal(self) -> "ExpansionInput":
        if self.n != principal_number(self.qn):
            raise ValueError(f"n={self.n} does not match n_r + l + 1 = {principal_number(self.qn)}")
        return self

    @classmethod
    def for_state(cls, alpha: float, a_bar: float, qn: QuantumNumbers) -> "ExpansionInput":
        return cls(alpha=alpha, a_bar=a_bar, n=principal_number(qn), qn=qn)

    @property
    def params(self) -> ModelParams:
        return ModelParams.from_a_bar(self.alpha, self.a_bar)


def expansion_terms(inp: ExpansionInput) -> Tuple[float, float]:
    """Return the order alpha^2 and order alpha^4 terms of the expansion."""
    alpha2 = inp.alpha * inp.alpha
    n = inp.n
    one_minus = 1.0 - inp.a_bar
    second = -alpha2 / (2.0 * n * n) * one_minus ** 2
    bracket = n * (1.0 + inp.a_bar) / inp.qn.kappa_abs - 0.75 * (1.0 + inp.a_bar / 3.0)
    fourth = -alpha2 * alpha2 / (2.0 * n ** 4) * one_minus ** 3 * bracket
    return second, fourth


def energy_expansion(inp: ExpansionInput) -> float:
    second, fourth = expansion_terms(inp)
    return 1.0 + second + fourth


def expansion_binding(inp: ExpansionInput) -> float:
    """1 - epsilon according to the two-term expansion."""
    second, fourth = expansion_terms(inp)
    return -(second + fourth)


def exact_binding(inp: ExpansionInput) -> float:
    return binding_energy(inp.params, inp.qn)


def bohr_term(alpha: float, n: int, mass_ratio: float = 1.0) -> float:
    """Bohr level -mass_ratio * alpha^2 / (2 n^2) for a particle of mass m * mass_ratio."""
    return -mass_ratio * alpha * alpha / (2.0 * n * n)


def rest_energy_estimate(inp: ExpansionInput) -> float:
    """First-order estimate 1 - (alpha^2/2n^2)(1 - 2 a_bar).

    The rest energy m*c^2 = mc^2 + a_bar e^2/r averaged over a Bohr orbit
    adds a_bar alpha^2/n^2 to the plain Bohr level.
    """
    shift = inp.a_bar * inp.alpha ** 2 / inp.n ** 2
    return 1.0 + bohr_term(inp.alpha, inp.n) + shift


def residual_order_probe(
    a_bar: float, qn: QuantumNumbers, alphas: Sequence[float] = DEFAULT_RESIDUAL_ALPHAS
) -> List[Tuple[float, float]]:
    """Residual |exact - expansion| for a decreasing sequence of alpha.

    Inputs
    ------
    a_bar : float
        Mass parameter in classical radii (a = a_bar * alpha for every alpha).
    qn : QuantumNumbers
        Level to expand.
    alphas : sequence of float
        Strictly decreasing positive couplings.
    Returns
    -------
    list of (alpha, residual)
        Halving alpha should divide the residual by about 2^6 = 64.
    """
    values = list(alphas)
    if any(x <= 0.0 for x in values):
        raise ParameterDomainError(f"expansion couplings must be positive: {values}")
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        raise ParameterDomainError(f"expansion couplings must decrease: {values}")
    rows = []
    for alpha in values:
        inp = ExpansionInput.for_state(alpha, a_bar, qn)
        residual = abs(exact_binding(inp) - expansion_binding(inp))
        logger.debug(f"residual a_bar={a_bar} {qn.label} alpha={alpha}: residual={residual:.3e}")
        rows.append((alpha, residual))
    return rows


def residual_ratios(residuals: Sequence[Tuple[float, float]]) -> List[float]:
    """Ratios residual(alpha_i) / residual(alpha_{i+1}) of consecutive rows."""
    ratios = []
    for (_, coarse), (_, fine) in zip(residuals, residuals[1:]):
        ratios.append(coarse / fine if fine > 0.0 else float("nan"))
    return ratios


def linearization_consistency(a_bar: float, qn: QuantumNumbers, alpha: float) -> float:
    """Distance between the rest-energy estimate and the alpha^2 part of the expansion.

    The two agree to first order in a_bar; the difference is exactly
    (alpha^2 / 2n^2) a_bar^2.
    """
    inp = ExpansionInput.for_state(alpha, a_bar, qn)
    second, _ = expansion_terms(inp)
    return abs(rest_energy_estimate(inp) - (1.0 + second))
