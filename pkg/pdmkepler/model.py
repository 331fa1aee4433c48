"""Parameters, quantum numbers and validity predicates shared by every module.

Natural units are used throughout: hbar = m = c = 1, so the Compton length
is 1, e^2 = alpha, energies are in units of mc^2 and the mass parameter
``a`` is measured in Compton lengths. The classical-radius parameter
a_bar satisfies a = a_bar * alpha.
"""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

_ORBITAL_LETTERS = "SPDFGHIKLMNOQRTUV"


class ModelParams(BaseModel):
    """Physics inputs of the position-dependent mass Coulomb problem."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., ge=0.0, description="Fine-structure constant e^2/hbar c")
    a: float = Field(..., description="Mass parameter of m*(r) = m(1 + a/r), Compton units")

    @classmethod
    def from_a_bar(cls, alpha: float, a_bar: float) -> "ModelParams":
        """Build parameters from a_bar, the mass length in classical radii."""
        return cls(alpha=alpha, a=a_bar * alpha)

    @property
    def a_bar(self) -> Optional[float]:
        if self.alpha == 0.0:
            return None
        return self.a / self.alpha


class QuantumNumbers(BaseModel):
    """Radial, orbital and total angular momentum numbers of one level.

    ``two_j`` keeps j as the integer 2j so branch selection and degeneracy
    tests never compare half-integers in floating point.
    """

    model_config = ConfigDict(frozen=True)

    n_r: int = Field(..., ge=0, description="Radial quantum number")
    l: int = Field(..., ge=0, description="Orbital quantum number")
    two_j: int = Field(..., ge=1, description="Twice the total angular momentum")

    @model_validator(mode="after")
    def _check_coupling(self) -> "QuantumNumbers":
        if self.two_j == 2 * self.l + 1:
            return self
        if self.two_j == 2 * self.l - 1 and self.l >= 1:
            return self
        raise ValueError(
            f"two_j={self.two_j} is not 2l+1 or 2l-1 (with l >= 1) for l={self.l}"
        )

    @property
    def upper_branch(self) -> bool:
        """True for j = l + 1/2, the upper sign of the l* formula."""
        return self.two_j == 2 * self.l + 1

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def kappa_abs(self) -> int:
        """j + 1/2 as an exact integer."""
        return (self.two_j + 1) // 2

    @property
    def principal(self) -> int:
        return principal_number(self)

    @property
    def label(self) -> str:
        return spectroscopic_label(self)


class LevelResult(BaseModel):
    """Derived quantities of a single level."""

    model_config = ConfigDict(frozen=True)

    l_star: float = Field(..., description="Effective orbital number")
    n_star: float = Field(..., gt=0.0, description="Effective principal number n_r + l* + 1")
    e_star_sq: float = Field(..., description="Effective charge squared, epsilon*alpha - a")
    epsilon: float = Field(..., gt=0.0, le=1.0, description="Energy in units of mc^2")

    @property
    def is_bound(self) -> bool:
        """Only levels with a strictly attractive effective charge are bound."""
        return self.e_star_sq > 0.0

    @property
    def e_star(self) -> float:
        """Effective Kepler energy (epsilon^2 - 1)/2."""
        return (self.epsilon * self.epsilon - 1.0) / 2.0


def principal_number(qn: QuantumNumbers) -> int:
    return qn.n_r + qn.l + 1


def spectroscopic_label(qn: QuantumNumbers) -> str:
    """Term label such as ``2P1/2``."""
    letter = _ORBITAL_LETTERS[qn.l] if qn.l < len(_ORBITAL_LETTERS) else f"[l={qn.l}]"
    return f"{principal_number(qn)}{letter}{qn.two_j}/2"


def states_up_to(n_max: int) -> List[QuantumNumbers]:
    """All valid states with principal number n <= n_max, ordered by (n, l, j)."""
    states = []
    for n in range(1, n_max + 1):
        for l in range(n):
            for two_j in (2 * l - 1, 2 * l + 1):
                if two_j < 1:
                    continue
                states.append(QuantumNumbers(n_r=n - l - 1, l=l, two_j=two_j))
    return states


def discriminant(params: ModelParams, qn: QuantumNumbers) -> float:
    """Radicand (j + 1/2)^2 + a^2 - alpha^2 of the effective orbital number.

    Inputs
    ------
    params : ModelParams
        Coupling and mass parameter.
    qn : QuantumNumbers
        Level whose j enters the radicand.
    Returns
    -------
    float
        Negative values mean fall to the center; callers check the sign.
    """
    k = qn.kappa_abs
    return k * k + params.a * params.a - params.alpha * params.alpha


def bound_state_condition(params: ModelParams) -> bool:
    """True iff a < alpha, i.e. a is below the classical electron radius.

    With alpha = 0 this is a < 0. The boundary a = alpha is not a bound
    family: it carries the single level epsilon = 1.
    """
    return params.a < params.alpha


def binding_regime(params: ModelParams) -> str:
    """Tri-state classification used by the command line and the API."""
    if bound_state_condition(params):
        return "bound"
    if params.a == params.alpha:
        return "single-level"
    return "unbound"

