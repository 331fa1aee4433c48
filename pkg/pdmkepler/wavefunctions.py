"""Radial functions of the bound levels.

The radial part of the auxiliary function is the hydrogen radial function
with non-integer orbital number l*, principal number n* and charge e*^2:
    R(r) = N rho^l* exp(-rho/2) L_{n_r}^{(2l*+1)}(rho),  rho = 2 e*^2 r / n*.
Only this scalar factor is built; the four-component spinor is not.
"""
import logging
import math
import warnings
from typing import Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate
from scipy.special import gammaln

from pdmkepler.errors import ParameterDomainError, QuadratureError
from pdmkepler.mesh import count_sign_changes
from pdmkepler.model import LevelResult, QuantumNumbers

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-8
# the radial functions decay like exp(-e*^2 r / n*); past this many decay
# lengths the tail is below double precision
TAIL_DECAY_LENGTHS = 80.0


class RadialWavefunction(BaseModel):
    """Normalized radial function of one level."""

    model_config = ConfigDict(frozen=True)

    n_r: int = Field(..., ge=0, description="Degree of the Laguerre polynomial, number of nodes")
    l_star: float = Field(..., gt=-1.0, description="Effective orbital number")
    n_star: float = Field(..., gt=0.0, description="Effective principal number")
    e_star_sq: float = Field(..., gt=0.0, description="Effective charge squared")
    scale: float = Field(..., gt=0.0, description="Effective Bohr radius 1/e*^2")
    norm_constant: float = Field(..., gt=0.0, description="Prefactor N of R(r)")

    @property
    def decay_length(self) -> float:
        return self.n_star * self.scale

    @property
    def laguerre_parameter(self) -> float:
        return 2.0 * self.l_star + 1.0


def generalized_laguerre(k: int, beta: float, x) -> np.ndarray:
    """L_k^(beta)(x) by the forward three-term recurrence in the degree."""
    x = np.asarray(x, dtype=float)
    previous = np.ones_like(x)
    if k == 0:
        return previous
    current = 1.0 + beta - x
    for m in range(1, k):
        following = ((2 * m + 1 + beta - x) * current - (m + beta) * previous) / (m + 1)
        previous, current = current, following
    return current


def _log_norm(n_r: int, l_star: float, n_star: float, e_star_sq: float) -> float:
    # N^2 = (2 e*^2/n*)^3 n_r! / (2 n* Gamma(n_r + 2 l* + 2))
    return 0.5 * (
        3.0 * math.log(2.0 * e_star_sq / n_star)
        + gammaln(n_r + 1.0)
        - math.log(2.0 * n_star)
        - gammaln(n_r + 2.0 * l_star + 2.0)
    )


def radial_wavefunction(level: LevelResult, qn: QuantumNumbers) -> RadialWavefunction:
    """Build the normalized radial function of a bound level.

    Inputs
    ------
    level : LevelResult
        Output of ``energy_exact`` for ``qn``; must be bound.
    qn : QuantumNumbers
        Supplies n_r, the number of nodes.
    Returns
    -------
    RadialWavefunction
    """
    if not level.is_bound:
        raise ParameterDomainError(f"{qn.label} is not a bound level (e*^2={level.e_star_sq})")
    if level.l_star <= -1.0:
        raise ParameterDomainError(f"l*={level.l_star} is not normalizable")
    log_norm = _log_norm(qn.n_r, level.l_star, level.n_star, level.e_star_sq)
    return RadialWavefunction(
        n_r=qn.n_r,
        l_star=level.l_star,
        n_star=level.n_star,
        e_star_sq=level.e_star_sq,
        scale=1.0 / level.e_star_sq,
        norm_constant=math.exp(log_norm),
    )


def evaluate(wf: RadialWavefunction, r_values) -> np.ndarray:
    """R(r) at positive radii."""
    r = np.asarray(r_values, dtype=float)
    rho = 2.0 * wf.e_star_sq * r / wf.n_star
    # combine the power and the exponential in log space to avoid overflow
    envelope = np.exp(wf.l_star * np.log(rho) - 0.5 * rho)
    return wf.norm_constant * envelope * generalized_laguerre(wf.n_r, wf.laguerre_parameter, rho)


def _quad(func, lower: float, upper: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(func, lower, upper, epsabs=1e-14, epsrel=1e-12, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on [{lower}, {upper}] did not converge: {exc}") from exc
    return value


def _radial_integral(wf_left: RadialWavefunction, wf_right: RadialWavefunction) -> float:
    """Integral of R_left R_right r^2 dr over (0, inf).

    Near the origin r = t^2 removes the r^l* endpoint singularity; the rest
    is split at the nodes' scale and cut where the tail underflows.
    """
    split = min(wf_left.decay_length, wf_right.decay_length)
    cutoff = TAIL_DECAY_LENGTHS * max(wf_left.decay_length, wf_right.decay_length)

    def near(t: float) -> float:
        r = t * t
        return float(evaluate(wf_left, r) * evaluate(wf_right, r)) * r * r * 2.0 * t

    def far(r: float) -> float:
        return float(evaluate(wf_left, r) * evaluate(wf_right, r)) * r * r

    inner = _quad(near, 0.0, math.sqrt(split))
    bulk = _quad(far, split, cutoff / 4.0)
    tail = _quad(far, cutoff / 4.0, cutoff)
    return inner + bulk + tail


def normalization_check(wf: RadialWavefunction) -> float:
    """|integral R^2 r^2 dr - 1|, expected below 1e-8."""
    return abs(_radial_integral(wf, wf) - 1.0)


def overlap(wf_left: RadialWavefunction, wf_right: RadialWavefunction) -> float:
    return _radial_integral(wf_left, wf_right)


def node_count(wf: RadialWavefunction, r_values=None) -> int:
    """Sign changes of R on (0, inf), sampled on ``r_values`` or a default grid."""
    if r_values is None:
        r_values = np.linspace(1e-6, 4.0 * wf.n_star * wf.decay_length + 10.0 * wf.decay_length, 20000)
    return count_sign_changes(evaluate(wf, r_values), rel_threshold=1e-12)


def sample(wf: RadialWavefunction, r_values: Sequence[float]) -> pd.DataFrame:
    """Table with columns r, R and u = rR for export."""
    r = np.asarray(r_values, dtype=float)
    values = evaluate(wf, r)
    return pd.DataFrame({"r": r, "R": values, "u": r * values})
