"""Closed-form spectrum of the Dirac particle with m*(r) = m(1 + a/r).

The squared Dirac equation reduces to a Kepler problem with effective
orbital number l*, effective charge e*^2 = epsilon*alpha - a and energy
E* = (epsilon^2 - 1)/2. Quantizing it gives the exact levels below; only
the positive-energy branch of the quadratic in epsilon is returned.
"""
import logging
import math

from pdmkepler.errors import (
    ConsistencyError,
    FallToCenterError,
    NoBoundStateError,
    ParameterDomainError,
)
from pdmkepler.model import (
    LevelResult,
    ModelParams,
    QuantumNumbers,
    discriminant,
    principal_number,
)

logger = logging.getLogger(__name__)

QUADRATIC_TOLERANCE = 1e-12
NO_BOUND_STATE_MESSAGE = "no bound states: a ≥ e²/mc²"


def _root(params: ModelParams, qn: QuantumNumbers) -> float:
    d = discriminant(params, qn)
    if d < 0.0 or (d == 0.0 and qn.upper_branch):
        raise FallToCenterError(
            f"fall to center: (j+1/2)^2 + a^2 - alpha^2 = {d:.6g} for j={qn.two_j}/2 "
            f"(alpha={params.alpha}, a={params.a})"
        )
    return math.sqrt(d)


def l_star(params: ModelParams, qn: QuantumNumbers) -> float:
    """Effective orbital number sqrt((j+1/2)^2 + a^2 - alpha^2) - 1/2 -+ 1/2.

    The upper sign belongs to j = l + 1/2. A vanishing radicand on that
    branch would give l* = -1, which is not normalizable, and is reported
    as fall to center together with negative radicands.
    """
    root = _root(params, qn)
    return root - 1.0 if qn.upper_branch else root


def n_star(params: ModelParams, qn: QuantumNumbers) -> float:
    """Effective principal number n_r + l* + 1.

    The integer part is summed before the root is added, so degenerate
    partners such as nS1/2 and nP1/2 get bit-identical values.
    """
    root = _root(params, qn)
    offset = qn.n_r if qn.upper_branch else qn.n_r + 1
    return offset + root


def quadratic_residual(params: ModelParams, n_star_value: float, epsilon: float) -> float:
    """Residual of (eps^2 - 1)/2 + (eps*alpha - a)^2 / (2 n*^2)."""
    charge = epsilon * params.alpha - params.a
    return (epsilon * epsilon - 1.0) / 2.0 + charge * charge / (2.0 * n_star_value ** 2)


def _check_bound(params: ModelParams) -> None:
    if params.a > params.alpha:
        raise NoBoundStateError(
            f"{NO_BOUND_STATE_MESSAGE} (alpha={params.alpha}, a={params.a})"
        )


def binding_energy(params: ModelParams, qn: QuantumNumbers) -> float:
    """Binding 1 - epsilon of a level, free of cancellation.

    With u = alpha/n*, v = a/n* and S = sqrt(1 + u^2 - v^2) the exact level
    satisfies 1 - epsilon = (u - v)(u S - v) / ((S + 1)(1 + u^2)), which
    vanishes identically on the boundary a = alpha.
    """
    _check_bound(params)
    ns = n_star(params, qn)
    u = params.alpha / ns
    v = params.a / ns
    s = math.sqrt(1.0 + u * u - v * v)
    return (u - v) * (u * s - v) / ((s + 1.0) * (1.0 + u * u))


def energy_exact(params: ModelParams, qn: QuantumNumbers) -> LevelResult:
    """Exact level of the position-dependent mass Dirac-Kepler problem.

    Inputs
    ------
    params : ModelParams
        Coupling alpha and mass parameter a (a <= alpha).
    qn : QuantumNumbers
        Selected level.
    Returns
    -------
    LevelResult
        l*, n*, e*^2 and epsilon = E/mc^2. On the boundary a = alpha the
        result is the single level epsilon = 1 with e*^2 = 0.
    """
    ls = l_star(params, qn)
    ns = n_star(params, qn)
    beta = binding_energy(params, qn)
    epsilon = 1.0 - beta
    if epsilon <= 0.0:
        raise NoBoundStateError(
            f"no positive-energy level for {qn} (alpha={params.alpha}, a={params.a})"
        )
    e_star_sq = (params.alpha - params.a) - beta * params.alpha
    scale = max(abs(params.alpha), abs(params.a), 1.0)
    if e_star_sq < -4.0 * math.ulp(scale):
        raise ConsistencyError(f"negative effective charge {e_star_sq!r} for {qn}")
    e_star_sq = max(e_star_sq, 0.0)

    residual = -beta * (2.0 - beta) / 2.0 + e_star_sq * e_star_sq / (2.0 * ns * ns)
    if abs(residual) > QUADRATIC_TOLERANCE:
        raise ConsistencyError(
            f"level {qn} fails the defining quadratic: residual {residual:.3e}"
        )
    logger.debug(f"level {qn.label}: n*={ns:.15g} epsilon={epsilon:.17g}")
    return LevelResult(l_star=ls, n_star=ns, e_star_sq=e_star_sq, epsilon=epsilon)


def sommerfeld_energy(alpha: float, qn: QuantumNumbers) -> float:
    """Textbook Dirac-Coulomb level, written with the Dirac radial number."""
    k = qn.kappa_abs
    if alpha >= k:
        raise FallToCenterError(f"alpha={alpha} exceeds j+1/2={k}")
    dirac_radial = principal_number(qn) - k
    denominator = dirac_radial + math.sqrt(k * k - alpha * alpha)
    return 1.0 / math.sqrt(1.0 + (alpha / denominator) ** 2)


def energy_free_case(params: ModelParams, qn: QuantumNumbers) -> float:
    """Levels sqrt(1 - (a/n*)^2) without Coulomb attraction (alpha = 0, a < 0)."""
    if params.alpha != 0.0:
        raise ParameterDomainError(f"free case needs alpha = 0, got {params.alpha}")
    if params.a >= 0.0:
        raise NoBoundStateError(f"without Coulomb attraction bound states need a < 0, got a={params.a}")
    ratio = params.a / n_star(params, qn)
    return math.sqrt(1.0 - ratio * ratio)


def ground_state_energy(params: ModelParams) -> float:
    """Ground level [a alpha + sqrt(1 + a^2 - alpha^2)] / (1 + a^2)."""
    _check_bound(params)
    radicand = 1.0 + params.a ** 2 - params.alpha ** 2
    if radicand <= 0.0:
        raise FallToCenterError(f"fall to center in the ground state: radicand {radicand:.6g}")
    return (params.a * params.alpha + math.sqrt(radicand)) / (1.0 + params.a ** 2)


def mean_effective_mass(params: ModelParams) -> float:
    """Mean effective mass 1/sqrt(1 + a^2) in units of m (alpha = 0).

    It equals the free-case ground level, which plays the role of the
    particle rest energy.
    """
    if params.alpha != 0.0:
        raise ParameterDomainError(f"mean effective mass is defined for alpha = 0, got {params.alpha}")
    if params.a > 0.0:
        raise NoBoundStateError(f"mean effective mass needs a <= 0, got a={params.a}")
    return 1.0 / math.sqrt(1.0 + params.a ** 2)


def casimir_energy(a: float) -> float:
    """Asymptote hbar c/|a| of the free-case ground level for |a| >> 1."""
    if a == 0.0:
        raise ParameterDomainError("the Casimir-like asymptote needs a != 0")
    return 1.0 / abs(a)