"""Non-relativistic position-dependent mass lab.

Kinetic operators of the two-sided family
    T = 1/4 (m^eta p m^eps p m^rho + m^rho p m^eps p m^eta),  eta + eps + rho = -1,
with m(r) = 1 + a/r and V = -alpha/r. On u = r psi the radial operator is
    -1/2 (w u')' + W(r) u,   w = 1/m,
    W = l(l+1) w/(2 r^2) + (w/2)[(1+eps)/2 mu'' + eps mu'/r - ((1+eps)/2 - eta rho) mu'^2] - alpha/r,
mu = ln m. The spectra of several orderings are compared with each other
and with Bohr-Sommerfeld quantization.
"""
import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import brentq, minimize_scalar

from pdmkepler.errors import (
    MeshTooCoarseError,
    NoClassicalWellError,
    NonPositiveMassError,
    NumericalError,
    ParameterDomainError,
)
from pdmkepler.mesh import (
    DEFAULT_GRADING,
    RadialMesh,
    bound_level_count,
    build_operator,
    eigenvalues,
    richardson,
)

logger = logging.getLogger(__name__)

ASYMMETRY_TOLERANCE = 1e-13
WALL_OFFSET = 1e-6
DEFAULT_LAB_POINTS = 20000
GAUSS_POINTS = 64
ACTION_TOLERANCE = 1e-10
MAX_BRACKET_STEPS = 200


class OrderingSpec(BaseModel):
    """Exponents (eta, eps, rho) of the kinetic-operator ordering."""

    model_config = ConfigDict(frozen=True)

    eta: float
    eps: float
    rho: float
    name: Optional[str] = Field(None, description="Conventional name of the ordering")

    @model_validator(mode="after")
    def _check_sum(self) -> "OrderingSpec":
        if not math.isclose(self.eta + self.eps + self.rho, -1.0, abs_tol=1e-12):
            raise ValueError(
                f"ordering exponents must sum to -1, got {self.eta} + {self.eps} + {self.rho}"
            )
        return self

    @property
    def label(self) -> str:
        exponents = f"({self.eta:g},{self.eps:g},{self.rho:g})"
        return f"{self.name} {exponents}" if self.name else exponents

    @property
    def exponents(self) -> Tuple[float, float, float]:
        return self.eta, self.eps, self.rho


SYMMETRIC = OrderingSpec(eta=-0.5, eps=0.0, rho=-0.5, name="symmetric")
BENDANIEL_DUKE = OrderingSpec(eta=0.0, eps=-1.0, rho=0.0, name="BenDaniel-Duke")
LI_KUHN = OrderingSpec(eta=0.0, eps=-0.5, rho=-0.5, name="Li-Kuhn")
MUSTAFA_MAZHARIMOUSAVI = OrderingSpec(eta=-0.25, eps=-0.5, rho=-0.25, name="Mustafa-Mazharimousavi")

DEFAULT_ORDERINGS = (SYMMETRIC, BENDANIEL_DUKE, LI_KUHN)


class PdmProblem(BaseModel):
    """Radial PDM Schroedinger problem for one orbital number and ordering."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., description="Mass parameter of m*(r) = 1 + a/r")
    alpha: float = Field(..., ge=0.0, description="Coulomb strength")
    l: int = Field(..., ge=0, description="Orbital quantum number")
    ordering: OrderingSpec = SYMMETRIC
    mesh: RadialMesh

    @model_validator(mode="after")
    def _check_mass(self) -> "PdmProblem":
        if self.a < 0.0 and self.mesh.r_min <= -self.a:
            raise NonPositiveMassError(
                f"m*(r) = 1 + a/r vanishes at r = {-self.a}; the mesh starts at r_min={self.mesh.r_min}"
            )
        return self

    @classmethod
    def with_default_mesh(
        cls,
        a: float,
        alpha: float,
        l: int,
        ordering: OrderingSpec = SYMMETRIC,
        levels: int = 10,
        n_points: int = DEFAULT_LAB_POINTS,
    ) -> "PdmProblem":
        return cls(a=a, alpha=alpha, l=l, ordering=ordering, mesh=lab_mesh(a, alpha, l, levels, n_points))


def inner_wall(a: float) -> float:
    """Hard wall just outside the zero of m*(r) when a < 0, the origin otherwise."""
    return -a * (1.0 + WALL_OFFSET) if a < 0.0 else 0.0


def lab_mesh(a: float, alpha: float, l: int, levels: int, n_points: int = DEFAULT_LAB_POINTS) -> RadialMesh:
    """Graded box holding the lowest ``levels`` levels of the Coulomb-like well."""
    if alpha <= 0.0:
        raise ParameterDomainError("the default lab mesh is sized by the Coulomb orbit; pass a mesh for alpha = 0")
    n = levels + l
    r_max = inner_wall(a) + (2.0 * n * n + 25.0 * n + 20.0) / alpha
    return RadialMesh(r_max=r_max, n_points=n_points, r_min=inner_wall(a), grading=DEFAULT_GRADING)


def _log_mass_derivatives(r: np.ndarray, a: float):
    # mu = ln(1 + a/r) = ln(r + a) - ln r
    mu1 = -a / (r * (r + a))
    mu2 = 1.0 / (r * r) - 1.0 / ((r + a) ** 2)
    return mu1, mu2


def inverse_mass(r: np.ndarray, a: float) -> np.ndarray:
    return r / (r + a)


def effective_potential(r, a: float, alpha: float, l: int, ordering: OrderingSpec) -> np.ndarray:
    """Local potential W(r) of the reduced radial operator on u = r psi."""
    r = np.asarray(r, dtype=float)
    w = inverse_mass(r, a)
    mu1, mu2 = _log_mass_derivatives(r, a)
    half = 0.5 * (1.0 + ordering.eps)
    ordering_term = half * mu2 + ordering.eps * mu1 / r - (half - ordering.eta * ordering.rho) * mu1 * mu1
    return l * (l + 1) * w / (2.0 * r * r) + 0.5 * w * ordering_term - alpha / r


def _operator(problem: PdmProblem, mesh: RadialMesh):
    grading = mesh.grading if mesh.grading is not None else DEFAULT_GRADING
    op = build_operator(
        mesh,
        grading,
        lambda r: inverse_mass(r, problem.a),
        lambda r: effective_potential(r, problem.a, problem.alpha, problem.l, problem.ordering),
    )
    if op.asymmetry > ASYMMETRY_TOLERANCE:
        raise NumericalError(f"discretized Hamiltonian is not symmetric: defect {op.asymmetry:.2e}")
    return op


def hermiticity_defect(problem: PdmProblem) -> float:
    """Relative asymmetry of the assembled matrix for ``problem``."""
    return _operator(problem, problem.mesh).asymmetry


def _lowest(problem: PdmProblem, mesh: RadialMesh, count: int) -> np.ndarray:
    op = _operator(problem, mesh)
    resolved = bound_level_count(op)
    if count > resolved:
        raise MeshTooCoarseError(
            f"{count} levels requested but only {resolved} are bound in a box of r_max={mesh.r_max}"
        )
    return eigenvalues(op, 0, count - 1)


def pdm_eigenvalues(problem: PdmProblem, count: int, extrapolate: bool = True) -> List[float]:
    """Lowest ``count`` eigenvalues of the radial PDM Hamiltonian.

    Inputs
    ------
    problem : PdmProblem
        Mass parameter, coupling, l, ordering and mesh.
    count : int
        Number of levels, all of which must be bound in the box.
    extrapolate : bool
        Combine h and h/2 by Richardson extrapolation (default=True).
    Returns
    -------
    list of float
    """
    if count < 1:
        raise ParameterDomainError(f"count must be positive, got {count}")
    coarse = _lowest(problem, problem.mesh, count)
    if not extrapolate:
        return coarse.tolist()
    fine = _lowest(problem, problem.mesh.refined(), count)
    logger.debug(
        f"{problem.ordering.label}: max mesh correction {np.max(np.abs(fine - coarse)) / 3.0:.2e}"
    )
    return richardson(coarse, fine).tolist()


def _momentum_squared(r, a: float, alpha: float, l: int, energy: float):
    """p_r^2 = 2 m*(E - V) - (l + 1/2)^2 / r^2 with the Langer replacement."""
    mass = 1.0 + a / r
    return 2.0 * mass * (energy + alpha / r) - (l + 0.5) ** 2 / (r * r)


def classical_potential(r, a: float, alpha: float, l: int):
    """-alpha/r + (l + 1/2)^2 / (2 m* r^2); p_r^2 > 0 exactly where E exceeds it."""
    mass = 1.0 + a / r
    return -alpha / r + (l + 0.5) ** 2 / (2.0 * mass * r * r)


def _check_no_fall(a: float, alpha: float, l: int) -> None:
    shifted = (l + 0.5) ** 2 - 2.0 * a * alpha
    if shifted <= 0.0:
        raise NoClassicalWellError(f"classical fall to center: (l+1/2)^2 - 2 a alpha = {shifted}")


def _well_bottom(a: float, alpha: float, l: int) -> Tuple[float, float]:
    """Radius and energy of the minimum of the classical potential."""
    _check_no_fall(a, alpha, l)
    floor = inner_wall(a)

    def barrier(x: float) -> float:
        return classical_potential(floor + math.exp(x), a, alpha, l)

    found = minimize_scalar(barrier, bounds=(-20.0, 20.0), method="bounded", options={"xatol": 1e-12})
    if found.fun >= 0.0:
        raise NoClassicalWellError(f"no classical well for a={a}, alpha={alpha}, l={l}")
    return floor + math.exp(found.x), float(found.fun)


def _turning_points(a: float, alpha: float, l: int, energy: float) -> Tuple[float, float]:
    floor = inner_wall(a)
    r_bottom, bottom = _well_bottom(a, alpha, l)
    if energy <= bottom:
        raise NoClassicalWellError(f"E={energy} lies below the well bottom {bottom}")
    if energy >= 0.0:
        raise NoClassicalWellError(f"classical orbit at E={energy} is not bounded")

    def gap(r: float) -> float:
        return energy - classical_potential(r, a, alpha, l)

    inner = r_bottom
    outer = r_bottom
    for _ in range(MAX_BRACKET_STEPS):
        if gap(inner) <= 0.0:
            break
        inner = floor + 0.5 * (inner - floor)
    for _ in range(MAX_BRACKET_STEPS):
        if gap(outer) <= 0.0:
            break
        outer *= 2.0
    if gap(inner) > 0.0 or gap(outer) > 0.0:
        raise NumericalError(f"turning points at E={energy} not bracketed in [{inner:.3e}, {outer:.3e}]")
    r1 = brentq(gap, inner, r_bottom, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
    r2 = brentq(gap, r_bottom, outer, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
    return r1, r2


def _theta_panels(r1: float, r2: float) -> np.ndarray:
    """Panel edges in theta, graded geometrically towards theta = 0.

    r(theta) vanishes at theta ~ i sqrt(r1 / (r2 - r1)); panels of that size
    near the origin keep Gauss-Legendre converging when r1 << r2.
    """
    width = math.sqrt(r1 / (r2 - r1))
    edges = [0.0]
    while width < 0.25 * math.pi:
        edges.append(width)
        width *= 2.0
    edges.append(0.5 * math.pi)
    return np.array(edges)


def wkb_action(a: float, alpha: float, l: int, energy: float) -> float:
    """Closed-orbit action of p_r dr between the turning points.

    The substitution r = r1 + (r2 - r1) sin^2(theta) removes the square-root
    endpoint singularities; each theta panel gets 64-point Gauss-Legendre.
    """
    r1, r2 = _turning_points(a, alpha, l, energy)
    nodes, weights = leggauss(GAUSS_POINTS)
    total = 0.0
    edges = _theta_panels(r1, r2)
    for start, stop in zip(edges[:-1], edges[1:]):
        half = 0.5 * (stop - start)
        theta = start + half * (nodes + 1.0)
        sin, cos = np.sin(theta), np.cos(theta)
        r = r1 + (r2 - r1) * sin * sin
        p2 = np.clip(_momentum_squared(r, a, alpha, l, energy), 0.0, None)
        integrand = np.sqrt(p2) * 2.0 * (r2 - r1) * sin * cos
        total += half * float(np.dot(weights, integrand))
    return 2.0 * total


def wkb_levels(a: float, alpha: float, l: int, n_r_max: int) -> List[float]:
    """Bohr-Sommerfeld levels with action 2 pi (n_r + 1/2), n_r = 0..n_r_max."""
    if alpha <= 0.0:
        raise NoClassicalWellError(f"no Coulomb attraction for alpha={alpha}")
    _, bottom = _well_bottom(a, alpha, l)
    low = bottom * (1.0 - 1e-7)
    high = -1e-12
    levels = []
    for n_r in range(n_r_max + 1):
        target = 2.0 * math.pi * (n_r + 0.5)

        def mismatch(energy: float) -> float:
            return wkb_action(a, alpha, l, energy) - target

        if mismatch(high) < 0.0:
            raise NoClassicalWellError(f"level n_r={n_r} lies above the continuum edge")
        energy = brentq(mismatch, low, high, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
        if abs(mismatch(energy)) > ACTION_TOLERANCE * target:
            raise NumericalError(f"quantization condition not met for n_r={n_r}")
        levels.append(energy)
    return levels


def wkb_closed_form(a: float, alpha: float, l: int, n_r: int) -> float:
    """Closed-form Bohr-Sommerfeld level.

    p_r^2 = 2E + 2(alpha + E a)/r - ((l+1/2)^2 - 2 a alpha)/r^2 is Coulomb-like,
    so the quantization gives sqrt(-2E) = 2 alpha / (N + sqrt(N^2 + 2 a alpha))
    with N = n_r + 1/2 + sqrt((l+1/2)^2 - 2 a alpha).
    """
    _check_no_fall(a, alpha, l)
    shifted = (l + 0.5) ** 2 - 2.0 * a * alpha
    big_n = n_r + 0.5 + math.sqrt(shifted)
    root = big_n * big_n + 2.0 * a * alpha
    if root < 0.0 or alpha <= 0.0:
        raise NoClassicalWellError(f"no Coulomb-like level for a={a}, alpha={alpha}")
    s = 2.0 * alpha / (big_n + math.sqrt(root))
    return -0.5 * s * s


@lru_cache(maxsize=64)
def _ordering_levels(a: float, alpha: float, l: int, ordering: OrderingSpec, count: int, n_points: int):
    problem = PdmProblem.with_default_mesh(a, alpha, l, ordering, levels=count, n_points=n_points)
    return tuple(pdm_eigenvalues(problem, count))


def ordering_levels(
    a: float, alpha: float, l: int, ordering: OrderingSpec, count: int, n_points: int = DEFAULT_LAB_POINTS
) -> List[float]:
    """Cached extrapolated levels on the default lab mesh."""
    return list(_ordering_levels(a, alpha, l, ordering, count, n_points))


def ordering_spread(
    a: float,
    alpha: float,
    l: int,
    orderings: Sequence[OrderingSpec] = DEFAULT_ORDERINGS,
    n_r: int = 0,
    n_points: int = DEFAULT_LAB_POINTS,
) -> float:
    """Largest ordering shift of level n_r in units of the local level spacing.

    The reference is the symmetric ordering; the spacing is
    |E(n_r + 1) - E(n_r)| of the reference spectrum.
    """
    count = n_r + 2
    reference = ordering_levels(a, alpha, l, SYMMETRIC, count, n_points)
    spacing = abs(reference[n_r + 1] - reference[n_r])
    shifts = [
        abs(ordering_levels(a, alpha, l, spec, count, n_points)[n_r] - reference[n_r])
        for spec in orderings
    ]
    spread = max(shifts) / spacing
    logger.info(f"ordering spread a={a} alpha={alpha} l={l} n_r={n_r}: {spread:.4g}")
    return spread


def wkb_deviation(a: float, alpha: float, l: int, n_r: int, n_points: int = DEFAULT_LAB_POINTS) -> float:
    """|E_WKB - E_symmetric| of level n_r in units of the local level spacing."""
    reference = ordering_levels(a, alpha, l, SYMMETRIC, n_r + 2, n_points)
    spacing = abs(reference[n_r + 1] - reference[n_r])
    return abs(wkb_levels(a, alpha, l, n_r)[n_r] - reference[n_r]) / spacing
