"""Numerical oracle for the exact spectrum.

The radial equation is a Kepler problem whose charge e*^2 = epsilon*alpha - a
depends on the energy it determines. The oracle discretizes
    -1/2 u'' + [l*(l*+1)/(2 r^2) - e*^2/r] u = E* u
on a finite box, and finds epsilon with E*_{n_r}(epsilon*alpha - a) = (epsilon^2 - 1)/2
by a bracketed root search. Two nested meshes and Richardson extrapolation
remove the O(h^2) bias.
"""
import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq

from pdmkepler.errors import (
    BracketError,
    FallToCenterError,
    MeshTooCoarseError,
    NoBoundStateError,
    NumericalError,
    ParameterDomainError,
)
from pdmkepler.mesh import (
    RadialMesh,
    build_operator,
    count_sign_changes,
    eigenpair,
    eigenvalues,
    GRADING_THRESHOLD,
    observed_order,
    richardson,
)
from pdmkepler.model import ModelParams, QuantumNumbers, bound_state_condition, discriminant
from pdmkepler.spectrum import energy_exact, l_star as effective_orbital

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_POINTS = 4000
BOX_FACTOR = 40.0
MIN_BOX_FACTOR = 10.0
CHARGE_FLOOR = 0.1
PRESCAN_POINTS = 32
EPSILON_FLOOR = 0.01
FREE_EPSILON_FLOOR = 1e-3
EPSILON_CEILING = 1.0 - 1e-12


class OracleResult(BaseModel):
    """Self-consistent level found by the oracle."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(..., description="Extrapolated energy in units of mc^2")
    residual: float = Field(..., ge=0.0, description="|F(epsilon)| on the finer mesh")
    mesh_error_estimate: float = Field(..., ge=0.0, description="Richardson error estimate")
    iterations: int = Field(..., ge=0, description="Root-finder iterations over all meshes")
    order: float = Field(2.0, gt=0.0, description="Convergence order used for the extrapolation")
    coarse_epsilon: float
    fine_epsilon: float


def default_mesh(n_star: float, e_star_sq: float, n_points: int = DEFAULT_POINTS) -> RadialMesh:
    """Box of 40 n*^2 / max(e*^2, 0.1) around the Kepler orbit."""
    return RadialMesh(r_max=BOX_FACTOR * n_star ** 2 / max(e_star_sq, CHARGE_FLOOR), n_points=n_points)


def _coulomb_operator(e_star_sq: float, l_star: float, mesh: RadialMesh):
    centrifugal = 0.5 * l_star * (l_star + 1.0)

    def potential(r: np.ndarray) -> np.ndarray:
        return centrifugal / (r * r) - e_star_sq / r

    return build_operator(mesh, mesh.resolved_grading(l_star), np.ones_like, potential)


def _box_eigenvalue(e_star_sq: float, l_star: float, n_r: int, mesh: RadialMesh) -> float:
    op = _coulomb_operator(e_star_sq, l_star, mesh)
    return float(eigenvalues(op, n_r, n_r)[0])


def _check_inputs(e_star_sq: float, l_star: float, n_r: int) -> None:
    if e_star_sq <= 0.0:
        raise ParameterDomainError(f"effective charge must be positive, got e*^2={e_star_sq}")
    if l_star <= -1.0:
        raise ParameterDomainError(f"effective orbital number must exceed -1, got l*={l_star}")
    if n_r < 0:
        raise ParameterDomainError(f"radial quantum number must be non-negative, got {n_r}")


def effective_hamiltonian_eigenvalue(
    e_star_sq: float, l_star: float, n_r: int, mesh: Optional[RadialMesh] = None
) -> float:
    """The n_r-th eigenvalue of the discretized effective Kepler operator.

    Inputs
    ------
    e_star_sq : float
        Effective charge squared (> 0).
    l_star : float
        Effective orbital number (> -1).
    n_r : int
        Index of the eigenvalue in ascending order.
    mesh : RadialMesh
        Box and node count (default=None sizes the box from the Bohr orbit).
    Returns
    -------
    float
        E* approaching -e*^4 / (2 (n_r + l* + 1)^2) as the mesh refines.
    """
    _check_inputs(e_star_sq, l_star, n_r)
    if mesh is None:
        mesh = default_mesh(n_r + l_star + 1.0, e_star_sq)
    value = _box_eigenvalue(e_star_sq, l_star, n_r, mesh)
    if value >= 0.0:
        raise MeshTooCoarseError(
            f"level n_r={n_r} is not bound in a box of r_max={mesh.r_max} (E*={value:.3e})"
        )
    return value


def eigenvector_node_count(
    e_star_sq: float, l_star: float, n_r: int, mesh: Optional[RadialMesh] = None
) -> int:
    """Interior sign changes of the n_r-th discrete eigenvector."""
    _check_inputs(e_star_sq, l_star, n_r)
    if mesh is None:
        mesh = default_mesh(n_r + l_star + 1.0, e_star_sq)
    _, u = eigenpair(_coulomb_operator(e_star_sq, l_star, mesh), n_r)
    return count_sign_changes(u)


def _bracket(params: ModelParams):
    if params.alpha > 0.0:
        low = max(params.a / params.alpha + 1e-9, EPSILON_FLOOR)
    else:
        low = FREE_EPSILON_FLOOR
    return low, EPSILON_CEILING


def self_consistent_energy(
    params: ModelParams,
    qn: QuantumNumbers,
    mesh: Optional[RadialMesh] = None,
    tol: float = DEFAULT_TOLERANCE,
) -> OracleResult:
    """Solve the energy-dependent Kepler problem for one level.

    Inputs
    ------
    params : ModelParams
        Coupling and mass parameter; a < alpha is required.
    qn : QuantumNumbers
        Level to solve for.
    mesh : RadialMesh
        Coarse mesh; the fine mesh halves its spacing, and for l* < 0.25 a
        third mesh halves it again to measure the convergence order
        (default=None uses 4000 nodes and a box of 40 Bohr radii of the state).
    tol : float
        Required |F| at the root (default=1e-10).
    Returns
    -------
    OracleResult
    """
    if not bound_state_condition(params):
        raise NoBoundStateError(f"no bound states: a ≥ e²/mc² (alpha={params.alpha}, a={params.a})")
    if discriminant(params, qn) <= 0.0:
        raise FallToCenterError(f"fall to center for {qn.label} (alpha={params.alpha}, a={params.a})")

    ls = effective_orbital(params, qn)
    # the analytic level only sizes the box
    level = energy_exact(params, qn)
    if mesh is None:
        mesh = default_mesh(level.n_star, level.e_star_sq)
    orbit = level.n_star ** 2 / max(level.e_star_sq, np.finfo(float).tiny)
    if mesh.r_max < MIN_BOX_FACTOR * orbit:
        raise MeshTooCoarseError(
            f"r_max={mesh.r_max} is below {MIN_BOX_FACTOR} x the orbit radius {orbit:.4g} of {qn.label}"
        )

    low, high = _bracket(params)
    coarse_mesh = mesh
    fine_mesh = mesh.refined()
    meshes = [coarse_mesh, fine_mesh]
    # r^(l*+1) near the origin degrades the order; measure it on a third mesh
    singular = ls < GRADING_THRESHOLD
    if singular:
        meshes.append(fine_mesh.refined())

    def mismatch(epsilon: float, grid: RadialMesh) -> float:
        charge = epsilon * params.alpha - params.a
        return _box_eigenvalue(charge, ls, qn.n_r, grid) - (epsilon * epsilon - 1.0) / 2.0

    grid_points = np.linspace(low, high, PRESCAN_POINTS)
    scan = np.array([mismatch(x, coarse_mesh) for x in grid_points])
    changes = np.flatnonzero(np.sign(scan[1:]) != np.sign(scan[:-1]))
    if changes.size != 1:
        raise BracketError(
            f"expected one sign change of F on [{low:.6g}, {high:.6g}] for {qn.label}, found {changes.size}",
            diagnostics={"epsilon": grid_points.tolist(), "F": scan.tolist()},
        )
    start = int(changes[0])
    logger.debug(f"{qn.label}: root bracketed in [{grid_points[start]:.12g}, {grid_points[start + 1]:.12g}]")

    solutions = []
    iterations = 0
    for grid in meshes:
        f_low = mismatch(low, grid)
        f_high = mismatch(high, grid)
        if np.sign(f_low) == np.sign(f_high):
            raise BracketError(
                f"F keeps its sign on [{low:.6g}, {high:.6g}] for {qn.label} with {grid.n_points} nodes",
                diagnostics={"F_low": f_low, "F_high": f_high},
            )
        root, info = brentq(
            mismatch, low, high, args=(grid,), xtol=1e-15, rtol=4.0 * np.finfo(float).eps,
            maxiter=200, full_output=True,
        )
        if not info.converged:
            raise NumericalError(f"root search did not converge for {qn.label}: {info.flag}")
        iterations += info.iterations
        solutions.append(root)

    coarse_eps, fine_eps = solutions[0], solutions[1]
    residual = abs(mismatch(solutions[-1], meshes[-1]))
    if residual >= tol:
        raise NumericalError(f"|F| = {residual:.3e} exceeds tolerance {tol:.1e} for {qn.label}")
    order = 2.0
    if singular:
        order = observed_order(*solutions)
        logger.debug(f"{qn.label}: observed mesh order {order:.3f} (l*={ls:.6g})")
    previous, last = solutions[-2], solutions[-1]
    epsilon = richardson(previous, last, order)
    result = OracleResult(
        epsilon=epsilon,
        residual=residual,
        mesh_error_estimate=abs(last - previous) / (2.0 ** order - 1.0),
        iterations=iterations,
        order=order,
        coarse_epsilon=coarse_eps,
        fine_epsilon=fine_eps,
    )
    logger.info(
        f"oracle {qn.label} alpha={params.alpha} a={params.a}: epsilon={epsilon:.15g} "
        f"(analytic {level.epsilon:.15g}, mesh error {result.mesh_error_estimate:.2e})"
    )
    return result


def bohr_level(e_star_sq: float, l_star: float, n_r: int) -> float:
    """Infinite-domain Kepler level -e*^4 / (2 (n_r + l* + 1)^2)."""
    return -e_star_sq ** 2 / (2.0 * (n_r + l_star + 1.0) ** 2)


def relative_deviation(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference) if reference != 0.0 else math.inf
