"""Row builders and writers for the tables the command line emits.

Each builder returns a pandas DataFrame with a fixed column order; rows
follow the order of the input grid so identical invocations give
byte-identical files.
"""
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from pdmkepler.config import VERSION
from pdmkepler.errors import NoBoundStateError, NumericalError, PhysicsDomainError
from pdmkepler.expansion import residual_order_probe, residual_ratios
from pdmkepler.model import ModelParams, QuantumNumbers, binding_regime, states_up_to
from pdmkepler.oracle import relative_deviation, self_consistent_energy
from pdmkepler.ordering import (
    SYMMETRIC,
    OrderingSpec,
    ordering_levels,
    wkb_levels,
)
from pdmkepler.spectrum import NO_BOUND_STATE_MESSAGE, energy_exact
from pdmkepler.wavefunctions import node_count, normalization_check, radial_wavefunction

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
VERIFY_TOLERANCE = 1e-6
NORMALIZATION_LIMIT = 1e-8

SPECTRUM_COLUMNS = [
    "n", "n_r", "l", "j", "label", "l_star", "n_star", "e_star_sq", "epsilon", "binding_rydberg",
]
VERIFY_COLUMNS = [
    "alpha", "a", "label", "n_r", "l", "j", "analytic", "oracle", "deviation", "mesh_error",
    "norm_error", "nodes", "status", "message",
]

DEFAULT_VERIFY_ALPHAS = (0.1, 0.3, 0.6)
DEFAULT_VERIFY_RADIAL = (0, 1, 2)


def _parallel_map(func: Callable, items: Sequence, workers: int) -> List:
    """Map ``func`` over ``items`` keeping the input order."""
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def spectrum_table(params: ModelParams, n_max: int) -> pd.DataFrame:
    """Levels of every state with n <= n_max, ordered by (n, l, j)."""
    if binding_regime(params) == "unbound":
        raise NoBoundStateError(f"{NO_BOUND_STATE_MESSAGE} (alpha={params.alpha}, a={params.a})")
    rows = []
    for qn in states_up_to(n_max):
        level = energy_exact(params, qn)
        rydberg = params.alpha ** 2 / 2.0
        rows.append({
            "n": qn.principal,
            "n_r": qn.n_r,
            "l": qn.l,
            "j": qn.j,
            "label": qn.label,
            "l_star": level.l_star,
            "n_star": level.n_star,
            "e_star_sq": level.e_star_sq,
            "epsilon": level.epsilon,
            "binding_rydberg": (level.epsilon - 1.0) / rydberg if rydberg > 0.0 else None,
        })
    return pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)


def scan_grid(alpha: float, a_min: float, a_max: Optional[float], steps: int,
              extra: Iterable[float] = ()) -> List[float]:
    """Uniform a values from a_min to a_max (default alpha) plus the boundary a = alpha."""
    upper = alpha if a_max is None else a_max
    # values that round onto the boundary are replaced by it exactly
    values = {x for x in np.linspace(a_min, upper, steps).tolist() if not math.isclose(x, alpha, abs_tol=1e-12)}
    values.add(alpha)
    values.update(extra)
    return sorted(values)


def _scan_row(task) -> Dict:
    alpha, a, states = task
    params = ModelParams(alpha=alpha, a=a)
    row = {"a": a, "a_bar": params.a_bar, "regime": binding_regime(params)}
    missing = []
    for qn in states:
        column = f"epsilon_{qn.label}"
        try:
            row[column] = energy_exact(params, qn).epsilon
        except PhysicsDomainError as exc:
            row[column] = None
            missing.append(f"{qn.label}: {exc}")
    row["status"] = "ok" if not missing else "; ".join(missing)
    return row


def scan_table(alpha: float, a_values: Sequence[float], states: Sequence[QuantumNumbers],
               workers: int = 1) -> pd.DataFrame:
    """Energy of each state along a sweep of the mass parameter.

    Rows whose state does not exist keep an empty epsilon and say why in
    ``status``.
    """
    tasks = [(alpha, a, tuple(states)) for a in a_values]
    rows = _parallel_map(_scan_row, tasks, workers)
    columns = ["a", "a_bar", "regime"] + [f"epsilon_{qn.label}" for qn in states] + ["status"]
    return pd.DataFrame(rows, columns=columns)


def default_verify_grid() -> List[tuple]:
    """(alpha, a, qn) cases of the standard oracle sweep."""
    cases = []
    for alpha in DEFAULT_VERIFY_ALPHAS:
        for a in (-0.5, 0.0, 0.5 * alpha):
            for n_r in DEFAULT_VERIFY_RADIAL:
                for l, two_j in ((0, 1), (1, 3)):
                    cases.append((alpha, a, QuantumNumbers(n_r=n_r, l=l, two_j=two_j)))
    return cases


def verify_case(case) -> Dict:
    """Compare the closed form with the oracle and check the radial function."""
    alpha, a, qn = case
    row = {
        "alpha": alpha, "a": a, "label": qn.label, "n_r": qn.n_r, "l": qn.l, "j": qn.j,
        "analytic": None, "oracle": None, "deviation": None, "mesh_error": None,
        "norm_error": None, "nodes": None, "status": "pass", "message": "",
    }
    params = ModelParams(alpha=alpha, a=a)
    try:
        level = energy_exact(params, qn)
        row["analytic"] = level.epsilon
        result = self_consistent_energy(params, qn)
        row["oracle"] = result.epsilon
        row["mesh_error"] = result.mesh_error_estimate
        row["deviation"] = relative_deviation(result.epsilon, level.epsilon)
        wf = radial_wavefunction(level, qn)
        row["norm_error"] = normalization_check(wf)
        row["nodes"] = node_count(wf)
    except PhysicsDomainError as exc:
        row.update(status="domain-error", message=str(exc))
        return row
    except NumericalError as exc:
        row.update(status="numerical-error", message=str(exc))
        return row

    problems = []
    if row["deviation"] > VERIFY_TOLERANCE:
        problems.append(f"oracle deviation {row['deviation']:.2e}")
    if row["norm_error"] > NORMALIZATION_LIMIT:
        problems.append(f"normalization error {row['norm_error']:.2e}")
    if row["nodes"] != qn.n_r:
        problems.append(f"{row['nodes']} nodes instead of {qn.n_r}")
    if problems:
        row.update(status="fail", message="; ".join(problems))
    return row


def verify_table(cases: Sequence[tuple], workers: int = 1) -> pd.DataFrame:
    rows = _parallel_map(verify_case, list(cases), workers)
    for row in rows:
        if row["status"] != "pass":
            logger.warning(f"verify {row['label']} alpha={row['alpha']} a={row['a']}: "
                           f"{row['status']} {row['message']}")
    return pd.DataFrame(rows, columns=VERIFY_COLUMNS)


def expansion_table(a_bars: Sequence[float], states: Sequence[QuantumNumbers],
                    alphas: Sequence[float]) -> pd.DataFrame:
    """Residual of the two-term expansion and its ratio between successive alphas."""
    rows = []
    for a_bar in a_bars:
        for qn in states:
            residuals = residual_order_probe(a_bar, qn, alphas)
            ratios = [None] + residual_ratios(residuals)
            for (alpha, residual), ratio in zip(residuals, ratios):
                rows.append({
                    "a_bar": a_bar, "label": qn.label, "alpha": alpha,
                    "residual": residual, "ratio": ratio,
                })
    return pd.DataFrame(rows, columns=["a_bar", "label", "alpha", "residual", "ratio"])


def ordering_table(a: float, alpha: float, l: int, orderings: Sequence[OrderingSpec],
                   n_r_values: Sequence[int]) -> pd.DataFrame:
    """Level n_r of each ordering, the spread in level spacings and the WKB level."""
    top = max(n_r_values)
    count = top + 2
    # rejects a classically falling well before any eigensolve
    semiclassical = wkb_levels(a, alpha, l, top)
    reference = ordering_levels(a, alpha, l, SYMMETRIC, count)
    spectra = {spec: ordering_levels(a, alpha, l, spec, count) for spec in orderings}
    rows = []
    for n_r in n_r_values:
        spacing = abs(reference[n_r + 1] - reference[n_r])
        spread = max(abs(spectra[spec][n_r] - reference[n_r]) for spec in orderings) / spacing
        for spec in orderings:
            rows.append({
                "n_r": n_r,
                "ordering": spec.label,
                "E": spectra[spec][n_r],
                "spread": spread,
                "E_wkb": semiclassical[n_r],
            })
    return pd.DataFrame(rows, columns=["n_r", "ordering", "E", "spread", "E_wkb"])


def json_rows(frame: pd.DataFrame) -> List[Dict]:
    rows = []
    for record in frame.to_dict(orient="records"):
        clean = {}
        for key, value in record.items():
            if isinstance(value, (np.integer,)):
                value = int(value)
            elif isinstance(value, (np.floating,)):
                value = float(value)
            if isinstance(value, float) and math.isnan(value):
                value = None
            clean[key] = value
        rows.append(clean)
    return rows


def render(frame: pd.DataFrame, fmt: str, metadata: Dict) -> str:
    """Serialize a table as CSV with ``#`` metadata lines, or as JSON."""
    header = {"version": VERSION, **metadata}
    if fmt == "json":
        return json.dumps({"metadata": header, "rows": json_rows(frame)}, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown output format {fmt!r}")
    lines = [f"# {key}={value}" for key, value in header.items()]
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return "\n".join(lines) + "\n" + body


def write_output(text: str, destination: Optional[Path]) -> None:
    if destination is None:
        print(text, end="")
        return
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(text)
    logger.info(f"wrote {destination}")
