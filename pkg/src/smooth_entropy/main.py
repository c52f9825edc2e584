import functools
import json
import logging
import string
from enum import Enum
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from smooth_entropy.config import config as numerics
from smooth_entropy.config import load_config
from smooth_entropy.entropies import (
    conditional_vn,
    h0,
    hmin,
    relative_entropy,
    renyi_alpha,
    vn_of_spectrum,
    von_neumann,
)
from smooth_entropy.exceptions import ConfigError, DimensionError, ParameterRangeError, SmoothEntropyException
from smooth_entropy.linalg import (
    MultipartiteState,
    group_subsystems,
    random_density,
    read_state,
    state_to_json,
)
from smooth_entropy.logging_config import setup_logging
from smooth_entropy.metrics import fidelity, generalized_fidelity, purified_distance, trace_distance
from smooth_entropy.minentropy import hmin_conditional
from smooth_entropy.smoothing import (
    Spectrum,
    brute_force_smooth,
    smooth_entropy_iid,
    smooth_h0,
    smooth_hmin_conditional_bounds,
    smooth_hmin_unconditional,
)
from smooth_entropy.types import SmoothMeasure
from smooth_entropy.verify import ReportStorageConfig, ReportStorageService, run_suite, traceability_table
from smooth_entropy.verify.storage import format_number

app = typer.Typer(help="Smooth entropies, the conditional min-entropy SDP and numerical verification suites.")
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

QAEP_COLUMNS = ["n", "epsilon", "hmin_rate", "h0_rate", "vn_target", "gap"]


class Measure(str, Enum):
    vn = "vn"
    renyi_alpha = "renyi_alpha"
    h0 = "h0"
    hmin = "hmin"
    relative = "relative"


class Kind(str, Enum):
    fidelity = "fidelity"
    generalized_fidelity = "generalized_fidelity"
    purified_distance = "purified_distance"
    trace_distance = "trace_distance"


class OutputFormat(str, Enum):
    csv = "csv"
    json = "json"


# --- helpers ---

def handle_errors(fn: Callable) -> Callable:
    """Library errors become exit code 2 with the message on stderr."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SmoothEntropyException as e:
            err_console.print(f"error: {e.message}")
            raise typer.Exit(code=2)
    return wrapper


def emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info(f"Wrote {out}")


def apply_split(rho: MultipartiteState, split: Optional[str]) -> MultipartiteState:
    """Regroup `rho` by a split spec.

    "2x2x2" reinterprets the subsystem dimensions; "A:BC" groups subsystems by
    letter (A is subsystem 0) into parties separated by colons.
    """
    if not split:
        return rho
    if all(part.isdigit() for part in split.split("x")):
        dims = tuple(int(part) for part in split.split("x"))
        return MultipartiteState(state=rho.state, dims=dims)

    groups = []
    for part in split.split(":"):
        if not part or any(c not in string.ascii_uppercase for c in part):
            raise DimensionError(f"Malformed split spec '{split}'")
        groups.append([ord(c) - ord("A") for c in part])
    letters = sorted(i for g in groups for i in g)
    if letters != list(range(rho.n_subsystems)):
        raise DimensionError(f"Split '{split}' does not name each of the {rho.n_subsystems} subsystems exactly once")
    return group_subsystems(rho, groups)


def parse_spectrum(text: str) -> Spectrum:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterRangeError(f"Spectrum must be comma-separated numbers, got '{text}'")
    if not values:
        raise ParameterRangeError("Spectrum is empty")
    return Spectrum.from_values(values)


def parse_dims(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split("x"))
    except ValueError:
        raise DimensionError(f"Dimensions must look like 2x2x2, got '{text}'")


def _matrix_json(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


@app.callback()
def main(
    log_level: str = typer.Option(numerics.log_level, "--log-level", help="Log level for stderr output."),
    plain_logs: bool = typer.Option(False, "--plain-logs", help="Plain log lines instead of Rich formatting."),
):
    setup_logging(level=log_level, use_rich=not plain_logs)


# --- subcommands ---

@app.command()
@handle_errors
def compute(
    state: Path = typer.Option(..., "--state", help="State JSON file."),
    measure: Measure = typer.Option(Measure.vn, "--measure"),
    split: Optional[str] = typer.Option(None, "--split", help='Subsystem grouping, e.g. "A:B", "A:BC" or "2x2".'),
    conditional: bool = typer.Option(False, "--conditional", help="Condition on every party but the first."),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Renyi order for renyi_alpha."),
    sigma: Optional[Path] = typer.Option(None, "--sigma", help="Second state for the relative entropy."),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Evaluate an entropy of a state file, in bits."""
    rho = apply_split(read_state(state), split)
    if conditional:
        if rho.n_subsystems < 2:
            raise DimensionError("--conditional needs at least two parties; use --split")
        if measure == Measure.vn:
            value = conditional_vn(rho, cond_on=range(1, rho.n_subsystems)).value
        elif measure == Measure.hmin:
            if rho.n_subsystems != 2:
                rho = group_subsystems(rho, [[0], list(range(1, rho.n_subsystems))])
            value, _ = hmin_conditional(rho)
        else:
            raise ParameterRangeError(f"--conditional is available for vn and hmin, not {measure.value}")
    elif measure == Measure.vn:
        value = von_neumann(rho).value
    elif measure == Measure.renyi_alpha:
        if alpha is None:
            raise ParameterRangeError("--alpha is required for renyi_alpha")
        value = renyi_alpha(rho, alpha).value
    elif measure == Measure.h0:
        value = h0(rho).value
    elif measure == Measure.hmin:
        value = hmin(rho).value
    else:
        if sigma is None:
            raise ParameterRangeError("--sigma is required for the relative entropy")
        value = relative_entropy(rho, read_state(sigma))
    emit(format_number(value), out)


@app.command()
@handle_errors
def distance(
    state: Path = typer.Option(..., "--state"),
    sigma: Path = typer.Option(..., "--sigma"),
    kind: Kind = typer.Option(Kind.purified_distance, "--kind"),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Fidelity-type closeness between two state files."""
    fn = {
        Kind.fidelity: fidelity,
        Kind.generalized_fidelity: generalized_fidelity,
        Kind.purified_distance: purified_distance,
        Kind.trace_distance: trace_distance,
    }[kind]
    emit(format_number(fn(read_state(state), read_state(sigma)).value), out)


@app.command("hmin")
@handle_errors
def hmin_command(
    state: Path = typer.Option(..., "--state"),
    split: Optional[str] = typer.Option(None, "--split"),
    witness: Optional[Path] = typer.Option(None, "--witness", help="Write sigma_B and the dual certificate here."),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Conditional min-entropy H_min(A|B) by semidefinite programming."""
    rho = apply_split(read_state(state), split)
    value, solution = hmin_conditional(rho)
    if witness is not None:
        witness.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "lambda": value,
            "status": solution.status.value,
            "gap": solution.gap,
            "iterations": solution.iterations,
            "sigma_b": _matrix_json(solution.sigma_b),
            "dual_certificate": _matrix_json(solution.dual_certificate),
        }
        witness.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote SDP witness to {witness}")
    emit(format_number(value), out)


@app.command()
@handle_errors
def smooth(
    epsilon: float = typer.Option(..., "--epsilon"),
    state: Optional[Path] = typer.Option(None, "--state"),
    spectrum: Optional[str] = typer.Option(None, "--spectrum", help='Eigenvalues, e.g. "0.75,0.25".'),
    measure: SmoothMeasure = typer.Option(SmoothMeasure.HMIN, "--measure"),
    ball_certified: bool = typer.Option(False, "--ball-certified", help="h0 truncation inside the epsilon-ball."),
    brute_force: bool = typer.Option(False, "--brute-force", help="Grid oracle instead of the construction."),
    grid: int = typer.Option(1000, "--grid"),
    conditional: bool = typer.Option(False, "--conditional", help="Bounds on H_min^eps(A|B) of a bipartite state."),
    split: Optional[str] = typer.Option(None, "--split"),
    fmt: OutputFormat = typer.Option(OutputFormat.csv, "--format"),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Smooth min- or 0th-order entropy of a state or a spectrum."""
    if (state is None) == (spectrum is None):
        raise ParameterRangeError("Give exactly one of --state and --spectrum")

    if conditional:
        if state is None:
            raise ParameterRangeError("--conditional needs --state")
        bounds = smooth_hmin_conditional_bounds(apply_split(read_state(state), split), epsilon)
        if fmt == OutputFormat.json:
            emit(bounds.model_dump_json(indent=2), out)
        else:
            emit(
                "lower,lower_epsilon,upper,hmin_exact\n"
                + ",".join(format_number(v) for v in (bounds.lower, bounds.lower_epsilon, bounds.upper, bounds.hmin_exact)),
                out,
            )
        return

    source = parse_spectrum(spectrum) if spectrum is not None else Spectrum.from_state(read_state(state))
    if brute_force:
        value = brute_force_smooth(source, epsilon, measure, grid=grid)
    elif measure == SmoothMeasure.HMIN:
        value = smooth_hmin_unconditional(source, epsilon)
    else:
        value = smooth_h0(source, epsilon, ball_certified=ball_certified)
    if fmt == OutputFormat.json:
        emit(json.dumps({"measure": measure.value, "epsilon": epsilon, "value": value}), out)
    else:
        emit(format_number(value), out)


@app.command()
@handle_errors
def qaep(
    spectrum: str = typer.Option(..., "--spectrum", help='Single-copy eigenvalues, e.g. "0.75,0.25".'),
    epsilon: float = typer.Option(..., "--epsilon"),
    n_max: int = typer.Option(..., "--n-max"),
    step: int = typer.Option(50, "--step"),
    n_min: Optional[int] = typer.Option(None, "--n-min", help="First copy count (default: --step)."),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Rates (1/n) H_min^eps and (1/n) H_0^eps of i.i.d. copies against the von Neumann limit, as CSV."""
    base = parse_spectrum(spectrum)
    if step < 1 or n_max < 1:
        raise ParameterRangeError("--step and --n-max must be positive")
    start = step if n_min is None else n_min
    target = vn_of_spectrum(base.values())

    lines = [",".join(QAEP_COLUMNS)]
    for n in range(start, n_max + 1, step):
        hmin_rate = smooth_entropy_iid(base, n, epsilon, SmoothMeasure.HMIN) / n
        h0_rate = smooth_entropy_iid(base, n, epsilon, SmoothMeasure.H0) / n
        row = [str(n), format_number(epsilon), format_number(hmin_rate), format_number(h0_rate),
               format_number(target), format_number(target - hmin_rate)]
        lines.append(",".join(row))
        logger.debug(f"qaep n={n}: hmin_rate={hmin_rate:.6f} h0_rate={h0_rate:.6f}")
    emit("\n".join(lines) + "\n", out)


@app.command()
@handle_errors
def verify(
    config_path: str = typer.Option("config.json", "--config", help="Suite config JSON."),
    checks: Optional[List[str]] = typer.Option(None, "--check", help="Run only these checks (registry defaults)."),
    trials: Optional[int] = typer.Option(None, "--trials", help="Override the trial count of every check."),
    negate: bool = typer.Option(False, "--negate", help="Self-test: report the complement of every claim."),
    workers: Optional[int] = typer.Option(None, "--workers", help="Threads for independent trials."),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory (report.csv, summary.json)."),
    fmt: OutputFormat = typer.Option(OutputFormat.csv, "--format", help="Summary printed to stdout."),
    list_only: bool = typer.Option(False, "--list", help="Print the traceability table and exit."),
    progress: bool = typer.Option(False, "--progress", help="Show per-check progress bars."),
):
    """Run the verification suite. Exit 0 when every trial passes, 1 on violations, 2 on usage errors."""
    if list_only:
        table = Table(title="Registered checks")
        table.add_column("check_id", no_wrap=True)
        table.add_column("claim")
        table.add_column("anchor")
        table.add_column("mode", no_wrap=True)
        for row in traceability_table():
            table.add_row(row["check_id"], row["claim"], row["anchor"], row["mode"])
        Console().print(table)
        return

    if checks:
        suite = {check_id: {} for check_id in checks}
    else:
        try:
            suite = load_config(config_path)
        except FileNotFoundError:
            raise ConfigError(f"Suite config not found: {config_path}")
        except ValueError as e:
            raise ConfigError(f"Suite config {config_path} is not valid JSON: {e}")
    if trials is not None and isinstance(suite, dict):
        suite = {k: {**(v or {}), "trials": trials} for k, v in suite.items()}

    report, exit_code = run_suite(suite, negate=negate, workers=workers, progress=progress)

    storage_config = ReportStorageConfig() if out is None else ReportStorageConfig(report_dir=str(out))
    storage = ReportStorageService(storage_config)
    storage.store_suite(report)

    summary = storage.summary(report)
    if fmt == OutputFormat.json:
        typer.echo(json.dumps(summary, indent=2, sort_keys=True))
    else:
        typer.echo("check_id,mode,trials,failures,min_slack")
        for check in summary["checks"]:
            typer.echo(
                f"{check['check_id']},{check['mode']},{check['trials']},{check['failures']},"
                f"{format_number(check['min_slack'])}"
            )
    raise typer.Exit(code=exit_code)


@app.command("random")
@handle_errors
def random_command(
    dims: str = typer.Option("2x2", "--dims", help='Subsystem dimensions, e.g. "2x2x2".'),
    rank: Optional[int] = typer.Option(None, "--rank"),
    seed: int = typer.Option(0, "--seed"),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Ginibre-induced random state, written as state JSON."""
    rho = random_density(parse_dims(dims), rank=rank, seed=seed)
    emit(state_to_json(rho), out)


if __name__ == "__main__":
    app()
