import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError
from tqdm import tqdm

from smooth_entropy.config import config as numerics
from smooth_entropy.config import load_config
from smooth_entropy.exceptions import ConfigError
from smooth_entropy.linalg.random import derive_seed
from smooth_entropy.verify.models import CheckSpec, SuiteReport, TrialRecord, VerificationReport
from smooth_entropy.verify.registry import CheckEntry, TrialContext, get_check, list_checks

logger = logging.getLogger(__name__)

SUITE_FIELDS = {"trials", "dims", "epsilons", "alphas", "n_values", "seed", "tolerance"}


def build_spec(check_id: str, overrides: Optional[Dict[str, Any]] = None) -> CheckSpec:
    """CheckSpec for `check_id`, registry defaults first, then `overrides`."""
    entry = get_check(check_id)
    overrides = dict(overrides or {})
    unknown = set(overrides) - SUITE_FIELDS
    if unknown:
        raise ConfigError(f"Check '{check_id}': unknown field(s) {', '.join(sorted(unknown))}")
    data = {**entry.defaults, **overrides, "check_id": check_id}
    try:
        return CheckSpec(**data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigError(f"Check '{check_id}': invalid field '{where}': {first.get('msg')}")


def trial_grid(spec: CheckSpec) -> List[Tuple[Tuple[int, ...], Optional[float], Optional[float], Optional[int]]]:
    """Parameter combinations cycled over trials, in a fixed order."""
    dims = spec.dims or [(2, 2)]
    return list(itertools.product(
        dims,
        spec.epsilons or [None],
        spec.alphas or [None],
        spec.n_values or [None],
    ))


def _run_trial(entry: CheckEntry, spec: CheckSpec, index: int, negate: bool) -> TrialRecord:
    grid = trial_grid(spec)
    dims, epsilon, alpha, n = grid[index % len(grid)]
    seed = derive_seed(spec.seed, index)
    ctx = TrialContext(index=index, seed=seed, dims=tuple(dims), epsilon=epsilon, alpha=alpha, n=n)
    m = entry.fn(ctx)

    lhs, rhs, slack = m.lhs, m.rhs, m.resolved_slack()
    if negate:
        # Logical complement of "slack >= -tolerance"
        lhs, rhs = rhs, lhs
        slack = -slack - 2.0 * spec.tolerance
    passed = slack >= -spec.tolerance

    return TrialRecord(
        check_id=spec.check_id,
        trial=index,
        seed=seed,
        dims=ctx.dims,
        epsilon=epsilon,
        alpha=alpha,
        n=n,
        input_digest=m.digest(),
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        passed=passed,
        bound_mode=m.bound_mode,
        details=m.details,
        state_json=None if passed else m.reproduction_json(),
    )


def run_check(
    spec: CheckSpec,
    negate: bool = False,
    workers: Optional[int] = None,
    progress: bool = False,
) -> VerificationReport:
    """Run every trial of `spec`. Records are ordered by trial index whatever
    the worker count, so reports are reproducible."""
    entry = get_check(spec.check_id)
    workers = numerics.workers if workers is None else workers
    logger.info(f"Running {spec.check_id}: {spec.trials} trials, tolerance {spec.tolerance:g}")
    start = time.perf_counter()

    indices = range(spec.trials)
    bar = tqdm(total=spec.trials, desc=spec.check_id, disable=not progress, leave=False)
    try:
        if workers > 1 and spec.trials > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                futures = [executor.submit(_run_trial, entry, spec, i, negate) for i in indices]
                records = []
                for f in futures:
                    records.append(f.result())
                    bar.update(1)
        else:
            records = []
            for i in indices:
                records.append(_run_trial(entry, spec, i, negate))
                bar.update(1)
    finally:
        bar.close()

    runtime = time.perf_counter() - start
    failures = sum(1 for r in records if not r.passed)
    report = VerificationReport(
        check_id=spec.check_id,
        claim=entry.claim,
        anchor=entry.anchor,
        bound_mode=any(r.bound_mode for r in records),
        negated=negate,
        records=records,
        min_slack=min((r.slack for r in records), default=None),
        failures=failures,
        runtime_s=runtime,
        spec=spec,
    )
    if failures:
        logger.warning(f"{spec.check_id}: {failures}/{spec.trials} trials violated the claim")
    else:
        logger.info(f"{spec.check_id}: all {spec.trials} trials passed ({runtime:.2f}s)")
    return report


def parse_suite(data: Any) -> List[CheckSpec]:
    if not isinstance(data, dict):
        raise ConfigError("Suite config must be a JSON object mapping check ids to settings")
    specs = []
    for check_id, overrides in data.items():
        if overrides is None:
            overrides = {}
        if not isinstance(overrides, dict):
            raise ConfigError(f"Check '{check_id}': settings must be an object")
        specs.append(build_spec(check_id, overrides))
    return specs


def run_suite(
    suite: Union[str, Path, Dict[str, Any]],
    negate: bool = False,
    workers: Optional[int] = None,
    progress: bool = False,
) -> Tuple[SuiteReport, int]:
    """Run every check named in `suite` (a config path or an already loaded mapping).

    Returns the aggregate report and the exit code: 0 when no trial failed,
    1 otherwise. Malformed configs raise ConfigError.
    """
    if isinstance(suite, (str, Path)):
        try:
            data = load_config(str(suite))
        except FileNotFoundError:
            raise ConfigError(f"Suite config not found: {suite}")
        except ValueError as e:
            raise ConfigError(f"Suite config {suite} is not valid JSON: {e}")
    else:
        data = suite

    specs = parse_suite(data)
    if not specs:
        logger.warning("Suite config lists no checks; nothing to verify")

    start = time.perf_counter()
    reports = [run_check(spec, negate=negate, workers=workers, progress=progress) for spec in specs]
    suite_report = SuiteReport(
        reports=reports,
        total_trials=sum(len(r.records) for r in reports),
        total_failures=sum(r.failures for r in reports),
        runtime_s=time.perf_counter() - start,
        config_echo={spec.check_id: spec.model_dump(mode="json", exclude={"check_id"}) for spec in specs},
    )
    return suite_report, suite_report.exit_code


def traceability_table() -> List[Dict[str, str]]:
    """One row per registered check: id, claim, anchor and whether it runs in bound mode."""
    return [
        {
            "check_id": entry.check_id,
            "claim": entry.claim,
            "anchor": entry.anchor,
            "mode": "bound-mode" if entry.bound_mode else "exact",
        }
        for entry in list_checks()
    ]


def traceability_markdown() -> str:
    lines = ["| check | claim | anchor | mode |", "|---|---|---|---|"]
    for row in traceability_table():
        lines.append(f"| `{row['check_id']}` | {row['claim']} | {row['anchor']} | {row['mode']} |")
    return "\n".join(lines) + "\n"
