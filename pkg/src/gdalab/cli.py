"""``gda simulate|certify|classify|sweep --config FILE [--jobs N] [--out DIR]``.

Exit codes: 0 success, 1 runtime failure, 2 invalid config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from pydantic import ValidationError

from . import pipelines
from .certify import certify
from .config import RunConfig, load_config
from .expr import ExpressionError

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


class ConfigError(Exception):
    """Raised for anything that is the config's fault; maps to exit code 2."""


def _run_all(fn: Callable, arglists: Sequence[tuple], jobs: int) -> list:
    """Apply ``fn`` to each argument tuple; results come back in input order."""
    if jobs <= 1 or len(arglists) <= 1:
        return [fn(*a) for a in arglists]
    with ProcessPoolExecutor(max_workers=min(jobs, len(arglists))) as pool:
        futures = [pool.submit(fn, *a) for a in arglists]
        return [f.result() for f in futures]


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _write_atomic(out_dir: Path, files: Iterable[tuple[str, str]]) -> list[Path]:
    """Write every file to a temporary name first, then rename them all into place."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files:
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)
    return [dest for _, dest in staged]


def _prepare(cfg: RunConfig, need_starts: bool):
    try:
        p = cfg.build_payoff()
        starts = cfg.starts(p)
        box = cfg.box(p)
    except (ValueError, ExpressionError) as exc:
        raise ConfigError(str(exc)) from exc
    if need_starts and not starts:
        raise ConfigError("initial: at least one start state is required")
    return p, [s.z.tolist() for s in starts], box


def cmd_simulate(cfg: RunConfig, jobs: int) -> list[tuple[str, str]]:
    p, starts, box = _prepare(cfg, True)
    cert = None
    if cfg.r_override is None:
        cert = certify(p, box, cfg.certify.samples, cfg.seed)
    r, source = pipelines.resolve_r(cfg.r_override, cert)
    icfg = cfg.integrator.build()
    spec = cfg.payoff_spec()
    results = _run_all(pipelines.simulate_job, [(spec, z0, icfg, r) for z0 in starts], jobs)
    files = []
    for i, (csv_text, audit) in enumerate(results):
        audit = {"start": starts[i], "r_source": source, **audit}
        files.append((f"trajectory_{i}.csv", csv_text))
        files.append((f"audit_{i}.json", _dump_json(audit)))
    return files


def cmd_certify(cfg: RunConfig, jobs: int) -> list[tuple[str, str]]:
    _, _, box = _prepare(cfg, False)
    out = pipelines.certify_job(cfg.payoff_spec(), box, cfg.certify.samples, cfg.seed)
    return [("certificate.json", _dump_json(out))]


def cmd_classify(cfg: RunConfig, jobs: int) -> list[tuple[str, str]]:
    _, starts, _ = _prepare(cfg, True)
    icfg, ccfg = cfg.integrator.build(), cfg.classifier.build()
    spec = cfg.payoff_spec()
    results = _run_all(pipelines.classify_job, [(spec, z0, icfg, ccfg) for z0 in starts], jobs)
    return [("classification.json", _dump_json(results))]


def cmd_sweep(cfg: RunConfig, jobs: int) -> list[tuple[str, str]]:
    if cfg.sweep is None:
        raise ConfigError("sweep: a sweep section is required for this command")
    _, starts, _ = _prepare(cfg, True)
    nstarts = cfg.sweep.starts
    if nstarts > len(starts):
        raise ConfigError(f"sweep.starts: {nstarts} requested but only {len(starts)} initial states given")
    starts = starts[:nstarts]
    try:
        cells = pipelines.sweep_cells(cfg.payoff_spec(), cfg.sweep.parameters)
        for cell in cells:
            pipelines.payoff_dims(cell)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    box = None
    if cfg.certify.box is not None:
        box = [cfg.certify.box.lower, cfg.certify.box.upper]
    icfg, ccfg = cfg.integrator.build(), cfg.classifier.build()
    args = [(cell, starts, icfg, ccfg, box, cfg.certify.samples, cfg.seed, cfg.r_override) for cell in cells]
    results = _run_all(pipelines.sweep_job, args, jobs)

    names = list(cfg.sweep.parameters)
    header = names + (["start"] if nstarts > 1 else []) + ["theorem1", "theorem2_case", "corollary1", "verdict", "r"]
    lines = [",".join(header)]
    for cell, rows in zip(cells, results):
        for k, row in enumerate(rows):
            vals = [cell[n] for n in names] + ([k] if nstarts > 1 else [])
            vals += [row["theorem1"], row["theorem2_case"], row["corollary1"], row["verdict"], row["r"]]
            lines.append(",".join(pipelines.fmt17(v) for v in vals))
    return [("sweep.csv", "\n".join(lines) + "\n")]


COMMANDS = {"simulate": cmd_simulate, "certify": cmd_certify, "classify": cmd_classify, "sweep": cmd_sweep}


def _format_validation(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"  {path}: {err['msg']}")
    return "invalid config:\n" + "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gda", description="Gradient descent-ascent dynamics toolkit.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    ap.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        cfg = load_config(args.config)
    except ValidationError as exc:
        print(_format_validation(exc), file=sys.stderr)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID

    out_dir = Path(args.out or cfg.output_dir)
    try:
        files = COMMANDS[args.command](cfg, args.jobs)
        written = _write_atomic(out_dir, files)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # runtime failure: report and exit 1, nothing partial is left behind
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
