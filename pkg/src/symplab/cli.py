"""Command-line runner: ``symplab list | run | sweep``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from . import __version__
from .checks import REGISTRY, Context, UsageError, descriptors, parse_check_id

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
STATUSES = ("pass", "fail", "error", "skipped")


@dataclass(frozen=True)
class CheckReport:
    id: str
    status: str
    metric: Optional[float]
    tolerance: float
    samples: int
    seed: int
    elapsed_ms: float
    notes: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        # JSON has no infinities; keep them as strings so the report stays parseable
        if d["metric"] is not None and not math.isfinite(d["metric"]):
            d["metric"] = "inf" if d["metric"] > 0 else "-inf"
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        d = dict(d)
        if isinstance(d.get("metric"), str):
            d["metric"] = float(d["metric"])
        return cls(**d)


def emit_json(reports: Sequence[CheckReport], run_seed: int) -> str:
    doc = {"run_seed": run_seed, "version": __version__, "checks": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True)


def parse_json(text: str) -> tuple[int, list[CheckReport]]:
    doc = json.loads(text)
    return doc["run_seed"], [CheckReport.from_dict(c) for c in doc["checks"]]


def _canonical(desc, params: dict) -> str:
    if not params:
        return desc.id
    return desc.id + "?" + "&".join(f"{k}={params[k]}" for k in sorted(params))


def resolve(ids: Sequence[str]) -> list[tuple]:
    """Validate every id before anything runs; ``all`` expands to the registry."""
    out = []
    for text in ids:
        if text == "all":
            out.extend((d, {}) for d in descriptors())
        else:
            out.append(parse_check_id(text))
    seen, uniq = set(), []
    for desc, params in out:
        key = _canonical(desc, params)
        if key not in seen:
            seen.add(key)
            uniq.append((desc, params))
    return uniq


def _execute(job: tuple) -> tuple[CheckReport, Optional[float], Optional[float]]:
    check_id, params, seed, samples, tol = job
    desc = REGISTRY[check_id]
    full = _canonical(desc, params)
    tol = desc.tol if tol is None else tol
    ctx = Context(full, seed, samples, params)
    t0 = time.perf_counter()
    try:
        out = desc.fn(ctx)
    except UsageError:
        raise
    except Exception as exc:  # reported, not raised: one broken check must not hide the others
        ms = (time.perf_counter() - t0) * 1e3
        return CheckReport(full, "error", None, tol, 0, seed, round(ms, 3), f"{type(exc).__name__}: {exc}"), None, None
    ms = (time.perf_counter() - t0) * 1e3
    metric = float(out.metric)
    ok = metric == 0 if desc.exact and tol == 0 else metric <= tol
    status = "pass" if ok else "fail"
    return (CheckReport(full, status, metric, tol, int(out.samples), seed, round(ms, 3), out.notes),
            out.value, out.expected)


def run(ids: Sequence[str], samples: int = 1000, seed: int = 7, tol: Optional[float] = None,
        parallel: bool = True) -> list[CheckReport]:
    """Run checks and return reports sorted by id."""
    jobs = [(d.id, p, seed, samples, tol) for d, p in resolve(ids)]
    workers = min(len(jobs), os.cpu_count() or 1)
    if parallel and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_execute, jobs))
    else:
        results = [_execute(j) for j in jobs]
    return sorted((r[0] for r in results), key=lambda r: r.id)


def _format(r: CheckReport) -> str:
    metric = "-" if r.metric is None else f"{r.metric:.3e}"
    line = f"{r.status.upper():5s} {r.id}  metric={metric} tol={r.tolerance:.1e} samples={r.samples} " \
           f"time={r.elapsed_ms:.0f}ms"
    return line + (f"  [{r.notes}]" if r.notes else "")


def sweep_values(spec: Optional[str], values: Optional[str]) -> list[float]:
    if values is not None:
        return [float(v) for v in values.split(",") if v.strip()]
    if spec is None:
        raise UsageError("give --range START:STOP:STEP or --values")
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad range {spec!r}") from exc
    if step <= 0:
        raise UsageError("step must be positive")
    if stop < start:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep(check_id: str, param: str, values: Sequence[float], csv_path: str, samples: int = 1000,
          seed: int = 7, tol: Optional[float] = None) -> list[dict]:
    """Evaluate a parametrized check over values and write parameter,value,expected,abs_error rows."""
    desc, fixed = parse_check_id(check_id)
    if param not in desc.params or desc.params[param].kind not in (int, float):
        raise UsageError(f"{desc.id} has no numeric parameter {param!r}")
    rows = []
    for v in values:
        params = dict(fixed)
        params[param] = desc.params[param].kind(v)
        report, value, expected = _execute((desc.id, params, seed, samples, tol))
        if report.status == "error":
            raise UsageError(f"{report.id}: {report.notes}")
        if value is None or expected is None:
            raise UsageError(f"{desc.id} does not report a value to sweep")
        rows.append({"parameter": params[param], "value": value, "expected": expected,
                     "abs_error": abs(value - expected)})
    with open(csv_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["parameter", "value", "expected", "abs_error"])
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(float(x)) for k, x in row.items()})
    return rows


def list_checks(stream=None) -> None:
    stream = stream or sys.stdout
    ds = descriptors()
    width = max(len(d.id) for d in ds)
    for d in ds:
        params = ",".join(sorted(d.params))
        suffix = f" (params: {params})" if params else ""
        print(f"{d.id:<{width}}  {d.topic:<18}  {d.summary}{suffix}", file=stream)
    print(f"{len(ds)} checks", file=stream)


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symplab", description="Deterministic numerical verification checks.")
    p.add_argument("--version", action="version", version=f"symplab {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--samples", type=int, default=1000, help="sample budget per check (default 1000)")
        sp.add_argument("--seed", type=int, default=7, help="root seed (default 7)")
        sp.add_argument("--tol", type=float, default=None, help="override every per-check tolerance")

    sub.add_parser("list", help="print the check registry")
    r = sub.add_parser("run", help="run checks by id, or 'all'")
    r.add_argument("ids", nargs="+")
    common(r)
    r.add_argument("--json", dest="json_path", default=None, help="write a JSON report here")
    r.add_argument("--parallel", type=_on_off, default=True, metavar="on|off")
    s = sub.add_parser("sweep", help="sweep one numeric check parameter into a CSV file")
    s.add_argument("id")
    s.add_argument("--param", required=True)
    s.add_argument("--range", dest="range_spec", default=None, metavar="START:STOP:STEP")
    s.add_argument("--values", default=None, help="comma-separated values instead of a range")
    s.add_argument("--csv", dest="csv_path", required=True)
    common(s)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "list":
            list_checks()
            return EXIT_OK
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        if args.cmd == "run":
            reports = run(args.ids, args.samples, args.seed, args.tol, args.parallel)
            for rep in reports:
                print(_format(rep))
            counts = {s: sum(r.status == s for r in reports) for s in STATUSES}
            print(f"{len(reports)} checks: {counts['pass']} passed, {counts['fail']} failed, "
                  f"{counts['error']} errors")
            if args.json_path:
                try:
                    with open(args.json_path, "w") as fh:
                        fh.write(emit_json(reports, args.seed) + "\n")
                except OSError as exc:
                    raise UsageError(f"cannot write {args.json_path}: {exc}") from exc
            return EXIT_OK if all(r.status == "pass" for r in reports) else EXIT_FAIL
        values = sweep_values(args.range_spec, args.values)
        try:
            rows = sweep(args.id, args.param, values, args.csv_path, args.samples, args.seed, args.tol)
        except OSError as exc:
            raise UsageError(f"cannot write {args.csv_path}: {exc}") from exc
        tol = REGISTRY[args.id.partition("?")[0]].tol if args.tol is None else args.tol
        bad = [r for r in rows if r["abs_error"] > tol]
        print(f"{len(rows)} rows written to {args.csv_path}; {len(bad)} above tolerance {tol:.1e}")
        return EXIT_OK if not bad else EXIT_FAIL
    except UsageError as exc:
        print(f"symplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
