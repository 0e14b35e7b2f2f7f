"""Command-line interface for counting runs, model diagnostics, bound checks,
and band-checked parameter sweeps.

Examples::

    primepoisson thm1 --x 1e6 --y 31 --set interval:2..31:distinct
    primepoisson harmonic --set list:2,3,5
    primepoisson counts --x 100 --set list:2,3:distinct

Set arguments use a mini-language: ``interval:a..b[:mode]`` (primes in
[a, b]), ``list:p1,p2,...[:mode]``, or ``expexp:k[:mode]`` (primes in the
doubly exponential block (t_k, t_{k+1}]).  The mode is ``distinct`` (default)
or ``multiplicity``.  Integer arguments accept scientific notation when it is
exact (``1e6`` works, ``1.23e1`` does not).

Reports are JSON with sorted keys and repr-precision floats, so a fixed
config and seed reproduce byte-identical files; timestamps and wall-clock
times live only in the run manifest.  Exit codes: 0 success/recorded,
1 regression-band failure, 2 usage or domain error, 3 cap refusal.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import __version__
from .dist import poisson_pmf, tv_distance
from .errors import CapError, DomainError
from .factorstats import (
    CountMode,
    SetSpec,
    joint_factor_counts,
    oracle_factor_counts,
)
from .kubilius import model_exact_pmf, model_tv_exact, sample_exponent_matrix
from .primesets import (
    PrimeSet,
    expexp_block,
    harmonic_sums,
    primes_in_interval,
    save_prime_set,
    sieve_primes,
)
from .theorems import (
    Thm1Config,
    Thm2Config,
    Thm3Config,
    check_cor32,
    check_corollary1,
    check_halasz,
    check_thm1,
    check_thm2,
    check_thm3,
    check_thm4_local,
)

EXIT_OK = 0
EXIT_BAND_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def parse_count(text: str) -> int:
    """Parse an integer, allowing scientific notation only when exact."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise DomainError(f"not a number: {text!r}") from None
    if d != d.to_integral_value():
        raise DomainError(f"not an exact integer: {text!r}")
    return int(d)


def _parse_mode(token: str) -> CountMode:
    t = token.strip().lower()
    if t == "distinct":
        return CountMode.DISTINCT
    if t in ("multiplicity", "with-multiplicity", "with_multiplicity"):
        return CountMode.WITH_MULTIPLICITY
    raise DomainError(f"unknown count mode {token!r} (want distinct or multiplicity)")


def parse_set_spec(text: str) -> SetSpec:
    """Parse the set mini-language into a SetSpec."""
    parts = text.split(":")
    kind = parts[0].strip().lower()
    if kind == "interval":
        if len(parts) not in (2, 3):
            raise DomainError(f"bad interval spec {text!r}")
        bounds = parts[1].split("..")
        if len(bounds) != 2:
            raise DomainError(f"bad interval bounds in {text!r} (want a..b)")
        a, b = parse_count(bounds[0]), parse_count(bounds[1])
        if b < a:
            raise DomainError(f"empty interval in {text!r}")
        if b < 2:
            raise DomainError(f"interval in {text!r} contains no primes")
        ps = sieve_primes(b, label=text) if a <= 2 else primes_in_interval(a - 1, b, label=text)
        mode = _parse_mode(parts[2]) if len(parts) == 3 else CountMode.DISTINCT
    elif kind == "list":
        if len(parts) not in (2, 3):
            raise DomainError(f"bad list spec {text!r}")
        values = sorted(parse_count(tok) for tok in parts[1].split(",") if tok.strip())
        if not values:
            raise DomainError(f"empty prime list in {text!r}")
        ps = PrimeSet(tuple(values), label=text)
        mode = _parse_mode(parts[2]) if len(parts) == 3 else CountMode.DISTINCT
    elif kind == "expexp":
        if len(parts) not in (2, 3):
            raise DomainError(f"bad expexp spec {text!r}")
        ps = expexp_block(parse_count(parts[1]), label=text)
        mode = _parse_mode(parts[2]) if len(parts) == 3 else CountMode.DISTINCT
    else:
        raise DomainError(f"unknown set kind {parts[0]!r} (want interval, list, or expexp)")
    return SetSpec(ps, mode)


def load_bands(path: str | Path) -> dict[str, tuple[float, float]]:
    """Load a regression-band file: JSON object name -> [lo, hi]."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read band file {path}: {e}") from None
    bands: dict[str, tuple[float, float]] = {}
    for name, pair in raw.items():
        if not (isinstance(pair, list) and len(pair) == 2 and pair[0] <= pair[1]):
            raise DomainError(f"band {name!r} must be [lo, hi] with lo <= hi")
        bands[name] = (float(pair[0]), float(pair[1]))
    return bands


def band_verdict(
    bands: dict[str, tuple[float, float]] | None, name: str, value: float
) -> str:
    if bands is None or name not in bands:
        return "recorded"
    lo, hi = bands[name]
    return "pass" if lo <= value <= hi else "fail"


class RunWriter:
    """Writes a command's artifacts under one output directory."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def json(self, filename: str, obj) -> None:
        path = self.out_dir / filename
        path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
        self.files.append(filename)

    def csv(self, filename: str, headers: list[str], rows: list[list]) -> None:
        path = self.out_dir / filename
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(headers)
            for row in rows:
                w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        self.files.append(filename)

    def text(self, filename: str, content: str) -> None:
        (self.out_dir / filename).write_text(content)
        self.files.append(filename)


@dataclass
class CommandResult:
    """What a handler computed: a report payload, an optional band value, and
    stdout lines.  File writing happens only when a RunWriter is attached."""

    name: str
    payload: dict
    band_value: float | None = None
    lines: list[str] = field(default_factory=list)


def _report_rows(reports: list) -> list[list]:
    rows = []
    for r in reports:
        rows.append([r.name, r.lhs, r.rhs, "" if r.ratio is None else r.ratio, r.uncertainty])
    return rows


# ---------------------------------------------------------------- handlers


def _cmd_sieve(ns, out: RunWriter | None) -> CommandResult:
    if (ns.lo is None) != (ns.hi is None):
        raise DomainError("--lo and --hi must be given together")
    if ns.lo is not None:
        lo, hi = parse_count(ns.lo), parse_count(ns.hi)
        ps = primes_in_interval(lo, hi)
        payload = {"lo": lo, "hi": hi, "count": len(ps)}
        name = f"sieve[{lo}..{hi}]"
    else:
        if ns.limit is None:
            raise DomainError("either --limit or --lo/--hi is required")
        limit = parse_count(ns.limit)
        ps = sieve_primes(limit)
        payload = {"limit": limit, "count": len(ps)}
        name = f"sieve[{limit}]"
    payload["first"] = ps.primes[0] if ps.primes else None
    payload["last"] = ps.primes[-1] if ps.primes else None
    if out:
        save_prime_set(ps, out.out_dir / "primes.txt")
        out.files.append("primes.txt")
        out.json("sieve_report.json", payload)
    return CommandResult(name, payload, lines=[f"count={len(ps)}"])


def _cmd_harmonic(ns, out: RunWriter | None) -> CommandResult:
    spec = parse_set_spec(ns.set)
    hs = harmonic_sums(spec.primes)
    payload = {
        "set": ns.set,
        "size": len(spec.primes),
        "h": hs.h,
        "h1": hs.h1,
        "h2": hs.h2,
    }
    if out:
        out.json("harmonic_report.json", payload)
    line = f"h={hs.h!r} h1={hs.h1!r} h2={hs.h2!r}"
    return CommandResult(f"harmonic[{ns.set}]", payload, lines=[line])


def _cmd_counts(ns, out: RunWriter | None) -> CommandResult:
    x = parse_count(ns.x)
    specs = tuple(parse_set_spec(s) for s in ns.set)
    if ns.oracle:
        counts = oracle_factor_counts(x, specs)
    else:
        counts = joint_factor_counts(x, specs, segment_size=parse_count(ns.segment_size))
    payload = counts.as_json()
    payload["route"] = "oracle" if ns.oracle else "sieve"
    payload["specs"] = list(ns.set)
    if out:
        m = len(specs)
        headers = [f"k_{i+1}" for i in range(m)] + ["count"]
        rows = [list(k) + [c] for k, c in sorted(counts.counts.items())]
        out.csv("counts_table.csv", headers, rows)
        out.json("counts_report.json", payload)
    return CommandResult(
        f"counts[x={x},m={len(specs)}]",
        payload,
        lines=[f"vectors={len(counts.counts)} total={counts.total()}"],
    )


def _cmd_model(ns, out: RunWriter | None) -> CommandResult:
    tail_eps = float(ns.tail_eps)
    payload: dict = {}
    lines: list[str] = []
    name = "model"
    if ns.set:
        spec = parse_set_spec(ns.set)
        pmf = model_exact_pmf(spec.primes, spec.mode, tail_eps)
        payload["set"] = ns.set
        payload["mode"] = spec.mode.value
        payload["pmf"] = pmf.as_json()
        payload["mean"] = pmf.mean()
        name = f"model[{ns.set}]"
        lines.append(f"support={len(pmf)} mean={pmf.mean()!r} tail_bound={pmf.tail_bound!r}")
        if out:
            pmf.write_csv(out.out_dir / "model_pmf.csv")
            out.files.append("model_pmf.csv")
    if ns.samples is not None:
        if ns.sample_y is None:
            raise DomainError("--sample-y is required with --samples")
        y = parse_count(ns.sample_y)
        n_samples = parse_count(ns.samples)
        seed = parse_count(ns.seed)
        primes, matrix = sample_exponent_matrix(y, seed, n_samples)
        payload["samples"] = {"y": y, "seed": seed, "n": n_samples}
        name = f"model-samples[y={y},n={n_samples}]" if not ns.set else name
        lines.append(f"samples={n_samples} primes={len(primes)}")
        if out:
            if ns.emit_samples:
                rows = [
                    [i, p, int(matrix[i, j])]
                    for i in range(n_samples)
                    for j, p in enumerate(primes)
                ]
                out.csv("model_samples.csv", ["sample", "p", "exponent"], rows)
            else:
                rows = []
                for j, p in enumerate(primes):
                    values, tallies = np.unique(matrix[:, j], return_counts=True)
                    rows.extend([p, int(v), int(c)] for v, c in zip(values, tallies))
                out.csv("model_samples.csv", ["p", "exponent", "count"], rows)
    if not ns.set and ns.samples is None:
        raise DomainError("model needs --set and/or --samples")
    if out:
        out.json("model_report.json", payload)
    return CommandResult(name, payload, lines=lines)


def _cmd_model_tv(ns, out: RunWriter | None) -> CommandResult:
    x, y = parse_count(ns.x), parse_count(ns.y)
    tv = model_tv_exact(x, y)
    u = math.log(x) / math.log(y)
    u_term = u ** (-u)
    payload = {
        "x": x,
        "y": y,
        "value": tv.value,
        "uncertainty": tv.uncertainty,
        "u": u,
        "u_term": u_term,
        "ratio_to_u_term": tv.value / u_term,
    }
    if out:
        out.json("model_tv_report.json", payload)
    return CommandResult(
        f"model_tv[x={x},y={y}]",
        payload,
        band_value=tv.value,
        lines=[f"tv={tv.value!r} u={u!r}"],
    )


def _theorem_result(prefix: str, report, extra_lines: list[str] | None = None) -> CommandResult:
    payload = report.as_json()
    lines = [
        f"lhs={report.lhs!r} rhs={report.rhs!r} ratio="
        + ("undefined" if report.ratio is None else repr(report.ratio))
    ]
    if extra_lines:
        lines.extend(extra_lines)
    return CommandResult(report.name, payload, band_value=report.ratio, lines=lines)


def _cmd_thm1(ns, out: RunWriter | None) -> CommandResult:
    cfg = Thm1Config(
        x=parse_count(ns.x),
        y=parse_count(ns.y),
        specs=tuple(parse_set_spec(s) for s in ns.set),
        tail_eps=float(ns.tail_eps),
        include_decomposition=not ns.no_decomposition,
    )
    report = check_thm1(cfg)
    result = _theorem_result("thm1", report)
    if out:
        out.json("thm1_report.json", result.payload)
    return result


def _cmd_thm2(ns, out: RunWriter | None) -> CommandResult:
    x = parse_count(ns.x)
    sets = tuple(parse_set_spec(s).primes for s in ns.set)
    ks = tuple(parse_count(tok) for tok in ns.k.split(","))
    if ns.eta is None:
        cfg = Thm2Config.infer(x, sets, ks)
    else:
        xi = parse_count(ns.xi) if ns.xi is not None else (
            1 if parse_count(ns.eta) == 0 and all(k == 0 for k in ks) else 0
        )
        cfg = Thm2Config(x=x, sets=sets, ks=ks, eta=parse_count(ns.eta), xi=xi)
    report = check_thm2(cfg)
    result = _theorem_result("thm2", report)
    if out:
        out.json("thm2_report.json", result.payload)
    return result


def _cmd_thm3(ns, out: RunWriter | None) -> CommandResult:
    spec = parse_set_spec(ns.set)
    cfg = Thm3Config(
        x=parse_count(ns.x),
        tset=spec.primes,
        k=parse_count(ns.k),
        a_param=float(ns.a_param),
        psi=float(ns.psi),
    )
    report = check_thm3(cfg)
    result = _theorem_result("thm3", report)
    if out:
        out.json("thm3_report.json", result.payload)
    return result


def _cmd_halasz(ns, out: RunWriter | None) -> CommandResult:
    spec = parse_set_spec(ns.set)
    k_lo, k_hi = parse_count(ns.k_lo), parse_count(ns.k_hi)
    if k_hi < k_lo:
        raise DomainError(f"empty k range [{k_lo}, {k_hi}]")
    reports = check_halasz(parse_count(ns.x), spec.primes, range(k_lo, k_hi + 1))
    deviations = [abs(r.ratio - 1.0) for r in reports if r.ratio is not None]
    band_value = max(deviations) if deviations else None
    payload = {
        "reports": [r.as_json() for r in reports],
        "max_abs_ratio_minus_1": band_value,
    }
    if out:
        out.json("halasz_report.json", payload)
        out.csv(
            "halasz_table.csv",
            ["name", "lhs", "rhs", "ratio", "uncertainty"],
            _report_rows(reports),
        )
    name = f"halasz[x={parse_count(ns.x)},k={k_lo}..{k_hi}]"
    lines = [f"reports={len(reports)} max_abs_ratio_minus_1={band_value!r}"]
    return CommandResult(name, payload, band_value=band_value, lines=lines)


def _cmd_thm4(ns, out: RunWriter | None) -> CommandResult:
    spec = parse_set_spec(ns.set)
    k_max = parse_count(ns.k_max) if ns.k_max is not None else None
    reports = check_thm4_local(spec.primes, spec.mode, float(ns.tail_eps), k_max)
    ratios = [r.ratio for r in reports if r.ratio is not None]
    band_value = max(ratios) if ratios else None
    payload = {
        "reports": [r.as_json() for r in reports],
        "max_ratio": band_value,
    }
    if out:
        out.json("thm4_report.json", payload)
        out.csv(
            "thm4_table.csv",
            ["name", "lhs", "rhs", "ratio", "uncertainty"],
            _report_rows(reports),
        )
    name = f"thm4[{ns.set}]"
    return CommandResult(
        name, payload, band_value=band_value, lines=[f"reports={len(reports)} max_ratio={band_value!r}"]
    )


def _cmd_cor1(ns, out: RunWriter | None) -> CommandResult:
    report = check_corollary1(
        parse_count(ns.x), parse_count(ns.lo), parse_count(ns.hi), float(ns.tail_eps)
    )
    result = _theorem_result("cor1", report)
    if out:
        out.json("cor1_report.json", result.payload)
    return result


def _cmd_cor32(ns, out: RunWriter | None) -> CommandResult:
    spec = parse_set_spec(ns.set)
    report = check_cor32(spec.primes, spec.mode, float(ns.tail_eps))
    result = _theorem_result("cor32", report)
    if out:
        out.json("cor32_report.json", result.payload)
    return result


def _row_to_argv(row: dict) -> list[str]:
    row = dict(row)
    try:
        command = str(row.pop("command"))
    except KeyError:
        raise DomainError("sweep row is missing the 'command' key") from None
    argv = [command]
    for key in sorted(row):
        flag = "--" + key.replace("_", "-")
        value = row[key]
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, list):
            for item in value:
                argv.extend([flag, str(item)])
        else:
            argv.extend([flag, str(value)])
    return argv


def _run_sweep_row(indexed_row: tuple[int, dict]) -> dict:
    """Execute one sweep row in compute-only mode; never raises."""
    index, row = indexed_row
    record: dict = {"row": index, "command": row.get("command", ""), "config": row}
    try:
        argv = _row_to_argv(row)
        parser = build_parser()
        with contextlib.redirect_stderr(io.StringIO()) as captured:
            try:
                ns = parser.parse_args(argv)
            except SystemExit:
                raise DomainError(
                    "invalid row config: " + " ".join(captured.getvalue().split())
                ) from None
        if ns.command == "sweep":
            raise DomainError("sweep rows cannot nest another sweep")
        result = _HANDLERS[ns.command](ns, None)
        record.update(
            {
                "status": "ok",
                "name": result.name,
                "band_value": result.band_value,
                "lhs": result.payload.get("lhs"),
                "rhs": result.payload.get("rhs"),
                "ratio": result.payload.get("ratio"),
                "value": result.payload.get("value"),
                "uncertainty": result.payload.get("uncertainty"),
                "error": None,
            }
        )
    except CapError as e:
        record.update({"status": "refused", "error": str(e)})
    except DomainError as e:
        record.update({"status": "error", "error": str(e)})
    return record


def _cmd_sweep(ns, out: RunWriter | None) -> CommandResult:
    grid_path = Path(ns.grid)
    try:
        grid = json.loads(grid_path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read grid file {grid_path}: {e}") from None
    if not isinstance(grid, dict) or not isinstance(grid.get("rows", []), list):
        raise DomainError("grid file must be an object with a 'rows' list")
    name = str(grid.get("name") or grid_path.stem)
    rows = grid.get("rows", [])
    workers = parse_count(ns.workers) if ns.workers is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    indexed = list(enumerate(rows))
    if not indexed:
        records: list[dict] = []
    elif workers == 1:
        records = [_run_sweep_row(item) for item in indexed]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_sweep_row, indexed))

    ok = [r for r in records if r["status"] == "ok"]
    band_values = [r["band_value"] for r in ok if r.get("band_value") is not None]
    summary_value = max(band_values) if band_values else None
    payload = {
        "name": name,
        "rows": records,
        "summary": {
            "total": len(records),
            "ok": len(ok),
            "errors": len(records) - len(ok),
            "max_band_value": summary_value,
        },
    }
    if out:
        out.json("sweep_report.json", payload)
        headers = ["row", "command", "name", "band_value", "lhs", "rhs", "ratio", "status", "error"]
        table = []
        for r in records:
            table.append(
                [
                    r["row"],
                    r["command"],
                    r.get("name", ""),
                    _blank_if_none(r.get("band_value")),
                    _blank_if_none(r.get("lhs")),
                    _blank_if_none(r.get("rhs")),
                    _blank_if_none(r.get("ratio")),
                    r["status"],
                    r.get("error") or "",
                ]
            )
        out.csv("sweep_table.csv", headers, table)
    lines = [
        f"rows={len(records)} ok={len(ok)} errors={len(records) - len(ok)} "
        f"max_band_value={summary_value!r}"
    ]
    return CommandResult(name, payload, band_value=summary_value, lines=lines)


def _blank_if_none(v):
    return "" if v is None else v


_HANDLERS = {
    "sieve": _cmd_sieve,
    "harmonic": _cmd_harmonic,
    "counts": _cmd_counts,
    "model": _cmd_model,
    "model-tv": _cmd_model_tv,
    "thm1": _cmd_thm1,
    "thm2": _cmd_thm2,
    "thm3": _cmd_thm3,
    "halasz": _cmd_halasz,
    "thm4": _cmd_thm4,
    "cor1": _cmd_cor1,
    "cor32": _cmd_cor32,
    "sweep": _cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primepoisson",
        description="Distributions of prime-factor counts and their Poisson approximations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default=".", help="directory for reports and tables")
        p.add_argument("--band-file", default=None, help="JSON regression-band file")
        p.add_argument("--band-name", default=None, help="override the band lookup name")

    p = sub.add_parser("sieve", help="enumerate primes up to a limit or in an interval")
    p.add_argument("--limit", default=None, help="upper bound (primes <= limit)")
    p.add_argument("--lo", default=None, help="interval lower endpoint (primes in (lo, hi])")
    p.add_argument("--hi", default=None, help="interval upper endpoint")
    common(p)

    p = sub.add_parser("harmonic", help="harmonic sums h, h1, h2 of a prime set")
    p.add_argument("--set", required=True, help="set spec (interval:/list:/expexp:)")
    common(p)

    p = sub.add_parser("counts", help="exact joint factor-count tallies for n <= x")
    p.add_argument("--x", required=True)
    p.add_argument("--set", action="append", required=True, help="repeatable set spec")
    p.add_argument("--oracle", action="store_true", help="use the slow trial-division route")
    p.add_argument("--segment-size", default=str(1 << 20))
    common(p)

    p = sub.add_parser("model", help="exact model law of a factor count; optional sampling")
    p.add_argument("--set", default=None, help="set spec for the exact law")
    p.add_argument("--tail-eps", default="1e-12")
    p.add_argument("--samples", default=None, help="number of exponent-vector samples")
    p.add_argument("--sample-y", default=None, help="sample vectors over primes <= y")
    p.add_argument("--seed", default="0")
    p.add_argument(
        "--emit-samples",
        action="store_true",
        help="write raw (sample, p, exponent) rows instead of aggregated counts",
    )
    common(p)

    p = sub.add_parser("model-tv", help="exact model-vs-truth distance over exponent vectors")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    common(p)

    p = sub.add_parser("thm1", help="joint Poisson comparison for factor counts")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--set", action="append", required=True, help="repeatable set spec")
    p.add_argument("--tail-eps", default="1e-12")
    p.add_argument("--no-decomposition", action="store_true")
    common(p)

    p = sub.add_parser("thm2", help="uniform upper bound for a joint count vector")
    p.add_argument("--x", required=True)
    p.add_argument("--set", action="append", required=True, help="repeatable set spec")
    p.add_argument("--k", required=True, help="comma-separated target counts")
    p.add_argument("--eta", default=None, help="0/1 covering flag (inferred when omitted)")
    p.add_argument("--xi", default=None, help="0/1 degenerate flag (inferred when omitted)")
    common(p)

    p = sub.add_parser("thm3", help="conditional concentration of the count over T")
    p.add_argument("--x", required=True)
    p.add_argument("--set", required=True, help="set spec for T")
    p.add_argument("--k", required=True)
    p.add_argument("--a-param", default="3.0")
    p.add_argument("--psi", required=True)
    common(p)

    p = sub.add_parser("halasz", help="pointwise Poisson comparison for multiplicity counts")
    p.add_argument("--x", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--k-lo", required=True)
    p.add_argument("--k-hi", required=True)
    common(p)

    p = sub.add_parser("thm4", help="pointwise model-vs-Poisson local bound")
    p.add_argument("--set", required=True)
    p.add_argument("--k-max", default=None)
    p.add_argument("--tail-eps", default="1e-12")
    common(p)

    p = sub.add_parser("cor1", help="joint Poisson(1) comparison over expexp blocks")
    p.add_argument("--x", required=True)
    p.add_argument("--lo", required=True, help="smallest block index")
    p.add_argument("--hi", required=True, help="largest block index")
    p.add_argument("--tail-eps", default="1e-12")
    common(p)

    p = sub.add_parser("cor32", help="model-vs-Poisson total variation bound")
    p.add_argument("--set", required=True)
    p.add_argument("--tail-eps", default="1e-12")
    common(p)

    p = sub.add_parser("sweep", help="run a grid of sub-configs with band checks")
    p.add_argument("--grid", required=True, help="JSON grid file with a 'rows' list")
    p.add_argument("--workers", default=None, help="worker processes (default: cpu count)")
    common(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        started = time.perf_counter()
        out = RunWriter(ns.out_dir)
        result = _HANDLERS[ns.command](ns, out)
        elapsed = time.perf_counter() - started

        bands = load_bands(ns.band_file) if ns.band_file else None
        verdicts = []
        code = EXIT_OK
        if result.band_value is not None:
            lookup = ns.band_name or result.name
            verdict = band_verdict(bands, lookup, result.band_value)
            band = list(bands[lookup]) if bands and lookup in bands else None
            verdicts.append(
                {
                    "name": lookup,
                    "value": result.band_value,
                    "band": band,
                    "verdict": verdict,
                }
            )
            if verdict == "fail":
                code = EXIT_BAND_FAIL

        manifest = {
            "version": __version__,
            "command": ns.command,
            "config": {k: v for k, v in vars(ns).items() if k != "command"},
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_clock_seconds": {"total": elapsed},
            "band_verdicts": verdicts,
            "outputs": out.files,
        }
        out.json("manifest.json", manifest)
        for line in result.lines:
            print(line)
        for v in verdicts:
            print(f"band {v['name']}: {v['verdict']}")
        return code
    except CapError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_CAP
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
