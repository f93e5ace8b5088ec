"""Experiment harness and the ``hypersat`` command line."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import bootstrap, strongbuilder, weakbuilder
from .errors import ConstructionFailure, FormatError, Infeasible, ParameterError, TooLarge
from .hypercore import Hypergraph, contains_clique, read_hg, wsat_complete_formula, write_hg
from .randmodel import sample

MODES = (
    "gen", "wsat-build", "wsat-verify", "sat-build", "sat-verify",
    "oracle-wsat", "oracle-sat", "check-pair-bound", "check-inequality", "proof-trace",
)
CHECK_MODES = ("check-pair-bound", "check-inequality")
CSV_HEADER = ["seed", "mode", "success", "host_edges", "spark_edges", "closure_edges", "formula", "ms", "reason"]


@dataclass
class ExperimentConfig:
    mode: str
    n: int
    r: int
    s: int | None = None
    p: float | None = None
    seeds: list[int] = field(default_factory=lambda: [0])
    a1: int | None = None
    a2: int | None = None
    a3: int | None = None
    c0: float = 1.0
    c1: float = 1.0
    delta: float = 0.1
    t: int = 4
    c: float = 1.0
    host: str | None = None
    spark: str | None = None
    hg_out: str | None = None
    report: str | None = None
    timing: bool = True
    jobs: int = 1

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if not self.seeds:
            raise ParameterError("need at least one trial")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if self.mode in CHECK_MODES:
            return
        if self.s is None:
            if self.mode != "gen":
                raise ParameterError("--s is required")
        elif not self.r < self.s <= self.n:
            raise ParameterError(f"need r < s <= n, got n={self.n}, r={self.r}, s={self.s}")
        if self.r < 2 or self.r > self.n:
            raise ParameterError(f"need 2 <= r <= n, got n={self.n}, r={self.r}")
        # sat-build derives its sizes from p even on a supplied host
        needs_p = self.mode in ("gen", "sat-build") or (
            self.host is None and not self.mode.startswith("oracle")
        )
        if needs_p and self.p is None:
            raise ParameterError("--p is required")
        if self.mode in ("wsat-verify", "sat-verify") and self.spark is None:
            raise ParameterError("--spark is required for verification")
        if self.hg_out and len(self.seeds) > 1 and "{seed}" not in self.hg_out:
            raise ParameterError("--hg-out needs a {seed} placeholder when running several trials")


@dataclass
class TrialRecord:
    seed: int
    mode: str
    success: bool
    host_edges: int | None = None
    spark_edges: int | None = None
    closure_edges: int | None = None
    formula: float | int | None = None
    ms: float = 0.0
    reason: str | None = None

    @classmethod
    def from_json(cls, data: dict) -> "TrialRecord":
        return cls(**{f.name: data[f.name] for f in fields(cls)})


def _host(config: ExperimentConfig, seed: int) -> Hypergraph:
    if config.host is not None:
        return read_hg(config.host)
    return sample(config.n, config.r, config.p, seed)


def _save(config: ExperimentConfig, h: Hypergraph, seed: int) -> None:
    if config.hg_out:
        write_hg(config.hg_out.replace("{seed}", str(seed)), h)


def _sat_params(config: ExperimentConfig) -> strongbuilder.SaturationParams:
    return strongbuilder.compute_params(
        config.n, config.r, config.s, config.p, config.c0, config.c1, config.delta,
        a1=config.a1, a2=config.a2, a3=config.a3,
    )


def _trial(config: ExperimentConfig, seed: int) -> tuple[TrialRecord, dict | None]:
    mode = config.mode
    rec = TrialRecord(seed=seed, mode=mode, success=False)
    extra = None
    n, r, s = config.n, config.r, config.s
    if mode == "gen":
        G = _host(config, seed)
        _save(config, G, seed)
        rec.host_edges, rec.success = len(G), True
    elif mode in ("wsat-build", "proof-trace"):
        G = _host(config, seed)
        rec.host_edges = len(G)
        rec.formula = weakbuilder.count_weak_upper(n, r, s)
        plan = weakbuilder.find_cores(G, s)
        H = weakbuilder.build_weak_H(G, plan)
        rec.spark_edges = len(H)
        _save(config, H, seed)
        if mode == "wsat-build":
            cl, _ = bootstrap.closure(G, H, s)
            rec.closure_edges = len(cl)
            free = not contains_clique(H, s)
            rec.success = free and len(cl) == len(G)
            if not rec.success:
                rec.reason = "spark contains K_s" if not free else "closure misses host edges"
        else:
            trace = weakbuilder.proof_trace_activation(G, plan, H)
            ok = bootstrap.replay_trace(H, trace, s)
            rec.closure_edges = len(H) + len(trace)
            rec.success = ok and rec.closure_edges == len(G)
            if not rec.success:
                rec.reason = "trace replay failed"
    elif mode in ("wsat-verify", "sat-verify"):
        G = _host(config, seed)
        H = read_hg(config.spark)
        rec.host_edges, rec.spark_edges = len(G), len(H)
        if mode == "wsat-verify":
            cl, _ = bootstrap.closure(G, H, s)
            rec.closure_edges = len(cl)
            rec.success = bootstrap.is_weakly_saturated(G, H, s)
        else:
            rec.success = bootstrap.is_strongly_saturated(G, H, s)
        if not rec.success:
            rec.reason = "spark is not saturated"
    elif mode == "sat-build":
        params = _sat_params(config)
        G = _host(config, seed)
        rec.host_edges = len(G)
        split = strongbuilder.make_split(n, params)
        build = strongbuilder.assemble_strong(G, params, split, seed)
        final = strongbuilder.patch_uncompleted(G, build.H, s)
        _save(config, final, seed)
        rec.spark_edges = len(final)
        rec.formula = strongbuilder.leading_term(n, r, params.p)
        rec.success = bootstrap.is_strongly_saturated(G, final, s)
        if not rec.success:
            rec.reason = "patched spark is not strongly saturated"
        extra = strongbuilder.strong_report(G, build, final, rec.success)
        extra["seed"] = seed
    elif mode in ("oracle-wsat", "oracle-sat"):
        G = Hypergraph.complete(n, r) if config.p is None and config.host is None else _host(config, seed)
        rec.host_edges = len(G)
        rec.formula = wsat_complete_formula(n, r, s)
        strong = mode == "oracle-sat"
        search = bootstrap.min_sat_bruteforce if strong else bootstrap.min_wsat_bruteforce
        value, H = search(G, s)
        rec.spark_edges = value
        check = bootstrap.is_strongly_saturated if strong else bootstrap.is_weakly_saturated
        ok = check(G, H, s)
        if len(G) == len(Hypergraph.complete(n, r)):
            ok = ok and value == rec.formula
        rec.success = ok
        if not ok:
            rec.reason = "oracle value disagrees with the formula"
    elif mode == "check-pair-bound":
        rep = strongbuilder.check_pair_clique_bound(n, r, config.t, config.c, [seed])
        rec.formula = rep.bound
        rec.spark_edges = rep.max_counts[0]
        rec.success = rep.passed[0]
        rec.reason = f"rho={rep.rho!r}"
    elif mode == "check-inequality":
        ts = range(max(4, r), config.t + 1)
        bad = [t for t in ts if not strongbuilder.check_t_inequality(r, t)]
        rec.formula = len(ts)
        rec.success = not bad
        if bad:
            rec.reason = "fails at t=" + " ".join(map(str, bad))
    return rec, extra


def run_trial(config: ExperimentConfig, seed: int) -> tuple[TrialRecord, dict | None]:
    start = time.perf_counter()
    try:
        rec, extra = _trial(config, seed)
    except (ConstructionFailure, TooLarge) as exc:
        rec, extra = TrialRecord(seed=seed, mode=config.mode, success=False,
                                 reason=f"{type(exc).__name__}: {exc}"), None
    rec.ms = round((time.perf_counter() - start) * 1000, 3) if config.timing else 0.0
    return rec, extra


def run_with_reports(config: ExperimentConfig) -> tuple[list[TrialRecord], list[dict]]:
    config.validate()
    if config.mode == "sat-build":
        try:
            _sat_params(config)
        except Infeasible as exc:  # infeasible sizes are a configuration error
            raise ParameterError(str(exc)) from exc
    if config.mode == "check-inequality" and config.r < 3:
        raise ParameterError("the inequality needs r >= 3")
    if config.jobs > 1 and len(config.seeds) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(run_trial, [config] * len(config.seeds), config.seeds))
    else:
        results = [run_trial(config, seed) for seed in config.seeds]
    return [rec for rec, _ in results], [extra for _, extra in results if extra is not None]


def run(config: ExperimentConfig) -> list[TrialRecord]:
    return run_with_reports(config)[0]


def emit(records: list[TrialRecord], fmt: str = "csv") -> bytes:
    if not records:
        raise ParameterError("no records to emit")
    if fmt == "json":
        return (json.dumps([asdict(x) for x in records], indent=2) + "\n").encode()
    if fmt != "csv":
        raise ParameterError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        row = asdict(rec)
        writer.writerow(["" if row[k] is None else row[k] for k in CSV_HEADER])
    return buf.getvalue().encode()


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypersat", description="Saturation experiments in random hypergraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, s: bool = True) -> None:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        if s:
            p.add_argument("--s", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--seeds", help="comma-separated seeds; overrides --seed/--trials")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--no-timing", action="store_true")
        p.add_argument("--jobs", type=int, default=1)

    g = sub.add_parser("gen", help="sample a random hypergraph")
    common(g, s=False)
    g.add_argument("--hg-out")

    w = sub.add_parser("wsat", help="build or verify a weakly saturated spark")
    common(w)
    w.add_argument("--proof-trace", action="store_true")
    w.add_argument("--host")
    w.add_argument("--spark")
    w.add_argument("--hg-out")

    st = sub.add_parser("sat", help="build or verify a strongly saturated spark")
    common(st)
    for name in ("--a1", "--a2", "--a3"):
        st.add_argument(name, type=int)
    st.add_argument("--c0", type=float, default=1.0)
    st.add_argument("--c1", type=float, default=1.0)
    st.add_argument("--delta", type=float, default=0.1)
    st.add_argument("--host")
    st.add_argument("--spark")
    st.add_argument("--hg-out")
    st.add_argument("--report", help="write the per-seed build reports as JSON")

    o = sub.add_parser("oracle", help="exhaustive minimum saturation on small hosts")
    common(o)
    o.add_argument("--kind", choices=("wsat", "sat"), default="wsat")
    o.add_argument("--host")

    c = sub.add_parser("check", help="statistical and arithmetic checks")
    c.add_argument("which", choices=("pair-bound", "inequality"))
    common(c, s=False)
    c.add_argument("--t", type=int, help="clique size (pair-bound) or largest t (inequality)")
    c.add_argument("--c", type=float, default=1.0)
    return ap


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cmd = args.command
    if cmd == "gen":
        mode = "gen"
    elif cmd == "wsat":
        mode = "proof-trace" if args.proof_trace else ("wsat-verify" if args.spark else "wsat-build")
    elif cmd == "sat":
        mode = "sat-verify" if args.spark else "sat-build"
    elif cmd == "oracle":
        mode = f"oracle-{args.kind}"
    else:
        mode = f"check-{args.which}"
    if args.seeds:
        seeds = [int(x) for x in args.seeds.split(",")]
    else:
        if args.trials < 1:
            raise ParameterError("--trials must be at least 1")
        seeds = list(range(args.seed, args.seed + args.trials))
    cfg = ExperimentConfig(
        mode=mode, n=args.n, r=args.r, s=getattr(args, "s", None), p=args.p, seeds=seeds,
        timing=not args.no_timing, jobs=args.jobs,
    )
    for name in ("a1", "a2", "a3", "c0", "c1", "delta", "c", "host", "spark", "hg_out", "report"):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "t", None) is not None:
        cfg.t = args.t
    elif mode == "check-inequality":
        cfg.t = 50
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = config_from_args(args)
        records, reports = run_with_reports(config)
    except (ParameterError, FormatError, ConstructionFailure, OSError) as exc:
        print(f"hypersat: error: {exc}", file=sys.stderr)
        return 2
    data = emit(records, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if config.report:
        Path(config.report).write_text(json.dumps(reports, indent=2) + "\n")
    if config.mode in CHECK_MODES:
        return 0
    return 0 if all(rec.success for rec in records) else 1


if __name__ == "__main__":
    sys.exit(main())
