"""Command-line entry point."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

log = logging.getLogger("cayleyham")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    k_max: int = 12
    p_cap: int = 500
    max_order: int = 16
    budget_ms: int = 60_000
    seed: int = 0
    sample_count: int = 20
    workers: int = 1
    output_path: Optional[str] = None
    catalog_paths: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("k_max", "p_cap", "max_order", "budget_ms", "sample_count", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def pipeline_config(self):
        from .pipeline import PipelineConfig

        return PipelineConfig(
            k_max=self.k_max,
            p_cap=self.p_cap,
            sample_count=self.sample_count,
            budget_ms=self.budget_ms,
            seed=self.seed,
            workers=self.workers,
            max_order=self.max_order,
        )


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _pair(text: str) -> tuple[int, int]:
    try:
        u, v = text.split("-")
        return int(u), int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected U-V, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    from .pipeline import default_workers

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-ms", type=_positive, default=int(os.environ.get("CAYLEYHAM_BUDGET_MS", 60_000)))
    common.add_argument("--seed", type=int, default=int(os.environ.get("CAYLEYHAM_SEED", 0)))
    common.add_argument("--workers", type=_positive, default=default_workers())
    common.add_argument("--catalog", action="append", default=[], metavar="PATH", help="JSON-lines catalog extension")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cayleyham", description="Hamiltonicity of Cayley graphs of order kp.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("catalog", parents=[common], help="build and list the small-group catalog")
    p.add_argument("--max-order", type=_positive, default=16)

    p = sub.add_parser("gensets", parents=[common], help="irredundant generating sets up to equivalence")
    p.add_argument("order", type=_positive)

    p = sub.add_parser("hamcheck", parents=[common], help="search one Cayley graph for a hamiltonian cycle")
    p.add_argument("--group", required=True, help="catalog id N.I")
    p.add_argument("--gens", required=True, type=int, nargs="+")
    p.add_argument("--required", type=_pair, nargs="*", default=[], metavar="U-V")
    p.add_argument("--additional", type=_pair, nargs="*", default=[], metavar="U-V")

    p = sub.add_parser("connlace", parents=[common], help="hamiltonian connected / laceable survey")
    p.add_argument("--max-order", type=_positive, default=16)
    p.add_argument("--output", "-o")

    p = sub.add_parser("verify", parents=[common], help="verify all groups of order kp")
    p.add_argument("--k-max", type=_positive, default=12)
    p.add_argument("--p-cap", type=_positive, default=500)
    p.add_argument("--sample-count", type=_positive, default=20)
    p.add_argument("--output", "-o")

    p = sub.add_parser("anomalous", parents=[common], help="groups of order kp without a normal Z_p")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--output", "-o")

    p = sub.add_parser("validate-certs", help="re-check every certificate of a report")
    p.add_argument("report")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _run_config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        k_max=getattr(args, "k_max", 12),
        p_cap=getattr(args, "p_cap", 500),
        max_order=getattr(args, "max_order", 16),
        budget_ms=getattr(args, "budget_ms", 60_000),
        seed=getattr(args, "seed", 0),
        sample_count=getattr(args, "sample_count", 20),
        workers=getattr(args, "workers", 1),
        output_path=getattr(args, "output", None),
        catalog_paths=tuple(getattr(args, "catalog", ())),
    )


def _catalog(cfg: RunConfig):
    from .catalog import default_catalog, load_extension

    cat = default_catalog()
    for path in cfg.catalog_paths:
        cat.add_extension(load_extension(path))
    return cat


def _finish(report, cfg: RunConfig) -> int:
    """Print the summary, persist, re-validate; 0 iff everything holds."""
    from .report import validate_certificates, validate_report_file, write_report

    for key in report.unresolved:
        print(f"unresolved: {key}")
    print(json.dumps(report.summary, sort_keys=True))
    if cfg.output_path:
        write_report(report, cfg.output_path)
        result = validate_report_file(cfg.output_path)
        print(f"wrote {cfg.output_path}")
    else:
        cases = [c.to_json() for c in report.cases]
        result = validate_certificates(report.store.certs, report.store.groups, cases)
    for cid, reason in result.bad:
        print(f"invalid certificate {cid}: {reason}")
    print(f"certificates re-validated: {result.checked - len(result.bad)}/{result.checked}")
    return 0 if report.success and result.ok else 1


def cmd_catalog(cfg: RunConfig) -> int:
    cat = _catalog(cfg)
    for n in range(1, cfg.max_order + 1):
        groups = cat.groups(n)
        print(f"order {n}: {len(groups)} group(s): " + ", ".join(f"{G.catalog_id[0]}.{G.catalog_id[1]} {G.name}" for G in groups))
    return 0


def cmd_gensets(cfg: RunConfig, order: int) -> int:
    from .gensets import irredundant_gensets_up_to_equiv

    for G in _catalog(cfg).groups(order):
        classes = irredundant_gensets_up_to_equiv(G)
        print(f"{G.catalog_id[0]}.{G.catalog_id[1]} {G.name}: {len(classes)} class(es)")
        for cls in classes:
            S = cls.representative
            print("  {" + ", ".join(G.labels[s] for s in S.elements) + "}  elements " + str(list(S.elements)))
    return 0


def cmd_hamcheck(cfg: RunConfig, args) -> int:
    from .certs import EdgeConstraint
    from .graphs import cayley_graph
    from .hamilton import SearchBudget, SearchUndecided, find_ham_cycle

    n, i = (int(x) for x in args.group.split("."))
    G = _catalog(cfg).get((n, i))
    graph = cayley_graph(G, args.gens)
    cons = EdgeConstraint.make(args.additional, args.required)
    try:
        cert = find_ham_cycle(graph, cons, SearchBudget(time_limit_ms=cfg.budget_ms, rng_seed=cfg.seed))
    except SearchUndecided:
        print("undecided")
        return 2
    if cert is None:
        print("no hamiltonian cycle")
        return 1
    print("cycle: " + " ".join(map(str, cert.vertices)))
    return 0


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.subcommand == "validate-certs":
        from .report import ReportError, validate_report_file

        try:
            result = validate_report_file(args.report)
        except (OSError, ReportError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for cid, reason in result.bad:
            print(f"invalid certificate {cid}: {reason}")
        for ref in result.dangling:
            print(f"missing certificate: {ref}")
        print(f"certificates re-validated: {result.checked - len(result.bad)}/{result.checked}")
        return 0 if result.ok else 1
    try:
        cfg = _run_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    from .pipeline import CertStore, PipelineError, VerificationReport, verify_anomalous, verify_kp, verify_prop13

    try:
        if cfg.subcommand == "catalog":
            return cmd_catalog(cfg)
        if cfg.subcommand == "gensets":
            return cmd_gensets(cfg, args.order)
        if cfg.subcommand == "hamcheck":
            return cmd_hamcheck(cfg, args)
        _catalog(cfg)
        pcfg = cfg.pipeline_config()
        if cfg.subcommand == "connlace":
            return _finish(verify_prop13(cfg.max_order, pcfg), cfg)
        if cfg.subcommand == "verify":
            return _finish(verify_kp(config=pcfg), cfg)
        if cfg.subcommand == "anomalous":
            store = CertStore(f"anom/k{args.k}")
            cases = verify_anomalous(args.k, pcfg, store)
            return _finish(VerificationReport(config=dict(pcfg.to_json(), k=args.k), cases=cases, store=store), cfg)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown subcommand {cfg.subcommand}")
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
