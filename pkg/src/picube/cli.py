"""Command-line interface.

Subcommands
-----------
generate    build a seed, eliminate nodes, verify, and write a rule file
verify      check a rule file for positivity, interiority and exactness
seed        write the pre-elimination seed rule
experiment  error sweep over degrees; CSV plus figures
tables      node-count table assembled from generated rule files

Exit codes: 0 success, 1 usage, 2 file parse error, 3 rule infeasible or
inexact, 4 pipeline failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corrector import CorrectorConfig
from .domains import DomainSpec, parse_domain
from .eliminator import StopReason, eliminate
from .experiment import ExperimentConfig, run_experiment, write_csv
from .moments import MomentSystem
from .rules import CubatureRule, efficiency, optimal_node_count, verify
from .ruleio import RuleFileError, read_rule, write_rule
from .seeds import build_seed, default_eliminator, naive_node_count

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INEXACT = 3
EXIT_PIPELINE = 4

SUPPORTED = (
    "C1", "C2", "C3", "C4",
    "T2", "T3", "T4",
    "T2xC1", "T2xC2", "T3xC1", "T2xT2",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are exit 1
        raise _UsageError(message)


def _domain_arg(label: str) -> DomainSpec:
    try:
        domain = parse_domain(label)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if domain.label not in SUPPORTED:
        raise _UsageError(
            f"domain {domain.label} is not supported (choose from {', '.join(SUPPORTED)})"
        )
    return domain


def _degree_arg(p: int) -> int:
    if p < 1 or p % 2 == 0:
        raise _UsageError(f"degree must be odd and >= 1, got {p}")
    return p


def _rule_name(domain: DomainSpec, degree: int, kind: str = "rule") -> str:
    return f"{domain.label}_p{degree:02d}.{kind}"


def _print_table(columns):
    # columns: list of dicts with degree, n_tp, n_elim, n_opt, i_opt
    head = ["degree", "n_tp", "n_elim", "n_opt", "i_opt"]
    widths = [max(len(h), 6) for h in head]
    rows = []
    for name in head:
        row = [name.ljust(8)]
        for col in columns:
            val = col[name]
            if name == "i_opt":
                cell = "-" if val is None else f"{val:.2f}"
            else:
                cell = "-" if val is None else str(val)
            row.append(cell.rjust(7))
        rows.append("".join(row))
    print("\n".join(rows))


def _cmd_generate(args) -> int:
    domain = _domain_arg(args.domain)
    degree = _degree_arg(args.degree)
    cfg = CorrectorConfig(tol=args.tol)
    handle = default_eliminator(cfg, args.max_candidates)
    seed = build_seed(
        domain,
        degree,
        eliminate_intermediate=not args.no_intermediate_ne,
        eliminator=handle if not args.no_intermediate_ne else None,
    )
    sys_ = MomentSystem(domain, degree)
    report = eliminate(sys_, seed, config=cfg, max_candidates=args.max_candidates)
    rule = report.final_rule
    check = verify(rule)
    out = Path(args.out) if args.out else Path(_rule_name(domain, degree))
    out.parent.mkdir(parents=True, exist_ok=True)
    ok = check.passes(args.verify_tol)
    warning = None
    if not ok:
        warning = (
            f"verification failed: relative residual {check.relative_residual:.3e}, "
            f"margin {check.margin:.3e}"
        )
    write_rule(rule, out, warning=warning)
    n_opt = optimal_node_count(domain, degree)
    _print_table(
        [
            {
                "degree": degree,
                "n_tp": naive_node_count(domain, degree),
                "n_elim": rule.n,
                "n_opt": n_opt,
                "i_opt": efficiency(domain, degree, rule.n),
            }
        ],
    )
    print(f"stop: {report.stop_reason.value} after {len(report.steps)} removals")
    print(f"wrote {out}")
    if not ok:
        print(f"warning: {warning}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        rule, warning = read_rule(args.rule)
    except RuleFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    degree = args.degree if args.degree is not None else rule.degree
    check = verify(rule, degree)
    print(f"domain            {rule.domain.label}")
    print(f"degree            {degree}")
    print(f"nodes             {rule.n}")
    print(f"residual          {check.residual_norm:.3e}")
    print(f"relative residual {check.relative_residual:.3e}")
    print(f"min weight        {check.min_weight:.6e}")
    print(f"min face distance {check.min_slack:.6e}")
    print(f"weight sum error  {check.weight_sum_error:.3e}")
    if warning:
        print(f"file warning: {warning}")
    if not check.passes(args.tol):
        print("FAIL: rule is not positive-interior-exact at tolerance", file=sys.stderr)
        return EXIT_INEXACT
    print("OK")
    return EXIT_OK


def _cmd_seed(args) -> int:
    domain = _domain_arg(args.domain)
    degree = _degree_arg(args.degree)
    handle = None if args.no_intermediate_ne else default_eliminator(
        CorrectorConfig(tol=args.tol), args.max_candidates
    )
    rule = build_seed(
        domain,
        degree,
        eliminate_intermediate=not args.no_intermediate_ne,
        eliminator=handle,
    )
    out = Path(args.out) if args.out else Path(_rule_name(domain, degree, kind="seed"))
    out.parent.mkdir(parents=True, exist_ok=True)
    write_rule(rule, out)
    print(f"seed for {domain.label} degree {degree}: {rule.n} nodes")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    domain = _domain_arg(args.domain)
    degrees = tuple(_degree_arg(int(tok)) for tok in args.degrees.split(","))
    config = ExperimentConfig(
        domain=domain,
        degrees=degrees,
        samples=args.samples,
        seed=args.seed,
    )
    cfg = CorrectorConfig(tol=args.tol)
    rules_dir = Path(args.rules_dir) if args.rules_dir else None

    def eliminated(p: int) -> CubatureRule:
        if rules_dir is not None:
            path = rules_dir / _rule_name(domain, p)
            if path.exists():
                rule, _ = read_rule(path)
                return rule
        handle = default_eliminator(cfg, args.max_candidates)
        seed = build_seed(domain, p, eliminator=handle)
        report = eliminate(
            MomentSystem(domain, p), seed, config=cfg, max_candidates=args.max_candidates
        )
        if rules_dir is not None:
            rules_dir.mkdir(parents=True, exist_ok=True)
            write_rule(report.final_rule, rules_dir / _rule_name(domain, p))
        return report.final_rule

    rows = run_experiment(config, eliminated)
    out = Path(args.out) if args.out else Path(f"experiment_{domain.label}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(rows, out)
    print(f"wrote {out}")
    if not args.no_figures:
        from .figures import render_error_figures

        stem = str(out.with_suffix(""))
        for path in render_error_figures(rows, stem, domain.label):
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_tables(args) -> int:
    domain = _domain_arg(args.domain)
    degrees = [_degree_arg(int(tok)) for tok in args.degrees.split(",")]
    rules_dir = Path(args.rules_dir)
    columns = []
    for p in degrees:
        n_elim = None
        path = rules_dir / _rule_name(domain, p)
        if path.exists():
            try:
                rule, _ = read_rule(path)
                n_elim = rule.n
            except RuleFileError as exc:
                print(f"parse error in {path}: {exc}", file=sys.stderr)
                return EXIT_PARSE
        n_opt = optimal_node_count(domain, p)
        columns.append(
            {
                "degree": p,
                "n_tp": naive_node_count(domain, p),
                "n_elim": n_elim,
                "n_opt": n_opt,
                "i_opt": (n_opt / n_elim) if n_elim else None,
            }
        )
    print(f"domain {domain.label}")
    _print_table(columns)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="picube", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log elimination progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_out=True):
        p.add_argument("--domain", "-d", required=True, help="domain label, e.g. T2 or T2xC1")
        p.add_argument("--degree", "-p", type=int, required=True, help="odd polynomial degree")
        p.add_argument("--tol", type=float, default=1e-14, help="corrector tolerance")
        p.add_argument("--max-candidates", type=int, default=None, help="predictor candidates per step")
        p.add_argument("--no-intermediate-ne", action="store_true", help="plain tensor/Duffy seed")
        if with_out:
            p.add_argument("--out", "-o", default=None, help="output path")

    g = sub.add_parser("generate", help="generate an eliminated rule and write it")
    common(g)
    g.add_argument("--verify-tol", type=float, default=1e-12, help="relative residual gate")
    g.set_defaults(func=_cmd_generate)

    v = sub.add_parser("verify", help="verify a rule file")
    v.add_argument("rule", help="rule file path")
    v.add_argument("--degree", type=int, default=None, help="check at this degree instead")
    v.add_argument("--tol", type=float, default=1e-12, help="relative residual gate")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("seed", help="write the pre-elimination seed rule")
    common(s)
    s.set_defaults(func=_cmd_seed)

    e = sub.add_parser("experiment", help="accuracy sweep; CSV and figures")
    e.add_argument("--domain", "-d", required=True)
    e.add_argument("--degrees", required=True, help="comma-separated odd degrees")
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--seed", type=int, default=20240813)
    e.add_argument("--tol", type=float, default=1e-14)
    e.add_argument("--max-candidates", type=int, default=None)
    e.add_argument("--rules-dir", default=None, help="reuse/store eliminated rules here")
    e.add_argument("--out", "-o", default=None, help="CSV path")
    e.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    e.set_defaults(func=_cmd_experiment)

    t = sub.add_parser("tables", help="node-count table from generated rules")
    t.add_argument("--domain", "-d", required=True)
    t.add_argument("--degrees", required=True, help="comma-separated odd degrees")
    t.add_argument("--rules-dir", default=".", help="directory of generated rule files")
    t.set_defaults(func=_cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(name)s %(message)s")
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuleFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
