"""
Command line interface.

Every command writes one JSON report (schema ``sparkit.report/1``) to
stdout or ``--out``. Rationals are strings, ``"Infinite"`` stands for the
spark of an injective map, and keys are sorted, so identical inputs give
byte-identical reports.

Exit codes: 0 success, 2 input error, 3 desk-scale guard, 4 mathematical
precondition failure, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from .errors import (
    ContractViolation,
    FrameError,
    InconsistencyError,
    PreconditionError,
    ResourceGuardError,
)
from .frames import Frame, frame_bounds, normalize
from .instance import (
    InstanceError,
    instance_digest,
    instance_to_dict,
    load_instance,
    parse_rational,
    parse_rational_list,
    vector_to_strings,
)
from .spark import (
    LinearMapOnMeasureSpace,
    SparkResult,
    coherence,
    coherence_floor,
    spark_combinatorial,
    spark_kernel,
    weighted_spark,
)
from .sparsity import (
    PROFILES,
    Certificate,
    GeneratorSpec,
    certify_half_spark,
    l0_solve,
    probe_converse,
    search_converse_violations,
    uniqueness_level,
)

SCHEMA = "sparkit.report/1"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_PRECONDITION = 4
EXIT_INCONSISTENT = 5


def _json_value(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "Infinite" if x > 0 else "-Infinite"
        return x
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def spark_to_dict(sp: SparkResult) -> dict:
    return {
        "value": _json_value(sp.value),
        "witness": None if sp.witness is None else vector_to_strings(sp.witness),
        "witness_support": None if sp.witness_support is None else list(sp.witness_support),
    }


def certificate_to_dict(c: Certificate) -> dict:
    return {
        "kind": c.kind,
        "spark": _json_value(c.spark_value),
        "quantities": _json_value(c.quantities),
        "verdict": c.verdict,
        "narrative": c.narrative,
        "flags": _json_value(c.flags),
        "witnesses": {k: vector_to_strings(v) for k, v in c.witnesses.items()},
    }


def render_report(command: str, arguments: dict, results: dict,
                  instance: LinearMapOnMeasureSpace | None = None) -> str:
    doc = {
        "schema": SCHEMA,
        "command": command,
        "arguments": _json_value(arguments),
        "instance_digest": None if instance is None else instance_digest(instance),
        "results": results,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _target(text: str, n: int, what: str):
    v = parse_rational_list(text, what)
    if len(v) != n:
        raise InstanceError(f"{what}: dimension {len(v)} does not match {n}")
    return v


def cmd_spark(inst: LinearMapOnMeasureSpace, args) -> dict:
    override = args.max_n_override
    weighted = weighted_spark(inst, override=override)
    results: dict = {"spark": spark_to_dict(weighted)}
    if inst.domain.is_counting:
        comb = spark_combinatorial(inst.matrix, prune_coherence=args.prune_coherence, override=override)
        kern = spark_kernel(inst.matrix, override=override)
        if not (comb.value == kern.value == weighted.value):
            raise InconsistencyError(
                f"spark engines disagree: combinatorial {comb.value}, kernel {kern.value}, weighted {weighted.value}")
        results["engines"] = {
            "combinatorial": spark_to_dict(comb),
            "kernel": spark_to_dict(kern),
            "agree": True,
            "coherence_pruning": args.prune_coherence,
        }
    results["uniqueness"] = certificate_to_dict(uniqueness_level(inst, spark=weighted))
    return results


def cmd_solve(inst: LinearMapOnMeasureSpace, args) -> dict:
    v = _target(args.target, inst.matrix.rows, "target")
    sol = l0_solve(inst, v, override=args.max_n_override)
    if sol is None:
        return {"feasible": False, "solution": None, "certificate": None}
    cert = certify_half_spark(inst, sol.coefficients, override=args.max_n_override)
    return {
        "feasible": True,
        "solution": {
            "coefficients": vector_to_strings(sol.coefficients),
            "support": list(sol.support),
            "objective": str(sol.objective),
            "unique": sol.unique,
            "injective_on_support": sol.injective_on_support,
        },
        "certificate": certificate_to_dict(cert),
    }


def cmd_certify(inst: LinearMapOnMeasureSpace, args) -> dict:
    c = _target(args.candidate, inst.matrix.cols, "candidate")
    cert = certify_half_spark(inst, c, override=args.max_n_override)
    return {"image": vector_to_strings(inst.apply(c)), "certificate": certificate_to_dict(cert)}


def cmd_probe(inst: LinearMapOnMeasureSpace, args) -> dict:
    r = parse_rational(args.level, "level")
    if r < 0:
        raise InstanceError(f"level: must be nonnegative, got {r}")
    return {"certificate": certificate_to_dict(probe_converse(inst, r, override=args.max_n_override))}


def cmd_search(args) -> dict:
    profiles = tuple(p.strip() for p in args.profiles.split(",")) if args.profiles else GeneratorSpec().profiles
    try:
        spec = GeneratorSpec(profiles, args.max_rows, args.max_cols)
    except ContractViolation as exc:
        raise InstanceError(str(exc)) from exc
    if args.trials < 1:
        raise InstanceError(f"trials: must be >= 1, got {args.trials}")
    report = search_converse_violations(spec, args.trials, args.seed)
    return {
        "violations": report.violations,
        "table": _json_value(report.table()),
        "trials": [
            {
                "index": t.index,
                "profile": t.profile,
                "instance": instance_to_dict(t.instance),
                "spark": _json_value(t.spark_value),
                "level_r": _json_value(t.level),
                "uniqueness_fails": t.uniqueness_fails,
                "converse_violation": t.violation,
            }
            for t in report.trials
        ],
    }


def cmd_frame_info(inst: LinearMapOnMeasureSpace, args) -> dict:
    try:
        fr = Frame(inst.matrix)
    except FrameError as exc:
        return {"valid_frame": False, "reason": str(exc)}
    bounds = frame_bounds(fr)
    return {
        "valid_frame": True,
        "dim": fr.dim,
        "count": fr.count,
        "frame_lower_bound": bounds.lower,
        "frame_upper_bound": bounds.upper,
        "normalized_columns": [[float(x) for x in col] for col in normalize(fr).T],
        "coherence": coherence(fr),
        "coherence_floor": _json_value(coherence_floor(fr)),
    }


INSTANCE_COMMANDS = {
    "spark": cmd_spark,
    "solve": cmd_solve,
    "certify": cmd_certify,
    "probe": cmd_probe,
    "frame-info": cmd_frame_info,
}


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="RNG seed for `search` (default 0)")
    parser.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--prune-coherence", action="store_true", default=d(False),
                        help="skip cardinalities excluded by the coherence bound (counting measure)")
    parser.add_argument("--max-n-override", action="store_true", default=d(False),
                        help="lift the 24-column desk-scale guard")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparkit", description=__doc__.split("\n\n")[0].strip())
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spark", parents=[common], help="spark of an instance, with witness")
    p.add_argument("instance")
    p = sub.add_parser("solve", parents=[common], help="minimum-measure representation of a target")
    p.add_argument("instance")
    p.add_argument("--target", required=True, help="comma-separated rationals, e.g. 1,0")
    p = sub.add_parser("certify", parents=[common], help="half-spark uniqueness certificate for a candidate")
    p.add_argument("instance")
    p.add_argument("--candidate", required=True, help="comma-separated rationals")
    p = sub.add_parser("probe", parents=[common], help="decide level-r uniqueness and flag converse violations")
    p.add_argument("instance")
    p.add_argument("--level", required=True, help="nonnegative rational level r")
    p = sub.add_parser("search", parents=[common], help="random search for converse violations")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--profiles", default=None, help=f"comma-separated subset of {','.join(PROFILES)}")
    p.add_argument("--max-rows", type=int, default=3)
    p.add_argument("--max-cols", type=int, default=6)
    p = sub.add_parser("frame-info", parents=[common], help="frame validity, bounds and coherence")
    p.add_argument("instance")
    return parser


def _arguments(args) -> dict:
    out = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "search":
            inst = None
            results = cmd_search(args)
        else:
            inst = load_instance(args.instance)
            results = INSTANCE_COMMANDS[args.command](inst, args)
    except (InstanceError, OSError) as exc:
        print(f"sparkit: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceGuardError as exc:
        print(f"sparkit: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InconsistencyError as exc:
        print(f"sparkit: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (FrameError, PreconditionError, ContractViolation) as exc:
        print(f"sparkit: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = render_report(args.command, _arguments(args), results, inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
