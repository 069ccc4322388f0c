"""Command-line front end and run orchestration.

Subcommands:
    conetri run <input.json> [--verify] [--trace PATH] [--format json|text]
    conetri random --dim D --bound B --count N --seed S [--verify]
    conetri bounds --mu M --dim D

Input files describe one cone:
    {"dimension": 2, "generators": [[1, 0], [1, 3]]}

Reports are deterministic: the same input (or the same seed) produces byte
identical output. Exit status is 0 for a fully certified run, 2 when some
certificate fails, and 1 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .cone_geometry import (
    SimplicialCone,
    Triangulation,
    make_cone,
    primitive_direction,
    vector_content,
)
from .errors import ConetriError
from .p2t_engine import run_p2t
from .pow2_refiner import hk_bound, refine_isolated, refine_to_unimodular
from .verifier import (
    CertificateReport,
    certify,
    final_bounds,
    intermediate_mu_ceiling,
    max_dilation,
    upper_rational,
)


@dataclass
class RunConfig:
    """Everything one pipeline invocation depends on."""

    generators: tuple[tuple[int, ...], ...]
    verify: bool = True
    keep_trace: bool = False
    isolated_cones: bool = False


def parse_input(text: str) -> SimplicialCone:
    """Parse a cone description from JSON text.

    Expects {"dimension": d, "generators": [d vectors of d ints]}. A
    generator with content > 1 is divided down to its primitive direction,
    with a warning on stderr.

    Raises:
        ValueError: malformed JSON or wrong shapes (also the base class of
            the dependent-generators and dimension errors).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("input must be a JSON object")
    try:
        d = data["dimension"]
        gens = data["generators"]
    except KeyError as exc:
        raise ValueError(f"missing input field {exc}") from exc
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    if (
        not isinstance(gens, list)
        or len(gens) != d
        or any(
            not isinstance(g, list)
            or len(g) != d
            or any(not isinstance(c, int) or isinstance(c, bool) for c in g)
            for g in gens
        )
    ):
        raise ValueError("generators must be a d x d array of integers")
    cleaned = []
    for g in gens:
        if vector_content(g) == 0:
            raise ValueError(f"generator {g} is the zero vector")
        if vector_content(g) != 1:
            prim = primitive_direction(g)
            print(
                f"warning: generator {g} divided by its content to {list(prim)}",
                file=sys.stderr,
            )
            cleaned.append(prim)
        else:
            cleaned.append(tuple(g))
    return make_cone(cleaned)


def random_cone(dim: int, bound: int, rng: random.Random) -> SimplicialCone:
    """A random nonsingular cone with entries uniform in [-bound, bound].

    The full generator matrix is resampled until it is nonsingular; each
    generator is then divided by its content to make it primitive.
    """
    if dim < 2:
        raise ValueError(f"dimension must be at least 2, got {dim}")
    if bound < 1:
        raise ValueError(f"bound must be at least 1, got {bound}")
    while True:
        gens = [
            [rng.randint(-bound, bound) for _ in range(dim)] for _ in range(dim)
        ]
        if any(vector_content(g) == 0 for g in gens):
            continue
        primitive = [primitive_direction(g) for g in gens]
        try:
            return make_cone(primitive)
        except ConetriError:
            continue


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _report_dict(
    base: SimplicialCone,
    final: Triangulation,
    report: CertificateReport,
    hk_ok: bool | None = None,
) -> dict[str, Any]:
    mu = base.multiplicity
    doc: dict[str, Any] = {
        "dimension": base.dimension,
        "base": {
            "generators": [list(g) for g in base.generators],
            "multiplicity": mu,
        },
        "final": {
            "count": report.final_count,
            "cones": [
                {
                    "generators": [list(g) for g in c.generators],
                    "multiplicity": c.multiplicity,
                }
                for c in final.cones
            ],
        },
        "max_dilation": _fraction_str(report.max_dilation),
        "bounds": {
            "theorem": report.final_bound_thm,
            "simplified": report.final_bound_cor,
            "mu_ceiling": intermediate_mu_ceiling(mu),
            "slack_ratio": report.slack_ratio,
        },
        "certificates": {
            "volume_ok": report.volume_ok,
            "containment_ok": report.containment_ok,
            "all_unimodular": report.all_unimodular,
            "phi_descent_ok": report.phi_descent_ok,
            "label_depth_ok": report.label_depth_ok,
            "mu_bound_ok": report.mu_bound_ok,
            "xi_length_ok": report.xi_length_ok,
            "final_bound_ok": report.final_bound_ok,
        },
    }
    if hk_ok is not None:
        doc["certificates"]["hk_ok"] = hk_ok
    return doc


def run_pipeline(cfg: RunConfig) -> tuple[dict[str, Any], list[dict[str, Any]]]:
    """Run both phases on one cone and certify the outcome.

    Returns:
        (report, trace): the report document and, when cfg.keep_trace, the
        subdivision events as JSON-ready dicts.
    """
    base = make_cone(cfg.generators)
    state = run_p2t(base)
    hk_ok: bool | None = None
    if cfg.isolated_cones:
        final_cones: list[SimplicialCone] = []
        hk_ok = True
        for cone in state.triangulation.cones:
            result = refine_isolated(cone)
            ell = cone.multiplicity.bit_length() - 1
            ceiling = upper_rational(hk_bound(cone.dimension, ell))
            final_cones.extend(result.triangulation.cones)
            fresh_base = result.triangulation.base
            if max_dilation(fresh_base, result.triangulation.cones) > ceiling:
                hk_ok = False
        final = Triangulation(
            base, final_cones, list(state.triangulation.all_created)
        )
    else:
        final = refine_to_unimodular(state.triangulation)
    report = certify(
        base,
        final,
        trace=state.trace,
        p2t_created=state.triangulation.all_created,
    )
    doc = _report_dict(base, final, report, hk_ok)
    trace_doc = []
    if cfg.keep_trace:
        for ev in state.trace:
            trace_doc.append(
                {
                    "parent_id": ev.parent_id,
                    "p": ev.p,
                    "z": list(ev.z),
                    "z_prime": list(ev.z_prime),
                    "x_prime": list(ev.x_prime),
                    "new_label_index": ev.new_label_index,
                    "children_ids": list(ev.children_ids),
                    "mu_parent": ev.mu_parent,
                    "mu_children": list(ev.mu_children),
                }
            )
    return doc, trace_doc


def _report_text(doc: dict[str, Any]) -> str:
    lines = [
        f"dimension {doc['dimension']}, base multiplicity "
        f"{doc['base']['multiplicity']}",
        f"final cones: {doc['final']['count']}",
        f"max dilation: {doc['max_dilation']}",
        f"theorem bound: {doc['bounds']['theorem']:.6g}",
    ]
    if doc["bounds"]["simplified"] is not None:
        lines.append(f"simplified bound: {doc['bounds']['simplified']:.6g}")
    lines.append(f"slack ratio: {doc['bounds']['slack_ratio']:.6g}")
    for name, ok in doc["certificates"].items():
        lines.append(f"{name}: {'pass' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _certificates_pass(doc: dict[str, Any]) -> bool:
    return all(doc["certificates"].values())


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        cone = parse_input(text)
    except (ValueError, ConetriError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = RunConfig(
        generators=cone.generators,
        verify=args.verify,
        keep_trace=args.trace is not None,
        isolated_cones=args.isolated_cones,
    )
    doc, trace_doc = run_pipeline(cfg)
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(trace_doc, fh, indent=2)
            fh.write("\n")
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(_report_text(doc), end="")
    if args.verify and not _certificates_pass(doc):
        failing = [k for k, v in doc["certificates"].items() if not v]
        print(f"certificate failure: {', '.join(failing)}", file=sys.stderr)
        return 2
    return 0


def _cmd_random(args: argparse.Namespace) -> int:
    if args.count < 1:
        print("error: --count must be positive", file=sys.stderr)
        return 1
    runs = []
    all_pass = True
    for i in range(args.count):
        rng = random.Random(args.seed * 1_000_003 + i)
        try:
            cone = random_cone(args.dim, args.bound, rng)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        cfg = RunConfig(generators=cone.generators, verify=args.verify)
        doc, _ = run_pipeline(cfg)
        ok = _certificates_pass(doc)
        all_pass = all_pass and ok
        runs.append(
            {
                "index": i,
                "base": doc["base"],
                "final_count": doc["final"]["count"],
                "max_dilation": doc["max_dilation"],
                "slack_ratio": doc["bounds"]["slack_ratio"],
                "pass": ok,
            }
        )
    summary = {
        "seed": args.seed,
        "dimension": args.dim,
        "bound": args.bound,
        "count": args.count,
        "all_pass": all_pass,
        "runs": runs,
    }
    print(json.dumps(summary, indent=2))
    if args.verify and not all_pass:
        return 2
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    try:
        thm, cor = final_bounds(args.mu, args.dim)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    doc = {
        "mu": args.mu,
        "dimension": args.dim,
        "theorem": thm,
        "simplified": cor,
        "mu_ceiling": intermediate_mu_ceiling(args.mu),
    }
    print(json.dumps(doc, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conetri",
        description="Triangulate a simplicial lattice cone into unimodular "
        "cones with certified generator lengths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="triangulate the cone in a JSON file")
    p_run.add_argument("input", help="path to the cone description")
    p_run.add_argument(
        "--verify",
        action="store_true",
        help="exit 2 unless every certificate passes",
    )
    p_run.add_argument("--trace", help="write the subdivision trace to this file")
    p_run.add_argument("--format", choices=("json", "text"), default="json")
    p_run.add_argument(
        "--isolated-cones",
        action="store_true",
        help="refine each power-of-two cone against itself and add the "
        "per-cone generation length certificate",
    )
    p_run.set_defaults(func=_cmd_run)

    p_rand = sub.add_parser("random", help="run a seeded random campaign")
    p_rand.add_argument("--dim", type=int, required=True)
    p_rand.add_argument("--bound", type=int, required=True)
    p_rand.add_argument("--count", type=int, required=True)
    p_rand.add_argument("--seed", type=int, required=True)
    p_rand.add_argument("--verify", action="store_true")
    p_rand.set_defaults(func=_cmd_random)

    p_bounds = sub.add_parser("bounds", help="print the length ceilings")
    p_bounds.add_argument("--mu", type=int, required=True)
    p_bounds.add_argument("--dim", type=int, required=True)
    p_bounds.set_defaults(func=_cmd_bounds)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
