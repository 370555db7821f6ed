"""Command line front end.

Exit codes: 0 clean or positive verdict, 1 negative verdict (or failing
suite), 2 parse error, 3 unknown verdict, 4 schema error, 5 validation error,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import weights as W
from .classify import Report, Verdict, decide
from .fileformat import LoadError, curated_path, load_instance, load_point, rational_str
from .finitegroup import ClosureBoundExceeded
from .groupmodel import (DEFAULT_CLOSURE_BOUND, GroupSpec, ad_image, component_closure,
                         min_omega_in_coset, omega)
from .oracle import run_invariant_suite
from .stabilizer import DEFAULT_SAMPLE_COUNT, SamplingPlan, stabilizer_at

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_UNKNOWN = 3
EXIT_SCHEMA = 4
EXIT_VALIDATION = 5
EXIT_USAGE = 64

_LOAD_EXIT = {"parse": EXIT_PARSE, "schema": EXIT_SCHEMA, "validation": EXIT_VALIDATION}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _multiset_str(P: W.WeightMultiset) -> str:
    items = [f"{_vec(w)}" + (f"^{k}" if k > 1 else "") for w, k in P.entries]
    return "{" + ", ".join(items) + "}"


def _yes(b: bool) -> str:
    return "yes" if b else "no"


def _theta(theta) -> list:
    return [rational_str(x) for x in theta]


# ------------------------------------------------------------------ commands

def analyze(spec: GroupSpec, bound: int) -> dict:
    P = spec.weights
    m = spec.torus_rank
    levels = {q: W.is_q_stable(P, q) for q in (1, 2, 3)}
    dec = W.decompose(P)
    comps = []
    for c in dec.components:
        r = W.span_rank(c)
        comps.append({"weights": [list(map(str, w)) for w in c.vectors()], "norm": c.norm(), "span_dim": r,
                      "norm_is_dim_plus_2": c.norm() == r + 2})
    img = ad_image(spec, bound)
    cosets = []
    for c in component_closure(spec, bound):
        w, theta = min_omega_in_coset(spec, c)
        g = spec.element(theta, c)
        cls = omega(spec, g)
        cosets.append({"ad": c.ad.tolist(), "line_perm": list(c.line_perm), "conj": list(c.line_conj),
                       "min_omega": w, "witness_theta": _theta(theta), "witness_in_Omega": cls.in_Omega})
    return {
        "torus_rank": m,
        "cyclotomic_order": spec.cyclotomic_order,
        "real_dim": spec.real_dim,
        "P": [[list(map(str, w)), k] for w, k in P.entries],
        "norm": P.norm(),
        "stable": {str(q): v for q, v in levels.items()},
        "stability_level": W.stability_level(P),
        "components": comps,
        "norm_is_m_plus_2": P.norm() == m + 2,
        "ad_image": sorted(A.tolist() for A in img.matrices),
        "ad_image_is_plus_minus_E": img.equals_plus_minus_E,
        "cosets": cosets,
    }


def analyze_text(spec: GroupSpec, a: dict) -> str:
    P = spec.weights
    lines = [f"torus rank m = {a['torus_rank']}, N = {a['cyclotomic_order']}, dim V = {a['real_dim']}",
             f"P = {_multiset_str(P)}  (‖P‖ = {a['norm']})"]
    lines.append("; ".join(f"{q}-stable: {_yes(v)}" for q, v in a["stable"].items()))
    lines.append(f"2-stable: {_yes(a['stable']['2'])}; components: {len(a['components'])}; "
                 f"‖P‖ = m + 2: {_yes(a['norm_is_m_plus_2'])}")
    for i, c in enumerate(a["components"]):
        ws = ", ".join("(" + ",".join(w) + ")" for w in c["weights"])
        lines.append(f"  component {i}: {{{ws}}}  ‖Q‖ = {c['norm']}, dim<Q> = {c['span_dim']}")
    lines.append(f"ad image: {len(a['ad_image'])} matrices; equals {{E, -E}}: {_yes(a['ad_image_is_plus_minus_E'])}")
    for i, c in enumerate(a["cosets"]):
        lines.append(f"  coset {i}: ad = {c['ad']}, perm = {c['line_perm']}, min omega = {c['min_omega']} "
                     f"at theta = ({', '.join(map(str, c['witness_theta']))})")
    return "\n".join(lines)


def report_text(r: Report) -> str:
    head = r.verdict.value
    if r.reason:
        head += f" ({r.reason.value})"
    if r.qualifiers:
        head += " [" + ", ".join(r.qualifiers) + "]"
    out = [f"verdict: {head}"]

    def ev(items, indent):
        for e in items:
            mark = {True: "pass", False: "FAIL", None: "info"}[e.passed]
            out.append(f"{indent}{mark:4} {e.key}: {e.detail}")

    ev(r.evidence, "  ")
    for f in r.factors:
        extra = f" ({f.reason.value})" if f.reason else ""
        out.append(f"  factor {f.index} [{f.kind}, m = {f.torus_rank}, dim = {f.real_dim}]: {f.verdict.value}{extra}")
        ev(f.evidence, "    ")
    for n in r.notes:
        out.append(f"  note: {n}")
    return "\n".join(out)


def verdict_exit(v: Verdict) -> int:
    if v in (Verdict.MANIFOLD, Verdict.HOMOLOGY_ONLY):
        return EXIT_OK
    if v is Verdict.UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_NEGATIVE


def stab_dict(spec: GroupSpec, res) -> dict:
    out: dict = {"finite": res.is_finite}
    if res.is_finite:
        out["order"] = len(res.elements)
        out["elements"] = [{"ad": g.component.ad.tolist(), "line_perm": list(g.component.line_perm),
                            "conj": list(g.component.line_conj), "theta": _theta(g.torus_offset),
                            "in_Omega": omega(spec, g).in_Omega} for g in res.elements]
    else:
        out["identity_component_dim"] = res.identity_component.dimension
        out["cosets_meeting"] = len(res.cosets)
    return out


def stab_text(d: dict) -> str:
    if not d["finite"]:
        return (f"stabilizer is infinite: identity component of dimension {d['identity_component_dim']}, "
                f"meets {d['cosets_meeting']} coset(s)")
    lines = [f"stabilizer order {d['order']}"]
    for e in d["elements"]:
        lines.append(f"  ad = {e['ad']}, perm = {e['line_perm']}, theta = ({', '.join(map(str, e['theta']))})"
                     f"{'  [Omega]' if e['in_Omega'] else ''}")
    return "\n".join(lines)


# ------------------------------------------------------------------ entry

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--sampling-count", type=int, default=argparse.SUPPRESS,
                        help=f"random points per support (default {DEFAULT_SAMPLE_COUNT})")
    common.add_argument("--closure-bound", type=int, default=argparse.SUPPRESS,
                        help=f"maximum number of cosets (default {DEFAULT_CLOSURE_BOUND})")
    p = _Parser(prog="orbitspace", parents=[common],
                description="Decide whether V/G is a topological or homological manifold.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, helptext in (("analyze", "weights, stability, decomposition, ad image, min omega per coset"),
                           ("decide", "full classification report")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("instance", help="instance JSON file, or curated:<name>")
    sp = sub.add_parser("stab", parents=[common], help="stabilizer of a point")
    sp.add_argument("instance")
    sp.add_argument("--point", required=True, help="point JSON file")
    sp = sub.add_parser("verify", parents=[common], help="run the randomized invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=None, help="cases per check (default: built-in counts)")
    return p


def _resolve(path: str) -> str:
    return str(curated_path(path.split(":", 1)[1])) if path.startswith("curated:") else path


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(build_parser().format_usage() + "orbitspace: error: a command is required")
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    as_json = getattr(args, "json", False)
    bound = getattr(args, "closure_bound", DEFAULT_CLOSURE_BOUND)

    def emit(data, text):
        print(json.dumps(data, indent=2) if as_json else text, file=out)

    if args.command == "verify":
        rep = run_invariant_suite(args.seed, args.count)
        data = {"seed": rep.seed, "passed": rep.passed,
                "cases": [{"name": c.name, "checked": c.checked, "failures": c.failures} for c in rep.cases]}
        emit(data, "\n".join(rep.lines() or [f"empty suite (seed {args.seed})"]))
        return EXIT_OK if rep.passed else EXIT_NEGATIVE

    try:
        inst = load_instance(_resolve(args.instance))
        spec = inst.spec
        if args.command == "analyze":
            a = analyze(spec, bound)
            emit(a, analyze_text(spec, a))
            return EXIT_OK
        if args.command == "stab":
            res = stabilizer_at(spec, load_point(args.point, spec), bound)
            d = stab_dict(spec, res)
            emit(d, stab_text(d))
            return EXIT_OK
        plan = inst.sampling or SamplingPlan()
        if hasattr(args, "sampling_count"):
            plan = SamplingPlan(args.sampling_count, plan.seed)
        rep = decide(spec, plan, bound)
        emit(rep.to_dict(), report_text(rep))
        return verdict_exit(rep.verdict)
    except LoadError as e:
        if as_json:
            print(json.dumps(e.to_dict()), file=out)
        print(f"orbitspace: {e}", file=sys.stderr)
        return _LOAD_EXIT[e.kind]
    except FileNotFoundError as e:
        print(f"orbitspace: parse error: cannot read {e.filename}", file=sys.stderr)
        return EXIT_PARSE
    except ClosureBoundExceeded as e:
        print(f"orbitspace: {e}; raise --closure-bound", file=sys.stderr)
        return EXIT_UNKNOWN


def main() -> None:
    sys.exit(run())
