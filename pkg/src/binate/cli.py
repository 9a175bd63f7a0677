"""Command-line front door: ``binate <verb> ...``.

Exit status: 0 when no verdict is "fail" (capped/unsupported print a warning),
1 when some verdict fails, 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Sequence

from . import __version__
from .a1 import UnsupportedConstruction, a1_report
from .finite import GroupTooLarge, NotInGroup, perfect_radical
from .fixtures import named_group
from .grope import (
    NotInPerfectRadical,
    f_system_connecting_map,
    f_system_level,
    f_system_size,
    grope_connecting_map,
    grope_level,
    heller_certificate,
    verify_certificate,
)
from .handles import ConjugacyUnsupported, FiniteHandle
from .hnn import ReductionBudgetExceeded
from .perm import PermutationError, parse_cycles
from .presentation import homology_report, parse_presentation, standard_presentation
from .ring import (
    NonIntegral,
    NotIdempotent,
    RingMatrix,
    augmentation,
    bass_probe,
    bass_search,
    f2_handle,
    hs_trace_element,
    hs_trace_matrix,
    kaplansky_trace,
    lambda_member,
    parse_ring_element,
    z2_handle,
)
from .suites import DEFAULT_SEED, SUITES, run_suite
from .tower import (
    DEFAULT_DEPTH_CAP,
    TowerDepthExceeded,
    abelian_witness,
    build_binate_tower,
    tower_report,
    verify_pairwise_structure,
)
from .words import WordSyntaxError

SCHEMA_VERSION = 1
VERDICTS = ("pass", "fail", "unsupported", "capped")


class UsageError(Exception):
    pass


def _v(ok: bool) -> str:
    return "pass" if ok else "fail"


# --- verbs --------------------------------------------------------------------------------


def _load_presentation(args) -> tuple[Any, dict]:
    if args.fixture:
        try:
            P = standard_presentation(args.fixture)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"unknown fixture {args.fixture!r}: {exc}") from None
        return P, {"fixture": args.fixture}
    if not args.source:
        raise UsageError("give a presentation file, inline DSL text, or --fixture")
    if os.path.isfile(args.source):
        with open(args.source, encoding="utf-8") as fh:
            text = fh.read()
        inputs = {"file": args.source}
    else:
        text = args.source
        inputs = {"inline": text}
    return parse_presentation(text), inputs


def run_homology(args) -> dict:
    P, inputs = _load_presentation(args)
    r = homology_report(P)
    return {"inputs": inputs, "results": r, "verdicts": {"snf_verified": _v(r["snf_verified"])}}


def run_grope(args) -> dict:
    results: dict[str, Any] = {}
    verdicts: dict[str, str] = {}
    inputs: dict[str, Any] = {}
    if args.levels is not None:
        n = args.levels
        inputs["levels"] = n
        results["grope_sizes"] = [len(grope_level(k)) for k in range(n + 1)]
        verdicts["grope_sizes"] = _v(results["grope_sizes"] == [2 ** k for k in range(n + 1)])
        verdicts["grope_maps_zero"] = _v(all(grope_connecting_map(k).is_zero() for k in range(n)))
    if args.sequence:
        seq = _int_list(args.sequence)
        inputs["sequence"] = seq
        r = len(seq)
        sizes = [len(f_system_level(seq, k)) for k in range(r + 1)]
        results["f_system_sizes"] = sizes
        verdicts["f_system_sizes"] = _v(sizes == [f_system_size(seq, k) for k in range(r + 1)])
        verdicts["f_system_maps_zero"] = _v(all(f_system_connecting_map(seq, k).is_zero() for k in range(r)))
    if args.certificate:
        if not args.group or not args.element:
            raise UsageError("--certificate needs --group and --element")
        G = _group(args.group)
        try:
            x = parse_cycles(args.element, G.degree)
        except PermutationError as exc:
            raise UsageError(f"bad element {args.element!r}: {exc}") from None
        inputs.update(group=args.group, element=args.element, depth=args.depth)
        try:
            cert = heller_certificate(G, x, args.depth)
            results["certificate"] = cert.to_json()
            verdicts["certificate_verified"] = _v(verify_certificate(cert))
        except (NotInPerfectRadical, NotInGroup) as exc:
            results["certificate"] = None
            results["reason"] = str(exc)
            verdicts["certificate_exists"] = "fail"
    if args.cover:
        if not args.group:
            raise UsageError("--cover needs --group")
        G = _group(args.group)
        R = perfect_radical(G)
        certs = [heller_certificate(G, x, args.depth) for x in R.sorted_elements()]
        inputs.update(group=args.group, depth=args.depth)
        results["perfect_radical_order"] = R.order
        results["certificates"] = len(certs)
        verdicts["cover_verified"] = _v(all(verify_certificate(c) for c in certs))
    if not verdicts:
        raise UsageError("grope needs --levels, --sequence, --certificate or --cover")
    return {"inputs": inputs, "results": results, "verdicts": verdicts}


def run_tower(args) -> dict:
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    unknown = set(checks) - {"binate", "pairwise", "witness"}
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    G = _group(args.base)
    inputs = {"base": args.base, "depth": args.depth, "checks": checks, "bound": args.bound}
    try:
        T = build_binate_tower(G, args.depth, depth_cap=args.depth_cap)
    except TowerDepthExceeded as exc:
        return {"inputs": inputs, "results": {"reason": str(exc)}, "verdicts": {"tower": "capped"}}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results: dict[str, Any] = {"scope": "level-n facts", "level": T.depth}
    verdicts: dict[str, str] = {}
    if "binate" in checks:
        rep = tower_report(T)
        results["binate"] = rep["checks"]
        verdicts.update({c["name"]: c["verdict"] for c in rep["checks"]})
    if "pairwise" in checks:
        if T.depth < 2:
            verdicts["pairwise"] = "unsupported"
            results["pairwise"] = "needs depth >= 2"
        else:
            rep = verify_pairwise_structure(T, 0, 1)
            results["pairwise"] = rep
            verdicts.update({f"pairwise_{c['name']}": c["verdict"] for c in rep["checks"]})
    if "witness" in checks:
        x = parse_cycles(args.x, G.degree) if args.x else max(G.generators, key=lambda g: g.order())
        if x not in G or x.is_identity():
            raise UsageError("witness element must be a nontrivial element of the base")
        rep = abelian_witness(T, x, T.depth, args.bound)
        results["witness"] = rep
        verdicts.update({f"witness_{c['name']}": c["verdict"] for c in rep["checks"]})
    return {"inputs": inputs, "results": results, "verdicts": verdicts}


def run_a1(args) -> dict:
    G = _group(args.group)
    if args.n != 1:
        try:
            from .a1 import build_a

            build_a(G, args.n)
        except UnsupportedConstruction as exc:
            return {"inputs": {"group": args.group, "n": args.n}, "results": {"reason": str(exc)},
                    "verdicts": {"construction": "unsupported"}}
    r = a1_report(G, order_bound=args.bound)
    verdicts = r.pop("verdicts")
    return {"inputs": {"group": args.group, "n": 1, "bound": args.bound}, "results": r, "verdicts": verdicts}


def _ring_backend(name: str):
    if name in ("z2", "Z2"):
        return z2_handle(), [2]
    if name in ("f2", "F2"):
        return f2_handle(), [1]
    G = _group(name)
    return FiniteHandle(G), [G.order]


def run_trace(args) -> dict:
    B, orders = _ring_backend(args.ring)
    inputs: dict[str, Any] = {"ring": args.ring}
    results: dict[str, Any] = {}
    verdicts: dict[str, str] = {}
    if args.bass_search:
        r = bass_search(2, args.height)
        inputs["bass_search_height"] = args.height
        results["bass_search"] = r
        verdicts["bass_search"] = "fail" if r["status"] == "violation" else "pass"
    if args.element:
        M = parse_ring_element(B, args.element)
        inputs["element"] = args.element
        results["element"] = str(M)
        results["augmentation"] = str(augmentation(M))
        k = kaplansky_trace(M)
        results["kaplansky"] = str(k)
        results["lambda_member"] = lambda_member(k, orders)
        try:
            hs = hs_trace_element(M)
            results["hs_trace"] = hs.to_json()
            verdicts["partial_augmentations_sum"] = _v(hs.total() == augmentation(M))
        except ConjugacyUnsupported:
            verdicts["hs_trace"] = "unsupported"
    if args.matrix:
        try:
            rows = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--matrix is not JSON: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        P = RingMatrix(B, [[parse_ring_element(B, str(x)) for x in row] for row in rows])
        inputs["matrix"] = rows
        try:
            results["hs_trace"] = hs_trace_matrix(P).to_json()
            verdicts["idempotent"] = "pass"
        except NotIdempotent as exc:
            results["witness"] = {"row": exc.row, "col": exc.col, "entry": str(exc.entry)}
            verdicts["idempotent"] = "fail"
        if args.bass and verdicts["idempotent"] == "pass":
            try:
                probe = bass_probe(P)
                results["bass_probe"] = probe
                verdicts["bass_consistent"] = _v(probe["consistent"])
            except NonIntegral as exc:
                results["bass_probe"] = str(exc)
                verdicts["bass_consistent"] = "unsupported"
    if not (args.element or args.matrix or args.bass_search):
        raise UsageError("trace needs --element, --matrix or --bass-search")
    return {"inputs": inputs, "results": results, "verdicts": verdicts}


def run_check(args) -> dict:
    if args.what == "homology":
        return run_homology(args)
    if args.what != "suite":
        raise UsageError(f"unknown check target {args.what!r}")
    if not args.source:
        raise UsageError(f"check suite needs a name: {', '.join(sorted(SUITES))}, all")
    try:
        props = run_suite(args.source, samples=args.samples, seed=args.seed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    verdicts = {}
    for p in props:
        key = f"{p['suite']}: {p['name']}" if "suite" in p else p["name"]
        verdicts[key] = p["verdict"]
    inputs = {"suite": args.source, "samples": args.samples}
    return {"inputs": inputs, "results": {"properties": props}, "verdicts": verdicts, "seed": args.seed}


def _group(text: str):
    try:
        return named_group(text)
    except (PermutationError, ValueError) as exc:
        raise UsageError(f"cannot parse group {text!r}: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# --- plumbing ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="binate", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"binate {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")
    sub = p.add_subparsers(dest="verb", required=True)

    h = sub.add_parser("homology", parents=[common], help="H_1, H_2-complex rank, deficiency")
    h.add_argument("source", nargs="?", help="presentation file or inline DSL")
    h.add_argument("--fixture", help="higman:k, epstein, higman_two_gen, torus, free:k")

    g = sub.add_parser("grope", parents=[common], help="grope counts and Heller certificates")
    g.add_argument("--levels", type=int)
    g.add_argument("--sequence", help="n_1,...,n_r for the F-system")
    g.add_argument("--certificate", action="store_true")
    g.add_argument("--cover", action="store_true", help="certify the whole perfect radical")
    g.add_argument("--group")
    g.add_argument("--element")
    g.add_argument("--depth", type=int, default=2)

    t = sub.add_parser("tower", parents=[common], help="universal binate tower checks")
    t.add_argument("--base", required=True, help="group name or generators in cycle notation")
    t.add_argument("--depth", type=int, default=2)
    t.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    t.add_argument("--check", default="binate,pairwise,witness")
    t.add_argument("--bound", type=int, default=3, help="exponent bound for the witness check")
    t.add_argument("--x", help="base element for the witness check")

    a = sub.add_parser("a1", parents=[common], help="A_1(G) construction and checks")
    a.add_argument("--group", required=True)
    a.add_argument("--n", type=int, default=1)
    a.add_argument("--bound", type=int, default=100, help="order bound for stable letters")

    r = sub.add_parser("trace", parents=[common], help="group-ring traces")
    r.add_argument("--ring", default="z2", help="z2, f2, or a finite group")
    r.add_argument("--element")
    r.add_argument("--matrix", help="JSON nested list of ring elements")
    r.add_argument("--bass", action="store_true", help="with --matrix, probe the trace against Z[e]")
    r.add_argument("--bass-search", action="store_true", help="exhaustive idempotent search over Z[Z/2]")
    r.add_argument("--height", type=int, default=2)

    c = sub.add_parser("check", parents=[common], help="run verification suites")
    c.add_argument("what", choices=["suite", "homology"])
    c.add_argument("source", nargs="?", help="suite name, or presentation for 'check homology'")
    c.add_argument("--fixture")
    c.add_argument("--samples", type=int)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


RUNNERS = {
    "homology": run_homology,
    "grope": run_grope,
    "tower": run_tower,
    "a1": run_a1,
    "trace": run_trace,
    "check": run_check,
}


def make_report(args) -> dict:
    t0 = time.perf_counter()
    try:
        body = RUNNERS[args.verb](args)
    except (GroupTooLarge, ReductionBudgetExceeded) as exc:
        body = {"inputs": {}, "results": {"reason": str(exc)}, "verdicts": {args.verb: "capped"}}
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "verb": args.verb,
        "inputs": body["inputs"],
        "results": body["results"],
        "verdicts": body["verdicts"],
        "seed": body.get("seed"),
    }
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - t0, 6)
    return report


def render(report: dict) -> str:
    lines = [f"binate {report['verb']}"]
    res = report["results"]
    for key in ("h1_text", "h2_complex", "deficiency", "snf_diag", "hs_trace", "augmentation",
                "kaplansky", "lambda_member", "abelian_subgroups", "reason"):
        if key in res:
            lines.append(f"  {key}: {res[key]}")
    if "bass_search" in res:
        b = res["bass_search"]
        lines.append(f"  bass_search: {b['idempotents']} idempotents, {b['nontrivial']} nontrivial, {b['status']}")
    for name, verdict in report["verdicts"].items():
        lines.append(f"  [{verdict}] {name}")
    if "timing_s" in report:
        lines.append(f"  time: {report['timing_s']}s")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = make_report(args)
    except (UsageError, WordSyntaxError) as exc:
        print(f"binate {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    verdicts = list(report["verdicts"].values())
    assert all(v in VERDICTS for v in verdicts), verdicts
    if args.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        print(render(report))
    soft = sorted({v for v in verdicts if v in ("capped", "unsupported")})
    if soft:
        print(f"binate: warning: some results are {', '.join(soft)}", file=sys.stderr)
    return 1 if "fail" in verdicts else 0


if __name__ == "__main__":
    sys.exit(main())
