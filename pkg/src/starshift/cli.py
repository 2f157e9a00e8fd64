"""Command-line interface for dictionary analysis and operator checks."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .dictionary import (
    DEFAULT_WINDOW_LIMIT,
    Dictionary,
    WindowMap,
    WindowTooLarge,
    classify_dictionary,
    kernel_elements,
    progressive_mask,
)
from .gf2poly import Gf2Poly, recurrence_kernel
from .ledrappier import LEDRAPPIER, complete_patch, conjugate_vertical, stack_orbit
from .matrixmodel import verify_relations
from .starcomm import (
    DynamicalSystem,
    certify_system,
    independence_profile,
    star_commute_windows,
    star_commutes_on_kernel,
)
from .words import Word


def _yesno(flag) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def _emit(payload: dict, as_json: bool, render) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        render(payload)


def _analysis_payload(d: Dictionary) -> dict:
    record = classify_dictionary(d)
    payload = {
        "kind": "analysis",
        "record": record.to_json_dict(),
        "kernel": None,
        "independence_vs_shift": None,
        "certificate": None,
    }
    if not record.progressive:
        return payload
    payload["kernel"] = [str(s) for s in kernel_elements(d)]
    decision = star_commute_windows(WindowMap.shift(), d.to_window_map())
    indep = {
        "strongly_independent": None,
        "independent": None,
        "star_commute": None,
        "diagram_search": decision.star,
        "shared_kernel_witness": None,
    }
    poly = record.polynomial
    if poly is not None and not poly.is_zero and poly.degree >= 1:
        profile = independence_profile(Gf2Poly.t(), poly)
        indep["strongly_independent"] = profile.strongly_independent
        indep["independent"] = profile.independent
        indep["star_commute"] = profile.star_commute
        if profile.shared_kernel_witness is not None:
            indep["shared_kernel_witness"] = str(profile.shared_kernel_witness)
        system = DynamicalSystem.from_polys([Gf2Poly.t(), poly], ["sigma", "theta"])
        payload["certificate"] = certify_system(system).to_json_dict()
    payload["independence_vs_shift"] = indep
    return payload


def _render_analysis(payload: dict) -> None:
    rec = payload["record"]
    print("dictionary: %s" % rec["members"])
    print(
        "window %d  progressive %s  admissible %s  linear %s"
        % (
            rec["window"],
            _yesno(rec["progressive"]),
            _yesno(rec["admissible"]),
            _yesno(rec["linear"]),
        )
    )
    if rec["polynomial"] is not None:
        print("polynomial: %s" % rec["polynomial"])
    if rec["fiber_count"] is not None:
        print("fiber count: %d" % rec["fiber_count"])
    if payload["kernel"] is not None:
        print("kernel: %s" % ", ".join(payload["kernel"]))
    indep = payload["independence_vs_shift"]
    if indep is not None:
        print(
            "vs shift: strongly independent %s, independent %s, "
            "star-commute %s, diagram search %s"
            % (
                _yesno(indep["strongly_independent"]),
                _yesno(indep["independent"]),
                _yesno(indep["star_commute"]),
                _yesno(indep["diagram_search"]),
            )
        )
        if indep["shared_kernel_witness"] is not None:
            print("shared kernel witness: %s" % indep["shared_kernel_witness"])
    cert = payload["certificate"]
    if cert is not None:
        print(
            "system (sigma, theta): valid %s, minimal %s, topologically free %s"
            % (_yesno(cert["valid"]), _yesno(cert["minimal"]), _yesno(cert["topologically_free"]))
        )
        print("simplicity: %s" % cert["simplicity_report"])


def _classify_range(n: int, lo: int, hi: int):
    """Classify one contiguous range of completion choices (pool worker)."""
    progressive = 0
    admissible = []
    for choice in range(lo, hi):
        record = classify_dictionary(Dictionary(n, progressive_mask(n, choice)))
        if record.progressive:
            progressive += 1
        if record.admissible:
            admissible.append((record.members, str(record.polynomial)))
    return progressive, admissible


def _classification_payload(n: int, jobs: int, max_n: int) -> dict:
    if n < 2 or n > max_n:
        raise WindowTooLarge("window %d outside 2..%d" % (n, max_n))
    choices = 1 << (1 << (n - 1))
    shards = []
    if jobs <= 1 or choices <= jobs:
        shards.append(_classify_range(n, 0, choices))
    else:
        step = -(-choices // jobs)
        bounds = [(lo, min(lo + step, choices)) for lo in range(0, choices, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            shards = list(pool.map(_classify_range, *zip(*[(n, lo, hi) for lo, hi in bounds])))
    progressive = sum(s[0] for s in shards)
    rows = sorted((members, poly) for s in shards for members, poly in s[1])
    admissible = []
    stars = 0
    for members, poly_text in rows:
        star = star_commutes_on_kernel(Gf2Poly.t(), Gf2Poly.parse(poly_text))
        stars += star
        admissible.append(
            {"members": members, "polynomial": poly_text, "star_commutes_with_shift": star}
        )
    return {
        "kind": "classification",
        "window": n,
        "counts": {
            "total": 1 << (1 << n),
            "progressive": progressive,
            "admissible": len(admissible),
            "star_commuting_with_shift": stars,
        },
        "admissible": admissible,
    }


def _render_classification(payload: dict) -> None:
    c = payload["counts"]
    print(
        "window %d: %d dictionaries, %d progressive, %d admissible, "
        "%d star-commuting with the shift"
        % (payload["window"], c["total"], c["progressive"], c["admissible"], c["star_commuting_with_shift"])
    )
    for row in payload["admissible"]:
        print(
            "  %s  polynomial %s  star-commutes %s"
            % (row["members"], row["polynomial"], _yesno(row["star_commutes_with_shift"]))
        )


def _kernel_payload(dict_text: str | None, poly_text: str | None) -> dict:
    if dict_text is not None:
        d = Dictionary.from_text(dict_text)
        elements = kernel_elements(d)
        source = {"dictionary": str(d)}
    else:
        poly = Gf2Poly.parse(poly_text)
        elements = recurrence_kernel(poly)
        source = {"polynomial": str(poly)}
    return {"kind": "kernel", "source": source, "elements": [str(s) for s in elements]}


def _render_kernel(payload: dict) -> None:
    label, value = next(iter(payload["source"].items()))
    print("%s %s: %d kernel elements" % (label, value, len(payload["elements"])))
    for s in payload["elements"]:
        print("  %s" % s)


def _certificate_payload(poly_texts) -> dict:
    polys = [Gf2Poly.parse(t) for t in poly_texts]
    system = DynamicalSystem.from_polys(polys)
    cert = certify_system(system)
    return {
        "kind": "certificate",
        "generators": [str(p) for p in polys],
        "certificate": cert.to_json_dict(),
    }


def _render_certificate(payload: dict) -> None:
    cert = payload["certificate"]
    print("generators: %s" % ", ".join(payload["generators"]))
    print("valid: %s" % _yesno(cert["valid"]))
    for w in cert["witnesses"]:
        print("  shared factor %s between %s and %s" % (w["gcd"], w["pair"][0], w["pair"][1]))
    print("minimal: %s  (%s)" % (_yesno(cert["minimal"]), cert["minimality_argument"]))
    print("topologically free: %s" % _yesno(cert["topologically_free"]))
    print("simplicity: %s" % cert["simplicity_report"])


def _relations_payload(poly_texts, level: int) -> dict:
    polys = [Gf2Poly.parse(t) for t in poly_texts]
    system = DynamicalSystem.from_polys(polys)
    report = verify_relations(system, level)
    payload = {"kind": "relations", "generators": [str(p) for p in polys]}
    payload.update(report.to_json_dict())
    return payload


def _render_relations(payload: dict) -> None:
    print("generators: %s" % ", ".join(payload["generators"]))
    print("level: %d" % payload["level"])
    for name in sorted(payload["relations"]):
        print("  %s: %s" % (name, "holds" if payload["relations"][name] else "FAILS"))
    for detail in payload["pair_details"]:
        print(
            "  pair (%s, %s): gcd %s, coprime %s, star relation %s"
            % (
                detail["pair"][0],
                detail["pair"][1],
                detail["gcd"],
                _yesno(detail["coprime"]),
                "holds" if detail["holds"] else "FAILS",
            )
        )
    for name, w in sorted(payload["witnesses"].items()):
        print(
            "  witness for %s: entry (%s, %s) = %s for pair (%s)"
            % (name, w["row"], w["col"], w["value"], ", ".join(w["pair"]))
        )


def _ledrappier_payload(base_text: str, steps: int | None) -> dict:
    base = Word.from_str(base_text)
    conjugate = conjugate_vertical(base)
    if steps is None:
        rows = [str(r) for r in complete_patch(base).rows]
    else:
        rows = [str(r) for r in stack_orbit(LEDRAPPIER, base, steps)]
    agree = len(rows) < 2 or rows[1] == str(conjugate.prefix(len(rows[1])))
    payload = {
        "kind": "ledrappier",
        "base": str(base),
        "rows": rows,
        "routes_agree": agree,
    }
    if steps is not None:
        payload["steps"] = steps
    return payload


def _render_ledrappier(payload: dict) -> None:
    for row in payload["rows"]:
        print(row)
    print("routes agree: %s" % _yesno(payload["routes_agree"]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starshift",
        description="Analyze progressive dictionaries, their window maps and operator models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p = sub.add_parser("analyze", help="classify one dictionary and its shift interaction")
    p.add_argument("dictionary", help="comma-separated member words, e.g. 01,10")
    add_json(p)

    p = sub.add_parser("classify", help="enumerate and classify all dictionaries of one window")
    p.add_argument("window", type=int)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for the enumeration")
    p.add_argument("--max-n", type=int, default=DEFAULT_WINDOW_LIMIT, help="largest allowed window")
    add_json(p)

    p = sub.add_parser("kernel", help="list the sequences a map sends to zero")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dict", dest="dict_text", help="dictionary members, e.g. 01,10")
    group.add_argument("--poly", dest="poly_text", help="polynomial over GF(2), e.g. 1+t^2")
    add_json(p)

    p = sub.add_parser("certify", help="certify minimality and topological freeness")
    p.add_argument("polys", nargs="+", help="generator polynomials, e.g. t 1+t+t^2")
    add_json(p)

    p = sub.add_parser("verify", help="check the operator relations at a matrix level")
    p.add_argument("polys", nargs="+", help="generator polynomials")
    p.add_argument("--level", type=int, required=True, help="matrix level (word length)")
    add_json(p)

    p = sub.add_parser("ledrappier", help="complete a triangle patch over the two-cell dictionary")
    p.add_argument("base", help="base row bits, e.g. 1101")
    p.add_argument("--steps", type=int, default=None, help="stack this many rows instead")
    add_json(p)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            payload = _analysis_payload(Dictionary.from_text(args.dictionary))
            _emit(payload, args.json, _render_analysis)
        elif args.command == "classify":
            payload = _classification_payload(args.window, args.jobs, args.max_n)
            _emit(payload, args.json, _render_classification)
        elif args.command == "kernel":
            payload = _kernel_payload(args.dict_text, args.poly_text)
            _emit(payload, args.json, _render_kernel)
        elif args.command == "certify":
            payload = _certificate_payload(args.polys)
            _emit(payload, args.json, _render_certificate)
        elif args.command == "verify":
            payload = _relations_payload(args.polys, args.level)
            _emit(payload, args.json, _render_relations)
            if not all(payload["relations"].values()):
                return 1
        elif args.command == "ledrappier":
            payload = _ledrappier_payload(args.base, args.steps)
            _emit(payload, args.json, _render_ledrappier)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
