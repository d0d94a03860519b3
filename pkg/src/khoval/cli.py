"""``khoval compute|verify|classify|jones``.

Exit codes: 0 success, 1 I/O error, 2 unparseable input, 3 size limit
exceeded, 4 a check failed (or classify hypotheses are not met), 5 any other
library error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from khoval.altstruct import classify_case
from khoval.complex import build_unnormalized, normalize
from khoval.cube import DEFAULT_MAX_CROSSINGS, dump_cube
from khoval.diagram import LinkDiagram, emit_pd, is_connected, parse_pd
from khoval.errors import InputError, KhovalError, LimitError, PreconditionViolated, TooManyCrossings
from khoval.homology import homology, homology_mod_p
from khoval.invariants import format_laurent, jones_kauffman, kh_polynomial, signature_gl

EXIT_IO, EXIT_PARSE, EXIT_LIMIT, EXIT_CHECK, EXIT_OTHER = 1, 2, 3, 4, 5


def _ring(text: str) -> tuple[str, int | None]:
    text = text.lower()
    if text in ("z", "q"):
        return text, None
    m = re.fullmatch(r"z/(\d+)", text)
    if m and int(m.group(1)) > 1 and all(int(m.group(1)) % k for k in range(2, int(m.group(1)))):
        return "z/p", int(m.group(1))
    raise argparse.ArgumentTypeError(f"ring must be z, q or z/p with p prime, not {text!r}")


def _read(path: str) -> LinkDiagram:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    return parse_pd(text)


class _IOFailure(Exception):
    pass


def _emit(obj, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        print(text)


def _grid(cells: dict[tuple[int, int], str]) -> str:
    """Aligned table with j down the side (descending) and i across."""
    if not cells:
        return "(zero)"
    ii = range(min(i for i, _ in cells), max(i for i, _ in cells) + 1)
    jj = sorted({j for _, j in cells}, reverse=True)
    header = ["j\\i"] + [str(i) for i in ii]
    rows = [[str(j)] + [cells.get((i, j), "") for i in ii] for j in jj]
    widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
    return "\n".join("  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip() for r in [header] + rows)


def _z_cell(rank: int, tors: tuple[int, ...]) -> str:
    parts = []
    if rank:
        parts.append("Z" if rank == 1 else f"Z^{rank}")
    parts += [f"Z/{t}" for t in tors]
    return "+".join(parts)


def _sigma(d: LinkDiagram) -> int | None:
    return signature_gl(d) if d.n == 0 or is_connected(d) else None


def cmd_compute(args) -> int:
    d = _read(args.input)
    if d.n > args.max_crossings:
        raise TooManyCrossings(f"{d.n} crossings exceeds the limit of {args.max_crossings}")
    ring, p = args.ring
    cx = normalize(build_unnormalized(d, max_crossings=args.max_crossings), d)
    h = homology(cx)
    sigma = _sigma(d)
    out: dict = {"diagram": emit_pd(d), "crossings": d.n, "components": d.components, "sigma": sigma}
    if ring == "z":
        out["ring"] = "Z"
        out["table"] = h.to_rows()
        cells = {bd: _z_cell(r, t) for bd, (r, t) in h}
    elif ring == "q":
        out["ring"] = "Q"
        out["table"] = h.rational().to_rows()
        cells = {bd: str(r) for bd, (r, _) in h.rational()}
    else:
        out["ring"] = f"Z/{p}"
        dims = homology_mod_p(cx, p)
        out["table"] = [{"i": i, "j": j, "dim": v} for (i, j), v in sorted(dims.items())]
        cells = {bd: str(v) for bd, v in dims.items()}
    khp = kh_polynomial(h, sigma) if sigma is not None and h.support() else None
    if khp is not None:
        out["polynomial"] = str(khp)
        out["p"], out["m"], out["a_p"], out["b_m"] = khp.p, khp.m, khp.a_p, khp.b_m
    text = [f"{out['diagram']}", f"crossings={d.n} components={d.components} sigma={sigma}", _grid(cells)]
    if khp is not None:
        text.append(f"Kh(Q) = {khp}")
    if args.dump_cube:
        out["cube"] = json.loads(dump_cube(d, max_crossings=args.max_crossings))
        out["complex"] = build_unnormalized(d, max_crossings=args.max_crossings).summary()
        text.append(json.dumps({"cube": out["cube"], "complex": out["complex"]}, indent=1))
    _emit(out, args.format, "\n".join(text))
    return 0


def cmd_verify(args) -> int:
    from khoval.verify import verify_corpus, verify_diagram

    if args.corpus:
        from khoval.corpus import builtin

        if args.corpus != "builtin":
            raise _IOFailure(f"unknown corpus {args.corpus!r}")
        reports = verify_corpus(builtin(), args.max_crossings, args.jobs)
    else:
        if args.input is None:
            raise _IOFailure("give an input file or --corpus builtin")
        d = _read(args.input)
        if d.n > args.max_crossings:
            raise TooManyCrossings(f"{d.n} crossings exceeds the limit of {args.max_crossings}")
        reports = [verify_diagram(args.input, d, max_crossings=args.max_crossings).to_json()]
    failed = sorted(
        r["id"]
        for r in reports
        if "error" in r or any(v["status"] == "fail" for v in r.get("predicates", {}).values())
    )
    out = {"reports": reports, "summary": {"diagrams": len(reports), "failed": failed}}
    lines = []
    for r in reports:
        if "skipped" in r:
            lines.append(f"{r['id']}: skipped ({r['skipped']})")
            continue
        lines.append(f"{r['id']} (c={r['crossings']}, sigma={r['sigma']})")
        if "error" in r:
            lines.append(f"  ERROR {r['error']}")
        for name, v in r["predicates"].items():
            lines.append(f"  {name:<20}{v['status']}")
            if v["status"] == "fail" or (args.input and "detail" in v):
                lines.append(f"  {'':<20}{json.dumps(v.get('detail'))}")
    lines.append(f"{len(reports)} diagrams, {len(failed)} failed" + (f": {', '.join(failed)}" if failed else ""))
    _emit(out, args.format, "\n".join(lines))
    return EXIT_CHECK if failed else 0


def cmd_classify(args) -> int:
    d = _read(args.input)
    try:
        res = classify_case(d)
    except PreconditionViolated as exc:
        _emit({"error": "precondition", "predicate": exc.predicate, "message": str(exc)}, args.format, str(exc))
        return EXIT_CHECK
    out = res.to_json()
    text = f"Case {res.tag}"
    if res.crossing is not None:
        text += f": crossing {res.crossing}"
    if res.clasp is not None:
        text += f": clasp {list(res.clasp)}, D' = {emit_pd(res.dprime)}"
    _emit(out, args.format, text)
    return 0


def cmd_jones(args) -> int:
    d = _read(args.input)
    poly = jones_kauffman(d, args.max_crossings)
    out = {"diagram": emit_pd(d), "jones": [{"q": e, "coeff": c} for e, c in poly.items()]}
    _emit(out, args.format, format_laurent(poly))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--max-crossings", type=int, default=DEFAULT_MAX_CROSSINGS)

    parser = argparse.ArgumentParser(prog="khoval", description="Khovanov homology of link diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="normalized Khovanov homology")
    p.add_argument("input", help="PD text or JSON file, '-' for stdin")
    p.add_argument("--ring", type=_ring, default=("z", None), help="z, q or z/p (default z)")
    p.add_argument("--dump-cube", action="store_true", help="include cube states and complex shapes")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="run the predicate battery")
    p.add_argument("input", nargs="?")
    p.add_argument("--corpus", help="'builtin' for the embedded corpus")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", parents=[common], help="case I/II/III of an alternating diagram")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("jones", parents=[common], help="Jones polynomial from the Kauffman bracket")
    p.add_argument("input")
    p.set_defaults(func=cmd_jones)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"khoval: {exc}", file=sys.stderr)
        return EXIT_IO
    except InputError as exc:
        print(f"khoval: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitError as exc:
        print(f"khoval: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except KhovalError as exc:
        print(f"khoval: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
