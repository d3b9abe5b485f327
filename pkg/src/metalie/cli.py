"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails (or another library
error occurs), 2 on unparsable input.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import re
import sys
from typing import List, Optional, Sequence, Tuple

from . import jsonio
from .errors import MetalieError, ParseError, VerificationFailure
from .ext import DirectExtension, clear_denominators, discriminate, localize
from .freelie import context, express_in_CF, gamma, in_fitting_F, normalize
from .matlie import MatContext, left_normed
from .parsing import parse_lie, parse_local_mat, parse_module, parse_poly
from .ring import Field
from .ualg import ConcreteAlgebra, phi_one_plus_f, presentation


def _field(text: str) -> Field:
    try:
        return Field.from_tag(text)
    except (MetalieError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _max_index(texts: Sequence[str], letter: str) -> int:
    return max((int(m) for t in texts for m in re.findall(rf"{letter}(\d+)", t)), default=0)


def _context(args, texts: Sequence[str], m0: bool = True) -> MatContext:
    nvars = args.vars or max(_max_index(texts, "x"), 1)
    rank = args.module_rank or max(_max_index(texts, "u"), 1)
    return MatContext(nvars, rank, args.field, m0)


def _algebra(args, extra: Sequence[str] = ()) -> ConcreteAlgebra:
    """The algebra given by --gens, or the image of the free algebra of rank --rank."""
    if args.gens:
        ctx = _context(args, list(args.gens) + [t.split("&")[0] for t in extra])
        return ConcreteAlgebra.parse(ctx, args.gens)
    ctx = context(args.rank or 2, args.field)
    return ConcreteAlgebra(ctx, [ctx.generator(i) for i in range(1, ctx.nvars + 1)])


def _emit(args, text: str, kind: str, payload: dict) -> None:
    if args.json:
        print(jsonio.dumps(jsonio.envelope(kind, payload)))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_normalize(args) -> int:
    t = parse_lie(args.term, args.rank)
    nf = normalize(t, args.field)
    _emit(args, str(nf), "normal-form", {
        "term": args.term,
        "normal_form": str(nf),
        "linear": {f"a{i}": args.field.fmt(c) for i, c in sorted(nf.linear.items())},
        "monomials": {str(m): args.field.fmt(c) for m, c in sorted(nf.quad.items())},
    })
    return 0


def cmd_embed(args) -> int:
    t = parse_lie(args.term, args.rank)
    rank = args.rank or max(t.max_index(), 1)
    g = gamma(t, rank, args.field)
    _emit(args, str(g), "embedding", {"term": args.term, "rank": rank, "image": str(g)})
    return 0


def cmd_bracket(args) -> int:
    ctx = _context(args, args.elems, m0=False)
    elems = [ctx.parse(t) for t in args.elems]
    res = left_normed(elems)
    _emit(args, str(res), "bracket", {"factors": [str(e) for e in elems], "product": str(res)})
    return 0


def cmd_fit(args) -> int:
    if not args.gens:
        rank = args.rank or max(_max_index([args.elem], "a"), 1)
        t = parse_lie(args.elem, rank)
        inside = in_fitting_F(t, rank, args.field)
        coords = {f"a{p}*a{q}": str(g) for (p, q), g in express_in_CF(t, rank, args.field).items()} if inside else {}
        lines = [f"in Fit(F): {'yes' if inside else 'no'}"] + [f"  {k}: {v}" for k, v in coords.items()]
        _emit(args, "\n".join(lines), "fitting", {"element": args.elem, "in_fitting": inside, "coordinates": coords})
        return 0
    A = _algebra(args, [args.elem])
    x = A.ctx.parse(args.elem)
    dec = A.decompose(x)
    inside = dec is not None and A.in_fit(x)
    lines = [f"in algebra: {'yes' if dec is not None else 'no'}", f"in Fit(A): {'yes' if inside else 'no'}"]
    payload = {"element": str(x), "in_algebra": dec is not None, "in_fitting": inside}
    if dec is not None:
        c, h = dec
        payload["a_coordinates"] = [A.field.fmt(k) for k in c]
        payload["b_coordinates"] = [str(g) for g in h]
        lines.append(f"coordinates: a = [{', '.join(payload['a_coordinates'])}], b = [{', '.join(payload['b_coordinates'])}]")
    _emit(args, "\n".join(lines), "fitting", payload)
    return 0


def cmd_present(args) -> int:
    P = presentation(_algebra(args))
    if args.json:
        print(jsonio.dumps(P.to_json()))
        return 0
    lines = [f"a_part: {', '.join(map(str, P.a_part)) or '-'}", f"b_part: {', '.join(map(str, P.b_part))}"]
    lines += [f"type1: [{', '.join(map(str, v))}]" for v in P.type1]
    lines += [f"type3: a{i} o a{j} = [{', '.join(map(str, v))}]" for (i, j), v in sorted(P.type3.items())]
    print("\n".join(lines))
    return 0


def cmd_endo(args) -> int:
    A = _algebra(args, args.apply)
    f = parse_poly(args.f, A.module_ring)
    phi = phi_one_plus_f(A, f)
    cg = A.canonical
    rows = [(str(g), str(phi(g))) for g in list(cg.a_part) + list(cg.b_part)]
    rows += [(t, str(phi(A.ctx.parse(t)))) for t in args.apply]
    lines = [f"1 + f = {A.module_ring.one + f}"]
    lines += [f"f_{j} = {g}" for j, g in phi.designated.items()]
    lines += [f"{a} -> {b}" for a, b in rows]
    _emit(args, "\n".join(lines), "endomorphism", {
        "f": str(f), "designated": {str(j): str(g) for j, g in phi.designated.items()},
        "images": [{"element": a, "image": b} for a, b in rows]})
    return 0


def _local_elems(args, AD):
    return [AD.include_local(parse_local_mat(t, AD.base.ctx)) for t in args.elems]


def cmd_localize(args) -> int:
    AD = localize(_algebra(args, args.elems))
    cg = AD.base.canonical
    lines = [f"a_part: {', '.join(map(str, cg.a_part))}", f"b_part: {', '.join(map(str, cg.b_part))}"]
    items = []
    for t, x in zip(args.elems, _local_elems(args, AD)):
        brackets = [str(x.bracket(AD.a(j + 1))) for j in range(AD.r)]
        lines.append(f"{x}: a = [{', '.join(AD.base.field.fmt(k) for k in x.c)}], b = [{x.h}]")
        lines += [f"  o a{j + 1} = {b}" for j, b in enumerate(brackets)]
        items.append({"element": str(x), "a_coordinates": [AD.base.field.fmt(k) for k in x.c],
                      "b_coordinates": str(x.h), "brackets_with_a": brackets})
    _emit(args, "\n".join(lines), "localisation", {"elements": items})
    return 0


def cmd_clear_denoms(args) -> int:
    AD = localize(_algebra(args, args.elems))
    elems = _local_elems(args, AD)
    res = clear_denominators(AD, elems)
    lines = [f"1 + f = {res.one_plus_f}"] + [f"{x} -> {img}" for x, img in zip(elems, res.images)]
    _emit(args, "\n".join(lines), "cleared-denominators", {
        "one_plus_f": str(res.one_plus_f),
        "images": [{"element": str(x), "image": str(img)} for x, img in zip(elems, res.images)]})
    return 0


def _extension(args) -> DirectExtension:
    A = _algebra(args, args.elems)
    s = args.module_rank_m or max(_max_index(list(args.module) + [t.partition("&")[2] for t in args.elems], "u"), 1)
    return DirectExtension(A, [parse_module(t, A.module_ring, s) for t in args.module], s)


def cmd_extend(args) -> int:
    E = _extension(args)
    elems = [E.parse_elem(t) for t in args.elems]
    lines = [f"Fit(A + M) generators: {', '.join(map(str, E.base.canonical.b_part))} ; {', '.join(map(str, E.gens))}"]
    table = []
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            p = elems[i].bracket(elems[j])
            table.append({"i": i + 1, "j": j + 1, "product": str(p)})
            lines.append(f"e{i + 1} o e{j + 1} = {p}")
    _emit(args, "\n".join(lines), "extension", {**E.to_json(), "elements": [str(x) for x in elems], "brackets": table})
    return 0


def cmd_discriminate(args) -> int:
    E = _extension(args)
    d = discriminate(E, [E.parse_elem(t) for t in args.elems])
    if args.json:
        print(jsonio.dumps(d.certificate()))
        return 0
    lines = [f"weights: {', '.join(map(str, d.weights))}", f"ladder rung: {d.avoidance.rung}", f"u = {d.u}"]
    lines += [f"{x} -> {img}" for x, img in zip(d.elems, d.images)]
    print("\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    from .verify import format_table, run_all

    only = [int(k) for k in args.only.split(",")] if args.only else None
    results = run_all(args.seed, only, args.jobs)
    if args.json:
        print(jsonio.dumps(jsonio.envelope("verification", {
            "seed": args.seed,
            "results": [{"criterion": r.index, "name": r.name, "passed": r.passed, "detail": r.detail,
                         "counterexample": r.counterexample} for r in results]})))
    else:
        print(format_table(results, args.seed))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, help="rank of the free algebra")
    common.add_argument("--field", type=_field, default=Field.from_tag("q"), help="q or fp:P")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--vars", type=int, help="number of polynomial variables (default: inferred)")
    common.add_argument("--module-rank", type=int, help="rank of the free module T (default: inferred)")
    common.add_argument("--gens", nargs="+", metavar="ELEM", help="generators '(f | u)' of the algebra")

    p = argparse.ArgumentParser(prog="metalie", description="Exact computations in matrix metabelian Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("normalize", cmd_normalize, "normal form of a Lie term").add_argument("term")
    add("embed", cmd_embed, "image of a Lie term in M0").add_argument("term")
    add("bracket", cmd_bracket, "left-normed product of matrix elements").add_argument("elems", nargs="+")
    add("fit", cmd_fit, "Fitting-radical membership").add_argument("elem")
    add("present", cmd_present, "canonical presentation")
    sp = add("endo", cmd_endo, "the (1+f)-endomorphism")
    sp.add_argument("f", help="polynomial in the module ring, without constant term")
    sp.add_argument("--apply", nargs="+", default=[], metavar="ELEM")
    add("localize", cmd_localize, "coordinates and brackets in A_Delta").add_argument("elems", nargs="*")
    add("clear-denoms", cmd_clear_denoms, "embed elements of A_Delta into A").add_argument("elems", nargs="+")
    for name, fn, help_ in (("extend", cmd_extend, "brackets in A + M"),
                            ("discriminate", cmd_discriminate, "A-discriminating homomorphism A + M -> A")):
        sp = add(name, fn, help_)
        sp.add_argument("elems", nargs="+", help="elements '(f | u) & m'")
        sp.add_argument("--module", nargs="+", required=True, metavar="M", help="generators of M inside T_s")
        sp.add_argument("--s", dest="module_rank_m", type=int, help="rank s of T_s (default: inferred)")
    sp = add("verify", cmd_verify, "run the verification suite")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def _dispatch(argv: Sequence[str], out, err) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        if e.text:
            print(f"  {e.text}\n  {' ' * e.pos}^", file=err)
        return 2
    except VerificationFailure as e:
        print(f"verification failed ({args.command}): {e}", file=err)
        if e.counterexample is not None:
            print(f"counterexample: {e.counterexample!r}", file=err)
        return 1
    except MetalieError as e:
        print(f"error: {e}", file=err)
        return 1


def run(argv: Sequence[str]) -> Tuple[int, str, str]:
    """Run a command in-process; returns (exit status, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = _dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(_dispatch(sys.argv[1:] if argv is None else argv, sys.stdout, sys.stderr))


if __name__ == "__main__":
    main()
