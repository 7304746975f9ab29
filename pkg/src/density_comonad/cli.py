"""Command-line interface.

Every verdict line starts with ``RESULT:`` followed by key=value pairs.
Exit status: 0 success, 1 negative verdict, 2 usage or parse error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import classes, density, equivalence, params
from .comonad import LawReport
from .errors import CapExceeded, OutOfRange, ParseError, SignatureMismatch, UnsupportedConfiguration
from .homsearch import HomQuery, count_homs, count_monos, enumerate_homs
from .iso import canonical_form
from .structures import load, save, serialize

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _emit(out, **kv):
    out.write("RESULT: " + " ".join(f"{k}={v}" for k, v in kv.items()) + "\n")


def _family(args) -> density.GeneratorFamily:
    if args.gen:
        gens = tuple(load(p) for p in args.gen)
        connected = all(g.is_connected() for g in gens)
        return density.GeneratorFamily.of(*gens, requires_connected=connected)
    if not args.cls:
        raise UsageError("give a class with --class or generator files with --gen")
    if args.max is None:
        raise UsageError("--class needs --max")
    try:
        spec = classes.class_spec(args.cls)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    return classes.generators(spec, args.max)


def _load_corpus(path: str):
    if os.path.isdir(path):
        names = sorted(f for f in os.listdir(path) if not f.startswith("."))
        return [load(os.path.join(path, f)) for f in names], names
    return [load(path)], [os.path.basename(path)]


# ---------------------------------------------------------------------------
# commands


def cmd_hom(args, out):
    A, B = load(args.source), load(args.target)
    if args.list:
        homs = enumerate_homs(HomQuery(A, B, args.mode, args.limit))
        for h in homs:
            out.write(" ".join(map(str, h.map)) + "\n")
        _emit(out, **{f"{args.mode}_count": len(homs)})
        return EXIT_OK
    if args.mode == "hom":
        n = count_homs(A, B)
    elif args.mode == "mono":
        n = count_monos(A, B)
    else:
        n = len(enumerate_homs(HomQuery(A, B, "iso")))
    _emit(out, **{f"{args.mode}_count": n})
    return EXIT_OK


def cmd_apply(args, out):
    fam = _family(args)
    B = load(args.structure)
    d = density.apply(fam, B, args.cap_carrier)
    if args.output:
        save(d.carrier, args.output)
    extra = ({"edges": len(d.carrier.edges)} if d.carrier.sig.graph_mode
             else {"tuples": sum(d.carrier.num_tuples)})
    _emit(out, blocks=len(d.blocks), elements=d.size, **extra)
    return EXIT_OK


def cmd_coalgebra(args, out):
    fam = _family(args)
    X = load(args.structure)
    method = args.method
    if method == "auto":
        method = "decomposition" if fam.requires_connected else "search"
    if method == "decomposition":
        co = density.coalgebra_by_decomposition(fam, X, args.cap_carrier)
    else:
        co = density.coalgebra_by_search(fam, X, args.search_max, args.cap_carrier)
    if co is None:
        _emit(out, coalgebra="no", method=method)
        return EXIT_NEGATIVE
    used = co.witnesses or tuple(sorted({c.gen for c in co.cells}))
    _emit(out, coalgebra="yes", method=method,
          grade_witnesses=",".join(fam.names[i] for i in used) or "-")
    return EXIT_OK


def _law_chunk(payload):
    fam, corpus, labels, cap, square_cap = payload
    C = density.DensityComonad(fam, cap, square_cap)
    return density.check_comonad_laws(fam, corpus, labels, C, dc1=False)


def cmd_laws(args, out):
    fam = _family(args)
    corpus, labels = _load_corpus(args.corpus)
    C = density.DensityComonad(fam, args.cap_carrier, args.cap_square)
    if args.jobs > 1 and len(corpus) > 1:
        payloads = [(fam, [B], [lb], args.cap_carrier, args.cap_square) for B, lb in zip(corpus, labels)]
        report = LawReport()
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for part in pool.map(_law_chunk, payloads):
                report.merge(part)
        density.check_dc1(fam, corpus, labels, C, report)
    else:
        report = density.check_comonad_laws(fam, corpus, labels, C)
    for law, status in report.by_law().items():
        _emit(out, law=law, status=status)
    for r in report.failures():
        _emit(out, law=r.law, structure=r.structure, status="FAIL", witness=repr(r.witness).replace(" ", ""))
    if not report.passed:
        return EXIT_NEGATIVE
    return EXIT_OK if report.complete else EXIT_CAP


def cmd_classify(args, out):
    try:
        spec = classes.class_spec(args.cls)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    G = load(args.structure)
    member = classes.membership(spec, G)
    _emit(out, **{"class": args.cls, "member": _yes(member)})
    return EXIT_OK if member else EXIT_NEGATIVE


def cmd_param(args, out):
    try:
        fn = params.parameter(args.name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    G = load(args.structure)
    _emit(out, **{args.name: params.format_ext(fn(G))})
    return EXIT_OK


def cmd_kappa(args, out):
    try:
        params.parameter(args.param)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    gf = params.graded_family(args.param, args.maxsize)
    G = load(args.structure)
    k, co = params.coalgebra_number_witness(gf, G)
    grade = f"{args.param}<={params.format_ext(k)}" if co is not None else "none"
    _emit(out, kappa=params.format_ext(k), grade=grade)
    return EXIT_OK


def cmd_equiv(args, out):
    A, B = load(args.a), load(args.b)
    rel = args.relation
    if rel == "cospectral":
        verdict = equivalence.cospectral(A, B)
    elif rel == "fractional":
        verdict = equivalence.fractional_iso(A, B)
    elif rel == "doublecover":
        verdict = equivalence.double_cover_iso(A, B)
    elif rel.startswith("homvec:"):
        parts = rel.split(":")
        if len(parts) != 3 or not parts[2].isdigit():
            raise UsageError("use homvec:<class>:<n>")
        if parts[1] == "cycles":
            fam = equivalence.cycle_family(3, int(parts[2]))
        else:
            try:
                fam = classes.generators(classes.class_spec(parts[1]), int(parts[2]))
            except KeyError as e:
                raise UsageError(e.args[0]) from None
        va, vb = equivalence.hom_vector(fam, A), equivalence.hom_vector(fam, B)
        verdict = va.counts == vb.counts
        _emit(out, homvec_a=str(va).replace(" ", ""), homvec_b=str(vb).replace(" ", ""))
    else:
        raise UsageError(f"unknown relation {rel!r}")
    _emit(out, relation=rel, equivalent=_yes(verdict))
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_report(args, out):
    A, B = load(args.a), load(args.b)
    rows = equivalence.relation_report(A, B, args.max)
    out.write(f"{'row':<10} {'hom-equal':<10} {'oracle':<12} {'oracle-value':<13} verdict\n")
    for r in rows:
        ov = "-" if r.oracle_value is None else _yes(r.oracle_value)
        out.write(f"{r.name:<10} {_yes(r.hom_equal):<10} {r.oracle:<12} {ov:<13} {r.verdict}\n")
    for r in rows:
        ov = "-" if r.oracle_value is None else _yes(r.oracle_value)
        _emit(out, row=r.name, hom_equal=_yes(r.hom_equal), oracle=r.oracle, oracle_value=ov,
              verdict=r.verdict.replace(" ", "_"), bound=r.bound)
    return EXIT_NEGATIVE if any(r.verdict == "contradiction" for r in rows) else EXIT_OK


def generate_corpus(max_size: int, out_dir: str) -> list[str]:
    """One file per isomorphism class of graphs <= max_size, named by a content hash."""
    graphs = classes.enumerate_graphs(max_size)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for G in graphs:
        text = serialize(canonical_form(G))
        name = hashlib.sha256(text.encode()).hexdigest()[:16] + ".g"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
        written.append(name)
    return sorted(written)


def cmd_generate(args, out):
    files = generate_corpus(args.max_size, args.out_dir)
    _emit(out, files=len(files), dir=args.out_dir)
    return EXIT_OK


def cmd_subdivide(args, out):
    G = classes.subdivided_clique(args.n, args.p)
    if args.output:
        save(G, args.output)
        _emit(out, vertices=G.size, edges=len(G.edges))
    else:
        # keep stdout a loadable structure
        out.write(serialize(G))
        _emit(sys.stderr, vertices=G.size, edges=len(G.edges))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_family(p):
    p.add_argument("--class", dest="cls", help="built-in class, e.g. cycles, trees, td<=2")
    p.add_argument("--max", type=int, help="generator size bound for --class")
    p.add_argument("--gen", action="append", help="generator file (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dd-comonad", description="Density comonads over finite structures.")
    ap.add_argument("--cap-carrier", type=int, default=density.DEFAULT_CARRIER_CAP,
                    help="bound on |D(B)| (default %(default)s)")
    ap.add_argument("--cap-square", type=int, default=density.DEFAULT_SQUARE_CAP,
                    help="bound on |D(D(B))| (default %(default)s)")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for law checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hom", help="count or list homomorphisms")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--mode", choices=("hom", "mono", "iso"), default="hom")
    p.add_argument("--list", action="store_true")
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("apply", help="build the density structure D(B)")
    _add_family(p)
    p.add_argument("structure")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("coalgebra", help="decide whether a structure admits a coalgebra")
    _add_family(p)
    p.add_argument("structure")
    p.add_argument("--method", choices=("auto", "decomposition", "search"), default="auto")
    p.add_argument("--search-max", type=int, default=8, help="largest universe the search accepts")
    p.set_defaults(func=cmd_coalgebra)

    p = sub.add_parser("laws", help="check comonad laws over a corpus")
    _add_family(p)
    p.add_argument("--corpus", required=True, help="structure file or directory")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("classify", help="class membership")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--max", type=int, help="unused; accepted for symmetry")
    p.add_argument("structure")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("param", help="evaluate a graph parameter")
    p.add_argument("name")
    p.add_argument("structure")
    p.set_defaults(func=cmd_param)

    p = sub.add_parser("kappa", help="coalgebra number over parameter grades")
    p.add_argument("param")
    p.add_argument("maxsize", type=int)
    p.add_argument("structure")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("equiv", help="test one equivalence relation")
    p.add_argument("--relation", required=True,
                   help="cospectral, fractional, doublecover or homvec:<class>:<n>")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("report", help="hom-vector verdicts next to oracle verdicts")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max", type=int, default=5)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate", help="write all graphs up to a size, one file per class")
    p.add_argument("max_size", type=int)
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("subdivide", help="emit a subdivided clique")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_subdivide)
    return ap


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ParseError, OutOfRange, SignatureMismatch, UnsupportedConfiguration,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
