"""Command-line entry point: ``finitetype <subcommand> --config FILE``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import constructions
from .classes import build
from .dimensions import attainable_set
from .errors import EXIT_CODES, FiniteTypeError
from .estimators import LqSpectrum, check_ifs
from .ifs import as_fraction, dump_config, format_fraction
from .net import DEFAULT_CAP, closure
from .oracle import empirical_local_dim, empirical_lq
from .spectra import DEFAULT_Q


def _num(x) -> str:
    return f"{float(x):.12g}"


def _emit(out, name: str, text: str) -> None:
    """Write ``text`` to out/name, or to stdout when no directory is given."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)


def _analysis(args):
    ifs, spec = check_ifs(args.config)
    omega = closure(ifs, args.cap)
    graph = build(omega)
    return ifs, spec, omega, graph


def format_dimset(graph, dimset, spec=None) -> str:
    lines = []
    for c in dimset.components:
        line = (f"class={c.class_id} kind={c.kind} "
                f"inner=[{_num(c.inner[0])},{_num(c.inner[1])}] "
                f"outer=[{_num(c.outer[0])},{_num(c.outer[1])}]")
        if c.essential:
            line += " essential=true"
        if c.expr:
            line += f" expr={c.expr}"
        lines.append(line)
    for i, p in enumerate(dimset.pieces()):
        lines.append(f"piece={i} classes=[{','.join(map(str, p.class_ids))}] "
                     f"inner=[{_num(p.inner[0])},{_num(p.inner[1])}] "
                     f"outer=[{_num(p.outer[0])},{_num(p.outer[1])}]")
    if spec is not None:
        by_class = {c.class_id: c for c in dimset.components}
        groups = {}
        for cid, ks in constructions.blocks_of_classes(graph, spec).items():
            for k in ks:
                groups.setdefault(k, []).append(cid)
        for k in sorted(groups):
            cs = [by_class[c] for c in groups[k]]
            lo, hi = min(c.inner[0] for c in cs), max(c.inner[1] for c in cs)
            lines.append(f"block=K{k} classes=[{','.join(map(str, groups[k]))}] "
                         f"dims=[{_num(lo)},{_num(hi)}]")
    lines.append(f"status={dimset.status}")
    return "\n".join(lines) + "\n"


def format_classes(graph) -> str:
    return graph.format()


def format_omega(omega, matrices: bool = False) -> str:
    if not matrices:
        return omega.format()
    lines = [omega.format().rstrip("\n")]
    for vid, pos, cid, M in omega.edge_list():
        lines.append(f"T({vid + 1}#{pos + 1} -> {cid + 1}) =")
        lines.append(M.format())
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> None:
    _, spec, omega, graph = _analysis(args)
    dimset = attainable_set(graph, args.L, args.Lc)
    _emit(args.out, "omega.txt", format_omega(omega))
    _emit(args.out, "classes.txt", format_classes(graph))
    _emit(args.out, "dimset.txt", format_dimset(graph, dimset, spec))


def cmd_dump_omega(args) -> None:
    _, _, omega, _ = _analysis(args)
    _emit(args.out, "omega.txt", format_omega(omega, args.matrices))


def cmd_dump_classes(args) -> None:
    _, _, _, graph = _analysis(args)
    _emit(args.out, "classes.txt", format_classes(graph))


def cmd_dimset(args) -> None:
    _, spec, _, graph = _analysis(args)
    _emit(args.out, "dimset.txt", format_dimset(graph, attainable_set(graph, args.L, args.Lc), spec))


def cmd_spectra(args) -> None:
    est = LqSpectrum(args.cap, args.L, args.Lc, args.qmin, args.qmax, args.qstep).fit(args.config)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "lower", "upper", "active"])
    for q, lo, hi, a in est.curve_.rows():
        w.writerow([_num(q), _num(lo), _num(hi), a])
    _emit(args.out, "tau.csv", buf.getvalue())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["component", "alpha", "f"])
    for label, a, f in est.multifractal_.rows():
        w.writerow([label, _num(a), _num(f)])
    _emit(args.out, "f.csv", buf.getvalue())
    lines = []
    for i, c in enumerate(est.crossings_):
        q = _num(c.q) if c.q is not None else "bracketed"
        lines.append(f"q{i}={q} bracket=[{_num(c.bracket[0])},{_num(c.bracket[1])}] "
                     f"left={c.left} right={c.right}")
    _emit(args.out, "crossings.txt", "".join(line + "\n" for line in lines))
    _emit(args.out, "multifractal.txt", f"concave={str(est.multifractal_.concave).lower()}\n")


def _parse_block_probs(text: str) -> list:
    out = []
    for entry in text.split(","):
        parts = [as_fraction(p) for p in entry.split(":")]
        out.append(tuple(parts) if len(parts) > 1 else parts[0])
    return out


def cmd_construct(args) -> None:
    if args.select:
        sel = constructions.select_probabilities(args.kind, args.R, L=args.L, Lc=args.Lc)
        ifs, spec = sel.ifs, sel.spec
    else:
        if args.block_probs is None:
            raise SystemExit("construct: --block-probs is required unless --select is given")
        make = constructions.multipoint if args.kind == "multipoint" else constructions.multiinterval
        ifs, spec = make(args.R, _parse_block_probs(args.block_probs),
                         as_fraction(args.p_star) if args.p_star else None)
    constructions.verify_requirements(ifs, spec, cap=args.cap)
    text = dump_config(spec.to_config())
    if args.out is not None and Path(args.out).suffix in (".yaml", ".yml"):
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    else:
        _emit(args.out, "config.yaml", text)


def _parse_depths(text):
    if text is None:
        return None
    lo, hi = (int(v) for v in text.split(":"))
    return range(lo, hi + 1)


def cmd_oracle(args) -> None:
    ifs, _ = check_ifs(args.config)
    lines = []
    for x in args.x or []:
        e = empirical_local_dim(ifs, as_fraction(x), _parse_depths(args.depths), args.level)
        lines.append(f"x={format_fraction(as_fraction(x))} dim={_num(e.value)} spread={_num(e.spread)}")
    for q in args.q or []:
        e = empirical_lq(ifs, float(q), _parse_depths(args.depths))
        lines.append(f"q={_num(q)} tau={_num(e.value)} spread={_num(e.spread)}")
    _emit(args.out, "oracle.txt", "\n".join(lines) + ("\n" if lines else ""))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finitetype",
                                     description="Local dimensions and spectra of finite-type self-similar measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True, depths=True):
        if config:
            p.add_argument("--config", required=True, help="YAML file describing the IFS")
        p.add_argument("--out", default=None, help="output directory (default: stdout)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure size limit")
        if depths:
            p.add_argument("--L", type=int, default=None, help="outer-bracket word length")
            p.add_argument("--Lc", type=int, default=None, help="inner-bracket cycle length")

    common(sub.add_parser("analyze", help="write omega.txt, classes.txt and dimset.txt"))
    p = sub.add_parser("dump-omega", help="reduced characteristic vectors and children")
    common(p, depths=False)
    p.add_argument("--matrices", action="store_true", help="also print every transition matrix")
    common(sub.add_parser("dump-classes", help="loop classes and the essential class"), depths=False)
    common(sub.add_parser("dimset", help="attainable local dimensions"))

    p = sub.add_parser("spectra", help="write tau.csv, f.csv, crossings.txt and multifractal.txt")
    common(p)
    p.add_argument("--qmin", type=float, default=DEFAULT_Q[0])
    p.add_argument("--qmax", type=float, default=DEFAULT_Q[1])
    p.add_argument("--qstep", type=float, default=DEFAULT_Q[2])

    p = sub.add_parser("construct", help="generate a construction config")
    p.add_argument("kind", choices=["multipoint", "multiinterval"])
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--block-probs", default=None,
                   help="comma-separated block probabilities; t:s pairs for Cantor blocks")
    p.add_argument("--p-star", default=None, help="shared probability (default: solved)")
    p.add_argument("--select", action="store_true", help="choose block probabilities automatically")
    common(p, config=False)

    p = sub.add_parser("oracle", help="brute-force local dimensions and tau estimates")
    common(p, depths=False)
    p.add_argument("--x", nargs="*", help="rational points, e.g. 1/2")
    p.add_argument("--q", nargs="*", type=float, help="q values")
    p.add_argument("--depths", default=None, help="depth range lo:hi")
    p.add_argument("--level", type=int, default=None, help="refinement level for local dims")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "dump-omega": cmd_dump_omega,
    "dump-classes": cmd_dump_classes,
    "dimset": cmd_dimset,
    "spectra": cmd_spectra,
    "construct": cmd_construct,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except FiniteTypeError as exc:
        name = type(exc).__name__
        print(f"error: {name}: {exc}", file=sys.stderr)
        return EXIT_CODES.get(name, 1)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
