"""Command-line entry point.

Exit codes: 0 success or verdict true, 1 verdict false (witness printed),
2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analyzer, bohr_gap, core_sets, covering, fourier, freiman, reports, suites, torus_lab
from .core_sets import IntSet
from .errors import InvariantError, PreconditionError, ResourceError
from .progressions import GAP2, Progression1D

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    pass


# --- file formats ------------------------------------------------------------


def parse_set_text(text: str, source: str = "<input>") -> IntSet:
    """One integer per line; '#' comments; optional first header line base=10|16."""
    base = 10
    values = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("base="):
            if seen_data:
                raise InputError(f"{source}:{lineno}: base header must precede data")
            try:
                base = int(line[5:])
            except ValueError:
                base = 0
            if base not in (10, 16):
                raise InputError(f"{source}:{lineno}: base must be 10 or 16, got {line[5:]!r}")
            continue
        seen_data = True
        try:
            values.append(int(line, base))
        except ValueError:
            raise InputError(f"{source}:{lineno}: not a base-{base} integer: {line!r}") from None
    return IntSet(values)


def read_set(path: str) -> IntSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_set_text(text, path)


def read_values(path: str) -> list:
    out = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(float(Fraction(line)))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{path}:{lineno}: not a number: {line!r}") from None
    return out


def write_set(S: IntSet, stream) -> None:
    for x in S:
        stream.write(f"{x}\n")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def parse_gap_json(path: str) -> GAP2:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return GAP2(int(doc["a0"]), int(doc["a1"]), int(doc["a2"]), int(doc["L1"]), int(doc["L2"]))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad GAP2 file {path}: {exc}") from None


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def emit(args, kind: str, payload, text_lines: list) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(reports.dumps(kind, payload) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


# --- subcommands -------------------------------------------------------------


def cmd_sumset(args) -> int:
    A = read_set(args.inp)
    if args.signed:
        try:
            l, m = (int(t) for t in args.signed.split(","))
        except ValueError:
            raise InputError("--signed expects l,m") from None
        S = core_sets.signed_combination(A, l, m)
    elif args.iterate:
        S = core_sets.iterated_sumset(A, args.iterate)
    else:
        B = read_set(args.b) if args.b else A
        S = core_sets.difference_set(A, B) if args.minus else core_sets.sumset(A, B)
    write_set(S, sys.stdout)
    return EXIT_OK


def cmd_doubling(args) -> int:
    A = read_set(args.inp)
    S = core_sets.difference_set(A, A) if args.minus else core_sets.sumset(A, A)
    # unreduced so the set sizes stay visible
    sys.stdout.write(f"{len(S)}/{len(A)}\n")
    return EXIT_OK


def cmd_energy(args) -> int:
    sys.stdout.write(f"{core_sets.additive_energy(read_set(args.inp))}\n")
    return EXIT_OK


def _default_target(X: IntSet) -> Progression1D:
    if X.min > 0:
        return Progression1D.interval(1, X.max)
    return Progression1D.interval(X.min, X.max)


def cmd_cover(args) -> int:
    X = read_set(args.inp)
    strict = not args.no_precheck
    if args.lemma == "lev":
        rep = covering.lev_verify(X)
        emit(args, "lev", rep, [
            f"k={rep.params.k} r={rep.params.r} l={rep.params.l}",
            f"even_interval={rep.params.even_interval()} contained={rep.contains_even}",
            f"odd_interval={rep.params.odd_interval()} contained={rep.contains_odd}",
        ])
        return EXIT_OK if rep.ok else EXIT_FALSE
    if args.lemma == "5x4":
        if args.p:
            try:
                a0, v, L = (int(t) for t in args.p.split(","))
            except ValueError:
                raise InputError("--p expects a0,v,L") from None
            P = Progression1D(a0, v, L)
        else:
            P = _default_target(X)
        res = covering.cover_5_4(X, P, strict=strict)
    elif args.lemma == "9x8":
        res = covering.cover_9_8(X, strict=strict)
    else:
        if not args.q:
            raise InputError("--lemma 41x40 needs --q Q.json")
        res = covering.cover_41_40(X, parse_gap_json(args.q), strict=strict)
    lines = [f"holds={res.holds}"]
    if not res.holds:
        lines.append(f"witness={res.witness}")
    emit(args, f"cover_{args.lemma}", res, lines)
    return EXIT_OK if res.holds else EXIT_FALSE


def cmd_freiman(args) -> int:
    A, B = read_set(args.a), read_set(args.b)
    phi = [int(x) for x in read_values(args.map)]
    res = freiman.verify_freiman_isomorphism(A, B, phi, args.k)
    lines = [f"isomorphism={res.holds}"]
    if not res.holds:
        lines.append(f"witness_indices={res.witness_indices}")
        lines.append(f"witness={res.witness} image={res.image}")
    emit(args, "freiman", res, lines)
    return EXIT_OK if res.holds else EXIT_FALSE


def _bohr_spec(args) -> bohr_gap.BohrSpec:
    sigma = parse_fraction(args.sigma)
    if args.cf:
        try:
            terms = tuple(int(t) for t in args.cf.replace(";", ",").split(",") if t.strip())
        except ValueError:
            raise InputError(f"bad continued fraction {args.cf!r}") from None
        return bohr_gap.BohrSpec(terms, sigma, args.n)
    if not args.alpha:
        raise InputError("one of --alpha or --cf is required")
    return bohr_gap.BohrSpec(parse_fraction(args.alpha), sigma, args.n)


def cmd_bohr(args) -> int:
    spec = _bohr_spec(args)
    if args.action == "set":
        B = bohr_gap.bohr_set(spec)
        if args.json:
            emit(args, "bohr_set", {"spec": spec, "set": B}, [])
        else:
            write_set(B, sys.stdout)
        return EXIT_OK
    ext = bohr_gap.extract_gap(spec)
    emit(args, "bohr_extract", {"spec": spec, "extraction": ext}, [
        f"progression={ext.progression}",
        f"method={ext.certificate.method} size={ext.certificate.size} "
        f"bound={fmt(ext.certificate.size_bound)} certified={ext.certificate.ok}",
    ])
    return EXIT_OK


def cmd_norms(args) -> int:
    f = fourier.GridFunction(read_values(args.inp))
    fn = {"l2": fourier.l2_norm, "u2": fourier.u2_norm_direct, "u2fft": fourier.u2_norm_fourier}[args.which]
    sys.stdout.write(f"{fn(f):.15g}\n")
    return EXIT_OK


def cmd_torus(args) -> int:
    if args.action == "kneser":
        res = suites.kneser_suite(args.trials, args.seed, ms=(args.m,), ds=(args.d,), lam=args.lam)
        emit(args, "kneser_suite", {"trials": res.trials, "violations": len(res.failures), "stats": res.stats}, [
            f"trials={res.trials} violations={len(res.failures)}",
            f"calibration_constant={res.stats['calibration_constant']} "
            f"smallest_constant_needed={res.stats['smallest_constant_needed']:.6g}",
        ])
        return EXIT_OK if res.ok else EXIT_FALSE
    _, _, rep = torus_lab.lipschitz_sandwich(parse_fraction(args.center), parse_fraction(args.halfwidth),
                                             parse_fraction(args.tau), args.m)
    emit(args, "sandwich", rep, [
        f"sandwich={rep.sandwich_ok}",
        f"gap={rep.gap:.6g} bound={rep.gap_bound:.6g}",
        f"lipschitz={rep.lipschitz:.6g} bound={rep.lipschitz_bound:.6g}",
    ])
    return EXIT_OK if rep.ok else EXIT_FALSE


def cmd_analyze(args) -> int:
    A = read_set(args.inp)
    rep = analyzer.dichotomy_check(A, parse_fraction(args.delta), parse_fraction(args.eps),
                                   parse_fraction(args.min_frac))
    lines = [f"branch={rep.branch}", f"sigma={fmt(rep.sigma)}"]
    if rep.witness is not None:
        lines += [f"witness={rep.witness}", f"density={fmt(rep.density)}"]
    emit(args, "structure", rep, lines)
    return EXIT_OK


def _verify_doc(doc: dict, A) -> list:
    kind, rep = doc["kind"], doc["report"]
    errs = []
    if kind == "structure":
        if A is None:
            return ["structure reports need --in"]
        report = analyzer.StructureReport(rep["branch"], rep["sigma"], rep["witness"], rep["density"],
                                          rep["params"])
        errs += analyzer.verify_report(A, report)
    elif kind == "bohr_extract":
        s = rep["spec"]
        alpha = tuple(s["alpha"]) if isinstance(s["alpha"], list) else s["alpha"]
        spec = bohr_gap.BohrSpec(alpha, s["sigma"], s["N"])
        P = rep["extraction"]["progression"]
        B = bohr_gap.bohr_set(spec).as_set()
        E = P.elements()
        if any(x not in B for x in E):
            errs.append("progression leaves the Bohr set")
        if isinstance(P, GAP2) and len(E) != P.box_size:
            errs.append("GAP2 is not proper")
        if len(E) < spec.sigma * spec.N / bohr_gap.SIZE_DIVISOR:
            errs.append("progression below the size bound")
    elif kind.startswith("cover_"):
        if A is None:
            return ["cover reports need --in"]
        if not rep["holds"] and rep["witness"] is not None:
            l, m = {"cover_5x4": (5, 4), "cover_9x8": (9, 8), "cover_41x40": (41, 40)}[kind]
            if rep["witness"] in core_sets.signed_combination(A, l, m):
                errs.append("witness lies in the signed combination")
    else:
        errs.append(f"no verifier for report kind {kind!r}")
    return errs


def cmd_verify(args) -> int:
    try:
        doc = reports.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot load report {args.report}: {exc}") from None
    A = read_set(args.inp) if args.inp else None
    errs = _verify_doc(doc, A)
    for e in errs:
        sys.stderr.write(f"verify: {e}\n")
    sys.stdout.write("verified\n" if not errs else "FAILED\n")
    return EXIT_OK if not errs else EXIT_FALSE


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smalldoubling", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker cap (computation is single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sumset", help="A+B, A-B, hA or lA-mA")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--b")
    s.add_argument("--minus", action="store_true")
    s.add_argument("--iterate", type=int)
    s.add_argument("--signed")
    s.set_defaults(func=cmd_sumset)

    s = sub.add_parser("doubling", help="|A+A|/|A| or |A-A|/|A|")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--minus", action="store_true")
    s.set_defaults(func=cmd_doubling)

    s = sub.add_parser("energy", help="additive energy")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_energy)

    s = sub.add_parser("cover", help="interval extraction and lX-mX covers")
    s.add_argument("--lemma", choices=["lev", "5x4", "9x8", "41x40"], required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--q", help="GAP2 JSON for 41x40")
    s.add_argument("--p", help="a0,v,L of the target AP for 5x4")
    s.add_argument("--no-precheck", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("freiman", help="Freiman isomorphism check")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--map", required=True, help="file with phi(i) for i = 0..n-1, one per line")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_freiman)

    s = sub.add_parser("bohr", help="Bohr sets and progressions inside them")
    s.add_argument("action", choices=["set", "extract"])
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha")
    g.add_argument("--cf")
    s.add_argument("--sigma", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bohr)

    s = sub.add_parser("norms", help="l2 / U2 norms of a function on [N]")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--which", choices=["l2", "u2", "u2fft"], required=True)
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("torus", help="torus grid suites")
    tsub = s.add_subparsers(dest="action", required=True)
    k = tsub.add_parser("kneser")
    k.add_argument("--m", type=int, required=True)
    k.add_argument("--d", type=int, choices=[1, 2], required=True)
    k.add_argument("--trials", type=int, required=True)
    k.add_argument("--lambda", dest="lam", type=float, required=True)
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_torus)
    w = tsub.add_parser("sandwich")
    w.add_argument("--center", required=True)
    w.add_argument("--halfwidth", required=True)
    w.add_argument("--tau", required=True)
    w.add_argument("--m", type=int, required=True)
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_torus)

    s = sub.add_parser("analyze", help="expansion / dense AP / dense GAP2")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--eps", required=True)
    s.add_argument("--min-frac", default="1/8")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("verify", help="re-check a JSON report")
    s.add_argument("--report", required=True)
    s.add_argument("--in", dest="inp")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_RESOURCE
    except InvariantError as exc:
        sys.stderr.write(f"internal check failed: {exc}\n")
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
