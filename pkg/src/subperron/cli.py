"""Command-line front end: file ingestion, analysis orchestration, and
JSON/text reports.

Exit-code contract: 0 success, 2 parse error, 3 hypothesis violated (input
not expanding, or not in the required Frobenius form), 4 iteration or
resource budget exceeded.  All floats in reports are printed with 12
significant digits so that identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import (
    CapExceededError,
    ImageOverflowError,
    MaxIterError,
    NotExpandingError,
    NotPBFrobeniusError,
    ParseError,
    SubperronError,
    ZeroColumnError,
)
from .frequencies import frequency_table, kirchhoff_check, measure_cylinder
from .matrices import (
    ExactMatrix,
    is_expanding,
    load_matrix,
    pb_frobenius_power,
    primitive_frobenius_power,
    scc_blocks,
)
from .spectral import (
    ConvergenceReport,
    block_eigenvalues,
    growth_type,
    normalized_limit,
    principal_blocks,
    principal_eigenvector,
)
from .words import blow_up, is_expanding_subst, load_substitution, stabilizing_power

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_BUDGET = 4


def round12(x: float) -> float:
    """Round to 12 significant digits (stable report serialization)."""
    return float(f"{x:.12g}")


def _vec12(v: Sequence[float]) -> list[float]:
    return [round12(float(x)) for x in v]


def _convergence_dict(report: ConvergenceReport, start: Sequence[int]) -> dict:
    return {
        "start": [int(c) for c in start],
        "limit": _vec12(report.limit),
        "eigenvalue": round12(report.eigenvalue),
        "iterations": report.iterations,
        "residual": round12(report.residual),
        "growth": {"lambda": round12(report.growth.lam),
                   "degree": report.growth.degree},
        "converged": report.converged,
    }


def _matrix_report(m: ExactMatrix, names: Sequence[str] | None = None) -> dict:
    """Analysis pipeline: SCC blocks, Frobenius powers, eigenvalues, growth
    types, principal blocks and eigenvectors."""
    dec0 = scc_blocks(m)
    t_pb, _ = pb_frobenius_power(m)
    t_pf, dec = primitive_frobenius_power(m)
    mt = m.pow(t_pf) if t_pf > 1 else m
    eigenvalues = block_eigenvalues(mt, dec)

    def label(orig: int) -> object:
        return names[orig] if names is not None else orig + 1

    blocks = []
    for i in range(dec.num_blocks):
        g = growth_type(dec, eigenvalues, i)
        blocks.append({
            "id": i + 1,
            "indices": [label(orig) for orig in dec.members(i)],
            "class": dec.classes[i].value,
            "eigenvalue": round12(eigenvalues[i]),
            "growth": {"lambda": round12(g.lam), "degree": g.degree},
        })
    report = {
        "n": m.n,
        "expanding": is_expanding(m),
        "pb_frobenius_exponent": t_pb,
        "primitive_frobenius_exponent": t_pf,
        "scc_classes": [c.value for c in dec0.classes],
        "blocks": blocks,
        "order": sorted([a + 1, b + 1] for (a, b) in dec.order),
        "dependency": {str(i + 1): sorted(j + 1 for j in dec.dependency[i])
                       for i in range(dec.num_blocks)},
    }
    try:
        principal = sorted(principal_blocks(dec, eigenvalues))
        report["principal_blocks"] = [i + 1 for i in principal]
        report["principal_eigenvectors"] = [
            {
                "block": i + 1,
                "eigenvalue": round12(pe.eigenvalue),
                "vector": _vec12(pe.vector),
            }
            for i in principal
            for pe in [principal_eigenvector(mt, dec, eigenvalues, i)]
        ]
    except ZeroColumnError as exc:
        report["principal_blocks"] = None
        report["principal_note"] = f"skipped: {exc}"
    return report


def _print_matrix_report_text(report: dict, out) -> None:
    print(f"n: {report['n']}", file=out)
    print(f"expanding: {str(report['expanding']).lower()}", file=out)
    print(f"pb-frobenius exponent: {report['pb_frobenius_exponent']}", file=out)
    print(f"primitive-frobenius exponent: {report['primitive_frobenius_exponent']}",
          file=out)
    for b in report["blocks"]:
        g = b["growth"]
        print(
            f"block B{b['id']} indices={b['indices']} class={b['class']} "
            f"eigenvalue={b['eigenvalue']:.12g} "
            f"growth=({g['lambda']:.12g})^t * t^{g['degree']}",
            file=out,
        )
    order = ", ".join(f"B{a}>B{b}" for a, b in report["order"])
    print(f"order: {order}", file=out)
    if report.get("principal_blocks"):
        ids = ", ".join(f"B{i}" for i in report["principal_blocks"])
        print(f"principal blocks: {ids}", file=out)
    if "limit" in report:
        lim = report["limit"]
        print(
            f"limit from {lim['start']}: {lim['limit']} "
            f"eigenvalue={lim['eigenvalue']:.12g} "
            f"iterations={lim['iterations']} converged={lim['converged']}",
            file=out,
        )


def cmd_analyze_matrix(args) -> int:
    m = load_matrix(args.file)
    report = {"input": str(args.file)}
    report.update(_matrix_report(m))
    if args.require_expanding and not report["expanding"]:
        print("error: matrix is not expanding", file=sys.stderr)
        return EXIT_HYPOTHESIS
    if args.vector is not None:
        try:
            v0 = [int(tok) for tok in args.vector.replace(",", " ").split()]
        except ValueError as exc:
            raise ParseError(f"invalid --vector: {exc}") from exc
        conv = normalized_limit(m, v0, tol=args.tol, max_iter=args.max_iter)
        report["limit"] = _convergence_dict(conv, v0)
        if not conv.converged:
            print(f"warning: {conv.diagnostic}", file=sys.stderr)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_matrix_report_text(report, sys.stdout)
    return EXIT_OK


def cmd_analyze_subst(args) -> int:
    s = load_substitution(args.file)
    if not is_expanding_subst(s):
        print("error: substitution is not expanding", file=sys.stderr)
        return EXIT_HYPOTHESIS
    power = stabilizing_power(s)
    m = s.incidence_matrix()
    report = {
        "input": str(args.file),
        "letters": list(s.alphabet.letters),
        "rules": {ltr: s.alphabet.decode(img)
                  for ltr, img in zip(s.alphabet.letters, s.images)},
        "stabilizing_power": power,
        "incidence": _matrix_report(m, names=s.alphabet.letters),
    }
    if args.blowup is not None:
        zs = s.power(power) if power > 1 else s
        zn, fa = blow_up(zs, args.blowup)
        mn = zn.incidence_matrix()
        dec_n = scc_blocks(mn)
        report["blowup"] = {
            "n": args.blowup,
            "alphabet_size": len(fa),
            "letters": list(zn.alphabet.letters),
            "pb_frobenius": dec_n.is_pb_frobenius(),
            "primitive": dec_n.num_blocks == 1
            and dec_n.classes[0].value == "primitive",
            "expanding": is_expanding(mn),
        }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"letters: {' '.join(s.alphabet.letters)}")
        print(f"stabilizing power: {power}")
        _print_matrix_report_text(report["incidence"], sys.stdout)
        if "blowup" in report:
            b = report["blowup"]
            print(
                f"blow-up n={b['n']}: alphabet size {b['alphabet_size']}, "
                f"pb-frobenius: {str(b['pb_frobenius']).lower()}, "
                f"primitive: {str(b['primitive']).lower()}"
            )
    return EXIT_OK


def cmd_freq(args) -> int:
    s = load_substitution(args.file)
    if not is_expanding_subst(s):
        print("error: substitution is not expanding", file=sys.stderr)
        return EXIT_HYPOTHESIS
    table = frequency_table(s, args.letter, max_len=args.max_len,
                            tol=args.tol, max_iter=args.max_iter)
    kirchhoff = kirchhoff_check(table) if args.max_len >= 2 else None
    payload = table.to_json_dict()
    payload["frequencies"] = {w: round12(f)
                              for w, f in payload["frequencies"].items()}
    payload["growth_rate"] = round12(payload["growth_rate"])
    if kirchhoff is not None:
        payload["kirchhoff_max_residual"] = round12(kirchhoff.max_residual)
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_measure(args) -> int:
    s = load_substitution(args.file)
    if not is_expanding_subst(s):
        print("error: substitution is not expanding", file=sys.stderr)
        return EXIT_HYPOTHESIS
    value = measure_cylinder(s, args.letter, args.word,
                             tol=args.tol, max_iter=args.max_iter)
    print(f"{value:#.12g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subperron",
        description=(
            "Block structure, normalized-iterate limits, and factor "
            "frequencies for non-negative integer matrices and expanding "
            "substitutions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("analyze-matrix", help="block/spectral analysis of a matrix file")
    pm.add_argument("file")
    pm.add_argument("--vector", default=None,
                    help="comma-separated start vector for the normalized limit")
    pm.add_argument("--require-expanding", action="store_true")
    pm.add_argument("--json", action="store_true")
    pm.add_argument("--tol", type=float, default=1e-10)
    pm.add_argument("--max-iter", type=int, default=20000)
    pm.set_defaults(func=cmd_analyze_matrix)

    ps = sub.add_parser("analyze-subst", help="analysis of a substitution file")
    ps.add_argument("file")
    ps.add_argument("--blowup", type=int, default=None)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(func=cmd_analyze_subst)

    pf = sub.add_parser("freq", help="frequency table for a substitution file")
    pf.add_argument("file")
    pf.add_argument("--letter", required=True)
    pf.add_argument("--max-len", type=int, default=2)
    pf.add_argument("--tol", type=float, default=1e-6)
    pf.add_argument("--max-iter", type=int, default=20000)
    pf.set_defaults(func=cmd_freq)

    pq = sub.add_parser("measure", help="invariant-measure value of a cylinder")
    pq.add_argument("file")
    pq.add_argument("--letter", required=True)
    pq.add_argument("--word", required=True)
    pq.add_argument("--tol", type=float, default=1e-6)
    pq.add_argument("--max-iter", type=int, default=20000)
    pq.set_defaults(func=cmd_measure)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotExpandingError, NotPBFrobeniusError, ZeroColumnError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (MaxIterError, CapExceededError, ImageOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SubperronError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
