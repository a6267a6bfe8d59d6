"""Command line entry point: ``lattice-sight <command> ...``.

Exit status is 0 on success, 1 when the library rejects the request
(e.g. a claimed forest has a visible point) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import forest as fr
from .numtheory import ggcd
from .render import FORMATS, RenderSpec, render_grid
from .visibility import (
    METHODS,
    density_report,
    is_b_visible,
    reports_to_csv,
    sieve_grid,
    sight_coefficient,
)
from .zeta import DEFAULT_TOL, zeta_int

GRAMMAR = """\
lattice-sight <command> [--b INT] [--n INT] [--cols INT] [--rows INT]
              [--rmax INT] [--smax INT] [--method brute|sieve|moebius]
              [--primes FILE] [--format pbm|svg] [--out FILE] [--threads INT]
              [--csv|--plain]

commands:
  ggcd --b B R S              generalized gcd of (R, S)
  visible --b B R S           is (R, S) b-visible
  coeff --b B R S             a = S / R^b of the sight curve a*x^b
  density --b B --n N         invisible counts on [1,N]^2 vs 1/zeta(b+1)
  table [--b 1,2,3,4] --n N   density rows for several exponents
  zeta S [--tol T]            zeta(S) for integer S >= 2
  forest construct --b B --cols N --rows M [--primes FILE]
  forest verify --b B --cols N --rows M R S
  forest search --b B --cols N --rows M --rmax X --smax Y
  render --b B --n N [--format pbm|svg] [--out FILE] [--invert]

forests are --cols wide (x-extent) and --rows tall (y-extent); a search
for 3x2 and one for 2x3 are different searches.  --primes FILE holds the
prime matrix as it is displayed: one line per row, top row first."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"{GRAMMAR}\n\n{self.prog}: error: {message}\n")
        raise SystemExit(2)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_list(text: str) -> list[int]:
    return [_positive(t) for t in text.split(",") if t.strip()]


def _tolerance(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    g = output.add_mutually_exclusive_group()
    g.add_argument("--csv", dest="output", action="store_const", const="csv")
    g.add_argument("--plain", dest="output", action="store_const", const="plain")
    output.set_defaults(output="json")

    threads = argparse.ArgumentParser(add_help=False)
    threads.add_argument("--threads", type=_positive, default=1)

    need_b = argparse.ArgumentParser(add_help=False)
    need_b.add_argument("--b", type=_positive, required=True)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("r", type=_positive)
    point.add_argument("s", type=_positive)

    dims = argparse.ArgumentParser(add_help=False)
    dims.add_argument("--cols", type=_positive, required=True)
    dims.add_argument("--rows", type=_positive, required=True)

    parser = _Parser(prog="lattice-sight", usage=GRAMMAR, add_help=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("ggcd", "visible", "coeff"):
        sub.add_parser(name, parents=[need_b, point, output])

    p = sub.add_parser("density", parents=[need_b, output, threads])
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--method", choices=METHODS, default="brute")

    p = sub.add_parser("table", parents=[output, threads])
    p.add_argument("--b", type=_positive_list, default=[1, 2, 3, 4])
    p.add_argument("--n", type=_positive, default=50)
    p.add_argument("--method", choices=METHODS, default="brute")

    p = sub.add_parser("zeta", parents=[output])
    p.add_argument("s", type=int)
    p.add_argument("--tol", type=_tolerance, default=DEFAULT_TOL)

    fp = sub.add_parser("forest")
    fsub = fp.add_subparsers(dest="forest_command", required=True, parser_class=_Parser)
    p = fsub.add_parser("construct", parents=[need_b, output])
    p.add_argument("--cols", type=_positive)
    p.add_argument("--rows", type=_positive)
    p.add_argument("--primes", metavar="FILE")
    fsub.add_parser("verify", parents=[need_b, dims, point, output])
    p = fsub.add_parser("search", parents=[need_b, dims, output, threads])
    p.add_argument("--rmax", type=_positive, required=True)
    p.add_argument("--smax", type=_positive, required=True)

    p = sub.add_parser("render", parents=[need_b])
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=FORMATS, default="pbm")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--invert", action="store_true")
    return parser


def _csv(header: list[str], rows: list[list]) -> str:
    return "\n".join(",".join(map(str, r)) for r in [header, *rows]) + "\n"


def _emit(out, args, record, csv_text: str, plain_text: str) -> None:
    if args.output == "csv":
        out.write(csv_text)
    elif args.output == "plain":
        out.write(plain_text.rstrip("\n") + "\n")
    else:
        out.write(json.dumps(record) + "\n")


def _fmt_table(reports) -> str:
    head = f"{'b':>2}  {'zeta(b+1)':>9}  {'1/zeta':>7}  {'1-1/zeta':>8}  invisible"
    lines = [head]
    for rep in reports:
        zeta = 1.0 / rep.predicted_visible_proportion
        lines.append(
            f"{rep.b:>2}  {zeta:>9.3f}  {rep.predicted_visible_proportion:>7.3f}  "
            f"{rep.predicted_invisible_proportion:>8.3f}  "
            f"{rep.invisible_count}/{rep.total} = {rep.observed_invisible_proportion:.3f}"
        )
    return "\n".join(lines)


def _read_matrix(path: str) -> fr.PrimeMatrix:
    with open(path) as fh:
        return fr.parse_prime_matrix(fh.read())


def _witness_plain(w: fr.WitnessGrid) -> str:
    # top row first, matching how forests are drawn
    lines = []
    for j in reversed(range(w.m)):
        cells = [f"{w.witness(i, j)}={w.factorizations[j][i]}" for i in range(w.n)]
        lines.append(f"s+{j}: " + "  ".join(cells))
    return "\n".join(lines)


def _dispatch(args, out) -> int:
    cmd = args.command
    if cmd == "ggcd":
        g = ggcd(args.b, args.r, args.s)
        _emit(out, args, g, _csv(["b", "r", "s", "ggcd"], [[args.b, args.r, args.s, g]]), str(g))
    elif cmd == "visible":
        v = is_b_visible(args.b, (args.r, args.s))
        text = "visible" if v else "invisible"
        _emit(out, args, v, _csv(["b", "r", "s", "visible"], [[args.b, args.r, args.s, v]]), text)
    elif cmd == "coeff":
        a = sight_coefficient(args.b, (args.r, args.s))
        rec = {"numerator": str(a.numerator), "denominator": str(a.denominator)}
        _emit(out, args, rec, _csv(["numerator", "denominator"], [[a.numerator, a.denominator]]), str(a))
    elif cmd == "density":
        rep = density_report(args.b, args.n, args.method, threads=args.threads)
        _emit(out, args, rep.to_dict(), reports_to_csv([rep]), _fmt_table([rep]))
    elif cmd == "table":
        reps = [density_report(b, args.n, args.method, threads=args.threads) for b in args.b]
        _emit(out, args, [r.to_dict() for r in reps], reports_to_csv(reps), _fmt_table(reps))
    elif cmd == "zeta":
        z = zeta_int(args.s, args.tol)
        rec = {"s": z.s, "value": z.value, "abs_error_bound": z.abs_error_bound}
        _emit(out, args, rec, _csv(list(rec), [list(rec.values())]), repr(z.value))
    elif cmd == "forest":
        return _dispatch_forest(args, out)
    elif cmd == "render":
        grid = sieve_grid(args.b, args.n)
        data = render_grid(grid, RenderSpec(args.format, args.n, args.b, args.invert))
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        else:
            out.write(data.decode("ascii"))
    return 0


def _dispatch_forest(args, out) -> int:
    sub = args.forest_command
    if sub == "construct":
        if args.primes:
            pm = _read_matrix(args.primes)
            if (args.cols or pm.n) != pm.n or (args.rows or pm.m) != pm.m:
                raise ValueError(
                    f"--cols/--rows {args.cols}x{args.rows} disagree with the "
                    f"{pm.n}x{pm.m} matrix in {args.primes}"
                )
        elif args.cols and args.rows:
            pm = fr.build_prime_matrix(args.cols, args.rows)
        else:
            raise ValueError("forest construct needs --cols and --rows, or --primes FILE")
        f = fr.construct_forest(pm, args.b)
        rec = {"forest": f.to_dict(), "prime_matrix": [[str(p) for p in row] for row in reversed(pm.rows)]}
        csv_text = _csv(
            ["b", "r", "s", "n", "m", "r_modulus", "s_modulus"],
            [[f.b, f.r, f.s, f.n, f.m, f.r_modulus, f.s_modulus]],
        )
        plain = f"anchor ({f.r}, {f.s})  r mod {f.r_modulus}  s mod {f.s_modulus}\n" + pm.to_text()
        _emit(out, args, rec, csv_text, plain)
    elif sub == "verify":
        f = fr.Forest(args.b, fr.Point(args.r, args.s), args.cols, args.rows)
        w = fr.verify_forest(f)
        rows = [
            [i, j, f.r + i, f.s + j, w.witness(i, j), str(w.factorizations[j][i])]
            for j in range(w.m)
            for i in range(w.n)
        ]
        _emit(out, args, w.to_dict(), _csv(["i", "j", "r", "s", "ggcd", "factorization"], rows), _witness_plain(w))
    elif sub == "search":
        res = fr.find_nearest_forest(
            args.b, args.cols, args.rows, args.rmax, args.smax, threads=args.threads
        )
        rows = [[r, s, res.distance_sq] for r, s in res.anchors]
        plain = "\n".join(f"({r}, {s})  distance {res.distance:.6f}" for r, s in res.anchors)
        _emit(out, args, res.to_dict(), _csv(["r", "s", "distance_sq"], rows), plain)
    return 0


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args, out)
    except (ValueError, LookupError, OSError) as exc:
        sys.stderr.write(f"lattice-sight: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
