"""Command-line interface.

Exit codes: 0 success, 2 input or validation error, 3 numerical or
regularity failure.  Vectors on the command line are comma-separated;
files use the whitespace text format of :mod:`regsimplex.textio`, with
vertices stored as columns.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Sequence, TextIO

import numpy as np

from .errors import InputError, NumericalError
from .extrapolation import ExtrapolationPlan, extrapolate
from .gradient import SampleSet, aligned_gradient, general_gradient, sample_aligned
from .simplex import (
    DEFAULT_REL_TOL,
    AlignedRegularSimplex,
    GeneralRegularSimplex,
    Orientation,
    integer_simplex,
    schoenberg_case,
)
from .testbed import FUNCTIONS, curvature_bound, get_function, h_sweep, rotated_regular_simplex, write_sweep_csv
from .textio import format_matrix, format_vector, parse_vector, read_matrix, read_vector

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

FUNCTION_CHOICES = [*FUNCTIONS, "values"]


def _orientation(text: str) -> Orientation:
    try:
        return Orientation.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vector(text: str) -> np.ndarray:
    try:
        return parse_vector(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _precision(text: str) -> int:
    p = int(text)
    if p < 1:
        raise argparse.ArgumentTypeError("precision must be a positive integer")
    return p


def _resolve_x0(args, required: bool = True) -> np.ndarray | None:
    x0 = args.x0
    n = getattr(args, "n", None)
    if x0 is None:
        if required:
            raise InputError("--x0 is required")
        return None
    if n is not None and n != x0.size:
        raise InputError(f"--n {n} does not match --x0 with {x0.size} components")
    return x0


@contextlib.contextmanager
def _output(path: str | None, stdout: TextIO):
    if path is None or path == "-":
        yield stdout
    else:
        try:
            fh = open(path, "w", encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {path!r}: {exc.strerror}") from exc
        with fh:
            yield fh


def cmd_simplex(args, stdout: TextIO) -> int:
    x0 = _resolve_x0(args)
    if args.seed is None:
        z = AlignedRegularSimplex(x0, args.h, args.orientation).matrix()
    else:
        z = rotated_regular_simplex(x0, args.h, args.orientation, seed=args.seed).vertices
    with _output(args.output, stdout) as out:
        out.write(format_matrix(z, args.precision))
    return EXIT_OK


def _values_for(args, n: int) -> np.ndarray:
    if args.values is None:
        raise InputError("--fn values needs --values FILE")
    values = read_vector(args.values)
    if values.size != n + 1:
        raise InputError(f"values file holds {values.size} numbers, expected n + 1 = {n + 1}")
    return values


def cmd_gradient(args, stdout: TextIO) -> int:
    if args.fn == "values":
        x0 = _resolve_x0(args, required=False)
        if x0 is None:
            if args.n is None:
                raise InputError("values mode needs --n or --x0 to fix the dimension")
            x0 = np.zeros(args.n)
        s = AlignedRegularSimplex(x0, args.h, args.orientation)
        samples = SampleSet(_values_for(args, s.n))
    else:
        x0 = _resolve_x0(args)
        s = AlignedRegularSimplex(x0, args.h, args.orientation)
        samples = sample_aligned(_builtin(args, x0.size), s)
    g = aligned_gradient(s, samples).g
    with _output(args.output, stdout) as out:
        out.write(format_vector(g, args.precision))
    return EXIT_OK


def cmd_gradient_general(args, stdout: TextIO) -> int:
    z = read_matrix(args.vertices)
    simplex = GeneralRegularSimplex(z, centroid=args.centroid, h=args.h)
    if args.fn == "values":
        values = _values_for(args, simplex.n)
    else:
        f = _builtin(args, simplex.n)
        values = np.array([f(simplex.vertices[:, j]) for j in range(simplex.n + 1)])
    g = general_gradient(simplex, values, rel_tol=args.rel_tol).g
    with _output(args.output, stdout) as out:
        out.write(format_vector(g, args.precision))
    return EXIT_OK


def _builtin(args, n: int):
    if args.fn == "values":
        raise InputError(f"'{args.command}' evaluates the function itself; choose a built-in --fn")
    f = get_function(args.fn)
    if f.dimension is not None and f.dimension != n:
        raise InputError(f"{f.name} is defined for n = {f.dimension}, got n = {n}")
    return f


def cmd_extrapolate(args, stdout: TextIO) -> int:
    x0 = _resolve_x0(args)
    f = _builtin(args, x0.size)
    if args.h2 is not None:
        plan = ExtrapolationPlan(args.h1, args.h2)
    else:
        plan = ExtrapolationPlan.from_eta(args.h1, args.eta)
    ex = extrapolate(f, x0, plan.h1, plan.h2, args.orientation)
    with _output(args.output, stdout) as out:
        if args.verbose:
            out.write(f"# g1 (h1 = {plan.h1!r})\n")
            out.write(format_vector(ex.g1.g, args.precision))
            out.write(f"# g2 (h2 = {plan.h2!r})\n")
            out.write(format_vector(ex.g2.g, args.precision))
            out.write(f"# g12 (eta = {plan.eta!r})\n")
        out.write(format_vector(ex.g12.g, args.precision))
    return EXIT_OK


_CASE_TEXT = {
    "i": "n even and n + 1 a perfect square",
    "ii": "n = 3 (mod 4)",
    "iii": "n = 1 (mod 4) and n + 1 a sum of two squares",
}


def cmd_integer_simplex(args, stdout: TextIO) -> int:
    xs = integer_simplex(args.n, args.orientation)
    with _output(args.output, stdout) as out:
        if args.check:
            case = schoenberg_case(args.n)
            out.write(f"# integer regular simplex exists for n = {args.n}: case ({case}), {_CASE_TEXT[case]}\n")
            out.write(f"# scale = {xs.scale}\n")
        out.write(format_matrix(xs.vertices))
    return EXIT_OK


def cmd_sweep(args, stdout: TextIO) -> int:
    x0 = _resolve_x0(args)
    f = _builtin(args, x0.size)
    h_values = [float(v) for v in args.h_list]
    if not h_values:
        raise InputError("--h-list must name at least one radius")
    L = args.lipschitz
    if L is None:
        # a sampled curvature of zero (affine f) still needs a positive L
        L = max(curvature_bound(f, x0, max(h_values)), float(np.finfo(float).tiny))
    rows = h_sweep(f, x0, args.orientation, h_values, eta=args.eta, L=L)
    with _output(args.output, stdout) as out:
        write_sweep_csv(rows, out)
    return EXIT_OK


def _h_list(text: str) -> list[float]:
    if not text.strip():
        return []
    return list(_vector(text))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regsimplex",
        description="Regular simplex construction and O(n) simplex gradients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, precision=True):
        p.add_argument("--orientation", type=_orientation, default=Orientation.MINUS, help="plus or minus (default)")
        if precision:
            p.add_argument("--precision", type=_precision, default=15, help="decimals printed (>= 17: exact round trip)")
        p.add_argument("--output", "-o", default=None, help="output file (default: standard output)")

    p = sub.add_parser("simplex", help="vertices of an aligned (or seeded rotated) regular simplex")
    p.add_argument("--n", type=int)
    p.add_argument("--x0", type=_vector, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--seed", type=int, default=None, help="emit a randomly rotated simplex instead")
    common(p)
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("gradient", help="O(n) aligned simplex gradient")
    p.add_argument("--fn", choices=FUNCTION_CHOICES, required=True)
    p.add_argument("--values", help="file of n+1 function values in vertex order")
    p.add_argument("--n", type=int)
    p.add_argument("--x0", type=_vector)
    p.add_argument("--h", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_gradient)

    p = sub.add_parser("gradient-general", help="O(n^2) gradient for a regular simplex in any orientation")
    p.add_argument("--vertices", required=True, help="n x (n+1) vertex file, vertices as columns")
    p.add_argument("--centroid", type=_vector)
    p.add_argument("--h", type=float)
    p.add_argument("--fn", choices=FUNCTION_CHOICES, default="values")
    p.add_argument("--values", help="file of n+1 function values in column order")
    p.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL)
    common(p)
    p.set_defaults(func=cmd_gradient_general)

    p = sub.add_parser("extrapolate", help="O(h^2) gradient from two aligned simplexes")
    p.add_argument("--fn", choices=FUNCTION_CHOICES, required=True)
    p.add_argument("--x0", type=_vector, required=True)
    p.add_argument("--h1", type=float, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--h2", type=float)
    grp.add_argument("--eta", type=float, default=0.5, help="h2 = eta*h1 (default 0.5)")
    p.add_argument("--verbose", "-v", action="store_true", help="also print g1 and g2")
    common(p)
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("integer-simplex", help="integer-coordinate regular simplex (n + 1 a perfect square)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", action="store_true", help="also report the Schoenberg case")
    common(p, precision=False)
    p.set_defaults(func=cmd_integer_simplex)

    p = sub.add_parser("sweep", help="gradient errors over a list of radii, as CSV")
    p.add_argument("--fn", choices=FUNCTION_CHOICES, required=True)
    p.add_argument("--x0", type=_vector, required=True)
    p.add_argument("--h-list", type=_h_list, required=True, help="comma-separated h1 values")
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--lipschitz", type=float, help="L for the error bound (default: sampled curvature)")
    common(p, precision=False)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, stdout)
    except NumericalError as exc:
        print(f"regsimplex {args.command}: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except (InputError, IndexError) as exc:
        print(f"regsimplex {args.command}: {exc}", file=stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
