from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn

from polyset.config import get_settings
from polyset.exceptions import PolysetError
from polyset.fileformat import (
    parse_matrix_file,
    parse_problem,
    parse_vector_file,
    serialize_problem,
)
from polyset.instances import build_euler_problem, build_risk_problem, example1_matrices
from polyset.report import SolutionReport, emit_plot_data, serialize_solution
from polyset.setopt import SolutionStatus, check_existence, solve, standard_form
from polyset.utils import read_text

logger = logging.getLogger("polyset")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_SOLUTION = 2
EXIT_INFEASIBLE = 3

_STATUS_EXIT = {
    SolutionStatus.SOLVED: EXIT_OK,
    SolutionStatus.NO_SOLUTION: EXIT_NO_SOLUTION,
    SolutionStatus.INFEASIBLE: EXIT_INFEASIBLE,
}


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with parse errors; 2 and 3 are solver statuses
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_args(argv: list[str]) -> argparse.Namespace:
    p = _Parser(
        prog="polyset",
        description="Exact solver for polyhedral convex set optimization problems.",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="Compute a solution (S_bar, S_hat) or report why none exists.")
    s.add_argument("file", nargs="?", default="-", help="Problem file ('-' or omitted: stdin).")
    s.add_argument("--json", action="store_true", help="Write the report as JSON.")
    s.add_argument("--plot-dir", type=Path, default=None, help="Also write plot data here.")
    s.add_argument("--jobs", type=int, default=None, help="Worker processes for minimizers.")
    s.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr.")

    c = sub.add_parser("check", help="Decide existence of a solution only.")
    c.add_argument("file", nargs="?", default="-")
    c.add_argument("-v", "--verbose", action="store_true")

    f = sub.add_parser("std-form", help="Print the standard form of a problem.")
    f.add_argument("file", nargs="?", default="-")
    f.add_argument("-v", "--verbose", action="store_true")

    g = sub.add_parser("gen", help="Generate a problem file.")
    gen = g.add_subparsers(dest="instance", required=True, parser_class=_Parser)
    ba = gen.add_parser(
        "bid-ask",
        help="Risk-compensation problem from two bid-ask matrices (default: the 4-asset data).",
    )
    ba.add_argument("--pi1", type=Path, default=None, help="Bid-ask matrix at the initial time.")
    ba.add_argument("--pi2", type=Path, default=None, help="Bid-ask matrix at the terminal time.")
    ba.add_argument("--q", type=int, default=2, help="Number of eligible assets.")
    ba.add_argument("--xbar", type=Path, default=None, help="Initial portfolio (default: 0).")
    ba.add_argument("-v", "--verbose", action="store_true")
    eu = gen.add_parser("euler", help="Problem whose graph is spanned by digits of e.")
    eu.add_argument(
        "--image-rows",
        choices=["last", "first"],
        default="last",
        help="Which two matrix rows hold the image coordinates.",
    )
    eu.add_argument("-v", "--verbose", action="store_true")
    return p.parse_args(argv)


def _configure_logging(verbose: bool) -> None:
    level = logging.INFO if verbose else get_settings().log_level
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _solve(args: argparse.Namespace) -> int:
    problem = parse_problem(read_text(args.file))
    solution = solve(problem, jobs=args.jobs)
    report = SolutionReport.from_solution(solution)
    sys.stdout.write(serialize_solution(report, "json" if args.json else "text"))
    if args.plot_dir is not None and solution.status is SolutionStatus.SOLVED:
        for path in emit_plot_data(problem, solution, args.plot_dir):
            logger.info("wrote %s", path)
    return _STATUS_EXIT[solution.status]


def _check(args: argparse.Namespace) -> int:
    problem = parse_problem(read_text(args.file))
    if problem.F.is_empty():
        print("infeasible")
        return EXIT_INFEASIBLE
    if check_existence(problem):
        print("solution exists")
        return EXIT_OK
    print("no solution")
    return EXIT_NO_SOLUTION


def _std_form(args: argparse.Namespace) -> int:
    problem = parse_problem(read_text(args.file))
    sys.stdout.write(serialize_problem(standard_form(problem)))
    return EXIT_OK


def _gen(args: argparse.Namespace) -> int:
    if args.instance == "euler":
        problem = build_euler_problem(args.image_rows)
    else:
        if (args.pi1 is None) != (args.pi2 is None):
            raise ValueError("--pi1 and --pi2 must be given together")
        if args.pi1 is None:
            pi1, pi2 = example1_matrices()
        else:
            pi1 = parse_matrix_file(read_text(str(args.pi1)))
            pi2 = parse_matrix_file(read_text(str(args.pi2)))
        xbar = parse_vector_file(read_text(str(args.xbar))) if args.xbar else None
        problem = build_risk_problem(pi1, pi2, args.q, xbar)
    sys.stdout.write(serialize_problem(problem))
    return EXIT_OK


_COMMANDS = {"solve": _solve, "check": _check, "std-form": _std_form, "gen": _gen}


def main(argv: list[str] | None = None) -> int:
    args = parse_args(sys.argv[1:] if argv is None else argv)
    _configure_logging(args.verbose)
    try:
        return _COMMANDS[args.command](args)
    except (PolysetError, ValueError, OSError) as e:
        print(f"polyset: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
