"""Problem files, reports, plot data and the command line."""

import io
import json
from fractions import Fraction

import pytest

from polyset.exceptions import ProblemParseError, UnsupportedDimensionError
from polyset.fileformat import (
    parse_matrix_file,
    parse_problem,
    parse_vector_file,
    serialize_problem,
)
from polyset.instances import build_risk_problem, example1_matrices
from polyset.main import main
from polyset.polyhedron import HRep, NormalSystem, sets_equal
from polyset.report import PlotData, SolutionReport, emit_plot_data, serialize_solution
from polyset.setopt import (
    MinimizerResult,
    OrderCone,
    PolyMap,
    SetOptProblem,
    Solution,
    SolutionStatus,
    solve,
    standard_form,
)

MINIMAL = """\
polyset-problem 1
n 1
q 1
graph hrep
-1 1 <= 0
end
cone
ray 1
end
"""

INTERVAL = """\
# F(x) = [x, oo) on [0, 1]
polyset-problem 1
n 1
q 1
graph hrep
1 -1 <= 0
-1 0 <= 0
1 0 ≤ 1     # unicode sense
end
cone
ray 1
end
"""

STRIP = """\
polyset-problem 1
n 1
q 2
graph hrep
1 -1 0 <= 0
-1 0 -1 <= 0
end
cone
ray 1 0
ray 0 1
end
"""

HALFLINE = """\
polyset-problem 1
n 1
q 1
graph hrep
-1 -1 <= 0
end
cone
ray 1
end
"""

EMPTY = """\
polyset-problem 1
n 1
q 1
graph hrep
1 0 <= 0
-1 0 <= -1
end
cone
ray 1
end
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# Problem files
# ---------------------------------------------------------------------------


def test_parse_minimal_problem():
    p = parse_problem(MINIMAL)
    assert (p.n, p.q) == (1, 1)
    assert p.F.base.A == ((-1, 1),)
    assert p.F.base.b == (0,)
    assert p.C.rays == ((1,),)
    assert not p.is_standard_form


def test_parse_comments_unicode_and_equations():
    p = parse_problem(INTERVAL)
    assert len(p.F.base.A) == 3
    q = parse_problem(MINIMAL.replace("-1 1 <= 0", "-1 1 = 1/2"))
    assert q.F.base.E == ((-1, 1),)
    assert q.F.base.f == (Fraction(1, 2),)


def test_serialize_is_inverse_on_canonical_text():
    assert serialize_problem(parse_problem(MINIMAL)) == MINIMAL


def test_risk_problem_round_trips():
    p = build_risk_problem(*example1_matrices(), 2)
    back = parse_problem(serialize_problem(p))
    assert back.F.base == p.F.base
    assert back.C == p.C


def test_standard_form_round_trips_fibres():
    std = standard_form(parse_problem(STRIP))
    back = parse_problem(serialize_problem(std))
    assert back.is_standard_form
    assert back.F.y_rays == std.F.y_rays
    assert sets_equal(back.F.graph_vrep(), std.F.graph_vrep())


def test_vrep_graph_block():
    text = MINIMAL.replace("graph hrep\n-1 1 <= 0", "graph vrep\npoint 0 0\nray 0 1\nline 1 1")
    p = parse_problem(text)
    assert p.F.base.points == ((0, 0),)
    assert p.F.base.lines == ((1, 1),)
    assert parse_problem(serialize_problem(p)).F.base == p.F.base


@pytest.mark.parametrize(
    "text, line, column, message",
    [
        (MINIMAL.replace("-1 1 <= 0", "-1 <= 0"), 5, 1, "graph row 1 has 1 entries, expected 2"),
        (MINIMAL.replace("-1 1 <= 0", "-1 x <= 0"), 5, 4, "malformed numeral 'x'"),
        (MINIMAL.replace("-1 1 <= 0", "-1 1 0"), 5, 1, "exactly one of"),
        (MINIMAL.replace("cone", "cones"), 7, 1, "unknown block 'cones'"),
        (MINIMAL.replace("ray 1\n", "ray 1 1\n"), 8, 1, "cone row 1 has 2 entries, expected 1"),
        (MINIMAL.replace("polyset-problem 1", "polyset-problem 2"), 1, 17, "version"),
        (MINIMAL.replace("n 1\n", ""), 3, 1, "n and q must be declared"),
        (MINIMAL.rsplit("end", 1)[0], 7, 1, "unterminated 'cone' block"),
        ("\n".join(MINIMAL.splitlines()[:6]), 6, 1, "missing cone block"),
    ],
)
def test_parse_errors_are_positioned(text, line, column, message):
    with pytest.raises(ProblemParseError, match=message) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_parse_matrix_and_vector_files():
    assert parse_matrix_file("1 2.5\n# c\n3/4 1\n") == ((1, Fraction(5, 2)), (Fraction(3, 4), 1))
    with pytest.raises(ProblemParseError, match="expected 2") as info:
        parse_matrix_file("1 2\n3\n")
    assert info.value.line == 2
    assert parse_vector_file("1\n-2 3/2\n") == (1, -2, Fraction(3, 2))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_no_solution_json_report():
    s = solve(parse_problem(HALFLINE))
    data = json.loads(serialize_solution(SolutionReport.from_solution(s), "json"))
    assert data["status"] == "no_solution"
    assert data["Sbar"] == [] and data["Shat"] == []
    assert set(data) >= {"upper_image", "stats", "elements", "bounded"}


def test_report_renders_exact_and_decimal_values():
    element = (Fraction(6369, 10000), Fraction(-1))
    cert = MinimizerResult(x=element, target=(0,), normals=NormalSystem(), lp_solves=3, updates=1)
    s = Solution(status=SolutionStatus.SOLVED, Shat=(element,), direction_certificates=(cert,))
    report = SolutionReport.from_solution(s, places=4)
    assert report.Shat == [["6369/10000", "-1"]]
    assert report.elements[0].decimal == ["0.6369", "-1.0000"]
    assert report.elements[0].kind == "direction"
    text = serialize_solution(report)
    assert "Shat (1):" in text
    assert "(6369/10000, -1)" in text


def test_text_report_for_solved_problem():
    s = solve(parse_problem(INTERVAL))
    text = serialize_solution(SolutionReport.from_solution(s))
    assert text.startswith("status: solved\nbounded: yes\n")
    assert "Sbar (1):\n  (0)\n" in text
    assert "upper image: 1 points, 1 rays, 0 lines" in text
    header = next(line for line in text.splitlines() if line.lstrip().startswith("kind"))
    assert header.split() == ["kind", "target", "LPs", "updates", "inner-upd"]
    with pytest.raises(ValueError):
        serialize_solution(SolutionReport.from_solution(s), "xml")


# ---------------------------------------------------------------------------
# Plot data
# ---------------------------------------------------------------------------


def test_plot_data_for_planar_problem(tmp_path):
    p = parse_problem(STRIP)
    paths = emit_plot_data(p, solve(p), tmp_path / "plots")
    assert [x.name for x in paths] == ["plot_data.json", "plot_data.csv"]
    data = json.loads(paths[0].read_text())
    names = [entry["name"] for entry in data["sets"]]
    assert names == ["F(xbar1)+C", "G(xhat1)+C", "G(xhat2)+C", "P", "Q"]
    plot = PlotData.model_validate_json(paths[0].read_text())
    assert plot.q == 2
    assert [s.kind for s in plot.sets][-2:] == ["upper_image", "homogeneous_upper_image"]
    header = paths[1].read_text().splitlines()[0]
    assert header == "set,kind,generator,index,y1,y2"


def test_plot_data_orders_polygons_counterclockwise(tmp_path):
    p = SetOptProblem(
        F=PolyMap(
            n=1,
            q=2,
            base=HRep(
                dim=3,
                A=((0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1), (1, 0, 0), (-1, 0, 0)),
                b=(0, 1, 0, 1, 0, 0),
            ),
        ),
        C=OrderCone.zero(2),
    )
    paths = emit_plot_data(p, solve(p), tmp_path)
    square = json.loads(paths[0].read_text())["sets"][0]["points"]
    assert square == [["1", "1"], ["0", "1"], ["0", "0"], ["1", "0"]]


def test_plot_data_rejects_other_dimensions(tmp_path):
    p = parse_problem(INTERVAL)
    with pytest.raises(UnsupportedDimensionError):
        emit_plot_data(p, solve(p), tmp_path)
    wide = SetOptProblem(F=PolyMap(n=1, q=5, base=HRep(dim=6)), C=OrderCone.zero(5))
    with pytest.raises(UnsupportedDimensionError, match="got 5"):
        emit_plot_data(wide, Solution(status=SolutionStatus.SOLVED), tmp_path)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


def test_cli_solve_text_and_json(tmp_path, capsys):
    path = _write(tmp_path, "interval.txt", INTERVAL)
    assert main(["solve", path]) == 0
    assert capsys.readouterr().out.startswith("status: solved")
    assert main(["solve", path, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["Sbar"] == [["0"]]


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["solve", _write(tmp_path, "none.txt", HALFLINE)]) == 2
    assert main(["solve", _write(tmp_path, "empty.txt", EMPTY)]) == 3
    assert main(["check", str(tmp_path / "none.txt")]) == 2
    assert main(["check", str(tmp_path / "empty.txt")]) == 3
    assert main(["check", _write(tmp_path, "ok.txt", INTERVAL)]) == 0
    capsys.readouterr()


def test_cli_reports_parse_errors(tmp_path, capsys):
    path = _write(tmp_path, "bad.txt", MINIMAL.replace("-1 1 <= 0", "-1 <= 0"))
    assert main(["solve", path]) == 1
    err = capsys.readouterr().err
    assert "line 5, column 1" in err
    assert main(["solve", str(tmp_path / "missing.txt")]) == 1


def test_cli_usage_errors_exit_with_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_cli_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(STRIP))
    assert main(["solve", "-"]) == 0
    out = capsys.readouterr().out
    assert "bounded: no" in out
    assert "Shat (2):" in out


def test_cli_std_form(tmp_path, capsys):
    assert main(["std-form", _write(tmp_path, "strip.txt", STRIP)]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("standard-form")
    assert parse_problem(out).is_standard_form


def test_cli_gen_bid_ask(tmp_path, capsys):
    assert main(["gen", "bid-ask"]) == 0
    p = parse_problem(capsys.readouterr().out)
    assert (p.n, p.q) == (4, 2)

    pi = _write(tmp_path, "pi.txt", "1 2\n2 1\n")
    xbar = _write(tmp_path, "xbar.txt", "1 0\n")
    assert main(["gen", "bid-ask", "--pi1", pi, "--pi2", pi, "--q", "1", "--xbar", xbar]) == 0
    p = parse_problem(capsys.readouterr().out)
    assert (p.n, p.q) == (2, 1)

    assert main(["gen", "bid-ask", "--pi1", pi]) == 1
    bad = _write(tmp_path, "bad.txt", "1 5 1\n2 1 2\n2 1 1\n")
    assert main(["gen", "bid-ask", "--pi1", bad, "--pi2", bad, "--q", "1"]) == 1
    assert "pi[1][2]" in capsys.readouterr().err


def test_cli_gen_euler(capsys):
    assert main(["gen", "euler"]) == 0
    p = parse_problem(capsys.readouterr().out)
    assert (p.n, p.q) == (10, 2)
    assert p.C.is_zero


def test_cli_plot_dir(tmp_path, capsys):
    path = _write(tmp_path, "strip.txt", STRIP)
    assert main(["solve", path, "--plot-dir", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "plot_data.csv").exists()
    capsys.readouterr()
