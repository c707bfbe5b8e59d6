import csv
import io
import math

import pytest

from paircorr import __version__, plotting
from paircorr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    lines = text.splitlines()
    head = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    return head, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_header_lines(capsys):
    code, out, _ = run(capsys, "logderiv", "--steps", "3")
    head, rows = parse(out)
    assert code == 0
    assert head[0] == f"# paircorr {__version__}"
    assert head[1] == "# invocation: paircorr logderiv --steps 3"
    assert head[2] == "# seed: none"
    assert len(rows) == 4


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0
    _, rows = parse(out)
    by = {r["name"]: r for r in rows}
    cmt = by["C_MT"]
    assert float(cmt["computed"]) == pytest.approx(1.32749, abs=1e-5)
    assert float(cmt["reference"]) == 1.32749
    assert float(cmt["deviation"]) < 1e-5 and cmt["ok"] == "true"
    for name in ("c0", "x1", "L_minus", "L_plus", "lambda_inf", "theta", "eta", "D_squared"):
        assert by[name]["ok"] == "true"
    assert [f"m({n})" for n in range(1, 11)] == [r["name"] for r in rows if r["name"].startswith("m(")]


@pytest.mark.parametrize("kind", ["tri-upper", "tri-lower", "sym-upper", "sym-lower", "int-upper", "int-lower"])
def test_fbound_kinds(capsys, kind):
    code, out, _ = run(capsys, "fbound", "--kind", kind, "--beta", "3", "--steps", "4")
    assert code == 0
    _, rows = parse(out)
    assert len(rows) == 4
    assert float(rows[-1]["beta"]) == pytest.approx(3.0)
    assert all(math.isfinite(float(r["value"])) for r in rows)


def test_fbound_sym_needs_unit_start(capsys):
    code, _, err = run(capsys, "fbound", "--kind", "sym-upper", "--b", "1.5", "--beta", "3")
    assert code == 2 and err.count("\n") == 1 and "error" in err


def test_jbound(capsys):
    code, out, _ = run(capsys, "jbound", "--beta", "2")
    assert code == 0 and parse(out)[1]
    code, out, _ = run(capsys, "jbound", "--legacy")
    assert code == 0 and parse(out)[1]
    code, _, _ = run(capsys, "jbound")
    assert code == 2


def test_hilbert(capsys):
    code, out, _ = run(capsys, "hilbert", "--level", "5", "--coeffs")
    assert code == 0
    assert "3.2613" in out
    code, out, _ = run(capsys, "hilbert", "--limit")
    assert code == 0 and "3.33354" in out
    code, _, _ = run(capsys, "hilbert", "--level", "0")
    assert code == 2


def test_search_deterministic(capsys):
    argv = ("search", "--problem", "ep4", "--restarts", "2", "--seed", "3")
    code, first, _ = run(capsys, *argv)
    assert code == 0
    _, second, _ = run(capsys, *argv)
    assert first == second
    head, rows = parse(first)
    assert head[2] == "# seed: 3"
    kv = {r["key"]: r["value"] for r in rows}
    assert kv["problem"] == "ep4"


def test_empirical(capsys, zeros_file):
    code, out, _ = run(capsys, "empirical", "--zeros", str(zeros_file), "--T", "30", "--steps", "4")
    assert code == 0
    _, rows = parse(out)
    assert len(rows) == 5
    assert {"alpha", "value", "truncation_bound"} <= set(rows[0])


def test_empirical_report(capsys, zeros_file):
    code, out, _ = run(capsys, "empirical", "--zeros", str(zeros_file), "--T", "30",
                       "--alpha-min", "1", "--alpha-max", "2", "--steps", "8", "--report")
    assert code == 0
    assert "band" in out


def test_empirical_bad_file(capsys, tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("14\nxyz\n")
    code, _, err = run(capsys, "empirical", "--zeros", str(p))
    assert code == 2 and ":2:" in err
    code, _, err = run(capsys, "empirical", "--zeros", str(tmp_path / "missing.txt"))
    assert code != 0 and err.count("\n") == 1


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_output_file(tmp_path, capsys):
    target = tmp_path / "sub" / "lg.csv"
    code, out, _ = run(capsys, "logderiv", "--steps", "2", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("# paircorr")
    assert [p.name for p in target.parent.iterdir()] == ["lg.csv"]


def test_failed_run_leaves_no_file(tmp_path, capsys):
    target = tmp_path / "bad.csv"
    code, _, _ = run(capsys, "logderiv", "--a-min", "2", "--a-max", "1", "-o", str(target))
    assert code == 2
    assert not target.exists() and list(tmp_path.iterdir()) == []


def test_figures(tmp_path, capsys):
    out_dir = tmp_path / "figs"
    code, out, _ = run(capsys, "figures", "--out", str(out_dir))
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    for stem in ("g_curves", "uv_ratios", "triangle_bounds", "c1beta", "sunrise",
                 "stack_l2.5", "hilbert_levels", "hilbert_extremal"):
        assert f"{stem}.csv" in names and f"{stem}.png" in names
    assert "stack_l2.5_parts.csv" in names
    assert (out_dir / "g_curves.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(out.splitlines()) == len(names)


def test_figures_cleanup_on_failure(tmp_path, capsys, monkeypatch):
    calls = []

    def boom(path, *a, **k):
        calls.append(path)
        if len(calls) == 3:
            raise OSError("disk full")
        return plotting.__dict__["_orig"](path, *a, **k)

    monkeypatch.setitem(plotting.__dict__, "_orig", plotting.line_figure)
    monkeypatch.setattr(plotting, "line_figure", boom)
    out_dir = tmp_path / "figs"
    code, _, err = run(capsys, "figures", "--out", str(out_dir))
    assert code == 1 and "disk full" in err
    assert list(out_dir.iterdir()) == []
