import json

import pytest

from fsmaps.cli import EXIT_DEGENERATE, EXIT_FAIL, EXIT_OK, EXIT_USAGE, build_parser, main, resolve_config
from fsmaps.config import RunConfig
from fsmaps.errors import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_curve_quartic(capsys, tmp_path):
    code, out, _ = run(capsys, "curve", "--t4", "1", "--order", "16", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "c^2 = 1*b^2 + 3*b^4 + 18*b^6 + 135*b^8" in out
    data = json.loads((tmp_path / "curves.json").read_text())
    assert data["config"]["couplings"] == {"t4": "1"}
    assert "exchanged" in data and "degenerate" not in data["exchanged"]


def test_curve_gaussian_marks_exchanged_degenerate(capsys, tmp_path):
    code, out, _ = run(capsys, "curve", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "exchanged curve: degenerate" in out
    data = json.loads((tmp_path / "curves.json").read_text())
    assert "degenerate" in data["exchanged"] and "ordinary" in data


@pytest.mark.parametrize("argv", [
    ("curve", "--t4", "1/0"),
    ("curve", "--t4", "x"),
    ("curve", "--order", "2"),
    ("oracle", "--kind", "closed", "--edge-cap", "7"),
])
def test_bad_config_is_a_usage_error(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "config error" in err


def test_unparseable_flags_exit_with_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--k", "a,b"])
    assert exc.value.code == EXIT_USAGE


def test_degenerate_exchanged_curve_exit_code(capsys):
    code, _, err = run(capsys, "tr", "--side", "fully-simple", "--g", "1", "--n", "1")
    assert code == EXIT_DEGENERATE
    assert "degenerate" in err


def test_oracle_fully_simple_torus(capsys):
    code, out, _ = run(capsys, "oracle", "--kind", "fully-simple", "--g", "1", "--k", "2", "--faces", "4:2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "g,k,faces,V,count"
    assert lines[1:] == ["1,2,4:2,2,6"]


def test_extract_fully_simple_tree_layer(capsys):
    code, out, _ = run(capsys, "extract", "--side", "fully-simple", "--g", "0", "--k", "4", "--layer", "t0")
    assert code == EXIT_OK
    assert out.strip().splitlines()[1:] == ["0,4,,3,0"]


def test_extract_catalan(capsys):
    code, out, _ = run(capsys, "extract", "--g", "0", "--k", "8", "--order", "12")
    assert code == EXIT_OK
    assert out.strip().splitlines()[1:] == ["0,8,,5,14"]


def test_tr_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "tr", "--t4", "1", "--order", "8", "--g", "0", "--n", "3", "--out", str(tmp_path))
    assert code == EXIT_OK
    data = json.loads((tmp_path / "tr_ordinary.json").read_text())
    (md,) = data["multidifferentials"]
    assert (md["g"], md["n"], md["denominator_exponents"]) == (0, 3, [2, 2, 2])


def test_outputs_are_byte_stable(capsys, tmp_path):
    names = ("curves.json", "ordinary_g0_k3.json", "ordinary_g0_k3.csv")
    snapshots = []
    for _ in range(2):
        assert main(["extract", "--t3", "1", "--g", "0", "--k", "3", "--order", "10", "--out", str(tmp_path)]) == 0
        assert main(["curve", "--t3", "1", "--order", "10", "--out", str(tmp_path)]) == 0
        snapshots.append([(tmp_path / n).read_bytes() for n in names])
    capsys.readouterr()
    assert snapshots[0] == snapshots[1]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"couplings": {"t4": "1"}, "order": 10, "chi": 2}))
    args = build_parser().parse_args(["curve", "--config", str(cfg), "--order", "12", "--t3", "1/2"])
    rc = resolve_config(args)
    assert rc.order == 12 and rc.chi == 2
    assert rc.couplings == {3: "1/2", 4: "1"}


def test_run_config_validation():
    assert RunConfig(couplings={4: "2/4"}).couplings == {4: "1/2"}
    assert RunConfig(couplings={4: "0"}).couplings == {}
    for bad in ({"couplings": {2: "1"}}, {"order": 3}, {"edge_cap": 15}, {"chi": 0}, {"degree_cap": "8"}):
        with pytest.raises(ConfigError):
            RunConfig(**bad)
    with pytest.raises(ConfigError):
        RunConfig.from_json({"bogus": 1})
    rc = RunConfig(couplings={3: "1", 4: "-1/3"}, order=10)
    assert RunConfig.from_json(rc.to_json()) == rc


def test_verify_reports_the_failing_free_energy_identities(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--t4", "1", "--chi", "2", "--order", "12", "--out", str(tmp_path))
    assert code == EXIT_FAIL
    report = json.loads((tmp_path / "verify.json").read_text())
    failed = sorted(c["name"] for c in report["checks"] if not c["ok"])
    assert failed == ["F2 exchanged: residue form = Rest combination",
                      "F2 ordinary: residue form = Map combination"]
    passed = {c["name"] for c in report["checks"] if c["ok"]}
    for name in ("disc inversion x->w->x", "disc inversion w->x->w", "cylinder relation", "pants relation",
                 "F2: Map combination = Rest combination",
                 "TR = census fully_simple g=1 k=(2,)", "genus-one closed form ordinary m=0"):
        assert any(p.startswith(name) for p in passed), name
    assert "seconds" in report["metadata"]
