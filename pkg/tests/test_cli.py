import json

import pytest

from carleson.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, main


@pytest.fixture(scope="module")
def curve_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "c.curve"
    assert main(["gen", "circle", "--radius", "1", "--n", "4096", "-o", str(path)]) == EXIT_OK
    return path


def test_epsilon_value(curve_file, capsys):
    assert main(["epsilon", str(curve_file), "--x", "1,0", "--r", "0.2"]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(0.200335, abs=1e-3)


@pytest.mark.parametrize("cmd", ["beta", "bbeta"])
def test_beta_values(curve_file, capsys, cmd):
    assert main([cmd, str(curve_file), "--x", "1,0", "--r", "0.2"]) == EXIT_OK
    assert float(capsys.readouterr().out) > 0.04


def test_grid_then_fit(curve_file, tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    assert main(["grid", str(curve_file), "--rmin", "0.02", "--rmax", "0.2", "--centers", "2",
                 "--radii", "4", "-o", str(csv_path)]) == EXIT_OK
    assert csv_path.read_text().startswith(
        "center_index,center_x,center_y,radius,epsilon,beta,bbeta,status\n")
    assert main(["fit", str(csv_path), "--column", "epsilon", "--envelope"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["alpha_hat"] == pytest.approx(1, abs=0.05)


def test_verify_circle(curve_file, tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", str(curve_file), "--rmin", "0.01", "--rmax", "0.3",
                 "--centers", "4", "--radii", "6", "-o", str(out)])
    assert code == EXIT_OK
    assert json.loads(out.read_text())["status"] == "pass"


def test_verify_koch_fails(tmp_path):
    path = tmp_path / "k.curve"
    main(["gen", "koch", "--level", "4", "-o", str(path)])
    code = main(["verify", str(path), "--rmin", "0.025", "--rmax", "0.25", "--centers", "4",
                 "--radii", "5", "-o", str(tmp_path / "r.json")])
    assert code == EXIT_VERIFY


def test_tree_and_dyadic(curve_file, capsys):
    assert main(["tree", str(curve_file), "--x", "1,0", "--s0", "0.1", "--depth", "3"]) == 0
    assert len(json.loads(capsys.readouterr().out)["levels"]) == 4
    assert main(["dyadic-verify", str(curve_file), "--x", "1,0", "--s0", "0.1", "--m", "4",
                 "--C", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"] is True
    assert main(["dyadic-verify", str(curve_file), "--x", "1,0", "--s0", "0.1", "--m", "4",
                 "--C", "1e-6"]) == EXIT_VERIFY


def test_dini(curve_file, capsys):
    assert main(["dini", str(curve_file), "--rmin", "0.01", "--rmax", "0.2", "--n", "8",
                 "--centers", "2"]) == EXIT_OK
    assert len(json.loads(capsys.readouterr().out)["values"]) == 2


def test_gen_graph_seed(capsys):
    assert main(["gen", "graph", "--n", "256", "--seed", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed"] == 3


def test_input_errors(curve_file, tmp_path):
    assert main(["epsilon", str(curve_file), "--x", "5,0", "--r", "0.2"]) == EXIT_INPUT
    assert main(["epsilon", str(tmp_path / "missing"), "--r", "0.2"]) == EXIT_INPUT
    assert main(["gen", "polygon", "--vertices", "0,0;1,1;1,0;0,1"]) == EXIT_INPUT
    with pytest.raises(SystemExit) as info:
        main(["epsilon", str(curve_file)])
    assert info.value.code == EXIT_INPUT


def test_numeric_error(tmp_path):
    path = tmp_path / "spike.curve"
    # values starting with '-' must be attached with '='
    assert main(["gen", "polygon", "--vertices=-1,-1;1,-1;1,0;0.05,0;0,1;-0.05,0;-1,0",
                 "-o", str(path)]) == EXIT_OK
    assert main(["tree", str(path), "--x=-0.025,0.5", "--s0", "0.05"]) == EXIT_NUMERIC
