import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from triplekit import fixtures as fx
from triplekit import jsonio
from triplekit import lts as lt
from triplekit import symlie as sl
from triplekit import sympair as sp
from triplekit.cli import main


@pytest.fixture(scope="module")
def gallery_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("gallery")
    assert main(["gallery", "--write", str(out)]) == 0
    return out


# ---------------------------------------------------------------- round trips

def test_gallery_files_round_trip_byte_identical(gallery_dir):
    files = sorted(gallery_dir.glob("*.json"))
    assert len(files) == 23
    for path in files:
        original = path.read_text()
        obj = jsonio.load(path)
        assert jsonio.dumps(obj) == original


def test_exact_values_survive_round_trip(tmp_path):
    system = fx.u_minus_lts(2)
    p = tmp_path / "sys.json"
    jsonio.save(p, system)
    back = jsonio.load(p)
    assert back.mode == "rational"
    assert isinstance(back.tensor[0, 1, 0, 1], Fraction)
    assert np.array_equal(back.tensor, system.tensor)
    assert back.labels == system.labels


def test_pair_round_trip_keeps_exact_shadow(tmp_path):
    pair = fx.u_modulo_o_pair(2)
    p = tmp_path / "pair.json"
    jsonio.save(p, pair)
    back = jsonio.load(p)
    assert back.exact_basis is not None
    assert back.ambient_n == pair.ambient_n
    assert back.fixed_group_policy == pair.fixed_group_policy
    sla = sp.derived_symmetric_algebra(back)
    assert sla.algebra.mode == "rational"
    ref = sp.derived_symmetric_algebra(pair)
    assert np.array_equal(sla.algebra.tensor, ref.algebra.tensor)


def test_transpose_inverse_sigma_round_trip():
    doc = {
        "kind": "pair", "ambient_n": 2, "mode": "float",
        "basis": [[[0.0, 1.0], [-1.0, 0.0]]],
        "sigma": "transpose_inverse", "policy": "full_fixed_group", "name": "spin",
    }
    pair = jsonio.pair_from_dict(doc)
    assert isinstance(pair.sigma, sp.SigmaTransposeInverse)
    again = jsonio.pair_to_dict(pair)
    assert again["sigma"] == "transpose_inverse"


def test_sniff_kind_without_tag():
    sys_doc = jsonio.lts_to_dict(fx.sphere_lts(2))
    del sys_doc["kind"]
    assert isinstance(jsonio.from_dict(sys_doc), lt.LieTripleSystem)

    lie_doc = jsonio.lie_to_dict(fx.so3_lie())
    del lie_doc["kind"]
    assert isinstance(jsonio.from_dict(lie_doc), sl.LieAlgebra)

    sym_doc = jsonio.symmetric_to_dict(fx.u_symmetric_algebra(2))
    del sym_doc["kind"]
    assert isinstance(jsonio.from_dict(sym_doc), sl.SymmetricLieAlgebra)

    pair_doc = jsonio.pair_to_dict(fx.sphere_pair(2))
    del pair_doc["kind"]
    assert isinstance(jsonio.from_dict(pair_doc), sp.MatrixSymmetricPair)


def test_garbage_document_rejected():
    with pytest.raises(jsonio.FormatError):
        jsonio.from_dict({"apples": 3})


# ----------------------------------------------------------- exit code contract

def test_check_passes_on_valid_file(gallery_dir, capsys):
    rc = main(["check", str(gallery_dir / "lts_sphere3.json")])
    assert rc == 0
    assert "ok: True" in capsys.readouterr().out


def test_check_fails_on_broken_system(tmp_path, capsys):
    p = tmp_path / "broken.json"
    jsonio.save(p, fx.broken_lts())
    rc = main(["check", str(p)])
    assert rc == 1
    out = capsys.readouterr().out
    assert "ok: False" in out


def test_missing_file_is_input_error(capsys):
    rc = main(["check", "/nonexistent/nowhere.json"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_json_is_input_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("this is not json{")
    rc = main(["check", str(p)])
    assert rc == 2


def test_noncentral_period_direction_is_input_error(gallery_dir, capsys):
    rc = main(["period", str(gallery_dir / "pair_u2_mod_o2.json"),
               "--coords", "1,0,0,0"])
    assert rc == 2
    assert "central" in capsys.readouterr().err


def test_json_output_parses(gallery_dir, capsys):
    rc = main(["check", str(gallery_dir / "pair_u2_mod_o2.json"), "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] is True
    assert doc["derived_mode"] == "rational"


# ------------------------------------------------------------ command behavior

def test_center_command(gallery_dir, capsys):
    rc = main(["center", str(gallery_dir / "lts_u2_minus.json")])
    assert rc == 0
    assert "center_dim: 1" in capsys.readouterr().out


def test_embed_command(gallery_dir, capsys):
    rc = main(["embed", str(gallery_dir / "lts_sphere3.json")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "operator_part_dim: 3" in out
    assert "certified: True" in out


def test_quotient_out_is_loadable(gallery_dir, tmp_path, capsys):
    out = tmp_path / "quot.json"
    rc = main(["quotient", str(gallery_dir / "lts_u2_minus.json"),
               "--out", str(out)])
    assert rc == 0
    qsys = jsonio.load(out)
    assert qsys.dim == 2


def test_quotient_with_ideal_file(gallery_dir, tmp_path, capsys):
    ideal = tmp_path / "ideal.json"
    ideal.write_text(json.dumps({"vectors": [["1", "1", "0"]]}))
    rc = main(["quotient", str(gallery_dir / "lts_u2_minus.json"),
               "--ideal", str(ideal)])
    assert rc == 0
    assert "quotient_dim: 2" in capsys.readouterr().out


def test_product_command(gallery_dir, tmp_path, capsys):
    out = tmp_path / "prod.json"
    rc = main(["product", str(gallery_dir / "lts_sphere2.json"),
               str(gallery_dir / "lts_abelian2.json"), "--out", str(out)])
    assert rc == 0
    assert jsonio.load(out).dim == 4


def test_pair_exp_at_period(gallery_dir, capsys):
    rc = main(["pair-exp", str(gallery_dir / "pair_u2_mod_o2.json"),
               "--t", "3.141592653589793", "--coords", "1,1,0,0"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "in_fixed_group: True" in out


def test_geodesic_command(gallery_dir, capsys):
    rc = main(["geodesic", str(gallery_dir / "pair_so3_mod_so2.json"),
               "--samples", "6"])
    assert rc == 0
    assert "ok: True" in capsys.readouterr().out


def test_period_pair_route_json(gallery_dir, capsys):
    rc = main(["period", str(gallery_dir / "pair_u2_mod_o2.json"),
               "--coords", "1,1,0,0", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "Discrete"
    assert abs(doc["generator"] - 3.141592653589793) < 1e-8


def test_period_subgroup_route(capsys):
    rc = main(["period", "--subgroup", "1.0", "1.4142135623730951", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "NonDiscreteWitness"
    assert doc["witness_coefficients"] == [665857, -470832]


def test_quotient_demo_reports_both_sides(capsys):
    rc = main(["quotient-demo", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["irrational_pair_verdict"] == "NonDiscreteWitness"
    assert doc["rational_slope_control"] == "Discrete"
    assert doc["witness_norm"] < 1e-6
    assert "simply connected" in doc["caveat"]


def test_loop_demo_only_zero(gallery_dir, capsys):
    rc = main(["loop-demo", str(gallery_dir / "pair_u2_mod_o2.json"),
               "--grid-size", "3", "--coords", "1,1,0,0"])
    assert rc == 0
    assert "only_zero_admissible: True" in capsys.readouterr().out


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "triplekit.cli", "gallery"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "u2_mod_o2" in proc.stdout
