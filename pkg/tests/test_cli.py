import io
import json

import numpy as np
import pytest

from ternlab import cli
from ternlab import ternary as tern


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture()
def mixed_file(tmp_path):
    m = tern.direct_sum(tern.full_matrix_space(2, 2, +1), tern.scalar_space(-1))
    return _write(tmp_path, "mixed.json", cli.to_instance_dict(m, "mixed"))


def _run_json(argv):
    out = io.StringIO()
    code = cli.main(argv + ["--format", "json"], out=out)
    return code, json.loads(out.getvalue())


def test_round_trip_block_instances(catalog):
    for name, m in catalog:
        data = json.loads(json.dumps(cli.to_instance_dict(m, name)))
        name2, m2 = cli.parse_instance_dict(data, validate=False)
        assert name2 == name
        assert m2.dim == m.dim
        for b1, b2 in zip(m.blocks, m2.blocks):
            assert b1.sign == b2.sign
            for x, y in zip(b1.basis, b2.basis):
                assert np.array_equal(x, y)


def test_round_trip_structure_instance():
    m = tern.as_structure_space(tern.diagonal_space(2, -1))
    data = json.loads(json.dumps(cli.to_instance_dict(m, "s")))
    _, m2 = cli.parse_instance_dict(data, validate=False)
    assert np.array_equal(m2.structure.c, m.structure.c)


def test_verify_pass(mixed_file):
    code, rep = _run_json(["verify", mixed_file, "--samples", "50"])
    assert code == 0
    assert rep["passed"] is True
    assert rep["details"]["norm_checked"] is True


def test_verify_corrupted_names_identity(tmp_path):
    c = np.array(tern.structure_constants_of(tern.diagonal_space(2, +1)).c)
    c[0, 1, 1, 0] += 0.1
    path = _write(tmp_path, "bad.json", {
        "name": "bad",
        "structure_constants": {"dim": 2, "c": cli._encode_array(c)}})
    code, rep = _run_json(["verify", path, "--samples", "50"])
    assert code == 1
    assert rep["details"]["failing_identity"].startswith("assoc")
    assert rep["details"]["failing_residual"] >= 0.05


def test_decompose_pure_anti(tmp_path):
    m = tern.full_matrix_space(2, 2, -1)
    path = _write(tmp_path, "anti.json", cli.to_instance_dict(m, "anti"))
    code, rep = _run_json(["decompose", path])
    assert code == 0
    assert rep["details"]["dim_plus"] == 0
    assert rep["details"]["dim_minus"] == 4


def test_radical_report(mixed_file):
    code, rep = _run_json(["radical", mixed_file])
    assert code == 0
    assert rep["details"] == {"radical_dim": 0, "semisimple": True,
                              "embedding_radical_dim": 0}


def test_embed_report(mixed_file):
    code, rep = _run_json(["embed", mixed_file, "--samples", "20"])
    assert code == 0
    assert rep["details"]["pi_kernel_gap"] > 1e-9
    assert rep["details"]["cstar_witness"]["gap"] > 0.1


def test_quotient_command(tmp_path, mixed_file):
    gen = np.zeros(5, dtype=np.complex128)
    gen[0] = 1.0
    ideal_path = _write(tmp_path, "ideal.json",
                        {"generators": [cli._encode_array(gen)]})
    code, rep = _run_json(["quotient", mixed_file, "--ideal", ideal_path])
    assert code == 0
    assert rep["details"]["ideal_dim"] == 4
    assert rep["details"]["quotient_dim"] == 1
    assert rep["details"]["quotient_zettl_dims"] == [0, 1]


def test_wedderburn_command(tmp_path):
    path = _write(tmp_path, "anti1.json",
                  cli.to_instance_dict(tern.scalar_space(-1), "scalar-anti"))
    code, rep = _run_json(["wedderburn", path])
    assert code == 0
    assert rep["details"]["residual"] <= 1e-8
    assert rep["details"]["star_deviation"] > 0.1


def test_demo_m2_anti_table():
    code, rep = _run_json(["demo", "m2-anti"])
    assert code == 0
    assert rep["details"]["cells_checked"] == 16
    assert rep["details"]["mismatches"] == 0
    assert rep["details"]["table"]["E12.E21"] == "E11"
    assert rep["details"]["table"]["E11.E11"] == "-E11"


def test_all_demos_pass():
    for name in cli.DEMO_NAMES:
        out = io.StringIO()
        assert cli.main(["demo", name, "--samples", "30"], out=out) == 0


def test_malformed_file_exits_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert cli.main(["verify", str(path)]) == 2
    assert cli.main(["verify", str(tmp_path / "missing.json")]) == 2
    bad = _write(tmp_path, "bad2.json", {"name": "x"})
    assert cli.main(["decompose", bad]) == 2


def test_reports_deterministic_under_seed(mixed_file):
    a = _run_json(["embed", mixed_file, "--seed", "7", "--samples", "20"])
    b = _run_json(["embed", mixed_file, "--seed", "7", "--samples", "20"])
    assert a == b


def test_seed_env_fallback(mixed_file, monkeypatch):
    monkeypatch.setenv("TERNLAB_SEED", "11")
    code, rep = _run_json(["decompose", mixed_file])
    assert rep["seed"] == 11
