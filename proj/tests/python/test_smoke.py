import json

import pycompilance as cp


def test_core_helpers():
    assert cp.encode_unary(3) == "111"
    assert cp.encode_pair("0", "1") == "1001"
    assert cp.decode_pair("1001") == ("0", "1")
    assert cp.apply_param("len", "010") == "111"


def test_problem_oracles():
    assert "3sat" in cp.problem_ids()
    assert cp.decide("parity", "1011")
    assert not cp.decide("parity", "")
    graphs = cp.enumerate_instances("hampath", 3)
    assert len(graphs) == 1 + 1 + 2 + 8
    assert all(cp.validate("hampath", g) for g in graphs)


def test_compile_and_query():
    artifact = cp.compile_artifact("parity.len.id", "1111", "literal")
    assert cp.query_compiled(artifact, "1011")
    assert not cp.query_compiled(artifact, "11")
    for s in ["", "1", "01", "111", "1010"]:
        assert cp.query_compiled(artifact, s) == cp.decide("parity", s)


def test_artifact_files(tmp_path):
    artifact = cp.compile_artifact("3sat.nu.dedup", "1", "sparse")
    path = str(tmp_path / "nu1.cplc")
    cp.save_artifact(artifact, path)
    assert cp.load_artifact(path) == artifact


def test_reductions():
    assert len(cp.reduction_ids()) >= 8
    phi = cp.parse_instance_text("3sat", "dimacs", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")
    image, contract_b = cp.apply_reduction("3sat.nu-to-2hs", phi)
    assert contract_b
    assert cp.validate("hs2", image)
    assert cp.decide("hs2", image) == cp.decide("3sat", phi) == False  # noqa: E712


def test_kernelization():
    star = cp.parse_instance_text("hs2", "edgelist", "6 2 1 5\n1 2\n1 3\n1 4\n1 5\n1 6\n")
    kernel = cp.kernelize_hitting_set(star)
    assert cp.decide("hs2", kernel) == cp.decide("hs2", star) == True  # noqa: E712


def test_verification_reports():
    report = json.loads(cp.verify_reduction("hampath.gamma-len", 3))
    assert report["status"] == "PASS"
    suite = json.loads(cp.run_suite("kernels", "small"))
    assert suite["all_pass"] is True
