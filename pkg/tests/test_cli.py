import io
import json

import pytest

from ksw.cli import main, run
from ksw.suites import SUITES, corpus_path, property_suite


def c(name):
    return str(corpus_path(name))


def invoke(*argv):
    out = io.StringIO()
    code, report = run(list(argv), out)
    return code, report, out.getvalue()


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


COMMANDS = [
    ("transfer", "--space", c("space_sqrt2_rank3.json")),
    ("lift", "--form", c("form_sqrt2_rank3.json")),
    ("lift", "--form", c("form_qi_hermitian.json"), "--hermitian"),
    ("clifford", "--space", c("space_sqrt2_rank3.json"), "--op", "table"),
    ("clifford", "--space", c("space_rational_rank3.json"), "--op", "filtration"),
    ("norm", "--module", c("module_sqrt2_rank2.json"), "--algebra", c("algebra_matrix2.json")),
    ("norm", "--module", c("module_split_rank2.json")),
    ("rep", "--check", "doubling", "--in", c("rep_doubling_rank1.json")),
    ("rep", "--check", "fullness", "--in", c("rep_fullness_diagonal.json")),
    ("rep", "--check", "decompose", "--in", c("rep_decompose_sl2pair.json")),
    ("classify", "--period", c("period_rational_plane.json")),
    ("half-twist", "--period", c("period_qi.json"), "--cm", c("cm_qi.json")),
    ("ks", "--period", c("period_plane_rank2.json"), "--verify-u", "--double"),
    ("so4", "--space", c("space_det_form.json"), "--check", "epsilon"),
]


def _id(argv):
    files = [a.rsplit("/", 1)[-1][:-5] for a in argv if a.endswith(".json")]
    return f"{argv[0]}-{files[0]}"


@pytest.mark.parametrize("argv", COMMANDS, ids=[_id(a) for a in COMMANDS])
def test_subcommands_pass(argv):
    code, report, text = invoke(*argv)
    assert code == 0, text
    assert report["checks"] and all(ch["pass"] and ch["witness"] == {} for ch in report["checks"])
    assert _no_floats(report)
    assert json.loads(text) == report


def test_check_all_passes():
    code, report, _ = invoke("check", "--suite", "all")
    assert code == 0
    names = {ch["name"].split(".")[0] for ch in report["checks"]}
    assert names == set(SUITES)


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, report, _ = invoke("classify", "--period", str(bad))
    assert code == 2 and report["error"]["type"] == "MalformedInput"


def test_isotropy_violation_exit_code():
    code, report, _ = invoke("classify", "--period", c("invalid/period_bad_isotropy.json"))
    assert code == 2
    assert report["error"]["type"] == "IsotropyViolated"
    failed = [ch for ch in report["checks"] if not ch["pass"]]
    assert failed and failed[0]["witness"]


def test_math_failure_exit_code():
    code, report, _ = invoke("so4", "--space", c("space_diag_positive.json"))
    assert code == 1 and report["error"]["type"] == "NotSplit"
    assert report["checks"][-1]["witness"]["signature"] == [4, 0]


def test_tau_in_phi_is_input_error():
    code, report, _ = invoke("half-twist", "--period", c("period_qi.json"),
                             "--cm", c("invalid/cm_qi_tau_in_phi.json"))
    assert code == 2 and report["error"]["type"] == "TauInPhi"


def test_usage_errors():
    assert main(["bogus"]) == 2
    assert main(["ks"]) == 2


def test_missing_file():
    code, _, _ = invoke("transfer", "--space", "/nonexistent/space.json")
    assert code == 2


def test_seed_determinism():
    a = invoke("check", "--suite", "forms", "--seed", "0")[2]
    b = invoke("check", "--suite", "forms", "--seed", "0")[2]
    assert a == b
    assert property_suite("scalars", 3) == property_suite("scalars", 3)


def test_env_seed_override(monkeypatch):
    monkeypatch.setenv("KSW_SEED", "7")
    _, report, _ = invoke("check", "--suite", "scalars")
    assert report["inputs"]["seed"] == 7


def test_timing_and_text_format():
    code, report, text = invoke("transfer", "--space", c("space_rational_rank2.json"),
                                "--format", "text", "--timing")
    assert code == 0 and "elapsed_ms" in report
    assert text.startswith("transfer: exit 0") and "[PASS]" in text
    _, plain, _ = invoke("transfer", "--space", c("space_rational_rank2.json"))
    assert "elapsed_ms" not in plain
