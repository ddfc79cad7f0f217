import json

import pytest

from kodlib import cli
from kodlib.errors import ValidationError

EXAMPLES = [
    ({"command": "lefschetz", "payload": {"g": 1, "h": 0, "a": 24}}, "0"),
    ({"command": "seifert", "payload": {"base_genus": 0, "multiplicities": [2, 3, 7]}}, "1"),
    ({"command": "dim2", "payload": {"genus": 0, "divisor": []}}, "-inf"),
]

CORPUS = [req for req, _ in EXAMPLES] + [
    {"command": "dim3", "payload": {"pieces": ["Nil", "H3"]}},
    {"command": "dim3", "payload": {"components": [["S3"], ["E3"]]}},
    {"command": "dim4", "payload": {"minimal": "RationalCP2", "blowups": 9}},
    {"command": "rhurwitz", "payload": {"N": 2, "chi_base": 2, "indices": [2] * 6}},
    {"command": "bundle", "payload": {"g_base": 2, "g_fiber": 3}},
    {"command": "bundle", "payload": {"kappa_base": "1", "kappa_fiber": "-inf"}},
    {"command": "cover", "payload": {"manifold": {"minimal": {"kind": "General", "ksq": 0, "k_torsion": True}}, "n": 3}},
    {"command": "relative", "payload": {
        "manifold": {"minimal": "RationalCP2", "blowups": 9},
        "surface": [[3, -1, -1, -1, -1, -1, -1, -1, -1, -1]]}},
]


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("req, kappa", EXAMPLES)
def test_run_examples(req, kappa):
    assert str(cli.run(req["command"], req["payload"]).kappa) == kappa


def test_batch_three_lines(tmp_path, capsys):
    path = _write(tmp_path, "b.jsonl", "\n".join(json.dumps(r) for r, _ in EXAMPLES) + "\n")
    assert cli.main(["--batch", path, "--output", "json"]) == 0
    out = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert [o["line"] for o in out] == [1, 2, 3]
    assert [o["report"]["kappa"] for o in out] == [k for _, k in EXAMPLES]


def test_batch_malformed_line(tmp_path, capsys):
    lines = [json.dumps(EXAMPLES[0][0]), '{"command": "dim2", ', json.dumps(EXAMPLES[2][0])]
    path = _write(tmp_path, "b.jsonl", "\n".join(lines))
    assert cli.main(["--batch", path, "--output", "json"]) == 0
    out = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert [o["status"] for o in out] == ["ok", "error", "ok"]
    assert out[1]["kind"] == "validation" and "column" in out[1]["message"]


def test_batch_empty_file(tmp_path, capsys):
    assert cli.main(["--batch", _write(tmp_path, "e.jsonl", "")]) == 0
    assert capsys.readouterr().out == ""


def test_batch_unreadable_file(tmp_path):
    assert cli.main(["--batch", str(tmp_path / "missing")]) == 2


def test_batch_keeps_order_with_failures():
    lines = [json.dumps({"command": "dim2", "payload": {"genus": g}}) for g in range(12)]
    lines.insert(5, json.dumps({"command": "nope"}))
    res = cli.batch(lines)
    assert [r["line"] for r in res] == list(range(1, 14))
    assert res[5]["status"] == "error"


def test_exit_code_validation(tmp_path, capsys):
    assert cli.main(["dim2", _write(tmp_path, "p.json", '{"genus": -1}')]) == 2
    assert cli.main(["dim2", _write(tmp_path, "q.json", '{"genus": ')]) == 2
    assert "line 1" in capsys.readouterr().err
    payload = {"g": 2, "a": 20}  # not hyperelliptic
    assert cli.main(["lefschetz", _write(tmp_path, "r.json", json.dumps(payload))]) == 2


def test_exit_code_consistency(tmp_path, monkeypatch):
    from kodlib import surfaces_relative as sr
    from kodlib.four_manifold import MinusOneSet

    a, b = (1, -1, -1, -1), (1, -2, -1, 0)

    def fake(m, bound=30):
        return MinusOneSet(m.kind, (a, b), bound, True)

    monkeypatch.setattr(sr, "enumerate_minus_one", fake)
    payload = {"manifold": {"minimal": "RationalCP2", "blowups": 3}, "surface": [[3, -1, -1, -1]]}
    assert cli.main(["relative", _write(tmp_path, "t.json", json.dumps(payload))]) == 3


def test_request_command(tmp_path, capsys):
    req = dict(EXAMPLES[1][0], options={"trace": True})
    assert cli.main(["request", _write(tmp_path, "r.json", json.dumps(req)), "--output", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["kappa"] == "1"
    assert ["orbifold euler characteristic", "-1/42"] in rep["trace"]


@pytest.mark.parametrize("req", CORPUS)
def test_json_round_trip_byte_identical(req):
    text = cli.dumps(cli.run(req["command"], req["payload"], bound=6, trace=True).to_json())
    assert cli.dumps(json.loads(text)) == text


@pytest.mark.parametrize("req", CORPUS)
def test_text_and_json_agree(tmp_path, capsys, req):
    path = _write(tmp_path, "p.json", json.dumps(req["payload"]))
    assert cli.main([req["command"], path, "--output", "json", "--bound", "6"]) == 0
    as_json = json.loads(capsys.readouterr().out)["kappa"]
    assert cli.main([req["command"], path, "--bound", "6"]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert first == f"kappa: {as_json}"


def test_relative_report_is_bound_qualified():
    rep = cli.run(CORPUS[-1]["command"], CORPUS[-1]["payload"], bound=6, trace=True)
    assert str(rep.kappa) == "0" and rep.bound_qualified
    labels = [k for k, _ in rep.trace]
    assert "(K+F)^2" in labels and "-1 classes enumerated" in labels


def test_non_rational_report_is_not_bound_qualified():
    assert not cli.run("dim4", {"minimal": "RationalCP2", "blowups": 2}).bound_qualified


def test_trace_uses_exact_strings():
    rep = cli.run("dim2", {"genus": 0, "divisor": [{"id": "p", "weight": "1/3"}]}, trace=True)
    assert rep.trace == [("2g-2+c(D)", "-5/3")]


def test_env_bound(monkeypatch):
    monkeypatch.setenv("KODLIB_BOUND", "7")
    assert cli.default_bound() == 7
    monkeypatch.setenv("KODLIB_BOUND", "zero")
    with pytest.raises(ValidationError):
        cli.default_bound()
    monkeypatch.delenv("KODLIB_BOUND")
    assert cli.default_bound() == 30


def test_unknown_command():
    with pytest.raises(ValidationError):
        cli.run("dim5", {})
