import json

import pytest

from simpleqe.cli import main
from simpleqe.synthetic import write_workspace


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("ws")
    write_workspace(root, seed=1)
    return root


def write_config(root, name, body):
    path = root / name
    path.write_text(body, encoding="utf-8")
    return str(path)


def run(cmd, config, out):
    return main([cmd, "--config", config, "--out", str(out)])


COMPLEXITY = """seed = 2
[data]
corpus_dir = "leveled"
frequency_table = "frequency.tsv"
wiki_simple = "wiki_simple.jsonl"
wiki_standard = "wiki_standard.jsonl"
[head]
mode = "S1"
qualities = ["complexity"]
dual_encoder = false
use_features = true
[train]
epochs = 4
[eval]
mode = "{mode}"
k = 4
checkpoint = "{out}/checkpoint.zip"
"""


def test_features_three_lines(workspace, tmp_path):
    (workspace / "three.txt").write_text("The cat sat.\nA much longer sentence appears here.\nShort.\n")
    cfg = write_config(workspace, "feat.toml", '[data]\nsentences = "three.txt"\nfrequency_table = "frequency.tsv"\n')
    assert run("features", cfg, tmp_path) == 0
    rows = [json.loads(line) for line in (tmp_path / "features.jsonl").read_text().splitlines()]
    assert [r["line"] for r in rows] == [1, 2, 3]
    assert rows[0]["sentence_length"] == 4.0
    assert all(r["no_parse"] for r in rows)


def test_metrics(workspace, tmp_path):
    assert run("metrics", str(workspace / "run.toml"), tmp_path) == 0
    summary = json.loads((tmp_path / "metrics.json").read_text())
    assert summary["n"] == 12 and 0 <= summary["mean_bleu"] <= 1 and 0 <= summary["mean_sari"] <= 1


def test_baselines_rows(workspace, tmp_path):
    assert run("baselines", str(workspace / "run.toml"), tmp_path) == 0
    report = json.loads((tmp_path / "baselines.json").read_text())["report"]
    assert {"BLEU", "SARI", "BERT LM", "BERT Sim", "Sentence Length"} <= set(report)
    assert set(report["BLEU"]["fluency"]) == {"rho", "tau", "r"}


def test_oracle_report(workspace, tmp_path):
    cfg = write_config(workspace, "oracle.toml", '[data]\njudgments = "judgments.jsonl"\n'
                       '[eval]\nmode = "qe"\nk = 24\npredictor = "oracle"\n')
    assert run("evaluate", cfg, tmp_path) == 0
    text = (tmp_path / "report.txt").read_text()
    assert text.splitlines()[-1].split() == ["Oracle"] + ["1.000"] * 9
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["mode"] == "qe"
    assert all(set(stats) == {"rho", "tau", "r"} for stats in payload["report"]["Oracle"].values())


def test_train_evaluate_deterministic(workspace):
    import shutil

    body = (workspace / "run.toml").read_text().replace("out/checkpoint.zip", "det_out/checkpoint.zip")
    cfg = write_config(workspace, "det.toml", body)
    out = workspace / "det_out"
    outputs = []
    for _ in range(2):
        shutil.rmtree(out, ignore_errors=True)
        assert run("train", cfg, out) == 0
        assert run("evaluate", cfg, out) == 0
        outputs.append({name: (out / name).read_bytes()
                        for name in ("checkpoint.zip", "loss.log", "report.txt", "report.json")})
    assert outputs[0] == outputs[1]
    assert "Simple-QE M-3 +features" in outputs[0]["report.txt"].decode()


@pytest.mark.parametrize("mode", ["complexity", "transfer"])
def test_complexity_and_transfer(workspace, tmp_path, mode):
    cfg = write_config(workspace, f"{mode}.toml", COMPLEXITY.format(mode=mode, out=tmp_path))
    assert run("train", cfg, tmp_path) == 0
    assert run("evaluate", cfg, tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())["report"]
    assert "Sum-QE S-1 +features" in report
    if mode == "complexity":
        assert {"LinReg", "Sentence Length"} <= set(report)


def test_document_granularity(workspace, tmp_path):
    body = COMPLEXITY.format(mode="complexity", out=tmp_path).replace(
        'corpus_dir = "leveled"', 'corpus_dir = "leveled"\ngranularity = "document"')
    cfg = write_config(workspace, "doc.toml", body)
    assert run("baselines", cfg, tmp_path) == 0
    assert "LinReg" in (tmp_path / "baselines.txt").read_text()


def test_chunk(workspace, tmp_path):
    cfg = write_config(workspace, "chunk.toml", '[data]\ncorpus_dir = "leveled"\n[chunk]\nbudget = 64\n')
    assert run("chunk", cfg, tmp_path) == 0
    rows = [json.loads(line) for line in (tmp_path / "chunks.jsonl").read_text().splitlines()]
    assert rows and all(r["subword_length"] <= 64 for r in rows)


def test_numeric_failure_exit_3(workspace, tmp_path):
    body = (workspace / "run.toml").read_text().replace("lr = 0.01", "lr = 1e300")
    cfg = write_config(workspace, "nan.toml", body)
    assert run("train", cfg, tmp_path) == 3


@pytest.mark.parametrize("body", [
    "seed = [",
    "colour = 1",
    "[head]\nmode = 4",
    '[data]\njudgments = "judgments.jsonl"\n[eval]\nk = 100\npredictor = "oracle"\n',
    '[data]\njudgments = "missing.jsonl"\n[eval]\npredictor = "oracle"\n',
    '[eval]\npredictor = "oracle"\n',
])
def test_config_and_input_errors_exit_2(workspace, tmp_path, body):
    cfg = write_config(workspace, "bad.toml", body)
    assert run("evaluate", cfg, tmp_path) == 2


def test_missing_config_exit_2(tmp_path):
    assert run("features", str(tmp_path / "nope.toml"), tmp_path) == 2


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["explode", "--config", "x.toml"])
    assert exc.value.code == 2
