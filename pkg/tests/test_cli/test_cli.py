import json

import pytest

from diarasr.chunker import ChunkPlanDocument
from diarasr.cli import run
from diarasr.core import Segment, SegmentList, dump_segments
from diarasr.enrollment import assemble_prompt, build_triplets, dump_prompts, load_prompts
from diarasr.simkit import CorpusDocument


@pytest.fixture
def config_dir(tmp_path):
    path = tmp_path / "config"
    path.mkdir()
    return str(path)


@pytest.fixture
def files(tmp_path, meeting):
    seglst, rttm = tmp_path / "meeting.seglst.json", tmp_path / "meeting.rttm"
    dump_segments(meeting, seglst)
    dump_segments(meeting, rttm)
    return {"seglst": str(seglst), "rttm": str(rttm)}


def score(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr()


def test_tcpwer_of_identical_transcripts_is_zero(capsys, files, config_dir):
    code, out = score(capsys, "score", "tcpwer", "-r", files["seglst"], "-h", files["seglst"], "--config-dir", config_dir)
    assert code == 0
    report = json.loads(out.out)
    assert report["aggregate"]["rate"] == 0.0
    assert report["parameters"] == {"collar": 5.0, "tokenizer": "word"}
    assert report["sessions"][0]["session_id"] == "s1"


def test_der_against_itself(capsys, files, config_dir):
    code, out = score(
        capsys, "score", "der", "-r", files["rttm"], "-h", files["rttm"], "--collar", "0", "--config-dir", config_dir
    )
    assert code == 0
    assert json.loads(out.out)["aggregate"]["rate"] == 0.0


def test_markdown_report_with_breakdown(capsys, files, config_dir):
    code, out = score(
        capsys,
        "score", "cpwer", "-r", files["seglst"], "-h", files["seglst"],
        "--format", "markdown", "--by-num-speakers", "--config-dir", config_dir,
    )
    assert code == 0
    assert out.out.startswith("# cpwer report")
    assert "## By number of speakers" in out.out


def test_output_file(capsys, files, config_dir, tmp_path):
    target = tmp_path / "report.json"
    code, out = score(
        capsys, "score", "cpwer", "-r", files["seglst"], "-h", files["seglst"], "-o", str(target), "--config-dir", config_dir
    )
    assert code == 0 and out.out == ""
    assert json.loads(target.read_text())["metric"] == "cpwer"


def test_plan_chunks_honours_bounds(capsys, files, config_dir):
    code, out = score(
        capsys,
        "plan-chunks", "-i", files["rttm"], "--max-segments", "2", "--max-per-speaker", "1", "--config-dir", config_dir,
    )
    assert code == 0
    document = ChunkPlanDocument.model_validate_json(out.out)
    assert sum(len(c.segments) for c in document.chunks) == 3
    for chunk in document.chunks:
        speakers = [s.speaker for s in chunk.segments]
        assert len(speakers) <= 2 and len(set(speakers)) == len(speakers)
        assert chunk.window[1] - chunk.window[0] <= 30.0
    assert document.config["max_total_segments"] == 2


def test_plan_chunks_with_embedding_table(capsys, files, config_dir, tmp_path):
    table = tmp_path / "emb.json"
    table.write_text(json.dumps({"spkA": [1.0, 0.0], "spkB": [0.0, 1.0]}))
    code, out = score(capsys, "plan-chunks", "-i", files["seglst"], "--embeddings", str(table), "--config-dir", config_dir)
    assert code == 0
    (chunk,) = ChunkPlanDocument.model_validate_json(out.out).chunks
    assert [t.embedding for t in chunk.triplets] == [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]

    table.write_text(json.dumps({"spkA": "loud"}))
    code, out = score(capsys, "plan-chunks", "-i", files["seglst"], "--embeddings", str(table), "--config-dir", config_dir)
    assert code == 1
    assert str(table) in out.err


def test_plan_chunks_splits_mandarin_by_character(capsys, config_dir, tmp_path):
    zh = tmp_path / "zh.seglst.json"
    dump_segments(SegmentList.of([Segment("s1", "A", 0.0, 60.0, "你好世界谢谢")]), zh)

    code, out = score(capsys, "plan-chunks", "-i", str(zh), "--tokenizer", "char", "--config-dir", config_dir)
    assert code == 0
    document = ChunkPlanDocument.model_validate_json(out.out)
    assert [s.words for c in document.chunks for s in c.segments] == ["你好世", "界谢谢"]

    (tmp_path / "config" / "settings.yaml").write_text("metrics:\n  tokenizer: char\n")
    code, again = score(capsys, "plan-chunks", "-i", str(zh), "--config-dir", config_dir)
    assert code == 0
    assert again.out == out.out


def test_simulate_is_seeded(capsys, config_dir):
    argv = ["simulate", "--synthetic-speakers", "5", "--count", "3", "--seed", "4", "--config-dir", config_dir]
    code, first = score(capsys, *argv)
    assert code == 0
    _, second = score(capsys, *argv)
    assert first.out == second.out
    document = CorpusDocument.model_validate_json(first.out)
    assert [m.session_id for m in document.mixtures] == ["sim-00000", "sim-00001", "sim-00002"]
    assert all(m.segments and m.prompt is not None for m in document.mixtures)


def test_augment_with_full_dropout(capsys, config_dir, tmp_path, meeting, embeddings):
    triplets = build_triplets(meeting, embeddings, (0.0, 10.0))
    source = tmp_path / "prompts.json"
    source.write_text(dump_prompts([assemble_prompt("go", triplets, [t.source_segment.words for t in triplets])]))
    code, out = score(capsys, "augment", "-i", str(source), "--p-drop", "1", "--config-dir", config_dir)
    assert code == 0
    (prompt,) = load_prompts(out.out)
    assert len(prompt) == 0 and prompt.instruction == "go"


def test_usage_errors_exit_two(capsys):
    code, out = score(capsys, "score", "tcpwer")
    assert code == 2
    assert out.err.strip().count("\n") == 0
    assert "required" in out.err
    assert run(["transcribe"]) == 2
    assert run(["simulate", "--count", "1"]) == 2


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert run(["score", "--help"]) == 0
    assert "--hyp" in capsys.readouterr().out


def test_data_errors_exit_one_and_name_the_location(capsys, tmp_path, config_dir):
    bad = tmp_path / "bad.rttm"
    bad.write_text("SPEAKER s1 1 0.0 1.0 <NA> <NA> a <NA> <NA>\nSPEAKER s1 1 2.0 -1.0 <NA> <NA> b <NA> <NA>\n")
    code, out = score(capsys, "score", "der", "-r", str(bad), "-h", str(bad), "--config-dir", config_dir)
    assert code == 1
    assert "line 2" in out.err and str(bad) in out.err
    assert out.out == ""

    code, out = score(capsys, "score", "der", "-r", str(tmp_path / "absent.rttm"), "-h", str(bad), "--config-dir", config_dir)
    assert code == 1


def test_invalid_configuration_values_exit_one(capsys, files, config_dir):
    code, out = score(
        capsys, "plan-chunks", "-i", files["rttm"], "--max-segments", "1", "--max-per-speaker", "3", "--config-dir", config_dir
    )
    assert code == 1
    assert "exceeds" in out.err
