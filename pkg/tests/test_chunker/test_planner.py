import json
from collections import Counter

import numpy as np
import pytest

from diarasr.chunker import (
    ALIMEETING,
    MLC_SLM,
    ChunkConfig,
    ChunkPlanDocument,
    chunk_coverage_check,
    embeddings_consistent,
    plan_chunks,
    plan_from_document,
    plan_to_document,
    split_long_segments,
    validate_chunk,
)
from diarasr.core import Segment, SegmentList
from diarasr.metrics import CHAR
from diarasr.simkit import placeholder_embeddings
from diarasr.utils import Config, ConfigError, EnrollmentError


def test_split_cuts_at_multiples_of_max_duration():
    pieces = split_long_segments([Segment("s1", "A", 0.0, 70.0, "a b c d e f g")], 30.0)
    assert [(p.start, p.end) for p in pieces] == [(0.0, 30.0), (30.0, 60.0), (60.0, 70.0)]
    assert all(p.speaker == "A" and p.session_id == "s1" for p in pieces)
    assert " ".join(p.words for p in pieces) == "a b c d e f g"

    short = Segment("s1", "A", 0.0, 10.0, "x")
    assert list(split_long_segments([short], 30.0)) == [short]
    with pytest.raises(ConfigError):
        split_long_segments([short], 0.0)


def test_split_assigns_tokens_by_midpoint():
    pieces = split_long_segments([Segment("s1", "A", 0.0, 40.0, "one two three four")], 20.0)
    assert [p.words for p in pieces] == ["one two", "three four"]


def test_char_mode_splits_unspaced_transcripts():
    segs = SegmentList.of([Segment("s1", "A", 0.0, 60.0, "你好世界谢谢")])
    chunks = plan_chunks(segs, ALIMEETING, placeholder_embeddings(["A"]), tok=CHAR)
    assert [s.words for c in chunks for s in c.segments] == ["你好世", "界谢谢"]
    assert [c.window for c in chunks] == [(0.0, 30.0), (30.0, 60.0)]
    assert chunk_coverage_check(segs, chunks, 30.0, CHAR)
    assert not chunk_coverage_check(segs, chunks, 30.0)

    assert [p.words for p in split_long_segments(segs, 30.0, "char")] == ["你好世", "界谢谢"]


def test_split_preserves_total_duration(random_session, rng):
    for _ in range(50):
        segs = random_session(rng, horizon=200.0)
        long = SegmentList.of(Segment(s.session_id, s.speaker, s.start, s.start + 10 * s.duration) for s in segs)
        pieces = split_long_segments(long, float(rng.uniform(1.0, 30.0)))
        assert pieces.total_duration() == pytest.approx(long.total_duration(), abs=1e-9)


def test_eleven_one_second_segments_make_two_chunks(embeddings):
    segs = SegmentList.of(Segment("s1", "spkA", float(i), float(i) + 1.0) for i in range(11))
    cfg = ChunkConfig(max_chunk_duration=30.0, max_total_segments=10, max_segments_per_speaker=10)
    chunks = plan_chunks(segs, cfg, embeddings)
    assert [len(c.segments) for c in chunks] == [10, 1]
    assert chunks[0].window == (0.0, 10.0)
    assert chunks[1].window == (10.0, 11.0)


def test_per_speaker_bound_closes_chunk(embeddings):
    segs = SegmentList.of(Segment("s1", "spkA", float(i), float(i) + 0.5) for i in range(5))
    chunks = plan_chunks(segs, ALIMEETING, embeddings)
    assert [len(c.segments) for c in chunks] == [4, 1]


def test_duration_bound_closes_chunk(embeddings):
    segs = SegmentList.of([Segment("s1", "spkA", 0.0, 20.0), Segment("s1", "spkB", 20.0, 31.0)])
    chunks = plan_chunks(segs, ALIMEETING, embeddings)
    assert [c.window for c in chunks] == [(0.0, 20.0), (20.0, 31.0)]


@pytest.mark.parametrize("cfg", [ALIMEETING, MLC_SLM])
def test_fuzzed_plans_cover_and_respect_bounds(random_session, rng, cfg):
    for _ in range(500):
        segs = random_session(
            rng,
            n_speakers=int(rng.integers(1, 5)),
            n_segments=int(rng.integers(1, 40)),
            horizon=float(rng.uniform(10.0, 300.0)),
            words=False,
        )
        embeddings = placeholder_embeddings(sorted(segs.speakers), dim=8)
        chunks = plan_chunks(segs, cfg, embeddings)
        assert chunk_coverage_check(segs, chunks, cfg.max_chunk_duration).ok
        assert all(validate_chunk(c, cfg) == [] for c in chunks)
        assert embeddings_consistent(chunks)
        assert all(0.0 <= t.start_norm < t.end_norm <= 1.0 for c in chunks for t in c.triplets)


def test_planning_is_deterministic(random_session, rng, embeddings):
    segs = random_session(rng, n_segments=30, horizon=120.0)
    names = {f"spk{i}": e for i, e in enumerate(embeddings.values())}
    assert plan_chunks(segs, MLC_SLM, names) == plan_chunks(segs, MLC_SLM, names)


def test_coverage_detects_loss_and_duplication(meeting, embeddings):
    chunks = plan_chunks(meeting, ALIMEETING, embeddings)
    report = chunk_coverage_check(meeting, chunks)
    assert report and report.ok

    extra = SegmentList.of(list(meeting) + [Segment("s1", "spkB", 9.0, 9.5)])
    lossy = chunk_coverage_check(extra, chunks)
    assert not lossy
    assert lossy.missing == (Segment("s1", "spkB", 9.0, 9.5),)

    doubled = chunk_coverage_check(meeting, chunks + chunks)
    assert Counter(doubled.extra) == Counter(meeting)


def test_sessions_are_planned_separately(meeting, embeddings):
    other = SegmentList.of(Segment("s2", s.speaker, s.start, s.end, s.words) for s in meeting)
    chunks = plan_chunks(meeting + other, ALIMEETING, embeddings)
    assert [c.session_id for c in chunks] == ["s1", "s2"]


def test_missing_embedding_is_reported(meeting, embeddings):
    with pytest.raises(EnrollmentError, match="spkB"):
        plan_chunks(meeting, ALIMEETING, {"spkA": embeddings["spkA"]})


def test_validate_chunk_lists_violations(meeting, embeddings):
    (chunk,) = plan_chunks(meeting, ALIMEETING, embeddings)
    tight = ChunkConfig(max_chunk_duration=5.0, max_total_segments=2, max_segments_per_speaker=1)
    problems = validate_chunk(chunk, tight)
    assert len(problems) == 3
    assert any("spkA" in p for p in problems)


def test_plan_document_round_trip(meeting, embeddings):
    chunks = plan_chunks(meeting, ALIMEETING, embeddings)
    document = plan_to_document(chunks, ALIMEETING)
    again = ChunkPlanDocument.model_validate_json(document.model_dump_json())
    assert plan_from_document(again) == chunks
    assert again.config["max_total_segments"] == 10
    written = json.loads(document.model_dump_json())["config"]
    assert written == {"max_chunk_duration": 30.0, "max_total_segments": 10, "max_segments_per_speaker": 4}
    assert isinstance(written["max_total_segments"], int) and isinstance(written["max_segments_per_speaker"], int)


def test_chunk_config_validation_and_presets(tmp_path):
    with pytest.raises(ConfigError):
        ChunkConfig(max_chunk_duration=0.0)
    with pytest.raises(ConfigError):
        ChunkConfig(max_total_segments=0)
    with pytest.raises(ConfigError, match="exceeds"):
        ChunkConfig(max_total_segments=3, max_segments_per_speaker=4)

    config = Config(str(tmp_path))
    assert ChunkConfig.from_settings(config) == ALIMEETING
    assert ChunkConfig.from_settings(config, "mlc_slm") == MLC_SLM
    with pytest.raises(ConfigError, match="unknown chunking preset"):
        ChunkConfig.from_settings(config, "nope")


def test_random_float_layouts_still_cover(rng, embeddings):
    for _ in range(100):
        starts = np.sort(rng.uniform(0, 100, size=12))
        segs = SegmentList.of(
            Segment("s1", f"spk{i % 3}", float(s), float(s + rng.uniform(0.001, 45.0))) for i, s in enumerate(starts)
        )
        names = {f"spk{i}": e for i, e in enumerate(embeddings.values())}
        chunks = plan_chunks(segs, ALIMEETING, names)
        assert chunk_coverage_check(segs, chunks).ok
        assert all(validate_chunk(c, ALIMEETING) == [] for c in chunks)
