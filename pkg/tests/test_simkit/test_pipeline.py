import math

import pytest

from diarasr.chunker import ALIMEETING, Chunk, plan_chunks
from diarasr.core import Segment, SegmentList
from diarasr.enrollment import build_triplets
from diarasr.metrics import tcpwer
from diarasr.simkit import (
    build_corpus,
    dump_corpus,
    dump_pool,
    hypothesis_from_labels,
    load_corpus,
    load_pool,
    oracle_asr,
    simulate_mixture,
    speaker_embeddings,
    synthetic_pool,
)
from diarasr.utils import FormatError, SimulationError


@pytest.fixture(scope="module")
def pool():
    return synthetic_pool(6, utterances_per_speaker=6, seed=11)


def chunk_over(segment, window, embeddings):
    triplets = build_triplets([segment], embeddings, window)
    return Chunk(segment.session_id, window, (segment,), tuple(triplets))


def test_oracle_returns_exact_words_for_whole_segments(meeting, embeddings):
    (chunk,) = plan_chunks(meeting, ALIMEETING, embeddings)
    assert oracle_asr(chunk, meeting) == ["hello there", "good morning everyone", "shall we start"]


def test_oracle_splits_clipped_segments_by_token_midpoint(embeddings):
    seg = Segment("s1", "spkA", 0.0, 4.0, "a b c d")
    reference = SegmentList.of([seg])
    assert oracle_asr(chunk_over(seg, (0.0, 2.0), embeddings), reference) == ["a b"]
    assert oracle_asr(chunk_over(seg, (2.0, 4.0), embeddings), reference) == ["c d"]


def test_oracle_without_covering_reference(embeddings, log_messages):
    seg = Segment("s1", "spkA", 0.0, 4.0, "a b c d")
    chunk = chunk_over(seg, (0.0, 4.0), embeddings)
    assert oracle_asr(chunk, SegmentList.of([Segment("s1", "spkB", 0.0, 4.0, "x")])) == [""]
    assert any("covers" in m for m in log_messages)


def test_hypothesis_from_labels(meeting, embeddings):
    (chunk,) = plan_chunks(meeting, ALIMEETING, embeddings)
    hyp = hypothesis_from_labels(chunk, oracle_asr(chunk, meeting))
    assert hyp == meeting
    with pytest.raises(SimulationError):
        hypothesis_from_labels(chunk, ["only one"])


@pytest.mark.parametrize("collar", [0.0, 1.0, 5.0, math.inf])
def test_simulate_plan_decode_score_is_exact(pool, collar):
    for seed in range(100):
        plan = simulate_mixture(pool, 2 + seed % 3, gap_range=(-1.0, 1.0), seed=seed)
        embeddings = speaker_embeddings(pool, [p.utterance_index for p in plan.placements])
        chunks = plan_chunks(plan.reference, ALIMEETING, embeddings)
        hyp = SegmentList()
        for chunk in chunks:
            hyp = hyp + hypothesis_from_labels(chunk, oracle_asr(chunk, plan.reference))
        assert tcpwer(plan.reference, hyp, collar).rate == 0.0


def test_synthetic_pool_is_seeded(pool):
    assert synthetic_pool(6, utterances_per_speaker=6, seed=11) == pool
    assert synthetic_pool(6, utterances_per_speaker=6, seed=12) != pool
    assert pool.speakers == [f"spk{i:02d}" for i in range(6)]
    assert all(1.0 <= u.duration <= 6.0 and u.words for u in pool.utterances)
    with pytest.raises(SimulationError):
        synthetic_pool(0)


def test_pool_document_round_trip(pool):
    assert load_pool(dump_pool(pool)) == pool
    with pytest.raises(FormatError):
        load_pool('{"utterances": [{"speaker": "a"}]}')
    with pytest.raises(FormatError):
        load_pool('{"utterances": [{"speaker": "a", "duration": 0, "words": "", "embedding": [1.0]}]}')


def test_corpus_is_reproducible_across_worker_counts(pool):
    serial = build_corpus(pool, 6, seed=7, workers=1)
    parallel = build_corpus(pool, 6, seed=7, workers=4)
    assert dump_corpus(serial) == dump_corpus(parallel)
    assert [item.plan.session_id for item in serial] == [f"sim-{i:05d}" for i in range(6)]
    assert all(2 <= len(item.plan.speakers) <= 4 for item in serial)
    for item in serial:
        assert list(item.prompt.labels) == [t.source_segment.words for t in item.prompt.triplets]


def test_corpus_document_round_trip(pool):
    items = build_corpus(pool, 3, seed=1, workers=2)
    loaded = load_corpus(dump_corpus(items))
    assert [segs for segs, _ in loaded] == [item.plan.reference for item in items]
    assert [prompt for _, prompt in loaded] == [item.prompt for item in items]
    with pytest.raises(FormatError):
        load_corpus("[]")


def test_corpus_argument_checks(pool):
    with pytest.raises(SimulationError):
        build_corpus(pool, -1)
    with pytest.raises(SimulationError):
        build_corpus(pool, 1, n_speakers_range=(3, 2))
    assert build_corpus(pool, 0) == []
