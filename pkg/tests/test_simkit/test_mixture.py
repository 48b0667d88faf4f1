import numpy as np
import pytest

from diarasr.core import Segment, SegmentList, SpeakerEmbedding
from diarasr.simkit import (
    MixtureConfig,
    Utterance,
    UtterancePool,
    calibrate_gap_range,
    child_seeds,
    mean_overlap,
    mix_pcm,
    name_seed,
    overlap_ratio,
    overlap_time,
    pcm_bytes,
    rng_streams,
    sample_conversation_window,
    simulate_mixture,
    synthetic_pool,
)
from diarasr.utils import Config, ConfigError, SimulationError


@pytest.fixture(scope="module")
def pool():
    return synthetic_pool(6, utterances_per_speaker=6, seed=3)


def two_voices(duration=5.0, samples=None):
    voice = SpeakerEmbedding((1.0, 0.0))
    return UtterancePool(
        (
            Utterance("a", duration, "one two", voice, samples),
            Utterance("b", duration, "three four", SpeakerEmbedding((0.0, 1.0)), samples),
        )
    )


def grid_overlap_ratio(segs, step=1e-3):
    extent = segs.extent()
    times = (np.arange(int(np.ceil(extent[1] / step))) + 0.5) * step
    level = np.zeros_like(times, dtype=np.int64)
    for _, group in segs.by_speaker().items():
        on = np.zeros_like(times, dtype=bool)
        for seg in group:
            on |= (times >= seg.start) & (times < seg.end)
        level += on
    active = np.count_nonzero(level >= 1)
    return np.count_nonzero(level >= 2) / active if active else 0.0


def test_seed_streams():
    a, b = rng_streams(5, 2)
    again, _ = rng_streams(5, 2)
    assert a.random() == again.random()
    assert b.random() != rng_streams(5, 2)[0].random()
    assert child_seeds(1, 3) == child_seeds(1, 3)
    assert len(set(child_seeds(1, 3))) == 3
    assert name_seed("spkA") == name_seed("spkA") != name_seed("spkA", seed=1)
    with pytest.raises(ConfigError):
        rng_streams(-1, 1)
    with pytest.raises(ConfigError):
        child_seeds(2**64, 1)


def test_overlap_ratio_examples():
    assert overlap_ratio(SegmentList.of([Segment("s", "a", 0, 5), Segment("s", "b", 3, 8)])) == 0.25
    assert overlap_ratio(SegmentList.of([Segment("s", "a", 0, 5), Segment("s", "b", 0, 5)])) == 1.0
    assert overlap_ratio(SegmentList.of([Segment("s", "a", 0, 1), Segment("s", "b", 2, 3)])) == 0.0
    assert overlap_ratio(SegmentList()) == 0.0
    # a speaker overlapping themselves is still one active speaker
    assert overlap_ratio(SegmentList.of([Segment("s", "a", 0, 5), Segment("s", "a", 3, 8)])) == 0.0


def test_overlap_ratio_matches_grid(random_session, rng):
    for _ in range(100):
        segs = random_session(rng, n_speakers=int(rng.integers(1, 5)), horizon=40.0, words=False)
        assert overlap_ratio(segs) == pytest.approx(grid_overlap_ratio(segs), abs=1e-6)


def test_overlap_time_sums_sessions():
    segs = SegmentList.of(
        [Segment("s1", "a", 0, 5), Segment("s1", "b", 3, 8), Segment("s2", "a", 0, 5), Segment("s2", "b", 3, 8)]
    )
    assert overlap_time(segs) == (4.0, 16.0)


def test_two_utterances_with_a_fixed_negative_gap():
    plan = simulate_mixture(two_voices(), 2, max_duration=8.0, gap_range=(-2.0, -2.0), seed=0)
    assert [(s.start, s.end) for s in plan.reference] == [(0.0, 5.0), (3.0, 8.0)]
    assert plan.overlap_ratio == 0.25
    assert plan.duration == 8.0


def test_single_speaker_never_overlaps(pool):
    for seed in range(20):
        plan = simulate_mixture(pool, 1, gap_range=(-3.0, 0.5), seed=seed)
        assert plan.overlap_ratio == 0.0
        assert len(plan.speakers) == 1


def test_mixture_is_valid_and_deterministic(pool):
    for seed in range(50):
        n = 2 + seed % 3
        plan = simulate_mixture(pool, n, gap_range=(-1.5, 0.5), seed=seed)
        assert plan == simulate_mixture(pool, n, gap_range=(-1.5, 0.5), seed=seed)
        assert all(0.0 <= s.start and s.end <= 30.0 for s in plan.reference)
        assert plan.overlap_ratio == overlap_ratio(plan.reference)
        assert len(plan.speakers) <= n
        assert plan.reference.sessions == [f"mix-{seed}"]
        placed = sorted((pool[p.utterance_index].speaker, p.offset) for p in plan.placements)
        assert placed == sorted((s.speaker, s.start) for s in plan.reference)


def test_utterance_limit_per_speaker(pool):
    plan = simulate_mixture(pool, 2, max_duration=60.0, seed=4, max_utterances_per_speaker=2)
    counts = [sum(1 for s in plan.reference if s.speaker == spk) for spk in plan.speakers]
    assert max(counts) <= 2


def test_simulation_errors(pool):
    with pytest.raises(SimulationError, match="empty"):
        simulate_mixture(UtterancePool(()), 1)
    with pytest.raises(SimulationError, match="distinct speakers"):
        simulate_mixture(pool, 7)
    with pytest.raises(SimulationError):
        simulate_mixture(pool, 0)
    with pytest.raises(ConfigError):
        simulate_mixture(pool, 2, gap_range=(1.0, -1.0))


def test_mixture_config_from_settings(tmp_path):
    cfg = MixtureConfig.from_settings(Config(str(tmp_path)))
    assert cfg == MixtureConfig(30.0, -1.0, 1.0, None)
    with pytest.raises(ConfigError):
        MixtureConfig(max_duration=0.0)


def test_calibration_hits_target(pool):
    gaps = calibrate_gap_range(pool, 3, target_overlap=0.2, seeds=range(20))
    assert gaps[1] - gaps[0] == pytest.approx(1.0)
    # held-out seeds
    assert mean_overlap(pool, 3, gaps, range(100, 200)) == pytest.approx(0.2, abs=0.05)


def test_calibration_clamps_unreachable_targets(pool, log_messages):
    assert calibrate_gap_range(pool, 2, target_overlap=1.0, seeds=range(3)) == (-10.5, -9.5)
    assert any("unreachable" in m for m in log_messages)
    with pytest.raises(SimulationError):
        calibrate_gap_range(pool, 2, target_overlap=1.5)


def test_mix_pcm_saturates():
    loud = np.full(16000, 30000, dtype=np.int16)
    voices = two_voices(duration=1.0, samples=loud)
    plan = simulate_mixture(voices, 2, max_duration=1.5, gap_range=(-0.5, -0.5))
    mix = mix_pcm(plan, voices, sample_rate=16000)
    assert mix.dtype == np.int16 and len(mix) == 24000
    assert mix[0] == 30000 and mix[12000] == 32767 and mix[-1] == 30000

    with pytest.raises(SimulationError, match="no PCM"):
        mix_pcm(simulate_mixture(two_voices(), 2), two_voices())


def test_pcm_bytes_little_endian():
    assert pcm_bytes(np.array([1, -2], dtype=np.int16)) == b"\x01\x00\xfe\xff"


def test_conversation_window_of_a_short_session(meeting):
    window, kept = sample_conversation_window(meeting, max_duration=30.0, seed=1)
    assert window == (0.5, 7.75)
    assert [(s.start, s.end) for s in kept] == [(0.0, 2.0), (1.75, 3.625), (4.5, 7.25)]
    assert [s.words for s in kept] == [s.words for s in meeting]


def test_conversation_window_keeps_contained_segments(random_session, rng):
    segs = random_session(rng, n_segments=30, horizon=120.0)
    for seed in range(20):
        (start, end), kept = sample_conversation_window(segs, max_duration=20.0, seed=seed)
        assert 10.0 <= end - start <= 20.0
        assert all(0.0 <= s.start and s.end <= end - start + 1e-9 for s in kept)
    with pytest.raises(SimulationError, match="one session"):
        sample_conversation_window(segs + random_session(rng, session_id="s2"))
