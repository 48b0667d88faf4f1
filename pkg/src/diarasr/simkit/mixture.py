"""On-the-fly multi-speaker mixture simulation.

Utterances from ``n_speakers`` distinct speakers are laid out one after the
other with a uniform random gap; a negative gap starts the next utterance
before the previous one ends, which is how overlap enters the mixture. The
result is metadata first (placements plus a reference SegmentList); PCM is
only mixed when the pool carries sample buffers.
"""

from collections import Counter
from dataclasses import dataclass, field
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..core.segments import Segment, SegmentList
from ..metrics.der import speaker_tracks
from ..utils.config import Config
from ..utils.errors import ConfigError, SimulationError
from .pool import UtterancePool
from .seeding import check_seed, rng_streams

DEFAULT_MAX_DURATION = 30.0
DEFAULT_GAP_RANGE = (-1.0, 1.0)
DEFAULT_SAMPLE_RATE = 16000
# hard stop for pools of very short utterances
MAX_PLACEMENTS = 10_000


@dataclass(frozen=True)
class MixtureConfig:
    max_duration: float = DEFAULT_MAX_DURATION
    gap_min: float = DEFAULT_GAP_RANGE[0]
    gap_max: float = DEFAULT_GAP_RANGE[1]
    max_utterances_per_speaker: Optional[int] = None

    def __post_init__(self):
        if not self.max_duration > 0:
            raise ConfigError(f"max_duration must be positive, got {self.max_duration}")
        if not (math.isfinite(self.gap_min) and math.isfinite(self.gap_max)):
            raise ConfigError("gap range must be finite")
        if self.gap_min > self.gap_max:
            raise ConfigError(f"gap range [{self.gap_min}, {self.gap_max}] is empty")
        if self.max_utterances_per_speaker is not None and self.max_utterances_per_speaker <= 0:
            raise ConfigError("max_utterances_per_speaker must be positive when set")

    @property
    def gap_range(self) -> Tuple[float, float]:
        return (self.gap_min, self.gap_max)

    @classmethod
    def from_settings(cls, config: Config) -> "MixtureConfig":
        limit = config.get("settings.simulation.max_utterances_per_speaker")
        try:
            return cls(
                max_duration=float(config.get("settings.simulation.max_duration", DEFAULT_MAX_DURATION)),
                gap_min=float(config.get("settings.simulation.gap_min", DEFAULT_GAP_RANGE[0])),
                gap_max=float(config.get("settings.simulation.gap_max", DEFAULT_GAP_RANGE[1])),
                max_utterances_per_speaker=None if limit is None else int(limit),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid simulation settings: {e}") from e


@dataclass(frozen=True)
class Placement:
    utterance_index: int
    offset: float


@dataclass(frozen=True)
class MixturePlan:
    session_id: str
    placements: Tuple[Placement, ...]
    reference: SegmentList
    overlap_ratio: float
    max_duration: float = DEFAULT_MAX_DURATION
    seed: int = 0

    @property
    def speakers(self) -> List[str]:
        return self.reference.speakers

    @property
    def duration(self) -> float:
        extent = self.reference.extent()
        return extent[1] if extent else 0.0


def overlap_time(segs: Iterable[Segment]) -> Tuple[float, float]:
    """(time with >= 2 active speakers, time with >= 1), summed over sessions."""
    overlapped = active = 0.0
    for session in SegmentList.of(segs).by_session().values():
        events: List[Tuple[float, int]] = []
        for track in speaker_tracks(session).values():
            for start, end in track:
                events.append((start, 1))
                events.append((end, -1))
        events.sort()
        level = 0
        previous = None
        for time, delta in events:
            if previous is not None and time > previous:
                if level >= 1:
                    active += time - previous
                if level >= 2:
                    overlapped += time - previous
            level += delta
            previous = time
    return overlapped, active


def overlap_ratio(segs: Iterable[Segment]) -> float:
    overlapped, active = overlap_time(segs)
    return overlapped / active if active > 0 else 0.0


def simulate_mixture(
    pool: UtterancePool,
    n_speakers: int,
    max_duration: float = DEFAULT_MAX_DURATION,
    gap_range: Tuple[float, float] = DEFAULT_GAP_RANGE,
    seed: int = 0,
    max_utterances_per_speaker: Optional[int] = None,
    session_id: Optional[str] = None,
) -> MixturePlan:
    """Place utterances sequentially until the next one would pass ``max_duration``.

    The first ``n_speakers`` placements visit every chosen speaker once; after
    that the speaker is drawn uniformly among those allowed, never repeating
    the previous speaker while another is available. An utterance never starts
    before the previous placement or before its own speaker's last utterance
    has ended, so a speaker does not overlap themselves.
    """
    cfg = MixtureConfig(max_duration, gap_range[0], gap_range[1], max_utterances_per_speaker)
    seed = check_seed(seed)
    if len(pool) == 0:
        raise SimulationError("utterance pool is empty")
    if n_speakers <= 0:
        raise SimulationError(f"n_speakers must be positive, got {n_speakers}")
    by_speaker = pool.indices_by_speaker()
    if len(by_speaker) < n_speakers:
        raise SimulationError(
            f"pool has {len(by_speaker)} distinct speakers, {n_speakers} requested"
        )

    speaker_rng, utterance_rng, gap_rng = rng_streams(seed, 3)
    chosen = [str(s) for s in speaker_rng.choice(sorted(by_speaker), size=n_speakers, replace=False)]
    queue = list(chosen)
    session_id = session_id or f"mix-{seed}"

    placements: List[Placement] = []
    segments: List[Segment] = []
    used: Counter = Counter()
    speaker_end: Dict[str, float] = {}
    previous: Optional[Tuple[str, float, float]] = None

    while len(placements) < MAX_PLACEMENTS:
        if queue:
            speaker = queue.pop(0)
        else:
            candidates = [
                s for s in chosen
                if (cfg.max_utterances_per_speaker is None or used[s] < cfg.max_utterances_per_speaker)
                and (previous is None or s != previous[0] or n_speakers == 1)
            ]
            if not candidates:
                break
            speaker = candidates[int(speaker_rng.integers(len(candidates)))]

        indices = by_speaker[speaker]
        index = indices[int(utterance_rng.integers(len(indices)))]
        utt = pool[index]

        if previous is None:
            offset = 0.0
        else:
            gap = float(gap_rng.uniform(cfg.gap_min, cfg.gap_max))
            offset = max(previous[1], previous[2] + gap, speaker_end.get(speaker, 0.0))
        if offset + utt.duration > cfg.max_duration:
            break

        end = offset + utt.duration
        placements.append(Placement(index, offset))
        segments.append(Segment(session_id, speaker, offset, end, utt.words))
        used[speaker] += 1
        speaker_end[speaker] = end
        previous = (speaker, offset, end)

    if len(used) < n_speakers:
        logger.warning(
            f"mixture {session_id}: only {len(used)} of {n_speakers} speakers fit in {cfg.max_duration}s"
        )

    reference = SegmentList.of(segments).sorted()
    return MixturePlan(
        session_id=session_id,
        placements=tuple(placements),
        reference=reference,
        overlap_ratio=overlap_ratio(reference),
        max_duration=cfg.max_duration,
        seed=seed,
    )


def mean_overlap(
    pool: UtterancePool,
    n_speakers: int,
    gap_range: Tuple[float, float],
    seeds: Sequence[int],
    max_duration: float = DEFAULT_MAX_DURATION,
) -> float:
    ratios = [
        simulate_mixture(pool, n_speakers, max_duration, gap_range, seed).overlap_ratio
        for seed in seeds
    ]
    return float(np.mean(ratios))


def calibrate_gap_range(
    pool: UtterancePool,
    n_speakers: int,
    target_overlap: float,
    width: float = 1.0,
    max_duration: float = DEFAULT_MAX_DURATION,
    seeds: Sequence[int] = tuple(range(50)),
    search: Tuple[float, float] = (-10.0, 5.0),
    iterations: int = 30,
) -> Tuple[float, float]:
    """Bisect the gap-range centre until the mean overlap over ``seeds`` meets the target.

    Mean overlap is non-increasing in the centre, so a plain bisection works.
    Targets outside the reachable range clamp to the search bounds.
    """
    if not 0.0 <= target_overlap <= 1.0:
        raise SimulationError(f"target overlap must be in [0, 1], got {target_overlap}")
    if width < 0:
        raise SimulationError(f"width must be non-negative, got {width}")

    def gaps(centre: float) -> Tuple[float, float]:
        return (centre - width / 2, centre + width / 2)

    def f(centre: float) -> float:
        return mean_overlap(pool, n_speakers, gaps(centre), seeds, max_duration)

    lo, hi = search
    if f(lo) <= target_overlap:
        logger.warning(f"overlap target {target_overlap:.3f} unreachable; using widest overlap")
        return gaps(lo)
    if f(hi) >= target_overlap:
        logger.warning(f"overlap target {target_overlap:.3f} below the minimum; using largest gaps")
        return gaps(hi)

    for _ in range(iterations):
        mid = (lo + hi) / 2
        if f(mid) > target_overlap:
            lo = mid
        else:
            hi = mid
    centre = (lo + hi) / 2
    logger.debug(f"calibrated gap centre {centre:.4f} for overlap target {target_overlap:.3f}")
    return gaps(centre)


def mix_pcm(plan: MixturePlan, pool: UtterancePool, sample_rate: int = DEFAULT_SAMPLE_RATE) -> np.ndarray:
    """Sum the placed utterances into one int16 track, saturating at the int16 range."""
    if sample_rate <= 0:
        raise SimulationError(f"sample rate must be positive, got {sample_rate}")
    length = int(math.ceil(plan.duration * sample_rate))
    mix = np.zeros(length, dtype=np.int32)
    for placement in plan.placements:
        samples = pool[placement.utterance_index].samples
        if samples is None:
            raise SimulationError(f"utterance {placement.utterance_index} has no PCM samples")
        start = int(round(placement.offset * sample_rate))
        chunk = np.asarray(samples, dtype=np.int32)[: max(0, length - start)]
        mix[start : start + len(chunk)] += chunk
    info = np.iinfo(np.int16)
    return np.clip(mix, info.min, info.max).astype(np.int16)


def pcm_bytes(samples: np.ndarray) -> bytes:
    """16-bit little-endian mono."""
    return np.asarray(samples, dtype=np.int16).astype("<i2").tobytes()


def sample_conversation_window(
    segs: SegmentList,
    max_duration: float = DEFAULT_MAX_DURATION,
    seed: int = 0,
    min_duration: Optional[float] = None,
) -> Tuple[Tuple[float, float], SegmentList]:
    """Cut a variable-length window from a real session.

    The window length is uniform in [min_duration, max_duration] (default
    lower bound max_duration / 2) and its start uniform over the session
    extent. Segments entirely inside the window are kept and re-timed to
    window-relative seconds; segments crossing the window edges are left out
    so every kept transcript stays exact.
    """
    if len(segs.sessions) != 1:
        raise SimulationError(f"expected one session, got {len(segs.sessions)}")
    if not max_duration > 0:
        raise SimulationError(f"max_duration must be positive, got {max_duration}")
    min_duration = max_duration / 2 if min_duration is None else min_duration
    if not 0 < min_duration <= max_duration:
        raise SimulationError(f"invalid window length range [{min_duration}, {max_duration}]")

    length_rng, start_rng = rng_streams(seed, 2)
    first, last = segs.extent()
    length = min(float(length_rng.uniform(min_duration, max_duration)), last - first)
    start = first + float(start_rng.uniform(0.0, max(0.0, last - first - length)))
    window = (start, start + length)

    kept = [
        Segment(s.session_id, s.speaker, s.start - start, s.end - start, s.words)
        for s in segs.sorted()
        if s.start >= window[0] and s.end <= window[1]
    ]
    return window, SegmentList.of(kept)
