import sys

import numpy as np
import pytest
from loguru import logger

from diarasr.core import Segment, SegmentList, SpeakerEmbedding


@pytest.fixture(autouse=True)
def reset_logger():
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def log_messages():
    messages = []
    handler_id = logger.add(lambda m: messages.append(str(m)), level="WARNING", format="{message}")
    yield messages
    logger.remove(handler_id)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def meeting():
    """Three segments, two speakers, times with at most 3 decimals."""
    return SegmentList.of(
        [
            Segment("s1", "spkA", 0.5, 2.5, "hello there"),
            Segment("s1", "spkB", 2.25, 4.125, "good morning everyone"),
            Segment("s1", "spkA", 5.0, 7.75, "shall we start"),
        ]
    )


@pytest.fixture
def embeddings():
    return {
        "spkA": SpeakerEmbedding((1.0, 0.0, 0.0)),
        "spkB": SpeakerEmbedding((0.0, 1.0, 0.0)),
        "spkC": SpeakerEmbedding((0.0, 0.0, 1.0)),
    }


def _random_session(rng, session_id="s1", n_speakers=3, n_segments=8, horizon=60.0, words=True):
    """Random layout on a 1 ms grid; speakers may overlap each other and themselves."""
    segments = []
    for i in range(n_segments):
        speaker = f"spk{int(rng.integers(n_speakers))}"
        start_ms = int(rng.integers(0, int(horizon * 1000) - 500))
        length_ms = int(rng.integers(200, 8000))
        text = " ".join(f"w{int(rng.integers(5))}" for _ in range(int(rng.integers(1, 5)))) if words else None
        segments.append(Segment(session_id, speaker, start_ms / 1000, (start_ms + length_ms) / 1000, text))
    return SegmentList.of(segments)


@pytest.fixture
def random_session():
    return _random_session
