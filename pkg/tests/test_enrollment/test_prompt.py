import json

import pytest

from diarasr.core import Segment
from diarasr.enrollment import (
    DEFAULT_INSTRUCTION,
    assemble_prompt,
    build_triplets,
    dump_prompts,
    load_prompts,
)
from diarasr.utils import EnrollmentError, FormatError


@pytest.fixture
def prompt(meeting, embeddings):
    triplets = build_triplets(meeting, embeddings, (0.0, 10.0))
    return assemble_prompt(DEFAULT_INSTRUCTION, triplets, [t.source_segment.words for t in triplets])


def test_three_triplets_from_two_speakers(prompt):
    assert len(prompt) == 3
    assert [t.speaker for t in prompt.triplets] == ["spkA", "spkB", "spkA"]
    assert prompt.labels == ("hello there", "good morning everyone", "shall we start")


def test_inference_layout_and_empty_prompt(prompt):
    unlabeled = assemble_prompt("go", prompt.triplets)
    assert unlabeled.labels == ("", "", "")
    empty = assemble_prompt("go", [])
    assert len(empty) == 0 and empty.labels == ()


def test_label_count_must_match(prompt):
    with pytest.raises(EnrollmentError, match="3 triplets but 2 labels"):
        assemble_prompt("go", prompt.triplets, ["a", "b"])


def test_document_round_trip(prompt):
    text = dump_prompts([prompt, assemble_prompt("empty", [])])
    again = load_prompts(text)
    assert again == [prompt, assemble_prompt("empty", [])]
    assert dump_prompts(again) == text


def test_document_carries_raw_vectors(prompt):
    record = json.loads(dump_prompts([prompt]))["records"][0]
    assert record["triplets"][0]["embedding"] == [1.0, 0.0, 0.0]
    assert record["triplets"][1]["speaker"] == "spkB"
    assert record["labels"][2] == "shall we start"


def test_malformed_documents_raise_format_error(prompt):
    with pytest.raises(FormatError):
        load_prompts("not json")
    record = json.loads(dump_prompts([prompt]))
    record["records"][0]["labels"].pop()
    with pytest.raises(FormatError, match="labels"):
        load_prompts(json.dumps(record))
    record = json.loads(dump_prompts([prompt]))
    record["records"][0]["triplets"][0]["start_norm"] = 0.9
    record["records"][0]["triplets"][0]["end_norm"] = 0.1
    with pytest.raises(FormatError):
        load_prompts(json.dumps(record))


def test_source_segment_survives(prompt):
    (again,) = load_prompts(dump_prompts([prompt]))
    assert again.triplets[1].source_segment == Segment("s1", "spkB", 2.25, 4.125, "good morning everyone")
