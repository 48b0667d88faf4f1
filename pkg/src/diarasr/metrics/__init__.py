from .tokenizer import CHAR, WORD, Tokenizer, TokenizerMode, tokenize
from .alignment import (
    ErrorCounts,
    TimedWord,
    edit_distance,
    levenshtein,
    time_constrained_edit_distance,
    words_with_times,
)
from .assignment import solve_assignment
from .wer import UNMATCHED, AlignmentReport, cpwer, tcpwer
from .der import DerReport, der

__all__ = [
    "CHAR",
    "WORD",
    "Tokenizer",
    "TokenizerMode",
    "tokenize",
    "ErrorCounts",
    "TimedWord",
    "edit_distance",
    "levenshtein",
    "time_constrained_edit_distance",
    "words_with_times",
    "solve_assignment",
    "UNMATCHED",
    "AlignmentReport",
    "cpwer",
    "tcpwer",
    "DerReport",
    "der",
]
