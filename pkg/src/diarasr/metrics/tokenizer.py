from dataclasses import dataclass
from enum import Enum
from typing import List, Union


class TokenizerMode(Enum):
    """Word mode for space-delimited languages, char mode for CER-style scoring (Mandarin)."""

    WORD = "word"
    CHAR = "char"


@dataclass(frozen=True)
class Tokenizer:
    mode: TokenizerMode = TokenizerMode.WORD

    @classmethod
    def parse(cls, mode: Union[str, TokenizerMode, "Tokenizer"]) -> "Tokenizer":
        if isinstance(mode, Tokenizer):
            return mode
        return cls(TokenizerMode(mode))

    @property
    def joiner(self) -> str:
        return " " if self.mode is TokenizerMode.WORD else ""


WORD = Tokenizer(TokenizerMode.WORD)
CHAR = Tokenizer(TokenizerMode.CHAR)


def tokenize(text: str, tok: Tokenizer = WORD) -> List[str]:
    if tok.mode is TokenizerMode.WORD:
        return text.split()
    # every script is split per codepoint, Latin included
    return [ch for ch in text if not ch.isspace()]
