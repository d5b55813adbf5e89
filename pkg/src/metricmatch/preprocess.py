"""Text cleaning for the averaged-word-vector path.

Transformer backends receive raw text; only the word-vector pipeline goes
through tokenize + stopword removal.
"""

from __future__ import annotations

import re
import unicodedata
from pathlib import Path

# Leading/trailing runs of anything that is not a letter, digit or underscore.
_EDGE_PUNCT = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)
# A token must contain at least one letter to survive cleaning.
_HAS_LETTER = re.compile(r"[^\W\d_]", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split ``text`` into cleaned tokens.

    NFC-normalizes, lowercases, splits on whitespace, strips punctuation from
    token edges (interior hyphens survive), and drops tokens left empty or
    made purely of punctuation/digits.
    """
    text = unicodedata.normalize("NFC", text).lower()
    tokens = []
    for raw in text.split():
        token = _EDGE_PUNCT.sub("", raw)
        if token and _HAS_LETTER.search(token):
            tokens.append(token)
    return tokens


def remove_stopwords(tokens: list[str], stopwords: set[str]) -> list[str]:
    """Order-preserving filter; may return an empty list."""
    return [t for t in tokens if t not in stopwords]


def clean(text: str, stopwords: set[str]) -> list[str]:
    return remove_stopwords(tokenize(text), stopwords)


def load_stopwords(path: str | Path) -> set[str]:
    """Read a stopword file: one token per line, ``#`` starts a comment."""
    words: set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return words


def default_stopwords() -> set[str]:
    """The stopword list shipped with the package."""
    return load_stopwords(Path(__file__).parent / "data" / "stopwords.txt")
