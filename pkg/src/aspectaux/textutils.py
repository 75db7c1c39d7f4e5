"""Small text helpers: tokenization for statistics and the bundled stopword list."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*")


def simple_tokenize(text: str) -> list[str]:
    """Whitespace-plus-punctuation split, lowercased.

    Used for corpus statistics and target detection before a dependency
    parse is attached; parser tokens become canonical afterwards.
    """
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    data = resources.files("aspectaux.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in data.splitlines() if w.strip())


def load_stopwords(path) -> frozenset[str]:
    with open(path, "r", encoding="utf-8") as f:
        return frozenset(w.strip().lower() for w in f if w.strip())
