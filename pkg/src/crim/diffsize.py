"""Levenshtein word distance, the per-commit contribution size.

Text is split on runs of whitespace, so a change that only re-indents or
re-wraps a file has size 0.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

# Below this many DP cells the plain-Python loop beats numpy's per-row overhead.
_VECTORIZE_MIN_CELLS = 4096
_BINARY_SNIFF_BYTES = 8000


def tokenize(text: str) -> list[str]:
    """Split ``text`` on maximal runs of Unicode whitespace."""
    return text.split()


def word_levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Minimum number of token insertions, deletions and substitutions turning a into b."""
    # Shared prefix and suffix never contribute edits.
    start = 0
    limit = min(len(a), len(b))
    while start < limit and a[start] == b[start]:
        start += 1
    end_a, end_b = len(a), len(b)
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a = a[start:end_a]
    b = b[start:end_b]

    if not a or not b:
        return len(a) + len(b)
    if len(a) < len(b):
        a, b = b, a
    if len(a) * len(b) < _VECTORIZE_MIN_CELLS:
        return _levenshtein_rows(a, b)
    return _levenshtein_vectorized(a, b)


def _levenshtein_rows(long: Sequence[str], short: Sequence[str]) -> int:
    prev = list(range(len(long) + 1))
    for i, token in enumerate(short, 1):
        cur = [i]
        for j, other in enumerate(long, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (token != other)))
        prev = cur
    return prev[-1]


def _levenshtein_vectorized(long: Sequence[str], short: Sequence[str]) -> int:
    """Two-row DP with each row computed in numpy.

    The insertion term cur[j-1] + 1 is a running minimum: cur[j] equals
    min over k <= j of (t[k] + j - k), i.e. j + cummin(t[k] - k).
    """
    vocab: dict[str, int] = {}
    long_ids = np.fromiter((vocab.setdefault(t, len(vocab)) for t in long), dtype=np.int64, count=len(long))
    short_ids = [vocab.get(t, -1) for t in short]

    idx = np.arange(len(long) + 1, dtype=np.int64)
    prev = idx.copy()
    tmp = np.empty_like(prev)
    for i, token in enumerate(short_ids, 1):
        cost = long_ids != token
        tmp[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + cost, out=tmp[1:])
        prev = np.minimum.accumulate(tmp - idx) + idx
    return int(prev[-1])


def commit_size(file_pairs: Iterable[tuple[str, str]]) -> int:
    """Sum of word distances over (before, after) text pairs of one commit."""
    return sum(word_levenshtein(tokenize(before), tokenize(after)) for before, after in file_pairs)


def decode_text(data: bytes) -> Optional[str]:
    """Return ``data`` as text, or None when it looks binary (NUL byte or invalid UTF-8)."""
    if b"\x00" in data[:_BINARY_SNIFF_BYTES]:
        return None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return None
