"""Reference implementations the library is checked against.

Deliberately naive and written without looking at the optimized code paths.
"""

from fractions import Fraction
import math


def levenshtein_matrix(a, b):
    """Full (len(a)+1) x (len(b)+1) dynamic-programming table."""
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            sub = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + sub)
    return d[len(a)][len(b)]


def quantile_reference(values, q):
    """Type-7 quantile in exact rational arithmetic, rounded once at the end."""
    s = sorted(Fraction(v) for v in values)
    h = (len(s) - 1) * Fraction(q)
    j = math.floor(h)
    g = h - j
    if j + 1 >= len(s):
        return float(s[j])
    return float(s[j] + g * (s[j + 1] - s[j]))


def mean_reference(values):
    return float(sum(Fraction(v) for v in values) / len(values))


def std_reference(values):
    if len(values) < 2:
        return 0.0
    xs = [Fraction(v) for v in values]
    m = sum(xs) / len(xs)
    return math.sqrt(float(sum((x - m) ** 2 for x in xs) / (len(xs) - 1)))
