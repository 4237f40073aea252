"""Shared test oracles: deliberately simple, independent implementations."""

import itertools
import math
from fractions import Fraction

from coxkit.linalg import IntMatrix, det, rational_solve


def find_gl2z(src_cols, dst_cols):
    """Integer 2x2 matrix T with det +-1 and T*src_i = dst_i for all i."""
    pairs = list(zip(src_cols, dst_cols))
    for (s1, d1), (s2, d2) in itertools.combinations(pairs, 2):
        S = IntMatrix([s1, s2])
        if det(S) == 0:
            continue
        rows = []
        ok = True
        for j in range(2):
            x = rational_solve(S, (d1[j], d2[j]))
            if x is None or any(Fraction(v).denominator != 1 for v in x):
                ok = False
                break
            rows.append([int(v) for v in x])
        if not ok:
            continue
        T = IntMatrix(rows)
        if abs(det(T)) != 1:
            continue
        if all(tuple(T.apply(s)) == tuple(d) for s, d in pairs):
            return T
    return None


def shoelace(vertices):
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        total += Fraction(x1) * Fraction(y2) - Fraction(x2) * Fraction(y1)
    return abs(total) / 2


def falling(a, i):
    out = 1
    for t in range(i):
        out *= a - t
    return out
