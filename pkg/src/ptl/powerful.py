"""Powerful numbers: detection, the a^2 b^3 decomposition, generation, runs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from ptl.arith import DomainError, factor, icbrt, isqrt, is_squarefree


@dataclass(frozen=True)
class PowerfulDecomposition:
    """``n = a**2 * b**3`` with ``a >= 0`` and ``|b|`` squarefree."""

    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.a * self.a * self.b**3 != self.n:
            raise AssertionError(f"bad decomposition of {self.n}: a={self.a}, b={self.b}")


def is_powerful(n: int) -> bool:
    if n < 1:
        return False
    return all(e >= 2 for _, e in factor(n))


def decompose_powerful(n: int) -> PowerfulDecomposition:
    """Unique ``(a, b)`` with ``n = a^2 b^3``, ``b`` squarefree.

    Negative ``n`` is accepted when ``|n|`` is powerful; the sign goes on
    ``b`` since it carries the odd power.
    """
    if n == 0:
        raise DomainError("0 has no powerful decomposition")
    f = factor(n)
    a = b = 1
    for p, e in f:
        if e < 2:
            raise DomainError(f"|{n}| is not powerful ({p}^{e})")
        beta = e % 2
        alpha = (e - 3 * beta) // 2
        a *= p**alpha
        b *= p**beta
    return PowerfulDecomposition(a, f.sign * b, n)


def powerful_up_to(limit: int) -> List[int]:
    """All powerful numbers in ``[1, limit]`` in ascending order.

    Built from ``a^2 b^3`` over squarefree ``b``; no per-integer factoring.
    """
    if limit < 1:
        raise DomainError("limit must be >= 1")
    out = []
    for b in range(1, icbrt(limit) + 1):
        if not is_squarefree(b):
            continue
        b3 = b**3
        for a in range(1, isqrt(limit // b3) + 1):
            out.append(a * a * b3)
    out.sort()
    assert all(x < y for x, y in zip(out, out[1:])), "duplicate a^2 b^3 representation"
    return out


def consecutive_runs(limit: int, run_len: int) -> List[int]:
    """Starts ``n`` of runs ``n, ..., n + run_len - 1`` of powerful numbers, all ``<= limit``."""
    if run_len < 2:
        raise DomainError("run_len must be >= 2")
    if limit < run_len:
        raise DomainError("limit must be >= run_len")
    pows = powerful_up_to(limit)
    starts = []
    streak = 0
    prev = None
    for n in pows:
        streak = streak + 1 if prev is not None and n == prev + 1 else 1
        if streak >= run_len:
            starts.append(n - run_len + 1)
        prev = n
    return starts
