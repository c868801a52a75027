import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptl.arith import DomainError, icbrt, is_squarefree
from ptl.powerful import consecutive_runs, decompose_powerful, is_powerful, powerful_up_to


def spf_table(limit):
    """Smallest-prime-factor sieve; an oracle independent of a^2 b^3 generation."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def powerful_by_factoring(limit):
    spf = spf_table(limit)
    out = [1]
    for n in range(2, limit + 1):
        m, ok = n, True
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e == 1:
                ok = False
                break
        if ok:
            out.append(n)
    return out


@pytest.mark.parametrize("n, expected", [(8, True), (12, False), (9800, True), (1, True), (0, False), (-8, False)])
def test_is_powerful(n, expected):
    assert is_powerful(n) is expected


@pytest.mark.parametrize("n, a, b", [(72, 3, 2), (64, 8, 1), (-8, 1, -2), (1, 1, 1), (-1, 1, -1)])
def test_decompose_examples(n, a, b):
    d = decompose_powerful(n)
    assert (d.a, d.b, d.n) == (a, b, n)


@pytest.mark.parametrize("n", [0, 12, -12, 2])
def test_decompose_rejects(n):
    with pytest.raises(DomainError):
        decompose_powerful(n)


def test_powerful_up_to_small():
    assert powerful_up_to(10) == [1, 4, 8, 9]
    assert powerful_up_to(1) == [1]
    oracle = powerful_by_factoring(100)
    assert len(powerful_up_to(100)) == len(oracle) == 14


def test_powerful_up_to_matches_factoring_oracle_1e6():
    assert powerful_up_to(10**6) == powerful_by_factoring(10**6)


def test_decomposition_roundtrip_all_powerful_to_1e6():
    for n in powerful_up_to(10**6):
        d = decompose_powerful(n)
        assert d.a**2 * d.b**3 == n
        assert is_squarefree(d.b)


def test_decomposition_unique_to_1e4():
    pows = powerful_up_to(10**4)
    reps = {}
    for b in range(1, icbrt(10**4) + 1):
        if not is_squarefree(b):
            continue
        a = 1
        while a * a * b**3 <= 10**4:
            reps.setdefault(a * a * b**3, []).append((a, b))
            a += 1
    for n in pows:
        assert len(reps[n]) == 1
        d = decompose_powerful(n)
        assert reps[n] == [(d.a, d.b)]
    assert sorted(reps) == pows


@given(st.integers(min_value=1, max_value=10**4))
def test_cubes_are_powerful(x):
    limit = 10**12
    assert is_powerful(x**3)
    if x**3 <= 10**6:
        assert x**3 in set(powerful_up_to(10**6))
    assert x**3 <= limit


def test_runs_examples():
    assert consecutive_runs(10, 2) == [8]
    assert consecutive_runs(300, 2) == [8, 288]
    assert 288 == 2**5 * 3**2 and 289 == 17**2


def test_runs_of_three_to_1e6():
    pows = powerful_by_factoring(10**6)
    s = set(pows)
    assert [n for n in pows if n + 1 in s and n + 2 in s] == []
    assert consecutive_runs(10**6, 3) == []


def test_runs_pairs_match_oracle():
    pows = powerful_by_factoring(10**5)
    s = set(pows)
    assert consecutive_runs(10**5, 2) == [n for n in pows if n + 1 in s and n + 1 <= 10**5]


def test_runs_bad_args():
    with pytest.raises(DomainError):
        consecutive_runs(10, 1)
    with pytest.raises(DomainError):
        consecutive_runs(2, 3)
