import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptl.arith import DomainError, is_perfect_cube
from ptl.diophantine import (
    MordellCurve,
    MordellPoint,
    NotAnInstance,
    OutsideHypotheses,
    Shape,
    cube_diff_solutions,
    mordell_points,
    solve_quad_cubic,
    split_shapes,
    to_mordell,
)

SK = [(s, k) for s in (1, -1) for k in (1, 3)]


# --- split_shapes -----------------------------------------------------------


def test_split_coprime():
    sh = split_shapes(8, 25, 5)
    assert sh.tag == Shape.CUBE_AND_P2CUBE
    assert sh.assignment == {"R": (1, 2), "S": (25, 1)}
    assert sh.g == 1


def test_split_prime_gcd():
    sh = split_shapes(2, 100, 5)
    assert sh.tag == Shape.G_CUBE_AND_G2P2CUBE
    assert sh.g == 2
    assert sh.assignment == {"R": (2, 1), "S": (4 * 25, 1)}


def test_split_not_instance():
    with pytest.raises(NotAnInstance):
        split_shapes(24, 3, 5)


def test_split_composite_gcd():
    r, s = 6, 18  # 108 = 2^2 * 3^3, gcd 6
    assert (r * s) % 4 == 0 and is_perfect_cube(r * s // 4) is not None
    with pytest.raises(OutsideHypotheses):
        split_shapes(r, s, 2)


def test_split_g_equals_p_prefers_both_cubes():
    # R = 5, S = 5^4: matches (g, g) and (g, g^2 p^2) families.
    sh = split_shapes(5, 625, 5)
    assert sh.tag == Shape.G_CUBE_BOTH
    assert Shape.G_CUBE_AND_G2P2CUBE in sh.alternatives


def _brute_shapes(r, s, p, g):
    """All families realized by (R, S), found by enumerating small cube roots."""
    found = set()
    fams = {Shape.G_CUBE_BOTH: (g, g), Shape.G_CUBE_AND_G2P2CUBE: (g, g * g * p * p),
            Shape.GP2_CUBE_AND_G2CUBE: (g * p * p, g * g)} if g > 1 else {Shape.CUBE_AND_P2CUBE: (1, p * p)}
    roots = range(-60, 61)
    for tag, (c1, c2) in fams.items():
        for x, y in ((r, s), (s, r)):
            if any(c1 * a**3 == x for a in roots) and any(c2 * b**3 == y for b in roots):
                found.add(tag)
    return found


def test_split_exhaustive_small():
    for p in (2, 3, 5):
        for r in range(-80, 81):
            for s in range(-80, 81):
                if r == 0 or s == 0:
                    continue
                prod = r * s
                if prod % (p * p) or is_perfect_cube(prod // (p * p)) is None:
                    continue
                g = gcd(r, s)
                try:
                    sh = split_shapes(r, s, p)
                except OutsideHypotheses:
                    assert g != 1 and not all(g % d for d in range(2, g))
                    continue
                assert set(sh.alternatives) == _brute_shapes(r, s, p, g)
                assert sh.tag == sh.alternatives[0]


@given(st.sampled_from([2, 3, 5, 7, 11]), st.sampled_from([1, 2, 3, 5, 7]),
       st.integers(-30, 30).filter(bool), st.integers(-30, 30).filter(bool), st.booleans())
def test_split_constructed_instances(p, g, c1, c2, swap):
    if g == 1:
        fam = [(1, p * p)]
    else:
        # (g, g) is only an instance of R S = p^2 C^3 when g = p.
        fam = [(g, g * g * p * p), (g * p * p, g * g)] + ([(g, g)] if g == p else [])
    for a, b in fam:
        r, s = a * c1**3, b * c2**3
        if swap:
            r, s = s, r
        gg = gcd(r, s)
        if gg != 1 and not all(gg % d for d in range(2, int(gg**0.5) + 1)):
            continue
        sh = split_shapes(r, s, p)
        # witnesses rebuild (R, S) by construction of SplitShape
        assert (sh.r, sh.s) == (r, s)


# --- Mordell reduction ------------------------------------------------------


def test_to_mordell_k3_chain():
    curve, amap = to_mordell(-1, 3)
    assert curve.k == -432
    assert (amap.x_scale, amap.y_scale, amap.y_shift) == (12, 24, -12)
    assert amap.forward(2, 1) == (12, 36)
    assert amap.forward(-1, 1) == (12, -36)
    curve, amap = to_mordell(1, 3)
    assert curve.k == -432
    assert amap.forward(-2, 1) == (12, 36)


@pytest.mark.parametrize("s, k", SK)
def test_affine_roundtrip_random(s, k):
    _, amap = to_mordell(s, k)
    rng = random.Random(s * 10 + k)
    for _ in range(10_000):
        u, v = rng.randrange(-10**9, 10**9), rng.randrange(-10**9, 10**9)
        assert amap.inverse(*amap.forward(u, v)) == (u, v)
        assert amap.inverse_rational(*amap.forward(u, v)) == (Fraction(u), Fraction(v))


@pytest.mark.parametrize("s, k", SK)
def test_solution_transport(s, k):
    curve, amap = to_mordell(s, k)
    for u in range(-1000, 1001):
        for v in range(-100, 101):
            lhs = u * u + s * u + 1 == k * v**3
            x, y = amap.forward(u, v)
            assert lhs == (y * y == x**3 + curve.k)


def test_k1_constant_is_derived():
    for s in (1, -1):
        curve, amap = to_mordell(s, 1)
        assert curve.k == -48
        assert len(amap.steps) >= 3


# --- Mordell points ---------------------------------------------------------


def test_mordell_points_examples():
    got = [(p.x, p.y) for p in mordell_points(MordellCurve(-432), 10_000)]
    assert got == [(12, -36), (12, 36)]
    got = [(p.x, p.y) for p in mordell_points(MordellCurve(1), 1000)]
    assert got == [(-1, 0), (0, -1), (0, 1), (2, -3), (2, 3)]
    got = [(p.x, p.y) for p in mordell_points(MordellCurve(-1), 10)]
    assert got == [(1, 0)]


def test_mordell_point_rejects_off_curve():
    with pytest.raises(AssertionError):
        MordellPoint(1, 1, MordellCurve(1))
    with pytest.raises(DomainError):
        MordellCurve(0)


def test_mordell_points_y_major_oracle():
    bound = 1000
    xs = np.arange(-bound, bound + 1, dtype=np.int64)
    cubes = xs**3
    y_max = int((bound**3 + 500) ** 0.5) + 2
    ys = np.arange(-y_max, y_max + 1, dtype=np.int64)
    y2 = ys * ys
    for k in range(-500, 501):
        if k == 0:
            continue
        hit = np.isin(y2 - k, cubes)
        oracle = set()
        for y in ys[hit].tolist():
            x = is_perfect_cube(y * y - k)
            oracle.add((x, y))
        got = {(p.x, p.y) for p in mordell_points(MordellCurve(k), bound)}
        assert got == oracle, k


# --- quad-cubic solver ------------------------------------------------------


def test_lemma2_sets():
    assert solve_quad_cubic(1, 3, 10**5).solutions == ((-2, 1), (1, 1))
    assert solve_quad_cubic(-1, 3, 10**5).solutions == ((-1, 1), (2, 1))


def test_lemma3_sets():
    assert solve_quad_cubic(1, 1, 10**5).u_values == [-19, -1, 0, 18]
    assert solve_quad_cubic(-1, 1, 10**5).u_values == [-18, 0, 1, 19]


def test_completeness_is_opt_in():
    assert solve_quad_cubic(1, 3, 100).complete is False
    assert solve_quad_cubic(1, 3, 100, assume_literature_complete=True).complete is True


@pytest.mark.parametrize("k", [1, 3])
def test_u_negation_symmetry(k):
    plus = set(solve_quad_cubic(1, k, 10**4).solutions)
    minus = set(solve_quad_cubic(-1, k, 10**4).solutions)
    assert {(-u, v) for u, v in plus} == minus


def test_quad_cubic_bad_params():
    with pytest.raises(DomainError):
        solve_quad_cubic(2, 3, 10)
    with pytest.raises(DomainError):
        to_mordell(1, 2)


# --- cube differences -------------------------------------------------------


def test_cube_diff():
    assert cube_diff_solutions(2) == [(1, -1)]
    assert cube_diff_solutions(1) == [(0, -1), (1, 0)]


@pytest.mark.parametrize("d", [1, 2])
def test_cube_diff_brute_force(d):
    r = np.arange(-1000, 1001, dtype=np.int64)
    diff = r[:, None] ** 3 - r[None, :] ** 3
    us, vs = np.nonzero(diff == d)
    brute = sorted(zip((r[us]).tolist(), (r[vs]).tolist()))
    assert brute == cube_diff_solutions(d)


def test_cube_diff_unsupported():
    with pytest.raises(DomainError):
        cube_diff_solutions(3)
