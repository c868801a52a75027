"""Executable form of the cube-centred triplet argument.

Classifiers for ``p^2 a^3`` and ``p^2 q^2 a^3``, the gcd pair of the two
cube factorizations, the 3-adic checks used for ``x = 2 (mod 3)``, per-x case
traces, and range scans for counterexamples to

    x^3 - 1 = p^2 a^3,  x^3 + 1 = q^2 b^3          (theorem scan)
    (2x)^6 - 1 = p^2 q^2 a^3                       (corollary scan)
"""

from __future__ import annotations

import enum
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ptl import __version__
from ptl.arith import (
    INT_MAX,
    DomainError,
    Factorization,
    factor,
    factor_range,
    gcd,
    icbrt,
    is_perfect_cube,
    isqrt,
    is_prime,
    merge_factorizations,
    valuation,
)
from ptl.diophantine import Shape, split_shapes


class Reason(str, enum.Enum):
    WRONG_EXPONENT_PATTERN = "WRONG_EXPONENT_PATTERN"
    NO_PRIME_SLOT = "NO_PRIME_SLOT"
    CONGRUENCE_FILTERED = "CONGRUENCE_FILTERED"
    CUBE_DIFF_CONTRADICTION = "CUBE_DIFF_CONTRADICTION"
    DEGENERATE = "DEGENERATE"


DEGENERATE_X = (-1, 0, 1)
# All integer u with u^2 + u + 1 a cube. In Case 1 with x - 1 = p^2 a^3 and
# x + 1 a cube, x^2 + x + 1 must be a cube, so x is one of these.
CUBE_QUADRATIC_U = (-19, -1, 0, 18)
THEOREM_MAX_ABS_X = icbrt(INT_MAX - 1)


def _corollary_max_abs_x() -> int:
    # floor(n^(1/6)) == icbrt(isqrt(n)); need (2x)^6 <= INT_MAX + 1.
    return icbrt(isqrt(INT_MAX + 1)) // 2


COROLLARY_MAX_ABS_X = _corollary_max_abs_x()


# --- classifiers -----------------------------------------------------------


@dataclass(frozen=True)
class FormWitness:
    """``m = p^2 a^3`` (one prime) or ``m = p^2 q^2 a^3`` (two, ``p <= q``)."""

    m: int
    primes: Tuple[int, ...]
    a: int

    def __post_init__(self):
        if len(self.primes) not in (1, 2) or not all(is_prime(p) for p in self.primes):
            raise AssertionError(f"bad witness primes {self.primes}")
        if len(self.primes) == 2 and self.primes[0] > self.primes[1]:
            raise AssertionError("witness primes must be ordered")
        scale = 1
        for p in self.primes:
            scale *= p * p
        if scale * self.a**3 != self.m:
            raise AssertionError(f"witness does not rebuild {self.m}")

    def to_dict(self) -> dict:
        return {"m": self.m, "primes": list(self.primes), "a": self.a}


def _cube_root_of(f: Factorization, drop: Dict[int, int]) -> int:
    """Signed cube root of ``f`` after removing ``drop`` exponents."""
    a = f.sign
    for p, e in f:
        e -= drop.get(p, 0)
        a *= p ** (e // 3)
    return a


def p2a3_from_factorization(m: int, f: Factorization) -> Tuple[Optional[FormWitness], Optional[Reason]]:
    residues = [(p, e % 3) for p, e in f]
    if any(r == 1 for _, r in residues):
        return None, Reason.WRONG_EXPONENT_PATTERN
    slots = [p for p, r in residues if r == 2]
    if not slots:
        return None, Reason.NO_PRIME_SLOT
    if len(slots) > 1:
        return None, Reason.WRONG_EXPONENT_PATTERN
    p = slots[0]
    return FormWitness(m, (p,), _cube_root_of(f, {p: 2})), None


def p2q2a3_from_factorization(m: int, f: Factorization) -> Tuple[Optional[FormWitness], Optional[Reason]]:
    residues = [(p, e, e % 3) for p, e in f]
    ones = [(p, e) for p, e, r in residues if r == 1]
    twos = [p for p, _, r in residues if r == 2]
    if not ones and not twos:
        return None, Reason.NO_PRIME_SLOT
    if not ones and len(twos) == 2:
        p, q = twos
        return FormWitness(m, (p, q), _cube_root_of(f, {p: 2, q: 2})), None
    if len(ones) == 1 and not twos and ones[0][1] >= 4:
        p = ones[0][0]
        return FormWitness(m, (p, p), _cube_root_of(f, {p: 4})), None
    return None, Reason.WRONG_EXPONENT_PATTERN


def classify_p2a3(m: int) -> Optional[FormWitness]:
    """Witness ``(p, a)`` with ``m = p^2 a^3`` and ``p`` prime, if one exists."""
    if m == 0:
        raise DomainError("cannot classify 0")
    return p2a3_from_factorization(m, factor(m))[0]


def classify_p2q2a3(m: int) -> Optional[FormWitness]:
    """Witness ``(p, q, a)`` with ``m = p^2 q^2 a^3``; ``p == q`` is allowed."""
    if m == 0:
        raise DomainError("cannot classify 0")
    return p2q2a3_from_factorization(m, factor(m))[0]


def _p2a3_partial_reject(f: Factorization) -> Optional[Reason]:
    # Exponents of primes other than 3 in one coprime-up-to-3 factor are final.
    twos = 0
    for p, e in f:
        if p == 3:
            continue
        r = e % 3
        if r == 1:
            return Reason.WRONG_EXPONENT_PATTERN
        if r == 2:
            twos += 1
    return Reason.WRONG_EXPONENT_PATTERN if twos > 1 else None


def _p2q2a3_partial_reject(f: Factorization) -> Optional[Reason]:
    ones = twos = 0
    for p, e in f:
        if p == 3:
            continue
        r = e % 3
        if r == 1:
            if e == 1:
                return Reason.WRONG_EXPONENT_PATTERN
            ones += 1
        elif r == 2:
            twos += 1
    if ones > 1 or twos > 2 or (ones and twos):
        return Reason.WRONG_EXPONENT_PATTERN
    return None


# --- gcd pair and 3-adic checks ---------------------------------------------


@dataclass(frozen=True)
class GcdPair:
    x: int
    g_minus: int
    g_plus: int

    def __post_init__(self):
        x = self.x
        if self.g_minus != gcd(x - 1, x * x + x + 1) or self.g_plus != gcd(x + 1, x * x - x + 1):
            raise AssertionError(f"gcd pair for x={x} not computed directly")
        if (self.g_minus == 3) != (x % 3 == 1) or (self.g_plus == 3) != (x % 3 == 2):
            raise AssertionError(f"gcd pair for x={x} contradicts the mod-3 table")

    @property
    def case_label(self) -> str:
        return {(1, 1): "CASE1", (1, 3): "CASE2", (3, 1): "CASE3"}[(self.g_minus, self.g_plus)]


def gcd_pair(x: int) -> GcdPair:
    return GcdPair(x, gcd(x - 1, x * x + x + 1), gcd(x + 1, x * x - x + 1))


@dataclass(frozen=True)
class LteCheck:
    v3_xp1: int
    v3_x2mxp1: int
    identity_holds: bool


def lte_v3_check(x: int) -> LteCheck:
    """3-adic split of ``x^3 + 1`` for ``x = 2 (mod 3)``.

    Checks ``v3(x^3 + 1) = v3(x + 1) + v3(x^2 - x + 1)`` together with
    ``v3(x^2 - x + 1) = 1``.
    """
    if x % 3 != 2:
        raise DomainError(f"x={x} is not 2 mod 3")
    if x == -1:
        raise DomainError("x = -1 makes x^3 + 1 vanish")
    v_lin = valuation(3, x + 1)
    v_quad = valuation(3, x * x - x + 1)
    holds = v_quad == 1 and valuation(3, x**3 + 1) == v_lin + v_quad
    return LteCheck(v_lin, v_quad, holds)


def xmod9_filter(x: int) -> bool:
    return x % 9 == 8


# --- case traces ------------------------------------------------------------


@dataclass(frozen=True)
class SideResult:
    """Classification of one of ``x^3 - 1`` / ``x^3 + 1``."""

    value: int
    factors: Tuple[Tuple[int, int], ...]
    witness: Optional[FormWitness]
    reason: Optional[Reason]
    subcase: Optional[str] = None

    def mirrored(self) -> "SideResult":
        w = self.witness
        if w is not None:
            w = FormWitness(-w.m, w.primes, -w.a)
        return SideResult(-self.value, self.factors, w, self.reason, self.subcase)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "factors": [list(pe) for pe in self.factors],
            "witness": self.witness.to_dict() if self.witness else None,
            "reason": self.reason.value if self.reason else None,
            "subcase": self.subcase,
        }


@dataclass(frozen=True)
class Verdict:
    counterexample: bool
    reason: Optional[Reason] = None
    side: Optional[str] = None

    def to_dict(self) -> dict:
        if self.counterexample:
            return {"kind": "COUNTEREXAMPLE"}
        return {"kind": "REJECTED", "reason": self.reason.value, "side": self.side}


@dataclass(frozen=True)
class CaseTrace:
    x: int
    gcd_pair: GcdPair
    case_label: str
    minus_side: SideResult
    plus_side: SideResult
    congruence_facts: Dict[str, object]
    verdict: Verdict
    mirrored_from: Optional[int] = None
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.case_label != self.gcd_pair.case_label:
            raise AssertionError("case label does not match gcd pair")
        both = self.minus_side.witness is not None and self.plus_side.witness is not None
        if self.verdict.counterexample != both:
            raise AssertionError("counterexample verdict needs witnesses on both sides")

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "gcd_pair": [self.gcd_pair.g_minus, self.gcd_pair.g_plus],
            "case": self.case_label,
            "minus_side": self.minus_side.to_dict(),
            "plus_side": self.plus_side.to_dict(),
            "congruence_facts": dict(self.congruence_facts),
            "verdict": self.verdict.to_dict(),
            "mirrored_from": self.mirrored_from,
            "notes": list(self.notes),
        }


def _side(value: int, linear: int, quadratic: int, cube_label: str, p2_label: str) -> SideResult:
    f = merge_factorizations(factor(linear), factor(quadratic))
    w, reason = p2a3_from_factorization(value, f)
    subcase = None
    if w is not None:
        shape = split_shapes(linear, quadratic, w.primes[0])
        if shape.tag == Shape.CUBE_AND_P2CUBE:
            subcase = cube_label if shape.assignment["R"][0] == 1 else p2_label
        else:
            subcase = shape.tag.value
    return SideResult(value, f.factors, w, reason, subcase)


def _trace_direct(x: int) -> CaseTrace:
    """Trace for ``x`` in Case 1 or Case 2 (``x != 1 mod 3``)."""
    pair = gcd_pair(x)
    label = pair.case_label
    minus = _side(x**3 - 1, x - 1, x * x + x + 1, "(i)", "(ii)")
    plus = _side(x**3 + 1, x + 1, x * x - x + 1, "(a)", "(b)")
    facts: Dict[str, object] = {"x_mod_3": x % 3, "x_mod_9": x % 9}
    notes: List[str] = []
    filtered = False

    if label == "CASE2":
        lte = lte_v3_check(x)
        facts.update(v3_x_plus_1=lte.v3_xp1, v3_x2_minus_x_plus_1=lte.v3_x2mxp1,
                     lte_identity=lte.identity_holds, xmod9=xmod9_filter(x))
        if not lte.identity_holds:
            raise AssertionError(f"3-adic identity fails at x={x}")
        if not xmod9_filter(x):
            # v3(x^3+1) = 2 rules out q != 3, so x^3 + 1 must be 9 b^3.
            nine_cube = (x**3 + 1) % 9 == 0 and is_perfect_cube((x**3 + 1) // 9) is not None
            facts["q3_branch_possible"] = nine_cube
            filtered = not nine_cube
            notes.append("x != -1 mod 9: only q = 3 survives")
    else:
        facts["ii_a_candidates"] = list(CUBE_QUADRATIC_U)
        facts["ii_a_survivors"] = [
            u for u in CUBE_QUADRATIC_U if u not in DEGENERATE_X and classify_p2a3(u - 1) is not None
        ]
    if label == "CASE1" and minus.subcase and plus.subcase:
        notes.append(f"subcase {minus.subcase}+{plus.subcase}")
        if minus.subcase == "(i)" and plus.subcase == "(a)":
            notes.append(f"{Reason.CUBE_DIFF_CONTRADICTION.value}: s^3 - u^3 = 2")

    if minus.witness is not None and plus.witness is not None:
        verdict = Verdict(True)
    elif filtered:
        verdict = Verdict(False, Reason.CONGRUENCE_FILTERED, "plus")
    elif minus.witness is None:
        verdict = Verdict(False, minus.reason, "minus")
    else:
        verdict = Verdict(False, plus.reason, "plus")
    return CaseTrace(x, pair, label, minus, plus, facts, verdict, None, tuple(notes))


def trace_case(x: int) -> CaseTrace:
    """Walk ``x`` through the gcd-pair casework and report why it fails.

    The ``x = 1 (mod 3)`` case is the ``x -> -x`` mirror of ``x = 2 (mod 3)``:
    ``x^3 - 1 = -((-x)^3 + 1)``, so the sides swap and every witness flips
    the sign of its cube part.
    """
    if x in DEGENERATE_X:
        raise DomainError(f"x={x} is degenerate (x^3 - 1 or x^3 + 1 has no prime slot)")
    if x % 3 != 1:
        return _trace_direct(x)
    src = _trace_direct(-x)
    swap = {"minus": "plus", "plus": "minus", None: None}
    verdict = Verdict(src.verdict.counterexample, src.verdict.reason, swap[src.verdict.side])
    facts = {"mirror_" + k: v for k, v in src.congruence_facts.items()}
    facts.update(x_mod_3=x % 3, x_mod_9=x % 9)
    return CaseTrace(
        x, gcd_pair(x), "CASE3",
        minus_side=src.plus_side.mirrored(),
        plus_side=src.minus_side.mirrored(),
        congruence_facts=facts,
        verdict=verdict,
        mirrored_from=-x,
        notes=src.notes + (f"mirrored from x={-x}",),
    )


# --- scans ------------------------------------------------------------------


@dataclass
class SearchReport:
    kind: str
    x_lo: int
    x_hi: int
    counterexamples: List[dict] = field(default_factory=list)
    rejections: Counter = field(default_factory=Counter)
    rejected_on: Counter = field(default_factory=Counter)
    checked: int = 0
    parameters: dict = field(default_factory=dict)
    tool_version: str = __version__

    def merge(self, other: "SearchReport") -> "SearchReport":
        self.counterexamples.extend(other.counterexamples)
        self.counterexamples.sort(key=lambda c: c["x"])
        self.rejections.update(other.rejections)
        self.rejected_on.update(other.rejected_on)
        self.checked += other.checked
        return self

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "range": [self.x_lo, self.x_hi],
            "checked": self.checked,
            "counterexamples": self.counterexamples,
            "statistics": {
                "rejections": {r.value if isinstance(r, Reason) else r: n
                               for r, n in sorted(self.rejections.items())},
                "rejected_on": dict(sorted(self.rejected_on.items())),
            },
            "parameters": self.parameters,
            "tool_version": self.tool_version,
        }


@dataclass(frozen=True)
class ScanOutcome:
    """Short-circuited result for one x: first failing side and its reason."""

    x: int
    reason: Optional[Reason]
    side: Optional[str]
    witnesses: Tuple[FormWitness, ...] = ()


def theorem_outcome(x: int) -> ScanOutcome:
    """Reference path for one x: factor each side in full, minus side first."""
    if x in DEGENERATE_X:
        return ScanOutcome(x, Reason.DEGENERATE, None)
    m = x**3 - 1
    w1, reason = p2a3_from_factorization(m, factor(m))
    if w1 is None:
        return ScanOutcome(x, reason, "minus")
    m = x**3 + 1
    w2, reason = p2a3_from_factorization(m, factor(m))
    if w2 is None:
        return ScanOutcome(x, reason, "plus")
    return ScanOutcome(x, None, None, (w1, w2))


def corollary_outcome(x: int) -> ScanOutcome:
    if x == 0:
        return ScanOutcome(x, Reason.DEGENERATE, None)
    t = 2 * x
    if gcd(t**3 - 1, t**3 + 1) != 1:
        raise AssertionError(f"(2x)^3 -+ 1 not coprime at x={x}")
    m = t**6 - 1
    w, reason = p2q2a3_from_factorization(m, factor(m))
    if w is None:
        return ScanOutcome(x, reason, "m")
    return ScanOutcome(x, None, None, (w,))


def _theorem_block(lo: int, hi: int) -> List[ScanOutcome]:
    """Fast path over a block of x of one sign, no degenerate values.

    The linear factors ``x -+ 1`` come from one segmented sieve; a side is
    only fully factored when its linear factor leaves the exponent pattern
    open.
    """
    alo, ahi = (lo, hi) if lo > 0 else (-hi, -lo)
    base = alo - 1
    table = factor_range(base, ahi + 1)
    sgn = 1 if lo > 0 else -1
    out = []
    for x in range(lo, hi + 1):
        ax = abs(x)
        # |x - 1| and |x + 1| are ax - sgn and ax + sgn.
        f_m1 = table[ax - sgn - base]
        f_p1 = table[ax + sgn - base]
        if x < 0:
            f_m1 = Factorization(-1, f_m1.factors)
            f_p1 = Factorization(-1, f_p1.factors)
        out.append(_theorem_sides(x, f_m1, f_p1))
    return out


def _theorem_sides(x: int, f_m1: Factorization, f_p1: Factorization) -> ScanOutcome:
    reason = _p2a3_partial_reject(f_m1)
    if reason is not None:
        return ScanOutcome(x, reason, "minus")
    m = x**3 - 1
    w1, reason = p2a3_from_factorization(m, merge_factorizations(f_m1, factor(x * x + x + 1)))
    if w1 is None:
        return ScanOutcome(x, reason, "minus")
    reason = _p2a3_partial_reject(f_p1)
    if reason is not None:
        return ScanOutcome(x, reason, "plus")
    m = x**3 + 1
    w2, reason = p2a3_from_factorization(m, merge_factorizations(f_p1, factor(x * x - x + 1)))
    if w2 is None:
        return ScanOutcome(x, reason, "plus")
    return ScanOutcome(x, None, None, (w1, w2))


def _corollary_block(lo: int, hi: int) -> List[ScanOutcome]:
    alo, ahi = (lo, hi) if lo > 0 else (-hi, -lo)
    base = 2 * alo - 1
    table = factor_range(base, 2 * ahi + 1)
    out = []
    for x in range(lo, hi + 1):
        t = 2 * abs(x)
        if gcd(t**3 - 1, t**3 + 1) != 1:
            raise AssertionError(f"(2x)^3 -+ 1 not coprime at x={x}")
        small = merge_factorizations(table[t - 1 - base], table[t + 1 - base])
        reason = _p2q2a3_partial_reject(small)
        if reason is not None:
            out.append(ScanOutcome(x, reason, "m"))
            continue
        m = t**6 - 1
        f = merge_factorizations(small, factor(t * t + t + 1), factor(t * t - t + 1))
        w, reason = p2q2a3_from_factorization(m, f)
        out.append(ScanOutcome(x, reason, "m") if w is None else ScanOutcome(x, None, None, (w,)))
    return out


_BLOCK_FNS = {"theorem": _theorem_block, "corollary": _corollary_block}


def _run_block(task: Tuple[str, int, int]) -> SearchReport:
    kind, lo, hi = task
    rep = SearchReport(kind, lo, hi)
    for o in _BLOCK_FNS[kind](lo, hi):
        rep.checked += 1
        if o.reason is None:
            if kind == "theorem":
                rep.counterexamples.append(trace_case(o.x).to_dict())
            else:
                rep.counterexamples.append({"x": o.x, "witness": o.witnesses[0].to_dict()})
        else:
            rep.rejections[o.reason.value] += 1
            rep.rejected_on[o.side] += 1
    return rep


def _blocks(x_lo: int, x_hi: int, degenerate: Sequence[int], block_size: int):
    """Split ``[x_lo, x_hi]`` into one-signed blocks around the degenerate x values."""
    lo_d, hi_d = min(degenerate), max(degenerate)
    parts = []
    if x_lo < lo_d:
        parts.append((x_lo, min(x_hi, lo_d - 1)))
    if x_hi > hi_d:
        parts.append((max(x_lo, hi_d + 1), x_hi))
    for a, b in parts:
        for start in range(a, b + 1, block_size):
            yield start, min(b, start + block_size - 1)


def _scan(kind: str, x_lo: int, x_hi: int, degenerate: Sequence[int], jobs: int,
          block_size: int, progress: Optional[Callable[[int, int], None]]) -> SearchReport:
    if x_lo > x_hi:
        raise DomainError("x_lo must be <= x_hi")
    report = SearchReport(kind, x_lo, x_hi, parameters={"x_lo": x_lo, "x_hi": x_hi})
    n_degen = sum(1 for d in degenerate if x_lo <= d <= x_hi)
    if n_degen:
        report.checked += n_degen
        report.rejections[Reason.DEGENERATE.value] += n_degen
        report.rejected_on["degenerate"] += n_degen
    tasks = [(kind, a, b) for a, b in _blocks(x_lo, x_hi, degenerate, block_size)]
    total = x_hi - x_lo + 1
    done = n_degen

    def consume(parts):
        nonlocal done
        for part in parts:
            report.merge(part)
            done += part.checked
            if progress:
                progress(done, total)

    if jobs <= 1 or len(tasks) <= 1:
        consume(map(_run_block, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            consume(pool.map(_run_block, tasks))
    return report


def theorem_scan(x_lo: int, x_hi: int, jobs: int = 1, block_size: int = 20_000,
                 progress: Optional[Callable[[int, int], None]] = None) -> SearchReport:
    """Look for x with both ``x^3 - 1 = p^2 a^3`` and ``x^3 + 1 = q^2 b^3``.

    Every x with witnesses on both sides is returned with its full case trace.
    ``x in {-1, 0, 1}`` is counted as DEGENERATE and skipped.
    """
    bound = max(abs(x_lo), abs(x_hi))
    if bound > THEOREM_MAX_ABS_X:
        raise DomainError(f"|x| must be <= {THEOREM_MAX_ABS_X} for the theorem scan")
    return _scan("theorem", x_lo, x_hi, DEGENERATE_X, jobs, block_size, progress)


def corollary_scan(x_lo: int, x_hi: int, jobs: int = 1, block_size: int = 20_000,
                   progress: Optional[Callable[[int, int], None]] = None) -> SearchReport:
    """Look for x with ``(2x)^6 - 1 = p^2 q^2 a^3``; x = 0 is DEGENERATE."""
    bound = max(abs(x_lo), abs(x_hi))
    if bound > COROLLARY_MAX_ABS_X:
        raise DomainError(f"|x| must be <= {COROLLARY_MAX_ABS_X} for the corollary scan")
    return _scan("corollary", x_lo, x_hi, (0,), jobs, block_size, progress)


def stderr_progress(every: int = 200_000) -> Callable[[int, int], None]:
    last = [0]

    def report(done: int, total: int) -> None:
        if done - last[0] >= every or done == total:
            last[0] = done
            print(f"\r  {done}/{total} ({100.0 * done / total:.1f}%)", end="", file=sys.stderr)
            if done == total:
                print(file=sys.stderr)

    return report
