"""Exact integer primitives: roots, primality, factorization, valuations.

Everything here works on Python ints. The toolkit nominally targets signed
128-bit values (see ``WIDTH_BITS``); callers that care about the width check
it themselves via :func:`check_width`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

WIDTH_BITS = 128
INT_MAX = (1 << (WIDTH_BITS - 1)) - 1

# Deterministic Miller-Rabin: these bases are exact for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981

_SMALL_PRIME_BOUND = 1000


class DomainError(ValueError):
    """Input lies outside the domain of the operation."""


def check_width(value: int, what: str = "value") -> None:
    if abs(value) > INT_MAX:
        raise DomainError(f"{what} exceeds signed {WIDTH_BITS}-bit range")


def isqrt(n: int) -> int:
    if n < 0:
        raise DomainError("isqrt of a negative number")
    return math.isqrt(n)


def icbrt(n: int) -> int:
    """Integer cube root truncated toward zero.

    >>> icbrt(27), icbrt(-28), icbrt(0)
    (3, -3, 0)
    """
    if n < 0:
        return -icbrt(-n)
    if n < 2:
        return n
    if n < 1 << 52:
        r = int(round(n ** (1.0 / 3.0)))
    else:
        # Newton from above, starting at a power of two >= cbrt(n).
        r = 1 << -(-n.bit_length() // 3)
        while True:
            s = (2 * r + n // (r * r)) // 3
            if s >= r:
                break
            r = s
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def is_perfect_square(n: int) -> Optional[int]:
    if n < 0:
        return None
    # Quadratic residues mod 64 reject ~80% of inputs before isqrt.
    if (0x202021202030213 >> (n & 63)) & 1 == 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_perfect_cube(n: int) -> Optional[int]:
    r = icbrt(n)
    return r if r * r * r == n else None


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def valuation(p: int, n: int) -> int:
    """Exponent of the prime ``p`` in ``n``."""
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    if p < 2:
        raise DomainError("valuation base must be a prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def primes_up_to(limit: int) -> List[int]:
    """Sieve of Eratosthenes, inclusive of ``limit``."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_SMALL_PRIMES = primes_up_to(_SMALL_PRIME_BOUND)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge method A parameters.
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
        if d == 13 and is_perfect_square(n) is not None:
            return False
    p, q = 1, (1 - d) // 4
    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1

    u, v, qk = 0, 2, 1
    # Left-to-right binary ladder for (U_k, V_k, Q^k) mod n.
    inv2 = (n + 1) // 2
    for bit in bin(k)[2:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (d * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality for ``n >= 2``; negatives and units are not prime.

    Exact below 3.3e24 (deterministic Miller-Rabin); above that a
    Baillie-PSW test, which has no known counterexample.
    """
    if n < 2:
        return False
    if n <= _SMALL_PRIME_BOUND:
        return n in _SMALL_PRIME_SET
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    if n < _SMALL_PRIME_BOUND * _SMALL_PRIME_BOUND:
        return all(n % p for p in _SMALL_PRIMES if p * p <= n)
    if n < _MR_DETERMINISTIC_LIMIT:
        return _miller_rabin(n, _MR_BASES)
    return _miller_rabin(n, (2,)) and _strong_lucas(n)


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    """Sign plus ascending (prime, exponent) pairs of a nonzero integer."""

    sign: int
    factors: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise DomainError("factors must have increasing primes, exponents >= 1")
            last = p

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def exponents(self) -> dict:
        return dict(self.factors)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _factor_into(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root = is_perfect_square(n)
    if root is not None:
        sub: dict = {}
        _factor_into(root, sub, rng)
        for p, e in sub.items():
            out[p] = out.get(p, 0) + 2 * e
        return
    d = _pollard_brent(n, rng)
    _factor_into(d, out, rng)
    _factor_into(n // d, out, rng)


def factor(n: int) -> Factorization:
    """Complete factorization of a nonzero integer.

    Trial division by primes below 1000, then Pollard-Brent on whatever is
    left. The rho walk is seeded from ``n`` so output is reproducible.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    found: dict = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        _factor_into(n, found, random.Random(n))
    return Factorization(sign, tuple(sorted(found.items())))


def merge_factorizations(*parts: Factorization) -> Factorization:
    """Factorization of the product of the given factorizations."""
    sign = 1
    acc: dict = {}
    for part in parts:
        sign *= part.sign
        for p, e in part.factors:
            acc[p] = acc.get(p, 0) + e
    return Factorization(sign, tuple(sorted(acc.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        raise DomainError("squarefreeness of 0 is undefined")
    return all(e == 1 for _, e in factor(n))


def factor_range(lo: int, hi: int) -> List[Factorization]:
    """Factor every integer in ``[lo, hi]`` (``lo >= 1``) with a segmented sieve.

    Much cheaper per element than :func:`factor` for dense consecutive runs.
    """
    if lo < 1 or hi < lo:
        raise DomainError("factor_range needs 1 <= lo <= hi")
    size = hi - lo + 1
    rest = list(range(lo, hi + 1))
    found: List[list] = [[] for _ in range(size)]
    for p in primes_up_to(math.isqrt(hi)):
        start = (-lo) % p
        for i in range(start, size, p):
            r = rest[i] // p
            e = 1
            while r % p == 0:
                r //= p
                e += 1
            rest[i] = r
            found[i].append((p, e))
    out = []
    for i in range(size):
        pairs = found[i]
        if rest[i] > 1:
            pairs.append((rest[i], 1))
        out.append(Factorization(1, tuple(pairs)))
    return out
