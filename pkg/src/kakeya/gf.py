"""Finite fields GF(p^m) with elements encoded as integers in ``[0, q)``.

An element's integer value, read in base p, lists the coefficients of its
polynomial representative (constant term = least significant digit).  The
reduction modulus is the lexicographically smallest monic irreducible
polynomial of degree m, comparing coefficients from the constant term up,
so the encoding is reproducible.  Multiplication runs through internal
exp/log tables; those never appear in serialized output.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import (
    DivisionByZero,
    NotAPrimePower,
    WrongCharacteristic,
    ZeroLeadingCoefficient,
)

MAX_ORDER = 1 << 20
_ADD_TABLE_LIMIT = 256


def _smallest_prime_factor(q: int) -> int:
    if q % 2 == 0:
        return 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return f
        f += 2
    return q


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m`` and p prime."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotAPrimePower(f"{q!r} is not a prime power")
    q = int(q)
    p = _smallest_prime_factor(q)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotAPrimePower(f"{q} is not a prime power")
    return p, m


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists with the constant term first --

def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return a[:db]


def _monic_polys(p: int, degree: int):
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not any(_poly_rem(poly, div, p)):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    # itertools.product varies the last slot fastest, so c0 is the most
    # significant key: exactly "compare from the constant term up".
    for low in itertools.product(range(p), repeat=m):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


class Field:
    """The finite field of order ``q = p**m``.

    Instances are immutable; obtain them through :func:`field_new` so that
    equal orders share one cached object.
    """

    def __init__(self, q: int):
        p, m = factor_prime_power(q)
        if q > MAX_ORDER:
            raise NotAPrimePower(f"field order {q} exceeds supported maximum {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = smallest_irreducible(p, m)
        self._digit_weights = [p**i for i in range(m)]
        self._build_tables()

    # ----------------------------------------------------------------- setup
    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def _undigits(self, ds) -> int:
        return sum(d * w for d, w in zip(ds, self._digit_weights))

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        if p == 2:
            return self._clmul_mod(a, b)
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._undigits(_poly_rem(prod, list(self.modulus), p))

    def _clmul_mod(self, a: int, b: int) -> int:
        m = self.m
        mod = self._undigits(self.modulus[:m]) | (1 << m)
        prod = 0
        while b:
            if b & 1:
                prod ^= a
            b >>= 1
            a <<= 1
        for i in range(prod.bit_length() - 1, m - 1, -1):
            if (prod >> i) & 1:
                prod ^= mod << (i - m)
        return prod

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        gen = 1
        for g in range(1, q):
            if all(self._slow_pow(g, order // f) != 1 for f in factors):
                gen = g
                break
        self.generator = gen
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log
        self._exp_arr = np.array(exp, dtype=np.int64)
        self._log_arr = np.array(log, dtype=np.int64)

        self._add_table = None
        if self.p != 2 and self.m > 1 and q <= _ADD_TABLE_LIMIT:
            digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
            w = np.array(self._digit_weights, dtype=np.int64)
            summed = (digits[:, None, :] + digits[None, :, :]) % self.p
            self._add_table = summed @ w
            self._neg_table = ((-digits) % self.p) @ w

        y = np.arange(q, dtype=np.int64)
        t = np.zeros(q, dtype=np.int64)
        for _ in range(self.m):
            t = self.add_arr(t, y)
            y = self.pow_arr(y, self.p)
        self._trace_arr = t
        self._trace = t.tolist()

    # -------------------------------------------------------------- identity
    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (field_new, (self.q,))

    def header(self) -> str:
        mod = ",".join(str(c) for c in self.modulus)
        return f"q={self.q} p={self.p} m={self.m} mod={mod}"

    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self!r}")
        return int(a)

    # ------------------------------------------------------- scalar arithmetic
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return int(self._add_table[a, b])
        p = self.p
        out, w = 0, 1
        for _ in range(self.m):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        if self._add_table is not None:
            return int(self._neg_table[a])
        return self._undigits([(-d) % self.p for d in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self!r}")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def scalar(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def trace(self, a: int) -> int:
        """Absolute trace a + a^p + ... + a^(p^(m-1)), an integer in [0, p)."""
        return self._trace[a]

    def sqrt(self, a: int) -> int:
        """Unique square root in characteristic 2."""
        self._require_char2()
        return self.pow(a, self.q // 2)

    def element_order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative order")
        order = self.q - 1
        for f in _prime_factors(order):
            while order % f == 0 and self.pow(a, order // f) == 1:
                order //= f
        return order

    # ----------------------------------------------------- char 2 machinery
    def _require_char2(self) -> None:
        if self.p != 2:
            raise WrongCharacteristic(f"{self!r} does not have characteristic 2")

    def additive_character(self, a: int) -> int:
        self._require_char2()
        return -1 if self._trace[a] else 1

    def char2_quad_solve(self, alpha: int, beta: int, gamma: int) -> frozenset[int]:
        """All x with alpha*x^2 + beta*x + gamma = 0 in characteristic 2."""
        self._require_char2()
        if alpha == 0:
            raise ZeroLeadingCoefficient("alpha must be nonzero")
        if beta == 0:
            return frozenset({self.sqrt(self.div(gamma, alpha))})
        # x = (beta/alpha) y turns the equation into y^2 + y = alpha*gamma/beta^2
        c = self.div(self.mul(alpha, gamma), self.mul(beta, beta))
        if self.trace(c):
            return frozenset()
        y = self._artin_schreier_root(c)
        scale = self.div(beta, alpha)
        return frozenset({self.mul(scale, y), self.mul(scale, y ^ 1)})

    def _artin_schreier_root(self, c: int) -> int:
        # y = sum_{i<m-1} (sum_{j>i} d^(2^j)) c^(2^i) solves y^2+y=c whenever
        # tr(c)=0 and tr(d)=1
        m = self.m
        d = next(x for x in range(self.q) if self._trace[x] == 1)
        d_pows = [d]
        for _ in range(m - 1):
            d_pows.append(self.mul(d_pows[-1], d_pows[-1]))
        y, c_pow = 0, c
        for i in range(m - 1):
            inner = 0
            for j in range(i + 1, m):
                inner ^= d_pows[j]
            y ^= self.mul(inner, c_pow)
            c_pow = self.mul(c_pow, c_pow)
        return y

    # ------------------------------------------------- vectorized arithmetic
    def add_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._digit_weights:
            out += (((a // w) % p + (b // w) % p) % p) * w
        return out

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % self.p
        if self._add_table is not None:
            return self._neg_table[a]
        p = self.p
        out = np.zeros_like(a)
        for w in self._digit_weights:
            out += ((-((a // w) % p)) % p) * w
        return out

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp_arr[self._log_arr[a] + self._log_arr[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_arr(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self._exp_arr[(self._log_arr[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def trace_arr(self, a) -> np.ndarray:
        return self._trace_arr[np.asarray(a, dtype=np.int64)]


@lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    """The field of order q (cached, so repeated calls return the same object)."""
    return Field(int(q))


GF = field_new
