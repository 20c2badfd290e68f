"""Exact rational functions of the tensor size N.

A ``RatPolyN`` is a quotient of two univariate polynomials with Fraction
coefficients, stored in ascending powers of N.  Values are reduced at
construction: numerator and denominator are coprime and the denominator is
monic, so ``==`` is functional equality.

    >>> N = RatPolyN.var()
    >>> (N * N - 16) / (N - 4) / (N + 4)
    RatPolyN('1')
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Poly = tuple  # tuple of Fractions, ascending powers, no trailing zeros


class PoleError(ZeroDivisionError):
    """Evaluation point is a root of the denominator."""


class InterpolationError(ValueError):
    """Samples are inconsistent with the requested degree bounds."""


class UnderdeterminedError(InterpolationError):
    """Samples do not pin down a unique rational function; add more."""


# ---------------------------------------------------------------- polynomials

def _trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a: Poly, s) -> Poly:
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def _pdivmod(a: Poly, b: Poly):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return (), _trim(rem)
    q = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] / lead
        if c:
            q[k - db] = c
            for j, y in enumerate(b):
                rem[k - db + j] -= c * y
    return _trim(q), _trim(rem[:db])


def _monic(a: Poly) -> Poly:
    if not a:
        return a
    lead = a[-1]
    return tuple(x / lead for x in a)


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a)


def _peval(a: Poly, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _poly_str(a: Poly) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = "N" if k == 1 else f"N^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(x)


# ------------------------------------------------------------- rational funcs

class RatPolyN:
    """Canonical rational function num(N)/den(N) with exact coefficients."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, numerator: Iterable = (), denominator: Iterable = (1,)):
        num = _trim(_frac(c) for c in numerator)
        den = _trim(_frac(c) for c in denominator)
        if not den:
            raise ZeroDivisionError("denominator is the zero polynomial")
        if not num:
            self.num, self.den = (), (Fraction(1),)
        else:
            if len(den) > 1:
                g = _pgcd(num, den)
                if len(g) > 1:
                    num = _pdivmod(num, g)[0]
                    den = _pdivmod(den, g)[0]
            lead = den[-1]
            self.num = tuple(c / lead for c in num)
            self.den = tuple(c / lead for c in den)
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatPolyN":
        # trusted constructor: caller guarantees canonical form
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def const(cls, c) -> "RatPolyN":
        c = _frac(c)
        return cls._raw((c,) if c else (), (Fraction(1),))

    @classmethod
    def var(cls) -> "RatPolyN":
        return cls._raw((Fraction(0), Fraction(1)), (Fraction(1),))

    @classmethod
    def poly(cls, coeffs: Iterable) -> "RatPolyN":
        return cls._raw(_trim(_frac(c) for c in coeffs), (Fraction(1),))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "RatPolyN":
        """coeff * N**power for any integer power."""
        coeff = _frac(coeff)
        if coeff == 0:
            return cls.const(0)
        if power >= 0:
            return cls._raw((Fraction(0),) * power + (coeff,), (Fraction(1),))
        return cls._raw((coeff,), (Fraction(0),) * (-power) + (Fraction(1),))

    @staticmethod
    def _coerce(x) -> "RatPolyN":
        if isinstance(x, RatPolyN):
            return x
        return RatPolyN.const(x)

    # -- predicates
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def is_constant(self) -> bool:
        return len(self.den) == 1 and len(self.num) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0] if self.num else Fraction(0)

    def leading_power(self):
        """Exponent of the dominant power of N as N -> infinity (None for 0)."""
        if not self.num:
            return None
        return (len(self.num) - 1) - (len(self.den) - 1)

    def leading_coefficient(self) -> Fraction:
        if not self.num:
            return Fraction(0)
        return self.num[-1] / self.den[-1]

    # -- arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatPolyN(_padd(self.num, o.num), self.den)
        return RatPolyN(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                        _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatPolyN._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.num or not o.num:
            return RatPolyN.const(0)
        if o.is_constant():
            return RatPolyN._raw(_pscale(self.num, o.num[0]), self.den)
        if self.is_constant():
            return RatPolyN._raw(_pscale(o.num, self.num[0]), o.den)
        return RatPolyN(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return self * RatPolyN(o.den, o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers")
        if k < 0:
            return RatPolyN.const(1) / (self ** (-k))
        out = RatPolyN.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, RatPolyN):
            try:
                other = RatPolyN.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- evaluation
    def evaluate_at(self, n) -> Fraction:
        n = _frac(n)
        d = _peval(self.den, n)
        if d == 0:
            raise PoleError(f"{self} has a pole at N = {n}")
        return _peval(self.num, n) / d

    __call__ = evaluate_at

    def series_in_inverse_n(self, order: int) -> dict:
        """Laurent expansion at N = infinity: {k: c_k} with f = sum c_k N^-k,
        keeping k up to ``order``."""
        if not self.num:
            return {}
        shift = (len(self.den) - 1) - (len(self.num) - 1)
        # f = N^{-shift} * A(x)/B(x), x = 1/N, A, B reversed coefficient lists
        a = list(reversed(self.num))
        b = list(reversed(self.den))
        terms = order - shift + 1
        out = {}
        if terms <= 0:
            return out
        q = []
        rem = a + [Fraction(0)] * terms
        for i in range(terms):
            c = rem[i] / b[0]
            q.append(c)
            if c:
                for j, y in enumerate(b):
                    if i + j < len(rem):
                        rem[i + j] -= c * y
        for i, c in enumerate(q):
            if c:
                out[i + shift] = c
        return out

    # -- presentation
    def __str__(self):
        if len(self.den) == 1:
            return _poly_str(self.num)
        n = _poly_str(self.num)
        if len(self.num) > 1 or "/" in n:
            n = f"({n})"
        return f"{n}/({_poly_str(self.den)})"

    def __repr__(self):
        return f"RatPolyN('{self}')"

    def to_json(self) -> dict:
        return {"numerator": [frac_str(c) for c in self.num],
                "denominator": [frac_str(c) for c in self.den]}

    @classmethod
    def from_json(cls, obj: dict) -> "RatPolyN":
        return cls(obj["numerator"], obj["denominator"])


def frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def N_() -> RatPolyN:
    return RatPolyN.var()


def from_factors(const, factors: Sequence = (), inverse: Sequence = ()) -> RatPolyN:
    """const * prod(N + a)^k / prod(N + b)^j, factors given as (a, k)."""
    N = RatPolyN.var()
    out = RatPolyN.const(const)
    for a, k in factors:
        out = out * (N + a) ** k
    for b, j in inverse:
        out = out / (N + b) ** j
    return out


# -------------------------------------------------------------- interpolation

def _solve_exact(rows, rhs):
    """Gauss-Jordan over Fractions.  Returns (solution or None, rank, consistent)."""
    n = len(rows[0]) if rows else 0
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    rank = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    consistent = all(m[i][n] == 0 for i in range(rank, len(m)))
    if not consistent or rank < n:
        return None, rank, consistent
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = m[i][n]
    return sol, rank, True


def interpolate_rational(samples, degree_bounds) -> RatPolyN:
    """Recover p/q with deg p <= d_num, deg q <= d_den from exact samples.

    ``samples`` is a sequence of (n, value).  At least d_num + d_den + 2
    distinct points are required; the extra point is used as a check, and
    the result is re-evaluated on every sample before being returned.
    """
    d_num, d_den = degree_bounds
    pts = [(_frac(n), _frac(v)) for n, v in samples]
    if len({n for n, _ in pts}) != len(pts):
        raise InterpolationError("sample abscissae must be distinct")
    if len(pts) < d_num + d_den + 2:
        raise UnderdeterminedError(
            f"need at least {d_num + d_den + 2} samples, got {len(pts)}")
    # try the smallest monic denominator degree first; the first one that
    # admits a solution gives the reduced representation
    for e in range(d_den + 1):
        rows, rhs = [], []
        for n, v in pts:
            powers = [n ** i for i in range(max(d_num, e) + 1)]
            row = powers[: d_num + 1] + [-v * powers[j] for j in range(e)]
            rows.append(row)
            rhs.append(v * powers[e])
        sol, rank, consistent = _solve_exact(rows, rhs)
        if not consistent:
            continue
        if sol is None:
            raise UnderdeterminedError(
                f"rank {rank} < {d_num + 1 + e} unknowns; supply more samples")
        num = sol[: d_num + 1]
        den = sol[d_num + 1:] + [Fraction(1)]
        if any(_peval(_trim(den), n) == 0 for n, _ in pts):
            continue
        f = RatPolyN(num, den)
        for n, v in pts:
            if f.evaluate_at(n) != v:
                raise InterpolationError(f"re-evaluation mismatch at N = {n}")
        return f
    raise InterpolationError(
        f"no rational function with degrees <= {degree_bounds} fits the samples")
