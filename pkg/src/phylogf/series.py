"""Truncated power series in z over Q or over the multilinear marker ring.

A series over ``Q[y_1..y_k]/(y_i^2)`` is stored as ``2**k`` rational series,
one per marker subset; the product is then a disjoint subset convolution of
ordinary series products.  Each rational series keeps integer numerators over
one common denominator, so the inner products run on machine big integers
(packed into a single multiplication by Kronecker substitution) instead of
on ``Fraction`` objects.

The generating-function building blocks for tree-child Motzkin trees and
for the path classes used by the network constructions live at the bottom.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .algebra import MarkerMismatch, MultilinearElem, mle_recip

try:  # GMP multiplication is much faster for the packed operands
    import gmpy2

    def _bigmul(x: int, y: int) -> int:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))

except ImportError:  # pragma: no cover - exercised only without gmpy2

    def _bigmul(x: int, y: int) -> int:
        return x * y


Coeff = Union[int, Fraction, MultilinearElem]

_SCHOOLBOOK_CUTOFF = 12


class RingMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised when dividing by z^m would discard a nonzero coefficient."""


# ---------------------------------------------------------------------------
# integer convolution


def _schoolbook(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    out = [0] * m
    for i, x in enumerate(a):
        if not x or i >= m:
            continue
        for j in range(min(len(b), m - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _pack(values: Sequence[int], nbytes: int) -> int:
    pos = b"".join((v if v > 0 else 0).to_bytes(nbytes, "little") for v in values)
    neg = b"".join((-v if v < 0 else 0).to_bytes(nbytes, "little") for v in values)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def iconv(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n + 1`` coefficients of the product of two integer polynomials."""
    a = list(a[: n + 1])
    b = list(b[: n + 1])
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    if not a or not b:
        return [0] * (n + 1)
    m = min(n + 1, len(a) + len(b) - 1)
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        out = _schoolbook(a, b, m)
    else:
        bits = (
            max(abs(v) for v in a).bit_length()
            + max(abs(v) for v in b).bit_length()
            + min(len(a), len(b)).bit_length()
            + 2
        )
        nbytes = (bits + 7) // 8
        prod = _bigmul(_pack(a, nbytes), _pack(b, nbytes))
        # shift every signed digit into [0, 2^B) so no borrows cross digits
        half = 1 << (8 * nbytes - 1)
        offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * m, "little")
        width = 8 * nbytes * m
        raw = ((prod + offset) & ((1 << width) - 1)).to_bytes(nbytes * m, "little")
        out = [
            int.from_bytes(raw[j * nbytes : (j + 1) * nbytes], "little") - half
            for j in range(m)
        ]
    out.extend([0] * (n + 1 - m))
    return out


# ---------------------------------------------------------------------------
# rational vectors: integer numerators over a shared positive denominator


class _QVec:
    __slots__ = ("nums", "den")

    def __init__(self, nums: Sequence[int], den: int = 1, reduce: bool = True):
        nums = tuple(nums)
        if den < 0:
            nums = tuple(-v for v in nums)
            den = -den
        if reduce and den != 1:
            g = math.gcd(den, *nums)
            if g > 1:
                nums = tuple(v // g for v in nums)
                den //= g
        self.nums = nums
        self.den = den

    @classmethod
    def from_fractions(cls, values: Iterable) -> _QVec:
        fr = [Fraction(v) for v in values]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls([f.numerator * (den // f.denominator) for f in fr], den, reduce=False)

    def __len__(self):
        return len(self.nums)

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(self.nums[i], self.den)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def fractions(self) -> list[Fraction]:
        return [Fraction(v, self.den) for v in self.nums]

    def truncate(self, order: int) -> _QVec:
        if order + 1 == len(self.nums):
            return self
        nums = self.nums[: order + 1] + (0,) * max(0, order + 1 - len(self.nums))
        return _QVec(nums, self.den)

    def add(self, other: _QVec, sign: int = 1) -> _QVec:
        n = min(len(self.nums), len(other.nums))
        den = math.lcm(self.den, other.den)
        fa, fb = den // self.den, sign * (den // other.den)
        return _QVec([x * fa + y * fb for x, y in zip(self.nums[:n], other.nums[:n])], den)

    def scale(self, c: Fraction) -> _QVec:
        c = Fraction(c)
        return _QVec([v * c.numerator for v in self.nums], self.den * c.denominator)

    def mul(self, other: _QVec, order: int) -> _QVec:
        return _QVec(iconv(self.nums, other.nums, order), self.den * other.den)

    def shift(self, m: int) -> _QVec:
        if m >= 0:
            return _QVec((0,) * m + self.nums, self.den, reduce=False)
        if any(self.nums[:-m]):
            raise NotDivisible(f"series is not divisible by z^{-m}")
        return _QVec(self.nums[-m:], self.den, reduce=False)


# ---------------------------------------------------------------------------
# the series type


class TruncSeries:
    """Power series in z known up to and including z^order.

    ``k is None`` means rational coefficients; otherwise coefficients live in
    the multilinear ring with ``k`` markers.
    """

    __slots__ = ("order", "k", "parts")

    def __init__(self, order: int, parts: Sequence[_QVec | None], k: int | None = None):
        size = 1 if k is None else 1 << k
        if len(parts) != size:
            raise ValueError(f"expected {size} parts, got {len(parts)}")
        self.order = order
        self.k = k
        self.parts = tuple(
            None if p is None or p.is_zero() else p.truncate(order) for p in parts
        )

    # -- construction -------------------------------------------------
    @classmethod
    def from_coeffs(
        cls, coeffs: Sequence[Coeff], order: int | None = None, k: int | None = None
    ) -> TruncSeries:
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if k is None:
            ks = {c.k for c in coeffs if isinstance(c, MultilinearElem)}
            if len(ks) > 1:
                raise MarkerMismatch(f"coefficients mix marker counts {sorted(ks)}")
            k = ks.pop() if ks else None
        coeffs = coeffs[: order + 1] + [0] * max(0, order + 1 - len(coeffs))
        if k is None:
            return cls(order, [_QVec.from_fractions(coeffs)])
        size = 1 << k
        cols: list[list[Fraction]] = [[Fraction(0)] * (order + 1) for _ in range(size)]
        for n, c in enumerate(coeffs):
            if isinstance(c, MultilinearElem):
                if c.k != k:
                    raise MarkerMismatch(f"coefficient has k={c.k}, series has k={k}")
                for mask, v in enumerate(c.coeffs):
                    cols[mask][n] = v
            else:
                cols[0][n] = Fraction(c)
        return cls(order, [_QVec.from_fractions(col) for col in cols], k)

    @classmethod
    def zero(cls, order: int, k: int | None = None) -> TruncSeries:
        return cls(order, [None] * (1 if k is None else 1 << k), k)

    @classmethod
    def const(cls, c: Coeff, order: int, k: int | None = None) -> TruncSeries:
        return cls.from_coeffs([c], order, k if not isinstance(c, MultilinearElem) else c.k)

    @classmethod
    def z(cls, order: int, k: int | None = None) -> TruncSeries:
        return cls.from_coeffs([0, 1], order, k)

    # -- access -------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.parts)

    def part(self, mask: int) -> TruncSeries:
        """The rational series multiplying the marker monomial ``mask``."""
        p = self.parts[mask]
        return TruncSeries(self.order, [p])

    def __getitem__(self, n: int) -> Coeff:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient z^{n} outside 0..{self.order}")
        if self.k is None:
            p = self.parts[0]
            return Fraction(0) if p is None else p[n]
        return MultilinearElem(
            self.k, [Fraction(0) if p is None else p[n] for p in self.parts]
        )

    @property
    def coeffs(self) -> list[Coeff]:
        return [self[n] for n in range(self.order + 1)]

    def __len__(self):
        return self.order + 1

    def __repr__(self):
        ring = "Q" if self.k is None else f"Q[y1..y{self.k}]"
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"TruncSeries<{ring}, O(z^{self.order + 1})>[{head}{more}]"

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.k != other.k or self.order != other.order:
            return False
        return all(
            (a is None and b is None)
            or (a is not None and b is not None and a.nums == b.nums and a.den == b.den)
            for a, b in zip(self.parts, other.parts)
        )

    __hash__ = None

    # -- operator sugar -------------------------------------------------
    def _lift(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction, MultilinearElem)):
            return TruncSeries.const(other, self.order, self.k)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        return other if other is NotImplemented else ts_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return other if other is NotImplemented else ts_sub(self, other)

    def __rsub__(self, other):
        other = self._lift(other)
        return other if other is NotImplemented else ts_sub(other, self)

    def __neg__(self):
        return ts_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MultilinearElem)):
            return ts_scale(self, other)
        if isinstance(other, TruncSeries):
            return ts_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return ts_scale(self, Fraction(1) / Fraction(other))
        if isinstance(other, TruncSeries):
            return ts_mul(self, ts_recip(other))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return ts_recip(self) ** (-e)
        result = TruncSeries.const(1, self.order, self.k)
        base = self
        while e:
            if e & 1:
                result = ts_mul(result, base)
            e >>= 1
            if e:
                base = ts_mul(base, base)
        return result


def _check_ring(a: TruncSeries, b: TruncSeries) -> None:
    if a.k != b.k:
        raise RingMismatch(f"ring mismatch: k={a.k} vs k={b.k}")


def ts_truncate(s: TruncSeries, order: int) -> TruncSeries:
    if order > s.order:
        raise ValueError(f"cannot extend a series known to O(z^{s.order + 1})")
    return s if order == s.order else TruncSeries(order, s.parts, s.k)


def ts_add(a: TruncSeries, b: TruncSeries, sign: int = 1) -> TruncSeries:
    _check_ring(a, b)
    order = min(a.order, b.order)
    parts = []
    for pa, pb in zip(a.parts, b.parts):
        if pb is None:
            parts.append(pa)
        elif pa is None:
            parts.append(pb if sign == 1 else pb.scale(Fraction(-1)))
        else:
            parts.append(pa.truncate(order).add(pb.truncate(order), sign))
    return TruncSeries(order, parts, a.k)


def ts_sub(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return ts_add(a, b, -1)


def ts_scale(s: TruncSeries, c: Coeff) -> TruncSeries:
    """Multiply by a ring constant (rational, or a marker-ring element)."""
    if isinstance(c, MultilinearElem):
        return ts_mul(s, TruncSeries.const(c, s.order))
    c = Fraction(c)
    return TruncSeries(s.order, [None if p is None else p.scale(c) for p in s.parts], s.k)


def ts_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product; over the marker ring the masks combine disjointly."""
    _check_ring(a, b)
    order = min(a.order, b.order)
    acc: list[_QVec | None] = [None] * a.size
    bsupp = [(m, p) for m, p in enumerate(b.parts) if p is not None]
    for ma, pa in enumerate(a.parts):
        if pa is None:
            continue
        for mb, pb in bsupp:
            if ma & mb:
                continue
            prod = pa.mul(pb, order)
            tgt = ma | mb
            acc[tgt] = prod if acc[tgt] is None else acc[tgt].add(prod)
    return TruncSeries(order, acc, a.k)


def ts_shift(s: TruncSeries, m: int) -> TruncSeries:
    """Multiply by z^m; for m < 0 divide, which must be exact."""
    if m < 0 and -m > s.order:
        raise ValueError("shift exceeds the known order")
    parts = []
    for p in s.parts:
        if p is None:
            parts.append(None)
            continue
        try:
            parts.append(p.shift(m))
        except NotDivisible:
            raise NotDivisible(
                f"series has a nonzero coefficient below z^{-m}; cannot divide by z^{-m}"
            ) from None
    return TruncSeries(s.order + m, parts, s.k)


def constant_term(s: TruncSeries) -> Coeff:
    return s[0]


def ts_recip(s: TruncSeries) -> TruncSeries:
    """Multiplicative inverse by Newton iteration r <- r + r(1 - s r)."""
    c0 = s[0]
    if s.k is None:
        if c0 == 0:
            raise ZeroDivisionError("series has zero constant term")
        r = TruncSeries.const(1 / c0, 0)
    else:
        if c0.constant == 0:
            raise ZeroDivisionError("series constant has zero rational part")
        r = TruncSeries.const(mle_recip(c0), 0)
    prec = 1
    while prec <= s.order:
        prec = min(2 * prec, s.order + 1)
        sp = ts_truncate(s, prec - 1)
        rp = TruncSeries(prec - 1, r.parts, r.k)
        err = ts_sub(TruncSeries.const(1, prec - 1, s.k), ts_mul(sp, rp))
        r = ts_add(rp, ts_mul(rp, err))
    return r


def ts_sqrt(s: TruncSeries) -> TruncSeries:
    """Principal square root of a series with constant term exactly 1.

    Iterates the inverse root t <- t + t(1 - s t^2)/2, then returns s t.
    """
    if s[0] != 1:
        raise ValueError("square root needs constant term exactly 1")
    t = TruncSeries.const(1, 0, s.k)
    prec = 1
    while prec <= s.order:
        prec = min(2 * prec, s.order + 1)
        sp = ts_truncate(s, prec - 1)
        tp = TruncSeries(prec - 1, t.parts, t.k)
        err = ts_sub(TruncSeries.const(1, prec - 1, s.k), ts_mul(sp, ts_mul(tp, tp)))
        t = ts_add(tp, ts_scale(ts_mul(tp, err), Fraction(1, 2)))
    return ts_mul(s, t)


def substitute_zero(s: TruncSeries, mask: int) -> TruncSeries:
    """Set the markers in ``mask`` to zero (a ring homomorphism)."""
    if s.k is None:
        return s
    return TruncSeries(
        s.order, [None if m & mask else p for m, p in enumerate(s.parts)], s.k
    )


def to_rational(s: TruncSeries) -> TruncSeries:
    """Drop every marker (y_i := 0) and return the rational series."""
    return s if s.k is None else s.part(0)


def extract_full(s: TruncSeries) -> TruncSeries:
    """Apply the operator 'd/dy_1 ... d/dy_k at 0' coefficientwise."""
    if s.k is None:
        return s
    return s.part((1 << s.k) - 1)


# ---------------------------------------------------------------------------
# building blocks


def _marker_ring(*ys) -> int | None:
    ks = {y.k for y in ys if isinstance(y, MultilinearElem)}
    if len(ks) > 1:
        raise MarkerMismatch(f"markers from different rings: {sorted(ks)}")
    for y in ys:
        if not isinstance(y, MultilinearElem) and y != 0:
            raise ValueError("a scalar marker must be 0")
        if isinstance(y, MultilinearElem) and y.constant != 0:
            raise ValueError("markers must have zero constant part")
    return ks.pop() if ks else None


def _norm(y, k: int | None):
    """Canonical cache key: None for the rational ring, else an element."""
    if k is None:
        return None
    return y if isinstance(y, MultilinearElem) else MultilinearElem(k)


def _poly(coeffs: Sequence[Coeff], order: int, k: int | None) -> TruncSeries:
    return TruncSeries.from_coeffs(list(coeffs), order, k)


@lru_cache(maxsize=512)
def _root(order: int, y, k) -> TruncSeries:
    # sqrt(1 - 2z^2 - 4 y z^3)
    yy = 0 if y is None else y
    return ts_sqrt(_poly([1, 0, -2, -4 * yy], order, k))


def _sq_root(order: int, y) -> TruncSeries:
    k = _marker_ring(y)
    return _root(order, _norm(y, k), k)


@lru_cache(maxsize=512)
def _mb(order: int, y, k) -> TruncSeries:
    yy = 0 if y is None else y
    num = ts_shift(TruncSeries.const(1, order + 1, k) - _root(order + 1, y, k), -1)
    den = _poly([1, 2 * yy], order, k)
    return ts_mul(num, ts_recip(den)) - TruncSeries.z(order, k)


@lru_cache(maxsize=512)
def _mu(order: int, y, k) -> TruncSeries:
    if y is None:
        return TruncSeries.zero(order)
    num = TruncSeries.const(1, order, k) - _root(order, y, k)
    return ts_scale(ts_mul(num, ts_recip(_poly([1, 2 * y], order, k))), y)


def build_Mb(N: int, y=0) -> TruncSeries:
    """Tree-child Motzkin trees whose root is binary (marker y on unary vertices)."""
    k = _marker_ring(y)
    return _mb(N, _norm(y, k), k)


def build_Mu(N: int, y=0) -> TruncSeries:
    """Tree-child Motzkin trees whose root is unary."""
    k = _marker_ring(y)
    return _mu(N, _norm(y, k), k)


@lru_cache(maxsize=512)
def _m(order: int, y, k) -> TruncSeries:
    return TruncSeries.z(order, k) + _mu(order, y, k) + _mb(order, y, k)


@lru_cache(maxsize=512)
def _mt(order: int, y, k) -> TruncSeries:
    return TruncSeries.z(order, k) + _mb(order, y, k)


def build_M(N: int, y=0) -> TruncSeries:
    """All tree-child Motzkin trees: z + M_u + M_b."""
    k = _marker_ring(y)
    return _m(N, _norm(y, k), k)


def build_Mtilde(N: int, y=0) -> TruncSeries:
    """White trees (root not unary): z + M_b."""
    k = _marker_ring(y)
    return _mt(N, _norm(y, k), k)


@lru_cache(maxsize=1024)
def _p(order: int, y, yt, yh, k) -> TruncSeries:
    zero = MultilinearElem(k) if k is not None else 0
    y_, yh_ = (zero if v is None else v for v in (y, yh))
    step = _poly([0, 1, 2 * y_], order, k)
    den = TruncSeries.const(1, order, k) - ts_mul(step, _mt(order, yt, k))
    return ts_mul(_poly([1, yh_], order, k), ts_recip(den))


@lru_cache(maxsize=1024)
def _phat(order: int, y, yt, yh, k) -> TruncSeries:
    zero = MultilinearElem(k) if k is not None else 0
    y_, yh_ = (zero if v is None else v for v in (y, yh))
    z = TruncSeries.z(order, k)
    den = (
        TruncSeries.const(1, order, k)
        - ts_mul(z, _m(order, yt, k))
        - ts_mul(_poly([0, 0, y_], order, k), _mt(order, yt, k))
    )
    return ts_mul(_poly([1, yh_], order, k), ts_recip(den))


def build_P(N: int, y=0, ytilde=0, yhat=0) -> TruncSeries:
    """Paths of normal-network skeletons: (1 + z yhat) / (1 - (z + 2 z^2 y) Mtilde(z, ytilde))."""
    k = _marker_ring(y, ytilde, yhat)
    return _p(N, _norm(y, k), _norm(ytilde, k), _norm(yhat, k), k)


def build_Phat(N: int, y=0, ytilde=0, yhat=0) -> TruncSeries:
    """Paths of tree-child skeletons: (1 + z yhat) / (1 - z M(z, ytilde) - z^2 y Mtilde(z, ytilde))."""
    k = _marker_ring(y, ytilde, yhat)
    return _phat(N, _norm(y, k), _norm(ytilde, k), _norm(yhat, k), k)


def clear_caches() -> None:
    for fn in (_root, _mb, _mu, _m, _mt, _p, _phat):
        fn.cache_clear()
