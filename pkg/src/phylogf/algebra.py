"""Multilinear coefficient ring Q[y_1..y_k]/(y_1^2, ..., y_k^2).

An element stores one exact rational per subset of the markers; subsets are
bitmasks (bit ``i-1`` stands for ``y_i``).  Multiplication is the disjoint
subset convolution, so "differentiate once in every marker, then set all
markers to zero" is just reading off the coefficient of the full subset.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

MAX_MARKERS = 8

Scalar = Union[int, Fraction]


class MarkerMismatch(ValueError):
    pass


def submasks(mask: int) -> Iterable[int]:
    """Yield every submask of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class MultilinearElem:
    """Immutable element of the nilpotent multilinear algebra in ``k`` markers."""

    __slots__ = ("k", "coeffs", "_hash")

    def __init__(self, k: int, coeffs: Iterable[Scalar] | dict | None = None):
        if not 0 <= k <= MAX_MARKERS:
            raise ValueError(f"marker count must be in 0..{MAX_MARKERS}, got {k}")
        size = 1 << k
        dense = [Fraction(0)] * size
        if isinstance(coeffs, dict):
            for mask, c in coeffs.items():
                if not 0 <= mask < size:
                    raise ValueError(f"subset {mask:#b} out of range for k={k}")
                dense[mask] += Fraction(c)
        elif coeffs is not None:
            values = list(coeffs)
            if len(values) > size:
                raise ValueError(f"expected at most {size} coefficients")
            for i, c in enumerate(values):
                dense[i] = Fraction(c)
        self.k = k
        self.coeffs = tuple(dense)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, k: int, c: Scalar) -> MultilinearElem:
        return cls(k, {0: c})

    @classmethod
    def gen(cls, k: int, i: int) -> MultilinearElem:
        """The generator ``y_i`` (1-based)."""
        if not 1 <= i <= k:
            raise ValueError(f"generator index {i} out of range 1..{k}")
        return cls(k, {1 << (i - 1): 1})

    @classmethod
    def marker_sum(cls, k: int, mask: int) -> MultilinearElem:
        """Sum of the generators whose bits are set in ``mask``."""
        return cls(k, {1 << i: 1 for i in range(k) if mask >> i & 1})

    # -- accessors ----------------------------------------------------
    def __getitem__(self, mask: int) -> Fraction:
        return self.coeffs[mask]

    @property
    def constant(self) -> Fraction:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[int]:
        return [m for m, c in enumerate(self.coeffs) if c]

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> MultilinearElem:
        if isinstance(other, MultilinearElem):
            if other.k != self.k:
                raise MarkerMismatch(f"marker counts differ: {self.k} vs {other.k}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultilinearElem.const(self.k, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultilinearElem(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return MultilinearElem(self.k, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultilinearElem(self.k, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultilinearElem(self.k, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mle_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultilinearElem(self.k, [a / other for a in self.coeffs])
        return self * mle_recip(self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, MultilinearElem):
            return self.k == other.k and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, self.coeffs))
        return self._hash

    def __repr__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(f"y{i + 1}" for i in range(self.k) if mask >> i & 1)
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return f"MultilinearElem(k={self.k}: {' + '.join(terms) or '0'})"


def mle_add(a: MultilinearElem, b: MultilinearElem) -> MultilinearElem:
    return a + b


def mle_mul(a: MultilinearElem, b: MultilinearElem) -> MultilinearElem:
    """Disjoint subset convolution: (ab)_S = sum over A + B = S, A & B = 0."""
    if a.k != b.k:
        raise MarkerMismatch(f"marker counts differ: {a.k} vs {b.k}")
    size = 1 << a.k
    out = [Fraction(0)] * size
    bsupp = [m for m in range(size) if b.coeffs[m]]
    for ma in range(size):
        ca = a.coeffs[ma]
        if not ca:
            continue
        for mb in bsupp:
            if ma & mb:
                continue
            out[ma | mb] += ca * b.coeffs[mb]
    return MultilinearElem(a.k, out)


def mle_recip(a: MultilinearElem) -> MultilinearElem:
    """Inverse via the terminating geometric series of the nilpotent part.

    With a = c(1 + u), u nilpotent of index <= k+1, 1/a = (1/c) sum_j (-u)^j.
    """
    c = a.constant
    if c == 0:
        raise ZeroDivisionError("multilinear element has zero constant part")
    u = (a / c) - 1
    term = MultilinearElem.const(a.k, 1)
    acc = term
    for _ in range(a.k):
        term = mle_mul(term, -u)
        if term.is_zero():
            break
        acc = acc + term
    return acc / c


def extract_full(a: MultilinearElem) -> Fraction:
    """Coefficient of y_1 y_2 ... y_k, i.e. the mixed derivative at zero."""
    return a.coeffs[(1 << a.k) - 1]


def substitute_zero(a: MultilinearElem, mask: int) -> MultilinearElem:
    """Set the markers in ``mask`` to zero."""
    return MultilinearElem(a.k, [c if not (m & mask) else 0 for m, c in enumerate(a.coeffs)])
