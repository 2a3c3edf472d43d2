"""First- and second-order asymptotics, evaluated in decimal arithmetic.

Counts grow like (sqrt(2)/e)^n n^(n+2k-1) (A + B/sqrt(n)); at n = 961 that is
about 10^2600, far outside float range, so estimates go through logarithms
in ``decimal`` with a generous exponent range and guard digits.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from . import gf

DEFAULT_DIGITS = 50
GUARD_DIGITS = 10
APPENDIX_ROWS = tuple(m * m for m in range(7, 33, 2))

# The printed comparison tables were evaluated with e cut to ten digits; the
# error this introduces grows linearly in n (about 1.7e-10 n relative).
TABLE_E = Decimal("2.718281828")


def _context(digits: int) -> decimal.Context:
    if digits < 10:
        raise ValueError("need at least 10 significant digits")
    return decimal.Context(
        prec=digits + GUARD_DIGITS,
        rounding=decimal.ROUND_HALF_EVEN,
        Emax=10**9,
        Emin=-(10**9),
    )


def _pi(ctx: decimal.Context) -> Decimal:
    """Machin: pi = 16 atan(1/5) - 4 atan(1/239)."""

    def atan_inv(x: int) -> Decimal:
        x2 = x * x
        term = ctx.divide(Decimal(1), Decimal(x))
        total = term
        k = 1
        eps = Decimal(10) ** (-(ctx.prec + 2))
        while abs(term) > eps:
            term = ctx.divide(-term, Decimal(x2))
            total = ctx.add(total, ctx.divide(term, Decimal(2 * k + 1)))
            k += 1
        return total

    wide = decimal.Context(prec=ctx.prec + 5, rounding=ctx.rounding, Emax=ctx.Emax, Emin=ctx.Emin)
    with decimal.localcontext(wide):
        value = 16 * atan_inv(5) - 4 * atan_inv(239)
    return ctx.plus(value)


@dataclass(frozen=True)
class Surd:
    """q * sqrt(2)^s * sqrt(pi)^t with q rational; enough for every constant here.

    Stored with s in {0, 1} so that equal numbers compare equal.
    """

    q: Fraction
    sqrt2: int = 0
    sqrtpi: int = 0

    def __post_init__(self):
        q, s = Fraction(self.q), self.sqrt2
        q *= Fraction(2) ** (s // 2)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "sqrt2", s % 2)

    def value(self, ctx: decimal.Context) -> Decimal:
        with decimal.localcontext(ctx):
            out = Decimal(self.q.numerator) / Decimal(self.q.denominator)
            if self.sqrt2:
                out *= Decimal(2).sqrt() ** self.sqrt2
            if self.sqrtpi:
                out *= _pi(ctx).sqrt() ** self.sqrtpi
            return +out

    def __mul__(self, other: Surd) -> Surd:
        return Surd(self.q * other.q, self.sqrt2 + other.sqrt2, self.sqrtpi + other.sqrtpi)


@dataclass(frozen=True)
class AsymConstants:
    A: Surd
    B: Surd
    c: Surd


_F = Fraction
CONSTANTS: dict[tuple[str, int], AsymConstants] = {
    ("normal", 1): AsymConstants(Surd(_F(1, 2), 1), Surd(_F(-3, 2), 0, 1), Surd(_F(1, 4), 1)),
    ("normal", 2): AsymConstants(Surd(_F(1, 16), 1), Surd(_F(-3, 8), 0, 1), Surd(_F(1, 32), 1)),
    ("normal", 3): AsymConstants(Surd(_F(1, 192), 1), Surd(_F(-3, 64), 0, 1), Surd(_F(1, 384), 1)),
    ("treechild", 1): AsymConstants(Surd(_F(1, 2), 1), Surd(_F(-1, 2), 0, 1), Surd(_F(1, 4), 1)),
    ("treechild", 2): AsymConstants(Surd(_F(1, 16), 1), Surd(_F(-1, 8), 0, 1), Surd(_F(1, 32), 1)),
    ("treechild", 3): AsymConstants(Surd(_F(1, 192), 1), Surd(_F(-1, 64), 0, 1), Surd(_F(1, 384), 1)),
}


def constants(klass: str, k: int) -> AsymConstants:
    gf.check_class(klass)
    if (klass, k) not in CONSTANTS:
        raise gf.UnsupportedK(f"asymptotic constants are known for k in 1..3, got {k}")
    return CONSTANTS[klass, k]


def _gamma_half(m: int) -> Fraction:
    """Gamma(m + 1/2) / sqrt(pi) = (2m)! / (4^m m!)."""
    return Fraction(math.factorial(2 * m), 4**m * math.factorial(m))


def leading_constant_from_gf(closed: gf.AlgebraicGF, k: int) -> Surd:
    """Odd-n leading constant 2 sqrt(2 pi) a(1/2) / (4^k Gamma(2k - 1/2)), which is A = 2 c_k."""
    q = 2 * closed.a_at(Fraction(1, 2)) / (4**k * _gamma_half(2 * k - 1))
    # sqrt(2 pi) / sqrt(pi) leaves sqrt(2)
    return Surd(q, 1)


def constants_from_gf(closed: gf.AlgebraicGF) -> tuple[Surd, Surd]:
    """(A, B) read off the singular expansion of a closed form at z^2 = 1/2.

    With w = z^2 and m = (n-1)/2, [w^m] (1-2w)^(-p) ~ 2^m m^(p-1) / Gamma(p);
    the sqrt(1-2w) term is the next order down, so
    B / A = -sqrt(2) (b/a)(1/2) Gamma(p) / Gamma(p - 1/2).
    """
    p = closed.p
    half = Fraction(1, 2)
    a, b = closed.a_at(half), closed.b_at(half)
    k = (closed.two_p + 1) // 4
    A = leading_constant_from_gf(closed, k)
    # p is a half-integer: Gamma(p) = Gamma(j + 1/2), Gamma(p - 1/2) = (j-1)!
    j = int(p - half)
    ratio = -(b / a) * _gamma_half(j) / math.factorial(j - 1)
    B = A * Surd(ratio, 1, 1)
    return A, B


class EvenN(ValueError):
    pass


@dataclass(frozen=True)
class Estimate:
    value: Decimal
    even_n: bool = False


def _log_scale(n: int, k: int, ctx: decimal.Context, table_e: bool = False) -> Decimal:
    with decimal.localcontext(ctx):
        ln2 = Decimal(2).ln()
        ln_e = TABLE_E.ln() if table_e else Decimal(1)
        return n * (ln2 / 2 - ln_e) + (n + 2 * k - 1) * Decimal(n).ln()


def scale(n: int, k: int, digits: int = DEFAULT_DIGITS, table_e: bool = False) -> Decimal:
    """(sqrt(2)/e)^n n^(n+2k-1)."""
    ctx = _context(digits)
    with decimal.localcontext(ctx):
        return _log_scale(n, k, ctx, table_e).exp()


def asym_estimate(
    klass: str,
    k: int,
    n: int,
    order: int = 2,
    digits: int = DEFAULT_DIGITS,
    table_e: bool = False,
) -> Estimate:
    """First (order=1) or second (order=2) order estimate of the count.

    ``table_e`` swaps e for the ten-digit value the printed tables used.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    const = constants(klass, k)
    ctx = _context(digits)
    if n % 2 == 0:
        return Estimate(Decimal(0), even_n=True)
    if n < 1:
        raise ValueError("n must be positive")
    with decimal.localcontext(ctx):
        factor = const.A.value(ctx)
        if order == 2:
            factor += const.B.value(ctx) / Decimal(n).sqrt()
        value = _log_scale(n, k, ctx, table_e).exp() * factor
    return Estimate(decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN, Emax=10**9).plus(value))


def leaf_asym_estimate(klass: str, k: int, leaves: int, digits: int = DEFAULT_DIGITS) -> Decimal:
    """2^(3k-1) c_k (2/e)^l l^(l+2k-1)."""
    if leaves < 1:
        raise ValueError("need at least one leaf")
    const = constants(klass, k)
    ctx = _context(digits)
    with decimal.localcontext(ctx):
        log = leaves * (Decimal(2).ln() - 1) + (leaves + 2 * k - 1) * Decimal(leaves).ln()
        value = Decimal(2) ** (3 * k - 1) * const.c.value(ctx) * log.exp()
    return decimal.Context(prec=digits, Emax=10**9).plus(value)


def second_order_probe(klass: str, k: int, n: int, digits: int = DEFAULT_DIGITS) -> Decimal:
    """sqrt(n) (count / ((sqrt(2)/e)^n n^(n+2k-1)) - A): the empirical B."""
    if n % 2 == 0:
        raise EvenN("the probe needs odd n")
    const = constants(klass, k)
    ctx = _context(digits)
    exact = gf.count(klass, k, n)
    with decimal.localcontext(ctx):
        ratio = Decimal(exact) / _log_scale(n, k, ctx).exp()
        return Decimal(n).sqrt() * (ratio - const.A.value(ctx))


# ---------------------------------------------------------------------------
# rendering


def scientific(value, sig: int = 10) -> tuple[str, int]:
    """(mantissa, exponent) with ``sig`` significant digits, round-half-even.

    Works for exact integers of any size (no float conversion) and Decimals.
    """
    d = Decimal(value) if not isinstance(value, Decimal) else value
    if d == 0:
        return "0." + "0" * (sig - 1), 0
    ctx = decimal.Context(prec=sig, rounding=decimal.ROUND_HALF_EVEN, Emax=10**9, Emin=-(10**9))
    r = ctx.plus(d)
    sign, digits, exp = r.as_tuple()
    digits = "".join(map(str, digits)).ljust(sig, "0")
    exponent = exp + len(r.as_tuple().digits) - 1
    mant = f"{'-' if sign else ''}{digits[0]}.{digits[1:]}"
    return mant, exponent


def render(value, sig: int = 10) -> str:
    mant, e = scientific(value, sig)
    return f"{mant}E{e:+05d}"


@dataclass(frozen=True)
class TableRow:
    n: int
    exact: int
    first: Decimal
    second: Decimal


def appendix_table(
    klass: str, k: int, rows=APPENDIX_ROWS, digits: int = DEFAULT_DIGITS, table_e: bool = False
) -> list[TableRow]:
    rows = list(rows)
    odd = [n for n in rows if n % 2]
    if odd:
        gf.egf(klass, k, max(odd))
    out = []
    for n in rows:
        out.append(
            TableRow(
                n,
                gf.count(klass, k, n) if n % 2 else 0,
                asym_estimate(klass, k, n, 1, digits, table_e).value,
                asym_estimate(klass, k, n, 2, digits, table_e).value,
            )
        )
    return out
