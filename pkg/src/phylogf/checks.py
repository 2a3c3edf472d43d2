"""Cross-check suites behind ``phylogf verify``.

Each check returns a dict with ``name``, ``status`` ("pass", "fail" or
"known") and a short ``detail``.  "known" marks a comparison against a
printed formula that is already established to be wrong; it is reported but
does not fail the run.
"""

from __future__ import annotations

import json
import math
from decimal import Decimal
from fractions import Fraction
from importlib import resources

from . import asym, gf, oracle
from .series import TruncSeries

LEVELS = {"fast": {"order": 100, "oracle_n": 7}, "full": {"order": 961, "oracle_n": 9}}


def first_difference(a: TruncSeries, b: TruncSeries, upto: int) -> int | None:
    for i in range(upto + 1):
        if a[i] != b[i]:
            return i
    return None


def _series_check(name: str, a: TruncSeries, b: TruncSeries, upto: int, known: bool = False) -> dict:
    diff = first_difference(a, b, upto)
    if diff is None:
        return {"name": name, "status": "pass", "detail": f"equal up to z^{upto}"}
    return {
        "name": name,
        "status": "known" if known else "fail",
        "detail": f"first difference at z^{diff}: {a[diff]} vs {b[diff]}",
    }


def closed_form_checks(N: int) -> list[dict]:
    out = []
    for k in (1, 2, 3):
        out.append(
            _series_check(
                f"operator_N({k}) == closed form",
                gf.operator_N(k, N),
                gf.expand_algebraic(gf.closed_form("normal", k), N),
                N,
            )
        )
        out.append(
            _series_check(
                f"component_T({k}) == closed form",
                gf.component_T(k, N),
                gf.expand_algebraic(gf.closed_form("treechild", k), N),
                N,
            )
        )
    out.append(
        _series_check(
            "operator_T(1) == closed form",
            gf.operator_T(1, N),
            gf.expand_algebraic(gf.closed_form("treechild", 1), N),
            N,
        )
    )
    # the printed tree-child formulas for k = 2, 3 are known to be off
    for k in (2, 3):
        printed = gf.expand_algebraic(gf.CATALOG["treechild", k], N)
        out.append(
            _series_check(
                f"printed tree-child closed form k={k} == component_T", printed, gf.component_T(k, N), N, known=True
            )
        )
        op = gf.operator_T(k, N)
        out.append(_series_check(f"operator_T({k}) == printed closed form", op, printed, N, known=True))
        out.append(_series_check(f"operator_T({k}) == component_T", op, gf.component_T(k, N), N, known=True))
    return out


def unicyclic_checks(N: int) -> list[dict]:
    return [
        _series_check("unicyclic normal == operator_N(1)", gf.unicyclic_gf("normal", N), gf.operator_N(1, N), N),
        _series_check(
            "unicyclic tree-child == operator_T(1)", gf.unicyclic_gf("treechild", N), gf.operator_T(1, N), N
        ),
    ]


def oracle_checks(max_n: int) -> list[dict]:
    bad = []
    compared = 0
    for n in range(1, max_n + 1, 2):
        for k in range(4):
            if oracle.role_counts(n, k) is None:
                continue
            found = oracle.enumerate_counts(n, k, cap=max_n)
            for klass in gf.CLASSES:
                compared += 1
                series = gf.count(klass, k, n)
                if found[klass] != series:
                    bad.append(f"{klass} k={k} n={n}: oracle {found[klass]} vs series {series}")
            if k == 1 and found["all"] != found["treechild"]:
                bad.append(f"all vs tree-child k=1 n={n}: {found['all']} vs {found['treechild']}")
    return [
        {
            "name": f"oracle == series (odd n <= {max_n})",
            "status": "fail" if bad else "pass",
            "detail": bad[0] if bad else f"{compared} counts agree",
        }
    ]


def structural_checks(N: int) -> list[dict]:
    out = []
    series = {(c, k): gf.egf(c, k, N) for c in gf.CLASSES for k in range(4)}
    odd_bad = [
        f"{c} k={k} z^{i}" for (c, k), s in series.items() for i in range(0, N + 1, 2) if s[i] != 0
    ]
    out.append(
        {
            "name": f"parity up to z^{N}",
            "status": "fail" if odd_bad else "pass",
            "detail": odd_bad[0] if odd_bad else "all even coefficients vanish",
        }
    )
    int_bad = []
    for (c, k), s in series.items():
        fact = 1
        for n in range(1, N + 1):
            fact *= n
            v = s[n] * fact
            if v.denominator != 1 or v < 0:
                int_bad.append(f"{c} k={k} n={n}: {v}")
                break
    out.append(
        {
            "name": "integrality and nonnegativity of n![z^n]",
            "status": "fail" if int_bad else "pass",
            "detail": int_bad[0] if int_bad else f"n <= {N}",
        }
    )
    dom_bad = [
        f"k={k} n={n}"
        for k in (1, 2, 3)
        for n in range(1, N + 1, 2)
        if series["normal", k][n] > series["treechild", k][n]
    ]
    out.append(
        {
            "name": "dominance normal <= tree-child",
            "status": "fail" if dom_bad else "pass",
            "detail": dom_bad[0] if dom_bad else f"k = 1..3, n <= {N}",
        }
    )
    out.append(
        _series_check(
            "caterpillar path closed form == derivative definition",
            gf.caterpillar_path(N),
            gf.caterpillar_path_operator(N),
            N,
        )
    )
    cat_bad = []
    for k in (2, 3):
        low = gf.caterpillar_lower_bound(k, N)
        for n in range(1, N + 1, 2):
            if low[n] > series["normal", k][n]:
                cat_bad.append(f"k={k} n={n}")
                break
    out.append(
        {
            "name": "caterpillar lower bound <= normal count",
            "status": "fail" if cat_bad else "pass",
            "detail": cat_bad[0] if cat_bad else f"k = 2, 3, n <= {N}",
        }
    )
    div_bad = []
    checked = 0
    for c in gf.CLASSES:
        for k in range(4):
            leaves = 1
            while 2 * leaves + 2 * k - 1 <= N:
                try:
                    gf.leaf_labeled_count(c, k, leaves)
                except ArithmeticError as exc:
                    div_bad.append(str(exc))
                checked += 1
                leaves += 1
    out.append(
        {
            "name": "leaf-label conversion divides exactly",
            "status": "fail" if div_bad else "pass",
            "detail": div_bad[0] if div_bad else f"{checked} conversions",
        }
    )
    return out


# ---------------------------------------------------------------------------
# appendix tables


def load_appendix() -> dict:
    """The printed tables: {"normal:1": [{"n", "exact", "first", "second"}, ...], ...}."""
    text = resources.files("phylogf").joinpath("data/appendix.json").read_text(encoding="utf-8")
    return json.loads(text)


def printed_value(cell: list[str]) -> tuple[Decimal, Decimal]:
    """(value, one unit in the last printed place) for a printed mantissa/exponent pair."""
    mant, exp = cell
    places = len(mant.split(".")[1]) if "." in mant else 0
    return Decimal(mant).scaleb(int(exp)), Decimal(1).scaleb(int(exp) - places)


def appendix_cells(table_e: bool = True) -> list[dict]:
    """Every printed cell next to the computed value and the deviation in printed units."""
    out = []
    for key, rows in load_appendix().items():
        klass, k = key.split(":")
        k = int(k)
        computed = asym.appendix_table(klass, k, [r["n"] for r in rows], table_e=table_e)
        for r, c in zip(rows, computed):
            for column, value in (("exact", Decimal(c.exact)), ("first", c.first), ("second", c.second)):
                printed, ulp = printed_value(r[column])
                out.append(
                    {
                        "klass": klass,
                        "k": k,
                        "n": r["n"],
                        "column": column,
                        "printed": f"{r[column][0]}e{r[column][1]}",
                        "computed": asym.render(value),
                        "units": float((value - printed) / ulp),
                    }
                )
    return out


def appendix_check() -> dict:
    cells = appendix_cells()
    bad = [c for c in cells if abs(c["units"]) > 1]
    detail = f"{len(cells) - len(bad)}/{len(cells)} cells within one unit of the last printed digit"
    if bad:
        b = bad[0]
        detail += f"; first miss {b['klass']} k={b['k']} n={b['n']} {b['column']}: printed {b['printed']}, computed {b['computed']}"
    return {"name": "appendix tables", "status": "fail" if bad else "pass", "detail": detail}


def run_checks(level: str = "fast") -> list[dict]:
    cfg = LEVELS[level]
    N = cfg["order"]
    checks = []
    checks += closed_form_checks(min(N, 200) if level == "fast" else N)
    checks += unicyclic_checks(N)
    checks += oracle_checks(cfg["oracle_n"])
    checks += structural_checks(N)
    if level == "full":
        checks.append(appendix_check())
    return checks
