"""Eliminating one variable between two equations p = 0, q = 0."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import kernels
from .diffalg import strip_factors
from .poly import INHOMOGENEOUS, FracPoly, Poly

__all__ = [
    "DenominatorNotDeclared",
    "ElimResult",
    "Method",
    "NotLinear",
    "VariableAbsent",
    "compress_power",
    "eliminate",
    "remove_factor",
    "resultant",
    "resultant_prs",
    "solve_linear",
    "sylvester_matrix",
]


class NotLinear(ValueError):
    pass


class VariableAbsent(ValueError):
    pass


class DenominatorNotDeclared(UserWarning):
    pass


class Method(str, Enum):
    LINEAR_SOLVE = "LinearSolve"
    SYLVESTER_BAREISS = "SylvesterBareiss"
    SUBRESULTANT_PRS = "SubresultantPRS"


@dataclass(frozen=True)
class ElimResult:
    eliminated: Poly
    method: Method
    removed_factors: tuple[tuple[Poly, int], ...] = ()
    weight: object = None
    content: int = 1
    raw: Poly | None = field(default=None, repr=False, compare=False)
    notes: tuple[str, ...] = ()


def _declared(den: Poly, nonvanishing: Sequence[Poly]) -> bool:
    """True when den is an integer times a product of declared factors."""
    # larger factors first, so a declared product is not broken up by its own factors
    order = sorted(nonvanishing, key=lambda f: (f.degree(), len(f)), reverse=True)
    rest, _ = strip_factors(den, order)
    return rest.is_constant()


def solve_linear(eq: Poly, v: str, nonvanishing: Sequence[Poly] = ()) -> FracPoly:
    if eq.degree(v) != 1:
        raise NotLinear(f"equation has degree {eq.degree(v)} in {v}")
    a = eq.coeff_in(v, 1)
    b = eq.coeff_in(v, 0)
    if not _declared(a, nonvanishing):
        warnings.warn(
            DenominatorNotDeclared(f"solving for {v} divides by a factor outside the declared set"),
            stacklevel=2,
        )
    return FracPoly(-b, a)


def sylvester_matrix(p: Poly, q: Poly, v: str) -> list[list[Poly]]:
    pp = p.as_univariate(v)
    qq = q.as_univariate(v)
    m = max(pp)
    n = max(qq)
    zero = Poly.zero(p.table)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j in range(m + 1):
            row[i + j] = pp.get(m - j, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j in range(n + 1):
            row[i + j] = qq.get(n - j, zero)
        rows.append(row)
    return rows


def _check_args(p: Poly, q: Poly, v: str):
    if p.table != q.table:
        from .poly import RegistryMismatch

        raise RegistryMismatch("polynomials over different registries")
    if p.degree(v) < 1 or q.degree(v) < 1:
        raise VariableAbsent(f"{v} must occur in both polynomials")


def determinant(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Fraction-free determinant of a square matrix of polynomials."""
    if not matrix:
        raise ValueError("empty matrix")
    table = matrix[0][0].table
    m = [[dict(e.terms_dict) for e in row] for row in matrix]
    return Poly(kernels.bareiss(m, table.guard), table)


def resultant(p: Poly, q: Poly, v: str) -> Poly:
    """Sylvester resultant in ``v`` by Bareiss elimination."""
    _check_args(p, q, v)
    return determinant(sylvester_matrix(p, q, v))


def _prem(a: dict[int, Poly], b: dict[int, Poly]) -> dict[int, Poly]:
    """Pseudo-remainder of univariate polynomials given as {degree: coeff}."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    e = da - db + 1
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        shift = dr - db
        new = {}
        for k, c in r.items():
            new[k] = c * lb
        for k, c in b.items():
            kk = k + shift
            new[kk] = new[kk] - lr * c if kk in new else -(lr * c)
        r = {k: c for k, c in new.items() if not c.is_zero()}
        e -= 1
    if e > 0 and r:
        f = lb ** e
        r = {k: c * f for k, c in r.items()}
    return r


def resultant_prs(p: Poly, q: Poly, v: str) -> Poly:
    """Resultant in ``v`` via the subresultant remainder sequence."""
    _check_args(p, q, v)
    table = p.table
    a = p.as_univariate(v)
    b = q.as_univariate(v)
    one = Poly.const(1, table)
    s = 1
    if max(a) < max(b):
        a, b = b, a
        if max(a) % 2 and max(b) % 2:
            s = -s
    g = one
    h = one
    while True:
        da, db = max(a), max(b)
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return Poly.zero(table)
        a = b
        div = g * h ** delta
        b = {k: c.exact_div(div) for k, c in r.items()}
        g = a[max(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exact_div(h ** (delta - 1))
        if max(b) == 0:
            break
    da = max(a)
    lb = b[0]
    if da == 1:
        h = lb
    else:
        h = (lb ** da).exact_div(h ** (da - 1))
    return h * s


def remove_factor(p: Poly, f: Poly) -> tuple[Poly, int]:
    if f.is_constant():
        raise ValueError("factor must be nonconstant")
    out, removed = strip_factors(p, [f])
    return out, (removed[0][1] if removed else 0)


def _finish(raw: Poly, method: Method, nonvanishing, notes=()) -> ElimResult:
    if raw.is_zero():
        return ElimResult(raw, method, (), INHOMOGENEOUS, 0, raw, tuple(notes))
    stripped, removed = strip_factors(raw, nonvanishing)
    content, prim = stripped.content_primitive()
    return ElimResult(prim, method, tuple(removed), prim.weight(), content, raw, tuple(notes))


def compress_power(p: Poly, v: str, k: int) -> Poly:
    """Rewrite p(v) = r(v^k) as r(v); every power of v must be a multiple of k."""
    parts = p.as_univariate(v)
    if any(e % k for e in parts):
        raise ValueError(f"{v} does not occur only through {v}^{k}")
    return Poly.from_univariate({e // k: c for e, c in parts.items()}, v, p.table)


def eliminate(
    p: Poly,
    q: Poly,
    v: str,
    nonvanishing: Sequence[Poly] = (),
    method: Method | None = None,
    solve_from: int | None = None,
    power: int = 1,
) -> ElimResult:
    """Remove ``v`` from the pair.

    A linear occurrence is solved and substituted (from ``p`` first unless
    ``solve_from`` selects 0 or 1); otherwise a resultant is taken. Declared
    nonvanishing factors are divided out of the result and reported. With
    ``power=k`` both equations must involve ``v`` only through ``v^k``, which
    is then treated as the unknown.
    """
    if power > 1:
        res = eliminate(compress_power(p, v, power), compress_power(q, v, power), v, nonvanishing, method, solve_from)
        return ElimResult(res.eliminated, res.method, res.removed_factors, res.weight, res.content, res.raw,
                          res.notes + (f"eliminated {v}^{power} as the unknown",))
    dp, dq = p.degree(v), q.degree(v)
    if dp < 1 and dq < 1:
        raise VariableAbsent(f"{v} occurs in neither polynomial")
    if dp < 1:
        return _finish(p, Method.LINEAR_SOLVE, nonvanishing, ["first equation already free of the variable"])
    if dq < 1:
        return _finish(q, Method.LINEAR_SOLVE, nonvanishing, ["second equation already free of the variable"])
    linear = method in (None, Method.LINEAR_SOLVE)
    order = [(p, q), (q, p)]
    if solve_from == 1:
        order.reverse()
    if linear:
        for src, dst in order:
            if src.degree(v) == 1:
                notes = []
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    val = solve_linear(src, v, nonvanishing)
                notes.extend(str(w.message) for w in caught)
                raw = dst.substitute(v, val).num
                return _finish(raw, Method.LINEAR_SOLVE, nonvanishing, notes)
        if method is Method.LINEAR_SOLVE:
            raise NotLinear(f"neither equation is linear in {v}")
    if method is Method.SUBRESULTANT_PRS:
        return _finish(resultant_prs(p, q, v), Method.SUBRESULTANT_PRS, nonvanishing)
    return _finish(resultant(p, q, v), Method.SYLVESTER_BAREISS, nonvanishing)
