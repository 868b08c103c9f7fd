"""Moving-frame calculus for an orthonormal frame e1..e4 with diagonal shape operator.

Principal curvatures are ``lam`` (for e1) and ``mu2, mu3, mu4``. The
connection is ``nabla_{e_i} e_j = sum_k omega[i][j][k] e_k``; scalar
functions are differentiated by e1 through a derivation table, while
e2, e3, e4 annihilate every scalar of the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .diffalg import DerivationTable, MissingRule, Regime, derive
from .exprio import parse
from .poly import FracPoly, Poly

INDICES = (1, 2, 3, 4)
_CYCLIC = ((2, 3, 4), (3, 4, 2), (4, 2, 3))


class NotLinear(ValueError):
    pass


class Inconsistent(ValueError):
    pass


@dataclass(frozen=True)
class VectorExpr:
    components: tuple[Poly, Poly, Poly, Poly]

    @classmethod
    def zero(cls) -> VectorExpr:
        z = Poly.zero()
        return cls((z, z, z, z))

    @classmethod
    def basis(cls, i: int, coeff: Poly | int = 1) -> VectorExpr:
        comps = [Poly.zero()] * 4
        comps[i - 1] = Poly.const(coeff) if isinstance(coeff, int) else coeff
        return cls(tuple(comps))

    def __getitem__(self, i: int) -> Poly:
        return self.components[i - 1]

    def __add__(self, other: VectorExpr) -> VectorExpr:
        return VectorExpr(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: VectorExpr) -> VectorExpr:
        return VectorExpr(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> VectorExpr:
        return VectorExpr(tuple(-a for a in self.components))

    def scale(self, f: Poly) -> VectorExpr:
        return VectorExpr(tuple(a * f for a in self.components))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)

    def map(self, fn) -> VectorExpr:
        return VectorExpr(tuple(fn(a) for a in self.components))


@dataclass(frozen=True)
class FrameModel:
    connection: Mapping[tuple[int, int], VectorExpr]
    curvatures: tuple[Poly, Poly, Poly, Poly]
    e1: DerivationTable
    killed: frozenset[str]

    def nabla_basis(self, i: int, j: int) -> VectorExpr:
        return self.connection[(i, j)]

    def omega(self, i: int, j: int, k: int) -> Poly:
        return self.connection[(i, j)][k]


def default_model() -> FrameModel:
    mu = {i: Poly.var(f"mu{i}") for i in (2, 3, 4)}
    w = {i: Poly.var(f"w{i}") for i in (2, 3, 4)}
    a = Poly.var("a")
    lam = Poly.var("lam")

    cross = {}
    for i, j, k in _CYCLIC:
        val = a * (mu[i] - mu[j]) * (mu[i] - mu[k])
        cross[(i, j, k)] = val
        cross[(i, k, j)] = -val

    conn: dict[tuple[int, int], VectorExpr] = {}
    for j in INDICES:
        conn[(1, j)] = VectorExpr.zero()
    for i in (2, 3, 4):
        conn[(i, 1)] = VectorExpr.basis(i, -w[i])
        conn[(i, i)] = VectorExpr.basis(1, w[i])
        for j in (2, 3, 4):
            if j != i:
                k = 9 - i - j
                conn[(i, j)] = VectorExpr.basis(k, cross[(i, j, k)])

    rules = {
        "c": FracPoly(Poly.zero()),
        "lam": FracPoly(Poly.var("lam1")),
        "a": FracPoly(Poly.var("Da")),
    }
    for i in (2, 3, 4):
        rules[f"mu{i}"] = FracPoly((mu[i] - lam) * w[i])
        rules[f"w{i}"] = FracPoly(w[i] * w[i] + lam * mu[i] + Poly.var("c"))
    table = DerivationTable(Regime.FRAME, rules, note="e1 on frame scalars")
    killed = frozenset(["c", "lam", "a", "mu2", "mu3", "mu4", "w2", "w3", "w4"])
    return FrameModel(conn, (lam, mu[2], mu[3], mu[4]), table, killed)


def scalar_derivative(i: int, p: Poly, model: FrameModel) -> Poly:
    """e_i applied to a scalar polynomial."""
    if i == 1:
        d = derive(p, model.e1)
        if not d.is_polynomial():
            raise ValueError("frame derivation produced a denominator")
        return d.num
    for v in p.variables():
        if v not in model.killed:
            raise MissingRule(v)
    return Poly.zero()


def covariant_derivative(i: int, v: VectorExpr, model: FrameModel) -> VectorExpr:
    out = VectorExpr.zero()
    for m in INDICES:
        comp = v[m]
        if comp.is_zero():
            continue
        d = scalar_derivative(i, comp, model)
        if not d.is_zero():
            out = out + VectorExpr.basis(m, d)
        out = out + model.nabla_basis(i, m).scale(comp)
    return out


def covariant_derivative_along(x: VectorExpr, v: VectorExpr, model: FrameModel) -> VectorExpr:
    out = VectorExpr.zero()
    for i in INDICES:
        if not x[i].is_zero():
            out = out + covariant_derivative(i, v, model).scale(x[i])
    return out


def bracket(i: int, j: int, model: FrameModel) -> VectorExpr:
    return model.nabla_basis(i, j) - model.nabla_basis(j, i)


def curvature_component(i: int, j: int, k: int, model: FrameModel) -> VectorExpr:
    """R(e_i, e_j) e_k from the connection."""
    ek = VectorExpr.basis(k)
    first = covariant_derivative(i, covariant_derivative(j, ek, model), model)
    second = covariant_derivative(j, covariant_derivative(i, ek, model), model)
    third = covariant_derivative_along(bracket(i, j, model), ek, model)
    return first - second - third


def gauss_rhs(i: int, j: int, k: int, model: FrameModel) -> VectorExpr:
    c = Poly.var("c")
    lam = model.curvatures
    out = VectorExpr.zero()
    if j == k:
        out = out + VectorExpr.basis(i, c + lam[j - 1] * lam[i - 1])
    if i == k:
        out = out - VectorExpr.basis(j, c + lam[i - 1] * lam[j - 1])
    return out


def gauss_residual(i: int, j: int, k: int, model: FrameModel) -> VectorExpr:
    return curvature_component(i, j, k, model) - gauss_rhs(i, j, k, model)


def shape_operator(v: VectorExpr, model: FrameModel) -> VectorExpr:
    return VectorExpr(tuple(v[m] * model.curvatures[m - 1] for m in INDICES))


def codazzi_residual(i: int, j: int, model: FrameModel) -> VectorExpr:
    def nabla_a(x, y):
        ay = shape_operator(VectorExpr.basis(y), model)
        return covariant_derivative(x, ay, model) - shape_operator(model.nabla_basis(x, y), model)

    return nabla_a(i, j) - nabla_a(j, i)


def solve_unknown(residual: VectorExpr, unknown: str) -> FracPoly:
    """Solve the components that involve ``unknown`` (each linearly)."""
    value = None
    for comp in residual.components:
        if unknown not in comp.variables():
            continue
        if comp.degree(unknown) != 1:
            raise NotLinear(f"component has degree {comp.degree(unknown)} in {unknown}")
        v = FracPoly(-comp.coeff_in(unknown, 0), comp.coeff_in(unknown, 1))
        if value is None:
            value = v
        elif value != v:
            raise Inconsistent(f"components give different values for {unknown}")
    if value is None:
        raise NotLinear(f"{unknown} does not occur in the residual")
    return value


LAMBDA1 = FracPoly(parse("-(mu2 + mu3 + mu4)"), parse("3"))


def eliminate_lambda1(p: Poly) -> Poly:
    """Numerator of p after lam = -(mu2 + mu3 + mu4)/3."""
    return p.substitute("lam", LAMBDA1).num


@lru_cache(maxsize=None)
def _elementary_power(i: int, j: int, k: int) -> Mapping[tuple[int, int, int], int]:
    """e1^i e2^j e3^k in three variables as {exponent triple: coefficient}."""
    e1 = {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}
    e2 = {(1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1}
    e3 = {(1, 1, 1): 1}

    def mul(a, b):
        r = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                t = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
                r[t] = r.get(t, 0) + va * vb
        return {t: v for t, v in r.items() if v}

    if (i, j, k) == (0, 0, 0):
        return {(0, 0, 0): 1}
    if i:
        return mul(_elementary_power(i - 1, j, k), e1)
    if j:
        return mul(_elementary_power(i, j - 1, k), e2)
    return mul(_elementary_power(i, j, k - 1), e3)


class NotSymmetric(ValueError):
    pass


def symmetric_reduce(p: Poly, variables: Sequence[str] = ("mu2", "mu3", "mu4"),
                     targets: Sequence[str] = ("y1", "y2", "y3")) -> Poly:
    """Rewrite a polynomial symmetric in three variables through their elementary symmetric functions."""
    table = p.table
    idx = [table.index(v) for v in variables]
    shifts = [table.shifts[i] for i in idx]
    top = table.top
    groups: dict[tuple[int, int, int], dict[int, int]] = {}
    for key, coeff in p.terms_dict.items():
        exps = tuple((key >> s) & 0xFFFF for s in shifts)
        strip = sum(e << s for e, s in zip(exps, shifts)) + (sum(exps) << top)
        g = groups.setdefault(exps, {})
        g[key - strip] = coeff
    result = Poly.zero(table)
    ys = [Poly.var(t, table) for t in targets]
    while groups:
        lead = max(groups)
        a, b, c = lead
        if not (a >= b >= c):
            raise NotSymmetric("polynomial is not symmetric in the given variables")
        # the leading term of the elementary product is the lead monomial itself, with coefficient 1
        coeff = Poly(groups.pop(lead), table)
        mono = ys[0] ** (a - b) * ys[1] ** (b - c) * ys[2] ** c
        result = result + coeff * mono
        for t, m in _elementary_power(a - b, b - c, c).items():
            if t == lead:
                continue
            g = groups.setdefault(t, {})
            for k, v in coeff.terms_dict.items():
                nv = g.get(k, 0) - v * m
                if nv:
                    g[k] = nv
                else:
                    g.pop(k, None)
            if not g:
                del groups[t]
    return result


def elementary_symmetric(variables: Sequence[str] = ("mu2", "mu3", "mu4")) -> tuple[Poly, Poly, Poly]:
    x, y, z = (Poly.var(v) for v in variables)
    return x + y + z, x * y + x * z + y * z, x * y * z
