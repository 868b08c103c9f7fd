"""The derivation e1 acting on polynomials through per-variable rules.

A derivation table maps each variable to the value of e1 on it. ``derive``
applies the chain rule and returns a FracPoly over a common denominator.
``derive_on_locus`` is used on equations ``p = 0``: the result is again an
equation, so nonvanishing denominators may be cleared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .exprio import parse
from .poly import INHOMOGENEOUS, FracPoly, NotDivisible, Poly

__all__ = [
    "CASE_A",
    "CASE_A_REDUCED",
    "CASE_B",
    "DerivationTable",
    "FracPoly",
    "MissingRule",
    "Regime",
    "SECTION3",
    "Y1_RULE_ON_LOCUS",
    "Y2_CASE_A",
    "Y3_CASE_A",
    "derive",
    "derive_on_locus",
    "strip_factors",
    "weight_shift",
]


class MissingRule(KeyError):
    def __init__(self, var):
        super().__init__(var)
        self.var = var

    def __str__(self):
        return f"no derivation rule for {self.var!r}"


class Regime(str, Enum):
    SECTION3 = "Section3"
    CASE_A = "CaseA"
    CASE_B = "CaseB"
    FRAME = "Frame"


@dataclass(frozen=True)
class DerivationTable:
    """Rules for e1 in one regime.

    ``denominators`` generate the multiplicative set that rule denominators
    may use; they are cleared by ``derive_on_locus``. ``nonvanishing`` is the
    larger set of factors known to be nonzero on the locus and may be
    removed when comparing equations. ``locus`` lists substitutions applied
    after differentiating (variables that are functions of the others on
    the locus).
    """

    regime: Regime
    rules: Mapping[str, FracPoly]
    denominators: tuple[Poly, ...] = ()
    nonvanishing: tuple[Poly, ...] = ()
    locus: tuple[tuple[str, FracPoly], ...] = ()
    note: str = ""
    _plain: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        rules = {}
        for v, r in self.rules.items():
            rules[v] = FracPoly.coerce(r)
        object.__setattr__(self, "rules", rules)

    def rule(self, v: str) -> FracPoly:
        try:
            return self.rules[v]
        except KeyError:
            raise MissingRule(v) from None

    def with_rules(self, **extra) -> DerivationTable:
        rules = dict(self.rules)
        rules.update(extra)
        return DerivationTable(self.regime, rules, self.denominators, self.nonvanishing, self.locus, self.note)


def _derive_poly(p: Poly, table: DerivationTable) -> FracPoly:
    groups: dict[Poly, Poly] = {}
    for v in p.variables():
        r = table.rule(v)
        if r.num.is_zero():
            continue
        term = p.partial(v) * r.num
        if r.den in groups:
            groups[r.den] = groups[r.den] + term
        else:
            groups[r.den] = term
    total = FracPoly(Poly.zero(p.table))
    # deterministic combination order
    for den in sorted(groups, key=lambda d: (len(d), sorted(d.terms_dict.items()))):
        total = total + FracPoly(groups[den], den)
    return total


def derive(p, table: DerivationTable) -> FracPoly:
    """e1(p) by the chain rule; ``p`` may be a Poly or a FracPoly."""
    if isinstance(p, FracPoly):
        if p.den.is_constant():
            d = _derive_poly(p.num, table)
            return FracPoly(d.num, d.den * p.den)
        dn = _derive_poly(p.num, table)
        dd = _derive_poly(p.den, table)
        return (dn * p.den - dd * p.num) / FracPoly(p.den * p.den)
    return _derive_poly(p, table)


def strip_factors(p: Poly, factors) -> tuple[Poly, list[tuple[Poly, int]]]:
    """Divide out every power of each factor; constant factors are ignored."""
    removed = []
    for f in factors:
        if f.is_constant() or p.is_zero():
            continue
        k = 0
        while True:
            try:
                q = p.exact_div(f)
            except NotDivisible:
                break
            p = q
            k += 1
        if k:
            removed.append((f, k))
    return p, removed


def apply_locus(f: FracPoly, table: DerivationTable) -> FracPoly:
    for v, val in table.locus:
        if v in f.num.variables() or v in f.den.variables():
            f = f.substitute(v, val)
    return f


def derive_on_locus(p: Poly, table: DerivationTable) -> Poly:
    """Primitive numerator of e1(p), with declared denominators cleared."""
    f = apply_locus(derive(p, table), table)
    num = f.num
    if num.is_zero():
        return num
    num, _ = strip_factors(num, table.denominators)
    return num.primitive()


def weight_shift(table: DerivationTable) -> int:
    shifts = set()
    for v, r in table.rules.items():
        if r.num.is_zero():
            continue
        wn, wd = r.num.weight(), r.den.weight()
        if wn is INHOMOGENEOUS or wd is INHOMOGENEOUS:
            raise ValueError(f"rule for {v!r} is not weighted-homogeneous")
        shifts.add(wn - wd - r.num.table.weight_of(v))
    if len(shifts) != 1:
        raise ValueError(f"rules do not shift weight uniformly: {sorted(shifts)}")
    return shifts.pop()


def _f(num: str, den: str = "1") -> FracPoly:
    return FracPoly(parse(num), parse(den))


def _section3() -> DerivationTable:
    rules = {"c": _f("0")}
    chain = ["lam"] + [f"lam{k}" for k in range(1, 6)]
    for a, b in zip(chain, chain[1:]):
        rules[a] = _f(b)
    chain = ["T"] + [f"T{k}" for k in range(1, 5)]
    for a, b in zip(chain, chain[1:]):
        rules[a] = _f(b)
    return DerivationTable(
        Regime.SECTION3,
        rules,
        denominators=(parse("lam"),),
        nonvanishing=(parse("lam"), parse("lam1")),
        note="lambda and its first derivative are nonzero where the mean curvature is nonconstant",
    )


SECTION3 = _section3()

ONE_PLUS_K2 = parse("1 + kap^2")

# y2 and y3 as functions of (c, kap, tau, y1) on the Case A locus.
Y2_CASE_A = _f("-(3*c + 2*kap*tau*y1 + 3*tau^2)", "1 + kap^2")
Y3_CASE_A = _f(
    "-c*(1 + kap^2)*y1 + 6*c*kap*tau + (3*kap^2 - 1)*tau^2*y1 + 6*kap*tau^3",
    "3*(1 + kap^2)^2",
)

_KAP_RULE = _f("-(1 + kap^2)*y1 + 3*kap*tau", "3")
_TAU_RULE = _f("3*c - kap*tau*y1 + 3*tau^2", "3")
_Y1_RULE = _f("4*kap*y1^2 - 6*kap*y2 + 6*tau*y1", "3")

Y1_RULE_ON_LOCUS = _Y1_RULE.substitute("y2", Y2_CASE_A)

CASE_A = DerivationTable(
    Regime.CASE_A,
    {
        "c": _f("0"),
        "kap": _KAP_RULE,
        "tau": _TAU_RULE,
        "y1": _Y1_RULE,
        "y2": _f("5*kap*y1*y2 - 9*kap*y3 + 2*tau*y1^2 + 6*tau*y2", "3"),
        "y3": _f("6*kap*y1*y3 + tau*y1*y2 + 9*tau*y3", "3"),
    },
    denominators=(ONE_PLUS_K2,),
    nonvanishing=(ONE_PLUS_K2, parse("kap"), parse("y1"), parse("c")),
    locus=(("y2", Y2_CASE_A), ("y3", Y3_CASE_A)),
    note="rules for y2, y3 come from the frame; y2, y3 are replaced by their locus values after differentiating",
)

CASE_A_REDUCED = DerivationTable(
    Regime.CASE_A,
    {"c": _f("0"), "kap": _KAP_RULE, "tau": _TAU_RULE, "y1": Y1_RULE_ON_LOCUS},
    denominators=(ONE_PLUS_K2,),
    nonvanishing=CASE_A.nonvanishing,
    note="working variables c, kap, tau, y1 only",
)

N_Y1 = parse("6*c^2*y1 + 5*c*y1*y2 - 9*c*y3 + 4*y1^2*y3 - 6*y2*y3")
N_Y2 = parse("2*c^2*y1^2 + 6*c^2*y2 + c*y1^2*y2 + 6*c*y2^2 - 3*c*y1*y3 + 5*y1*y2*y3 - 9*y3^2")
N_Y3 = parse("c^2*y1*y2 + 9*c^2*y3 + 2*c*y1^2*y3 + 6*c*y2*y3 + 6*y1*y3^2")

# product (mu2*mu3 + c)(mu2*mu4 + c)(mu3*mu4 + c) in symmetric form
D_CASE_B = parse("c^3 + c^2*y2 + c*y1*y3 + y3^2")

CASE_B = DerivationTable(
    Regime.CASE_B,
    {"c": _f("0"), "y1": FracPoly(N_Y1), "y2": FracPoly(N_Y2), "y3": FracPoly(N_Y3)},
    denominators=(),
    nonvanishing=(parse("c"), parse("y1"), D_CASE_B),
    note="common prefactor -1/(3*w2*(mu3*mu4 + c)) dropped; it is nonzero on the locus",
)
