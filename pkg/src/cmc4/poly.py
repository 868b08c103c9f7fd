"""Exact sparse multivariate polynomials over the integers.

Monomials are packed into a single Python int: the total degree sits in the
most significant field, followed by one 16-bit field per registered variable
in registry order. Comparing two keys as integers is therefore graded-lex
comparison, and multiplying two monomials is adding their keys.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Integral
from typing import Iterable, Iterator, Mapping, Sequence

from . import kernels

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
_FIELD_MASK = (1 << FIELD_BITS) - 1


class PolyError(Exception):
    pass


class RegistryMismatch(PolyError):
    pass


class UnknownVariable(PolyError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown variable {self.name!r}"


class NotDivisible(PolyError, ArithmeticError):
    pass


class ZeroPolynomial(PolyError, ValueError):
    pass


class _Inhomogeneous:
    __slots__ = ()

    def __repr__(self):
        return "Inhomogeneous"

    def __reduce__(self):
        return "INHOMOGENEOUS"


INHOMOGENEOUS = _Inhomogeneous()


class VarTable:
    """Ordered variable registry with integer weights.

    The order is fixed at construction; variable 0 is the most significant
    in the lexicographic tie-break.
    """

    __slots__ = ("entries", "names", "weights", "_index", "shifts", "top", "guard", "_hash")

    def __init__(self, entries: Sequence[tuple[str, int]]):
        entries = tuple((str(n), int(w)) for n, w in entries)
        names = tuple(n for n, _ in entries)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names in registry")
        for n in names:
            if not n.isidentifier():
                raise ValueError(f"invalid variable name {n!r}")
        self.entries = entries
        self.names = names
        self.weights = tuple(w for _, w in entries)
        self._index = {n: i for i, n in enumerate(names)}
        nv = len(names)
        self.shifts = tuple(FIELD_BITS * (nv - 1 - i) for i in range(nv))
        self.top = FIELD_BITS * nv
        self.guard = sum(1 << (s + FIELD_BITS - 1) for s in self.shifts)
        self._hash = hash(entries)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return self is other or (isinstance(other, VarTable) and self.entries == other.entries)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VarTable({list(self.entries)!r})"

    def __reduce__(self):
        return (VarTable, (self.entries,))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def weight_of(self, name: str) -> int:
        return self.weights[self.index(name)]

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise ValueError("exponent vector length does not match registry")
        key = 0
        deg = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > MAX_EXPONENT:
                raise OverflowError(f"exponent {e} out of range")
            key |= e << s
            deg += e
        if deg > MAX_EXPONENT:
            raise OverflowError(f"total degree {deg} out of range")
        return key | (deg << self.top)

    def decode(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & _FIELD_MASK for s in self.shifts)

    def exponent(self, key: int, i: int) -> int:
        return (key >> self.shifts[i]) & _FIELD_MASK

    def var_key(self, i: int, e: int = 1) -> int:
        return (e << self.top) | (e << self.shifts[i])

    def total_degree(self, key: int) -> int:
        return key >> self.top

    def key_weight(self, key: int) -> int:
        w = 0
        for wt, s in zip(self.weights, self.shifts):
            e = (key >> s) & _FIELD_MASK
            if e:
                w += wt * e
        return w


REGISTRY = VarTable(
    [("c", 2)]
    + [("lam", 1)] + [(f"lam{k}", k + 1) for k in range(1, 6)]
    + [("T", 1)] + [(f"T{k}", k + 1) for k in range(1, 5)]
    + [("kap", 0), ("tau", 1), ("y1", 1), ("y2", 2), ("y3", 3), ("a", -1)]
    + [("w2", 1), ("w3", 1), ("w4", 1)]
    + [("mu2", 1), ("mu3", 1), ("mu4", 1)]
    + [("Da", 0), ("u", 0)]
)


def _check_degree(d):
    if d > MAX_EXPONENT:
        raise OverflowError(f"total degree {d} exceeds the packed-monomial limit")


class Poly:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None, table: VarTable = REGISTRY):
        # Callers hand over ownership of ``terms``; zero coefficients are not allowed.
        self.table = table
        self._terms = {} if terms is None else terms
        self._hash = None

    # construction

    @classmethod
    def zero(cls, table: VarTable = REGISTRY) -> Poly:
        return cls({}, table)

    @classmethod
    def const(cls, n: int, table: VarTable = REGISTRY) -> Poly:
        n = int(n)
        return cls({0: n} if n else {}, table)

    @classmethod
    def var(cls, name: str, table: VarTable = REGISTRY) -> Poly:
        return cls({table.var_key(table.index(name)): 1}, table)

    @classmethod
    def from_exponents(cls, items: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]],
                       table: VarTable = REGISTRY) -> Poly:
        if isinstance(items, Mapping):
            items = items.items()
        terms: dict[int, int] = {}
        for exps, coeff in items:
            k = table.encode(tuple(exps))
            terms[k] = terms.get(k, 0) + int(coeff)
        return cls({k: v for k, v in terms.items() if v}, table)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff: int = 1, table: VarTable = REGISTRY) -> Poly:
        exps = [0] * len(table)
        for name, e in powers.items():
            exps[table.index(name)] += e
        return cls.from_exponents([(exps, coeff)], table)

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.table != self.table:
                raise RegistryMismatch("polynomials over different registries")
            return other
        if isinstance(other, Integral):
            return Poly.const(int(other), self.table)
        return None

    def _new(self, terms) -> Poly:
        return Poly(terms, self.table)

    # inspection

    @property
    def terms_dict(self) -> Mapping[int, int]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def terms(self, descending: bool = True) -> Iterator[tuple[tuple[int, ...], int]]:
        dec = self.table.decode
        for k in sorted(self._terms, reverse=descending):
            yield dec(k), self._terms[k]

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        k = max(self._terms)
        return self.table.decode(k), self._terms[k]

    def leading_coefficient(self) -> int:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self._terms[max(self._terms)]

    def variables(self) -> tuple[str, ...]:
        mask = 0
        for k in self._terms:
            mask |= k
        return tuple(n for n, s in zip(self.table.names, self.table.shifts) if (mask >> s) & _FIELD_MASK)

    def degree(self, v: str | None = None) -> int:
        """Total degree, or the degree in ``v``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if v is None:
            return max(self._terms) >> self.table.top
        s = self.table.shifts[self.table.index(v)]
        return max((k >> s) & _FIELD_MASK for k in self._terms)

    def min_degree(self, v: str) -> int:
        if not self._terms:
            return -1
        s = self.table.shifts[self.table.index(v)]
        return min((k >> s) & _FIELD_MASK for k in self._terms)

    def max_coefficient_bits(self) -> int:
        return max((abs(v).bit_length() for v in self._terms.values()), default=0)

    # arithmetic

    def __neg__(self):
        return self._new({k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        return self._new(kernels.add(self._terms, o._terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        return self._new(kernels.sub(self._terms, o._terms))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, Integral) and not isinstance(other, bool):
            return self._new(kernels.scale(self._terms, int(other)))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return self._new({})
        if len(o._terms) == 1 and 0 in o._terms:
            return self._new(kernels.scale(self._terms, o._terms[0]))
        _check_degree(self.degree() + o.degree())
        return self._new(kernels.mul(self._terms, o._terms))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, Integral) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        n = int(n)
        if n == 0:
            return Poly.const(1, self.table)
        if self._terms:
            _check_degree(self.degree() * n)
        if len(self._terms) == 1:
            (k, v), = self._terms.items()
            return self._new({k * n: v ** n})
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, Integral):
            return self.is_constant() and self._terms.get(0, 0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .exprio import render

        text = render(self)
        if len(text) > 200:
            text = text[:200] + "..."
        return f"Poly({text!r})"

    def __str__(self):
        from .exprio import render

        return render(self)

    def __reduce__(self):
        return (Poly, (self._terms, self.table))

    def mulsub(self, b: Poly, c: Poly, d: Poly) -> Poly:
        """self*b - c*d in one accumulation pass."""
        return self._new(kernels.mulsub(self._terms, b._terms, c._terms, d._terms))

    def exact_div(self, q: Poly | int) -> Poly:
        q = self._coerce(q)
        if not q._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(q._terms) == 1 and 0 in q._terms:
            n = q._terms[0]
            out = {}
            for k, v in self._terms.items():
                qq, r = divmod(v, n)
                if r:
                    raise NotDivisible("integer content does not divide")
                out[k] = qq
            return self._new(out)
        res = kernels.divexact(self._terms, q._terms, self.table.guard)
        if res is None:
            raise NotDivisible("no exact polynomial quotient")
        return self._new(res)

    def divides(self, p: Poly) -> bool:
        try:
            p.exact_div(self)
        except NotDivisible:
            return False
        return True

    # structure

    def coeff_in(self, v: str, k: int) -> Poly:
        i = self.table.index(v)
        s = self.table.shifts[i]
        top = self.table.top
        sub = (k << top) | (k << s)
        out = {}
        for key, c in self._terms.items():
            if (key >> s) & _FIELD_MASK == k:
                out[key - sub] = c
        return self._new(out)

    def as_univariate(self, v: str) -> dict[int, Poly]:
        """Split into {power of v: v-free coefficient}."""
        i = self.table.index(v)
        s = self.table.shifts[i]
        top = self.table.top
        parts: dict[int, dict[int, int]] = {}
        for key, c in self._terms.items():
            e = (key >> s) & _FIELD_MASK
            parts.setdefault(e, {})[key - ((e << top) | (e << s))] = c
        return {e: self._new(t) for e, t in parts.items()}

    @classmethod
    def from_univariate(cls, coeffs: Mapping[int, Poly], v: str, table: VarTable = REGISTRY) -> Poly:
        i = table.index(v)
        out: dict[int, int] = {}
        for e, p in coeffs.items():
            if p.table != table:
                raise RegistryMismatch("coefficient over a different registry")
            shift = table.var_key(i, e)
            for k, c in p._terms.items():
                kk = k + shift
                s = out.get(kk, 0) + c
                if s:
                    out[kk] = s
                else:
                    out.pop(kk, None)
        return cls(out, table)

    def partial(self, v: str) -> Poly:
        i = self.table.index(v)
        s = self.table.shifts[i]
        one = self.table.var_key(i, 1)
        out = {}
        for key, c in self._terms.items():
            e = (key >> s) & _FIELD_MASK
            if e:
                out[key - one] = c * e
        return self._new(out)

    def content(self) -> int:
        g = 0
        for v in self._terms.values():
            g = gcd(g, v)
            if g == 1:
                break
        return g

    def content_primitive(self) -> tuple[int, Poly]:
        if not self._terms:
            raise ZeroPolynomial("content of the zero polynomial")
        g = self.content()
        if self._terms[max(self._terms)] < 0:
            g = -g
        if g == 1:
            return 1, self
        return g, self._new({k: v // g for k, v in self._terms.items()})

    def primitive(self) -> Poly:
        return self.content_primitive()[1]

    def weight(self):
        if not self._terms:
            raise ZeroPolynomial("weight of the zero polynomial")
        kw = self.table.key_weight
        it = iter(self._terms)
        w = kw(next(it))
        for k in it:
            if kw(k) != w:
                return INHOMOGENEOUS
        return w

    def weights(self) -> set[int]:
        kw = self.table.key_weight
        return {kw(k) for k in self._terms}

    def monomial_content(self) -> Poly:
        """The largest monomial dividing every term (1 for the zero polynomial)."""
        if not self._terms:
            return Poly.const(1, self.table)
        exps = None
        for k in self._terms:
            d = self.table.decode(k)
            exps = d if exps is None else tuple(map(min, exps, d))
        return Poly.from_exponents([(exps, 1)], self.table)

    def evaluate(self, point: Mapping[str, int | Fraction]) -> Fraction:
        """Value at a point assigning every variable that occurs."""
        missing = [n for n in self.variables() if n not in point]
        if missing:
            raise KeyError(f"no value for {missing[0]!r}")
        idx = [(self.table.shifts[i], Fraction(point[n])) for i, n in enumerate(self.table.names) if n in point]
        total = Fraction(0)
        for key, c in self._terms.items():
            t = Fraction(c)
            for s, x in idx:
                e = (key >> s) & _FIELD_MASK
                if e:
                    t *= x ** e
            total += t
        return total

    def specialize(self, point: Mapping[str, int]) -> Poly:
        """Substitute integer values for some variables."""
        result = self
        for n, x in point.items():
            result = result.substitute(n, int(x)).num
        return result

    def substitute(self, v: str, value) -> FracPoly:
        """Replace ``v`` by ``value`` (int, Poly or FracPoly).

        The result has denominator ``value.den ** deg_v(self)``; the numerator
        is built by Horner's rule on the homogenized form.
        """
        value = FracPoly.coerce(value, self.table)
        parts = self.as_univariate(v)
        if not parts:
            return FracPoly(self, Poly.const(1, self.table))
        deg = max(parts)
        n, d = value.num, value.den
        if d.is_constant() and d.constant_value() == 1:
            acc = parts.get(deg, Poly.zero(self.table))
            for e in range(deg - 1, -1, -1):
                acc = acc * n
                if e in parts:
                    acc = acc + parts[e]
            return FracPoly(acc, Poly.const(1, self.table))
        dpow = [Poly.const(1, self.table)]
        for _ in range(deg):
            dpow.append(dpow[-1] * d)
        acc = parts[deg]
        for e in range(deg - 1, -1, -1):
            acc = acc * n
            if e in parts:
                acc = acc + parts[e] * dpow[deg - e]
        return FracPoly(acc, dpow[deg])

    def rename(self, mapping: Mapping[str, str], table: VarTable | None = None) -> Poly:
        """Rename variables, optionally moving to another registry."""
        table = table or self.table
        src = self.table
        perm = []
        for i, n in enumerate(src.names):
            perm.append(table.index(mapping.get(n, n)))
        out: dict[int, int] = {}
        for key, c in self._terms.items():
            nk = 0
            deg = 0
            for i, s in enumerate(src.shifts):
                e = (key >> s) & _FIELD_MASK
                if e:
                    nk += e << table.shifts[perm[i]]
                    deg += e
            nk |= deg << table.top
            out[nk] = out.get(nk, 0) + c
        return Poly({k: v for k, v in out.items() if v}, table)


class FracPoly:
    """A quotient num/den of polynomials with den nonzero.

    Integer content and monomial factors common to both parts are cancelled
    on construction; other common factors are only removed on request.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, normalize: bool = True):
        if den is None:
            den = Poly.const(1, num.table)
        if den.is_zero():
            raise ZeroDivisionError("FracPoly with zero denominator")
        if num.table != den.table:
            raise RegistryMismatch("numerator and denominator over different registries")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def coerce(x, table: VarTable = REGISTRY) -> FracPoly:
        if isinstance(x, FracPoly):
            return x
        if isinstance(x, Poly):
            return FracPoly(x)
        if isinstance(x, Fraction):
            return FracPoly(Poly.const(x.numerator, table), Poly.const(x.denominator, table))
        if isinstance(x, Integral):
            return FracPoly(Poly.const(int(x), table))
        raise TypeError(f"cannot convert {type(x).__name__} to FracPoly")

    @property
    def table(self):
        return self.num.table

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant() and self.den.constant_value() == 1

    def __repr__(self):
        return f"FracPoly({self.num!r}, {self.den!r})"

    def __eq__(self, other):
        if isinstance(other, (Poly, int)):
            other = FracPoly.coerce(other, self.table)
        if not isinstance(other, FracPoly):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __neg__(self):
        return FracPoly(-self.num, self.den, normalize=False)

    def __add__(self, other):
        other = FracPoly.coerce(other, self.table)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        den, fa, fb = _common_denominator(self.den, other.den)
        return FracPoly(self.num * fa + other.num * fb, den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-FracPoly.coerce(other, self.table))

    def __rsub__(self, other):
        return FracPoly.coerce(other, self.table) - self

    def __mul__(self, other):
        other = FracPoly.coerce(other, self.table)
        return FracPoly(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = FracPoly.coerce(other, self.table)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero FracPoly")
        return FracPoly(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return FracPoly.coerce(other, self.table) / self

    def __pow__(self, n):
        if n < 0:
            return FracPoly(self.den, self.num) ** (-n)
        return FracPoly(self.num ** n, self.den ** n)

    def substitute(self, v: str, value) -> FracPoly:
        a = self.num.substitute(v, value)
        b = self.den.substitute(v, value)
        return a / b

    def cancel(self, f: Poly) -> FracPoly:
        """Remove common powers of ``f`` from numerator and denominator."""
        num, den = self.num, self.den
        while not f.is_constant() and not num.is_zero():
            try:
                n2 = num.exact_div(f)
                d2 = den.exact_div(f)
            except NotDivisible:
                break
            num, den = n2, d2
        return FracPoly(num, den)

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.const(1, num.table)
    g = gcd(num.content(), den.content())
    if den.leading_coefficient() < 0:
        g = -g
    if g != 1:
        num = num.exact_div(g)
        den = den.exact_div(g)
    if not den.is_constant():
        m = _monomial_gcd(num, den)
        if m is not None:
            num = num.exact_div(m)
            den = den.exact_div(m)
    return num, den


def _monomial_gcd(p: Poly, q: Poly) -> Poly | None:
    a = p.monomial_content()
    b = q.monomial_content()
    ea, _ = a.leading_term()
    eb, _ = b.leading_term()
    e = tuple(map(min, ea, eb))
    if not any(e):
        return None
    return Poly.from_exponents([(e, 1)], p.table)


def _common_denominator(d1: Poly, d2: Poly) -> tuple[Poly, Poly, Poly]:
    """A common denominator D with multipliers D/d1 and D/d2."""
    one = Poly.const(1, d1.table)
    if d1 == d2:
        return d1, one, one
    if d1.is_constant() and d2.is_constant():
        a, b = d1.constant_value(), d2.constant_value()
        g = gcd(a, b)
        lcm = a // g * b
        return Poly.const(lcm, d1.table), Poly.const(lcm // a, d1.table), Poly.const(lcm // b, d1.table)
    for a, b, swap in ((d1, d2, False), (d2, d1, True)):
        try:
            f = b.exact_div(a)
        except NotDivisible:
            continue
        return (b, one, f) if swap else (b, f, one)
    # strip the integer parts so that e.g. 3(1+k^2) and (1+k^2)^2 combine sparingly
    c1, p1 = d1.content_primitive()
    c2, p2 = d2.content_primitive()
    g = gcd(c1, c2)
    lcm_c = c1 // g * c2
    if p1.divides(p2):
        base, fa, fb = p2, p2.exact_div(p1), one
    elif p2.divides(p1):
        base, fa, fb = p1, one, p1.exact_div(p2)
    else:
        base, fa, fb = p1 * p2, p2, p1
    return base * lcm_c, fa * (lcm_c // c1), fb * (lcm_c // c2)


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def pow(p: Poly, n: int) -> Poly:  # noqa: A001 - mirrors the operation name
    return p ** n


def exact_div(p: Poly, q: Poly) -> Poly:
    return p.exact_div(q)


def partial(p: Poly, v: str) -> Poly:
    return p.partial(v)


def coeff_in(p: Poly, v: str, k: int) -> Poly:
    return p.coeff_in(v, k)


def substitute(p: Poly, v: str, value) -> FracPoly:
    return p.substitute(v, value)


def content_primitive(p: Poly) -> tuple[int, Poly]:
    return p.content_primitive()


def weight(p: Poly):
    return p.weight()


def var(name: str, table: VarTable = REGISTRY) -> Poly:
    return Poly.var(name, table)


def const(n: int, table: VarTable = REGISTRY) -> Poly:
    return Poly.const(n, table)
