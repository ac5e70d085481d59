"""Exact models of the ambient ring K over a central base field k.

Five backends cover the combinations of hypotheses the estimates need:

========  ==========================  ===========  ============  =========
kind      K                           k            division      commut.
========  ==========================  ===========  ============  =========
``FF``    GF(p)[x]/(f)                GF(p)        yes           yes
``EXT``   k[y]/(g), k = GF(p), QQ,    k            yes           yes
          GF(p)(s) or QQ(s)
``RF``    k0(t)                       k0           yes           yes
``QUAT``  Hamilton quaternions / QQ   QQ           yes           no
``GA``    group algebra k0[G]         k0           no            iff G abelian
========  ==========================  ===========  ============  =========

A backend works on *raw values* (ints, tuples, fractions) and is stateless
after construction; :class:`Element` wraps a raw value with its backend and
provides the operator interface.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import expr
from .errors import (
    BackendMismatch,
    ElementSyntaxError,
    NotAUnit,
    ReducibleModulus,
    UnknownGroupElement,
    UnsupportedGroupCharacteristic,
    UnsupportedInverse,
    UnsupportedModulus,
    UsageError,
    ZeroDenominator,
    ZeroInverse,
)
from .fields import (
    FunctionField,
    PrimeField,
    RationalField,
    field_from_spec,
    format_poly,
    lcm_poly,
    p_deg,
    p_deriv,
    p_divmod,
    p_is_irreducible_gfp,
    p_mod,
    p_monic,
    p_mul,
    p_trim,
    p_xgcd,
    prime_factors,
)
from .groups import AbelianGroup, CayleyGroup, group_from_spec
from .linalg import rank, solve_vector

MAX_MODULUS_DEGREE = 16
MAX_GROUP_ORDER = 256
MAX_RF_DEGREE = 32
TABLE_LIMIT = 1 << 16


# ---------------------------------------------------------------------------
# descriptor


@dataclass(frozen=True)
class BackendDescriptor:
    """Which ring K and base field k a backend models.

    ``modulus`` is the canonical text of the defining polynomial (FF in ``x``,
    EXT in ``y``); ``group`` is a hashable group object for GA.
    """

    kind: str
    field: str | None = None
    p: int | None = None
    modulus: str | None = None
    group: object = None
    modular: bool = False

    def to_json(self):
        out = {"kind": self.kind}
        if self.field is not None and self.kind != "FF":
            out["field"] = self.field
        if self.p is not None:
            out["p"] = self.p
        if self.modulus is not None:
            out["modulus"] = self.modulus
        if self.group is not None:
            out["group"] = self.group.to_json()
        if self.modular:
            out["modular"] = True
        return out

    def __str__(self):
        if self.kind == "FF":
            return f"FF:{self.p}:{self.modulus}"
        if self.kind == "EXT":
            return f"EXT:{self.field}:{self.modulus}"
        if self.kind == "RF":
            return f"RF:{self.field}"
        if self.kind == "QUAT":
            return "QUAT"
        g = self.group.to_json()
        g = g if isinstance(g, str) else repr(self.group)
        return f"GA:{self.field}:{g}" + (":modular" if self.modular else "")


# ---------------------------------------------------------------------------
# coordinatizations


class FixedCoords:
    """The fixed basis of a finite-dimensional K over k."""

    __slots__ = ("backend", "dim", "k")

    def __init__(self, backend):
        self.backend = backend
        self.dim = backend.dimension
        self.k = backend.k

    def vector(self, v):
        return self.backend.coords(v)

    def value(self, vec):
        return self.backend.from_coords(vec)

    def covers(self, v):
        return True

    def __eq__(self, other):
        return isinstance(other, FixedCoords) and other.backend == self.backend

    def __hash__(self):
        return hash(self.backend.descriptor)

    def __repr__(self):
        return f"FixedCoords({self.backend.descriptor})"


class RFCoords:
    """Rational functions with denominator dividing ``den``: f -> coefficients of
    ``f * den``, a polynomial of degree <= ``top``."""

    __slots__ = ("rf", "den", "top", "dim", "k")

    def __init__(self, rf: FunctionField, den, top: int):
        self.rf = rf
        self.den = den
        self.top = top
        self.dim = top + 1
        self.k = rf.base

    def _numerator(self, v):
        num, den = v
        if not num:
            return ()
        q, r = p_divmod(self.k, self.den, den)
        if r:
            raise ValueError("value not covered by coordinatization")
        out = p_mul(self.k, num, q)
        if len(out) > self.dim:
            raise ValueError("value not covered by coordinatization")
        return out

    def vector(self, v):
        out = self._numerator(v)
        return tuple(out) + (self.k.zero,) * (self.dim - len(out))

    def value(self, vec):
        return self.rf.make(vec, self.den)

    def covers(self, v):
        try:
            self._numerator(v)
        except ValueError:
            return False
        return True

    def __eq__(self, other):
        return isinstance(other, RFCoords) and (other.den, other.top) == (self.den, self.top)

    def __hash__(self):
        return hash((self.den, self.top))

    def __repr__(self):
        return f"RFCoords(den={self.den}, top={self.top})"


class GACoords:
    """Finite list of group elements; a vector is the coefficient list on it."""

    __slots__ = ("support", "index", "dim", "k")

    def __init__(self, k, support):
        self.k = k
        self.support = tuple(support)
        self.index = {g: i for i, g in enumerate(self.support)}
        self.dim = len(self.support)

    def vector(self, v):
        out = [self.k.zero] * self.dim
        idx = self.index
        for g, c in v:
            out[idx[g]] = c
        return tuple(out)

    def value(self, vec):
        z = self.k.is_zero
        return tuple((g, c) for g, c in zip(self.support, vec) if not z(c))

    def covers(self, v):
        return all(g in self.index for g, _ in v)

    def __eq__(self, other):
        return isinstance(other, GACoords) and other.support == self.support

    def __hash__(self):
        return hash(self.support)

    def __repr__(self):
        return f"GACoords({len(self.support)} elements)"


# ---------------------------------------------------------------------------
# backends


class Backend:
    kind = ""
    is_division_ring = True
    is_commutative = True
    is_separable = True
    k_is_infinite = False
    dimension: int | None = None
    var = ""

    # subclasses provide: zero, one, add, neg, mul, inv, is_zero, scalar,
    # format, sample, parse ops, coordinatization hooks

    def __eq__(self, other):
        return isinstance(other, Backend) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, c, v):
        return self.mul(self.scalar(c), v)

    def is_unit(self, v) -> bool:
        return not self.is_zero(v)

    def pow(self, v, n: int):
        if n < 0:
            v, n = self.inv(v), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, v)
            n >>= 1
            if n:
                v = self.mul(v, v)
        return result

    # -- elements ---------------------------------------------------------

    def element(self, value) -> Element:
        return Element(self, value)

    def __call__(self, text_or_value) -> Element:
        if isinstance(text_or_value, str):
            return self.element(self.parse(text_or_value))
        if isinstance(text_or_value, int):
            return self.element(self.scalar(self.k.from_int(text_or_value)))
        return self.element(text_or_value)

    def parse(self, text: str):
        return expr.evaluate(text, _Ops(self))

    def parse_var(self, name):
        return None

    def parse_atom(self, content, position):
        raise ElementSyntaxError("group atoms are only valid in group algebras", "e[" + content + "]", 0)

    def const(self, n: int):
        return self.scalar(self.k.from_int(n))

    def div(self, a, b):
        if self.is_zero(b):
            raise ZeroDenominator("division by zero")
        return self.mul(a, self.inv(b))

    # -- coordinatization -------------------------------------------------

    def coordinatization(self, values):
        return FixedCoords(self)

    def join(self, c1, c2):
        return c1


class _Ops:
    """Adapter from the expression parser to backend arithmetic."""

    def __init__(self, backend):
        self.b = backend

    def const(self, n):
        return self.b.const(n)

    def var(self, name):
        return self.b.parse_var(name)

    def atom(self, content, position):
        return self.b.parse_atom(content, position)

    def add(self, x, y):
        return self.b.add(x, y)

    def sub(self, x, y):
        return self.b.sub(x, y)

    def mul(self, x, y):
        return self.b.mul(x, y)

    def div(self, x, y):
        return self.b.div(x, y)

    def neg(self, x):
        return self.b.neg(x)

    def pow(self, x, n):
        if n < 0 and self.b.is_zero(x):
            raise ZeroDenominator("negative power of zero")
        return self.b.pow(x, n)


class FiniteFieldBackend(Backend):
    """GF(p^n) = GF(p)[x]/(f) over k = GF(p); values are ints in base-p encoding."""

    kind = "FF"
    var = "x"
    zero = 0
    one = 1

    def __init__(self, p: int, modulus):
        k = PrimeField(p)
        f = p_trim(k, [k.from_int(c) for c in modulus])
        if p_deg(f) < 1:
            raise UsageError("modulus must be non-constant")
        if p_deg(f) > MAX_MODULUS_DEGREE:
            raise UsageError(f"modulus degree above {MAX_MODULUS_DEGREE}")
        f = p_monic(k, f)
        if not p_is_irreducible_gfp(k, f):
            raise ReducibleModulus(f"{format_poly(k, f, 'x')} is reducible over GF({p})")
        self.k = k
        self.p = p
        self.modulus = f
        self.dimension = n = p_deg(f)
        self.q = p**n
        self.descriptor = BackendDescriptor("FF", field=repr(k), p=p, modulus=format_poly(k, f, "x"))
        self._pw = [p**i for i in range(n)]
        self._digits = None
        self._exp = self._log = None
        if self.q <= TABLE_LIMIT:
            self._digits = [self._decode(v) for v in range(self.q)]
            self._build_tables()

    def _decode(self, v):
        p = self.p
        out = []
        for _ in range(self.dimension):
            v, r = divmod(v, p)
            out.append(r)
        return tuple(out)

    def _encode(self, digits):
        return sum(c * w for c, w in zip(digits, self._pw))

    def _poly_mul(self, a, b):
        k = self.k
        prod = p_mul(k, p_trim(k, self.coords(a)), p_trim(k, self.coords(b)))
        return self._encode(p_mod(k, prod, self.modulus))

    def _build_tables(self):
        q = self.q
        if q == 2:
            self._exp, self._log = [1, 1], {1: 0}
            return
        factors = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._slow_pow(g, (q - 1) // r) != 1 for r in factors):
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        cur = 1
        for i in range(q - 1):
            exp[i] = exp[i + q - 1] = cur
            log[cur] = i
            cur = self._poly_mul(cur, g)
        self._exp, self._log = exp, log
        self.generator = g

    def _slow_pow(self, v, n):
        result = 1
        while n:
            if n & 1:
                result = self._poly_mul(result, v)
            n >>= 1
            if n:
                v = self._poly_mul(v, v)
        return result

    def coords(self, v):
        if self._digits is not None:
            return self._digits[v]
        return self._decode(v)

    def from_coords(self, vec):
        return self._encode(vec)

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        return self._encode([(x + y) % p for x, y in zip(self.coords(a), self.coords(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        return self._encode([-x % p for x in self.coords(a)])

    def mul(self, a, b):
        if not a or not b:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def inv(self, a):
        if not a:
            raise ZeroInverse("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def is_zero(self, a):
        return a == 0

    def scalar(self, c):
        return c % self.p

    def parse_var(self, name):
        if name == "x":
            return self._encode(self._pad(p_mod(self.k, (0, 1), self.modulus)))
        return None

    def _pad(self, f):
        return tuple(f) + (0,) * (self.dimension - len(f))

    def format(self, v) -> str:
        return format_poly(self.k, p_trim(self.k, self.coords(v)), "x")

    def sample(self, rng, budget=None):
        return rng.randrange(1, self.q)

    def elements(self):
        return range(self.q)

    def frobenius(self, v):
        return self.pow(v, self.p)


class SimpleExtensionBackend(Backend):
    """K = k[y]/(g) for an irreducible monic g over k; values are coefficient
    tuples of length deg(g)."""

    kind = "EXT"
    var = "y"

    def __init__(self, k, g):
        g = p_trim(k, g)
        if p_deg(g) < 1:
            raise UsageError("modulus must be non-constant")
        if p_deg(g) > MAX_MODULUS_DEGREE:
            raise UsageError(f"modulus degree above {MAX_MODULUS_DEGREE}")
        g = p_monic(k, g)
        self.k = k
        self.modulus = g
        self.dimension = n = p_deg(g)
        if not _is_irreducible(k, g):
            raise ReducibleModulus(f"{format_poly(k, g, 'y')} is reducible over {k!r}")
        self.is_separable = isinstance(k, (RationalField, PrimeField)) or bool(p_deriv(k, g))
        self.k_is_infinite = not isinstance(k, PrimeField)
        self.zero = (k.zero,) * n
        self.one = (k.one,) + (k.zero,) * (n - 1)
        self.descriptor = BackendDescriptor("EXT", field=repr(k), modulus=format_poly(k, g, "y"))

    def _pad(self, f):
        return tuple(f) + (self.k.zero,) * (self.dimension - len(f))

    def coords(self, v):
        return v

    def from_coords(self, vec):
        return tuple(vec)

    def add(self, a, b):
        k = self.k
        return tuple(k.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.k.neg(x) for x in a)

    def mul(self, a, b):
        k = self.k
        prod = p_mul(k, p_trim(k, a), p_trim(k, b))
        return self._pad(p_mod(k, prod, self.modulus))

    def inv(self, a):
        k = self.k
        f = p_trim(k, a)
        if not f:
            raise ZeroInverse("inverse of zero")
        d, u, _ = p_xgcd(k, f, self.modulus)
        if p_deg(d) != 0:
            raise NotAUnit("element shares a factor with the modulus")
        return self._pad(p_mod(k, u, self.modulus))

    def is_zero(self, a):
        return all(self.k.is_zero(x) for x in a)

    def scalar(self, c):
        return (c,) + (self.k.zero,) * (self.dimension - 1)

    def parse_var(self, name):
        if name == "y":
            return self._pad(p_mod(self.k, (self.k.zero, self.k.one), self.modulus))
        if isinstance(self.k, FunctionField) and name == self.k.var:
            return self.scalar(self.k.poly((self.k.base.zero, self.k.base.one)))
        return None

    def format(self, v) -> str:
        return format_poly(self.k, p_trim(self.k, v), "y")

    def sample(self, rng, budget=None):
        while True:
            v = tuple(self.k.random(rng, budget) for _ in range(self.dimension))
            if not self.is_zero(v):
                return v


def _is_irreducible(k, g) -> bool:
    n = p_deg(g)
    if n == 1:
        return True
    if isinstance(k, PrimeField):
        return p_is_irreducible_gfp(k, g)
    if isinstance(k, RationalField):
        import sympy

        y = sympy.Symbol("y")
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(g)], y, domain="QQ").is_irreducible
    if isinstance(k.base, RationalField):
        return _is_irreducible_qs(k, g)
    if n <= 3:
        return not _has_root_gfp_s(k, g)
    if _eisenstein(k, g):
        return True
    raise UnsupportedModulus(f"cannot decide irreducibility of degree {n} over {k!r}; use degree <= 3 or an Eisenstein polynomial")


def _integral_form(k: FunctionField, g):
    """Monic polynomial over base[s] whose roots are L*(roots of g)."""
    B = k.base
    L = (B.one,)
    for num, den in g:
        if num:
            L = lcm_poly(B, L, den)
    n = p_deg(g)
    out = []
    Lpow = (B.one,)
    pows = []
    for _ in range(n + 1):
        pows.append(Lpow)
        Lpow = p_mul(B, Lpow, L)
    for i, (num, den) in enumerate(g):
        # coefficient of z^i is c_i * L^(n-i)
        q = p_divmod(B, pows[n - i], den)[0]
        out.append(p_mul(B, num, q) if num else ())
    return out


def _has_root_gfp_s(k: FunctionField, g) -> bool:
    import itertools

    B = k.base
    c = _integral_form(k, g)
    n = len(c) - 1
    dmax = 0
    for i in range(n):
        if c[i]:
            dmax = max(dmax, p_deg(c[i]) // (n - i))
    p = B.p
    for d in range(dmax + 1):
        for coeffs in itertools.product(range(p), repeat=d + 1):
            z = p_trim(B, coeffs)
            if d > 0 and len(z) != d + 1:
                continue
            acc = ()
            for ci in reversed(c):
                acc = p_trim(B, list(p_mul(B, acc, z)))
                from .fields import p_add

                acc = p_add(B, acc, ci)
            if not acc:
                return True
    return False


def _eisenstein(k: FunctionField, g) -> bool:
    from .fields import p_mod as pm

    B = k.base
    c = _integral_form(k, g)
    n = len(c) - 1
    candidates = [(B.zero, B.one)] + [(B.neg(a), B.one) for a in range(1, B.p)]
    for prime in candidates:
        if all(not ci or not pm(B, ci, prime) for ci in c[:n]):
            sq = p_mul(B, prime, prime)
            if c[0] and pm(B, c[0], sq):
                return True
    return False


def _is_irreducible_qs(k: FunctionField, g) -> bool:
    import sympy

    s, y = sympy.symbols("s y")
    c = _integral_form(k, g)
    expr_ = 0
    for i, ci in enumerate(c):
        poly_s = sum(sympy.Rational(a.numerator, a.denominator) * s**j for j, a in enumerate(ci))
        expr_ += poly_s * y**i
    _, factors = sympy.factor_list(sympy.expand(expr_), s, y)
    ydeg = [(sympy.degree(f, y), m) for f, m in factors if sympy.degree(f, y) > 0]
    return len(ydeg) == 1 and ydeg[0][1] == 1


class RationalFunctionBackend(Backend):
    """K = k0(t) over k = k0 (infinite-dimensional)."""

    kind = "RF"
    var = "t"
    dimension = None

    def __init__(self, k0):
        if isinstance(k0, FunctionField):
            raise UsageError("RF base field must be GF(p) or QQ")
        self.k = k0
        self.rf = FunctionField(k0, "t")
        self.zero = self.rf.zero
        self.one = self.rf.one
        self.k_is_infinite = isinstance(k0, RationalField)
        self.descriptor = BackendDescriptor("RF", field=repr(k0))

    def add(self, a, b):
        return self.rf.add(a, b)

    def neg(self, a):
        return self.rf.neg(a)

    def mul(self, a, b):
        return self.rf.mul(a, b)

    def inv(self, a):
        return self.rf.inv(a)

    def is_zero(self, a):
        return not a[0]

    def scalar(self, c):
        return self.rf.from_base(c)

    def parse_var(self, name):
        if name == "t":
            return self.rf.poly((self.k.zero, self.k.one))
        return None

    def format(self, v) -> str:
        return self.rf.format(v)

    def sample(self, rng, budget=None):
        d = 2 if budget is None else max(0, min(budget, MAX_RF_DEGREE))
        k = self.k
        while True:
            num = p_trim(k, [k.random(rng, 3) for _ in range(d + 1)])
            den = p_trim(k, [k.random(rng, 3) for _ in range(d + 1)])
            if num and den:
                return self.rf.make(num, den)

    def coordinatization(self, values):
        k = self.k
        den = (k.one,)
        for num, d in values:
            if num:
                den = lcm_poly(k, den, d)
        top = -1
        for num, d in values:
            if num:
                top = max(top, p_deg(num) + p_deg(den) - p_deg(d))
        return RFCoords(self.rf, den, top)

    def join(self, c1, c2):
        k = self.k
        den = lcm_poly(k, c1.den, c2.den)
        top = max(c1.top + p_deg(den) - p_deg(c1.den), c2.top + p_deg(den) - p_deg(c2.den))
        return RFCoords(self.rf, den, top)


class QuaternionBackend(Backend):
    """Rational Hamilton quaternions (i^2 = j^2 = -1, ij = -ji = k) over QQ."""

    kind = "QUAT"
    is_commutative = False
    k_is_infinite = True
    dimension = 4
    var = "i"
    zero = (Fraction(0),) * 4
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def __init__(self):
        self.k = RationalField()
        self.descriptor = BackendDescriptor("QUAT", field="QQ")

    def coords(self, v):
        return v

    def from_coords(self, vec):
        return tuple(Fraction(c) for c in vec)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])

    def neg(self, a):
        return (-a[0], -a[1], -a[2], -a[3])

    def mul(self, x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def norm(self, a):
        return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]

    def inv(self, a):
        n = self.norm(a)
        if n == 0:
            raise ZeroInverse("inverse of zero")
        return (a[0] / n, -a[1] / n, -a[2] / n, -a[3] / n)

    def is_zero(self, a):
        return not any(a)

    def scalar(self, c):
        return (Fraction(c), Fraction(0), Fraction(0), Fraction(0))

    def parse_var(self, name):
        unit = {"i": 1, "j": 2, "k": 3}.get(name)
        if unit is None:
            return None
        out = [Fraction(0)] * 4
        out[unit] = Fraction(1)
        return tuple(out)

    def format(self, v) -> str:
        parts = []
        for c, sym in zip(v, ("", "i", "j", "k")):
            if c == 0:
                continue
            neg = c < 0
            a = -c if neg else c
            if sym and a == 1:
                term = sym
            elif sym:
                term = f"{a}*{sym}"
            else:
                term = str(a)
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append((" - " if neg else " + ") + term)
        return "".join(parts) or "0"

    def sample(self, rng, budget=None):
        b = max(1, budget or 3)
        while True:
            v = tuple(Fraction(rng.randint(-b, b), rng.randint(1, b)) for _ in range(4))
            if any(v):
                return v


class GroupAlgebraBackend(Backend):
    """The group algebra k0[G]; values are sorted ``((g, c), ...)`` with c != 0."""

    kind = "GA"
    is_division_ring = False

    def __init__(self, k0, group, modular=False):
        if isinstance(k0, FunctionField):
            raise UsageError("GA base field must be GF(p) or QQ")
        group = group_from_spec(group)
        if group.is_finite and group.order > MAX_GROUP_ORDER:
            raise UsageError(f"group order above {MAX_GROUP_ORDER}")
        if isinstance(k0, PrimeField) and not modular:
            bad = [t for t in group.torsion_orders if t % k0.p == 0]
            if bad:
                raise UnsupportedGroupCharacteristic(
                    f"characteristic {k0.p} divides torsion order {bad[0]}; pass modular=True to allow"
                )
        self.k = k0
        self.group = group
        self.modular = modular
        self.is_commutative = group.is_abelian
        self.k_is_infinite = isinstance(k0, RationalField)
        self.dimension = group.order if group.is_finite else None
        e = group.identity
        self.zero = ()
        self.one = ((e, k0.one),)
        if group.is_finite and group.order == 1:
            self.is_division_ring = True
        self.descriptor = BackendDescriptor("GA", field=repr(k0), group=group, modular=modular)

    def basis_element(self, g, c=None):
        return ((self.group.check(g), self.k.one if c is None else c),)

    def add(self, a, b):
        k = self.k
        acc = dict(a)
        for g, c in b:
            if g in acc:
                s = k.add(acc[g], c)
                if k.is_zero(s):
                    del acc[g]
                else:
                    acc[g] = s
            else:
                acc[g] = c
        return tuple(sorted(acc.items()))

    def neg(self, a):
        return tuple((g, self.k.neg(c)) for g, c in a)

    def mul(self, a, b):
        k = self.k
        G = self.group
        acc = {}
        for g, c in a:
            for h, d in b:
                gh = G.mul(g, h)
                v = k.mul(c, d)
                acc[gh] = k.add(acc[gh], v) if gh in acc else v
        return tuple(sorted((g, c) for g, c in acc.items() if not k.is_zero(c)))

    def is_zero(self, a):
        return not a

    def scalar(self, c):
        if self.k.is_zero(c):
            return ()
        return ((self.group.identity, c),)

    def scale(self, c, v):
        if self.k.is_zero(c):
            return ()
        return tuple((g, self.k.mul(c, d)) for g, d in v)

    def _mult_matrix_rows(self, a):
        """Rows are the coordinates of a*e_g for g in G (left multiplication)."""
        elems = list(self.group.elements())
        coords = GACoords(self.k, elems)
        return [coords.vector(self.mul(a, ((g, self.k.one),))) for g in elems], coords

    def is_unit(self, a) -> bool:
        if not a:
            return False
        if len(a) == 1:
            return True
        if not self.group.is_finite:
            return False
        rows, coords = self._mult_matrix_rows(a)
        return rank(rows, self.k, coords.dim) == coords.dim

    def inv(self, a):
        k = self.k
        if not a:
            raise ZeroInverse("inverse of zero")
        if len(a) == 1:
            (g, c), = a
            return ((self.group.inv(g), k.inv(c)),)
        if not self.group.is_finite:
            raise UnsupportedInverse("inverse of a non-monomial element over an infinite group")
        rows, coords = self._mult_matrix_rows(a)
        # columns of the transpose are a*e_g; solve sum_g x_g a e_g = 1
        cols = [tuple(r[j] for r in rows) for j in range(coords.dim)]
        x = solve_vector(cols, coords.vector(self.one), k)
        if x is None:
            raise NotAUnit("element is a zero divisor")
        return coords.value(x)

    def parse_atom(self, content, position):
        try:
            g = self.group.parse_element(content)
        except UnknownGroupElement as exc:
            raise UnknownGroupElement(f"{exc} at position {position}") from None
        return ((g, self.k.one),)

    def div(self, a, b):
        if len(b) == 1 and b[0][0] == self.group.identity:
            return self.scale(self.k.inv(b[0][1]), a)
        if not b:
            raise ZeroDenominator("division by zero")
        return self.mul(a, self.inv(b))

    def format(self, v) -> str:
        if not v:
            return "0"
        parts = []
        G = self.group
        for g, c in v:
            neg = isinstance(c, Fraction) and c < 0
            a = -c if neg else c
            atom = f"e[{G.format_element(g)}]"
            term = atom if a == self.k.one else f"{self.k.format(a)}*{atom}"
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append((" - " if neg else " + ") + term)
        return "".join(parts)

    def random_group_element(self, rng):
        G = self.group
        if G.is_finite:
            elems = list(G.elements())
            return elems[rng.randrange(len(elems))]
        free = [rng.randint(-2, 2) for _ in range(G.rank)]
        tors = [rng.randrange(t) for t in G.factors]
        return tuple(free + tors)

    def sample(self, rng, budget=None):
        size = max(1, budget or 3)
        k = self.k
        while True:
            terms = rng.randint(1, size)
            acc = {}
            for _ in range(terms):
                c = k.random(rng, 3)
                if not k.is_zero(c):
                    acc[self.random_group_element(rng)] = c
            v = tuple(sorted(acc.items()))
            if v:
                return v

    def coordinatization(self, values):
        return GACoords(self.k, sorted({g for v in values for g, _ in v}))

    def join(self, c1, c2):
        return GACoords(self.k, sorted(set(c1.support) | set(c2.support)))


# ---------------------------------------------------------------------------
# elements


class Element:
    """An exact element of a backend; immutable and hashable."""

    __slots__ = ("backend", "value")

    def __init__(self, backend, value):
        self.backend = backend
        self.value = value

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.backend is not self.backend and other.backend != self.backend:
                raise BackendMismatch(f"{self.backend.descriptor} vs {other.backend.descriptor}")
            return other.value
        if isinstance(other, (int, Fraction)):
            b = self.backend
            return b.scalar(b.k.from_fraction(Fraction(other)))
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.sub(v, self.value))

    def __neg__(self):
        return Element(self.backend, self.backend.neg(self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.mul(self.value, v))

    def __rmul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.mul(v, self.value))

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Element(self.backend, self.backend.div(self.value, v))

    def __pow__(self, n: int):
        return Element(self.backend, self.backend.pow(self.value, n))

    def inverse(self) -> Element:
        return elem_inverse(self)

    def is_unit(self) -> bool:
        return self.backend.is_unit(self.value)

    def is_zero(self) -> bool:
        return self.backend.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.backend == other.backend and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.backend.descriptor, self.value))

    def __str__(self):
        return self.backend.format(self.value)

    def __repr__(self):
        return f"Element({self.backend.descriptor}, {self})"


# ---------------------------------------------------------------------------
# public operations


def _poly_from_text(text: str, k, var: str):
    """Parse a polynomial in ``var`` with coefficients in ``k``."""
    coeff_field = k

    class PolyOps:
        def const(self, n):
            return (coeff_field.from_int(n),)

        def var(self, name):
            if name == var:
                return (coeff_field.zero, coeff_field.one)
            if isinstance(coeff_field, FunctionField) and name == coeff_field.var:
                return (coeff_field.poly((coeff_field.base.zero, coeff_field.base.one)),)
            return None

        def atom(self, content, position):
            raise ElementSyntaxError("unexpected group atom", text, position)

        def add(self, a, b):
            from .fields import p_add

            return p_add(coeff_field, a, b)

        def sub(self, a, b):
            from .fields import p_sub

            return p_sub(coeff_field, a, b)

        def neg(self, a):
            from .fields import p_neg

            return p_neg(coeff_field, a)

        def mul(self, a, b):
            return p_mul(coeff_field, a, b)

        def div(self, a, b):
            if len(b) != 1:
                raise ElementSyntaxError("can only divide polynomials by constants", text, None)
            return tuple(coeff_field.div(c, b[0]) for c in a)

        def pow(self, a, n):
            if n < 0:
                raise ElementSyntaxError("negative exponent in polynomial", text, None)
            out = (coeff_field.one,)
            for _ in range(n):
                out = p_mul(coeff_field, out, a)
            return out

    return p_trim(k, expr.evaluate(text, PolyOps()))


def smallest_irreducible(p: int, n: int):
    """Monic irreducible of degree n over GF(p) with the smallest base-p code."""
    k = PrimeField(p)
    for code in range(p**n):
        low = []
        c = code
        for _ in range(n):
            c, r = divmod(c, p)
            low.append(r)
        f = tuple(low) + (1,)
        if p_is_irreducible_gfp(k, f):
            return f
    raise ReducibleModulus(f"no irreducible polynomial of degree {n} over GF({p})")


def _parse_spec_string(text: str) -> dict:
    parts = [s.strip() for s in text.strip().split(":")]
    kind = parts[0].upper()
    if kind == "FF":
        if len(parts) == 2 and "^" in parts[1]:
            p, n = parts[1].split("^")
            return {"kind": "FF", "p": int(p), "degree": int(n)}
        if len(parts) == 3:
            return {"kind": "FF", "p": int(parts[1]), "modulus": parts[2]}
    elif kind == "EXT" and len(parts) == 3:
        return {"kind": "EXT", "field": parts[1], "modulus": parts[2]}
    elif kind == "RF" and len(parts) == 2:
        return {"kind": "RF", "field": parts[1]}
    elif kind == "QUAT" and len(parts) == 1:
        return {"kind": "QUAT"}
    elif kind == "GA" and len(parts) in (3, 4):
        out = {"kind": "GA", "field": parts[1], "group": parts[2]}
        if len(parts) == 4:
            if parts[3] != "modular":
                raise UsageError(f"bad backend flag {parts[3]!r}")
            out["modular"] = True
        return out
    raise UsageError(f"bad backend spec {text!r}")


_CACHE: dict = {}


def backend_create(spec) -> Backend:
    """Build (and validate) a backend from a descriptor, a dict or a spec string.

    Spec strings: ``FF:2:x^4+x+1``, ``FF:2^8``, ``EXT:GF(2)(s):y^2-s``,
    ``RF:QQ``, ``QUAT``, ``GA:GF(3):Z/5``, ``GA:QQ:S3``, ``GA:GF(2):Z/2:modular``.
    """
    if isinstance(spec, Backend):
        return spec
    if isinstance(spec, BackendDescriptor):
        d = spec.to_json()
    elif isinstance(spec, str):
        d = _parse_spec_string(spec)
    else:
        d = dict(spec)
    key = repr(sorted((k, repr(v)) for k, v in d.items()))
    cached = _CACHE.get(key)
    if cached is not None:
        return cached
    try:
        b = _build(d)
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"bad backend spec {d!r}: {exc}") from None
    _CACHE[key] = b
    return b


def _build(d):
    kind = str(d.get("kind", "")).upper()
    if kind == "FF":
        p = int(d["p"])
        k = PrimeField(p)
        if "modulus" in d:
            m = d["modulus"]
            if isinstance(m, str):
                f = _poly_from_text(m, k, "x")
            else:
                f = tuple(int(c) for c in m)
        else:
            f = smallest_irreducible(p, int(d["degree"]))
        return FiniteFieldBackend(p, f)
    if kind == "EXT":
        k = field_from_spec(d["field"])
        m = d["modulus"]
        g = _poly_from_text(m, k, "y") if isinstance(m, str) else p_trim(k, m)
        return SimpleExtensionBackend(k, g)
    if kind == "RF":
        return RationalFunctionBackend(field_from_spec(d["field"]))
    if kind == "QUAT":
        return QuaternionBackend()
    if kind == "GA":
        return GroupAlgebraBackend(field_from_spec(d["field"]), d["group"], bool(d.get("modular", False)))
    raise UsageError(f"unknown backend kind {kind!r}")


def elem_parse(backend, text: str) -> Element:
    return Element(backend, backend.parse(text))


def elem_format(a: Element) -> str:
    return a.backend.format(a.value)


def elem_mul(a: Element, b: Element) -> Element:
    return a * b


def elem_add(a: Element, b: Element) -> Element:
    return a + b


def elem_inverse(a: Element) -> Element:
    b = a.backend
    if b.is_zero(a.value):
        raise ZeroInverse("inverse of zero")
    return Element(b, b.inv(a.value))


def elem_is_unit(a: Element) -> bool:
    return a.backend.is_unit(a.value)


def sample_element(backend, rng_seed, size_budget=None) -> Element:
    """Deterministic nonzero sample; ``rng_seed`` is an int or a ``random.Random``."""
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    return Element(backend, backend.sample(rng, size_budget))


def is_abelian_backend(backend) -> bool:
    return backend.is_commutative


__all__ = [
    "AbelianGroup",
    "Backend",
    "BackendDescriptor",
    "CayleyGroup",
    "Element",
    "backend_create",
    "elem_add",
    "elem_format",
    "elem_inverse",
    "elem_is_unit",
    "elem_mul",
    "elem_parse",
    "sample_element",
]
