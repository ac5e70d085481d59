"""Coefficient fields and dense univariate polynomials over them.

Three families of exact fields serve as the base field ``k``:

* :class:`PrimeField` -- GF(p), values are ``int`` in ``range(p)``;
* :class:`RationalField` -- the rationals, values are :class:`fractions.Fraction`;
* :class:`FunctionField` -- ``F(s)`` over one of the above, values are reduced
  pairs ``(num, den)`` of coefficient tuples with ``den`` monic.

Polynomials are tuples of coefficients, lowest degree first, with no trailing
zeros (the zero polynomial is ``()``).  The ``p_*`` helpers take the coefficient
field as their first argument.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import NonPrimeCharacteristic, ZeroDenominator, ZeroInverse


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    __slots__ = ("p",)

    zero = 0
    one = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    spec = property(__repr__)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    @property
    def characteristic(self):
        return self.p

    @property
    def order(self):
        return self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroInverse("inverse of zero in " + repr(self))
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise ZeroDenominator(f"denominator {q.denominator} vanishes mod {self.p}")
        return q.numerator * self.inv(q.denominator % self.p) % self.p

    def elements(self):
        return range(self.p)

    def random(self, rng, budget=None):
        return rng.randrange(self.p)

    def format(self, a) -> str:
        return str(a)


class RationalField:
    __slots__ = ()

    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0
    order = None
    spec = "QQ"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroInverse("inverse of zero in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDenominator("division by zero in QQ")
        return a / b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return Fraction(n)

    def from_fraction(self, q: Fraction):
        return Fraction(q)

    def random(self, rng, budget=None):
        b = max(1, budget or 3)
        return Fraction(rng.randint(-b, b), rng.randint(1, b))

    def format(self, a) -> str:
        return str(a)


# ---------------------------------------------------------------------------
# polynomials


def p_trim(F, coeffs) -> tuple:
    c = list(coeffs)
    while c and F.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def p_deg(f) -> int:
    return len(f) - 1


def p_add(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return p_trim(F, out)


def p_neg(F, f):
    return tuple(F.neg(c) for c in f)


def p_sub(F, f, g):
    return p_add(F, f, p_neg(F, g))


def p_scale(F, c, f):
    if F.is_zero(c):
        return ()
    return p_trim(F, [F.mul(c, a) for a in f])


def p_mul(F, f, g):
    if not f or not g:
        return ()
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return p_trim(F, out)


def p_divmod(F, f, g):
    if not g:
        raise ZeroDenominator("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    if len(r) - 1 < dg:
        return (), tuple(r)
    q = [F.zero] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if F.is_zero(c):
            continue
        c = F.mul(c, lead_inv)
        q[i - dg] = c
        for j, b in enumerate(g):
            r[i - dg + j] = F.sub(r[i - dg + j], F.mul(c, b))
    return p_trim(F, q), p_trim(F, r[:dg])


def p_mod(F, f, g):
    return p_divmod(F, f, g)[1]


def p_monic(F, f):
    if not f:
        return f
    if f[-1] == F.one:
        return f
    return p_scale(F, F.inv(f[-1]), f)


def p_gcd(F, f, g):
    while g:
        f, g = g, p_mod(F, f, g)
    return p_monic(F, f)


def p_xgcd(F, f, g):
    """Return ``(d, u, v)`` with ``u*f + v*g = d`` and ``d`` monic."""
    r0, r1 = f, g
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = p_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, p_sub(F, s0, p_mul(F, q, s1))
        t0, t1 = t1, p_sub(F, t0, p_mul(F, q, t1))
    if not r0:
        return r0, s0, t0
    c = F.inv(r0[-1])
    return p_scale(F, c, r0), p_scale(F, c, s0), p_scale(F, c, t0)


def p_deriv(F, f):
    return p_trim(F, [F.mul(F.from_int(i), c) for i, c in enumerate(f)][1:])


def p_powmod(F, f, e: int, m):
    result = (F.one,)
    base = p_mod(F, f, m)
    while e:
        if e & 1:
            result = p_mod(F, p_mul(F, result, base), m)
        e >>= 1
        if e:
            base = p_mod(F, p_mul(F, base, base), m)
    return result


def p_eval(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def p_is_irreducible_gfp(F: PrimeField, f) -> bool:
    """Deterministic irreducibility test over GF(p) (Ben-Or):
    ``f`` of degree n is irreducible iff gcd(f, x^(p^i) - x) = 1 for i <= n/2."""
    n = p_deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = p_monic(F, f)
    x = (F.zero, F.one)
    h = x
    for _ in range(n // 2):
        h = p_powmod(F, h, F.p, f)
        if p_deg(p_gcd(F, f, p_sub(F, h, x))) > 0:
            return False
    return True


def format_poly(F, f, var: str) -> str:
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if F.is_zero(c):
            continue
        negative = False
        if isinstance(c, Fraction) and c < 0:
            negative, c = True, -c
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = F.format(c)
        if mono and c == F.one:
            term = mono
        elif mono:
            if any(ch in cs for ch in "+- ") or cs.startswith("("):
                cs = f"({cs})"
            term = f"{cs}*{mono}"
        else:
            term = cs if not any(ch in cs.lstrip("-") for ch in "+ ") else f"({cs})"
        if not parts:
            parts.append(("-" if negative else "") + term)
        else:
            parts.append((" - " if negative else " + ") + term)
    return "".join(parts)


# ---------------------------------------------------------------------------
# rational functions


class FunctionField:
    """The field ``base(var)`` of rational functions in one indeterminate."""

    __slots__ = ("base", "var", "zero", "one")

    characteristic = property(lambda self: self.base.characteristic)
    order = None

    def __init__(self, base, var: str = "s"):
        self.base = base
        self.var = var
        self.zero = ((), (base.one,))
        self.one = ((base.one,), (base.one,))

    def __repr__(self):
        return f"{self.base!r}({self.var})"

    spec = property(__repr__)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.base == self.base and other.var == self.var

    def __hash__(self):
        return hash(("RF", self.base, self.var))

    def make(self, num, den):
        F = self.base
        num, den = p_trim(F, num), p_trim(F, den)
        if not den:
            raise ZeroDenominator("rational function with zero denominator")
        if not num:
            return self.zero
        if len(den) > 1:
            g = p_gcd(F, num, den)
            if len(g) > 1:
                num = p_divmod(F, num, g)[0]
                den = p_divmod(F, den, g)[0]
        lead = den[-1]
        if lead != F.one:
            c = F.inv(lead)
            num, den = p_scale(F, c, num), p_scale(F, c, den)
        return (num, den)

    def poly(self, f):
        return (p_trim(self.base, f), (self.base.one,))

    def add(self, a, b):
        F = self.base
        if a[1] == b[1]:
            return self.make(p_add(F, a[0], b[0]), a[1])
        return self.make(p_add(F, p_mul(F, a[0], b[1]), p_mul(F, b[0], a[1])), p_mul(F, a[1], b[1]))

    def neg(self, a):
        return (p_neg(self.base, a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a[0] or not b[0]:
            return self.zero
        F = self.base
        return self.make(p_mul(F, a[0], b[0]), p_mul(F, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroInverse("inverse of zero rational function")
        return self.make(a[1], a[0])

    def div(self, a, b):
        if not b[0]:
            raise ZeroDenominator("division by zero rational function")
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a[0]

    def from_int(self, n: int):
        return self.poly((self.base.from_int(n),))

    def from_fraction(self, q: Fraction):
        return self.poly((self.base.from_fraction(q),))

    def from_base(self, c):
        return self.poly((c,))

    def random(self, rng, budget=None):
        d = max(0, budget if budget is not None else 2)
        F = self.base
        num = [F.random(rng, 3) for _ in range(rng.randint(0, d) + 1)]
        den = [F.random(rng, 3) for _ in range(rng.randint(0, d) + 1)]
        den = p_trim(F, den) or (F.one,)
        return self.make(num, den)

    def format(self, a) -> str:
        num, den = a
        ns = format_poly(self.base, num, self.var)
        if den == (self.base.one,):
            return ns
        ds = format_poly(self.base, den, self.var)
        if len(num) > 1 or any(ch in ns.lstrip("-") for ch in "+-/"):
            ns = f"({ns})"
        return f"{ns}/({ds})"


def lcm_poly(F, f, g):
    if not f or not g:
        return ()
    return p_monic(F, p_divmod(F, p_mul(F, f, g), p_gcd(F, f, g))[0])


def field_from_spec(text: str):
    """Parse ``GF(p)``, ``QQ``, ``GF(p)(s)`` or ``QQ(s)``."""
    t = text.replace(" ", "")
    var = None
    if t.endswith(")") and t.count("(") == (2 if t.startswith("GF") else 1):
        head, _, tail = t[:-1].rpartition("(")
        var, t = tail, head
    if t in ("QQ", "Q"):
        base = RationalField()
    elif t.startswith("GF(") and t.endswith(")"):
        try:
            p = int(t[3:-1])
        except ValueError:
            raise ValueError(f"bad field spec {text!r}") from None
        base = PrimeField(p)
    else:
        raise ValueError(f"bad field spec {text!r}")
    return FunctionField(base, var) if var else base


def int_gcd_content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
