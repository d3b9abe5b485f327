"""Exact multivariate polynomials over Q or F_p and the local ring R_Delta.

Polynomials are immutable.  Terms are kept in a dict keyed by dense exponent
tuples (one slot per variable); iteration follows graded lexicographic order
with ``x1 > x2 > ... > xn``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

from gmpy2 import mpq, mpz

from .errors import FieldMismatchError, MetalieError, NotAUnitError

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction, mpq]
# every type accepted where a field scalar is expected
SCALARS = (int, Fraction, type(mpq()), type(mpz()))
_RATIONALS = (Fraction, type(mpq()))


# ---------------------------------------------------------------------------
# fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise MetalieError(f"F_{self.p}: {self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def convert(self, c) -> Scalar:
        if self.p == 0:
            if type(c) is _MPQ:
                return c
            if isinstance(c, Fraction):
                return mpq(int(c.numerator), int(c.denominator))
            return mpq(c)
        if isinstance(c, str):
            c = Fraction(c)
        if isinstance(c, _RATIONALS):
            num, den = int(c.numerator), int(c.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"{c} has no image in F_{self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(c) % self.p

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        if not b:
            raise ZeroDivisionError("division by zero in field")
        if self.p == 0:
            return mpq(a) / b
        return a * pow(b, -1, self.p) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p == 0 else (-a) % self.p

    def fmt(self, c: Scalar) -> str:
        if self.p == 0 and c.denominator != 1:
            return f"{c.numerator}/{c.denominator}"
        return str(int(c)) if self.p == 0 else str(c)

    @property
    def tag(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    @classmethod
    def from_tag(cls, tag: str) -> "Field":
        tag = tag.strip().lower()
        if tag in ("q", "qq", "0"):
            return QQ
        if tag.startswith("fp:"):
            return GF(int(tag[3:]))
        raise MetalieError(f"unknown field tag {tag!r}")

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"


_MPQ = type(mpq())
QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# monomials


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Exponent, b: Exponent) -> bool:
    """True iff x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def grlex_key(e: Exponent):
    return (sum(e), e)


# ---------------------------------------------------------------------------
# polynomial rings


@dataclass(frozen=True)
class PolyRing:
    field: Field
    nvars: int

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field.convert(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i: int) -> "Poly":
        """The variable x_i, 1-based."""
        if not 1 <= i <= self.nvars:
            raise MetalieError(f"x{i} out of range for {self.nvars} variables")
        e = [0] * self.nvars
        e[i - 1] = 1
        return Poly(self, {tuple(e): self.field.convert(1)})

    @property
    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.gen(i) for i in range(1, self.nvars + 1))

    def monomial(self, exp: Exponent, coeff=1) -> "Poly":
        return Poly.from_dict(self, {tuple(exp): coeff})

    def from_dict(self, terms) -> "Poly":
        return Poly.from_dict(self, terms)

    def parse(self, text: str) -> "Poly":
        from .parsing import parse_poly

        return parse_poly(text, self)

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            self.check(x)
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    def check(self, other: "Poly") -> None:
        if other.ring != self:
            if other.ring.field != self.field:
                raise FieldMismatchError(f"{other.ring.field!r} vs {self.field!r}")
            raise FieldMismatchError(
                f"variable universes differ: {other.ring.nvars} vs {self.nvars}"
            )


def _clean(terms: Dict[Exponent, Scalar], p: int) -> Dict[Exponent, Scalar]:
    if p:
        return {e: c % p for e, c in terms.items() if c % p}
    return {e: c for e, c in terms.items() if c}


class Poly:
    """Immutable sparse polynomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Exponent, Scalar]):
        # trusted constructor: terms must already be canonical
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_dict(cls, ring: PolyRing, terms) -> "Poly":
        conv = ring.field.convert
        out: Dict[Exponent, Scalar] = {}
        for e, c in dict(terms).items():
            e = tuple(e)
            if len(e) != ring.nvars:
                raise MetalieError(f"exponent {e} has wrong length for {ring.nvars} variables")
            if any(x < 0 for x in e):
                raise MetalieError(f"negative exponent {e}")
            out[e] = out.get(e, 0) + conv(c)
        return cls(ring, _clean(out, ring.field.p))

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                self.ring.check(other)
            return other
        if isinstance(other, SCALARS):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, _clean(out, self.ring.field.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        return Poly(self.ring, {e: (-c) % p if p else -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, SCALARS):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, Scalar] = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Poly(self.ring, _clean(out, self.ring.field.p))

    def __rmul__(self, other):
        if isinstance(other, SCALARS):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise MetalieError("polynomial powers need a natural exponent")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = self.ring.field.convert(c)
        if not c:
            return self.ring.zero
        return Poly(self.ring, _clean({e: v * c for e, v in self.terms.items()}, self.ring.field.p))

    def mul_term(self, exp: Exponent, coeff=1) -> "Poly":
        c = self.ring.field.convert(coeff)
        out = {mono_mul(e, exp): v * c for e, v in self.terms.items()}
        return Poly(self.ring, _clean(out, self.ring.field.p))

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.div(1, self.leading_coeff()))

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, SCALARS):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.convert(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, i: int) -> int:
        """Degree in x_i (1-based); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[i - 1] for e in self.terms)

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for e in self.terms:
            used.update(i + 1 for i, x in enumerate(e) if x)
        return tuple(sorted(used))

    def is_linear_form(self) -> bool:
        """Homogeneous of degree one (or zero)."""
        return all(sum(e) == 1 for e in self.terms)

    def items(self) -> Iterator[Tuple[Exponent, Scalar]]:
        """Terms in descending graded lexicographic order."""
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            yield e, self.terms[e]

    def leading_monomial(self) -> Exponent:
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_monomial()]

    def coeff(self, exp: Exponent) -> Scalar:
        return self.terms.get(tuple(exp), self.ring.field.convert(0))

    def linear_coeffs(self) -> Tuple[Scalar, ...]:
        """Coefficients of x1..xn; only meaningful for linear forms."""
        n = self.ring.nvars
        out = []
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            out.append(self.coeff(e))
        return tuple(out)

    # -- substitution -------------------------------------------------------

    def compose(self, images: Sequence["Poly"], ring: PolyRing = None) -> "Poly":
        """Substitute ``x_i -> images[i-1]``; result lives in the images' ring."""
        if len(images) != self.ring.nvars:
            raise MetalieError("compose needs one image per variable")
        if ring is None:
            ring = images[0].ring if images else self.ring
        result = ring.zero
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        for e, c in self.terms.items():
            t = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        conv = self.ring.field.convert
        pt = [conv(v) for v in point]
        total = conv(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(pt, e):
                if k:
                    t = t * v ** k
            total = total + t
        return conv(total) if self.ring.field.p else total

    def extend(self, ring: PolyRing, offset: int = 0) -> "Poly":
        """Embed into a ring with more variables, shifting indices by ``offset``."""
        if ring.field != self.ring.field:
            raise FieldMismatchError("cannot extend across fields")
        n = ring.nvars
        if offset + self.ring.nvars > n:
            raise MetalieError("target ring too small")
        out = {}
        for e, c in self.terms.items():
            full = [0] * n
            full[offset:offset + len(e)] = e
            out[tuple(full)] = c
        return Poly(ring, out)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_monomial(e: Exponent, var: str = "x") -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"{var}{i + 1}")
        elif k > 1:
            parts.append(f"{var}{i + 1}^{k}")
    return "*".join(parts)


def format_signed_terms(pieces: Iterable[Tuple[Scalar, str]], field: Field) -> str:
    """Join (coefficient, basis-name) pairs into ``a*m1 - b*m2 + ...``.

    An empty basis name stands for the constant 1.
    """
    out = []
    for c, name in pieces:
        neg = (c < 0) if field.p == 0 else False
        mag = -c if neg else c
        if not name:
            body = field.fmt(mag)
        elif mag == 1:
            body = name
        else:
            body = f"{field.fmt(mag)}*{name}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def format_poly(f: Poly) -> str:
    return format_signed_terms(((c, format_monomial(e)) for e, c in f.items()), f.ring.field)


# ---------------------------------------------------------------------------
# the ideal Delta and the local ring R_Delta


def in_delta(f: Poly) -> bool:
    """True iff f lies in the maximal ideal generated by the variables."""
    return not f.constant_term()


@lru_cache(maxsize=None)
def _sympy_ring(nvars: int):
    from sympy.polys.domains import QQ as SQQ
    from sympy.polys.rings import ring

    R, *_ = ring([f"x{i}" for i in range(1, nvars + 1)], SQQ)
    return R


def _to_sympy(f: Poly):
    from sympy.polys.domains import QQ as SQQ

    R = _sympy_ring(f.ring.nvars)
    return R.from_dict({e: SQQ(int(c.numerator), int(c.denominator)) for e, c in f.terms.items()})


def _from_sympy(g, ring: PolyRing) -> Poly:
    return Poly(ring, {tuple(e): mpq(int(c.numerator), int(c.denominator)) for e, c in g.items()})


def poly_cofactors(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """(gcd, a/gcd, b/gcd) over Q."""
    h, ca, cb = _to_sympy(a).cofactors(_to_sympy(b))
    return _from_sympy(h, a.ring), _from_sympy(ca, a.ring), _from_sympy(cb, a.ring)


def exact_quotient(a: Poly, b: Poly) -> Optional[Poly]:
    """a / b when b divides a exactly, else None (leading-term division in grlex)."""
    a.ring.check(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    field, p = a.ring.field, a.ring.field.p
    lm, lc = b.leading_monomial(), b.leading_coeff()
    rem, quot = dict(a.terms), {}
    while rem:
        top = max(rem, key=grlex_key)
        if not mono_divides(lm, top):
            return None
        mono, c = mono_div(top, lm), field.div(rem[top], lc)
        quot[mono] = c
        for e, d in b.terms.items():
            e2 = mono_mul(e, mono)
            w = rem.get(e2, 0) - c * d
            if p:
                w %= p
            if w:
                rem[e2] = w
            else:
                rem.pop(e2, None)
    return Poly(a.ring, quot)


class LocalFrac:
    """Element num/den of R_Delta with den(0) normalised to 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, *, reduce: bool = True):
        if den is None:
            den = num.ring.one
        num.ring.check(den)
        c0 = den.constant_term()
        if not c0:
            raise NotAUnitError(f"denominator {den} lies in Delta; not a unit in R_Delta")
        field = num.ring.field
        if reduce and field.is_rational and num.ring.nvars and not den.is_constant() and num:
            _, num, den = poly_cofactors(num, den)
            c0 = den.constant_term()
        if c0 != 1:
            inv = field.div(1, c0)
            num, den = num.scale(inv), den.scale(inv)
        if not num:
            den = num.ring.one
        self.num = num
        self.den = den

    @classmethod
    def of(cls, x, ring: PolyRing = None) -> "LocalFrac":
        if isinstance(x, LocalFrac):
            return x
        if isinstance(x, Poly):
            return cls(x, x.ring.one, reduce=False)
        if ring is None:
            raise MetalieError("scalar needs a ring to become a fraction")
        return cls(ring.const(x), ring.one, reduce=False)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, LocalFrac):
            self.ring.check(other.num)
            return other
        if isinstance(other, Poly):
            self.ring.check(other)
            return LocalFrac(other, other.ring.one, reduce=False)
        if isinstance(other, SCALARS):
            return LocalFrac(self.ring.const(other), self.ring.one, reduce=False)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return LocalFrac(self.num + other.num, self.den)
        return LocalFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return LocalFrac(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LocalFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return not in_delta(self.num)

    def inverse(self) -> "LocalFrac":
        if in_delta(self.num):
            raise NotAUnitError(f"{self} is not a unit in R_Delta")
        return LocalFrac(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # equal fractions share a reduced form only over Q
        if self.ring.field.is_rational:
            return hash((self.num, self.den))
        return hash(self.ring)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.is_constant() or exact_quotient(self.num, self.den) is not None

    def to_poly(self) -> Poly:
        q = exact_quotient(self.num, self.den)
        if q is None:
            raise MetalieError(f"{self} is not a polynomial")
        return q

    def in_delta(self) -> bool:
        return in_delta(self.num)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self):
        return f"LocalFrac({self})"
