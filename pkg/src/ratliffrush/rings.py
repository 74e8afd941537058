"""Degree-truncated graded ring backends with explicit monomial bases.

Two backends cover every ring used downstream:

* ``monomial-quotient`` -- k[x_1..x_v]/(monomials), weighted grading; the
  basis in each degree is the set of standard monomials (exponent tuples not
  divisible by any quotient monomial).
* ``numerical-semigroup`` -- k[t^a : a in S] for a numerical semigroup S;
  the basis of degree d is {t^d} when d lies in S, empty otherwise.

Monomials are exponent tuples (monomial-quotient) or plain ints (semigroup).
Every product is a basis monomial, a true zero (killed by the quotient), or
``OVERFLOW`` when it would exceed the truncation degree D.  Overflow is an
error condition, never a silent truncation: dropping terms would corrupt the
colon computations built on top of this kernel.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import HorizonError, ValidationError
from .fields import FieldSpec


class _Overflow:
    __slots__ = ()

    def __repr__(self):  # pragma: no cover
        return "OVERFLOW"


#: Sentinel returned by the multiplication rule for products beyond degree D.
OVERFLOW = _Overflow()


def recommend_truncation(maxdeg_ideal: int, maxdeg_module: int = 0,
                         n_max: int = 1, r: int = 2) -> int:
    """Truncation degree at which a depth ``n_max`` filtration with expected
    reduction number ``r`` keeps all its colon windows inside the horizon."""
    return (n_max + r + 2) * maxdeg_ideal + maxdeg_module + 8


@dataclass(frozen=True)
class RingPresentation:
    backend: str
    variables: tuple = ("t",)
    weights: tuple = ()
    quotient_monomials: tuple = ()
    semigroup_generators: tuple = ()
    field: FieldSpec = field(default_factory=FieldSpec)
    truncation: int = 0

    def __post_init__(self):
        if self.backend not in ("monomial-quotient", "numerical-semigroup"):
            raise ValidationError(f"unknown backend {self.backend!r}")
        if self.truncation < 1:
            raise ValidationError("truncation degree must be >= 1")
        if self.backend == "monomial-quotient":
            if not self.variables:
                raise ValidationError("monomial-quotient ring needs variables")
            weights = self.weights or tuple(1 for _ in self.variables)
            object.__setattr__(self, "weights", tuple(weights))
            if len(self.weights) != len(self.variables):
                raise ValidationError("one weight per variable required")
            if any(w < 1 for w in self.weights):
                raise ValidationError("weights must be positive")
            if self.truncation < max(self.weights):
                raise ValidationError("truncation below the largest variable weight")
            for q in self.quotient_monomials:
                if len(q) != len(self.variables) or any(e < 0 for e in q):
                    raise ValidationError(f"bad quotient exponent vector {q!r}")
        else:
            gens = tuple(sorted(self.semigroup_generators))
            object.__setattr__(self, "semigroup_generators", gens)
            if not gens or any(g < 1 for g in gens):
                raise ValidationError("semigroup generators must be positive integers")
            if math.gcd(*gens) != 1:
                raise ValidationError("semigroup generators must have gcd 1")
            if self.truncation < max(gens):
                raise ValidationError("truncation below the largest semigroup generator")


class TruncatedAlgebra:
    """A ring backend with its basis enumerated once, degree by degree.

    Instances are immutable after construction and safe to share between
    threads; no operation below mutates a built ring.
    """

    def __init__(self, presentation: RingPresentation, max_basis_size: int = 2_000_000):
        self.presentation = presentation
        self.field = presentation.field
        self.truncation = presentation.truncation
        self.backend = presentation.backend
        self._by_degree: dict[int, list] = {}
        if self.backend == "numerical-semigroup":
            self._build_semigroup()
        else:
            self._build_monomial(max_basis_size)
        self._mono_rank = {}
        for d in range(self.truncation + 1):
            for i, m in enumerate(self._by_degree.get(d, ())):
                self._mono_rank[m] = (d, -i)

    # -- construction -------------------------------------------------------

    def _build_semigroup(self):
        gens = self.presentation.semigroup_generators
        D = self.truncation
        member = bytearray(D + 1)
        member[0] = 1
        for d in range(1, D + 1):
            member[d] = any(d >= g and member[d - g] for g in gens)
        self._members = set(i for i in range(D + 1) if member[i])
        for d in self._members:
            self._by_degree[d] = [d]

    def _build_monomial(self, max_basis_size: int):
        pres = self.presentation
        D = pres.truncation
        weights = pres.weights
        nvars = len(pres.variables)
        quotient = [tuple(q) for q in pres.quotient_monomials]
        standard = set()
        count = 0

        def divisible(e):
            return any(all(e[i] >= q[i] for i in range(nvars)) for q in quotient)

        # depth-first enumeration of exponent vectors with weighted degree <= D
        exps = [0] * nvars
        def rec(pos, deg):
            nonlocal count
            if pos == nvars:
                e = tuple(exps)
                if not divisible(e):
                    standard.add(e)
                    count += 1
                    if count > max_basis_size:
                        raise ValidationError(
                            "basis exceeds the memory budget; lower the truncation")
                return
            w = weights[pos]
            e = 0
            while deg + e * w <= D:
                exps[pos] = e
                rec(pos + 1, deg + e * w)
                e += 1
            exps[pos] = 0

        rec(0, 0)
        self._standard = standard
        for e in standard:
            d = sum(ei * wi for ei, wi in zip(e, weights))
            self._by_degree.setdefault(d, []).append(e)
        # within a degree: descending graded reverse-lexicographic, leading first
        for d in self._by_degree:
            self._by_degree[d].sort(key=self._grevlex_tail, reverse=True)

    @staticmethod
    def _grevlex_tail(e):
        return tuple(-x for x in reversed(e))

    # -- basis queries -------------------------------------------------------

    @property
    def one(self):
        if self.backend == "numerical-semigroup":
            return 0
        return (0,) * len(self.presentation.variables)

    def degree(self, mono) -> int:
        if self.backend == "numerical-semigroup":
            return mono
        return sum(e * w for e, w in zip(mono, self.presentation.weights))

    def monomials_of_degree(self, d: int) -> list:
        if d < 0 or d > self.truncation:
            return []
        return self._by_degree.get(d, [])

    def monomials_up_to(self, d: int):
        top = min(d, self.truncation)
        for deg in range(top + 1):
            yield from self._by_degree.get(deg, ())

    def dimension(self, d: int) -> int:
        return len(self._by_degree.get(d, ()))

    def contains_monomial(self, mono) -> bool:
        if self.backend == "numerical-semigroup":
            return mono in self._members
        return mono in self._standard

    def mono_key(self, mono):
        """Sort key: larger key = larger monomial in the fixed global order."""
        return self._mono_rank[mono]

    # -- multiplication ------------------------------------------------------

    def mono_mul(self, a, b):
        """Product of two basis monomials: a basis monomial, None (true zero
        in the quotient), or OVERFLOW (degree beyond the truncation)."""
        if self.backend == "numerical-semigroup":
            s = a + b
            return s if s <= self.truncation else OVERFLOW
        e = tuple(x + y for x, y in zip(a, b))
        if e in self._standard:
            return e
        d = sum(x * w for x, w in zip(e, self.presentation.weights))
        if d > self.truncation:
            return OVERFLOW
        return None

    # -- elements -------------------------------------------------------------

    def element(self, terms) -> "RingElement":
        return RingElement(self, terms)

    def zero_element(self) -> "RingElement":
        return RingElement(self, {})

    def one_element(self) -> "RingElement":
        return RingElement(self, {self.one: self.field.one})

    def monomial_element(self, mono, coeff=None) -> "RingElement":
        if not self.contains_monomial(mono):
            raise ValidationError(f"{mono!r} is not a basis monomial of this ring")
        c = self.field.one if coeff is None else self.field.normalize(coeff)
        return RingElement(self, {mono: c})

    def __repr__(self):  # pragma: no cover
        p = self.presentation
        if self.backend == "numerical-semigroup":
            return f"k[t^s : s in <{','.join(map(str, p.semigroup_generators))}>] (D={p.truncation})"
        return f"k[{','.join(p.variables)}]/(...) (D={p.truncation})"


def build_ring(presentation: RingPresentation, max_basis_size: int = 2_000_000) -> TruncatedAlgebra:
    """Construct the truncated algebra for a validated presentation."""
    return TruncatedAlgebra(presentation, max_basis_size=max_basis_size)


class RingElement:
    """A finite field-coefficient combination of basis monomials."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: TruncatedAlgebra, terms: dict):
        self.ring = ring
        f = ring.field
        clean = {}
        for m, c in terms.items():
            c = f.normalize(c)
            if c != f.zero:
                if not ring.contains_monomial(m):
                    raise ValidationError(f"{m!r} is not a basis monomial")
                clean[m] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Largest weighted degree among the terms; None for the zero element."""
        if not self.terms:
            return None
        return max(self.ring.degree(m) for m in self.terms)

    def homogeneous_degree(self):
        """The common degree of all terms, or None if mixed or zero."""
        degs = {self.ring.degree(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        f = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(out.get(m, f.zero), c)
            if s == f.zero:
                out.pop(m, None)
            else:
                out[m] = s
        return RingElement(self.ring, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(self.ring.field.neg(self.ring.field.one))

    def scale(self, c) -> "RingElement":
        f = self.ring.field
        c = f.normalize(c)
        if c == f.zero:
            return RingElement(self.ring, {})
        return RingElement(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        return element_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, RingElement) and self.ring is other.ring \
            and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        if self.ring is not other.ring:
            raise ValidationError("elements live in different rings")

    def sorted_terms(self):
        """Terms in descending monomial order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: self.ring.mono_key(kv[0]),
                      reverse=True)

    def __repr__(self):
        return format_element(self)


def element_mul(a: RingElement, b: RingElement) -> RingElement:
    """Bilinear extension of the monomial rule; exact coefficients.

    Raises HorizonError when any term pair lands beyond the truncation: the
    caller must rebuild with a larger D rather than accept a corrupted value.
    """
    a._check(b)
    ring = a.ring
    f = ring.field
    out: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = ring.mono_mul(m1, m2)
            if m is OVERFLOW:
                raise HorizonError(
                    f"product degree {ring.degree(m1) + ring.degree(m2)} exceeds "
                    f"truncation {ring.truncation}")
            if m is None:
                continue
            s = f.add(out.get(m, f.zero), f.mul(c1, c2))
            if s == f.zero:
                out.pop(m, None)
            else:
                out[m] = s
    return RingElement(ring, out)


# -- monomial / polynomial string grammar -------------------------------------
#
#   polynomial := [+-]? term ([+-] term)*
#   term       := integer | [integer '*'] factor ('*' factor)*
#   factor     := name ['^' integer]
#
# Whitespace is ignored.  Names must be declared ring variables.

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9']*|\^|\*|\+|\-)")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValidationError(f"bad character at position {pos} in {text!r}")
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


def parse_element(ring: TruncatedAlgebra, text: str) -> RingElement:
    """Parse a polynomial string like ``x^2*y^21`` or ``x^22+y^22`` or ``3*t^4``."""
    if ring.backend == "numerical-semigroup":
        names = {"t": 0}
        nvars = 1
    else:
        names = {v: i for i, v in enumerate(ring.presentation.variables)}
        nvars = len(names)
    tokens = _tokenize(text)
    if not tokens:
        raise ValidationError(f"empty element string {text!r}")
    f = ring.field
    terms: dict = {}
    i = 0

    def take(kind=None):
        nonlocal i
        if i >= len(tokens):
            raise ValidationError(f"unexpected end of element string {text!r}")
        tok, at = tokens[i]
        i += 1
        return tok, at

    while i < len(tokens):
        sign = f.one
        tok, at = tokens[i]
        if tok in "+-":
            if tok == "-":
                sign = f.neg(f.one)
            i += 1
        coeff = f.one
        exps = [0] * nvars
        saw_factor = False
        while True:
            tok, at = take()
            if tok.isdigit():
                coeff = f.mul(coeff, f.normalize(int(tok)))
            else:
                if tok not in names:
                    raise ValidationError(
                        f"unknown variable {tok!r} at position {at} in {text!r}")
                exp = 1
                if i < len(tokens) and tokens[i][0] == "^":
                    i += 1
                    etok, eat = take()
                    if not etok.isdigit():
                        raise ValidationError(
                            f"bad exponent at position {eat} in {text!r}")
                    exp = int(etok)
                exps[names[tok]] += exp
                saw_factor = True
            if i < len(tokens) and tokens[i][0] == "*":
                i += 1
                continue
            break
        if ring.backend == "numerical-semigroup":
            mono = exps[0]
            if saw_factor and not ring.contains_monomial(mono):
                raise ValidationError(
                    f"t^{mono} is not in the semigroup (or beyond truncation)")
        else:
            mono = tuple(exps)
            if not ring.contains_monomial(mono):
                raise ValidationError(
                    f"{text!r}: monomial {mono} is not standard (or beyond truncation)")
        c = f.mul(sign, coeff)
        prev = terms.get(mono, f.zero)
        s = f.add(prev, c)
        if s == f.zero:
            terms.pop(mono, None)
        else:
            terms[mono] = s
    return RingElement(ring, terms)


def format_monomial(ring: TruncatedAlgebra, mono) -> str:
    if ring.backend == "numerical-semigroup":
        return "1" if mono == 0 else ("t" if mono == 1 else f"t^{mono}")
    parts = []
    for name, e in zip(ring.presentation.variables, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_element(el: RingElement) -> str:
    if el.is_zero():
        return "0"
    f = el.ring.field
    parts = []
    for m, c in el.sorted_terms():
        s = format_monomial(el.ring, m)
        if c != f.one:
            s = f"{c}*{s}" if s != "1" else f"{c}"
        parts.append(s)
    return " + ".join(parts)
