"""Generalized Ratliff-Rush ideals and closures with certified stabilization.

The central objects: the torsion submodule H0_I(M), the ideal
r(I^n, M) = union_k (I^{n+k} M : I^k M), the module closure
(I^{n+k} M :_M I^k), their filtration, the involution check, principal
reductions, and the integral-closure constructions.

Every chain value carries a certificate naming how stabilization was
established:

* ``reduction-certified(x, r)`` -- a verified principal reduction
  I^{r+1} = x * I^r lets a single colon at offset r give the stable value.
* ``rho-certified(k)`` -- a superficial-element postulation bound certifies
  that offsets >= k are stable.
* ``heuristic(w)`` -- w consecutive equal chain terms, no proof.

When H0_I(M) != 0 the computation silently moves to N = M/H0 (where the
grade is positive and the certified routes apply) by adding H0 to every
colon target; the answers for M and N agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .errors import HorizonError, InternalCheckError, ValidationError
from .rings import RingElement, TruncatedAlgebra, format_element
from .submodules import (FreeModuleSpec, Submodule, colon_ideal,
                         colon_submodule, equality, full_module, ideal_power,
                         ideal_span, ideal_times_module, intersection,
                         is_subset, membership, minimal_generators, module_sum,
                         quotient_length, span, unit_ideal, vec_is_zero,
                         zero_module)


@dataclass(frozen=True)
class ReductionData:
    x: RingElement
    r: int

    def encode(self):
        ring = self.x.ring
        return {"x": [[m if isinstance(m, int) else list(m), ring.field.encode(c)]
                      for m, c in self.x.sorted_terms()],
                "r": self.r}


@dataclass(frozen=True)
class Certificate:
    kind: str                      # reduction-certified | rho-certified | heuristic | torsion
    offset: int | None = None      # colon offset the value was evaluated at
    x: RingElement | None = None   # reduction or superficial element
    window: int | None = None      # heuristic: number of consecutive equal terms
    detail: str = ""

    def encode(self):
        out = {"kind": self.kind}
        if self.offset is not None:
            out["offset"] = self.offset
        if self.x is not None:
            out["element"] = format_element(self.x)
        if self.window is not None:
            out["window"] = self.window
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ChainResult:
    value: Submodule
    stabilized_at: int
    certificate: Certificate
    horizon: int


@dataclass
class FiltrationReport:
    terms: list                    # r(I^n, M) for n = 1..n_max
    q: Submodule                   # (H0_I(M) : M)
    recursion_onset: int | None    # least n with r(I^{m+1},M) = I r(I^m,M) + q onward
    certificate: Certificate
    descending: bool
    multiplicative: bool


@dataclass
class InvolutionReport:
    fixpoint: bool
    value: Submodule
    recomputed: Submodule
    first_difference_degree: int | None = None


@dataclass
class WitnessReport:
    module: Submodule
    degree: int                    # degree of the monic integral equation
    verified: bool


def h0(I: Submodule, M: Submodule) -> Submodule:
    """I-torsion submodule of M: the stable value of (0 :_M I^k).

    One repeated term proves stability, since (0 : I^{k+1}) = ((0 : I^k) : I).
    """
    _require_ideal(I)
    zero = zero_module(M.ambient, M.valid_through)
    try:
        prev = colon_submodule(zero, I, within=M)
        k = 2
        while True:
            cur = colon_submodule(zero, ideal_power(I, k), within=M)
            if equality(cur, prev):
                return cur
            prev = cur
            k += 1
    except HorizonError:
        raise HorizonError("torsion chain exhausted the horizon before stabilizing")


def find_principal_reduction(I: Submodule, r_max: int = 8, trials: int = 16,
                             seed: int = 0) -> ReductionData | None:
    """Search for x with I^{r+1} = x I^r, r <= r_max minimal.

    Candidates: the minimal-degree minimal generators in canonical order,
    then the extreme combination (first + last of those), then seeded-random
    two-term field combinations.  Returns None when nothing verifies, e.g.
    when the analytic spread exceeds one.
    """
    _require_ideal(I)
    ring = I.ring
    gens = [g[0] for g in minimal_generators(I)]
    if not gens:
        return None
    mindeg = min(g.degree() for g in gens)
    tier = [g for g in gens if g.degree() == mindeg]
    candidates = list(tier)
    if len(tier) >= 2:
        candidates.append(tier[0] + tier[-1])
        rng = Random(seed)
        for _ in range(trials):
            a, b = rng.sample(range(len(tier)), 2)
            if ring.field.kind == "prime-field":
                c1 = rng.randrange(1, ring.field.p)
                c2 = rng.randrange(1, ring.field.p)
            else:
                c1, c2 = Fraction(rng.randrange(1, 100)), Fraction(rng.randrange(1, 100))
            candidates.append(tier[a].scale(c1) + tier[b].scale(c2))

    powers = [unit_ideal(ring, I.valid_through), I]

    def power(k):
        while len(powers) <= k:
            try:
                powers.append(ideal_times_module(I, powers[-1]))
            except HorizonError:
                return None
        return powers[k]

    seen = set()
    for x in candidates:
        key = tuple(sorted((m, str(c)) for m, c in x.terms.items()))
        if key in seen or x.is_zero():
            continue
        seen.add(key)
        xi = ideal_span(ring, [x], I.valid_through)
        for k in range(0, r_max + 1):
            hi = power(k + 1)
            lo = power(k)
            if hi is None or lo is None:
                break
            try:
                if equality(hi, ideal_times_module(xi, lo)):
                    return ReductionData(x, k)
            except HorizonError:
                break
    return None


def _require_ideal(I: Submodule):
    if I.ambient.rank != 1:
        raise ValidationError("expected an ideal (rank-1 submodule)")


def _offset_value_ideal(I: Submodule, M: Submodule, torsion: Submodule,
                        n: int, k: int) -> Submodule:
    """(I^{n+k} M + H0 : I^k M) -- equals r(I^n, M) for certified offsets k."""
    target = ideal_times_module(ideal_power(I, n + k), M)
    if not torsion.is_zero():
        target = module_sum(target, torsion)
    lower = ideal_times_module(ideal_power(I, k), M)
    return colon_ideal(target, lower)


def _offset_value_module(I: Submodule, M: Submodule, torsion: Submodule,
                         n: int, k: int) -> Submodule:
    """(I^{n+k} M + H0 :_M I^k) -- the Ratliff-Rush closure of I^n M at offset k."""
    target = ideal_times_module(ideal_power(I, n + k), M)
    if not torsion.is_zero():
        target = module_sum(target, torsion)
    return colon_submodule(target, ideal_power(I, k), within=M)


def _stable_chain(value_at, window: int):
    """Iterate offsets until ``window`` consecutive equal values appear."""
    values = [(1, value_at(1))]
    k = 2
    while True:
        values.append((k, value_at(k)))
        if equality(values[-1][1], values[-2][1]):
            run = 2
            i = len(values) - 2
            while i > 0 and equality(values[i][1], values[i - 1][1]):
                run += 1
                i -= 1
            if run >= window:
                return values[i][1], values[i][0], run
        k += 1


def _certified(I: Submodule, M: Submodule, n: int, value_at, *, r_max: int,
               trials: int, seed: int, window: int,
               torsion: Submodule) -> ChainResult:
    """Shared certification ladder for rr_ideal / rr_module."""
    red = find_principal_reduction(I, r_max=r_max, trials=trials, seed=seed)
    if red is not None:
        k = max(red.r, 1)
        value = value_at(k)
        cert = Certificate("reduction-certified", offset=k, x=red.x,
                           detail=f"I^{red.r + 1} = x*I^{red.r} verified")
        return ChainResult(value, k, cert, value.valid_through)
    from . import hilbert as _hilbert
    try:
        bound, sup = _hilbert.rho_offset_bound(I, M, torsion=torsion,
                                               trials=trials, seed=seed)
        value = value_at(bound)
        cert = Certificate("rho-certified", offset=bound, x=sup.x,
                           detail=f"postulation bound via superficial element, "
                                  f"method {sup.method}")
        return ChainResult(value, bound, cert, value.valid_through)
    except (_hilbert.CertificationUnavailable, HorizonError):
        pass
    value, at, run = _stable_chain(value_at, window)
    cert = Certificate("heuristic", offset=at, window=run)
    return ChainResult(value, at, cert, value.valid_through)


def rr_ideal(I: Submodule, M: Submodule, n: int = 1, *, r_max: int = 8,
             trials: int = 16, seed: int = 0, window: int = 3) -> ChainResult:
    """r(I^n, M): the stable value of the ascending chain (I^{n+k}M : I^kM)."""
    _require_ideal(I)
    if n < 1:
        raise ValidationError("rr_ideal expects n >= 1")
    if I.is_zero():
        raise ValidationError("rr_ideal expects a nonzero ideal")
    if I.contains_unit():
        out = unit_ideal(I.ring, I.valid_through)
        return ChainResult(out, 0, Certificate("torsion", detail="unit ideal input"),
                           out.valid_through)
    tor = h0(I, M)
    if equality(tor, M):
        # I is nilpotent on M, so some I^k M = 0 and the chain hits the unit ideal
        out = unit_ideal(I.ring, I.valid_through)
        return ChainResult(out, 0,
                           Certificate("torsion", detail="H0_I(M) = M"),
                           out.valid_through)

    def value_at(k):
        return _offset_value_ideal(I, M, tor, n, k)

    return _certified(I, M, n, value_at, r_max=r_max, trials=trials, seed=seed,
                      window=window, torsion=tor)


def rr_module(I: Submodule, M: Submodule, n: int = 1, *, r_max: int = 8,
              trials: int = 16, seed: int = 0, window: int = 3) -> ChainResult:
    """The Ratliff-Rush closure of I^n M in M: stable (I^{n+k}M :_M I^k)."""
    _require_ideal(I)
    if n < 1:
        raise ValidationError("rr_module expects n >= 1")
    if I.is_zero():
        raise ValidationError("rr_module expects a nonzero ideal")
    if I.contains_unit():
        value = Submodule(M.ambient, M.gens, M.basis, M.valid_through)
        return ChainResult(value, 0, Certificate("torsion", detail="unit ideal input"),
                           M.valid_through)
    tor = h0(I, M)
    if equality(tor, M):
        value = Submodule(M.ambient, M.gens, M.basis, M.valid_through)
        return ChainResult(value, 0, Certificate("torsion", detail="H0_I(M) = M"),
                           M.valid_through)

    def value_at(k):
        return _offset_value_module(I, M, tor, n, k)

    return _certified(I, M, n, value_at, r_max=r_max, trials=trials, seed=seed,
                      window=window, torsion=tor)


def rr_filtration(I: Submodule, M: Submodule, n_max: int, *, r_max: int = 8,
                  trials: int = 16, seed: int = 0,
                  window: int = 3) -> FiltrationReport:
    """The filtration {r(I^n, M)} for n = 1..n_max with its structural laws.

    Also computes q = (H0_I(M) : M) and the least onset of the recursion
    r(I^{n+1}, M) = I * r(I^n, M) + q, and verifies that the terms descend
    and multiply into each other (an I-filtration of ideals).
    """
    if n_max < 2:
        raise ValidationError("rr_filtration expects n_max >= 2")
    tor = h0(I, M)
    q = colon_ideal(tor, M) if not tor.is_zero() else colon_ideal(
        zero_module(M.ambient, M.valid_through), M)
    terms = []
    certificate = None
    for n in range(1, n_max + 1):
        res = rr_ideal(I, M, n, r_max=r_max, trials=trials, seed=seed,
                       window=window)
        terms.append(res.value)
        if certificate is None:
            certificate = res.certificate

    descending = all(is_subset(terms[i + 1], terms[i]) for i in range(len(terms) - 1))
    if not descending:
        raise InternalCheckError("filtration terms failed to descend")

    multiplicative = True
    for a in range(1, n_max + 1):
        for b in range(a, n_max - a + 1):
            prod = ideal_times_module(terms[a - 1], terms[b - 1])
            if not is_subset(prod, terms[a + b - 1]):
                multiplicative = False
    if not multiplicative:
        raise InternalCheckError("filtration multiplicativity failed")

    onset = None
    for start in range(1, n_max):
        ok = True
        for m in range(start, n_max):
            rhs = module_sum(ideal_times_module(I, terms[m - 1]), q)
            if not equality(terms[m], rhs):
                ok = False
                break
        if ok:
            onset = start
            break
    return FiltrationReport(terms, q, onset, certificate, descending,
                            multiplicative)


def verify_involution(I: Submodule, M: Submodule, *, r_max: int = 8,
                      trials: int = 16, seed: int = 0,
                      window: int = 3) -> InvolutionReport:
    """Check r(r(I,M), M) = r(I,M); failure indicates an engine bug or a
    horizon shortfall, reported with the first differing degree."""
    first = rr_ideal(I, M, r_max=r_max, trials=trials, seed=seed, window=window)
    J = Submodule(first.value.ambient, tuple(minimal_generators(first.value)),
                  first.value.basis, first.value.valid_through)
    second = rr_ideal(J, M, r_max=r_max, trials=trials, seed=seed, window=window)
    if equality(first.value, second.value):
        return InvolutionReport(True, first.value, second.value)
    d = min(first.value.valid_through, second.value.valid_through)
    for deg in range(d + 1):
        if first.value.basis.rows_up_to(deg) != second.value.basis.rows_up_to(deg):
            return InvolutionReport(False, first.value, second.value, deg)
    return InvolutionReport(False, first.value, second.value, None)


def integral_equation_degree(I: Submodule, z: RingElement, n_max: int = 8) -> int:
    """Least j with z^j in I*z^{j-1} + I^2*z^{j-2} + ... + I^j (monic witness)."""
    _require_ideal(I)
    ring = I.ring
    spec = I.ambient
    if membership((z,), I):
        return 1
    pows = [ring.one_element(), z]
    for j in range(2, n_max + 1):
        try:
            pows.append(pows[-1] * z)
        except HorizonError:
            raise HorizonError(
                f"z^{j} escapes the truncation before an integral equation was found")
        total = None
        for i in range(1, j + 1):
            part = ideal_times_module(ideal_power(I, i),
                                      span(spec, [(pows[j - i],)], I.valid_through))
            total = part if total is None else module_sum(total, part)
        if membership((pows[j],), total):
            return j
    raise ValidationError(
        f"no monic integral equation of degree <= {n_max} found; "
        "z may not be integral over I")


def closure_witness_module(I: Submodule, z: RingElement, n: int | None = None,
                           n_max: int = 8) -> WitnessReport:
    """N = <z, I>^{n-1} with z*N inside I*N, witnessing z in r(I, N).

    When n is omitted the minimal monic integral-equation degree is found by
    bounded search.  The containment z*N <= I*N is always verified; failure
    signals a wrong n or a non-integral z.
    """
    _require_ideal(I)
    ring = I.ring
    if n is None:
        n = integral_equation_degree(I, z, n_max)
    if n < 1:
        raise ValidationError("integral equation degree must be >= 1")
    zI = module_sum(ideal_span(ring, [z], I.valid_through), I)
    zI = Submodule(zI.ambient, tuple(minimal_generators(zI)), zI.basis,
                   zI.valid_through)
    N = ideal_power(zI, n - 1)
    IN = ideal_times_module(I, N)
    for g in minimal_generators(N):
        try:
            prod = tuple(z * comp for comp in g)
        except HorizonError:
            raise HorizonError("witness verification escaped the truncation")
        if not membership(prod, IN):
            raise ValidationError(
                f"z*N is not inside I*N: z is not integral of degree {n} over I")
    return WitnessReport(N, n, True)


# -- integral closure ----------------------------------------------------------

def _monomial_exponents(I: Submodule):
    out = []
    for g in I.gens:
        el = g[0]
        if len(el.terms) != 1:
            raise ValidationError(
                "integral closure supports monomial-generated ideals only")
        mono, c = next(iter(el.terms.items()))
        out.append(mono)
    return out


def _in_newton_polyhedron(points, target) -> bool:
    """Exact LP feasibility: target >= sum(l_i * p_i), l >= 0, sum l = 1.

    Two-phase simplex with Bland's rule over Fractions; sizes here are tiny
    (#points x #variables), so simplicity beats cleverness.
    """
    npts = len(points)
    nvars = len(target)
    # columns: l_1..l_npts, s_1..s_nvars, a_1..a_{nvars+1}; rows: nvars + 1
    ncols = npts + nvars + nvars + 1
    rows = []
    rhs = []
    for j in range(nvars):
        row = [Fraction(points[i][j]) for i in range(npts)]
        row += [Fraction(1) if k == j else Fraction(0) for k in range(nvars)]
        rows.append(row)
        rhs.append(Fraction(target[j]))
    rows.append([Fraction(1)] * npts + [Fraction(0)] * nvars)
    rhs.append(Fraction(1))
    nrows = nvars + 1
    # artificial columns
    for r in range(nrows):
        for k in range(nrows):
            rows[r].append(Fraction(1) if k == r else Fraction(0))
    basis = [npts + nvars + r for r in range(nrows)]
    # phase-1 objective: minimize sum of artificials
    cost = [Fraction(0)] * ncols
    for k in range(nrows):
        cost[npts + nvars + k] = Fraction(1)

    def reduced_costs():
        # c_j - c_B . B^{-1} A_j with the tableau kept in solved form
        out = list(cost)
        for r, b in enumerate(basis):
            cb = cost[b]
            if cb:
                for j in range(ncols):
                    out[j] -= cb * rows[r][j]
        return out

    # put tableau in solved form wrt artificial basis (already identity)
    for _ in range(200 * ncols):
        rc = reduced_costs()
        enter = next((j for j in range(ncols) if rc[j] < 0), None)
        if enter is None:
            break
        # ratio test, Bland
        leave, best = None, None
        for r in range(nrows):
            a = rows[r][enter]
            if a > 0:
                ratio = rhs[r] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            break  # unbounded: cannot happen in phase 1
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        rhs[leave] = rhs[leave] / piv
        for r in range(nrows):
            if r != leave and rows[r][enter]:
                f = rows[r][enter]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[leave])]
                rhs[r] = rhs[r] - f * rhs[leave]
        basis[leave] = enter
    value = sum(rhs[r] for r in range(nrows) if basis[r] >= npts + nvars)
    return value == 0


def integral_closure(I: Submodule) -> Submodule:
    """Integral closure of a monomial-generated ideal, degreewise up to the
    horizon: Newton-polyhedron membership in the monomial-quotient backend,
    the valuation criterion (e in S, e >= min generator) in the semigroup one."""
    _require_ideal(I)
    ring = I.ring
    exps = _monomial_exponents(I)
    if not exps:
        raise ValidationError("integral closure of the zero ideal is undefined here")
    horizon = I.valid_through
    if ring.backend == "numerical-semigroup":
        emin = min(exps)
        gens = []
        found = []
        for e in sorted(m for m in ring._members if emin <= m <= horizon):
            if any(e - g in ring._members for g in found):
                continue
            found.append(e)
            gens.append((ring.monomial_element(e),))
        return span(I.ambient, gens, horizon)
    gens = []
    found = []
    for mono in ring.monomials_up_to(horizon):
        if any(all(mono[i] >= f[i] for i in range(len(mono))) for f in found):
            continue
        if _in_newton_polyhedron(exps, mono):
            found.append(mono)
            gens.append((ring.monomial_element(mono),))
    return span(I.ambient, gens, horizon)


def check_in_closure_set(I: Submodule, J: Submodule, *, r_max: int = 8,
                         trials: int = 16, seed: int = 0,
                         window: int = 3) -> bool:
    """Membership of J in C(I) = { regular ideals J : r(I, J) = integral closure of I }."""
    value = rr_ideal(I, J, r_max=r_max, trials=trials, seed=seed, window=window)
    closure = integral_closure(I)
    return equality(value.value, closure)
