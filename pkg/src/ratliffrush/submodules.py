"""Finitely generated submodules of shifted free modules as truncated subspaces.

A submodule N of F = R(s_1) + ... + R(s_r) is stored as the reduced row
echelon basis of the span of all products (basis monomial) * (generator)
whose degree stays under a validity horizon.  Coordinates of F are pairs
(component, monomial) ordered with higher degree first, so a row's pivot is
its leading term and the rows with pivot degree <= d are exactly the reduced
echelon basis of the degree-filtered piece N_{<=d}.  That makes equality of
submodules a literal dictionary comparison and keeps every operation --
sums, products, colons, intersections, lengths -- inside exact sparse
Gaussian elimination over the coefficient field.

For graded generators the filtered pieces coincide with the graded pieces.
Generators are rejected when they mix a degree-0 term with positive-degree
terms: for such inputs the graded computation is not guaranteed to agree
with the local one.  Pure scalar generators (the unit ideal, free covers)
are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HorizonError, InternalCheckError, ValidationError
from .rings import OVERFLOW, RingElement, TruncatedAlgebra


class FreeModuleSpec:
    """A shifted free module R(shift_1) + ... + R(shift_rank)."""

    def __init__(self, ring: TruncatedAlgebra, rank: int = 1, shifts=None):
        if rank < 1:
            raise ValidationError("free module rank must be >= 1")
        self.ring = ring
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        if len(self.shifts) != rank:
            raise ValidationError("one shift per component required")
        self.max_degree = ring.truncation + min(self.shifts)
        self._keys: dict = {}

    def same_as(self, other: "FreeModuleSpec") -> bool:
        return (self.ring is other.ring and self.rank == other.rank
                and self.shifts == other.shifts)

    def coord_degree(self, coord) -> int:
        comp, mono = coord
        return self.ring.degree(mono) + self.shifts[comp]

    def coord_key(self, coord):
        """Total order on coordinates; larger key = leading position."""
        k = self._keys.get(coord)
        if k is None:
            comp, mono = coord
            k = (self.ring.degree(mono) + self.shifts[comp], -comp,
                 self.ring.mono_key(mono))
            self._keys[coord] = k
        return k

    def vector(self, elements) -> tuple:
        elements = tuple(elements)
        if len(elements) != self.rank:
            raise ValidationError("vector length differs from the module rank")
        for el in elements:
            if el.ring is not self.ring:
                raise ValidationError("vector component from a different ring")
        return elements

    def zero_vector(self) -> tuple:
        return tuple(self.ring.zero_element() for _ in range(self.rank))

    def unit_vector(self, comp: int) -> tuple:
        els = [self.ring.zero_element() for _ in range(self.rank)]
        els[comp] = self.ring.one_element()
        return tuple(els)

    def __repr__(self):  # pragma: no cover
        return f"Free(rank={self.rank}, shifts={self.shifts})"


# -- vectors -------------------------------------------------------------------

def vec_is_zero(v) -> bool:
    return all(el.is_zero() for el in v)


def vec_degree(spec: FreeModuleSpec, v):
    """max over nonzero components of component degree + shift; None if zero."""
    degs = [el.degree() + s for el, s in zip(v, spec.shifts) if not el.is_zero()]
    return max(degs) if degs else None


def vec_min_coord_degree(spec: FreeModuleSpec, v):
    degs = [spec.ring.degree(m) + s
            for el, s in zip(v, spec.shifts) if not el.is_zero()
            for m in el.terms]
    return min(degs) if degs else None


def vec_to_coords(spec: FreeModuleSpec, v) -> dict:
    out = {}
    for comp, el in enumerate(v):
        for m, c in el.terms.items():
            out[(comp, m)] = c
    return out


def coords_to_vec(spec: FreeModuleSpec, coords: dict) -> tuple:
    per = [{} for _ in range(spec.rank)]
    for (comp, m), c in coords.items():
        per[comp][m] = c
    return tuple(RingElement(spec.ring, t) for t in per)


def mono_times_vec(spec: FreeModuleSpec, mono, v, cap: int):
    """Coordinates of mono * v, or None when the product reaches beyond ``cap``.

    A single overflowing term already proves the product degree exceeds the
    ring truncation (monomial products never cancel within a component), so
    the whole product is discarded rather than silently truncated.
    """
    ring = spec.ring
    out = {}
    for comp, el in enumerate(v):
        shift = spec.shifts[comp]
        for m, c in el.terms.items():
            p = ring.mono_mul(mono, m)
            if p is OVERFLOW:
                return None
            if p is None:
                continue
            if ring.degree(p) + shift > cap:
                return None
            out[(comp, p)] = c
    return out if out else None


def _gen_sort_key(spec: FreeModuleSpec, v):
    coords = vec_to_coords(spec, v)
    deg = vec_degree(spec, v)
    lead = sorted((spec.coord_key(c) for c in coords), reverse=True)
    return (deg, lead, sorted(coords.items(), key=lambda kv: spec.coord_key(kv[0])))


# -- echelon kernel ------------------------------------------------------------

class Echelon:
    """Reduced row echelon basis keyed by pivot coordinate.

    Rows are normalized (pivot coefficient 1) and mutually reduced, so the
    row set is the canonical basis of the subspace it spans, independent of
    insertion order.
    """

    def __init__(self, spec: FreeModuleSpec):
        self.spec = spec
        self.rows: dict = {}
        self._occurs: dict = {}

    def copy(self) -> "Echelon":
        out = Echelon(self.spec)
        out.rows = {p: dict(r) for p, r in self.rows.items()}
        out._occurs = {c: set(s) for c, s in self._occurs.items()}
        return out

    def __len__(self):
        return len(self.rows)

    def normal_form(self, coords: dict) -> dict:
        """Canonical representative of coords modulo the span (linear map)."""
        f = self.spec.ring.field
        key = self.spec.coord_key
        work = dict(coords)
        out = {}
        while work:
            p = max(work, key=key)
            c = work.pop(p)
            row = self.rows.get(p)
            if row is None:
                out[p] = c
                continue
            for coord, rc in row.items():
                if coord == p:
                    continue
                s = f.sub(work.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    work.pop(coord, None)
                else:
                    work[coord] = s
        return out

    def reduces_to_zero(self, coords: dict) -> bool:
        f = self.spec.ring.field
        key = self.spec.coord_key
        work = dict(coords)
        while work:
            p = max(work, key=key)
            row = self.rows.get(p)
            if row is None:
                return False
            c = work.pop(p)
            for coord, rc in row.items():
                if coord == p:
                    continue
                s = f.sub(work.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    work.pop(coord, None)
                else:
                    work[coord] = s
        return True

    def insert(self, coords: dict):
        """Insert a vector; returns the new pivot or None if dependent."""
        f = self.spec.ring.field
        nf = self.normal_form(coords)
        if not nf:
            return None
        key = self.spec.coord_key
        p = max(nf, key=key)
        inv = f.inv(nf[p])
        row = {c: f.mul(v, inv) for c, v in nf.items()}
        # back-reduce existing rows that contain the new pivot
        holders = self._occurs.get(p)
        if holders:
            for q in list(holders):
                other = self.rows[q]
                c = other.get(p)
                if c is None:
                    continue
                for coord, rc in row.items():
                    s = f.sub(other.get(coord, f.zero), f.mul(c, rc))
                    if s == f.zero:
                        if coord in other:
                            del other[coord]
                            if coord != q:
                                held = self._occurs.get(coord)
                                if held:
                                    held.discard(q)
                    else:
                        if coord not in other and coord != q:
                            self._occurs.setdefault(coord, set()).add(q)
                        other[coord] = s
        self.rows[p] = row
        for coord in row:
            if coord != p:
                self._occurs.setdefault(coord, set()).add(p)
        return p

    def pivots(self):
        return self.rows.keys()

    def dims_by_degree(self) -> dict:
        out: dict = {}
        for p in self.rows:
            d = self.spec.coord_degree(p)
            out[d] = out.get(d, 0) + 1
        return out

    def rows_up_to(self, d: int) -> dict:
        return {p: r for p, r in self.rows.items() if self.spec.coord_degree(p) <= d}


# -- submodules ------------------------------------------------------------------

class Submodule:
    """A f.g. submodule with its truncated echelon basis and validity horizon."""

    def __init__(self, ambient: FreeModuleSpec, gens, basis: Echelon,
                 valid_through: int, warning: str | None = None):
        self.ambient = ambient
        self.gens = tuple(gens)
        self.basis = basis
        self.valid_through = valid_through
        self.warning = warning

    @property
    def ring(self) -> TruncatedAlgebra:
        return self.ambient.ring

    def is_zero(self) -> bool:
        return not self.basis.rows

    def max_gen_degree(self):
        degs = [vec_degree(self.ambient, g) for g in self.gens]
        degs = [d for d in degs if d is not None]
        return max(degs) if degs else None

    def contains_unit(self) -> bool:
        return any(self.ambient.coord_degree(p) == 0 for p in self.basis.rows)

    def dim_up_to(self, d: int) -> int:
        spec = self.ambient
        return sum(1 for p in self.basis.rows if spec.coord_degree(p) <= d)

    def __repr__(self):  # pragma: no cover
        return (f"Submodule(rank={self.ambient.rank}, gens={len(self.gens)}, "
                f"rows={len(self.basis)}, valid<= {self.valid_through})")


def _validate_gen(spec: FreeModuleSpec, v, horizon: int):
    if vec_is_zero(v):
        raise ValidationError("zero vector among generators")
    d = vec_degree(spec, v)
    if d > horizon:
        raise HorizonError(f"generator degree {d} exceeds the horizon {horizon}")
    dmin = vec_min_coord_degree(spec, v)
    if dmin == 0 and d > 0:
        raise ValidationError(
            "generator mixes a degree-0 term with positive-degree terms; "
            "graded and local computations disagree for such inputs")


def span(ambient: FreeModuleSpec, gens, horizon: int) -> Submodule:
    """Span of the given vectors, with basis computed for all degrees <= horizon."""
    if horizon > ambient.max_degree:
        raise HorizonError(
            f"horizon {horizon} exceeds the ring truncation {ambient.max_degree}")
    if horizon < 0:
        raise HorizonError("empty horizon: rebuild the ring with a larger truncation")
    ring = ambient.ring
    gens = [ambient.vector(g) for g in gens]
    E = Echelon(ambient)
    for g in gens:
        _validate_gen(ambient, g, horizon)
        deg = vec_degree(ambient, g)
        dmin = vec_min_coord_degree(ambient, g)
        spread = deg - dmin
        for m in ring.monomials_up_to(horizon - deg + spread):
            coords = mono_times_vec(ambient, m, g, horizon)
            if coords:
                E.insert(coords)
    return Submodule(ambient, gens, E, horizon)


def full_module(ambient: FreeModuleSpec, horizon: int | None = None) -> Submodule:
    """The whole free module (unit ideal when rank 1)."""
    h = ambient.max_degree if horizon is None else horizon
    return span(ambient, [ambient.unit_vector(i) for i in range(ambient.rank)], h)


def zero_module(ambient: FreeModuleSpec, horizon: int | None = None) -> Submodule:
    h = ambient.max_degree if horizon is None else horizon
    return Submodule(ambient, (), Echelon(ambient), h)


def ideal_span(ring: TruncatedAlgebra, elements, horizon: int | None = None) -> Submodule:
    """Convenience: the ideal generated by ring elements (rank-1 submodule)."""
    spec = FreeModuleSpec(ring, 1)
    h = ring.truncation if horizon is None else horizon
    return span(spec, [(el,) for el in elements], h)


def unit_ideal(ring: TruncatedAlgebra, horizon: int | None = None,
               warning: str | None = None) -> Submodule:
    out = full_module(FreeModuleSpec(ring, 1), horizon)
    if warning:
        out.warning = warning
    return out


def _check_same_ambient(A: Submodule, B: Submodule):
    if not A.ambient.same_as(B.ambient):
        raise ValidationError("submodules live in different ambient modules")


def module_sum(A: Submodule, B: Submodule) -> Submodule:
    _check_same_ambient(A, B)
    valid = min(A.valid_through, B.valid_through)
    E = A.basis.copy()
    for row in B.basis.rows.values():
        E.insert(dict(row))
    return Submodule(A.ambient, A.gens + B.gens, E, valid)


def ideal_times_module(I: Submodule, M: Submodule) -> Submodule:
    """Span of {a*g : a generator of I, g generator of M}, minimalized."""
    if I.ambient.rank != 1 or I.ambient.ring is not M.ambient.ring:
        raise ValidationError("left factor must be an ideal over the same ring")
    valid = min(I.valid_through, M.valid_through)
    products = []
    skipped = 0
    for a in I.gens:
        el = a[0]
        for g in M.gens:
            try:
                prod = tuple(el * comp for comp in g)
            except HorizonError:
                skipped += 1
                continue
            if vec_is_zero(prod):
                continue
            if vec_degree(M.ambient, prod) > valid:
                skipped += 1
                continue
            products.append(prod)
    out = span(M.ambient, products, valid)
    out = Submodule(M.ambient, minimal_generators(out), out.basis, valid,
                    warning=f"{skipped} products beyond horizon" if skipped else None)
    return out


def ideal_power(I: Submodule, n: int) -> Submodule:
    if I.ambient.rank != 1:
        raise ValidationError("ideal_power expects a rank-1 submodule")
    if n < 0:
        raise ValidationError("ideal power exponent must be >= 0")
    if n == 0:
        return unit_ideal(I.ring, I.valid_through)
    maxdeg = I.max_gen_degree() or 0
    if n * maxdeg > I.valid_through:
        raise HorizonError(
            f"I^{n} needs degree {n * maxdeg} > horizon {I.valid_through}")
    out = I
    for _ in range(n - 1):
        out = ideal_times_module(I, out)
    return out


def membership(v, N: Submodule) -> bool:
    v = N.ambient.vector(v)
    if vec_is_zero(v):
        return True
    d = vec_degree(N.ambient, v)
    if d > N.valid_through:
        raise HorizonError(
            f"membership query at degree {d} beyond horizon {N.valid_through}")
    return N.basis.reduces_to_zero(vec_to_coords(N.ambient, v))


def equality(A: Submodule, B: Submodule) -> bool:
    _check_same_ambient(A, B)
    d = min(A.valid_through, B.valid_through)
    return A.basis.rows_up_to(d) == B.basis.rows_up_to(d)


def is_subset(A: Submodule, B: Submodule) -> bool:
    """A <= B compared on the shared horizon."""
    _check_same_ambient(A, B)
    d = min(A.valid_through, B.valid_through)
    for p, row in A.basis.rows_up_to(d).items():
        if not B.basis.reduces_to_zero(dict(row)):
            return False
    return True


def intersection(A: Submodule, B: Submodule) -> Submodule:
    """Subspace intersection degree by degree (Zassenhaus on sparse rows)."""
    _check_same_ambient(A, B)
    spec = A.ambient
    valid = min(A.valid_through, B.valid_through)
    f = spec.ring.field
    key = spec.coord_key

    # rows [a | a] for A, [b | 0] for B; left block eliminated first
    elim: dict = {}
    out = Echelon(spec)

    def reduce_and_insert(left: dict, right: dict):
        while left:
            p = max(left, key=key)
            entry = elim.get(p)
            if entry is None:
                elim[p] = (left, right)
                return
            erow_l, erow_r = entry
            c = f.mul(left[p], f.inv(erow_l[p]))
            for coord, rc in erow_l.items():
                s = f.sub(left.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    left.pop(coord, None)
                else:
                    left[coord] = s
            for coord, rc in erow_r.items():
                s = f.sub(right.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    right.pop(coord, None)
                else:
                    right[coord] = s
        if right:
            out.insert(right)

    for p, row in sorted(A.basis.rows_up_to(valid).items(),
                         key=lambda kv: key(kv[0]), reverse=True):
        reduce_and_insert(dict(row), dict(row))
    for p, row in sorted(B.basis.rows_up_to(valid).items(),
                         key=lambda kv: key(kv[0]), reverse=True):
        reduce_and_insert(dict(row), {})

    result = Submodule(spec, (), out, valid)
    result.gens = tuple(minimal_generators(result))
    return result


def minimal_generators(N: Submodule) -> list:
    """Canonical minimal generating vectors via the degreewise Nakayama strip.

    A basis row of degree d is a new generator exactly when it is not in the
    span of products of the previously found generators; the output is the
    canonical echelon rows themselves, sorted by degree then leading term.
    """
    spec = N.ambient
    ring = spec.ring
    key = spec.coord_key
    rows = sorted(N.basis.rows.items(), key=lambda kv: key(kv[0]))
    W = Echelon(spec)
    out = []
    for pivot, row in rows:
        if W.reduces_to_zero(dict(row)):
            continue
        g = coords_to_vec(spec, row)
        out.append(g)
        deg = vec_degree(spec, g)
        dmin = vec_min_coord_degree(spec, g)
        for m in ring.monomials_up_to(N.valid_through - deg + (deg - dmin)):
            coords = mono_times_vec(spec, m, g, N.valid_through)
            if coords:
                W.insert(coords)
    out.sort(key=lambda v: _gen_sort_key(spec, v))
    return out


# -- colon operations ------------------------------------------------------------

def _kernel_basis(spec_out: FreeModuleSpec, unknowns, residue_of, key_cons):
    """Kernel of c -> sum_m c_m * residue(m) as an Echelon over spec_out.

    ``unknowns`` is an ordered list of output coordinates; ``residue_of``
    maps an unknown to a dict of constraint coordinates.  Unknowns whose
    residues vanish give singleton kernel rows, so all-monomial inputs never
    leave the cheap regime.
    """
    f = spec_out.ring.field
    elim: dict = {}
    out = Echelon(spec_out)
    for u in unknowns:
        cons = residue_of(u)
        aug = {u: f.one}
        while cons:
            lead = max(cons, key=key_cons)
            entry = elim.get(lead)
            if entry is None:
                elim[lead] = (cons, aug)
                break
            erow, eaug = entry
            c = f.mul(cons[lead], f.inv(erow[lead]))
            for coord, rc in erow.items():
                s = f.sub(cons.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    cons.pop(coord, None)
                else:
                    cons[coord] = s
            for coord, rc in eaug.items():
                s = f.sub(aug.get(coord, f.zero), f.mul(c, rc))
                if s == f.zero:
                    aug.pop(coord, None)
                else:
                    aug[coord] = s
        else:
            if aug:
                out.insert(aug)
    return out


def colon_ideal(N: Submodule, L: Submodule) -> Submodule:
    """(N : L) = { r in R : r * g in N for every generator g of L }."""
    _check_same_ambient(N, L)
    ring = N.ring
    if L.is_zero() and not L.gens:
        return unit_ideal(ring, N.valid_through,
                          warning="colon by the zero module: vacuously the unit ideal")
    lgens = [g for g in L.gens if not vec_is_zero(g)]
    if not lgens:
        return unit_ideal(ring, N.valid_through,
                          warning="colon by the zero module: vacuously the unit ideal")
    maxdeg = max(vec_degree(L.ambient, g) for g in lgens)
    cap = min(N.valid_through, L.valid_through) - maxdeg
    if cap < 0:
        raise HorizonError("colon horizon is empty; enlarge the ring truncation")
    spec_out = FreeModuleSpec(ring, 1)
    spec = N.ambient

    def key_cons(tc):
        i, coord = tc
        return (i, spec.coord_key(coord))

    def residue_of(u):
        _, mono = u
        cons = {}
        for i, g in enumerate(lgens):
            prod = mono_times_vec(spec, mono, g, N.valid_through)
            if prod is None:
                continue
            for coord, c in N.basis.normal_form(prod).items():
                cons[(i, coord)] = c
        return cons

    unknowns = [(0, m) for m in ring.monomials_up_to(cap)]
    K = _kernel_basis(spec_out, unknowns, residue_of, key_cons)
    result = Submodule(spec_out, (), K, cap)
    result.gens = tuple(minimal_generators(result))
    return result


def colon_submodule(N: Submodule, I: Submodule, within: Submodule | None = None) -> Submodule:
    """(N :_F I) = { v : a * v in N for every generator a of I }, optionally
    intersected with ``within`` to compute (N :_M I) inside a module M."""
    if I.ambient.rank != 1 or I.ambient.ring is not N.ring:
        raise ValidationError("colon_submodule expects an ideal over the same ring")
    spec = N.ambient
    ring = N.ring
    igens = [g[0] for g in I.gens if not vec_is_zero(g)]
    if not igens:
        out = full_module(spec, N.valid_through)
        out.warning = "colon by the zero ideal: vacuously the whole module"
        return out if within is None else intersection(out, within)
    maxdeg = max(el.degree() for el in igens)
    cap = min(N.valid_through, I.valid_through) - maxdeg
    if cap < 0:
        raise HorizonError("colon horizon is empty; enlarge the ring truncation")

    def key_cons(tc):
        i, coord = tc
        return (i, spec.coord_key(coord))

    def residue_of(u):
        comp, mono = u
        cons = {}
        for i, a in enumerate(igens):
            prod = {}
            for am, ac in a.terms.items():
                p = ring.mono_mul(am, mono)
                if p is OVERFLOW:
                    raise InternalCheckError("colon product escaped the truncation")
                if p is None:
                    continue
                prod[(comp, p)] = ac
            if not prod:
                continue
            for coord, c in N.basis.normal_form(prod).items():
                cons[(i, coord)] = c
        return cons

    unknowns = []
    for m in ring.monomials_up_to(cap):
        d = ring.degree(m)
        for comp in range(spec.rank):
            if d + spec.shifts[comp] <= cap:
                unknowns.append((comp, m))
    unknowns.sort(key=spec.coord_key)
    K = _kernel_basis(spec, unknowns, residue_of, key_cons)
    result = Submodule(spec, (), K, cap)
    if within is not None:
        result = intersection(result, within)
    else:
        result.gens = tuple(minimal_generators(result))
    return result


# -- lengths -----------------------------------------------------------------------

@dataclass(frozen=True)
class LengthResult:
    status: str                # "finite" | "infinite" | "unknown"
    value: int | None = None
    stable_from: int | None = None

    def expect_finite(self) -> int:
        if self.status != "finite":
            raise HorizonError(f"length did not stabilize below the horizon "
                               f"(status {self.status})")
        return self.value


def quotient_length(top: Submodule, bottom: Submodule,
                    tail_window: int = 4) -> LengthResult:
    """Length of top/bottom from degree-filtered dimension gaps.

    Reports "finite" only when the gap is constant across a trailing window
    reaching the shared horizon, "infinite" when it grows across the whole
    window, "unknown" otherwise.
    """
    _check_same_ambient(top, bottom)
    if not is_subset(bottom, top):
        raise ValidationError("quotient_length: bottom is not contained in top")
    valid = min(top.valid_through, bottom.valid_through)
    tdims = top.basis.dims_by_degree()
    bdims = bottom.basis.dims_by_degree()
    gap = 0
    gaps = []
    for d in range(valid + 1):
        gap += tdims.get(d, 0) - bdims.get(d, 0)
        if gap < 0:
            raise InternalCheckError("dimension gap went negative: bases inconsistent")
        gaps.append(gap)
    w = min(tail_window, valid)
    tail = gaps[-(w + 1):]
    if all(g == tail[-1] for g in tail):
        stable = valid
        while stable > 0 and gaps[stable - 1] == gaps[valid]:
            stable -= 1
        return LengthResult("finite", gaps[valid], stable)
    if all(tail[i] < tail[i + 1] for i in range(len(tail) - 1)):
        return LengthResult("infinite")
    return LengthResult("unknown")
