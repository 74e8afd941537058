"""Shared rings and modules for the worked-example corpus.

Everything heavy is session-scoped: the rings are immutable, so reusing
them across test modules is safe and keeps the suite fast.
"""

import pytest

from ratliffrush import (FieldSpec, FreeModuleSpec, RingPresentation,
                         build_ring, full_module, ideal_span, parse_element,
                         span)


def semigroup_ring(gens, truncation, p=32003):
    return build_ring(RingPresentation(
        backend="numerical-semigroup",
        semigroup_generators=tuple(gens),
        field=FieldSpec("prime-field", p),
        truncation=truncation,
    ))


def poly_ring(variables, truncation, quotient=(), weights=None, p=32003):
    return build_ring(RingPresentation(
        backend="monomial-quotient",
        variables=tuple(variables),
        weights=tuple(weights) if weights else tuple(1 for _ in variables),
        quotient_monomials=tuple(tuple(q) for q in quotient),
        field=FieldSpec("prime-field", p),
        truncation=truncation,
    ))


def ideal_from_strings(ring, texts, horizon=None):
    return ideal_span(ring, [parse_element(ring, s) for s in texts], horizon)


def module_from_strings(ring, rank, vectors, horizon=None, shifts=None):
    spec = FreeModuleSpec(ring, rank, shifts)
    gens = [tuple(parse_element(ring, s) for s in vec) for vec in vectors]
    h = spec.max_degree if horizon is None else horizon
    return span(spec, gens, h)


# -- Example data from the worked corpus --------------------------------------

@pytest.fixture(scope="session")
def ring_4_11_17_18():
    """Numerical semigroup ring k[t^4, t^11, t^17, t^18]."""
    return semigroup_ring((4, 11, 17, 18), 140)


@pytest.fixture(scope="session")
def ex12(ring_4_11_17_18):
    """I = (t^4, t^11), M = (t^4, t^11, t^17) inside the same ring."""
    R = ring_4_11_17_18
    I = ideal_from_strings(R, ["t^4", "t^11"])
    M = module_from_strings(R, 1, [["t^4"], ["t^11"], ["t^17"]])
    return R, I, M


@pytest.fixture(scope="session")
def ring_kxy_y3():
    """k[x,y]/(y^3)."""
    return poly_ring("xy", 40, quotient=[(0, 3)])


@pytest.fixture(scope="session")
def ex92a(ring_kxy_y3):
    """m = (x, y), M = <(0, y^2), (y, x)> inside R^2 over k[x,y]/(y^3)."""
    R = ring_kxy_y3
    m = ideal_from_strings(R, ["x", "y"])
    M = module_from_strings(R, 2, [["0", "y^2"], ["y", "x"]])
    return R, m, M


@pytest.fixture(scope="session")
def ring_6_7_15():
    return semigroup_ring((6, 7, 15), 160)


@pytest.fixture(scope="session")
def ex93(ring_6_7_15):
    """m = (t^6, t^7, t^15), M = <(t^12, t^30), (t^7, t^22)> in R^2."""
    R = ring_6_7_15
    m = ideal_from_strings(R, ["t^6", "t^7", "t^15"])
    M = module_from_strings(R, 2, [["t^12", "t^30"], ["t^7", "t^22"]])
    return R, m, M


@pytest.fixture(scope="session")
def ring_xy_y2():
    """k[x,y]/(xy, y^2)."""
    return poly_ring("xy", 24, quotient=[(1, 1), (0, 2)])


@pytest.fixture(scope="session")
def ex107(ring_xy_y2):
    R = ring_xy_y2
    m = ideal_from_strings(R, ["x", "y"])
    M = full_module(FreeModuleSpec(R, 1))
    return R, m, M


EX813_GENS = ["y^22", "x^4*y^18", "x^7*y^15", "x^8*y^14", "x^11*y^11",
              "x^14*y^8", "x^15*y^7", "x^18*y^4", "x^22"]


@pytest.fixture(scope="session")
def ring_kxy_135():
    return poly_ring("xy", 135)


@pytest.fixture(scope="session")
def ex813(ring_kxy_135):
    """The 9-generator degree-22 staircase ideal in k[x,y]."""
    R = ring_kxy_135
    I = ideal_from_strings(R, EX813_GENS)
    return R, I
