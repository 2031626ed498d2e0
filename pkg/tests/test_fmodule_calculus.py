from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobnil.ff_linalg import PrimeFieldMatrix
from frobnil.fmodule_calculus import (
    NEG_INF,
    UNKNOWN,
    DegreeWindow,
    ExplicitGradedFModule,
    Kind,
    NilSupport,
    Tail,
    Trichotomy,
    UpperBound,
    b_invariant,
    classify_trichotomy,
    degsupp_intersect,
    hsl_max,
    hsl_min,
    hsl_ses_bound,
    hsl_window_bound,
    nilsupp_intersect,
    nilsupp_union,
    random_module,
    restrict_nonneg,
    simulate_segre,
    simulate_veronese,
    veronese_restrict,
)


def members_in(ns: NilSupport, lo: int, hi: int) -> dict[int, bool | None]:
    return {t: ns.status(t) for t in range(lo, hi + 1)}


def brute_nilsupport(m: ExplicitGradedFModule) -> set[int]:
    """Degrees whose orbit never dies, by explicit matrix composition."""
    out = set()
    for t, n in m.pieces.items():
        if t == 0:
            power = m.layers[0].power(n)
            if not power.is_zero():
                out.add(0)
            continue
        comp, deg = None, t
        while deg in m.layers:
            comp = m.layers[deg] if comp is None else m.layers[deg] @ comp
            deg *= m.p
        if comp is not None and not comp.is_zero():
            out.add(t)
    return out


# -- trichotomy and b ----------------------------------------------------------------


@pytest.mark.parametrize("ns,expected", [
    (NilSupport.empty(), Trichotomy.NILPOTENT),
    (NilSupport.zero_only(), Trichotomy.GENERALIZED_NILPOTENT_ONLY),
    (NilSupport.explicit(-6, 0, [-2], p=2), Trichotomy.INFINITE_NILSUPPORT),
    (NilSupport.infinite(-1, exact=False), Trichotomy.INFINITE_NILSUPPORT),
    (NilSupport.explicit(-6, 0, [], tail_known=False), Trichotomy.UNKNOWN),
])
def test_trichotomy(ns, expected):
    assert classify_trichotomy(ns) is expected


def test_trichotomy_refuses_infinite_pieces():
    with pytest.raises(ValueError):
        classify_trichotomy(NilSupport.empty(), piecewise_finite=False)


def test_explicit_closure_under_p():
    ns = NilSupport.explicit(-6, 0, [-2], p=2)
    assert ns.members == {-2, -4}
    assert ns.kind is Kind.INFINITE


@pytest.mark.parametrize("ns,expected", [
    (NilSupport.empty(), NEG_INF),
    (NilSupport.zero_only(), 0),
    (NilSupport.explicit(-5, 0, [-3, -1]), -1),
    (NilSupport.explicit(-5, 0, [-3], tail_known=False, undecided=[-1]), UpperBound(-1)),
    (NilSupport.infinite(-2, exact=True), -2),
    (NilSupport.infinite(-2, exact=False), UpperBound(-2)),
    (NilSupport.all_below(-2), -2),
])
def test_b_invariant(ns, expected):
    assert b_invariant(ns) == expected


def test_zero_only_is_canonical():
    assert NilSupport.explicit(-3, 0, [0]) == NilSupport.zero_only()
    assert NilSupport.zero_only().describe() == "{0}"


# -- intersect / union ---------------------------------------------------------------


def test_intersect_examples():
    assert nilsupp_intersect(NilSupport.zero_only(), NilSupport.empty()) == NilSupport.empty()
    negative_b = NilSupport.explicit(-5, 0, [-3])
    assert nilsupp_intersect(NilSupport.zero_only(), negative_b).kind is Kind.EMPTY
    a = NilSupport.explicit(-4, 0, [-4, -2, 0])
    b = NilSupport.explicit(-4, 0, [-2, -1, 0])
    assert nilsupp_intersect(a, b).members == {-2, 0}


def test_intersect_unknown_tail_stays_unknown():
    a = NilSupport.explicit(-3, 0, [0], tail_known=False)
    b = NilSupport.all_below(-1)
    out = nilsupp_intersect(a, b)
    assert out.status(-10) is None and out.status(0) is False


descriptor = st.builds(
    lambda lo, members, undecided, tail: NilSupport(
        lo, 0, frozenset(t for t in members if lo <= t <= 0),
        frozenset(t for t in undecided if lo <= t <= 0), tail),
    st.integers(-6, 0), st.sets(st.integers(-6, 0), max_size=4), st.sets(st.integers(-6, 0), max_size=2),
    st.sampled_from(list(Tail)),
)


@given(descriptor, descriptor, descriptor)
@settings(max_examples=200, deadline=None)
def test_intersect_laws(a, b, c):
    window = (-12, 2)
    assert members_in(nilsupp_intersect(a, b), *window) == members_in(nilsupp_intersect(b, a), *window)
    left = nilsupp_intersect(nilsupp_intersect(a, b), c)
    right = nilsupp_intersect(a, nilsupp_intersect(b, c))
    assert members_in(left, *window) == members_in(right, *window)
    assert nilsupp_intersect(a, NilSupport.empty()).kind is Kind.EMPTY
    ab = b_invariant(nilsupp_intersect(a, b))
    ba, bb = b_invariant(a), b_invariant(b)
    if not any(isinstance(x, UpperBound) for x in (ab, ba, bb)):
        assert ab <= min(ba, bb)


@given(descriptor, descriptor)
@settings(max_examples=200, deadline=None)
def test_union_pointwise(a, b):
    u = nilsupp_union(a, b)
    for t in range(-12, 3):
        sa, sb, su = a.status(t), b.status(t), u.status(t)
        if sa is True or sb is True:
            assert su is True
        elif sa is False and sb is False:
            assert su is False
        else:
            assert su is None


def test_restrict_nonneg():
    assert restrict_nonneg(NilSupport.all_below(-2)).kind is Kind.EMPTY
    assert restrict_nonneg(NilSupport.explicit(-3, 0, [-3, 0])) == NilSupport.zero_only()


@pytest.mark.parametrize("ns,v,expected", [
    (NilSupport.zero_only(), 3, NilSupport.zero_only()),
    (NilSupport.explicit(-6, 0, [-6, -4, 0]), 2, NilSupport.explicit(-3, 0, [-3, -2, 0])),
    (NilSupport.empty(), 5, NilSupport.empty()),
])
def test_veronese_restrict_examples(ns, v, expected):
    assert veronese_restrict(ns, v) == expected


@given(descriptor, st.integers(1, 4))
@settings(max_examples=200, deadline=None)
def test_veronese_restrict_pointwise(ns, v):
    out = veronese_restrict(ns, v)
    for t in range(-8, 2):
        assert out.status(t) == ns.status(v * t)


@pytest.mark.parametrize("a,b,expected", [
    (DegreeWindow(0, math.inf), DegreeWindow(-math.inf, -2), None),
    (DegreeWindow(0, 5), DegreeWindow(3, 9), (3, 5)),
    (DegreeWindow(0, 5), DegreeWindow.empty(), None),
])
def test_degsupp_intersect(a, b, expected):
    out = degsupp_intersect(a, b)
    if expected is None:
        assert out.is_empty
    else:
        assert (out.lo, out.hi) == expected


# -- HSL combinators -----------------------------------------------------------------


@pytest.mark.parametrize("a,c,split,expected", [
    (1, 2, False, UpperBound(3)),
    (1, 2, True, 2),
    (0, 0, True, 0),
    (UNKNOWN, 1, True, UNKNOWN),
    (UpperBound(2), 1, True, UpperBound(2)),
])
def test_hsl_ses_bound(a, c, split, expected):
    assert hsl_ses_bound(a, c, split) == expected


def test_hsl_max_min():
    assert hsl_max([1, UpperBound(3), 2]) == UpperBound(3)
    assert hsl_max([]) == 0
    assert hsl_max([1, UNKNOWN]) is UNKNOWN
    assert hsl_min(UNKNOWN, 2) == 2
    assert hsl_min(4, UpperBound(2)) == UpperBound(2)


def test_hsl_window_bound_values():
    assert hsl_window_bound(None, 2, 3) == 0
    assert hsl_window_bound((-4, 1), 0, 5) == UpperBound(1)
    assert hsl_window_bound((-4, 1), 3, 5) == UpperBound(3)
    assert hsl_window_bound((-math.inf, 0), 1, 5) is UNKNOWN


def test_hsl_window_bound_is_a_max_not_a_min():
    # J_3 in degree 0 and a 1-dim piece at -4: true HSL is 3, while min(3, e_0) = 1
    p = 5
    j3 = PrimeFieldMatrix(np.diag([1, 1], k=1), p)
    m = ExplicitGradedFModule(p, {0: 3, -4: 1}, {0: j3}, (-4, 1))
    assert m.hsl() == 3
    assert hsl_window_bound((-4, 1), 3, p) == UpperBound(3)


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 5]))
@settings(max_examples=150, deadline=None)
def test_hsl_window_bound_dominates_true_hsl(seed, p):
    rng = np.random.default_rng(seed)
    m = random_module(rng, p, (-8, 8))
    _, hsl0 = m.degree_data(0) if m.dim(0) else (False, 0)
    bound = hsl_window_bound((-8, 8), hsl0, p)
    assert m.hsl() <= bound.bound


# -- simulator oracles ---------------------------------------------------------------


@given(st.integers(0, 100_000), st.sampled_from([2, 3]))
@settings(max_examples=150, deadline=None)
def test_simulator_nilsupport_matches_brute_force(seed, p):
    m = random_module(np.random.default_rng(seed), p, (-8, 8))
    assert m.nilsupport().members == brute_nilsupport(m)


@given(st.integers(0, 100_000), st.sampled_from([2, 3]))
@settings(max_examples=150, deadline=None)
def test_segre_support_lemma(seed, p):
    rng = np.random.default_rng(seed)
    m1, m2 = random_module(rng, p, (-8, 8)), random_module(rng, p, (-6, 8))
    assert simulate_segre(m1, m2).nilsupport() == nilsupp_intersect(m1.nilsupport(), m2.nilsupport())


@given(st.integers(0, 100_000), st.sampled_from([2, 3]), st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_veronese_support_lemma(seed, p, v):
    m = random_module(np.random.default_rng(seed), p, (-8, 8))
    assert simulate_veronese(m, v).nilsupport() == veronese_restrict(m.nilsupport(), v)


def test_segre_with_zero_and_identity():
    p = 3
    ident = ExplicitGradedFModule(p, {0: 1}, {0: PrimeFieldMatrix.identity(1, p)}, (0, 0))
    zero_map = ExplicitGradedFModule(p, {0: 1}, {0: PrimeFieldMatrix.zeros(1, 1, p)}, (0, 0))
    assert simulate_segre(ident, ExplicitGradedFModule.zero(p)).is_zero()
    prod = simulate_segre(ident, zero_map)
    assert prod.dim(0) == 1 and prod.layers[0].is_zero()
    assert simulate_veronese(ident, 1) is ident
    with pytest.raises(ValueError):
        simulate_segre(ident, ExplicitGradedFModule.zero(5))


def test_module_validation():
    with pytest.raises(ValueError):
        ExplicitGradedFModule(3, {5: 1}, {}, (-2, 2))
    with pytest.raises(ValueError):
        ExplicitGradedFModule(3, {0: 2}, {0: PrimeFieldMatrix.identity(1, 3)}, (0, 0))
