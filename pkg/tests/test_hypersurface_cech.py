from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobnil.ff_linalg import PrimeFieldMatrix, endo_nilpotence_index, fitting_data
from frobnil.fmodule_calculus import POS_INF
from frobnil.hypersurface_cech import (
    CechClass,
    HypersurfaceRing,
    Status,
    a_invariant,
    basis_at_degree,
    basis_size,
    classify_ring,
    degree0_quotient_dim,
    degree_verdict,
    frobenius_image,
    frobenius_layer,
    frobenius_power_image,
    hsl_degree0,
    layer_chain,
    polynomial_ring_profile,
    reduce_polynomial,
    scan_ring,
    smoothness_check,
)


# -- independent oracle: expand g^q with plain big integers ----------------------


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return out


def poly_pow(g: dict, q: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1}
    for _ in range(q):
        out = poly_mul(out, g)
    return out


def oracle_frobenius(ring: HypersurfaceRing, cls: CechClass, e: int = 1) -> dict[CechClass, int]:
    """``F^e`` of a class by expanding ``g^q`` with exact integers and reducing mod p at the end."""
    pe = ring.p**e
    q, r = divmod(cls.xn_exp * pe, ring.deg_f)
    g = {m: c for m, c in ring.g_terms}
    caps = [pe * c for c in cls.denom]
    out: dict[CechClass, int] = {}
    for mono, coeff in poly_pow(g, q, ring.n).items():
        if any(m >= c for m, c in zip(mono, caps)):
            continue  # numerator divisible by a denominator variable: zero in the Čech quotient
        key = CechClass(r, tuple(c - m for c, m in zip(caps, mono)))
        out[key] = (out.get(key, 0) + coeff) % ring.p
    return {k: v for k, v in out.items() if v}


def enumerate_degree(ring: HypersurfaceRing, t: int) -> set[tuple[int, tuple[int, ...]]]:
    """Brute-force tuple enumeration of basis classes in degree t."""
    out = set()
    bound = ring.deg_f - t
    for j in range(ring.deg_f):
        for c in itertools.product(range(1, bound + 1), repeat=ring.n):
            if j - sum(c) == t:
                out.add((j, c))
    return out


RINGS = [
    HypersurfaceRing.fermat(7, 2, 4),
    HypersurfaceRing.fermat(5, 2, 4),
    HypersurfaceRing.fermat(7, 2, 3),
    HypersurfaceRing.fermat(3, 3, 4),
    HypersurfaceRing(5, 2, 3, (((3, 0), 2), ((1, 2), 1), ((0, 3), 4))),
    HypersurfaceRing(3, 2, 4, (((4, 0), 1), ((2, 2), 2), ((0, 4), 1))),
]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.describe())
@pytest.mark.parametrize("t", [-3, -2, -1, 0])
def test_frobenius_image_matches_oracle(ring, t):
    for cls in basis_at_degree(ring, t):
        assert frobenius_image(ring, cls) == oracle_frobenius(ring, cls)


@pytest.mark.parametrize("ring", RINGS[:4], ids=lambda r: r.describe())
def test_power_image_matches_layer_products(ring):
    for t in (-1, 0):
        layers = layer_chain(ring, t, 2)
        product = layers[1].matrix @ layers[0].matrix
        src = layers[0].source_basis
        tgt = {c: i for i, c in enumerate(layers[1].target_basis)}
        for col, cls in enumerate(src):
            img = frobenius_power_image(ring, cls, 2)
            vec = np.zeros(product.rows, dtype=np.int64)
            for k, v in img.items():
                vec[tgt[k]] = v
            assert list(vec) == list(product.entries[:, col])


@pytest.mark.parametrize("ring", RINGS[:3], ids=lambda r: r.describe())
def test_power_image_matches_oracle(ring):
    for cls in basis_at_degree(ring, 0):
        assert frobenius_power_image(ring, cls, 2) == oracle_frobenius(ring, cls, 2)


@pytest.mark.parametrize("d", range(2, 9))
@pytest.mark.parametrize("n", range(1, 5))
def test_degree0_dimension_law(d, n):
    ring = HypersurfaceRing.fermat(101, n, d)
    got = {(c.xn_exp, c.denom) for c in basis_at_degree(ring, 0)}
    assert got == enumerate_degree(ring, 0)
    assert len(got) == math.comb(d - 1, n) == basis_size(ring, 0)


@given(st.integers(1, 3), st.integers(2, 5), st.integers(-6, 3))
@settings(max_examples=60, deadline=None)
def test_basis_enumeration(n, d, t):
    ring = HypersurfaceRing.fermat(3, n, d)
    got = [(c.xn_exp, c.denom) for c in basis_at_degree(ring, t)]
    assert got == sorted(got)
    assert set(got) == enumerate_degree(ring, t)
    assert basis_size(ring, t) == len(got)


@pytest.mark.parametrize("d,n,expected", [(4, 2, 1), (3, 2, 0), (3, 3, -1), (5, 2, 2)])
def test_a_invariant(d, n, expected):
    ring = HypersurfaceRing.fermat(7, n, d)
    assert a_invariant(ring) == expected
    assert basis_at_degree(ring, expected)
    assert not basis_at_degree(ring, expected + 1)


def test_degree0_class_of_cubic():
    # j = 2, c = (1, 1): the unique class of degree 0 when d = 3, n = 2
    assert [(c.xn_exp, c.denom) for c in basis_at_degree(HypersurfaceRing.fermat(7, 2, 3), 0)] == [(2, (1, 1))]


@pytest.mark.parametrize("p,expected", [(7, 1), (5, 0), (11, 1), (13, 0)])
def test_hsl_degree0_quartic(p, expected):
    assert hsl_degree0(HypersurfaceRing.fermat(p, 2, 4)) == expected


def test_hsl_degree0_quintic_p11_by_powering():
    ring = HypersurfaceRing.fermat(11, 2, 5)
    m = frobenius_layer(ring, 0).matrix
    # independent oracle: least e with rank(M^e) == rank(M^D)
    arr = m.entries.astype(object)
    d = m.rows
    powers = [np.eye(d, dtype=object)]
    for _ in range(d):
        powers.append(powers[-1].dot(arr) % 11)
    ranks = [PrimeFieldMatrix(np.array(x, dtype=np.int64), 11).rank() for x in powers]
    expected = min(e for e in range(d + 1) if ranks[e] == ranks[d])
    assert hsl_degree0(ring) == expected
    assert degree0_quotient_dim(ring) == ranks[d]


@pytest.mark.parametrize("p,d,expected", [(7, 4, True), (2, 4, False), (5, 5, False), (3, 4, True), (7, 3, True),
                                          (3, 3, False)])
def test_smoothness_fermat(p, d, expected):
    assert smoothness_check(HypersurfaceRing.fermat(p, 2, d)) is expected


@pytest.mark.parametrize("p,d", [(7, 4), (2, 4), (5, 5), (3, 4), (3, 3), (5, 3)])
def test_smoothness_shortcut_matches_jacobian(monkeypatch, p, d):
    ring = HypersurfaceRing.fermat(p, 2, d)
    shortcut = smoothness_check(ring)
    monkeypatch.setattr(HypersurfaceRing, "is_diagonal", lambda self: False)
    assert smoothness_check(ring) is shortcut


def test_smoothness_singular_nondiagonal():
    # x2^3 - x0^2 x1 is singular along x0 = x2 = 0
    ring = HypersurfaceRing(5, 2, 3, (((2, 1), 1),))
    assert smoothness_check(ring) is False


def test_verdicts_by_degree():
    ring = HypersurfaceRing.fermat(7, 2, 4)
    assert degree_verdict(ring, 1).status is Status.NILPOTENT
    assert degree_verdict(ring, 2).status is Status.ZERO_SPACE
    assert degree_verdict(ring, -2).status is Status.NOT_NILPOTENT
    assert degree_verdict(ring, 0).status is Status.NILPOTENT
    assert degree_verdict(HypersurfaceRing.fermat(5, 2, 4), 0).status is Status.NOT_NILPOTENT


def test_negative_degree_nonnilpotence_certificate():
    # an x_n-free class maps to another basis class, so no power kills it
    ring = HypersurfaceRing.fermat(3, 2, 4)
    cls = CechClass(0, (1, 1))
    assert oracle_frobenius(ring, cls, 3) == {CechClass(0, (27, 27)): 1}


def test_degree0_matrix_zero_iff_nilpotent_index_one():
    for p in (7, 11, 19, 23):
        m = frobenius_layer(HypersurfaceRing.fermat(p, 2, 4), 0).matrix
        assert m.is_zero()
        assert endo_nilpotence_index(m) == 1
    for p in (5, 13, 17, 29):
        m = frobenius_layer(HypersurfaceRing.fermat(p, 2, 4), 0).matrix
        assert m.rank() == 3
        assert fitting_data(m) == (0, 0)


def test_twisted_layer_degree_shift():
    ring = HypersurfaceRing.fermat(7, 2, 4)
    layer = frobenius_layer(ring, -1, {(1, 0, 0): 1})
    assert layer.target_degree == -7 + 1
    assert layer.matrix.shape == (basis_size(ring, -6), basis_size(ring, -1))


def test_reduce_polynomial():
    ring = HypersurfaceRing.fermat(7, 1, 2)  # x1^2 = x0^2
    assert reduce_polynomial(ring, {(0, 5): 1}) == {(4, 1): 1}
    with pytest.raises(ValueError):
        reduce_polynomial(ring, {(1,): 1})


def test_ring_validation():
    with pytest.raises(ValueError):
        HypersurfaceRing(4, 2, 4, ())
    with pytest.raises(ValueError):
        HypersurfaceRing(5, 2, 4, (((3, 0), 1),))
    with pytest.raises(ValueError):
        HypersurfaceRing(5, 2, 4, (((4,), 1),))
    merged = HypersurfaceRing(5, 2, 2, (((2, 0), 3), ((2, 0), 2), ((0, 2), 1)))
    assert merged.g_terms == (((0, 2), 1),)


@pytest.mark.parametrize("p,fnil,b2", [(7, True, None), (5, False, 0), (13, False, 0), (11, True, None)])
def test_classify_quartic(p, fnil, b2):
    prof = classify_ring(HypersurfaceRing.fermat(p, 2, 4))
    assert prof.dim == 2 and prof.weakly_f_nilpotent is True
    assert prof.f_nilpotent is fnil
    if b2 is not None:
        assert prof.b_j(2) == b2 and prof.b_ring.value == 2
    else:
        assert prof.b_ring.value == POS_INF
    top = prof.record(2)
    assert top.dim0 == 3 and top.a == 1


def test_scan_window_and_positivity():
    rep = scan_ring(HypersurfaceRing.fermat(7, 2, 5), window_lo=-6)
    assert rep.window_lo == -6
    for v in rep.verdicts:
        if v.degree > 0:
            assert v.status in (Status.NILPOTENT, Status.ZERO_SPACE)
    with pytest.raises(ValueError):
        scan_ring(HypersurfaceRing.fermat(7, 2, 5), window_lo=1)


def test_nonsmooth_ring_is_conditional():
    prof = classify_ring(HypersurfaceRing.fermat(2, 2, 4), window_lo=-3)
    assert prof.flags.punctured_f_rational is None
    assert any("conditional" in note for note in prof.notes)


def test_polynomial_profile():
    prof = polynomial_ring_profile(5, 3)
    assert prof.fdepth.value == 3 and prof.b_ring.value == POS_INF
    assert prof.f_nilpotent is True
    with pytest.raises(ValueError):
        polynomial_ring_profile(6, 2)
