"""Top local cohomology of hypersurfaces monic in the last variable.

For ``R = F_p[x_0..x_n] / (x_n^d - g(x_0..x_{n-1}))`` the ring is free over
``A = F_p[x_0..x_{n-1}]`` with basis ``1, x_n, ..., x_n^{d-1}``.  Hence
``H^n_m(R)`` has the F_p-basis of Čech classes ``[x_n^j / x_0^{c_0} ... x_{n-1}^{c_{n-1}}]``
with ``0 <= j < d`` and every ``c_i >= 1``, sitting in degree ``j - sum(c)``.
Frobenius raises numerator and denominators to the p-th power; the numerator
is brought back to x_n-degree below d by substituting ``x_n^d = g``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ff_linalg import (
    KernelChain,
    PrimeFieldMatrix,
    check_prime,
    fitting_data,
    iterate_kernel_chain,
    multinomial_mod_p,
    rref_basis,
)
from .fmodule_calculus import UNKNOWN, NilSupport, Tail
from .profile import CohomologyRecord, RingFlags, RingProfile

Monomial = tuple[int, ...]

DEFAULT_MAX_E = 10
DEFAULT_TERM_BUDGET = 200_000


@dataclass(frozen=True)
class HypersurfaceRing:
    """Descriptor of ``F_p[x_0..x_n]/(x_n^deg_f - g)``.

    ``g_terms`` lists ``(exponent vector over x_0..x_{n-1}, coefficient)``;
    all monomials must have total degree ``deg_f``.  Like terms are merged
    and zero coefficients dropped on construction.
    """

    p: int
    n: int
    deg_f: int
    g_terms: tuple[tuple[Monomial, int], ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise ValueError("need at least one A-variable (n >= 1)")
        if self.deg_f < 1:
            raise ValueError("deg_f must be positive")
        merged: dict[Monomial, int] = {}
        for mono, coeff in self.g_terms:
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.n:
                raise ValueError(f"monomial {mono} should have {self.n} exponents")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            if sum(mono) != self.deg_f:
                raise ValueError(f"monomial {mono} is not of degree {self.deg_f}")
            merged[mono] = (merged.get(mono, 0) + int(coeff)) % self.p
        terms = tuple(sorted((m, c) for m, c in merged.items() if c))
        object.__setattr__(self, "g_terms", terms)

    @classmethod
    def fermat(cls, p: int, n: int, d: int) -> HypersurfaceRing:
        """``x_0^d + ... + x_{n-1}^d - x_n^d``."""
        terms = []
        for i in range(n):
            mono = [0] * n
            mono[i] = d
            terms.append((tuple(mono), 1))
        return cls(p, n, d, tuple(terms))

    @property
    def dim(self) -> int:
        return self.n

    def is_diagonal(self) -> bool:
        """True when g is ``sum a_i x_i^d`` with every ``a_i`` nonzero."""
        if len(self.g_terms) != self.n:
            return False
        return all(max(m) == self.deg_f for m, _ in self.g_terms)

    def is_fermat(self) -> bool:
        return self.is_diagonal() and all(c == 1 for _, c in self.g_terms)

    def describe(self) -> str:
        def mono_str(m):
            parts = [f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e]
            return "*".join(parts) or "1"

        g = " + ".join(f"{c}*{mono_str(m)}" if c != 1 else mono_str(m) for m, c in self.g_terms) or "0"
        return f"F_{self.p}[x0..x{self.n}]/(x{self.n}^{self.deg_f} - ({g}))"


@dataclass(frozen=True, order=True)
class CechClass:
    """Basis class ``[x_n^xn_exp / prod x_i^denom[i]]`` of ``H^n_m(R)``."""

    xn_exp: int
    denom: tuple[int, ...]

    def __post_init__(self):
        if self.xn_exp < 0:
            raise ValueError("x_n exponent must be nonnegative")
        if any(c < 1 for c in self.denom):
            raise ValueError(f"denominator exponents must be >= 1, got {self.denom}")

    @property
    def degree(self) -> int:
        return self.xn_exp - sum(self.denom)


def a_invariant(ring: HypersurfaceRing) -> int:
    """Top degree of ``H^n_m(R)``: ``(deg_f - 1) - n``."""
    return ring.deg_f - 1 - ring.n


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive integers, lex order."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def basis_at_degree(ring: HypersurfaceRing, t: int) -> list[CechClass]:
    """All basis classes of degree ``t``, ordered lexicographically on (xn_exp, denom)."""
    out = []
    for j in range(ring.deg_f):
        s = j - t
        if s < ring.n:
            continue
        out.extend(CechClass(j, c) for c in _compositions(s, ring.n))
    return out


def basis_size(ring: HypersurfaceRing, t: int) -> int:
    return sum(math.comb(j - t - 1, ring.n - 1) for j in range(ring.deg_f) if j - t >= ring.n)


# -- polynomials over F_p in x_0..x_n, stored as {exponent tuple: coeff} -----

Poly = Mapping[tuple[int, ...], int]


def reduce_polynomial(ring: HypersurfaceRing, poly: Poly) -> dict[tuple[int, ...], int]:
    """Rewrite ``poly`` (exponents over x_0..x_n) with x_n-degree below deg_f."""
    p, d, n = ring.p, ring.deg_f, ring.n
    out: dict[tuple[int, ...], int] = {}
    for mono, coeff in poly.items():
        mono = tuple(int(e) for e in mono)
        if len(mono) != n + 1:
            raise ValueError(f"multiplier monomial {mono} should have {n + 1} exponents")
        q, r = divmod(mono[n], d)
        for gmono, gcoeff in _g_power(ring, q).items():
            key = tuple(a + b for a, b in zip(mono[:n], gmono)) + (r,)
            out[key] = (out.get(key, 0) + coeff * gcoeff) % p
    return {m: c for m, c in out.items() if c}


def _polynomial_degree(poly: Poly) -> int:
    degs = {sum(m) for m in poly}
    if len(degs) != 1:
        raise ValueError("multiplier must be a nonzero homogeneous polynomial")
    return degs.pop()


@lru_cache(maxsize=4096)
def _g_power(ring: HypersurfaceRing, q: int) -> dict[Monomial, int]:
    """Full expansion of ``g**q`` (used only for multiplier reduction)."""
    out: dict[Monomial, int] = {}
    for mono, c in _g_power_terms(ring, q, None):
        out[mono] = (out.get(mono, 0) + c) % ring.p
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=4096)
def _digit_splits(ring: HypersurfaceRing, digit: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Ways to split one base-p digit of ``q`` among the terms of g.

    Each entry is ``(exponent shift in units of the digit's place value, coefficient)``,
    where the coefficient is the multinomial of the split times the powers of
    the term coefficients (``c^(p^i) = c`` in F_p, so place values drop out).
    """
    p, n = ring.p, ring.n
    terms = ring.g_terms
    k = len(terms)
    out = []

    def rec(idx, remaining, beta):
        if idx == k - 1:
            beta = beta + [remaining]
            coeff = int(multinomial_mod_p(beta, p))
            for (_, c), b in zip(terms, beta):
                coeff = coeff * pow(c, b, p) % p
            if coeff:
                shift = tuple(sum(b * m[i] for b, (m, _) in zip(beta, terms)) for i in range(n))
                out.append((shift, coeff))
            return
        for b in range(remaining + 1):
            rec(idx + 1, remaining - b, beta + [b])

    rec(0, digit, [])
    return tuple(out)


def _g_power_terms(ring: HypersurfaceRing, q: int, caps: Sequence[int] | None):
    """Yield ``(monomial, coeff)`` of ``g**q`` with every exponent below ``caps``.

    A monomial may be yielded more than once; callers sum the coefficients.

    By Lucas's theorem the multinomial coefficient of a split of q is the
    product of the multinomials of the digit-wise splits, and it vanishes
    unless the split has no carries.  So terms are enumerated digit by digit,
    most significant first, which visits only terms with a nonzero
    coefficient.  Exponents only grow as lower digits are added, so a branch
    is cut as soon as one coordinate reaches its cap.
    """
    p, n = ring.p, ring.n
    if q == 0:
        if caps is None or all(c > 0 for c in caps):
            yield (0,) * n, 1
        return
    if not ring.g_terms:
        return
    digits = []
    while q:
        q, r = divmod(q, p)
        digits.append(r)
    places = [p**i for i in range(len(digits))]
    levels = [(places[i], _digit_splits(ring, digits[i])) for i in range(len(digits) - 1, -1, -1)]
    depth = len(levels)

    def rec(level: int, acc: tuple[int, ...], coeff: int):
        if level == depth:
            yield acc, coeff
            return
        place, splits = levels[level]
        for shift, c in splits:
            mono = tuple(a + place * s for a, s in zip(acc, shift))
            if caps is not None and any(m >= cap for m, cap in zip(mono, caps)):
                continue
            yield from rec(level + 1, mono, coeff * c % p)

    yield from rec(0, (0,) * n, 1)


RawKey = tuple[int, tuple[int, ...]]


def _image_raw(ring: HypersurfaceRing, xn_exp: int, denom: tuple[int, ...], mult) -> dict[RawKey, int]:
    """``u * F`` of one class, keyed by plain ``(xn_exp, denom)`` tuples."""
    p, d, n = ring.p, ring.deg_f, ring.n
    caps = [p * c for c in denom]
    out: dict[RawKey, int] = {}
    for umono, ucoeff in mult.items():
        q, r = divmod(xn_exp * p + umono[n], d)
        ucaps = [c - e for c, e in zip(caps, umono[:n])]
        if any(c <= 0 for c in ucaps):
            continue
        for gmono, gcoeff in _g_power_terms(ring, q, ucaps):
            key = (r, tuple(c - e for c, e in zip(ucaps, gmono)))
            out[key] = (out.get(key, 0) + ucoeff * gcoeff) % p
    return {k: v for k, v in out.items() if v}


def _unit(ring: HypersurfaceRing) -> dict[tuple[int, ...], int]:
    return {(0,) * (ring.n + 1): 1}


def frobenius_image(
    ring: HypersurfaceRing,
    cls: CechClass,
    multiplier: Poly | None = None,
) -> dict[CechClass, int]:
    """Expansion of ``u * F(cls)`` in the Čech basis (u = reduced multiplier)."""
    mult = _unit(ring) if multiplier is None else multiplier
    raw = _image_raw(ring, cls.xn_exp, cls.denom, mult)
    return {CechClass(r, dn): v for (r, dn), v in raw.items()}


def frobenius_power_image(ring: HypersurfaceRing, cls: CechClass, e: int) -> dict[CechClass, int]:
    """Expansion of ``F^e(cls)`` computed in one shot with exponent ``p**e``.

    Independent of :func:`frobenius_image`; used to cross-check layer products.
    """
    p, d, n = ring.p, ring.deg_f, ring.n
    q_e = p**e
    q, r = divmod(cls.xn_exp * q_e, d)
    caps = [q_e * c for c in cls.denom]
    out: dict[CechClass, int] = {}
    for gmono, coeff in _g_power_terms(ring, q, caps):
        key = CechClass(r, tuple(c - m for c, m in zip(caps, gmono)))
        out[key] = (out.get(key, 0) + coeff) % p
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True, eq=False)
class FrobeniusLayer:
    """Matrix of ``u * F`` from the degree-t piece to its target piece."""

    source_degree: int
    target_degree: int
    multiplier: tuple[tuple[tuple[int, ...], int], ...] | None
    source_basis: tuple[CechClass, ...]
    target_basis: tuple[CechClass, ...]
    matrix: PrimeFieldMatrix


def frobenius_layer(
    ring: HypersurfaceRing,
    t: int,
    multiplier: Poly | None = None,
) -> FrobeniusLayer:
    """Matrix of Frobenius (optionally twisted by ``multiplier``) on degree ``t``.

    Columns follow :func:`basis_at_degree` at ``t``; rows follow it at the
    target degree ``p*t + deg(multiplier)``.
    """
    mult = None
    shift = 0
    if multiplier is not None:
        shift = _polynomial_degree(multiplier)
        mult = reduce_polynomial(ring, multiplier)
    src = basis_at_degree(ring, t)
    tgt_deg = ring.p * t + shift
    tgt = basis_at_degree(ring, tgt_deg)
    index = {c: i for i, c in enumerate(tgt)}
    mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for col, cls in enumerate(src):
        for img, coeff in frobenius_image(ring, cls, mult).items():
            mat[index[img], col] = coeff
    frozen_mult = tuple(sorted(mult.items())) if mult is not None else None
    return FrobeniusLayer(t, tgt_deg, frozen_mult, tuple(src), tuple(tgt), PrimeFieldMatrix(mat, ring.p))


# -- per-degree nilpotence ---------------------------------------------------


class Status(enum.Enum):
    NILPOTENT = "nilpotent"
    NOT_NILPOTENT = "not_nilpotent"
    NOT_NILPOTENT_UP_TO = "not_nilpotent_up_to"
    ZERO_SPACE = "zero_space"


@dataclass(frozen=True)
class DegreeVerdict:
    """Outcome of the nilpotence test for one graded piece.

    ``exponent`` is the certified annihilating exponent for NILPOTENT and the
    number of steps examined for NOT_NILPOTENT_UP_TO.
    """

    degree: int
    status: Status
    kernel_chain: KernelChain
    exponent: int | None = None
    dimension: int = 0
    certificate: str = ""

    @property
    def decided(self) -> bool:
        return self.status is not Status.NOT_NILPOTENT_UP_TO

    @property
    def is_member(self) -> bool | None:
        """Membership of this degree in the nil-support (None if undecided)."""
        if self.status is Status.NOT_NILPOTENT:
            return True
        if self.status is Status.NOT_NILPOTENT_UP_TO:
            return None
        return False


def _sparse_rank_basis(vectors: list[dict[RawKey, int]], p: int) -> list[dict[RawKey, int]]:
    """Row-reduce sparse vectors and return a basis of their span."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return []
    support = sorted({k for v in vectors for k in v})
    col = {k: i for i, k in enumerate(support)}
    arr = np.zeros((len(vectors), len(support)), dtype=np.int64)
    for r, v in enumerate(vectors):
        for k, c in v.items():
            arr[r, col[k]] = c
    red = rref_basis(arr, p, len(support))
    out = []
    for row in red:
        nz = np.flatnonzero(row)
        out.append({support[i]: int(row[i]) for i in nz})
    return out


def _apply_sparse(ring: HypersurfaceRing, vec: dict[RawKey, int], mult) -> tuple[dict[RawKey, int], int]:
    out: dict[RawKey, int] = {}
    p = ring.p
    work = 0
    for (xn_exp, denom), c in vec.items():
        image = _image_raw(ring, xn_exp, denom, mult)
        work += len(image) + 1
        for img, v in image.items():
            out[img] = (out.get(img, 0) + c * v) % p
    return {k: v for k, v in out.items() if v}, work


def orbit_kernel_chain(
    ring: HypersurfaceRing,
    t: int,
    steps: int,
    multiplier: Poly | None = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> KernelChain:
    """Kernel chain of ``F^e`` on the degree-``t`` piece, ``e = 1 .. steps``.

    Rather than materialising the ever larger target pieces, the chain keeps
    a row-reduced basis of the image ``F^e([H]_t)``; the rank of the next
    composite is the rank of F applied to that basis.  Stops early when the
    kernel fills, or when the next step would push the cumulative number of
    expanded terms past ``term_budget`` (the chain then simply has fewer
    than ``steps`` entries).
    """
    mult = _unit(ring) if multiplier is None else reduce_polynomial(ring, multiplier)
    src = basis_at_degree(ring, t)
    dim = len(src)
    image = [{(c.xn_exp, c.denom): 1} for c in src]
    dims: list[int] = []
    full_at = None
    spent = 0
    for e in range(1, steps + 1):
        # a class expands into roughly p^(n-1) classes one step later
        projected = ring.p ** (ring.n - 1) * sum(len(v) for v in image)
        if e > 1 and spent + projected > term_budget:
            break
        applied = []
        for v in image:
            w, work = _apply_sparse(ring, v, mult)
            spent += work
            applied.append(w)
        image = _sparse_rank_basis(applied, ring.p)
        dims.append(dim - len(image))
        if not image:
            full_at = e
            break
    return KernelChain(tuple(dims), dim, full_at is not None, full_at)


def layer_chain(ring: HypersurfaceRing, t: int, steps: int) -> list[FrobeniusLayer]:
    """Dense layers along ``t, tp, tp^2, ...`` (only sensible for small pieces)."""
    layers = []
    deg = t
    for _ in range(steps):
        layer = frobenius_layer(ring, deg)
        layers.append(layer)
        deg = layer.target_degree
    return layers


def degree_verdict(
    ring: HypersurfaceRing,
    t: int,
    max_e: int = DEFAULT_MAX_E,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> DegreeVerdict:
    """Decide whether ``H^n_m(R)`` is nilpotent in degree ``t``.

    * ``t > a``: the piece is zero.
    * ``t = 0``: Frobenius is an endomorphism of a finite space, so
      nilpotence is decided by its ``D``-th power.
    * ``t > 0``: the orbit leaves the support above the a-invariant, so the
      chain always fills.
    * ``t <= -n``: the class ``[1 / x_0^{c_0} ... x_{n-1}^{c_{n-1}}]`` contains no
      ``x_n`` and Frobenius maps it to another basis class, never to zero.
    * ``-n < t < 0``: nilpotent if the kernel chain fills within ``max_e``
      steps, otherwise undecided (NOT_NILPOTENT_UP_TO).
    """
    if max_e < 1:
        raise ValueError("max_e must be >= 1")
    a = a_invariant(ring)
    if t > a:
        return DegreeVerdict(t, Status.ZERO_SPACE, KernelChain((), 0), certificate="degree above a-invariant")
    dim = basis_size(ring, t)
    if dim == 0:
        return DegreeVerdict(t, Status.ZERO_SPACE, KernelChain((), 0), certificate="empty piece")
    if t == 0:
        layer = frobenius_layer(ring, 0)
        stable, hsl = fitting_data(layer.matrix)
        chain = iterate_kernel_chain([layer.matrix] * max(dim, 1), dim)
        if stable == dim:
            return DegreeVerdict(0, Status.NILPOTENT, chain, exponent=hsl, dimension=dim,
                                 certificate=f"degree-0 matrix satisfies M^{hsl} = 0")
        return DegreeVerdict(0, Status.NOT_NILPOTENT, chain, dimension=dim,
                             certificate=f"degree-0 matrix has rank {dim - stable} on its stable image")
    if t > 0:
        steps = 1
        while t * ring.p**steps <= a:
            steps += 1
        chain = orbit_kernel_chain(ring, t, steps, term_budget=10**12)
        return DegreeVerdict(t, Status.NILPOTENT, chain, exponent=chain.full_at, dimension=dim,
                             certificate="orbit leaves the support above the a-invariant")
    if t <= -ring.n:
        # The certificate needs no chain; the pieces here are large.
        chain = KernelChain((), dim)
        return DegreeVerdict(t, Status.NOT_NILPOTENT, chain, dimension=dim,
                             certificate="x_n-free class 1/x^c has injective Frobenius orbit")
    chain = orbit_kernel_chain(ring, t, max_e, term_budget=term_budget)
    if chain.full_at is not None:
        return DegreeVerdict(t, Status.NILPOTENT, chain, exponent=chain.full_at, dimension=dim,
                             certificate=f"F^{chain.full_at} kills the piece")
    return DegreeVerdict(t, Status.NOT_NILPOTENT_UP_TO, chain, exponent=chain.steps, dimension=dim,
                         certificate=f"kernel not full after {chain.steps} steps")


def hsl_degree0(ring: HypersurfaceRing) -> int:
    """HSL number of the degree-0 piece: least e with F^e killing its nilpotent part."""
    layer = frobenius_layer(ring, 0)
    return fitting_data(layer.matrix)[1]


def degree0_quotient_dim(ring: HypersurfaceRing) -> int:
    """Dimension of the non-nilpotent quotient of the degree-0 piece."""
    layer = frobenius_layer(ring, 0)
    stable, _ = fitting_data(layer.matrix)
    return layer.matrix.cols - stable


# -- smoothness --------------------------------------------------------------


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        out.extend((first,) + rest for rest in _monomials(nvars - 1, degree - first))
    return out


def _defining_polynomial(ring: HypersurfaceRing) -> dict[tuple[int, ...], int]:
    poly = {(0,) * ring.n + (ring.deg_f,): 1}
    for mono, coeff in ring.g_terms:
        poly[mono + (0,)] = (-coeff) % ring.p
    return poly


def _partial(poly: Mapping[tuple[int, ...], int], i: int, p: int) -> dict[tuple[int, ...], int]:
    out = {}
    for mono, c in poly.items():
        if mono[i] == 0:
            continue
        v = c * mono[i] % p
        if v:
            m = list(mono)
            m[i] -= 1
            out[tuple(m)] = v
    return out


def smoothness_check(ring: HypersurfaceRing, max_columns: int = 60_000) -> bool:
    """True iff ``Proj R`` is smooth, i.e. the singular locus is the irrelevant ideal.

    Diagonal g reduces to ``p does not divide deg_f``.  Otherwise the ideal
    ``J = (f, df/dx_0, ..., df/dx_n)`` is tested for being primary to the
    irrelevant ideal: generated in degrees at most ``deg_f``, it is so iff it
    contains every monomial of degree ``(n + 1)(deg_f - 1) + 1`` (a general
    regular sequence inside ``J`` has socle degree at most that bound minus
    one, and ranks do not change under extension of the base field).
    """
    if ring.is_diagonal():
        return ring.deg_f % ring.p != 0
    nv = ring.n + 1
    f = _defining_polynomial(ring)
    gens = [f] + [_partial(f, i, ring.p) for i in range(nv)]
    gens = [g for g in gens if g]
    target = nv * (ring.deg_f - 1) + 1
    cols = _monomials(nv, target)
    if len(cols) > max_columns:
        raise ValueError(f"smoothness test needs {len(cols)} monomials; raise max_columns to allow it")
    col = {m: i for i, m in enumerate(cols)}
    rows = []
    for g in gens:
        gdeg = sum(next(iter(g)))
        for shift in _monomials(nv, target - gdeg):
            row = np.zeros(len(cols), dtype=np.int64)
            for mono, c in g.items():
                row[col[tuple(a + b for a, b in zip(mono, shift))]] = c
            rows.append(row)
    rank = PrimeFieldMatrix(np.array(rows), ring.p).rank() if rows else 0
    return rank == len(cols)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class HypersurfaceReport:
    """Everything the engine computed for one ring (input to profile building)."""

    ring: HypersurfaceRing
    a: int
    verdicts: tuple[DegreeVerdict, ...]
    degree0_matrix: PrimeFieldMatrix
    degree0_basis: tuple[CechClass, ...]
    hsl_deg0: int
    dim_g0: int
    smooth: bool
    max_e: int
    window_lo: int

    def verdict(self, t: int) -> DegreeVerdict | None:
        for v in self.verdicts:
            if v.degree == t:
                return v
        return None


def scan_ring(
    ring: HypersurfaceRing,
    max_e: int = DEFAULT_MAX_E,
    window_lo: int | None = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> HypersurfaceReport:
    """Degree-by-degree verdicts on ``[min(window_lo, -n), a]``."""
    if window_lo is None:
        window_lo = -4 * ring.deg_f
    if window_lo > 0:
        raise ValueError("window_lo must be <= 0")
    a = a_invariant(ring)
    lo = min(window_lo, -ring.n)
    verdicts = tuple(degree_verdict(ring, t, max_e, term_budget) for t in range(lo, max(a, 0) + 1))
    layer = frobenius_layer(ring, 0)
    stable, hsl = fitting_data(layer.matrix)
    return HypersurfaceReport(
        ring=ring,
        a=a,
        verdicts=verdicts,
        degree0_matrix=layer.matrix,
        degree0_basis=layer.source_basis,
        hsl_deg0=hsl,
        dim_g0=layer.matrix.cols - stable,
        smooth=smoothness_check(ring),
        max_e=max_e,
        window_lo=lo,
    )


def profile_from_report(report: HypersurfaceReport, name: str | None = None) -> RingProfile:
    """Assemble the ring profile from a finished scan."""
    ring = report.ring
    n = ring.n
    members = {v.degree for v in report.verdicts if v.is_member is True}
    undecided = {v.degree for v in report.verdicts if v.is_member is None}
    hi = max(report.a, 0)
    top_ns = NilSupport(report.window_lo, hi, frozenset(members), frozenset(undecided), Tail.ALL)
    dim0 = basis_size(ring, 0)
    top = CohomologyRecord(
        index=n,
        is_zero=False,
        a=report.a,
        nilsupport=top_ns,
        hsl=UNKNOWN,
        hsl_deg0=report.hsl_deg0,
        dim0=dim0,
        dim_g0=report.dim_g0,
        dense=True,
    )
    records = tuple(CohomologyRecord.zero(j) for j in range(n)) + (top,)
    flags = RingFlags(
        cm=True,
        depth_ge_2=n >= 2,
        equidimensional=True,
        punctured_f_rational=True if report.smooth else None,
        punctured_f_nilpotent=True if report.smooth else None,
        generalized_cm=True,
    )
    notes = [f"Frobenius verdicts scanned on degrees [{report.window_lo}, {hi}] with max_e={report.max_e}"]
    if not report.smooth:
        notes.append("Proj R is not smooth: the F-nilpotence verdict is conditional on the punctured spectrum")
    if undecided:
        notes.append("undecided degrees (kernel chain did not fill): " + ", ".join(map(str, sorted(undecided))))
    return RingProfile(name or ring.describe(), ring.p, n, records, flags, frozenset(), tuple(notes))


def classify_ring(
    ring: HypersurfaceRing,
    max_e: int = DEFAULT_MAX_E,
    window_lo: int | None = None,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> RingProfile:
    """Scan the top cohomology of ``ring`` and summarize it as a :class:`RingProfile`."""
    if max_e < 1:
        raise ValueError("max_e must be >= 1")
    return profile_from_report(scan_ring(ring, max_e, window_lo, term_budget))


def polynomial_ring_profile(p: int, dim: int) -> RingProfile:
    """Profile of ``F_p[u_1..u_dim]``: Frobenius is injective on the top cohomology."""
    check_prime(p)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    top = CohomologyRecord(
        index=dim,
        is_zero=False,
        a=-dim,
        nilsupport=NilSupport.all_below(-dim),
        hsl=0,
        hsl_deg0=0,
        dim0=0,
        dim_g0=0,
        dense=True,
    )
    records = tuple(CohomologyRecord.zero(j) for j in range(dim)) + (top,)
    flags = RingFlags(cm=True, depth_ge_2=dim >= 2, equidimensional=True, punctured_f_rational=True,
                      punctured_f_nilpotent=True, generalized_cm=True)
    return RingProfile(f"polynomial ring in {dim} variable{'s' if dim != 1 else ''} over F_{p}", p, dim, records, flags)
