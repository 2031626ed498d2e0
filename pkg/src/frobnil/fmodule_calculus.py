"""Degree bookkeeping for graded modules with a Frobenius action.

A :class:`NilSupport` records what is known about the set of degrees in
which a module fails to be nilpotent.  Inside a finite window every degree
is a certified member, certified absent, or undecided; degrees above the
window are absent and the degrees below it share one tail status.  Every
operation degrades knowledge rather than inventing it.

:class:`ExplicitGradedFModule` is a small, fully explicit module used as a
brute-force oracle for the descriptor arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from .ff_linalg import PrimeFieldMatrix, check_prime, fitting_data

NEG_INF = -math.inf
POS_INF = math.inf


# -- bound values -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class UpperBound:
    """A quantity known only to be at most ``bound`` (possibly -inf)."""

    bound: int

    def __str__(self):
        return f"<= {self.bound}"


class _Unknown:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    __str__ = __repr__

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()

HslValue = Union[int, UpperBound, _Unknown]


def is_exact(v) -> bool:
    return not isinstance(v, (UpperBound, _Unknown))


def bound_of(v) -> float | None:
    """Numeric ceiling of a value (None for UNKNOWN)."""
    if isinstance(v, _Unknown):
        return None
    if isinstance(v, UpperBound):
        return v.bound
    return v


def hsl_max(values: Iterable[HslValue]) -> HslValue:
    """Max of HSL-type values; any UNKNOWN wins, any bound makes it a bound."""
    exact = True
    best = 0
    for v in values:
        if isinstance(v, _Unknown):
            return UNKNOWN
        if isinstance(v, UpperBound):
            exact = False
            best = max(best, v.bound)
        else:
            best = max(best, v)
    return best if exact else UpperBound(best)


def hsl_min(a: HslValue, b: HslValue) -> HslValue:
    """Min of two upper-bounding values (an UNKNOWN side is ignored)."""
    if isinstance(a, _Unknown):
        return b
    if isinstance(b, _Unknown):
        return a
    if is_exact(a) and is_exact(b):
        return min(a, b)
    return UpperBound(min(bound_of(a), bound_of(b)))


def hsl_ses_bound(a: HslValue, c: HslValue, split: bool) -> HslValue:
    """HSL of the middle term of ``0 -> A -> B -> C -> 0``.

    Split sequences give ``max(HSL A, HSL C)`` exactly; otherwise the sum is
    only an upper bound (valid when lifts of nilpotent elements are nilpotent).
    """
    if isinstance(a, _Unknown) or isinstance(c, _Unknown):
        return UNKNOWN
    if split:
        return hsl_max([a, c])
    return UpperBound(bound_of(a) + bound_of(c))


def hsl_window_bound(window: tuple[int, int] | None, hsl_deg0: HslValue, p: int) -> HslValue:
    """Upper bound on HSL of a module whose degree support lies in ``window``.

    With ``e_0`` least such that the window sits in ``(-p^e_0, p^e_0)``, every
    nonzero degree leaves the support after ``e_0`` steps while degree 0 needs
    ``HSL [M]_0`` steps, so ``HSL M <= max(HSL [M]_0, e_0)``.  ``window=None``
    means the module is zero; an infinite end gives UNKNOWN.
    """
    p = check_prime(p)
    if window is None:
        return 0
    lo, hi = window
    if lo > hi:
        return 0
    if math.isinf(lo) or math.isinf(hi):
        return UNKNOWN
    reach = max(abs(int(lo)), abs(int(hi)))
    e0 = 0
    while p**e0 <= reach:
        e0 += 1
    if isinstance(hsl_deg0, _Unknown):
        return UNKNOWN
    return UpperBound(max(bound_of(hsl_deg0), e0))


# -- nil-support descriptors --------------------------------------------------


class Tail(enum.Enum):
    """Status shared by all degrees below a descriptor's window."""

    ABSENT = "absent"
    ALL = "all"
    UNKNOWN = "unknown"


class Kind(enum.Enum):
    EMPTY = "empty"
    ZERO_ONLY = "zero_only"
    EXPLICIT = "explicit"
    INFINITE = "infinite"


class Trichotomy(enum.Enum):
    NILPOTENT = "nilpotent"
    GENERALIZED_NILPOTENT_ONLY = "generalized_nilpotent_only"
    INFINITE_NILSUPPORT = "infinite_nilsupport"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class NilSupport:
    """Partial knowledge of a nil-support.

    Degrees in ``[lo, hi]`` are members, undecided, or (otherwise) absent.
    Degrees above ``hi`` are absent; degrees below ``lo`` have status
    ``below``.  ``known_infinite`` records infinitude established by other
    means (for example a nonzero member and the closure under ``t -> tp``).
    """

    lo: int
    hi: int
    members: frozenset[int] = frozenset()
    undecided: frozenset[int] = frozenset()
    below: Tail = Tail.ABSENT
    known_infinite: bool = False

    def __post_init__(self):
        members = frozenset(int(t) for t in self.members)
        undecided = frozenset(int(t) for t in self.undecided) - members
        if self.lo > self.hi + 1:
            raise ValueError(f"bad window [{self.lo}, {self.hi}]")
        for t in members | undecided:
            if not self.lo <= t <= self.hi:
                raise ValueError(f"degree {t} outside window [{self.lo}, {self.hi}]")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "undecided", undecided)

    # constructors ---------------------------------------------------------

    @classmethod
    def empty(cls) -> NilSupport:
        return cls(0, 0)

    @classmethod
    def zero_only(cls) -> NilSupport:
        return cls(0, 0, frozenset({0}))

    @classmethod
    def explicit(
        cls,
        lo: int,
        hi: int,
        members: Iterable[int],
        tail_known: bool = True,
        p: int | None = None,
        undecided: Iterable[int] = (),
    ) -> NilSupport:
        """Window ``[lo, hi]`` with the given members.

        ``tail_known`` means nothing outside the window (and nothing in it
        besides ``members``) belongs to the nil-support; otherwise the tail
        below ``lo`` is unknown.  If ``p`` is given, members are closed
        under ``t -> tp`` inside the window.
        """
        ms = set(int(t) for t in members)
        if p is not None:
            check_prime(p)
            frontier = list(ms)
            while frontier:
                t = frontier.pop()
                tp = t * p
                if t != 0 and lo <= tp <= hi and tp not in ms:
                    ms.add(tp)
                    frontier.append(tp)
        tail = Tail.ABSENT if tail_known else Tail.UNKNOWN
        return cls(lo, hi, frozenset(ms), frozenset(undecided), tail).normalized()

    @classmethod
    def infinite(cls, sup_bound: int, exact: bool) -> NilSupport:
        """Infinite nil-support with supremum ``sup_bound`` (or at most it)."""
        if sup_bound > 0:
            raise ValueError("nil-support supremum of a cohomology module is <= 0")
        if exact:
            return cls(sup_bound, sup_bound, frozenset({sup_bound}), frozenset(), Tail.UNKNOWN, True)
        return cls(sup_bound, sup_bound, frozenset(), frozenset({sup_bound}), Tail.UNKNOWN, True)

    @classmethod
    def all_below(cls, top: int, lo: int | None = None) -> NilSupport:
        """Every degree ``<= top`` is a member (e.g. a regular ring's top cohomology)."""
        lo = top if lo is None else lo
        return cls(lo, top, frozenset(range(lo, top + 1)), frozenset(), Tail.ALL)

    # queries ----------------------------------------------------------------

    def status(self, t: int) -> bool | None:
        """True if ``t`` is a certified member, False if certified absent."""
        if t > self.hi:
            return False
        if t < self.lo:
            return {Tail.ABSENT: False, Tail.ALL: True, Tail.UNKNOWN: None}[self.below]
        if t in self.members:
            return True
        if t in self.undecided:
            return None
        return False

    @property
    def kind(self) -> Kind:
        if self.is_infinite:
            return Kind.INFINITE
        if self.undecided or self.below is not Tail.ABSENT:
            return Kind.EXPLICIT
        if not self.members:
            return Kind.EMPTY
        if self.members == {0}:
            return Kind.ZERO_ONLY
        return Kind.EXPLICIT

    @property
    def is_infinite(self) -> bool:
        return self.known_infinite or self.below is Tail.ALL or any(t != 0 for t in self.members)

    @property
    def fully_known(self) -> bool:
        return not self.undecided and self.below is not Tail.UNKNOWN

    def is_nilpotent(self) -> bool | None:
        """True iff the nil-support is certainly empty."""
        if self.members or self.below is Tail.ALL or self.known_infinite:
            return False
        if self.fully_known:
            return True
        return None

    def is_generalized_nilpotent(self) -> bool | None:
        """True iff the nil-support is certainly inside ``{0}`` (finite pieces assumed)."""
        if self.is_infinite:
            return False
        if self.below is Tail.UNKNOWN or any(t != 0 for t in self.undecided):
            return None
        return True

    def normalized(self) -> NilSupport:
        """Trim the window to the informative range; canonical form per class."""
        if self.below is Tail.ALL:
            return self
        interesting = self.members | self.undecided
        if self.below is Tail.UNKNOWN:
            lo = self.lo
            hi = max(interesting) if interesting else self.lo
            hi = max(hi, lo)
        else:
            if not interesting:
                return NilSupport(0, 0, known_infinite=self.known_infinite)
            lo, hi = min(interesting), max(interesting)
            lo, hi = min(lo, 0), max(hi, 0)
            if self.members == {0} and not self.undecided:
                return NilSupport(0, 0, frozenset({0}), known_infinite=self.known_infinite)
        return NilSupport(lo, hi, self.members, self.undecided, self.below, self.known_infinite)

    def describe(self) -> str:
        kind = self.kind
        if kind is Kind.EMPTY:
            return "empty"
        if kind is Kind.ZERO_ONLY:
            return "{0}"
        parts = []
        if self.below is Tail.ALL:
            parts.append(f"(-inf,{self.lo - 1}]")
        elif self.below is Tail.UNKNOWN:
            parts.append(f"?(-inf,{self.lo - 1}]")
        if self.members:
            parts.append("{" + ",".join(str(t) for t in sorted(self.members)) + "}")
        if self.undecided:
            parts.append("?{" + ",".join(str(t) for t in sorted(self.undecided)) + "}")
        return " u ".join(parts) if parts else "empty"


def _window_union(a: NilSupport, b: NilSupport) -> tuple[int, int]:
    return min(a.lo, b.lo), max(a.hi, b.hi)


def _combine(a: NilSupport, b: NilSupport, op, tail: Tail, hi: int) -> NilSupport:
    lo, _ = _window_union(a, b)
    lo = min(lo, hi)
    members, undecided = set(), set()
    for t in range(lo, hi + 1):
        s = op(a.status(t), b.status(t))
        if s is True:
            members.add(t)
        elif s is None:
            undecided.add(t)
    return NilSupport(lo, hi, frozenset(members), frozenset(undecided), tail)


def _and3(x: bool | None, y: bool | None) -> bool | None:
    if x is False or y is False:
        return False
    if x is True and y is True:
        return True
    return None


def _or3(x: bool | None, y: bool | None) -> bool | None:
    if x is True or y is True:
        return True
    if x is False and y is False:
        return False
    return None


def nilsupp_intersect(a: NilSupport, b: NilSupport) -> NilSupport:
    """Nil-support of ``M # N`` from those of M and N (degree-wise intersection)."""
    tails = {a.below, b.below}
    if Tail.ABSENT in tails:
        tail = Tail.ABSENT
    elif tails == {Tail.ALL}:
        tail = Tail.ALL
    else:
        tail = Tail.UNKNOWN
    hi = min(a.hi, b.hi)
    return _combine(a, b, _and3, tail, hi).normalized()


def nilsupp_union(a: NilSupport, b: NilSupport) -> NilSupport:
    """Nil-support of ``M (+) N``."""
    tails = {a.below, b.below}
    if Tail.ALL in tails:
        tail = Tail.ALL
    elif tails == {Tail.ABSENT}:
        tail = Tail.ABSENT
    else:
        tail = Tail.UNKNOWN
    hi = max(a.hi, b.hi)
    out = _combine(a, b, _or3, tail, hi)
    if a.known_infinite or b.known_infinite:
        out = NilSupport(out.lo, out.hi, out.members, out.undecided, out.below, True)
    return out.normalized()


def restrict_nonneg(a: NilSupport) -> NilSupport:
    """Intersect with ``[0, inf)``: the nil-support of ``M # S`` for a reduced standard graded ring S."""
    if a.hi < 0:
        return NilSupport.empty()
    members = frozenset(t for t in a.members if t >= 0)
    undecided = frozenset(t for t in a.undecided if t >= 0)
    return NilSupport(0, a.hi, members, undecided, Tail.ABSENT).normalized()


def veronese_restrict(a: NilSupport, v: int) -> NilSupport:
    """Nil-support of the v-th Veronese submodule in its standard grading."""
    if v < 1:
        raise ValueError("Veronese index must be >= 1")
    if v == 1:
        return a
    lo = -((-a.lo) // v)  # ceil(lo / v)
    hi = a.hi // v
    if lo > hi:
        lo = hi
        if a.below is Tail.ABSENT:
            return NilSupport.empty()
    members, undecided = set(), set()
    for t in range(lo, hi + 1):
        s = a.status(v * t)
        if s is True:
            members.add(t)
        elif s is None:
            undecided.add(t)
    # v*t < a.lo for all t < lo, so the tail status carries over unchanged
    return NilSupport(lo, hi, frozenset(members), frozenset(undecided), a.below,
                      a.known_infinite and a.below is not Tail.UNKNOWN).normalized()


def classify_trichotomy(d: NilSupport, piecewise_finite: bool = True) -> Trichotomy:
    """Which of the three possible shapes the nil-support has.

    Requires every graded piece to be finite-dimensional; without that the
    trichotomy does not hold and the call is refused.
    """
    if not piecewise_finite:
        raise ValueError("trichotomy needs finite-dimensional graded pieces")
    if d.is_infinite:
        return Trichotomy.INFINITE_NILSUPPORT
    kind = d.kind
    if kind is Kind.EMPTY:
        return Trichotomy.NILPOTENT
    if kind is Kind.ZERO_ONLY:
        return Trichotomy.GENERALIZED_NILPOTENT_ONLY
    return Trichotomy.UNKNOWN


def b_invariant(d: NilSupport):
    """Supremum of the nil-support: an int, ``-inf``, or an :class:`UpperBound`."""
    if d.below is Tail.ALL and not d.members and not d.undecided:
        return d.lo - 1
    top_member = max(d.members) if d.members else None
    top_undecided = max(d.undecided) if d.undecided else None
    if top_member is not None and (top_undecided is None or top_undecided < top_member):
        return top_member
    if top_member is None and top_undecided is None:
        if d.below is Tail.ABSENT:
            return NEG_INF
        if d.below is Tail.ALL:
            return d.lo - 1
        return UpperBound(d.lo - 1)
    if top_member is None and d.below is Tail.ALL and top_undecided is not None:
        return UpperBound(top_undecided)
    return UpperBound(max(x for x in (top_member, top_undecided) if x is not None))


def b_upper(b) -> float:
    """Numeric ceiling of a b-invariant value."""
    return b.bound if isinstance(b, UpperBound) else b


# -- degree supports ----------------------------------------------------------


@dataclass(frozen=True)
class DegreeWindow:
    """An interval of degrees, possibly unbounded; empty when lo > hi."""

    lo: float
    hi: float

    @classmethod
    def empty(cls) -> DegreeWindow:
        return cls(1, 0)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, t) -> bool:
        return self.lo <= t <= self.hi


def degsupp_intersect(a: DegreeWindow, b: DegreeWindow) -> DegreeWindow:
    out = DegreeWindow(max(a.lo, b.lo), min(a.hi, b.hi))
    return DegreeWindow.empty() if out.is_empty else out


# -- explicit modules ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExplicitGradedFModule:
    """Graded module with finitely many nonzero pieces inside ``window``.

    ``pieces[t]`` is the dimension of degree ``t``; ``layers[t]`` is the
    matrix of the action from degree ``t`` to degree ``tp`` (shape
    ``(pieces[tp], pieces[t])``, with pieces outside the window being zero).
    """

    p: int
    pieces: Mapping[int, int]
    layers: Mapping[int, PrimeFieldMatrix]
    window: tuple[int, int]

    def __post_init__(self):
        check_prime(self.p)
        lo, hi = self.window
        pieces = {int(t): int(n) for t, n in self.pieces.items() if n}
        for t, n in pieces.items():
            if not lo <= t <= hi:
                raise ValueError(f"piece at {t} outside window {self.window}")
            if n < 0:
                raise ValueError("negative dimension")
        layers = {}
        for t, n in pieces.items():
            target = pieces.get(t * self.p, 0)
            m = self.layers.get(t)
            if m is None:
                m = PrimeFieldMatrix.zeros(target, n, self.p)
            if m.shape != (target, n):
                raise ValueError(f"layer at {t} has shape {m.shape}, expected {(target, n)}")
            layers[t] = m
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "layers", layers)

    def dim(self, t: int) -> int:
        return self.pieces.get(t, 0)

    def is_zero(self) -> bool:
        return not self.pieces

    def _orbit(self, t: int):
        """Yield successive composites of the action starting at degree t."""
        comp = None
        deg = t
        while True:
            comp = self.layers[deg] if comp is None else self.layers[deg] @ comp
            yield comp
            deg *= self.p
            if deg not in self.layers:
                return

    def degree_data(self, t: int) -> tuple[bool, int]:
        """(is t in the nil-support, nilpotency index of the nilpotent part at t)."""
        n = self.dim(t)
        if n == 0:
            return False, 0
        if t == 0:
            stable, hsl = fitting_data(self.layers[0])
            return stable < n, hsl
        e = 0
        for comp in self._orbit(t):
            e += 1
            if comp.is_zero():
                return False, e
        raise AssertionError("unreachable")

    def nilsupport(self) -> NilSupport:
        """Exact nil-support (the window is complete, so every orbit is decided)."""
        lo, hi = self.window
        members = frozenset(t for t in self.pieces if self.degree_data(t)[0])
        return NilSupport(min(lo, 0), max(hi, 0), members).normalized()

    def hsl(self) -> int:
        return max((self.degree_data(t)[1] for t in self.pieces), default=0)

    @classmethod
    def zero(cls, p: int, window: tuple[int, int] = (0, 0)) -> ExplicitGradedFModule:
        return cls(p, {}, {}, window)


def simulate_segre(m1: ExplicitGradedFModule, m2: ExplicitGradedFModule) -> ExplicitGradedFModule:
    """Segre product: tensor the pieces and the layers degree by degree."""
    if m1.p != m2.p:
        raise ValueError(f"mixed characteristics {m1.p} and {m2.p}")
    p = m1.p
    lo = max(m1.window[0], m2.window[0])
    hi = min(m1.window[1], m2.window[1])
    if lo > hi:
        return ExplicitGradedFModule.zero(p)
    pieces, layers = {}, {}
    for t in range(lo, hi + 1):
        n = m1.dim(t) * m2.dim(t)
        if n:
            pieces[t] = n
    for t in pieces:
        target = pieces.get(t * p, 0)
        if target:
            layers[t] = m1.layers[t].kron(m2.layers[t])
        else:
            layers[t] = PrimeFieldMatrix.zeros(0, pieces[t], p)
    return ExplicitGradedFModule(p, pieces, layers, (lo, hi))


def simulate_veronese(m: ExplicitGradedFModule, v: int) -> ExplicitGradedFModule:
    """v-th Veronese submodule, regraded by ``t -> t / v``."""
    if v < 1:
        raise ValueError("Veronese index must be >= 1")
    if v == 1:
        return m
    lo = -((-m.window[0]) // v)
    hi = m.window[1] // v
    if lo > hi:
        return ExplicitGradedFModule.zero(m.p)
    pieces = {t: m.dim(v * t) for t in range(lo, hi + 1) if m.dim(v * t)}
    layers = {t: m.layers[v * t] for t in pieces}
    return ExplicitGradedFModule(m.p, pieces, layers, (lo, hi))


def random_module(rng: np.random.Generator, p: int, window: tuple[int, int], max_dim: int = 3,
                  density: float = 0.6) -> ExplicitGradedFModule:
    """Random window-complete module; degree-0 maps are biased toward nilpotents."""
    lo, hi = window
    pieces = {t: int(rng.integers(1, max_dim + 1)) for t in range(lo, hi + 1) if rng.random() < density}
    layers = {}
    for t, n in pieces.items():
        target = pieces.get(t * p, 0)
        if t == 0:
            mode = rng.integers(0, 3)
            if mode == 0:
                m = np.triu(rng.integers(0, p, size=(n, n)), k=1)
            elif mode == 1:
                m = rng.integers(0, p, size=(n, n))
            else:
                m = np.zeros((n, n), dtype=np.int64)
                k = int(rng.integers(0, n + 1))
                m[:k, :k] = np.eye(k, dtype=np.int64)
            layers[t] = PrimeFieldMatrix(m, p)
        else:
            layers[t] = PrimeFieldMatrix(rng.integers(0, p, size=(target, n)), p)
    return ExplicitGradedFModule(p, pieces, layers, window)
