"""Propagation of nilpotence invariants through ring constructions.

Calculators take :class:`RingProfile` inputs (engine-built or user-asserted)
and return either new profiles (Segre products, Veronese subrings, diagonal
subalgebras) or :class:`BoundReport` objects naming the bound and the result
that justifies it.  Gluing calculators work on bare numbers, since the
cohomology of the pieces is outside the engine.

Every verdict is three-valued; ``None`` means the available certificates do
not decide it, and the report says which input was missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .fmodule_calculus import (
    NEG_INF,
    POS_INF,
    UNKNOWN,
    HslValue,
    NilSupport,
    UpperBound,
    _Unknown,
    bound_of,
    hsl_max,
    hsl_min,
    is_exact,
    nilsupp_intersect,
    nilsupp_union,
    restrict_nonneg,
    veronese_restrict,
)
from .profile import CohomologyRecord, Interval, RingFlags, RingProfile


class HypothesisError(ValueError):
    """A calculator was called on inputs that violate its hypotheses."""


@dataclass(frozen=True)
class BoundReport:
    quantity: str
    value: Any
    justification: str
    inputs: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def determined(self) -> bool:
        return _is_determined(self.value)

    def to_json(self) -> dict[str, Any]:
        return {
            "quantity": self.quantity,
            "value": encode_value(self.value),
            "justification": self.justification,
            "inputs": {k: encode_value(v) for k, v in self.inputs.items()},
            "notes": list(self.notes),
        }

    def describe(self) -> str:
        return f"{self.quantity}: {format_value(self.value)}    [{self.justification}]"


def _is_determined(value) -> bool:
    if value is None or isinstance(value, _Unknown):
        return False
    if isinstance(value, Interval):
        return value.is_exact
    if isinstance(value, dict):
        return all(_is_determined(v) for v in value.values())
    if isinstance(value, (list, tuple)):
        return all(_is_determined(v) for v in value)
    return True


def encode_value(v):
    if v is None or isinstance(v, _Unknown):
        return "unknown"
    if isinstance(v, bool):
        return v
    if isinstance(v, Interval):
        return {"lo": encode_value(v.lo), "hi": encode_value(v.hi)}
    if isinstance(v, UpperBound):
        return {"upper_bound": encode_value(v.bound)}
    if isinstance(v, float):
        if v == POS_INF:
            return "inf"
        if v == NEG_INF:
            return "-inf"
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    return v


def format_value(v) -> str:
    if v is None or isinstance(v, _Unknown):
        return "unknown"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, UpperBound):
        return f"<= {format_value(v.bound)}"
    if isinstance(v, dict):
        return ", ".join(f"{k}: {format_value(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    return str(v)


def _intersect(a: Interval, b: Interval) -> Interval:
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        raise RuntimeError(f"inconsistent certificates: {a} and {b} do not overlap")
    return Interval(lo, hi)


# -- Frobenius test exponent arithmetic ----------------------------------------


def least_exponent(p: int, target: float, strict: bool = False) -> int:
    """Least e >= 0 with ``p**e >= target`` (``>`` when ``strict``)."""
    e = 0
    while (p**e <= target) if strict else (p**e < target):
        e += 1
    return e


def binomial_hsl_sum(h: Sequence[HslValue], d: int) -> HslValue:
    """``sum_j C(d, j) h_j`` over ``j = 0..len(h)-1``; upper bounds propagate."""
    if any(isinstance(x, _Unknown) for x in h):
        return UNKNOWN
    total = sum(math.comb(d, j) * bound_of(x) for j, x in enumerate(h))
    total = int(total) if total != POS_INF else POS_INF
    return total if all(is_exact(x) for x in h) else UpperBound(total)


def quy_fte_bound(h: Sequence[HslValue], d: int) -> HslValue:
    """Frobenius test exponent bound for weakly F-nilpotent rings: ``sum C(d,j) h_j``."""
    if len(h) != d + 1:
        raise ValueError(f"need h_0..h_{d} ({d + 1} values), got {len(h)}")
    return binomial_hsl_sum(h, d)


def maddox_e1(p: int, d: int, n_annihilator: int) -> int:
    """Least e with ``p^e >= 2^(d-1) N``."""
    if n_annihilator < 0:
        raise ValueError("N must be >= 0")
    return least_exponent(p, 2 ** (d - 1) * n_annihilator if d >= 1 else n_annihilator)


def maddox_fte_bound(h: Sequence[HslValue], d: int, n_annihilator: int, p: int) -> HslValue:
    """Bound for generalized weakly F-nilpotent rings: ``e_1 + sum C(d,j) h_j``."""
    return _add(maddox_e1(p, d, n_annihilator), quy_fte_bound(h, d))


def _add(e: int, v: HslValue) -> HslValue:
    if isinstance(v, _Unknown):
        return UNKNOWN
    if isinstance(v, UpperBound):
        return UpperBound(v.bound + e)
    return v + e


def segre_coarse_fte(d_t: int, max_hsl: HslValue) -> HslValue:
    """``2^{d_T} max{HSL R, HSL S}``."""
    if isinstance(max_hsl, _Unknown):
        return UNKNOWN
    if isinstance(max_hsl, UpperBound):
        return UpperBound(2**d_t * max_hsl.bound)
    return 2**d_t * max_hsl


def segre_gwfn_e1(p: int, d_t: int, n_annihilator: int) -> int:
    """Least e with ``p^e >= (N + 1) 2^(d_T - 1)``."""
    if n_annihilator < 0:
        raise ValueError("N must be >= 0")
    return least_exponent(p, (n_annihilator + 1) * 2 ** (d_t - 1) if d_t >= 1 else n_annihilator + 1)


def f_exp(a_j, p: int) -> int:
    """Least e with ``p^e > a_j``; 0 whenever ``a_j < 1`` (including ``-inf``)."""
    if a_j is None:
        raise ValueError("a-invariant unknown")
    if a_j < 1:
        return 0
    return least_exponent(p, a_j, strict=True)


# -- Segre products --------------------------------------------------------------


@dataclass(frozen=True)
class KunnethSummand:
    label: str
    kind: str  # "A_R", "A_S" or "mixed"
    r: int | None
    s: int | None
    is_zero: bool | None
    nilsupport: NilSupport
    a: float | None
    dense: bool
    hsl: HslValue
    hsl_deg0: HslValue
    dim0: int | None
    dim_g0: int | None


@dataclass(frozen=True)
class KunnethSummandReport:
    index: int
    summands: tuple[KunnethSummand, ...]

    def nonzero(self) -> tuple[KunnethSummand, ...]:
        return tuple(s for s in self.summands if s.is_zero is not True)

    def labels(self) -> list[str]:
        return [s.label for s in self.nonzero()]


def _nil_dim(dim0, dim_g0):
    if dim0 is None or dim_g0 is None:
        return None
    return dim0 - dim_g0


def tensor_degree0_hsl(h_a: HslValue, g_a, n_a, h_b: HslValue, g_b, n_b) -> HslValue:
    """HSL of ``A (x) B`` for endomorphisms with Fitting data (hsl, dim G, dim N).

    ``A (x) B`` splits into ``G_A(x)G_B``, ``G_A(x)N_B``, ``N_A(x)G_B`` and
    ``N_A(x)N_B``; the middle two have nilpotency index ``hsl_B`` and ``hsl_A``,
    the last one ``min(hsl_A, hsl_B)``.
    """
    if None in (g_a, n_a, g_b, n_b):
        return _unknown_or_bound(hsl_max([h_a, h_b]))
    parts: list[HslValue] = [0]
    if g_b > 0 and n_a > 0:
        parts.append(h_a)
    if g_a > 0 and n_b > 0:
        parts.append(h_b)
    if n_a > 0 and n_b > 0:
        parts.append(hsl_min(h_a, h_b))
    return hsl_max(parts)


def _unknown_or_bound(v: HslValue) -> HslValue:
    if isinstance(v, _Unknown) or isinstance(v, UpperBound):
        return v
    return UpperBound(v)


def _mul(a, b):
    return None if a is None or b is None else a * b


def _require_kunneth(prof: RingProfile, side: str):
    for j in (0, 1):
        if prof.record(j).is_zero is not True:
            raise HypothesisError(
                f"the Künneth decomposition needs depth >= 2, i.e. H^0 = H^1 = 0, "
                f"but H^{j} of {side} ({prof.name}) is not certified zero"
            )


def _single_summand(rec: CohomologyRecord, label: str, kind: str, p: int) -> KunnethSummand:
    """``H^j(R) # S`` (or its mirror) for S standard graded with injective Frobenius."""
    if rec.is_zero:
        return KunnethSummand(label, kind, None, None, True, NilSupport.empty(), NEG_INF, False, 0, 0, 0, 0)
    a = rec.a
    if a is None:
        is_zero = None
    else:
        is_zero = True if a < 0 else (False if rec.is_zero is False else None)
    if is_zero:
        return KunnethSummand(label, kind, None, None, True, NilSupport.empty(), NEG_INF, False, 0, 0, 0, 0)
    ns = restrict_nonneg(rec.nilsupport)
    if a == 0:
        hsl = rec.hsl_deg0
    elif a is None or isinstance(rec.hsl_deg0, _Unknown):
        hsl = rec.hsl if not isinstance(rec.hsl, _Unknown) else UNKNOWN
    else:
        hsl = hsl_min(UpperBound(max(bound_of(rec.hsl_deg0), f_exp(a, p))), rec.hsl)
    return KunnethSummand(label, kind, None, None, is_zero, ns, a, False, hsl, rec.hsl_deg0, rec.dim0, rec.dim_g0)


def _mixed_summand(rr: CohomologyRecord, sr: CohomologyRecord, r: int, s: int) -> KunnethSummand:
    label = f"H^{r}(R) # H^{s}(S)"
    if rr.is_zero or sr.is_zero:
        return KunnethSummand(label, "mixed", r, s, True, NilSupport.empty(), NEG_INF, False, 0, 0, 0, 0)
    ns = nilsupp_intersect(rr.nilsupport, sr.nilsupport)
    if rr.dense and sr.dense and rr.a is not None and sr.a is not None:
        a, dense, is_zero = min(rr.a, sr.a), True, False
    else:
        a = None if rr.a is None or sr.a is None else min(rr.a, sr.a)
        dense, is_zero = False, (True if a is not None and a == NEG_INF else None)
    nil_r, nil_s = rr.nilpotent(), sr.nilpotent()
    if nil_r and nil_s:
        hsl = hsl_min(rr.hsl, sr.hsl)
    elif nil_r:
        hsl = _unknown_or_bound(rr.hsl)
    elif nil_s:
        hsl = _unknown_or_bound(sr.hsl)
    else:
        hsl = _unknown_or_bound(hsl_max([rr.hsl, sr.hsl]))
    hsl0 = tensor_degree0_hsl(
        rr.hsl_deg0, rr.dim_g0, _nil_dim(rr.dim0, rr.dim_g0),
        sr.hsl_deg0, sr.dim_g0, _nil_dim(sr.dim0, sr.dim_g0),
    )
    return KunnethSummand(label, "mixed", r, s, is_zero, ns, a, dense, hsl, hsl0,
                          _mul(rr.dim0, sr.dim0), _mul(rr.dim_g0, sr.dim_g0))


def kunneth_summands(R: RingProfile, S: RingProfile, j: int) -> KunnethSummandReport:
    summands = []
    if j <= R.dim:
        summands.append(_single_summand(R.record(j), f"H^{j}(R) # S", "A_R", R.p))
    if j <= S.dim:
        summands.append(_single_summand(S.record(j), f"R # H^{j}(S)", "A_S", S.p))
    for r in range(0, R.dim + 1):
        s = j + 1 - r
        if 0 <= s <= S.dim:
            summands.append(_mixed_summand(R.record(r), S.record(s), r, s))
    return KunnethSummandReport(j, tuple(summands))


def _sum_opt(values):
    values = list(values)
    return None if any(v is None for v in values) else sum(values)


def _record_from_summands(rep: KunnethSummandReport) -> CohomologyRecord:
    live = rep.nonzero()
    if not live:
        return CohomologyRecord.zero(rep.index)
    ns = live[0].nilsupport
    for s in live[1:]:
        ns = nilsupp_union(ns, s.nilsupport)
    is_zero = False if any(s.is_zero is False for s in live) else None
    a_vals = [s.a for s in live]
    a = None if any(x is None for x in a_vals) else max(a_vals)
    dense = any(s.dense and s.a == a for s in live if s.kind == "mixed") and a is not None
    return CohomologyRecord(
        index=rep.index,
        is_zero=is_zero,
        a=a,
        nilsupport=ns,
        hsl=hsl_max(s.hsl for s in live),
        hsl_deg0=hsl_max(s.hsl_deg0 for s in live),
        dim0=_sum_opt(s.dim0 for s in live),
        dim_g0=_sum_opt(s.dim_g0 for s in live),
        dense=dense,
    )


def _and_flags(*vals):
    if any(v is False for v in vals):
        return False
    if all(v is True for v in vals):
        return True
    return None


def segre_profile(R: RingProfile, S: RingProfile) -> tuple[RingProfile, list[KunnethSummandReport]]:
    """Profile of ``T = R # S`` assembled summand by summand from the Künneth formula."""
    if R.p != S.p:
        raise HypothesisError(f"characteristics differ: {R.p} vs {S.p}")
    _require_kunneth(R, "R")
    _require_kunneth(S, "S")
    d_t = R.dim + S.dim - 1
    reports = [kunneth_summands(R, S, j) for j in range(d_t + 1)]
    records = tuple(_record_from_summands(rep) for rep in reports)
    lower_zero = [r.is_zero for r in records[:d_t]]
    flags = RingFlags(
        cm=_and_flags(*lower_zero),
        depth_ge_2=_and_flags(records[0].is_zero, records[1].is_zero) if d_t >= 1 else None,
        equidimensional=_and_flags(R.flags.equidimensional, S.flags.equidimensional),
        punctured_f_rational=None,
        punctured_f_nilpotent=None,
        generalized_cm=_and_flags(R.flags.generalized_cm, S.flags.generalized_cm),
    )
    notes = (f"Segre product of [{R.name}] and [{S.name}]",)
    return RingProfile(f"({R.name}) # ({S.name})", R.p, d_t, records, flags, frozenset(), notes), reports


def segre_fdepth_bounds(R: RingProfile, S: RingProfile) -> BoundReport:
    """F-depth of ``R # S`` from the b-invariants and F-depths of the factors.

    Lower bound ``min{b(R), b(S), f}`` with ``f = F-depth R + F-depth S - 1``.
    A finite ``b(R)`` makes ``H^{b(R)}(R) # S`` non-nilpotent in degree 0, so
    ``F-depth T <= min{b(R), b(S)}``; when that is at most ``f`` the value is
    exact.  The result is intersected with the summand-by-summand assembly.
    """
    T, _ = segre_profile(R, S)
    fr, fs = R.fdepth, S.fdepth
    br, bs = R.b_ring, S.b_ring
    f_lo, f_hi = fr.lo + fs.lo - 1, fr.hi + fs.hi - 1
    lower = min(br.lo, bs.lo, f_lo)
    upper = min(br.hi, bs.hi, T.dim)
    theorem = Interval(min(lower, upper), upper)
    value = _intersect(theorem, T.fdepth)
    notes = [f"f = F-depth R + F-depth S - 1 in [{f_lo}, {f_hi}]"]
    if fr.is_exact and fs.is_exact and br.value == fr.value and bs.value == fs.value:
        notes.append(
            "F-depth R = b(R) and F-depth S = b(S): then H^{b(R)}(R) # S is not nilpotent, "
            f"so F-depth T = min(b(R), b(S)) = {int(min(br.lo, bs.lo))}, not f"
        )
    wfn = None
    if R.weakly_f_nilpotent and S.weakly_f_nilpotent:
        if br.lo == POS_INF and bs.lo == POS_INF:
            wfn = True
            notes.append("R, S weakly F-nilpotent with b(R) = b(S) = inf: T weakly F-nilpotent and b(T) = inf")
        elif br.hi < POS_INF or bs.hi < POS_INF:
            wfn = False
    if value.is_exact:
        wfn = value.lo >= T.dim
    return BoundReport(
        "F-depth T",
        value,
        "Segre F-depth bound: F-depth T >= min{b(R), b(S), F-depth R + F-depth S - 1}; "
        "a finite b(R) or b(S) caps it from above",
        {"F-depth R": fr, "F-depth S": fs, "b(R)": br, "b(S)": bs, "dim T": T.dim},
        tuple(notes) + (f"weakly F-nilpotent: {format_value(wfn)}", f"b(T): {T.b_ring}"),
    )


def segre_wfn_verdict(R: RingProfile, S: RingProfile) -> BoundReport:
    """Weak F-nilpotence of ``R # S`` for weakly F-nilpotent factors: iff b(R) = b(S) = inf."""
    if not (R.weakly_f_nilpotent and S.weakly_f_nilpotent):
        raise HypothesisError("both factors must be certified weakly F-nilpotent")
    br, bs = R.b_ring, S.b_ring
    if br.lo == POS_INF and bs.lo == POS_INF:
        verdict = True
    elif br.hi < POS_INF or bs.hi < POS_INF:
        verdict = False
    else:
        verdict = None
    T, _ = segre_profile(R, S)
    return BoundReport(
        "T weakly F-nilpotent",
        verdict,
        "for weakly F-nilpotent R and S, R # S is weakly F-nilpotent iff b(R) = b(S) = inf, and then b(T) = inf",
        {"b(R)": br, "b(S)": bs},
        (f"b(T) = {T.b_ring}",) if verdict else (),
    )


def segre_gfdepth(R: RingProfile, S: RingProfile) -> BoundReport:
    """gF-depth of ``R # S``: ``g_T >= g_R + g_S - 1``, equal iff the nil-supports
    of ``H^{g_R}(R)`` and ``H^{g_S}(S)`` share a nonzero degree."""
    T, _ = segre_profile(R, S)
    gr, gs = R.gfdepth, S.gfdepth
    lower = gr.lo + gs.lo - 1
    notes = []
    value = Interval(min(lower, T.gfdepth.hi), T.gfdepth.hi)
    if gr.is_exact and gs.is_exact and gr.lo <= R.dim and gs.lo <= S.dim:
        common = nilsupp_intersect(R.record(int(gr.lo)).nilsupport, S.record(int(gs.lo)).nilsupport)
        gen = common.is_generalized_nilpotent()
        if gen is False:
            value = _intersect(value, Interval.exact(lower))
            notes.append("nil-supports meet outside {0}: equality holds")
        elif gen is True:
            value = Interval(min(lower + 1, value.hi), value.hi)
            notes.append("nil-supports meet only inside {0}: strict inequality"
                         + (" (capped at dim T)" if lower + 1 > value.hi else ""))
        else:
            notes.append("intersection of nil-supports not certified: equality undecided")
    value = _intersect(value, T.gfdepth)
    gwfn = T.generalized_weakly_f_nilpotent
    if R.generalized_weakly_f_nilpotent and S.generalized_weakly_f_nilpotent:
        gwfn = True
        notes.append("R and S generalized weakly F-nilpotent: so is T")
    return BoundReport(
        "gF-depth T",
        value,
        "Segre gF-depth bound: gF-depth T >= gF-depth R + gF-depth S - 1, with equality iff "
        "nilsupp H^{g_R}(R) and nilsupp H^{g_S}(S) meet outside {0}",
        {"gF-depth R": gr, "gF-depth S": gs, "dim T": T.dim},
        tuple(notes) + (f"generalized weakly F-nilpotent: {format_value(gwfn)}",),
    )


def _segre_hsl_terms(R: RingProfile, S: RingProfile) -> list[HslValue]:
    d_t = R.dim + S.dim - 1
    out = []
    for j in range(d_t + 1):
        rj, sj = R.record(j), S.record(j)
        terms: list[HslValue] = [
            rj.hsl_deg0,
            sj.hsl_deg0,
            f_exp(rj.a, R.p) if rj.a is not None else UNKNOWN,
            f_exp(sj.a, S.p) if sj.a is not None else UNKNOWN,
        ]
        for r in range(R.dim + 1):
            s = j + 1 - r
            if not 0 <= s <= S.dim:
                continue
            rr, sr = R.record(r), S.record(s)
            if rr.is_zero or sr.is_zero:
                continue
            nil_r, nil_s = rr.nilpotent(), sr.nilpotent()
            if nil_r and nil_s:
                terms.append(hsl_min(rr.hsl, sr.hsl))
            elif nil_r:
                terms.append(rr.hsl)
            elif nil_s:
                terms.append(sr.hsl)
            else:
                terms.append(hsl_max([rr.hsl, sr.hsl]))
        out.append(hsl_max(terms))
    return out


def segre_hsl_bounds(R: RingProfile, S: RingProfile) -> list[HslValue]:
    """Upper bounds ``H_j`` on ``HSL H^j(R # S)`` for weakly F-nilpotent factors."""
    if not (R.weakly_f_nilpotent and S.weakly_f_nilpotent):
        raise HypothesisError("the Segre HSL bound needs R and S weakly F-nilpotent")
    return _segre_hsl_terms(R, S)


def segre_fte_bound(R: RingProfile, S: RingProfile) -> BoundReport:
    """Refined ``sum C(d_T, j) H_j`` and coarse ``2^{d_T} max{HSL R, HSL S}`` bounds."""
    if not (R.weakly_f_nilpotent and S.weakly_f_nilpotent):
        raise HypothesisError("the Segre Fte bound needs R and S weakly F-nilpotent")
    if not (R.b_ring.lo == POS_INF and S.b_ring.lo == POS_INF):
        raise HypothesisError("the Segre Fte bound needs b(R) = b(S) = inf")
    d_t = R.dim + S.dim - 1
    h = segre_hsl_bounds(R, S)
    refined = binomial_hsl_sum(h, d_t)
    coarse = segre_coarse_fte(d_t, hsl_max([R.hsl_ring, S.hsl_ring]))
    return BoundReport(
        "Fte* T",
        {"refined": refined, "coarse": coarse},
        "weakly F-nilpotent Segre factors with b = inf: Fte* T <= sum_j C(d_T, j) H_j <= 2^{d_T} max{HSL R, HSL S}",
        {"H_j": h, "d_T": d_t},
    )


def segre_gwfn_fte_bound(R: RingProfile, S: RingProfile, n_annihilator: int) -> BoundReport:
    """``e_1 + sum C(d_T, j) H_j`` with ``p^{e_1} >= (N + 1) 2^{d_T - 1}``."""
    if not (R.generalized_weakly_f_nilpotent and S.generalized_weakly_f_nilpotent):
        raise HypothesisError("needs R and S generalized weakly F-nilpotent")
    d_t = R.dim + S.dim - 1
    h = _segre_hsl_terms(R, S)
    e1 = segre_gwfn_e1(R.p, d_t, n_annihilator)
    return BoundReport(
        "Fte* T",
        _add(e1, binomial_hsl_sum(h, d_t)),
        "generalized weakly F-nilpotent Segre factors: Fte* T <= e_1 + sum_j C(d_T, j) H_j, "
        "p^{e_1} >= (N + 1) 2^{d_T - 1}",
        {"N": n_annihilator, "e_1": e1, "H_j": h, "d_T": d_t},
    )


def segre_length_deg0(R: RingProfile, S: RingProfile, j: int) -> BoundReport:
    """Length of ``H^j(T) / 0^F`` for ``j < gF-depth R + gF-depth S - 1``.

    Equals ``dim G^j(R) + dim G^j(S) + sum_{r+s=j+1} dim G^r(R) dim G^s(S)``,
    where ``G^j`` is the degree-0 piece modulo its nilpotent part; the product
    form of the mixed terms needs both factors generalized Cohen-Macaulay.
    """
    gr, gs = R.gfdepth, S.gfdepth
    if not j < gr.lo + gs.lo - 1:
        raise HypothesisError(f"needs j < gF-depth R + gF-depth S - 1 (= {gr.lo + gs.lo - 1})")
    base = [R.record(j).dim_g0 if j <= R.dim else 0, S.record(j).dim_g0 if j <= S.dim else 0]
    mixed = []
    gcm = R.flags.generalized_cm and S.flags.generalized_cm
    for r in range(R.dim + 1):
        s = j + 1 - r
        if 0 <= s <= S.dim:
            mixed.append(_mul(R.record(r).dim_g0, S.record(s).dim_g0) if gcm else None)
    total = _sum_opt(base + mixed)
    return BoundReport(
        f"length of H^{j}(T) modulo its Frobenius closure of zero",
        total,
        "Künneth additivity of lengths; mixed terms are dim G^r(R) * dim G^s(S) for generalized Cohen-Macaulay factors",
        {"dim G^j(R)": base[0], "dim G^j(S)": base[1], "mixed": mixed},
        () if gcm else ("generalized Cohen-Macaulay flags not both set: mixed terms unknown",),
    )


# -- Veronese subrings -------------------------------------------------------------


def _veronese_record(rec: CohomologyRecord, v: int) -> CohomologyRecord:
    if rec.is_zero:
        return rec
    a = rec.a
    if a is not None and a not in (NEG_INF, POS_INF):
        a = a // v
    is_zero = False if rec.dense and rec.is_zero is False and a is not None else None
    hsl = rec.hsl if (is_exact(rec.hsl) and rec.hsl == 0) else _unknown_or_bound(rec.hsl)
    return CohomologyRecord(
        index=rec.index,
        is_zero=is_zero,
        a=a,
        nilsupport=veronese_restrict(rec.nilsupport, v),
        hsl=hsl,
        hsl_deg0=rec.hsl_deg0,
        dim0=rec.dim0,
        dim_g0=rec.dim_g0,
        dense=rec.dense,
        asserted=rec.asserted,
    )


def veronese_profile(R: RingProfile, v: int) -> RingProfile:
    """Profile of ``R^(v)`` in its standard grading; ``[H^j(R^(v))]_t = [H^j(R)]_{vt}``."""
    if v < 1:
        raise ValueError("Veronese index must be >= 1")
    if v == 1:
        return R
    records = tuple(_veronese_record(r, v) for r in R.records)
    flags = RingFlags(
        cm=R.flags.cm,
        depth_ge_2=R.flags.depth_ge_2,
        equidimensional=R.flags.equidimensional,
        punctured_f_rational=None,
        punctured_f_nilpotent=None,
        generalized_cm=R.flags.generalized_cm,
    )
    return RingProfile(f"({R.name})^({v})", R.p, R.dim, records, flags, frozenset(),
                       R.notes + (f"Veronese subring of index {v}",))


def veronese_fdepth(R: RingProfile, v: int) -> BoundReport:
    S = veronese_profile(R, v)
    f = R.fdepth
    notes = []
    value = Interval(f.lo, S.fdepth.hi)
    if f.is_exact and f.lo <= R.dim and R.record(int(f.lo)).degree0_member():
        value = _intersect(value, Interval.exact(f.lo))
        notes.append(f"b_f(R) = 0 at f = {int(f.lo)}: F-depth is exactly f")
    value = _intersect(value, S.fdepth)
    return BoundReport(
        "F-depth R^(v)",
        value,
        "Veronese descent: F-depth R <= F-depth R^(v), with equality when b_f(R) = 0",
        {"F-depth R": f, "v": v},
        tuple(notes),
    )


def veronese_fnilpotence_equivalence(R: RingProfile, v_list: Iterable[int]) -> BoundReport:
    """F-nilpotence of every requested Veronese subring, decided by ``b(R) = inf``.

    Needs R weakly F-nilpotent and F-nilpotent on the punctured spectrum; then
    R, any single R^(v) and all R^(v) are F-nilpotent together, iff b(R) = inf.
    """
    v_list = list(v_list)
    punct = R.flags.punctured_f_nilpotent or R.flags.punctured_f_rational
    inputs = {"weakly F-nilpotent": R.weakly_f_nilpotent, "F-nilpotent on punctured spectrum": punct,
              "b(R)": R.b_ring, "asserted flags": sorted(R.asserted_flags)}
    justification = ("for R weakly F-nilpotent and F-nilpotent on the punctured spectrum: "
                     "R F-nilpotent <=> b(R) = inf <=> every R^(v) F-nilpotent <=> some R^(v) F-nilpotent")
    if not R.weakly_f_nilpotent or not punct:
        return BoundReport("Veronese F-nilpotence", {v: None for v in v_list}, justification, inputs,
                           ("hypotheses not certified: need weak F-nilpotence and the punctured-spectrum flag",))
    br = R.b_ring
    verdict = True if br.lo == POS_INF else (False if br.hi < POS_INF else None)
    return BoundReport("Veronese F-nilpotence", {v: verdict for v in v_list}, justification, inputs)


def veronese_fte_bound(R: RingProfile, generalized: bool = False, n_annihilator: int | None = None) -> BoundReport:
    """``Fte* R^(v) <= sum C(d, j) HSL H^j(R)`` (plus ``e_1`` in the generalized case)."""
    hsl = [r.hsl for r in R.records]
    if generalized:
        if not R.generalized_weakly_f_nilpotent:
            raise HypothesisError("needs R generalized weakly F-nilpotent")
        if n_annihilator is None:
            raise HypothesisError("the generalized bound needs the annihilator exponent N")
        e1 = maddox_e1(R.p, R.dim, n_annihilator)
        value = _add(e1, binomial_hsl_sum(hsl, R.dim))
        just = "Veronese of a generalized weakly F-nilpotent ring: Fte* <= e_1 + sum_j C(d, j) HSL H^j(R), p^{e_1} >= N 2^{d-1}"
        inputs = {"HSL H^j(R)": hsl, "N": n_annihilator, "e_1": e1, "d": R.dim}
    else:
        if not R.weakly_f_nilpotent:
            raise HypothesisError("needs R weakly F-nilpotent")
        value = binomial_hsl_sum(hsl, R.dim)
        just = "Veronese of a weakly F-nilpotent ring: Fte* <= sum_j C(d, j) HSL H^j(R)"
        inputs = {"HSL H^j(R)": hsl, "d": R.dim}
    return BoundReport("Fte* R^(v)", value, just, inputs)


# -- diagonal subalgebras -----------------------------------------------------------


@dataclass(frozen=True)
class DiagonalSpec:
    """``Delta = (g, h)`` and the bidegree ``(d1, d2)`` of the form f."""

    g: int
    h: int
    d1: int = 0
    d2: int = 0

    def __post_init__(self):
        if self.g < 0 or self.h < 0:
            raise ValueError("g and h must be nonnegative")
        if self.g == 0 and self.h == 0:
            raise ValueError("Delta = (0, 0) does not define a diagonal subalgebra")

    def l1(self, x):
        return -self.d1 + self.g * x

    def l2(self, x):
        return -self.d2 + self.h * x


def diagonal_profile(R: RingProfile, S: RingProfile, spec: DiagonalSpec) -> RingProfile:
    """``T_Delta = R^(g) # S^(h)``; a zero entry of Delta leaves a single Veronese."""
    if spec.h == 0:
        return veronese_profile(R, spec.g)
    if spec.g == 0:
        return veronese_profile(S, spec.h)
    T, _ = segre_profile(veronese_profile(R, spec.g), veronese_profile(S, spec.h))
    return replace(T, name=f"diagonal ({spec.g},{spec.h}) of [{R.name}] and [{S.name}]")


def diagonal_fdepth(R: RingProfile, S: RingProfile, spec: DiagonalSpec) -> BoundReport:
    """F-depth of ``T_Delta`` from the factor data, clause by clause.

    With ``f_T = f_R + f_S - 1``:

    (a) ``F-depth T_Delta >= min{b(R), b(S), f_T}`` (Veronese subrings keep b).
    (b) ``H^{f_T}(T_Delta)`` is generalized nilpotent if ``H^{f_R}(R)`` or
        ``H^{f_S}(S)`` is.
    (c) a finite ``b(R)`` or ``b(S)`` caps the F-depth: ``F-depth <= min{b(R), b(S)}``.
    (d) ``F-depth T_Delta > f_T`` if ``b_{f_T}(R) != 0``, ``b_{f_T}(S) != 0`` and
        either ``H^{f_R}(R)`` is generalized nilpotent with ``b_{f_S}(S) != 0`` or
        the mirror condition holds, provided (a) already reaches ``f_T``.

    The result is intersected with the F-depth of the assembled profile.
    """
    T = diagonal_profile(R, S, spec)
    if spec.g == 0 or spec.h == 0:
        base = R if spec.h == 0 else S
        rep = veronese_fdepth(base, spec.g or spec.h)
        return replace(rep, quantity="F-depth T_Delta", inputs={**rep.inputs, "Delta": (spec.g, spec.h)})
    fr, fs = R.fdepth, S.fdepth
    br, bs = R.b_ring, S.b_ring
    notes = []
    clauses: dict[str, Any] = {}
    if not (fr.is_exact and fs.is_exact):
        value = T.fdepth
        notes.append("factor F-depths not exact: only the assembled profile is used")
        return BoundReport("F-depth T_Delta", value, "assembled Künneth profile of R^(g) # S^(h)",
                           {"F-depth R": fr, "F-depth S": fs, "Delta": (spec.g, spec.h)}, tuple(notes))
    f_r, f_s = int(fr.lo), int(fs.lo)
    f_t = f_r + f_s - 1
    lower = min(br.lo, bs.lo, f_t)
    clauses["a"] = lower
    gen_r = R.record(f_r).generalized_nilpotent()
    gen_s = S.record(f_s).generalized_nilpotent()
    clauses["b"] = True if (gen_r or gen_s) else None
    upper = min(br.hi, bs.hi, T.dim)
    clauses["c"] = upper if upper < POS_INF else None

    def nonzero_b(prof: RingProfile, j: int):
        m = prof.record(j).degree0_member()
        return None if m is None else not m

    d_fires = (
        nonzero_b(R, f_t) is True
        and nonzero_b(S, f_t) is True
        and ((gen_r is True and nonzero_b(S, f_s) is True) or (gen_s is True and nonzero_b(R, f_r) is True))
    )
    clauses["d"] = bool(d_fires and lower >= f_t)
    if clauses["d"]:
        lower = max(lower, f_t + 1)
    theorem = Interval(min(lower, upper), upper)
    value = _intersect(theorem, T.fdepth)
    if br.value == f_r and bs.value == f_s:
        notes.append("b(R) = f_R and b(S) = f_S: the cap from b gives min(f_R, f_S), below f_T")
    notes.append(f"f_T = {f_t}, dim T_Delta = {T.dim}")
    return BoundReport(
        "F-depth T_Delta",
        value,
        "diagonal subalgebra T_Delta = R^(g) # S^(h): Segre F-depth bound with Veronese descent",
        {"F-depth R": fr, "F-depth S": fs, "b(R)": br, "b(S)": bs, "Delta": (spec.g, spec.h), "clauses": clauses},
        tuple(notes),
    )


def diagonal_hypersurface_bounds(t_profile: RingProfile, dims_match: bool) -> BoundReport:
    """``F-depth (T/fT)_Delta >= F-depth T_Delta - 1`` and the same for gF-depth."""
    fd, gd = t_profile.fdepth, t_profile.gfdepth
    value = {"F-depth lower bound": fd.lo - 1, "gF-depth lower bound": gd.lo - 1}
    notes = []
    if dims_match:
        if t_profile.weakly_f_nilpotent:
            value["weakly F-nilpotent"] = True
        if t_profile.generalized_weakly_f_nilpotent:
            value["generalized weakly F-nilpotent"] = True
    else:
        notes.append("dim (T/fT)_Delta = dim T_Delta - 1 not asserted: no (generalized) weak F-nilpotence verdict")
    return BoundReport(
        "(T/fT)_Delta",
        value,
        "short exact sequence 0 -> T(-d,-e)_Delta -> T_Delta -> (T/fT)_Delta -> 0 with twisted action f^{p-1}F",
        {"F-depth T_Delta": fd, "gF-depth T_Delta": gd, "dims_match": dims_match},
        tuple(notes),
    )


def _ceil_div(num, den: int):
    """``ceil(num / den)`` for num an int or -inf."""
    if num == NEG_INF:
        return NEG_INF
    return -((-int(num)) // den)


def _bullet_ceiling(b_value, shift: int, ratio: Fraction, divisor: int, other: Fraction) -> bool | None:
    """``other >= ceil((b + shift) / divisor)`` or ``other`` not an integer."""
    if other.denominator != 1:
        return True
    if isinstance(b_value, UpperBound):
        # the ceiling is monotone, so meeting it at the bound suffices
        return True if other >= _ceil_div(b_value.bound + shift, divisor) else None
    if b_value is None or isinstance(b_value, _Unknown):
        return None
    return other >= _ceil_div(b_value + shift, divisor)


def diagonal_quotient_conditions(b_r, b_s, spec: DiagonalSpec,
                                 fdepth_t: Interval | None = None, dim_t: int | None = None) -> BoundReport:
    """Sufficient numerical conditions for ``F-depth (T/fT)_Delta >= F-depth T_Delta``.

    ``b_r`` and ``b_s`` are ``b_{f_T}(R)`` and ``b_{f_T}(S)``: an int, ``-inf``
    or an :class:`UpperBound`.  Bullets, with ``(d, e)`` the bidegree of f:

    1. ``e/h >= ceil((b_r + d)/g)`` or ``e/h`` not an integer;
    2. ``d/g >= ceil((b_s + e)/h)`` or ``d/g`` not an integer;
    3. ``det [[d, e], [g, h]] != 0`` or ``{e/h, d/g}`` not inside Z.

    With ``fdepth_t`` and ``dim_t`` supplied, also reports whether the
    quotient (of dimension ``dim_t - 1``) is weakly F-nilpotent.
    """
    if spec.g == 0 or spec.h == 0:
        raise HypothesisError("the quotient conditions need g >= 1 and h >= 1")
    d, e, g, h = spec.d1, spec.d2, spec.g, spec.h
    e_over_h = Fraction(e, h)
    d_over_g = Fraction(d, g)
    bullets = {
        "e/h >= ceil((b_R + d)/g) or e/h not integral": _bullet_ceiling(b_r, d, e_over_h, g, e_over_h),
        "d/g >= ceil((b_S + e)/h) or d/g not integral": _bullet_ceiling(b_s, e, d_over_g, h, d_over_g),
        "det [[d,e],[g,h]] != 0 or {e/h, d/g} not in Z": (d * h - e * g != 0)
        or not (e_over_h.denominator == 1 and d_over_g.denominator == 1),
    }
    vals = list(bullets.values())
    holds = True if all(v is True for v in vals) else (False if any(v is False for v in vals) else None)
    value: dict[str, Any] = {"conditions hold": holds}
    notes = [f"e/h = {e_over_h}, d/g = {d_over_g}, det = {d * h - e * g}"]
    if holds and fdepth_t is not None:
        value["F-depth (T/fT)_Delta lower bound"] = fdepth_t.lo
        if dim_t is not None:
            if fdepth_t.lo >= dim_t:
                notes.append("F-depth T_Delta = dim T_Delta: use the hypersurface bound instead")
            value["(T/fT)_Delta weakly F-nilpotent"] = True if fdepth_t.lo >= dim_t - 1 else None
    return BoundReport(
        "diagonal quotient conditions",
        value,
        "numerical conditions with L_1(x) = -d + g x, L_2(x) = -e + h x: the twisted module H^{f_T}(T(-d,-e)_Delta) "
        "is nilpotent, so F-depth (T/fT)_Delta >= F-depth T_Delta",
        {"b_{f_T}(R)": b_r, "b_{f_T}(S)": b_s, "Delta": (g, h), "bidegree": (d, e), "bullets": bullets},
        tuple(notes),
    )


def diagonal_quotient_from_profiles(R: RingProfile, S: RingProfile, spec: DiagonalSpec) -> BoundReport:
    """Evaluate the quotient conditions with b-values and F-depth read from the profiles."""
    fr, fs = R.fdepth, S.fdepth
    if not (fr.is_exact and fs.is_exact):
        raise HypothesisError("needs exact F-depths of R and S")
    f_t = int(fr.lo + fs.lo - 1)
    t_rep = diagonal_fdepth(R, S, spec)
    T = diagonal_profile(R, S, spec)
    rep = diagonal_quotient_conditions(R.b_j(f_t), S.b_j(f_t), spec, t_rep.value, T.dim)
    return replace(rep, inputs={**rep.inputs, "f_T": f_t, "F-depth T_Delta": t_rep.value, "dim T_Delta": T.dim})


# -- gluing ------------------------------------------------------------------------


def glue_fdepth(f1: Interval, f2: Interval, fb: Interval, generalized: bool = False) -> BoundReport:
    """(g)F-depth of ``R`` glued from ``R/a_1``, ``R/a_2`` along ``R/(a_1 + a_2)``.

    Lower bound ``min{f1, f2, fb + 1}``; when ``fb + 1 < min{f1, f2}`` the
    value is exactly ``fb + 1``.
    """
    name = "gF-depth R" if generalized else "F-depth R"
    lower = min(f1.lo, f2.lo, fb.lo + 1)
    upper = POS_INF
    notes = []
    if fb.hi + 1 < min(f1.lo, f2.lo):
        upper = fb.hi + 1
        notes.append("fb + 1 < min(f1, f2): the connecting map makes H^{fb+1}(R) non-nilpotent")
    return BoundReport(
        name,
        Interval(lower, upper),
        f"gluing: {name} >= min{{{name[:-2]} R/a_1, {name[:-2]} R/a_2, {name[:-2]} R/(a_1+a_2) + 1}}",
        {"R/a_1": f1, "R/a_2": f2, "R/(a_1+a_2)": fb, "generalized": generalized},
        tuple(notes),
    )


def glue_wfn_check(dims: Sequence[int], verdicts: Sequence[bool | None], equidim: bool | None = None,
                   generalized: bool = False) -> BoundReport:
    """Does the gluing corollary certify that R is (generalized) weakly F-nilpotent?

    ``dims = (d, dim R/a_1, dim R/a_2, dim R/(a_1 + a_2))``; ``verdicts`` are
    the (generalized) weak F-nilpotence of the three pieces.
    """
    d, d1, d2, db = dims
    reasons = []
    if d < 2:
        reasons.append("needs dim R >= 2")
    if not (d1 == d and d2 == d):
        reasons.append("needs dim R/a_1 = dim R/a_2 = dim R")
    if db < d - 1:
        reasons.append("needs dim R/(a_1 + a_2) >= dim R - 1")
    if not all(v is True for v in verdicts):
        reasons.append("all three pieces must be certified")
    if generalized and equidim is not True:
        reasons.append("the generalized statement needs R equidimensional")
    word = "generalized weakly" if generalized else "weakly"
    return BoundReport(
        f"gluing certifies R {word} F-nilpotent",
        not reasons,
        f"gluing corollary: if R/a_1, R/a_2, R/(a_1 + a_2) are {word} F-nilpotent (with the dimension hypotheses), so is R",
        {"dims": tuple(dims), "verdicts": tuple(verdicts), "equidimensional": equidim},
        tuple(reasons),
    )


def glue_hsl_fte(h_b: Sequence[HslValue], h_max: Sequence[HslValue], d: int, case: str,
                 hsl_top: HslValue | None = None) -> BoundReport:
    """HSL and Fte bounds for a glued ring with weakly F-nilpotent pieces.

    ``h_b[j] = HSL H^j(R/b)`` and ``h_max[j] = max_i HSL H^j(R/a_i)``.  ``case``
    is ``"d"`` when ``dim R/b = d`` and ``"d-1"`` when it is ``d - 1``; the
    latter needs ``hsl_top = HSL H^d(R)``.
    """
    if case not in ("d", "d-1"):
        raise ValueError("case must be 'd' or 'd-1'")
    if case == "d-1" and hsl_top is None:
        raise HypothesisError("case dim R/b = d - 1 needs HSL H^d(R)")
    top = d if case == "d" else d - 1
    if len(h_max) < top + 1 or len(h_b) < top:
        raise ValueError(f"need h_max[0..{top}] and h_b[0..{top - 1}]")

    def at(seq, j):
        return 0 if j < 0 else seq[j]

    per_j = [_plus(at(h_b, j - 1), h_max[j]) for j in range(top + 1)]
    b_part = binomial_terms([(math.comb(d, j), h_b[j - 1]) for j in range(1, top + 1)])
    m_part = binomial_terms([(math.comb(d, j), h_max[j]) for j in range(0, top + 1)])
    total = _plus(b_part, m_part)
    if case == "d-1":
        total = _plus(hsl_top, total)
    return BoundReport(
        "Fte R",
        {"Fte bound": total, "HSL H^j(R) bounds": per_j},
        "gluing: HSL H^j(R) <= HSL H^{j-1}(R/b) + h_j, then Quy's bound"
        + (" plus HSL H^d(R)" if case == "d-1" else ""),
        {"h_b": list(h_b), "h_max": list(h_max), "d": d, "case": case, "HSL H^d(R)": hsl_top},
    )


def binomial_terms(pairs: Iterable[tuple[int, HslValue]]) -> HslValue:
    total: HslValue = 0
    for c, v in pairs:
        total = _plus(total, _scale(c, v))
    return total


def _scale(c: int, v: HslValue) -> HslValue:
    if isinstance(v, _Unknown):
        return UNKNOWN
    if isinstance(v, UpperBound):
        return UpperBound(c * v.bound)
    return c * v


def _plus(a: HslValue, b: HslValue) -> HslValue:
    if isinstance(a, _Unknown) or isinstance(b, _Unknown):
        return UNKNOWN
    if isinstance(a, UpperBound) or isinstance(b, UpperBound):
        return UpperBound(bound_of(a) + bound_of(b))
    return a + b
