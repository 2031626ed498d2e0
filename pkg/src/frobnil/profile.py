"""Per-ring summaries of graded local cohomology and their JSON form.

A :class:`RingProfile` is what the hypersurface engine produces and what
every construction calculator consumes.  Values the engine did not compute
are recorded as user assertions, and the serialized form marks each field
with its provenance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Iterable

from .fmodule_calculus import (
    NEG_INF,
    POS_INF,
    UNKNOWN,
    HslValue,
    NilSupport,
    Tail,
    UpperBound,
    _Unknown,
    b_invariant,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Interval:
    """Closed range ``[lo, hi]`` of possible values (``hi`` may be inf)."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: float) -> Interval:
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> float | None:
        return self.lo if self.is_exact else None

    def __str__(self):
        def fmt(x):
            return "inf" if x == POS_INF else str(int(x))

        return fmt(self.lo) if self.is_exact else f"[{fmt(self.lo)}, {fmt(self.hi)}]"


@dataclass(frozen=True)
class CohomologyRecord:
    """What is known about ``H^j_m(R)``.

    ``a`` is the top nonzero degree (``-inf`` for the zero module, None if
    unknown).  ``dense`` says every degree ``<= a`` is nonzero.  ``dim0`` and
    ``dim_g0`` are the dimensions of the degree-0 piece and of its quotient by
    the nilpotent part.
    """

    index: int
    is_zero: bool | None
    a: float | None
    nilsupport: NilSupport
    hsl: HslValue = UNKNOWN
    hsl_deg0: HslValue = UNKNOWN
    dim0: int | None = None
    dim_g0: int | None = None
    dense: bool = False
    asserted: frozenset[str] = frozenset()

    @classmethod
    def zero(cls, index: int, asserted: Iterable[str] = ()) -> CohomologyRecord:
        return cls(index, True, NEG_INF, NilSupport.empty(), 0, 0, 0, 0, False, frozenset(asserted))

    @property
    def b(self):
        if self.is_zero:
            return NEG_INF
        return b_invariant(self.nilsupport)

    def nilpotent(self) -> bool | None:
        if self.is_zero:
            return True
        return self.nilsupport.is_nilpotent()

    def generalized_nilpotent(self) -> bool | None:
        if self.is_zero:
            return True
        return self.nilsupport.is_generalized_nilpotent()

    def degree0_member(self) -> bool | None:
        """Is degree 0 in the nil-support (i.e. is ``b_j = 0``)?"""
        if self.is_zero:
            return False
        return self.nilsupport.status(0)


@dataclass(frozen=True)
class RingFlags:
    cm: bool | None = None
    depth_ge_2: bool | None = None
    equidimensional: bool | None = None
    punctured_f_rational: bool | None = None
    punctured_f_nilpotent: bool | None = None
    generalized_cm: bool | None = None


FLAG_NAMES = tuple(RingFlags.__dataclass_fields__)


@dataclass(frozen=True)
class RingProfile:
    name: str
    p: int
    dim: int
    records: tuple[CohomologyRecord, ...]
    flags: RingFlags = RingFlags()
    asserted_flags: frozenset[str] = frozenset()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.records) != self.dim + 1:
            raise ValueError(f"need records for indices 0..{self.dim}, got {len(self.records)}")
        for j, r in enumerate(self.records):
            if r.index != j:
                raise ValueError(f"record {j} carries index {r.index}")
        for j, r in enumerate(self.records):
            b = r.b
            if not isinstance(b, UpperBound) and b > 0:
                raise ValueError(f"b_{j} = {b} > 0 is impossible for local cohomology")
        if self.dim >= 1 and self.records[0].nilpotent() is False:
            raise ValueError("H^0 is nilpotent whenever dim R > 0 (F-depth R >= 1)")

    def record(self, j: int) -> CohomologyRecord:
        if 0 <= j <= self.dim:
            return self.records[j]
        return CohomologyRecord.zero(j)

    def b_j(self, j: int):
        return self.record(j).b

    # derived invariants ----------------------------------------------------

    def _first_index(self, status) -> Interval:
        """Range for the least j whose status is False (not (generalized) nilpotent)."""
        lo = None
        hi = None
        for j in range(self.dim + 1):
            s = status(j)
            if s is None and lo is None:
                lo = j
            if s is False:
                if lo is None:
                    lo = j
                hi = j
                break
        if lo is None:
            lo = self.dim + 1
        if hi is None:
            hi = POS_INF
        return Interval(lo, hi)

    @property
    def fdepth(self) -> Interval:
        iv = self._first_index(lambda j: self.records[j].nilpotent())
        lo, hi = iv.lo, min(iv.hi, self.dim)
        if self.dim >= 1:
            lo = max(lo, 1)
        lo = min(lo, hi)
        return Interval(lo, hi)

    @property
    def gfdepth(self) -> Interval:
        iv = self._first_index(lambda j: self.records[j].generalized_nilpotent())
        lo, hi = max(iv.lo, self.fdepth.lo), iv.hi
        if self.flags.equidimensional:
            hi = min(hi, self.dim)
        lo = min(lo, hi)
        return Interval(lo, hi)

    @property
    def b_ring(self) -> Interval:
        """``b(R) = inf{j : b_j(R) = 0}`` as a range (hi may be inf)."""
        iv = self._first_index(lambda j: _negate(self.records[j].degree0_member()))
        if iv.lo > self.dim:
            return Interval.exact(POS_INF)
        return iv

    @property
    def weakly_f_nilpotent(self) -> bool | None:
        fd = self.fdepth
        if fd.lo >= self.dim:
            return True
        if fd.hi < self.dim:
            return False
        return None

    @property
    def generalized_weakly_f_nilpotent(self) -> bool | None:
        gd = self.gfdepth
        if gd.lo >= self.dim:
            return True
        if gd.hi < self.dim:
            return False
        return None

    @property
    def f_nilpotent(self) -> bool | None:
        """Decided through the punctured-spectrum criterion when its hypotheses hold.

        ``b(R) = inf`` is necessary in general; it is sufficient for weakly
        F-nilpotent rings that are F-rational on the punctured spectrum, or
        equidimensional and F-nilpotent there.
        """
        wfn = self.weakly_f_nilpotent
        if wfn is False:
            return False
        br = self.b_ring
        if br.hi < POS_INF:
            return False
        if br.lo < POS_INF and br.lo <= self.dim:
            return None
        criterion = self.flags.punctured_f_rational or (
            self.flags.punctured_f_nilpotent and self.flags.equidimensional
        )
        if criterion and wfn:
            return True
        return None

    @property
    def hsl_ring(self) -> HslValue:
        from .fmodule_calculus import hsl_max

        return hsl_max(r.hsl for r in self.records)


def _negate(x: bool | None) -> bool | None:
    return None if x is None else not x


# -- JSON ---------------------------------------------------------------------


def _num_out(x):
    if x is None:
        return "unknown"
    if x == POS_INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return int(x)


def _num_in(x):
    if x == "unknown":
        return None
    if x == "inf":
        return POS_INF
    if x == "-inf":
        return NEG_INF
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"expected an integer, 'inf', '-inf' or 'unknown', got {x!r}")
    return x


def _hsl_out(v: HslValue):
    if isinstance(v, _Unknown):
        return "unknown"
    if isinstance(v, UpperBound):
        return {"upper_bound": _num_out(v.bound)}
    return int(v)


def _hsl_in(x) -> HslValue:
    if x == "unknown":
        return UNKNOWN
    if isinstance(x, dict):
        if set(x) != {"upper_bound"}:
            raise ValueError(f"bad HSL value {x!r}")
        return UpperBound(_num_in(x["upper_bound"]))
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ValueError(f"bad HSL value {x!r}")
    return x


def _opt_bool_out(x):
    return "unknown" if x is None else bool(x)


def _opt_bool_in(x):
    if x == "unknown":
        return None
    if not isinstance(x, bool):
        raise ValueError(f"expected true/false/'unknown', got {x!r}")
    return x


def nilsupport_to_json(d: NilSupport) -> dict[str, Any]:
    return {
        "window": [d.lo, d.hi],
        "members": sorted(d.members),
        "undecided": sorted(d.undecided),
        "below": d.below.value,
        "known_infinite": d.known_infinite,
        "kind": d.kind.value,
    }


def nilsupport_from_json(obj: dict[str, Any]) -> NilSupport:
    lo, hi = obj["window"]
    return NilSupport(
        int(lo), int(hi), frozenset(obj.get("members", [])), frozenset(obj.get("undecided", [])),
        Tail(obj.get("below", "absent")), bool(obj.get("known_infinite", False)),
    )


_RECORD_FIELDS = ("is_zero", "a", "nilsupport", "hsl", "hsl_deg0", "dim0", "dim_g0", "dense")


def _field(value, asserted: bool) -> dict[str, Any]:
    return {"value": value, "asserted": asserted}


def record_to_json(r: CohomologyRecord) -> dict[str, Any]:
    enc = {
        "is_zero": _opt_bool_out(r.is_zero),
        "a": _num_out(r.a),
        "nilsupport": nilsupport_to_json(r.nilsupport),
        "hsl": _hsl_out(r.hsl),
        "hsl_deg0": _hsl_out(r.hsl_deg0),
        "dim0": _num_out(r.dim0),
        "dim_g0": _num_out(r.dim_g0),
        "dense": r.dense,
    }
    out = {"index": r.index}
    for k in _RECORD_FIELDS:
        out[k] = _field(enc[k], k in r.asserted)
    return out


def record_from_json(obj: dict[str, Any]) -> CohomologyRecord:
    vals, asserted = {}, set()
    for k in _RECORD_FIELDS:
        f = obj[k]
        if not isinstance(f, dict) or "value" not in f:
            raise ValueError(f"field {k!r} must be an object with 'value' and 'asserted'")
        vals[k] = f["value"]
        if f.get("asserted"):
            asserted.add(k)
    return CohomologyRecord(
        index=int(obj["index"]),
        is_zero=_opt_bool_in(vals["is_zero"]),
        a=_num_in(vals["a"]),
        nilsupport=nilsupport_from_json(vals["nilsupport"]),
        hsl=_hsl_in(vals["hsl"]),
        hsl_deg0=_hsl_in(vals["hsl_deg0"]),
        dim0=_num_in(vals["dim0"]),
        dim_g0=_num_in(vals["dim_g0"]),
        dense=bool(vals["dense"]),
        asserted=frozenset(asserted),
    )


def _verdict_out(x):
    return _opt_bool_out(x)


def profile_to_json(prof: RingProfile) -> dict[str, Any]:
    """Serializable form; the ``derived`` block is informational and ignored on parse."""
    return {
        "schema_version": SCHEMA_VERSION,
        "name": prof.name,
        "p": prof.p,
        "dim": prof.dim,
        "records": [record_to_json(r) for r in prof.records],
        "flags": {k: _field(_opt_bool_out(getattr(prof.flags, k)), k in prof.asserted_flags) for k in FLAG_NAMES},
        "notes": list(prof.notes),
        "derived": {
            "fdepth": [_num_out(prof.fdepth.lo), _num_out(prof.fdepth.hi)],
            "gfdepth": [_num_out(prof.gfdepth.lo), _num_out(prof.gfdepth.hi)],
            "b_ring": [_num_out(prof.b_ring.lo), _num_out(prof.b_ring.hi)],
            "b_j": [_b_out(r.b) for r in prof.records],
            "weakly_f_nilpotent": _verdict_out(prof.weakly_f_nilpotent),
            "generalized_weakly_f_nilpotent": _verdict_out(prof.generalized_weakly_f_nilpotent),
            "f_nilpotent": _verdict_out(prof.f_nilpotent),
        },
    }


def _b_out(b):
    if isinstance(b, UpperBound):
        return {"upper_bound": _num_out(b.bound)}
    return _num_out(b)


def profile_from_json(obj: dict[str, Any]) -> RingProfile:
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported profile schema_version {version!r} (expected {SCHEMA_VERSION})")
    for key in ("name", "p", "dim", "records", "flags"):
        if key not in obj:
            raise ValueError(f"profile is missing {key!r}")
    flags, asserted_flags = {}, set()
    for k in FLAG_NAMES:
        f = obj["flags"].get(k, {"value": "unknown", "asserted": False})
        flags[k] = _opt_bool_in(f["value"])
        if f.get("asserted"):
            asserted_flags.add(k)
    return RingProfile(
        name=str(obj["name"]),
        p=int(obj["p"]),
        dim=int(obj["dim"]),
        records=tuple(record_from_json(r) for r in obj["records"]),
        flags=RingFlags(**flags),
        asserted_flags=frozenset(asserted_flags),
        notes=tuple(obj.get("notes", [])),
    )


def dumps(prof: RingProfile) -> str:
    return json.dumps(profile_to_json(prof), indent=2)


def loads(text: str) -> RingProfile:
    return profile_from_json(json.loads(text))


def assert_record(r: CohomologyRecord, **changes) -> CohomologyRecord:
    """Replace fields of a record and mark them user-asserted."""
    return replace(r, asserted=r.asserted | frozenset(changes), **changes)
