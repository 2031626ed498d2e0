from __future__ import annotations

import json

import pytest

from frobnil.fmodule_calculus import NEG_INF, POS_INF, UNKNOWN, NilSupport, UpperBound
from frobnil.hypersurface_cech import HypersurfaceRing, classify_ring, polynomial_ring_profile
from frobnil.profile import (
    SCHEMA_VERSION,
    CohomologyRecord,
    Interval,
    RingFlags,
    RingProfile,
    assert_record,
    dumps,
    loads,
    profile_to_json,
)


def make_profile(records, dim=None, flags=RingFlags(equidimensional=True)):
    dim = len(records) - 1 if dim is None else dim
    return RingProfile("test", 5, dim, tuple(records), flags)


def top(index, ns, a=0, **kw):
    return CohomologyRecord(index, False, a, ns, dense=True, **kw)


@pytest.mark.parametrize("p", [5, 7])
def test_round_trip_engine_profile(p):
    prof = classify_ring(HypersurfaceRing.fermat(p, 2, 4))
    again = loads(dumps(prof))
    assert again == prof
    assert dumps(again) == dumps(prof)


def test_round_trip_with_bounds_and_assertions():
    rec = assert_record(
        CohomologyRecord(1, None, None, NilSupport.explicit(-3, 0, [-2], tail_known=False, undecided=[0]),
                         hsl=UpperBound(4), hsl_deg0=UNKNOWN),
        dim0=2,
    )
    prof = RingProfile("asserted", 3, 2, (CohomologyRecord.zero(0), rec, top(2, NilSupport.all_below(-2), -2)),
                       RingFlags(cm=None, punctured_f_rational=True), frozenset({"punctured_f_rational"}))
    text = dumps(prof)
    again = loads(text)
    assert again == prof
    obj = json.loads(text)
    assert obj["schema_version"] == SCHEMA_VERSION
    assert obj["records"][1]["dim0"]["asserted"] is True
    assert obj["records"][1]["a"]["value"] == "unknown"


def test_schema_mismatch():
    obj = profile_to_json(polynomial_ring_profile(5, 2))
    obj["schema_version"] = 99
    with pytest.raises(ValueError):
        loads(json.dumps(obj))


def test_records_must_cover_dimension():
    with pytest.raises(ValueError):
        RingProfile("bad", 5, 2, (CohomologyRecord.zero(0),))
    with pytest.raises(ValueError):
        make_profile([CohomologyRecord.zero(0), top(1, NilSupport(0, 2, frozenset({2})))])


def test_derived_invariants_cm_ring():
    prof = make_profile([CohomologyRecord.zero(0), CohomologyRecord.zero(1), top(2, NilSupport.zero_only())])
    assert prof.fdepth == Interval.exact(2)
    assert prof.gfdepth == Interval.exact(2)
    assert prof.b_ring == Interval.exact(2)
    assert prof.weakly_f_nilpotent is True
    assert prof.f_nilpotent is False


def test_generalized_nilpotent_lower_cohomology():
    prof = make_profile([CohomologyRecord.zero(0), top(1, NilSupport.zero_only()), top(2, NilSupport.all_below(-2))])
    assert prof.fdepth.value == 1
    assert prof.gfdepth.value == 2
    assert prof.weakly_f_nilpotent is False
    assert prof.generalized_weakly_f_nilpotent is True


def test_undecided_gives_interval():
    undecided = NilSupport.explicit(-3, 0, [], tail_known=False)
    prof = make_profile([CohomologyRecord.zero(0), top(1, undecided), top(2, NilSupport.all_below(-2))])
    assert prof.fdepth == Interval(1, 2)
    assert prof.weakly_f_nilpotent is None
    assert not prof.fdepth.is_exact


def test_fdepth_positive_in_positive_dimension():
    with pytest.raises(ValueError):
        make_profile([top(0, NilSupport.zero_only()), CohomologyRecord.zero(1)])
    undecided = NilSupport.explicit(0, 0, [], tail_known=False, undecided=[0])
    prof = make_profile([top(0, undecided), CohomologyRecord.zero(1)])
    assert prof.fdepth.lo >= 1


def test_zero_record_outside_range():
    prof = polynomial_ring_profile(3, 2)
    assert prof.record(5).is_zero and prof.b_j(5) == NEG_INF


def test_interval_formatting():
    assert str(Interval.exact(POS_INF)) == "inf"
    assert str(Interval(2, POS_INF)) == "[2, inf]"
    with pytest.raises(ValueError):
        Interval(3, 2)
