import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustdesign import (
    DesignPoint,
    EvaluatedDesign,
    InsertOutcome,
    InvalidInputError,
    MomentEstimate,
    ParetoArchive,
    dominates,
    nondominated_filter,
)


def entry(mean, std, feasible=True, x=0.0):
    return EvaluatedDesign(DesignPoint((x, 0.0)), MomentEstimate(mean, std, 50, "empirical"), feasible)


def objectives(e):
    return np.array([-e.moments.mean, e.moments.std])


def brute_force(entries):
    feas = [e for e in entries if e.feasible]
    if not feas:
        return set()
    objs = np.array([objectives(e) for e in feas])
    return {tuple(o) for o, keep in zip(objs, nondominated_filter(objs)) if keep}


class TestDominates:
    def test_strict(self):
        assert dominates([1, 1], [2, 2])

    def test_incomparable(self):
        assert not dominates([1, 2], [2, 1])
        assert not dominates([2, 1], [1, 2])

    def test_equal(self):
        assert not dominates([1, 1], [1, 1])

    def test_weak(self):
        assert dominates([1, 1], [1, 2])

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            dominates([1, 2], [1, 2, 3])


class TestInsert:
    def test_first(self):
        a = ParetoArchive(objectives)
        assert a.insert(entry(5, 0.05)) is InsertOutcome.INSERTED
        assert len(a) == 1

    def test_duplicate_rejected(self):
        a = ParetoArchive(objectives)
        first = entry(5, 0.05, x=1.0)
        a.insert(first)
        assert a.insert(entry(5, 0.05, x=2.0)) is InsertOutcome.DOMINATED
        assert a.members == (first,)

    def test_mass_removal(self):
        a = ParetoArchive(objectives)
        a.insert(entry(5, 0.05))
        a.insert(entry(6, 0.08))
        assert len(a) == 2
        assert a.insert(entry(7, 0.01)) is InsertOutcome.INSERTED
        assert len(a) == 1

    def test_infeasible_rejected(self):
        a = ParetoArchive(objectives)
        assert a.insert(entry(100, 0.5, feasible=False)) is InsertOutcome.INFEASIBLE
        assert len(a) == 0

    def test_dominated_rejected(self):
        a = ParetoArchive(objectives)
        a.insert(entry(7, 0.01))
        assert a.insert(entry(6, 0.02)) is InsertOutcome.DOMINATED

    def test_snapshot_is_immutable(self):
        a = ParetoArchive(objectives)
        a.insert(entry(1, 0.01))
        snap = a.snapshot()
        a.insert(entry(2, 0.001))
        assert len(snap) == 1 and snap[0].moments.mean == 1


streams = st.lists(
    st.tuples(st.integers(0, 8), st.integers(0, 8), st.booleans()), min_size=0, max_size=40)


@settings(max_examples=200)
@given(streams, st.randoms(use_true_random=False))
def test_matches_brute_force_in_any_order(stream, rnd):
    entries = [entry(m, s / 100, f) for m, s, f in stream]
    a = ParetoArchive(objectives)
    for e in entries:
        a.insert(e)
        objs = a.objectives()
        for i in range(len(objs)):
            for j in range(len(objs)):
                assert i == j or not dominates(objs[i], objs[j])
        assert all(m.feasible for m in a.members)
    expected = brute_force(entries)
    assert {tuple(o) for o in a.objectives()} == expected
    shuffled = list(entries)
    rnd.shuffle(shuffled)
    b = ParetoArchive(objectives)
    b.extend(shuffled)
    assert {tuple(o) for o in b.objectives()} == expected
