from __future__ import annotations

import numpy as np
import pytest

from eicl.labels import LabelSpace
from eicl.partition import divide_candidates, full_partition

SPACE = LabelSpace.from_raw(["c", "a", "d", "b"])


def test_possible_is_descending_probability():
    part = divide_candidates(np.array([0.1, 0.4, 0.2, 0.3]), 2, SPACE)
    assert part.possible == ("a", "b")
    assert part.impossible == ("c", "d")


def test_impossible_keeps_space_order():
    part = divide_candidates(np.array([0.05, 0.6, 0.05, 0.3]), 1, SPACE)
    assert part.possible == ("a",)
    assert part.impossible == ("c", "d", "b")


def test_k3_equal_n_disables_exclusion():
    part = divide_candidates(np.array([0.1, 0.4, 0.2, 0.3]), 4, SPACE)
    assert part.impossible == ()
    assert part.possible == ("a", "b", "d", "c")


def test_ties_break_by_space_order():
    part = divide_candidates(np.array([0.25, 0.25, 0.25, 0.25]), 2, SPACE)
    assert part.possible == ("c", "a")
    assert part.impossible == ("d", "b")


def test_k3_bounds():
    probs = np.array([0.25, 0.25, 0.25, 0.25])
    with pytest.raises(ValueError):
        divide_candidates(probs, 0, SPACE)
    with pytest.raises(ValueError):
        divide_candidates(probs, 5, SPACE)


def test_resolution_order_prefers_possible():
    part = divide_candidates(np.array([0.1, 0.4, 0.2, 0.3]), 2, SPACE)
    assert part.resolution_order() == ("a", "b", "c", "d")


def test_full_partition_neutral_order():
    part = full_partition(SPACE)
    assert part.possible == ("c", "a", "d", "b")
    assert part.impossible == ()


def test_partition_laws_for_every_k3():
    rng = np.random.default_rng(77)
    for trial in range(60):
        n = int(rng.integers(2, 24))
        space = LabelSpace.from_raw([f"lab {i}" for i in range(n)])
        probs = rng.dirichlet(np.ones(n))
        for k3 in range(1, n + 1):
            part = divide_candidates(probs, k3, space)
            possible, impossible = set(part.possible), set(part.impossible)
            assert len(part.possible) == k3
            assert len(part.impossible) == n - k3
            assert possible.isdisjoint(impossible)
            assert possible | impossible == set(space.labels)
            if part.impossible:
                min_pos = min(probs[space.index(lab)] for lab in part.possible)
                max_imp = max(probs[space.index(lab)] for lab in part.impossible)
                assert min_pos >= max_imp
