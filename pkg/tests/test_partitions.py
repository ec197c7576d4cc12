"""
Tests for partition enumeration and predicates
Run with: pytest tests/test_partitions.py -v
"""
import sys
from pathlib import Path

import pytest

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.combinatorics.partitions import (
    ODD_PARTS_EVEN_MULTIPLICITY,
    ORTHOGONAL,
    SYMPLECTIC,
    Partition,
    PartitionConstraint,
    SignedPartition,
    bijection_counts,
    bijection_sets,
    count_partitions,
    durfee_decompose,
    enumerate_multiplicities,
    enumerate_partitions,
    flavor_constraint,
    has_fixed_point,
    is_cute,
    is_cute_by_durfee,
    parse_partition,
    partitions_of,
    render_partition,
    signed_expansions,
    stats,
)


class TestPartition:
    """The Partition value type"""

    def test_rejects_increasing_parts(self):
        with pytest.raises(ValueError):
            Partition((1, 2))

    def test_rejects_zero_parts(self):
        with pytest.raises(ValueError):
            Partition((2, 0))

    def test_dual(self):
        assert Partition((4, 2, 1)).dual == Partition((3, 2, 1, 1))
        assert Partition().dual == Partition()

    def test_stats(self):
        s = stats(Partition((3, 3, 1)))
        assert s.multiplicities == {3: 2, 1: 1}
        assert s.odd_parts == 3
        assert s.sum_dual_squares == 3 * 3 + 2 * 2 + 2 * 2
        assert s.length == 3
        assert s.size == 7

    def test_largest_of_empty(self):
        assert Partition().largest == 0
        assert Partition((2, 1)).part(5) == 0

    @pytest.mark.parametrize("n", range(0, 15))
    def test_dual_is_involution(self, n):
        for lam in partitions_of(n):
            assert lam.dual.dual == lam
            assert lam.dual.size == n

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(15, 41))
    def test_dual_is_involution_to_forty(self, n):
        for lam in enumerate_partitions(n):
            assert lam.dual.dual == lam
            assert lam.dual.size == n


class TestEnumeration:
    """Streaming constrained enumeration"""

    def test_reverse_lexicographic_order(self):
        assert [lam.parts for lam in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_empty_partition_of_zero(self):
        assert list(enumerate_partitions(0)) == [Partition()]

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            list(enumerate_partitions(-1))

    def test_multiplicity_pairs(self):
        assert list(enumerate_multiplicities(3)) == [[(3, 1)], [(2, 1), (1, 1)], [(1, 3)]]

    def test_odd_parts_even_multiplicity(self):
        constraint = PartitionConstraint.rule(ODD_PARTS_EVEN_MULTIPLICITY)
        assert [lam.parts for lam in enumerate_partitions(2, constraint)] == [(2,), (1, 1)]

    def test_exact_part_count(self):
        constraint = PartitionConstraint.exactly_m_parts(2)
        assert [lam.parts for lam in enumerate_partitions(5, constraint)] == [(4, 1), (3, 2)]

    def test_combined_constraints(self):
        constraint = PartitionConstraint.exactly_m_parts(2) & PartitionConstraint.cap(3)
        assert [lam.parts for lam in enumerate_partitions(5, constraint)] == [(3, 2)]

    def test_contradictory_part_counts_admit_nothing(self):
        constraint = PartitionConstraint.exactly_m_parts(2) & PartitionConstraint.exactly_m_parts(3)
        assert list(enumerate_partitions(6, constraint)) == []

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            PartitionConstraint.rule("no-such-rule")

    def test_largest_part_slices_cover_everything(self):
        n = 9
        sliced = [lam for k in range(1, n + 1) for lam in enumerate_partitions(n, largest=k)]
        assert sorted(sliced, key=lambda p: p.parts) == sorted(partitions_of(n), key=lambda p: p.parts)

    @pytest.mark.parametrize("n", range(0, 19))
    def test_count_matches_pentagonal_recurrence(self, n):
        assert len(partitions_of(n)) == count_partitions(n)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(19, 61))
    def test_streamed_count_to_sixty(self, n):
        assert sum(1 for _ in enumerate_partitions(n)) == count_partitions(n)

    def test_known_counts(self):
        assert count_partitions(10) == 42
        assert count_partitions(20) == 627
        assert count_partitions(-1) == 0

    @pytest.mark.parametrize("n", range(0, 13))
    def test_constraint_admits_what_it_enumerates(self, n):
        for flavor in (SYMPLECTIC, ORTHOGONAL):
            constraint = flavor_constraint(flavor)
            produced = set(enumerate_partitions(n, constraint))
            assert produced == {lam for lam in partitions_of(n) if constraint.admits(lam)}


class TestPredicates:
    """Durfee squares, cute partitions and fixed points"""

    def test_durfee_decomposition(self):
        d = durfee_decompose(Partition((5, 4, 4, 1)))
        assert d.durfee == 3
        assert d.pi1 == Partition((2, 1, 1))
        assert d.pi2 == Partition((1,))

    def test_durfee_of_empty(self):
        with pytest.raises(ValueError):
            durfee_decompose(Partition())

    def test_cute_examples(self):
        assert is_cute(Partition((3, 2, 2, 2)))
        assert is_cute(Partition((5, 2, 1, 1)))
        assert is_cute(Partition((1, 1, 1)))
        assert not is_cute(Partition((2, 2)))
        assert not is_cute(Partition())

    @pytest.mark.parametrize("n", range(1, 13))
    def test_cute_characterizations_agree(self, n):
        for lam in partitions_of(n):
            assert is_cute(lam) == is_cute_by_durfee(lam)

    def test_fixed_point(self):
        assert has_fixed_point(Partition((3, 2, 2, 2)))
        assert not has_fixed_point(Partition((5, 4, 4)))


class TestSignedPartitions:
    """Sign assignments for symplectic and orthogonal classes"""

    def test_symplectic_expansions(self):
        expansions = list(signed_expansions(Partition((2, 2, 1, 1)), SYMPLECTIC))
        assert len(expansions) == 2
        assert {sp.sign(2) for sp in expansions} == {1, -1}

    def test_orthogonal_expansions(self):
        assert len(list(signed_expansions(Partition((3, 2, 2, 1)), ORTHOGONAL))) == 4

    def test_flavor_violation(self):
        with pytest.raises(ValueError):
            list(signed_expansions(Partition((3, 1)), SYMPLECTIC))

    def test_signs_must_match_sizes(self):
        with pytest.raises(ValueError):
            SignedPartition(Partition((2,)), SYMPLECTIC, ((4, 1),))

    def test_render(self):
        sp = SignedPartition(Partition((4, 2)), SYMPLECTIC, ((4, 1), (2, -1)))
        assert str(sp) == "[4,2] 4:+, 2:-"


class TestBijectionSets:
    """Pair sets whose cardinalities the bijection check compares"""

    def test_worked_example(self):
        assert bijection_counts(9, 4, "A") == 6
        assert bijection_counts(9, 4, "B") == 6

    @pytest.mark.parametrize("a", [
        pytest.param(a, marks=pytest.mark.slow) if a >= 9 else a for a in range(0, 23)
    ])
    def test_equal_cardinalities(self, a):
        for b in range(a + 1):
            size_a = bijection_counts(a, b, "A")
            assert size_a == bijection_counts(a, b, "B")
            assert bijection_counts(a, b, "F") - bijection_counts(a, b, "E") == size_a
            assert bijection_counts(a, b, "F") == bijection_counts(a, b, "G")

    def test_sets_match_counts(self):
        assert len(bijection_sets(6, 2, "B")) == bijection_counts(6, 2, "B")

    def test_unknown_set(self):
        with pytest.raises(ValueError):
            bijection_counts(3, 1, "Z")

    def test_negative_arguments(self):
        with pytest.raises(ValueError):
            bijection_counts(-1, 0, "A")


class TestTextFormat:
    """Bracketed comma-separated rendering"""

    def test_render(self):
        assert render_partition(Partition((6, 5, 4, 2, 2))) == "[6,5,4,2,2]"
        assert render_partition(Partition()) == "[]"

    def test_parse(self):
        assert parse_partition("[2, 1]") == Partition((2, 1))
        assert parse_partition("[]") == Partition()
        assert parse_partition("1,3") == Partition((3, 1))
