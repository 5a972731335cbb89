import pytest

from fglsym.partitions import (
    Partition, partitions_up_to_weight, strict_partitions_up_to_weight,
)


def test_basic_invariants():
    lam = Partition([3, 1, 0, 0])
    assert lam.parts == (3, 1)
    assert lam.weight == 4
    assert lam.length == 2
    assert lam.is_strict()
    assert not Partition([2, 2]).is_strict()
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])


def test_rho_and_rectangle():
    assert Partition.rho(3).parts == (3, 2, 1)
    assert Partition.rho(0).parts == ()
    assert Partition.rectangle(2, 3).parts == (2, 2, 2)
    assert Partition.rectangle(0, 3).parts == ()


def test_containment_and_sum():
    assert Partition([3, 2]).contains([2, 2])
    assert not Partition([3, 2]).contains([2, 2, 1])
    assert (Partition([2, 1]) + Partition([1, 1, 1])).parts == (3, 2, 1)


def test_enumeration():
    all4 = partitions_up_to_weight(4)
    assert Partition([]) in all4
    assert len([p for p in all4 if p.weight == 4]) == 5
    strict = strict_partitions_up_to_weight(4)
    assert Partition([2, 1]) in strict
    assert Partition([2, 2]) not in strict
    bounded = partitions_up_to_weight(4, max_length=2)
    assert all(p.length <= 2 for p in bounded)
