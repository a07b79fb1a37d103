import pytest

from nrcsynth.errors import PartitionMismatch
from nrcsynth.fixtures import build_proof
from nrcsynth.interpolation import Interpolator, interpolate, \
    split_entailments
from nrcsynth.kernel import PartitionedSequent, proof_size
from nrcsynth.oracle import Bounds, bounded_valid
from nrcsynth.parser import parse_sequent
from nrcsynth.syntax import TOP, formula_size, free_vars
from nrcsynth.utils import RunningMeanStats, random_partitions, size_ratio

ENV = {'S': 'set(ur)', 'T': 'set(ur)', 'U': 'set(ur)'}


def transitivity():
    """S ⊆ T, T ⊆ U ⊢ S ⊆ U, lowered."""
    seq = parse_sequent('|- not(S subseteq T), not(T subseteq U), '
                        'S subseteq U', ENV)
    return build_proof(seq, [
        ('forall', 'S subseteq U', 'a'),
        ('exists', 'not(S subseteq T)', ['a']),
        ('forall', 'forall y in T . a != y', 'b'),
        ('exists', 'not(T subseteq U)', ['b']),
        ('forall', 'forall y in U . b != y', 'e'),
        ('exists', 'exists y in U . a = y', ['e']),
        ('neq', 'a != b', 'a = e', 1, (0,)),
        ('neq', 'b != e', 'b = e', 1, (0,)),
        ('eq', 'e = e')])


@pytest.fixture
def split_transitivity():
    p = transitivity()
    return p, PartitionedSequent(p.conclusion, (), ('L', 'R', 'R'))


def test_interpolant_uses_common_variables(split_transitivity):
    p, part = split_transitivity
    theta = Interpolator().interpolate(p, part)
    assert {v.name for v in free_vars(theta)} <= {'S', 'T'}


def test_interpolant_satisfies_both_entailments(split_transitivity):
    p, part = split_transitivity
    theta = interpolate(p, part)
    for atoms, formulas in split_entailments(part, theta):
        assert bounded_valid(atoms, formulas, Bounds(2, 2))


def test_one_sided_partition_gives_a_constant(split_transitivity):
    p, _ = split_transitivity
    part = PartitionedSequent(p.conclusion, (), ('R', 'R', 'R'))
    assert interpolate(p, part) == TOP


def test_two_sided_proofs_are_lowered(reflexivity):
    part = PartitionedSequent(reflexivity.conclusion, (), ('R',))
    assert interpolate(reflexivity, part) == TOP


def test_partition_of_another_sequent(split_transitivity, reflexivity):
    p, _ = split_transitivity
    part = PartitionedSequent(reflexivity.conclusion, (), ('L',))
    with pytest.raises(PartitionMismatch):
        interpolate(p, part)


def test_goal_side_is_refused(split_transitivity):
    p, _ = split_transitivity
    part = PartitionedSequent(p.conclusion, (), ('L', 'R', 'G'))
    with pytest.raises(PartitionMismatch):
        interpolate(p, part)


def test_random_partitions(split_transitivity):
    p, _ = split_transitivity
    stats = RunningMeanStats(20)
    for part in random_partitions(p.conclusion, 20, seed=3):
        theta = interpolate(p, part)
        assert free_vars(theta) <= part.common()
        for atoms, formulas in split_entailments(part, theta):
            assert bounded_valid(atoms, formulas, Bounds(2, 2))
        size_ratio(stats, formula_size(theta), proof_size(p))
    assert stats.max() <= 4


@pytest.mark.parametrize('name,count', [
    ('identity_ur', 10), ('identity_set', 10), ('nesting', 4)])
def test_random_partitions_of_witnesses(request, name, count):
    p = request.getfixturevalue(name).witness
    for part in random_partitions(p.conclusion, count, seed=11):
        theta = interpolate(p, part)
        assert free_vars(theta) <= part.common()
        for atoms, formulas in split_entailments(part, theta):
            assert bounded_valid(atoms, formulas, Bounds(2, 2))
