import pytest

from nrcsynth.errors import PreflightTooLarge
from nrcsynth.fo.parser import parse_fo_formula
from nrcsynth.instances import satisfies
from nrcsynth.oracle import (
    Bounds, Counterexample, Valid, bounded_equivalent, bounded_valid,
    count_values, enumerate_structures, enumerate_valuations,
    enumerate_values, fo_bounded_valid)
from nrcsynth.fo.semantics import fo_satisfies
from nrcsynth.parser import parse_formula, parse_type
from nrcsynth.syntax import Var, UR

ENV = {'S': 'set(ur)', 'T': 'set(ur)', 'U': 'set(ur)'}


def f(text):
    return parse_formula(text, ENV)


def test_value_counts(small_bounds):
    assert count_values(parse_type('set(ur)'), small_bounds) == 4
    assert count_values(parse_type('set((ur * ur))'), small_bounds) == 11
    values = list(enumerate_values(parse_type('set(ur)'), small_bounds))
    assert len(values) == 4 and len(set(values)) == 4


def test_inclusion_is_transitive(small_bounds):
    result = bounded_valid([f('S subseteq T'), f('T subseteq U')],
                           [f('S subseteq U')], small_bounds)
    assert isinstance(result, Valid) and result


def test_counterexample_is_a_real_one(small_bounds):
    premise, conclusion = f('S subseteq T'), f('T subseteq S')
    result = bounded_valid([premise], [conclusion], small_bounds)
    assert isinstance(result, Counterexample) and not result
    assert satisfies(premise, result.valuation)
    assert not satisfies(conclusion, result.valuation)


def test_conclusions_are_disjunctive(small_bounds):
    assert bounded_valid([], [f('S subseteq T'), f('not(S subseteq T)')],
                         small_bounds)


def test_extra_predicate_closes_the_check(small_bounds):
    s = Var('S', parse_type('set(ur)'))
    result = bounded_valid([], [], small_bounds, variables=[s],
                           also=lambda v: len(v.lookup(s)) <= 2)
    assert result


def test_equivalence_of_the_macro(small_bounds):
    both = f('and(S subseteq T, T subseteq S)')
    assert bounded_equivalent(both, f('S equiv T'), small_bounds)
    assert not bounded_equivalent(f('S subseteq T'), f('S equiv T'),
                                  small_bounds)


def test_ceiling_is_checked_before_enumerating():
    with pytest.raises(PreflightTooLarge):
        bounded_valid([f('S subseteq T')], [f('S subseteq U')],
                      Bounds(3, 3, ceiling=10))


def test_symmetry_keeps_one_valuation_per_orbit():
    a, b = Var('a', UR), Var('b', UR)
    plain = list(enumerate_valuations([a, b], Bounds(3, 3)))
    reduced = list(enumerate_valuations([a, b], Bounds(3, 3, symmetry=True)))
    assert len(plain) == 9
    assert len(reduced) == 2


def test_structure_enumeration():
    assert len(list(enumerate_structures({'P': 1}, max_domain=2))) == 6
    with pytest.raises(PreflightTooLarge):
        list(enumerate_structures({'R': 2}, max_domain=3, ceiling=100))


def test_first_order_validity():
    every = parse_fo_formula('forall x . P(x)')
    some = parse_fo_formula('exists x . P(x)')
    assert fo_bounded_valid([every], [some])
    assert fo_bounded_valid([parse_fo_formula('P(a)')], [some])
    result = fo_bounded_valid([some], [every], max_domain=2)
    assert not result
    assert fo_satisfies(some, result.structure, result.assignment)
    assert not fo_satisfies(every, result.structure, result.assignment)
