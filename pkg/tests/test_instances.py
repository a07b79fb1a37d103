import pytest

from nrcsynth.errors import (
    NoDefaultAtom, NonSingletonGet, TypeMismatch, UnboundVariable)
from nrcsynth.instances import (
    Atom, GetT, Instance, SetV, Valuation, VarE, atoms_expr, compose,
    evaluate, expand_comprehension, formula_to_expr, satisfies)
from nrcsynth.oracle import Bounds, enumerate_valuations
from nrcsynth.parser import parse_expr, parse_formula, parse_type, \
    parse_value
from nrcsynth.syntax import Var

NESTED = {'B': 'set((ur * set(ur)))'}
FLATTEN = 'bigunion(bigunion({<pi1(b), e>} | e in pi2(b)) | b in B)'


def nested_instance(text):
    b = Var('B', parse_type(NESTED['B']))
    return Instance({b: parse_value(text)})


def test_flatten():
    e = parse_expr(FLATTEN, NESTED)
    value = evaluate(e, nested_instance('[<4, [6, 9]>]'))
    assert str(value) == '[<4,6>,<4,9>]'


def test_flatten_of_the_empty_set():
    e = parse_expr(FLATTEN, NESTED)
    assert evaluate(e, nested_instance('[]')) == SetV()


def test_sets_are_canonical():
    assert parse_value('[3, 1, 3]') == parse_value('[1, 3]')
    assert str(parse_value('[<2, 1>, <1, 2>]')) == '[<1,2>,<2,1>]'


def test_get_uses_the_least_atom_as_default():
    s = Var('S', parse_type('set(ur)'))
    e = GetT(VarE(s))
    assert evaluate(e, Instance({s: parse_value('[5]')})) == Atom('5')
    two = Instance({s: parse_value('[7, 5]')})
    assert evaluate(e, two) == Atom('5')
    with pytest.raises(NoDefaultAtom):
        evaluate(e, Instance({s: parse_value('[]')}))


def test_strict_get_rejects_other_sets():
    s = Var('S', parse_type('set(ur)'))
    e = GetT(VarE(s))
    inst = Instance({s: parse_value('[1, 2]')})
    assert evaluate(e, inst) == Atom('1')
    with pytest.raises(NonSingletonGet) as info:
        evaluate(e, inst, strict=True)
    assert info.value.size == 2
    assert evaluate(e, Instance({s: parse_value('[2]')}),
                    strict=True) == Atom('2')


def test_atoms_with_equal_numbers_stay_apart():
    assert len(SetV((Atom('4'), Atom('04')))) == 2
    assert len(SetV((Atom('4'), Atom('4')))) == 1
    assert [a.label for a in SetV((Atom('10'), Atom('2')))] == ['2', '10']


def test_comprehension_filters():
    env = {'S': 'set(ur)', 'a': 'ur'}
    e = parse_expr('{x in S | x != a}', env)
    s, a = Var('S', parse_type('set(ur)')), Var('a', parse_type('ur'))
    inst = Instance({s: parse_value('[1, 2, 3]'), a: parse_value('2')})
    assert str(evaluate(e, inst)) == '[1,3]'
    assert evaluate(expand_comprehension(e), inst) == evaluate(e, inst)


def test_instances_check_types():
    s = Var('S', parse_type('set(ur)'))
    with pytest.raises(TypeMismatch):
        Instance({s: parse_value('<1, 2>')})


def test_unbound_variable():
    s = Var('S', parse_type('set(ur)'))
    with pytest.raises(UnboundVariable):
        evaluate(VarE(s), Valuation())


def test_formulas_as_boolean_expressions():
    env = {'S': 'set(ur)', 'T': 'set(ur)'}
    phi = parse_formula('S subseteq T', env)
    test = formula_to_expr(phi)
    variables = [Var('S', parse_type('set(ur)')),
                 Var('T', parse_type('set(ur)'))]
    for valuation in enumerate_valuations(variables, Bounds(2, 2)):
        expected = satisfies(phi, valuation)
        assert (len(evaluate(test, valuation)) == 1) == expected


def test_atoms_expr_collects_every_atom():
    b = Var('B', parse_type(NESTED['B']))
    inst = Instance({b: parse_value('[<4, [6, 9]>, <5, []>]')})
    assert str(evaluate(atoms_expr([b]), inst)) == '[4,5,6,9]'


def test_compose_substitutes_an_expression():
    s = Var('S', parse_type('set(ur)'))
    t = Var('T', parse_type('set(ur)'))
    outer = parse_expr('bigunion({x} | x in S)', {'S': 'set(ur)'})
    inner = parse_expr('union(T, T)', {'T': 'set(ur)'})
    e = compose(outer, s, inner)
    inst = Instance({t: parse_value('[1, 2]')})
    assert str(evaluate(e, inst)) == '[1,2]'
