import pytest

from nrcsynth.errors import ParseError
from nrcsynth.kernel.sequents import Sequent1, Sequent2
from nrcsynth.parser import (
    format_proof, parse_expr, parse_formula, parse_proof, parse_sequent,
    parse_term, parse_type, parse_value)
from nrcsynth.syntax import ProdType, SetType, UR, dual, member_macro


def test_types():
    assert parse_type('set((ur * set(ur)))') == \
        SetType(ProdType(UR, SetType(UR)))
    assert str(parse_type('(ur * unit)')) == '(ur * unit)'


def test_negation_is_the_dual():
    env = {'S': 'set(ur)', 'a': 'ur'}
    phi = parse_formula('exists x in S . x = a', env)
    assert parse_formula('not(exists x in S . x = a)', env) == dual(phi)


def test_membership_macro():
    env = {'S': 'set(ur)', 'a': 'ur'}
    a, s = parse_term('a', env), parse_term('S', env)
    assert parse_formula('a memb S', env) == member_macro(a, s)


def test_primed_names():
    env = {"B'": 'set(ur)', 'B': 'set(ur)'}
    phi = parse_formula("B equiv B'", env)
    assert (phi.l.bound.name, phi.r.bound.name) == ('B', "B'")


def test_printed_formulas_parse_back():
    env = {'V': 'set((ur * ur))', 'B': 'set((ur * set(ur)))'}
    phi = parse_formula('forall v in V . exists b in B . '
                        'and(pi1(v) = pi1(b), pi2(v) memb pi2(b))', env)
    assert parse_formula(str(phi), env) == phi


def test_expressions():
    env = {'S': 'set(ur)', 'T': 'set(ur)'}
    e = parse_expr('diff(union(S, T), {x in S | exists y in T . x = y})', env)
    assert e.ty == parse_type('set(ur)')
    assert parse_expr(str(e), env) == e


def test_values():
    assert str(parse_value('[<4, [6, 9]>]')) == '[<4,[6,9]>]'
    assert str(parse_value('atom(a)')) == 'atom(a)'


def test_sequents():
    env = {'S': 'set(ur)', 'y': 'ur'}
    one = parse_sequent('y in S |- exists x in S . x = y', env)
    assert isinstance(one, Sequent1) and len(one.theta) == 1
    two = parse_sequent('; y = y |- y = y', env)
    assert isinstance(two, Sequent2) and len(two.gamma) == 1


def test_undeclared_variables_are_rejected():
    with pytest.raises(ParseError):
        parse_formula('a = b', {'a': 'ur'})


def test_quantifier_bounds_must_be_sets():
    with pytest.raises(ParseError):
        parse_formula('forall x in a . x = x', {'a': 'ur'})


def test_syntax_errors():
    with pytest.raises(ParseError):
        parse_formula('and(', {})


def test_general_proof_round_trip(reflexivity):
    text = format_proof(reflexivity, 'general')
    calculus, p, env = parse_proof(text)
    assert calculus == 'general'
    assert p == reflexivity
    assert env == {'b': parse_type('set(ur)'), 'y': UR}


def test_focused_proof_round_trip(identity_set):
    text = format_proof(identity_set.witness, 'focused')
    _, p, _ = parse_proof(text)
    assert p == identity_set.witness
