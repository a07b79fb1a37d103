import pytest

from nrcsynth.errors import InconsistentTyping, InvalidPath, TypeMismatch, \
    VariableCapture
from nrcsynth.parser import parse_formula, parse_term, parse_type
from nrcsynth.syntax import (
    UR, And, EqUr, ExistsIn, ForallIn, NeqUr, Or, Pair, Proj1, Proj2, SetType,
    Var, alpha_eq, dual, equiv, free_vars, fresh_name, goal_formula, is_el,
    path_quantify, positions_of, proj, subst, substitute, type_at_path)

ENV = {'a': 'ur', 'b': 'ur', 'c': 'ur', 'S': 'set(ur)', 'T': 'set(ur)',
       'p': '(ur * ur)'}


def f(text):
    return parse_formula(text, ENV)


def t(text):
    return parse_term(text, ENV)


def test_dual_is_an_involution():
    phi = f('forall x in S . or(x = a, exists y in T . x != y)')
    assert dual(dual(phi)) == phi
    assert isinstance(dual(phi), ExistsIn)
    assert isinstance(dual(phi).body, And)


def test_polarity():
    assert is_el(f('a = b'))
    assert is_el(f('exists x in S . x = a'))
    assert not is_el(f('forall x in S . x = a'))
    assert not is_el(f('and(a = b, a = c)'))


def test_free_vars_skip_bound_occurrences():
    phi = f('forall x in S . exists y in T . x = y')
    assert {v.name for v in free_vars(phi)} == {'S', 'T'}


def test_free_vars_detect_inconsistent_typing():
    a_ur, a_set = Var('a', UR), Var('a', SetType(UR))
    with pytest.raises(InconsistentTyping):
        free_vars([EqUr(a_ur, a_ur), ForallIn(Var('x', UR), a_set,
                                              EqUr(Var('x', UR), a_ur))])


def test_subst_avoids_capture():
    phi = f('forall x in S . x = a')
    x = Var('x', UR)
    out = subst(phi, {Var('a', UR): x})
    assert out.var != x
    assert out.body == EqUr(out.var, x)


def test_substitute_at_positions():
    phi = f('and(a = b, a != c)')
    a, b = t('a'), t('b')
    out = substitute(phi, a, b, [(1, 0)])
    assert out == f('and(a = b, b != c)')
    assert positions_of(phi, a) == [(0, 0), (1, 0)]


def test_substitute_rejects_capture():
    phi = f('forall x in S . x = a')
    x = Var('x', UR)
    with pytest.raises(VariableCapture):
        substitute(phi, t('a'), x, [(1, 1)])


def test_substitute_checks_types():
    with pytest.raises(TypeMismatch):
        substitute(f('a = b'), t('a'), t('S'), 'all')


def test_projection_of_a_pair_contracts():
    assert proj(1, Pair(t('a'), t('b'))) == t('a')
    assert proj(2, t('p')) == Proj2(t('p'))
    with pytest.raises(TypeMismatch):
        Proj1(t('a'))


def test_equiv_unfolds_by_type():
    assert equiv(t('a'), t('b')) == EqUr(t('a'), t('b'))
    pair = equiv(t('p'), t('p'))
    assert isinstance(pair, And)
    sets = equiv(t('S'), t('T'))
    assert isinstance(sets, And) and isinstance(sets.l, ForallIn)


def test_alpha_equivalence():
    assert alpha_eq(f('forall x in S . x = a'), f('forall z in S . z = a'))
    assert not alpha_eq(f('forall x in S . x = a'),
                        f('forall x in T . x = a'))


def test_fresh_name():
    assert fresh_name('x', {'y'}) == 'x'
    assert fresh_name('x', {'x', 'x1'}) == 'x2'
    assert fresh_name('x3', {'x'}) == 'x1'


def test_type_at_path():
    ty = parse_type('set((ur * set(ur)))')
    assert type_at_path(ty, 'm2m') == UR
    with pytest.raises(InvalidPath):
        type_at_path(ty, '1')


def test_path_quantify_chains_through_sets():
    b = Var('B', parse_type('set((ur * set(ur)))'))
    z = Var('z', UR)
    phi = path_quantify(ForallIn, z, 'm2m', b, EqUr(z, z))
    assert isinstance(phi, ForallIn) and phi.bound == b
    assert isinstance(phi.body, ForallIn)
    assert phi.body.var == z


def test_goal_formula_over_a_set():
    s = Var('S', SetType(UR))
    z = Var('z', UR)
    goal = goal_formula(z, 'm', s)
    assert isinstance(goal, ExistsIn) and goal.bound == s
    assert isinstance(goal.body, EqUr)


def test_disjunctions_nest_to_the_right():
    phi = f('or(a = b, a = c, b = c)')
    assert isinstance(phi, Or) and isinstance(phi.r, Or)
    assert isinstance(f('a != b'), NeqUr)
