import pytest

from nrcsynth.determinacy import (
    DeterminacyProblem, assemble_determinacy, io_spec, is_composition_free,
    normalize_composition_free, rewrite_views)
from nrcsynth.errors import NotCompositionFree, SizeBlowup
from nrcsynth.fixtures import identity_problem, nesting_formula
from nrcsynth.instances import Instance, VarE, evaluate, satisfies
from nrcsynth.oracle import (
    Bounds, bounded_equivalent, enumerate_valuations, enumerate_values)
from nrcsynth.parser import parse_expr, parse_formula, parse_type, parse_value
from nrcsynth.synthesizer import Synthesizer
from nrcsynth.syntax import And, Var, equiv, free_vars

NESTED = {'B': 'set((ur * set(ur)))'}
FLATTEN = 'bigunion(bigunion({<pi1(b), e>} | e in pi2(b)) | b in B)'
SETS = {'S': 'set(ur)', 'T': 'set(ur)'}
OVER_UNION = 'bigunion({x} | x in union(S, T))'
CORPUS_ENV = dict(SETS, a='ur', P='set((ur * ur))', **NESTED)
CORPUS = [
    'S',
    '{a}',
    '<a, S>',
    'union(S, T)',
    'diff(S, T)',
    'union({a}, S)',
    '{x in S | exists y in T . x = y}',
    '{x in S | x memb T}',
    'bigunion({<x, x>} | x in S)',
    'bigunion(bigunion({<x, y>} | y in T) | x in S)',
    'bigunion({pi1(p)} | p in P)',
    '{union(S, T)}',
    'diff(union(S, T), {x in S | x = a})',
    FLATTEN,
]
GROUPED_KEYS = ('and(forall b in B . forall b2 in B . '
                'or(pi1(b) != pi1(b2), b equiv b2), '
                'forall b in B . exists e in pi2(b) . true)')


def sets_instance(s, t):
    return Instance({Var('S', parse_type('set(ur)')): parse_value(s),
                     Var('T', parse_type('set(ur)')): parse_value(t)})


def test_composition_freedom():
    assert is_composition_free(parse_expr(FLATTEN, NESTED))
    assert not is_composition_free(parse_expr(OVER_UNION, SETS))


def test_normalization_keeps_the_meaning():
    e = parse_expr(OVER_UNION, SETS)
    out = normalize_composition_free(e)
    assert is_composition_free(out)
    inst = sets_instance('[1, 2]', '[2, 3]')
    assert evaluate(out, inst) == evaluate(e, inst)


def test_normalization_ceiling():
    with pytest.raises(SizeBlowup):
        normalize_composition_free(parse_expr(OVER_UNION, SETS),
                                   size_ceiling=1)


def test_spec_forces_the_output():
    e = parse_expr(FLATTEN, NESTED)
    o = Var('o', e.ty)
    spec = io_spec(e, output=o)
    b = Var('B', parse_type(NESTED['B']))
    inst = Instance({b: parse_value('[<4, [6, 9]>]')})
    right = spec.canonical(inst.bind(o, evaluate(e, inst)))
    assert satisfies(spec.sigma, right)
    wrong = spec.canonical(inst.bind(o, parse_value('[<4, 6>]')))
    assert not satisfies(spec.sigma, wrong)


def test_spec_needs_composition_freedom():
    with pytest.raises(NotCompositionFree):
        io_spec(parse_expr(OVER_UNION, SETS))


def test_assembled_definition():
    defn = assemble_determinacy(identity_problem())
    assert [v.name for v in defn.inputs] == ['V']
    assert defn.output.name == 'q'
    assert free_vars(defn.phi) <= set(defn.inputs) | set(defn.auxiliaries) \
        | {defn.output}


def test_view_values():
    problem = identity_problem()
    b = problem.base[0]
    valuation = problem.view_values(Instance({b: parse_value('[1, 2]')}))
    assert valuation.lookup(problem.view_vars()[0]) == parse_value('[1, 2]')


def test_rewriting_over_the_views(identity_set):
    problem = identity_problem()
    result = rewrite_views(problem, identity_set.witness)
    (v,) = problem.view_vars()
    inst = Instance({v: parse_value('[2, 5]')})
    assert evaluate(result.expr, inst) == parse_value('[2, 5]')


@pytest.mark.parametrize('text', CORPUS)
def test_spec_defines_exactly_the_value(text):
    e = parse_expr(text, CORPUS_ENV)
    assert is_composition_free(e)
    o = Var('o', e.ty)
    spec = io_spec(e, output=o)
    bounds = Bounds(2, 2)
    for valuation in enumerate_valuations(spec.inputs, bounds):
        right = evaluate(e, valuation)
        assert satisfies(spec.sigma, spec.canonical(valuation.bind(o, right)))
        for value in enumerate_values(o.ty, bounds):
            if value != right:
                wrong = spec.canonical(valuation.bind(o, value))
                assert not satisfies(spec.sigma, wrong)


def test_flatten_spec_matches_the_grouping_clauses():
    e = parse_expr(FLATTEN, NESTED)
    v = Var('V', e.ty)
    spec = io_spec(e, output=v)
    assert spec.aux == ()
    env = dict(NESTED, V='set((ur * ur))')
    clauses = parse_formula(
        'and(forall v in V . exists b in B . exists e in pi2(b) . '
        'and(pi1(v) = pi1(b), pi2(v) = e), '
        'forall b in B . forall e in pi2(b) . exists v in V . '
        'and(pi1(v) = pi1(b), pi2(v) = e))', env)
    assert bounded_equivalent(spec.sigma, clauses, Bounds(3, 2))


def simplenesting_problem():
    b = Var('B', parse_type(NESTED['B']))
    return DeterminacyProblem({'V': parse_expr(FLATTEN, NESTED)}, VarE(b),
                              (b,), parse_formula(GROUPED_KEYS, NESTED))


def test_simplenesting_assembles_to_the_grouping():
    problem = simplenesting_problem()
    defn = assemble_determinacy(problem)
    assert [v.name for v in defn.inputs] == ['V']
    (b,) = problem.base
    grouping = And(nesting_formula(), equiv(defn.output, b))
    assert bounded_equivalent(defn.phi, grouping, Bounds(2, 2))


def test_rewriting_the_flatten_view(nesting):
    problem = simplenesting_problem()
    (b,) = problem.base
    assert problem.view_vars() == nesting.inputs
    keys = parse_formula(GROUPED_KEYS, NESTED)
    rewriting = Synthesizer().extract(nesting)
    checked = 0
    for value in enumerate_values(b.ty, Bounds(3, 3)):
        base = Instance({b: value}, Bounds(3, 3).atoms)
        if not satisfies(keys, base):
            continue
        views = problem.view_values(base)
        assert evaluate(rewriting.expr, views) == \
            evaluate(problem.query, base)
        checked += 1
    assert checked == 512
