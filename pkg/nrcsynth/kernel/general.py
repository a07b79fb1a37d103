from nrcsynth.kernel.base import Checker
from nrcsynth.kernel.rules import (
    GENERAL_RULES, beta_redex, instantiate, rewrite_formula)
from nrcsynth.kernel.sequents import (
    Sequent2, RuleInstance, ProofTree, lower, loc, parse_loc)
from nrcsynth.syntax import (
    EqUr, BOT, Pair, dual, subst, replace_all)


class GeneralChecker(Checker):
    """The two-sided calculus with negation, reflexivity and replacement."""

    def __init__(self):
        super().__init__(strict=False, allowed=GENERAL_RULES,
                         sequent_type=Sequent2)


def check_general(p):
    return GeneralChecker().check(p)


_LOWERED_TAGS = {'AndR': 'And', 'OrR': 'Or', 'ForallR': 'Forall',
                 'ExistsR': 'Exists', 'Refl': 'Refl', 'Repl': 'Neq',
                 'ProdEta': 'ProdEta', 'ProdBeta': 'ProdBeta', 'Ax': 'Ax',
                 'BotL': 'Top'}


def lower_tree(p):
    """Reads a two-sided proof as a one-sided tree over lowered sequents.

    Negation steps disappear since both sides of them lower to the same
    multiset.
    """
    while p.tag in ('NegL', 'NegR'):
        p = p.premises[0]
    shift = len(p.conclusion.gamma)

    def relocate(location):
        kind, index = parse_loc(location)
        if kind == 'g':
            return loc('d', index)
        if kind == 'd':
            return loc('d', shift + index)
        return location

    rule = p.rule.with_(rule=_LOWERED_TAGS[p.tag],
                        principal=tuple(relocate(x) for x in p.rule.principal))
    return ProofTree(lower(p.conclusion), rule,
                     tuple(lower_tree(q) for q in p.premises))


def embed(p, extra=()):
    """Maps a focused proof into the two-sided calculus.

    extra lists formulas carried passively on the right of every node; the
    intermediate instances of an existential block travel this way.
    """
    seq = Sequent2(p.conclusion.theta, (), p.conclusion.delta + tuple(extra))
    r = p.rule
    tag = r.rule if r.rule != 'TopR' else 'Top'
    if tag == 'Eq':
        (k,) = [parse_loc(x)[1] for x in r.principal]
        t = seq.delta[k].l
        above = Sequent2(seq.theta, (EqUr(t, t),), seq.delta)
        ax = ProofTree(above, RuleInstance('Ax', (loc('g', 0), loc('d', k))))
        return ProofTree(seq, RuleInstance('Refl', witness=(t,)), (ax,))
    if tag == 'Top':
        (k,) = [parse_loc(x)[1] for x in r.principal]
        rest = seq.delta[:k] + seq.delta[k + 1:]
        above = Sequent2(seq.theta, (BOT,), rest)
        bot = ProofTree(above, RuleInstance('BotL', (loc('g', 0),)))
        return ProofTree(seq, RuleInstance('NegR', (loc('d', k),)), (bot,))
    if tag in ('And', 'Or', 'Forall'):
        premises = tuple(embed(q, extra) for q in p.premises)
        return ProofTree(seq, r.with_(rule=tag + 'R'), premises)
    if tag == 'Exists':
        return _embed_exists(p, seq, extra)
    if tag == 'Neq':
        return _embed_neq(p, seq, extra)
    if tag == 'ProdEta':
        (x,), (x1, x2) = r.witness, r.fresh
        mapped = tuple(subst(f, {x: Pair(x1, x2)}) for f in extra)
        return ProofTree(seq, r, (embed(p.premises[0], mapped),))
    if tag == 'ProdBeta':
        redex, contractum = beta_redex(r)
        mapped = tuple(replace_all(f, redex, contractum) for f in extra)
        return ProofTree(seq, r, (embed(p.premises[0], mapped),))
    raise ValueError(f'{tag} is not a focused rule')


def _embed_exists(p, seq, extra):
    (k,) = [parse_loc(x)[1] for x in p.rule.principal]
    phi = seq.delta[k]
    steps = []
    current = phi
    for t in p.rule.witness:
        current, _ = instantiate(current, (t,))
        steps.append(current)
    intermediate = tuple(steps[:-1])
    top = embed(p.premises[0], tuple(extra) + intermediate)
    # Build the chain bottom-up: each step instantiates the previous instance.
    sequents = [seq]
    for step in steps:
        prev = sequents[-1]
        sequents.append(Sequent2(prev.theta, (), prev.delta + (step,)))
    node = top
    for i in reversed(range(len(steps))):
        index = k if i == 0 else len(sequents[i].delta) - 1
        rule = RuleInstance('ExistsR', (loc('d', index),),
                            witness=(p.rule.witness[i],))
        node = ProofTree(sequents[i], rule, (node,))
    return node


def _embed_neq(p, seq, extra):
    r = p.rule
    (a, b) = [parse_loc(x)[1] for x in r.principal]
    atom, alpha = seq.delta[a], seq.delta[b]
    alpha2 = rewrite_formula(alpha, atom, r)
    rest = tuple(f for i, f in enumerate(seq.delta) if i not in (a, b))
    theta = seq.theta
    eq, nalpha, nalpha2 = dual(atom), dual(alpha), dual(alpha2)
    s1 = Sequent2(theta, (eq,), tuple(f for i, f in enumerate(seq.delta)
                                      if i != a))
    s2 = Sequent2(theta, (eq, nalpha), rest)
    s3 = Sequent2(theta, (eq, nalpha, nalpha2), rest)
    s4 = Sequent2(theta, (eq, nalpha), rest + (alpha2,))
    s5 = Sequent2(theta, (eq,), rest + (alpha2, alpha))
    top = embed(p.premises[0], extra)
    n5 = ProofTree(s5, RuleInstance('NegL', (loc('g', 0),)), (top,))
    n4 = ProofTree(s4, RuleInstance('NegL', (loc('g', 1),)), (n5,))
    n3 = ProofTree(s3, RuleInstance('NegL', (loc('g', 2),)), (n4,))
    n2 = ProofTree(s2, RuleInstance('Repl', (loc('g', 0), loc('g', 1)),
                                    occ=r.occ, side=r.side), (n3,))
    alpha_index = s1.delta.index(alpha)
    n1 = ProofTree(s1, RuleInstance('NegR', (loc('d', alpha_index),)), (n2,))
    return ProofTree(seq, RuleInstance('NegR', (loc('d', a),)), (n1,))
