"""One-sided sequent calculus for first-order logic with equality.

Premises are positional: ∧, ∨ and ∀ splice their components in place of
the principal formula, while ∃, Ref and Repl append their new formula.
"""
from dataclasses import dataclass
import logging

from nrcsynth.kernel.base import Checker
from nrcsynth.kernel.rules import RuleViolation
from nrcsynth.kernel.sequents import ProofTree
from nrcsynth.fo.syntax import (
    FoAnd, FoExists, FoForall, FoNeq, FoOr, FoSequent, FoTop, fo_alpha_eq,
    fo_dual, fo_subst, is_atom, is_invertible,
    is_negative_literal, replaces)

logger = logging.getLogger(__name__)

FO_RULES = ('Ax', 'Top', 'And', 'Or', 'Forall', 'Exists', 'Ref', 'Repl')
RESTRICTED = ('Ax', 'Top', 'Exists', 'Ref', 'Repl')


@dataclass(frozen=True)
class FoRule:
    rule: str
    principal: tuple = ()
    term: str = None
    derived: object = None

    def __post_init__(self):
        object.__setattr__(self, 'principal', tuple(self.principal))


def fo_node(conclusion, rule, premises=()):
    if not isinstance(conclusion, FoSequent):
        conclusion = FoSequent(conclusion)
    return ProofTree(conclusion, rule, tuple(premises))


def _principal(seq, rule, count):
    if len(rule.principal) != count:
        raise RuleViolation('PrincipalArity',
                            f'{rule.rule} takes {count} principal formulas')
    for i in rule.principal:
        if not 0 <= i < len(seq):
            raise RuleViolation('PrincipalRange', f'no formula at {i}')
    return [seq[i] for i in rule.principal]


def fo_expand(seq, rule):
    """The premises a rule instance demands of its conclusion."""
    tag = rule.rule
    if tag == 'Ax':
        phi, psi = _principal(seq, rule, 2)
        if not is_atom(phi) or not fo_alpha_eq(psi, fo_dual(phi)):
            raise RuleViolation('NotComplementary',
                                f'{phi} and {psi} are not an atom and its '
                                f'negation')
        return []
    if tag == 'Top':
        (f,) = _principal(seq, rule, 1)
        if not isinstance(f, FoTop):
            raise RuleViolation('NotTop', f'{f} is not true')
        return []
    if tag in ('And', 'Or', 'Forall'):
        (f,) = _principal(seq, rule, 1)
        i = rule.principal[0]
        cls = {'And': FoAnd, 'Or': FoOr, 'Forall': FoForall}[tag]
        if not isinstance(f, cls):
            raise RuleViolation('ConnectiveMismatch', f'{tag} applied to {f}')
        if tag == 'And':
            return [seq.splice(i, [f.l]), seq.splice(i, [f.r])]
        if tag == 'Or':
            return [seq.splice(i, [f.l, f.r])]
        y = rule.term
        if y is None or y in seq.free_vars():
            raise RuleViolation('FreshnessViolation',
                                f'eigenvariable {y} occurs in the conclusion')
        return [seq.splice(i, [fo_subst(f.body, {f.var: y})])]
    if tag == 'Exists':
        (f,) = _principal(seq, rule, 1)
        if not isinstance(f, FoExists):
            raise RuleViolation('ConnectiveMismatch', f'Exists applied to {f}')
        if rule.term is None:
            raise RuleViolation('MissingWitness', 'Exists needs a witness')
        return [seq.extend(fo_subst(f.body, {f.var: rule.term}))]
    if tag == 'Ref':
        if rule.term is None:
            raise RuleViolation('MissingWitness', 'Ref needs a term')
        _principal(seq, rule, 0)
        return [seq.extend(FoNeq(rule.term, rule.term))]
    if tag == 'Repl':
        neq, phi = _principal(seq, rule, 2)
        if not isinstance(neq, FoNeq):
            raise RuleViolation('ConnectiveMismatch', f'{neq} is no disequality')
        if not is_negative_literal(phi):
            raise RuleViolation('NotNegativeLiteral',
                                f'{phi} is not a negative literal')
        derived = rule.derived
        if derived is None or not replaces(phi, derived, neq.l, neq.r):
            raise RuleViolation('BadReplacement',
                                f'{derived} does not replace {neq.l} by '
                                f'{neq.r} in {phi}')
        return [seq.extend(derived)]
    raise RuleViolation('UnknownRule', f'{tag} is not a first-order rule')


class FoChecker(Checker):

    def __init__(self):
        super().__init__(strict=True, allowed=FO_RULES,
                         sequent_type=FoSequent)

    def check_node(self, node):
        expected = fo_expand(node.conclusion, node.rule)
        if len(expected) != len(node.premises):
            raise RuleViolation(
                'ArityMismatch',
                f'{node.tag} has {len(node.premises)} premises, expected '
                f'{len(expected)}')
        for i, (e, q) in enumerate(zip(expected, node.premises)):
            if not e.same_as(q.conclusion):
                raise RuleViolation(
                    'PremiseMismatch',
                    f'premise {i} is {q.conclusion}, expected {e}')


def fo_check(p):
    return FoChecker().check(p)


def focus_violation(node):
    """The first invertible formula in the conclusion of a restricted rule."""
    if node.tag not in RESTRICTED:
        return None
    for i, f in enumerate(node.conclusion):
        if is_invertible(f):
            return i
    return None


def fo_is_focused(p):
    return all(focus_violation(node) is None for node in p.nodes())



def fo_rename(p, old, new):
    """Renames the free variable old to new throughout a proof; new must be
    fresh for the whole proof."""
    def rename(f):
        return fo_subst(f, {old: new})
    rule = p.rule
    swap = (lambda t: new if t == old else t)
    rule = FoRule(rule.rule, rule.principal, swap(rule.term) if rule.term
                  else rule.term,
                  rename(rule.derived) if rule.derived is not None else None)
    return ProofTree(FoSequent(tuple(rename(f) for f in p.conclusion)), rule,
                     tuple(fo_rename(q, old, new) for q in p.premises))


def proof_names(p):
    names = set()
    for node in p.nodes():
        names |= node.conclusion.names()
        if node.rule.term:
            names.add(node.rule.term)
    return names


__all__ = ['FoRule', 'FoChecker', 'fo_check', 'fo_expand', 'fo_is_focused',
           'fo_node', 'fo_rename', 'focus_violation']
