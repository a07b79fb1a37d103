"""Conversion of first-order proofs into FO-focused ones.

A restricted rule (Ax, Top, ∃, Ref, Repl) whose conclusion holds an ∧, ∨
or ∀ formula is a counterexample. It is removed by applying the invertible
rule first and projecting the occurrence through the old subproof; an ∧
duplicates the subproof, the other connectives keep its size.
"""
import logging

from nrcsynth.errors import SizeBlowup
from nrcsynth.kernel.sequents import ProofTree, proof_size
from nrcsynth.fo.checker import FoRule, focus_violation, fo_rename, \
    proof_names
from nrcsynth.fo.syntax import FoAnd, FoOr, fo_fresh, fo_subst

logger = logging.getLogger(__name__)


def _shift(i, j, width):
    return i if i < j else i + width - 1


class FoFocuser:

    def __init__(self, size_ceiling=100000):
        self._size_ceiling = size_ceiling
        self._names = set()
        self._steps = 0

    @property
    def steps(self):
        return self._steps

    def fresh(self, stem):
        name = fo_fresh(stem, self._names)
        self._names.add(name)
        return name

    def focus(self, p):
        self._names = proof_names(p)
        self._steps = 0
        # Each conversion at most doubles the tree.
        limit = min(self._size_ceiling, 2 ** min(proof_size(p), 60))
        out = self.visit(p, limit)
        logger.debug('focused %d nodes into %d with %d conversions',
                     proof_size(p), proof_size(out), self._steps)
        return out

    def visit(self, p, limit):
        while True:
            j = focus_violation(p)
            if j is None:
                break
            p = self.convert(p, j)
            self._steps += 1
            if proof_size(p) > limit:
                raise SizeBlowup(f'focusing exceeded {limit} nodes')
        return ProofTree(p.conclusion, p.rule,
                         tuple(self.visit(q, limit) for q in p.premises))

    def convert(self, p, j):
        """Applies the invertible rule for formula j first."""
        f = p.conclusion[j]
        if isinstance(f, FoAnd):
            premises = (self.project(p, j, [f.l], 0),
                        self.project(p, j, [f.r], 1))
            return ProofTree(p.conclusion, FoRule('And', (j,)), premises)
        if isinstance(f, FoOr):
            return ProofTree(p.conclusion, FoRule('Or', (j,)),
                             (self.project(p, j, [f.l, f.r], 0),))
        y = self.fresh(f.var)
        instance = fo_subst(f.body, {f.var: y})
        return ProofTree(p.conclusion, FoRule('Forall', (j,), term=y),
                         (self.project(p, j, [instance], y),))

    def project(self, p, j, parts, branch):
        """p with the formula at j replaced by parts, dropping the steps that
        decompose it. branch picks the ∧ component or names the ∀
        eigenvariable."""
        rule = p.rule
        if rule.principal and rule.principal[0] == j \
                and rule.rule in ('And', 'Or', 'Forall'):
            if rule.rule == 'And':
                return p.premises[branch]
            if rule.rule == 'Or':
                return p.premises[0]
            (q,) = p.premises
            if rule.term == branch:
                return q
            return fo_rename(q, rule.term, branch)
        width = len(parts)
        conclusion = p.conclusion.splice(j, parts)
        moved = FoRule(rule.rule,
                       tuple(_shift(i, j, width) for i in rule.principal),
                       rule.term, rule.derived)
        premises = tuple(self.project(q, j, parts, branch)
                         for q in p.premises)
        return ProofTree(conclusion, moved, premises)


def fo_focus(p, size_ceiling=100000):
    return FoFocuser(size_ceiling).focus(p)
