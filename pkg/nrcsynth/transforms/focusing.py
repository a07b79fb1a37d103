"""From general proofs to focused ones.

The two-sided proof is lowered, axioms are expanded into axiom-free
identities, rewrites of compound formulas are pushed down to atoms and
reflexivity steps are dropped. What is left violates focusing only in two
ways: an existential, rewriting or product step with an alternating
formula in its context, and an existential step that stops short of a
maximal instance. Both are repaired top-down; the first by moving the
alternating step below, which duplicates proofs under conjunctions, hence
the size ceiling.
"""
from collections import Counter
import logging

from nrcsynth.errors import ShapeMismatch, SizeBlowup
from nrcsynth.kernel.focused import check_focused
from nrcsynth.kernel.general import lower_tree
from nrcsynth.kernel.rules import can_extend, instantiate
from nrcsynth.kernel.sequents import (
    Sequent1, ProofTree, RuleInstance, loc, parse_loc, proof_size)
from nrcsynth.syntax import (
    Top, Bot, And, Or, ForallIn, ExistsIn, alpha_key, fresh_var, is_atomic,
    is_el, subst)
from nrcsynth.transforms.base import alignments, apply_rule, build, new_index
from nrcsynth.transforms.structural import (
    and_project, contract, eliminate_reflexivity, fold, forall_invert,
    identity_proof, or_invert, redirect_rewrite, weaken)

logger = logging.getLogger(__name__)

CONTEXT_RULES = ('Exists', 'Neq', 'ProdEta', 'ProdBeta')


def expand_axioms(p):
    """Replaces every axiom by an axiom-free identity proof."""
    if p.tag == 'Ax':
        i, j = (parse_loc(m)[1] for m in p.rule.principal)
        return identity_proof(p.conclusion, i, j)
    return p.with_(premises=tuple(expand_axioms(q) for q in p.premises))


def contract_to(p, seq):
    """Contracts surplus copies in the conclusion of p down to seq."""
    want = Counter(alpha_key(f) for f in seq.delta)
    while True:
        have = Counter(alpha_key(f) for f in p.conclusion.delta)
        surplus = next((key for key in have if have[key] > want[key]), None)
        if surplus is None:
            break
        copies = [j for j, f in enumerate(p.conclusion.delta)
                  if alpha_key(f) == surplus]
        p = contract(p, copies[0], copies[-1])
    if not p.conclusion.same_as(seq):
        raise ShapeMismatch(f'{p.conclusion} does not contract to {seq}')
    return p


def _strip(occ, first):
    return tuple(tuple(pos[1:]) for pos in occ if pos[0] == first)


def _last(seq):
    return len(seq.delta) - 1


class Focuser:
    """Turns general and lowered proofs into focused ones."""

    def __init__(self, size_ceiling=200000):
        assert size_ceiling > 0
        self._size_ceiling = size_ceiling

    @property
    def size_ceiling(self):
        return self._size_ceiling

    def focus(self, p):
        """A focused proof of the lowered conclusion of a general proof."""
        one_sided = p if isinstance(p.conclusion, Sequent1) else lower_tree(p)
        return self.refocus(one_sided, budget=proof_size(p))

    def refocus(self, p, budget=None):
        """A focused proof of the conclusion of a lowered one-sided proof."""
        n = proof_size(p) if budget is None else budget
        self._limit = self._size_ceiling if n >= 64 else \
            min(self._size_ceiling, 2 ** n)
        q = eliminate_reflexivity(self.atomize(expand_axioms(p)))
        out = self.foc(q)
        self._guard(out)
        check_focused(out).require()
        logger.debug('focused %d nodes into %d', proof_size(p),
                     proof_size(out))
        return out

    def _guard(self, p):
        if proof_size(p) > self._limit:
            raise SizeBlowup(f'focusing passed {self._limit} nodes')

    # Rewrites of compound formulas.

    def atomize(self, p):
        """Pushes every rewrite of a compound formula down to atoms."""
        p = p.with_(premises=tuple(self.atomize(q) for q in p.premises))
        if p.tag != 'Neq':
            return p
        j = parse_loc(p.rule.principal[1])[1]
        alpha = p.conclusion.delta[j]
        if is_atomic(alpha):
            return p
        if isinstance(alpha, ExistsIn):
            return self.atomize(self._redirect(p))
        if isinstance(alpha, And):
            return self._rewrite_and(p, j, alpha)
        if isinstance(alpha, Or):
            return self._rewrite_or(p, j, alpha)
        if isinstance(alpha, ForallIn):
            return self._rewrite_forall(p, j, alpha)
        raise ShapeMismatch(f'a rewrite of {alpha}')

    def _parts(self, p):
        """The premise of a rewrite with the indices of the rewritten
        formula, its copy and the disequality."""
        (prem,) = p.premises
        (a,) = alignments(p)
        i, j = (parse_loc(m)[1] for m in p.rule.principal)
        derived = new_index(a, ('new', p.rule.principal[1], 0))
        return prem, a.delta.index(('d', j)), derived, a.delta.index(('d', i))

    def _redirect(self, p):
        prem, copy, derived, atom = self._parts(p)
        return redirect_rewrite(prem, atom, copy, derived, p.rule.side,
                                p.rule.occ)

    def _rewrite_on(self, seq, i, j, occ, side, above):
        """seq closed by a rewrite of the formula at j (or by `above`
        directly when nothing is selected)."""
        if not occ:
            return contract_to(above, seq)
        rule = RuleInstance('Neq', (loc('d', i), loc('d', j)), occ=occ,
                            side=side)
        (e,) = apply_rule(seq, rule)
        top = e.sequent(False)
        node = ProofTree(seq, rule, (contract_to(above, top),))
        return self.atomize(node)

    def _rewrite_and(self, p, j, alpha):
        prem, copy, derived, _ = self._parts(p)
        i = parse_loc(p.rule.principal[0])[1]

        def branch(k, seq):
            q = and_project(and_project(prem, derived, k + 1), copy, k + 1)
            occ = _strip(p.rule.occ, k)
            return self._rewrite_on(seq, i, j, occ, p.rule.side, q)

        return build(p.conclusion, RuleInstance('And', (loc('d', j),)), branch)

    def _rewrite_or(self, p, j, alpha):
        prem, copy, derived, _ = self._parts(p)
        i = parse_loc(p.rule.principal[0])[1]
        q = or_invert(prem, derived)
        q = or_invert(q, copy)
        side = p.rule.side

        def rewrites(_, seq):
            # The disjuncts sit at j and at the end.
            occ1, occ2 = _strip(p.rule.occ, 0), _strip(p.rule.occ, 1)
            steps = []
            if occ1:
                steps.append((j, occ1))
            if occ2:
                steps.append((_last(seq), occ2))
            return self._chain(seq, i, steps, side, q)

        return build(p.conclusion, RuleInstance('Or', (loc('d', j),)),
                     rewrites)

    def _chain(self, seq, i, steps, side, above):
        if not steps:
            return contract_to(above, seq)
        (k, occ), rest = steps[0], steps[1:]
        rule = RuleInstance('Neq', (loc('d', i), loc('d', k)), occ=occ,
                            side=side)
        (e,) = apply_rule(seq, rule)
        node = ProofTree(seq, rule,
                         (self._chain(e.sequent(False), i, rest, side,
                                      above),))
        return self.atomize(node)

    def _rewrite_forall(self, p, j, alpha):
        if _strip(p.rule.occ, 0):
            raise ShapeMismatch(f'a rewrite inside the bound of {alpha}')
        prem, copy, derived, _ = self._parts(p)
        i = parse_loc(p.rule.principal[0])[1]
        y = fresh_var(alpha.var.name, alpha.var.ty, prem.names())
        q = forall_invert(forall_invert(prem, derived, y), copy, y)
        occ = _strip(p.rule.occ, 1)
        rule = RuleInstance('Forall', (loc('d', j),), fresh=(y,))
        return build(p.conclusion, rule, lambda _, seq: self._rewrite_on(
            seq, i, j, occ, p.rule.side, q))

    # Focusing.

    def foc(self, p):
        if p.tag in CONTEXT_RULES:
            k = self._alternating(p.conclusion)
            if k is not None:
                return self.foc(self._lift(p, k))
        if p.tag == 'Exists':
            p = self._maximize(p)
        out = p.with_(premises=tuple(self.foc(q) for q in p.premises))
        self._guard(out)
        return out

    def _alternating(self, seq):
        for k, f in enumerate(seq.delta):
            if not is_el(f) and not isinstance(f, Bot):
                return k
        return None

    def _lift(self, p, k):
        """Applies the alternating step on the formula at k below p."""
        seq = p.conclusion
        f = seq.delta[k]
        here = (loc('d', k),)
        if isinstance(f, Top):
            return ProofTree(seq, RuleInstance('Top', here))
        if isinstance(f, And):
            return build(seq, RuleInstance('And', here),
                         lambda i, _: and_project(p, k, i + 1))
        if isinstance(f, Or):
            return build(seq, RuleInstance('Or', here),
                         lambda _, s: or_invert(p, k))
        y = fresh_var(f.var.name, f.var.ty, p.names())
        return build(seq, RuleInstance('Forall', here, fresh=(y,)),
                     lambda _, s: forall_invert(p, k, y))

    def _maximize(self, p):
        """Extends an existential step to a maximal instance."""
        seq = p.conclusion
        k = parse_loc(p.rule.principal[0])[1]
        phi = seq.delta[k]
        witnesses = list(p.rule.witness)
        instance, _ = instantiate(phi, tuple(witnesses))
        if not can_extend(instance, seq):
            return p
        while can_extend(instance, seq):
            bound = alpha_key(instance.bound)
            atom = next(a for a in seq.theta if alpha_key(a.container) == bound)
            witnesses.append(atom.elem)
            instance = subst(instance.body, {instance.var: atom.elem})
        logger.debug('extended an instance of %s to %d witnesses', phi,
                     len(witnesses))
        (prem,) = p.premises
        (a,) = alignments(p)
        partial = new_index(a, ('new', p.rule.principal[0], 0))
        widened = weaken(prem, extra_delta=(instance,))
        copy = a.delta.index(('d', k))
        body = fold(widened, partial, copy, tuple(p.rule.witness))
        return ProofTree(seq, p.rule.with_(witness=tuple(witnesses)), (body,))


def focus(p, size_ceiling=200000):
    return Focuser(size_ceiling).focus(p)


def refocus(p, size_ceiling=200000):
    return Focuser(size_ceiling).refocus(p)
