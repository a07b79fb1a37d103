"""β-normalization of one-sided proofs.

Only free redexes π_i(⟨t₁, t₂⟩), those none of whose variables is bound
where they occur, are contracted: those are the ones a ProdBeta step can
reach. The output is a lowered proof; ProdBeta steps restore normal form
wherever an instantiation or a split creates new redexes.
"""
import logging

from nrcsynth.errors import ShapeMismatch, SizeBlowup
from nrcsynth.kernel.rules import rewrite_sides
from nrcsynth.kernel.sequents import ProofTree, RuleInstance, \
    parse_loc, proof_size
from nrcsynth.syntax import (
    EqUr, NeqUr, And, Or, Pair, Quantifier, MembershipAtom, Projection,
    beta_reduce_term, is_atomic, replace_all, rewritten_positions,
    term_children, term_vars)
from nrcsynth.transforms.base import (
    ProofRewriter, View, alignments, apply_rule, new_index, stack)
from nrcsynth.transforms.structural import contract

logger = logging.getLogger(__name__)


def _redexes(t):
    if isinstance(t, Projection) and isinstance(t.of, Pair):
        yield t
    for c in term_children(t):
        yield from _redexes(c)


def _terms(f):
    if isinstance(f, MembershipAtom):
        return (f.elem, f.container)
    if isinstance(f, (EqUr, NeqUr)):
        return (f.l, f.r)
    return ()


def find_free_redex(f, bound=frozenset()):
    """A redex of f none of whose variables is bound at its occurrence."""
    if isinstance(f, (And, Or)):
        return find_free_redex(f.l, bound) or find_free_redex(f.r, bound)
    terms = (f.bound,) if isinstance(f, Quantifier) else _terms(f)
    for t in terms:
        for r in _redexes(t):
            if not term_vars(r) & bound:
                return r
    if isinstance(f, Quantifier):
        return find_free_redex(f.body, bound | {f.var})
    return None


def contractum(redex):
    return redex.of.fst if redex.side == 1 else redex.of.snd


def beta_free(f):
    """The free-redex normal form of a formula or atom."""
    if isinstance(f, MembershipAtom):
        return MembershipAtom(beta_reduce_term(f.elem),
                              beta_reduce_term(f.container))
    while True:
        r = find_free_redex(f)
        if r is None:
            return f
        f = replace_all(f, r, contractum(r))


def beta_chain(seq):
    """ProdBeta steps from seq up to its normal form; returns the chain and
    the normal sequent."""
    chain = []
    while True:
        r = next(filter(None, map(find_free_redex,
                                  seq.theta + seq.delta)), None)
        if r is None:
            return chain, seq
        rule = RuleInstance('ProdBeta', witness=(r.of.fst, r.of.snd),
                            side=r.side)
        (e,) = apply_rule(seq, rule)
        chain.append((seq, rule))
        seq = e.sequent(False)


def _normalized(view):
    return view.with_(
        delta=[tuple(beta_free(f) for f in block) for block in view.delta],
        theta=[None if a is None else beta_free(a) for a in view.theta],
        extra_theta=tuple(beta_free(a) for a in view.extra_theta),
        extra_delta=tuple(beta_free(f) for f in view.extra_delta))


class BetaNormalizer(ProofRewriter):

    def __init__(self):
        super().__init__()

    def image_of(self, f, view):
        return beta_free(super().image_of(f, view))

    def map_rule(self, node, view):
        rule = super().map_rule(node, view)
        if rule.rule in ('Exists', 'Refl'):
            return rule.with_(witness=tuple(beta_reduce_term(t)
                                            for t in rule.witness))
        return rule

    def visit(self, node, view):
        if node.tag == 'ProdBeta':
            (prem,) = node.premises
            (a,) = alignments(node)
            return self.rewrite(prem, self.skip_view(node, view, 0, a, {}))
        if node.tag == 'Neq':
            return self.rewrite_step(node, view)
        return None

    def rewrite_step(self, node, view):
        rule, locs = self.relocate(node, view, self.map_rule(node, view))
        out_seq = view.sequent()
        atom = out_seq.delta[parse_loc(rule.principal[0])[1]]
        alpha = out_seq.delta[parse_loc(rule.principal[1])[1]]
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[1], 0)
        derived = self.image_of(prem.conclusion.delta[new_index(a, origin)],
                                view)
        src, dst = rewrite_sides(atom, rule.side)
        occ = rewritten_positions(alpha, derived, src, dst)
        if occ is None:
            raise ShapeMismatch(f'{derived} is no longer a rewrite of {alpha}')
        if occ:
            return self.emit(node, view, out_seq, rule.with_(occ=tuple(occ)),
                             locs)
        # The rewrite became trivial: the derived formula is another copy.
        if is_atomic(derived):
            return self.rewrite(prem, self.skip_view(node, view, 0, a,
                                                     {origin: ()}))
        pv = self.skip_view(node, view, 0, a, {origin: (alpha,)})
        starts, _ = pv.offsets()
        j = parse_loc(node.rule.principal[1])[1]
        keep = starts[a.delta.index(('d', j))]
        drop = starts[a.delta.index(origin)]
        return contract(self.rewrite(prem, pv), keep, drop)

    def emit(self, node, view, out_seq, rule, locs, new=None, new_tags=None):
        expected = apply_rule(out_seq, rule)
        premises = []
        for q, (prem, a, e) in enumerate(zip(node.premises, alignments(node),
                                             expected)):
            chain, top = beta_chain(e.sequent(False))
            pv = _normalized(self.premise_view(node, view, q, a, e, locs,
                                               rule, new, new_tags))
            sub = self.rewrite(prem, pv)
            if not sub.conclusion.same_as(top):
                raise ShapeMismatch('normal forms do not line up')
            premises.append(stack(chain, sub))
        return ProofTree(out_seq, rule, premises)


def beta_normalize(p, size_ceiling=100000):
    """A proof of the β-normal form of the conclusion of p."""
    seq = p.conclusion
    view = View(delta=[(beta_free(f),) for f in seq.delta],
                theta=[beta_free(a) for a in seq.theta])
    out = BetaNormalizer().run(p, view)
    if proof_size(out) > size_ceiling:
        raise SizeBlowup(f'normalization exceeded {size_ceiling} nodes')
    logger.debug('normalized %d nodes into %d', proof_size(p), proof_size(out))
    return out
