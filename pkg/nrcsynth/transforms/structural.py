"""Admissible structural rules of the one-sided calculus as proof-to-proof
functions: weakening, the inversions, contraction, substitution, existential
blocks and the aliasing of disequalities."""
import logging

from nrcsynth.errors import ShapeMismatch
from nrcsynth.kernel.rules import beta_redex, instantiate, rewrite_sides
from nrcsynth.kernel.sequents import (
    Sequent1, ProofTree, RuleInstance, loc, parse_loc)
from nrcsynth.syntax import (
    Pair, EqUr, NeqUr, Top, Bot, And, Or, ForallIn, ExistsIn, MembershipAtom,
    alpha_key, dual, fresh_var,
    subst, subst_term, replace_in_term, rewritten_positions)
from nrcsynth.transforms.base import (
    ProofRewriter, View, alignments, apply_rule, build, locate, new_index,
    bounded_growth)

logger = logging.getLogger(__name__)


def principal_index(node, n=0):
    return parse_loc(node.rule.principal[n])[1]


def _kind(tag):
    return tag[0] if isinstance(tag, tuple) else tag


def tagged_principal(node, view, kinds=None):
    """Index of the first principal formula carrying a tag, if any."""
    for location in node.rule.principal:
        kind, i = parse_loc(location)
        if kind == 'd' and i in view.tags:
            if kinds is None or _kind(view.tags[i]) in kinds:
                return i
    return None


def _strip(occ, first):
    return tuple(tuple(pos[1:]) for pos in occ if pos[0] == first)


def _atom_loc(node, view):
    i = principal_index(node, 0)
    target = view.out_loc(i)
    if target is None:
        target = locate(view.sequent(),
                        subst(node.conclusion.delta[i], view.sigma))
    return target


def neq_on_parts(rewriter, node, view, i, new_images, occs, tag):
    """Rewrites a Neq step whose rewritten formula (input index i) is shown
    in the output by its parts: one rewrite per part with occurrences,
    parts without occurrences are contracted against their source."""
    (prem,) = node.premises
    (a,) = alignments(node)
    origin = ('new', node.rule.principal[1], 0)
    pv = rewriter.skip_view(node, view, 0, a, {origin: tuple(new_images)},
                            new_tags={origin: tag})
    above = rewriter.rewrite(prem, pv)
    starts, _ = pv.offsets()
    source = starts[a.delta.index(('d', i))]
    derived = starts[a.delta.index(origin)]
    pairs = [(source + k, derived + k) for k in range(len(occs)) if not occs[k]]
    above = contract_pairs(above, pairs)
    out_seq = view.sequent()
    atom_loc = _atom_loc(node, view)
    base = view.offsets()[0][i]
    chain = [(out_seq, None)]
    for k, occ in enumerate(occs):
        if not occ:
            continue
        seq = chain[-1][0]
        rule = RuleInstance('Neq', (atom_loc, loc('d', base + k)),
                            occ=occ, side=node.rule.side)
        (e,) = apply_rule(seq, rule)
        chain[-1] = (seq, rule)
        chain.append((e.sequent(False), None))
    if not above.conclusion.same_as(chain[-1][0]):
        raise ShapeMismatch('rewritten parts do not line up')
    out = above
    for seq, rule in reversed(chain[:-1]):
        out = ProofTree(seq, rule, (out,))
    return out


def _ax(node):
    return principal_index(node, 0), principal_index(node, 1)


def identity_proof(seq, i, j):
    """An axiom-free proof of seq from the complementary pair at i and j."""
    f, g = seq.delta[i], seq.delta[j]
    if alpha_key(f) != alpha_key(dual(g)):
        raise ShapeMismatch(f'{f} and {g} are not complementary')
    if isinstance(f, (NeqUr, Bot, Or, ExistsIn)):
        f, g, i, j = g, f, j, i
    if isinstance(f, Top):
        return ProofTree(seq, RuleInstance('Top', (loc('d', i),)))
    if isinstance(f, EqUr):
        if f.l == f.r:
            return ProofTree(seq, RuleInstance('Eq', (loc('d', i),)))
        rule = RuleInstance('Neq', (loc('d', j), loc('d', i)), occ=((0,),),
                            side=1)
        return build(seq, rule, lambda _, s: ProofTree(
            s, RuleInstance('Eq', (loc('d', len(s.delta) - 1),))))
    if isinstance(f, And):
        def conjunct(k, s):
            last = len(s.delta) - 1
            return identity_proof(s, i, j if k == 0 else last)

        return build(seq, RuleInstance('Or', (loc('d', j),)),
                     lambda _, s: build(s, RuleInstance('And', (loc('d', i),)),
                                        conjunct))
    y = fresh_var(f.var.name, f.var.ty, seq.names())
    return build(seq, RuleInstance('Forall', (loc('d', i),), fresh=(y,)),
                 lambda _, s: build(
                     s, RuleInstance('Exists', (loc('d', j),), witness=(y,)),
                     lambda _, s2: identity_proof(s2, i, len(s2.delta) - 1)))


class Weakening(ProofRewriter):

    def __init__(self):
        super().__init__()


def weaken(p, extra_theta=(), extra_delta=()):
    """A proof of Θ ∪ extra_theta ⊢ Δ, extra_delta from a proof of Θ ⊢ Δ."""
    if not extra_theta and not extra_delta:
        return p
    view = View.identity(p.conclusion).with_(
        extra_theta=tuple(extra_theta), extra_delta=tuple(extra_delta))
    return Weakening().run(p, view)


class AndProjection(ProofRewriter):
    """Keeps conjunct `side` of the tracked conjunction."""

    def __init__(self, side):
        super().__init__()
        assert side in (0, 1)
        self._side = side

    def visit(self, node, view):
        i = tagged_principal(node, view)
        if i is None:
            return None
        if node.tag == 'Ax':
            return self.rewrite(identity_proof(node.conclusion, *_ax(node)),
                                view)
        if node.tag == 'Neq' and i == principal_index(node, 1):
            return self.rewritten(node, view, i)
        if node.tag != 'And':
            raise ShapeMismatch(f'{node.tag} consumes a projected conjunction')
        prem = node.premises[self._side]
        a = alignments(node)[self._side]
        origin = ('new', node.rule.principal[0], 0)
        part = prem.conclusion.delta[new_index(a, origin)]
        new = {origin: (subst(part, view.sigma),)}
        return self.rewrite(prem, self.skip_view(node, view, self._side, a,
                                                 new))

    def rewritten(self, node, view, i):
        (prem,) = node.premises
        (a,) = alignments(node)
        derived = prem.conclusion.delta[
            new_index(a, ('new', node.rule.principal[1], 0))]
        derived = subst(derived, view.sigma)
        part = derived.l if self._side == 0 else derived.r
        occ = _strip(node.rule.occ, self._side)
        return neq_on_parts(self, node, view, i, (part,), (occ,), 'proj')


def and_project(p, k, i):
    """From Θ ⊢ φ₁ ∧ φ₂, Δ (the conjunction at index k) to Θ ⊢ φᵢ, Δ."""
    f = p.conclusion.delta[k]
    if not isinstance(f, And):
        raise ShapeMismatch(f'{f} is not a conjunction')
    assert i in (1, 2)
    view = View.identity(p.conclusion, tags={k: 'proj'})
    view.delta[k] = (f.l if i == 1 else f.r,)
    out = AndProjection(i - 1).run(p, view)
    return bounded_growth('and_project', p, out)


class OrInversion(ProofRewriter):

    def __init__(self):
        super().__init__()

    def visit(self, node, view):
        i = tagged_principal(node, view)
        if i is None:
            return None
        if node.tag == 'Ax':
            return self.rewrite(identity_proof(node.conclusion, *_ax(node)),
                                view)
        (prem,) = node.premises
        (a,) = alignments(node)
        if node.tag == 'Neq' and i == principal_index(node, 1):
            derived = prem.conclusion.delta[
                new_index(a, ('new', node.rule.principal[1], 0))]
            derived = subst(derived, view.sigma)
            occs = (_strip(node.rule.occ, 0), _strip(node.rule.occ, 1))
            return neq_on_parts(self, node, view, i, (derived.l, derived.r),
                                occs, 'inv')
        if node.tag != 'Or':
            raise ShapeMismatch(f'{node.tag} consumes an inverted disjunction')
        new = {}
        for part in (0, 1):
            origin = ('new', node.rule.principal[0], part)
            f = prem.conclusion.delta[new_index(a, origin)]
            new[origin] = (subst(f, view.sigma),)
        return self.rewrite(prem, self.skip_view(node, view, 0, a, new))


def or_invert(p, k):
    """From Θ ⊢ φ₁ ∨ φ₂, Δ to Θ ⊢ φ₁, φ₂, Δ; the disjuncts take the place of
    the disjunction."""
    f = p.conclusion.delta[k]
    if not isinstance(f, Or):
        raise ShapeMismatch(f'{f} is not a disjunction')
    view = View.identity(p.conclusion, tags={k: 'inv'})
    view.delta[k] = (f.l, f.r)
    out = OrInversion().run(p, view)
    return bounded_growth('or_invert', p, out)


class ForallInversion(ProofRewriter):

    def __init__(self, y):
        super().__init__(avoid=(y.name,))
        self._y = y

    def visit(self, node, view):
        i = tagged_principal(node, view)
        if i is None:
            return None
        if node.tag == 'Ax':
            return self.rewrite(identity_proof(node.conclusion, *_ax(node)),
                                view)
        (prem,) = node.premises
        (a,) = alignments(node)
        if node.tag == 'Neq' and i == principal_index(node, 1):
            if _strip(node.rule.occ, 0):
                raise ShapeMismatch('a rewrite touches an inverted bound')
            derived = prem.conclusion.delta[
                new_index(a, ('new', node.rule.principal[1], 0))]
            derived = subst(derived, view.sigma)
            body = subst(derived.body, {derived.var: self._y})
            return neq_on_parts(self, node, view, i, (body,),
                                (_strip(node.rule.occ, 1),), 'inv')
        if node.tag != 'Forall':
            raise ShapeMismatch(f'{node.tag} consumes an inverted universal')
        (v,) = node.rule.fresh
        sigma = {**view.sigma, v: self._y}
        location = node.rule.principal[0]
        body = prem.conclusion.delta[new_index(a, ('new', location, 0))]
        atom = prem.conclusion.theta[a.theta.index(('new', location, 'atom'))]
        new = {('new', location, 0): (subst(body, sigma),),
               ('new', location, 'atom'): subst(atom, sigma)}
        return self.rewrite(prem, self.skip_view(node, view, 0, a, new, sigma))


def forall_invert(p, k, y=None):
    """From Θ ⊢ ∀x∈b. φ, Δ to Θ, y∈b ⊢ φ[y/x], Δ."""
    f = p.conclusion.delta[k]
    if not isinstance(f, ForallIn):
        raise ShapeMismatch(f'{f} is not universal')
    if y is None:
        y = fresh_var(f.var.name, f.var.ty, p.names())
    assert y.ty == f.var.ty
    view = View.identity(p.conclusion, tags={k: 'inv'}).with_(
        extra_theta=(MembershipAtom(y, f.bound),))
    view.delta[k] = (subst(f.body, {f.var: y}),)
    out = ForallInversion(y).run(p, view)
    return bounded_growth('forall_invert', p, out)


class Contraction(ProofRewriter):
    """Merges the tracked copy tagged 'drop' into the one tagged 'keep'."""

    def __init__(self):
        super().__init__()

    def visit(self, node, view):
        if node.tag not in ('And', 'Or', 'Forall'):
            return None
        i = tagged_principal(node, view)
        if i is None:
            return None
        if view.tags[i] == 'drop':
            view = self._swap(node, view, i)
        j = next(k for k, t in view.tags.items() if t == 'drop')
        out_seq = view.sequent()
        rule, _ = self.relocate(node, view, node.rule)
        expected = apply_rule(out_seq, rule)
        premises = []
        for q, (prem, a) in enumerate(zip(node.premises, alignments(node))):
            d = a.delta.index(('d', j))
            premises.append(self._merge(node, prem, a, q, d))
        for e, prem in zip(expected, premises):
            if not e.sequent(False).same_as(prem.conclusion):
                raise ShapeMismatch('contracted premise does not line up')
        return ProofTree(out_seq, rule, premises)

    def _swap(self, node, view, i):
        j = next(k for k, t in view.tags.items() if t == 'keep')
        delta = list(view.delta)
        delta[i], delta[j] = (node.conclusion.delta[i],), ()
        return view.with_(delta=delta, tags={i: 'keep', j: 'drop'})

    def _merge(self, node, prem, a, q, d):
        location = node.rule.principal[0]
        n = new_index(a, ('new', location, 0))
        if node.tag == 'And':
            return contract(and_project(prem, d, q + 1), n, d)
        if node.tag == 'Forall':
            (y,) = node.rule.fresh
            return contract(forall_invert(prem, d, y), n, d)
        # Or: the dropped copy's disjuncts sit at d and d + 1.
        n1 = new_index(a, ('new', location, 1))
        merged = contract(or_invert(prem, d), n if n < d else n + 1, d)
        return contract(merged, n1, d)


def contract(p, keep, drop):
    """Removes the copy at drop of a formula that also occurs at keep."""
    seq = p.conclusion
    if keep == drop or alpha_key(seq.delta[keep]) != alpha_key(seq.delta[drop]):
        raise ShapeMismatch(f'{keep} and {drop} are not two copies')
    view = View.identity(seq, tags={keep: 'keep', drop: 'drop'})
    view.delta[drop] = ()
    return Contraction().run(p, view)


def contract_pairs(p, pairs):
    """Contracts several (keep, drop) index pairs of one conclusion."""
    pairs = list(pairs)
    while pairs:
        keep, drop = pairs.pop(0)
        p = contract(p, keep, drop)
        pairs = [tuple(k - (k > drop) for k in pair) for pair in pairs]
    return p


class Substitution(ProofRewriter):

    def __init__(self):
        super().__init__()


def substitute_proof(p, t, x):
    """A proof of Θ[t/x] ⊢ Δ[t/x] from a proof of Θ ⊢ Δ."""
    return substitute_many(p, {x: t})


def substitute_many(p, sigma):
    sigma = {v: t for v, t in sigma.items() if v != t}
    if not sigma:
        return p
    for v, t in sigma.items():
        if v.ty != t.ty:
            raise ShapeMismatch(f'{t} : {t.ty} substituted for {v} : {v.ty}')
    out = Substitution().run(p, View.substituted(p.conclusion, sigma))
    return bounded_growth('substitute_proof', p, out)


class Freshening(ProofRewriter):

    def __init__(self, avoid):
        super().__init__(avoid)


def freshen(p, avoid):
    """Renames the eigenvariables of p away from the names in avoid."""
    avoid = frozenset(avoid)
    used = {v.name for node in p.nodes() for v in node.rule.fresh}
    if not used & avoid:
        return p
    return Freshening(avoid).run(p, View.identity(p.conclusion))


class _DerivedCopy(ProofRewriter):
    """Eliminates a tracked formula derived from a formula that stays: its
    existential uses are redirected to the source, any other use brings the
    formula back by the deriving step."""

    def visit(self, node, view):
        i = tagged_principal(node, view, kinds=('derived',))
        if i is None:
            return None
        if node.tag == 'Exists':
            return self.redirect(node, view, i)
        return self.materialize(node, view, i)

    def carry(self, tag, node, q, rule):
        if _kind(tag) != 'derived' or rule is None:
            return tag
        if rule.rule == 'ProdEta':
            (x,) = rule.witness
            pair = Pair(*rule.fresh)
            return ('derived',) + tuple(subst_term(t, {x: pair})
                                        for t in tag[1:])
        if rule.rule == 'ProdBeta':
            redex, contractum = beta_redex(rule)
            return ('derived',) + tuple(replace_in_term(t, redex, contractum)
                                        for t in tag[1:])
        return tag

    def located(self, view, kind):
        j = next(k for k, t in view.tags.items() if t == kind)
        target = view.out_loc(j)
        if target is None:
            raise ShapeMismatch(f'the {kind} of a derived formula is gone')
        return target

    def restored(self, node, view, i):
        delta = list(view.delta)
        delta[i] = (subst(node.conclusion.delta[i], view.sigma),)
        tags = {k: t for k, t in view.tags.items() if k != i}
        return view.with_(delta=delta, tags=tags)


class ExistsFold(_DerivedCopy):
    """Folds an instance of an existential back into the existential."""

    def __init__(self):
        super().__init__()

    def redirect(self, node, view, i):
        prefix = view.tags[i][1:]
        phi_loc = self.located(view, 'source')
        rule, view = self.refresh(node, view, self.map_rule(node, view))
        out_seq = view.sequent()
        rule = rule.with_(principal=(phi_loc,),
                          witness=tuple(prefix) + tuple(rule.witness))
        (e,) = apply_rule(out_seq, rule)
        instance = e.delta[-1][0]
        new = {('new', node.rule.principal[0], 0): (instance,)}
        return self.emit(node, view, out_seq, rule,
                         {node.rule.principal[0]: phi_loc}, new)

    def materialize(self, node, view, i):
        prefix = view.tags[i][1:]
        phi_loc = self.located(view, 'source')
        out_seq = view.sequent()
        rule = RuleInstance('Exists', (phi_loc,), witness=tuple(prefix))
        apply_rule(out_seq, rule)
        inner = self.rewrite(node, self.restored(node, view, i))
        return ProofTree(out_seq, rule, (inner,))


def fold(p, inst, phi, prefix):
    """A proof of Θ ⊢ Δ, φ from a proof of Θ ⊢ Δ, φ, ψ where ψ instantiates
    the leading existentials of φ with prefix; the instantiation moves to
    every use of ψ."""
    seq = p.conclusion
    instance, _ = instantiate(seq.delta[phi], tuple(prefix))
    if alpha_key(instance) != alpha_key(seq.delta[inst]):
        raise ShapeMismatch(f'{seq.delta[inst]} does not instantiate '
                            f'{seq.delta[phi]}')
    view = View.identity(seq, tags={phi: 'source',
                                    inst: ('derived',) + tuple(prefix)})
    view.delta[inst] = ()
    out = ExistsFold().run(p, view)
    return bounded_growth('exists_block', p, out, factor=2)


def exists_block(p, phi, witnesses):
    """Closes Θ ⊢ Δ, φ by one existential step instantiating φ with the
    witnesses, from a proof p of Θ ⊢ Δ, φ, φ[w̄]."""
    seq = p.conclusion
    instance, _ = instantiate(seq.delta[phi], tuple(witnesses))
    inst = next((k for k, f in enumerate(seq.delta) if k != phi
                 and alpha_key(f) == alpha_key(instance)), None)
    if inst is None:
        raise ShapeMismatch(f'{instance} does not occur in {seq}')
    return fold(p, inst, phi, witnesses)


class NeqRedirect(_DerivedCopy):
    """Eliminates α′, the rewrite of the existential α along a disequality,
    by rewriting the instances of α wherever α′ is instantiated."""

    def __init__(self, side, occ):
        super().__init__()
        self._side = side
        self._occ = tuple(occ)

    def redirect(self, node, view, i):
        alpha_loc = self.located(view, 'source')
        atom_loc = self.located(view, 'atom')
        rule, view = self.refresh(node, view, self.map_rule(node, view))
        out_seq = view.sequent()
        atom = out_seq.delta[parse_loc(atom_loc)[1]]
        rule = rule.with_(principal=(alpha_loc,))
        (e,) = apply_rule(out_seq, rule)
        psi = e.delta[-1][0]
        derived = subst(node.conclusion.delta[i], view.sigma)
        psi2, _ = instantiate(derived, rule.witness)
        src, dst = rewrite_sides(atom, self._side)
        occ = rewritten_positions(psi, psi2, src, dst)
        if occ is None:
            raise ShapeMismatch(f'{psi2} is not a rewrite of {psi}')
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[0], 0)
        pv = self.skip_view(node, view, 0, a, {origin: (psi2,)})
        if not occ:
            return ProofTree(out_seq, rule, (self.rewrite(prem, pv),))
        pv = pv.with_(extra_delta=pv.extra_delta + (psi,))
        mid_seq = Sequent1(out_seq.theta, out_seq.delta + (psi,))
        neq = RuleInstance('Neq', (atom_loc, loc('d', len(out_seq.delta))),
                           occ=tuple(occ), side=self._side)
        middle = ProofTree(mid_seq, neq, (self.rewrite(prem, pv),))
        return ProofTree(out_seq, rule, (middle,))

    def materialize(self, node, view, i):
        alpha_loc = self.located(view, 'source')
        atom_loc = self.located(view, 'atom')
        out_seq = view.sequent()
        rule = RuleInstance('Neq', (atom_loc, alpha_loc), occ=self._occ,
                            side=self._side)
        apply_rule(out_seq, rule)
        inner = self.rewrite(node, self.restored(node, view, i))
        return ProofTree(out_seq, rule, (inner,))


def redirect_rewrite(p, atom, alpha, derived, side, occ):
    """Removes from the conclusion of p the formula at `derived`, the rewrite
    of the existential at `alpha` along the disequality at `atom`."""
    view = View.identity(p.conclusion, tags={alpha: 'source', atom: 'atom',
                                             derived: ('derived',)})
    view.delta[derived] = ()
    return NeqRedirect(side, occ).run(p, view)


def flip(f):
    assert isinstance(f, NeqUr)
    return NeqUr(f.r, f.l)


def _swap_first(occ):
    return tuple((1 - pos[0],) + tuple(pos[1:]) for pos in occ)


class NeqAliasing(ProofRewriter):
    """Tracks disequalities shown as their flip ('flip'), dropped in favour
    of a copy ('dup') or of a flipped copy ('dupflip') still in the output,
    or dropped as trivial t ≠ t ('refl')."""

    def __init__(self):
        super().__init__()

    def status(self, view, i):
        return view.tags.get(i, 'keep')

    def image_loc(self, node, view, i):
        status = self.status(view, i)
        f = subst(node.conclusion.delta[i], view.sigma)
        if status in ('keep', 'flip'):
            target = view.out_loc(i)
            if target is not None:
                return target
        if status == 'refl':
            raise ShapeMismatch(f'{f} has no image')
        flipped = status in ('flip', 'dupflip')
        return locate(view.sequent(), flip(f) if flipped else f)

    def visit(self, node, view):
        if node.tag == 'Refl':
            (prem,) = node.premises
            (a,) = alignments(node)
            return self.rewrite(prem, self.skip_view(
                node, view, 0, a, {('refl',): ()},
                new_tags={('refl',): 'refl'}))
        if node.tag == 'Ax':
            return self.axiom(node, view)
        if node.tag != 'Neq':
            return None
        i, j = principal_index(node, 0), principal_index(node, 1)
        si, sj = self.status(view, i), self.status(view, j)
        if si == 'keep' and sj == 'keep':
            return None
        (prem,) = node.premises
        (a,) = alignments(node)
        origin = ('new', node.rule.principal[1], 0)
        derived = prem.conclusion.delta[new_index(a, origin)]
        if si == 'refl':
            return self.rewrite(prem, self.skip_view(
                node, view, 0, a, {origin: ()},
                new_tags={origin: sj if sj != 'keep' else 'dup'}))
        if sj == 'refl':
            return self.rewrite(prem, self.skip_view(
                node, view, 0, a, {origin: ()},
                new_tags={origin: self.classify(node, view, i, derived)}))
        rule = node.rule
        if si in ('flip', 'dupflip'):
            rule = rule.with_(side=3 - rule.side)
        if sj in ('flip', 'dupflip'):
            rule = rule.with_(occ=_swap_first(rule.occ))
        rule = rule.with_(principal=(self.image_loc(node, view, i),
                                     self.image_loc(node, view, j)))
        locs = dict(zip(node.rule.principal, rule.principal))
        new_tags = {origin: 'flip'} if sj in ('flip', 'dupflip') else None
        return self.emit(node, view, view.sequent(), rule, locs,
                         new_tags=new_tags)

    def classify(self, node, view, i, derived):
        """Status of the rewrite of a trivial disequality along atom i."""
        if derived.l == derived.r:
            return 'refl'
        atom = node.conclusion.delta[i]
        flipped = self.status(view, i) in ('flip', 'dupflip')
        if alpha_key(derived) == alpha_key(atom):
            return 'dupflip' if flipped else 'dup'
        if alpha_key(derived) == alpha_key(flip(atom)):
            return 'dup' if flipped else 'dupflip'
        raise ShapeMismatch(f'{derived} is neither {atom} nor its flip')

    def axiom(self, node, view):
        i, j = principal_index(node, 0), principal_index(node, 1)
        if not isinstance(node.conclusion.delta[i], NeqUr):
            i, j = j, i
        if not isinstance(node.conclusion.delta[i], NeqUr):
            return None
        s = self.status(view, i)
        out_seq = view.sequent()
        if s == 'refl':
            # The complement of t != t is t = t.
            return ProofTree(out_seq, RuleInstance(
                'Eq', (self.image_loc(node, view, j),)))
        atom_loc = self.image_loc(node, view, i)
        eq_loc = self.image_loc(node, view, j)
        if s in ('keep', 'dup'):
            return ProofTree(out_seq, node.rule.with_(
                principal=(atom_loc, eq_loc)))
        # t = u against u ≠ t: rewriting u to t leaves t = t.
        rule = RuleInstance('Neq', (atom_loc, eq_loc), occ=((1,),), side=1)
        (e,) = apply_rule(out_seq, rule)
        above = e.sequent(False)
        closing = RuleInstance('Eq', (loc('d', len(above.delta) - 1),))
        return ProofTree(out_seq, rule, (ProofTree(above, closing),))


def flip_neq(p, k):
    """From Θ ⊢ t ≠ u, Δ to Θ ⊢ u ≠ t, Δ."""
    f = p.conclusion.delta[k]
    if not isinstance(f, NeqUr):
        raise ShapeMismatch(f'{f} is not a disequality')
    view = View.identity(p.conclusion, tags={k: 'flip'})
    view.delta[k] = (flip(f),)
    out = NeqAliasing().run(p, view)
    return bounded_growth('flip_neq', p, out)


def eliminate_reflexivity(p):
    """Removes the reflexivity steps of a one-sided tree."""
    if not any(node.tag == 'Refl' for node in p.nodes()):
        return p
    return NeqAliasing().run(p, View.identity(p.conclusion))
