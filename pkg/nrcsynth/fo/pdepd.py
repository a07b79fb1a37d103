"""Definitions of λ(z, l̄) up to parameters and disjunction.

A Pdepd is built from biconditionals ∀z (λ ↔ χ) that share their left
side, by disjunction and by existential quantification of right-side
variables. Only the right sides ever change.
"""
from dataclasses import dataclass, field

from nrcsynth.fo.syntax import (
    FoExists, FoForall, fo_disj, fo_free_vars, fo_fresh, fo_iff, fo_names,
    fo_preds, fo_subst)


@dataclass(frozen=True)
class Bicond:
    chi: object


@dataclass(frozen=True)
class Disj:
    parts: tuple = ()


@dataclass(frozen=True)
class Param:
    var: str
    body: object


def _rhs_vars(d, bound):
    if isinstance(d, Bicond):
        return fo_free_vars(d.chi) - bound
    if isinstance(d, Disj):
        result = frozenset()
        for part in d.parts:
            result |= _rhs_vars(part, bound)
        return result
    return _rhs_vars(d.body, bound | {d.var})


def _names(d):
    if isinstance(d, Bicond):
        return fo_names(d.chi)
    if isinstance(d, Disj):
        result = set()
        for part in d.parts:
            result |= _names(part)
        return result
    return _names(d.body) | {d.var}


def _rename_rhs(d, old, new):
    """Replaces the free right-side occurrences of old."""
    if isinstance(d, Bicond):
        return Bicond(fo_subst(d.chi, {old: new}))
    if isinstance(d, Disj):
        return Disj(tuple(_rename_rhs(p, old, new) for p in d.parts))
    if d.var == old:
        return d
    return Param(d.var, _rename_rhs(d.body, old, new))


def _flatten(d, params):
    if isinstance(d, Bicond):
        return [(params, d.chi)]
    if isinstance(d, Disj):
        result = []
        for part in d.parts:
            result.extend(_flatten(part, params))
        return result
    return _flatten(d.body, params + (d.var,))


@dataclass(frozen=True)
class Pdepd:
    lam: object
    z: str
    body: object = field(default=Disj())

    @property
    def lhs_vars(self):
        return fo_free_vars(self.lam) - {self.z}

    def rhs_vars(self):
        """Variables free in some right side and not quantified."""
        return _rhs_vars(self.body, frozenset()) - {self.z}

    def rhs_preds(self):
        return fo_preds([chi for _, chi in self.disjuncts])

    def names(self):
        return _names(self.body) | fo_names(self.lam) | {self.z}

    @property
    def disjuncts(self):
        return tuple(_flatten(self.body, ()))

    def is_bottom(self):
        return not self.disjuncts

    def __or__(self, other):
        assert self.lam == other.lam and self.z == other.z
        parts = []
        for d in (self.body, other.body):
            parts.extend(d.parts if isinstance(d, Disj) else [d])
        return Pdepd(self.lam, self.z, Disj(tuple(parts)))

    def __str__(self):
        return str(pdepd_to_formula(self))


def bottom(lam, z):
    return Pdepd(lam, z)


def biconditional(lam, z, chi):
    return Pdepd(lam, z, Bicond(chi))


def exists_rhs(d, p, avoid=frozenset()):
    """∃^RHS p d: quantifies the right-side occurrences of p."""
    if p not in d.rhs_vars():
        return d
    y = fo_fresh(p, d.names() | set(avoid) | {p})
    return Pdepd(d.lam, d.z, Param(y, _rename_rhs(d.body, p, y)))


def substitute_rhs(d, old, new):
    """d⟨old:=new⟩ on the free right-side occurrences."""
    return Pdepd(d.lam, d.z, _rename_rhs(d.body, old, new))


def pdepd_normal_form(d):
    """The disjuncts (parameters, χ) of ⋁ ∃v̄ ∀z (λ ↔ χ)."""
    return d.disjuncts


def pdepd_to_formula(d):
    parts = []
    for params, chi in d.disjuncts:
        f = FoForall(d.z, fo_iff(d.lam, chi))
        for v in reversed(params):
            f = FoExists(v, f)
        parts.append(f)
    return fo_disj(parts)
