"""Sequents, rule instances and proof trees shared by both calculi."""
from collections import Counter
from dataclasses import dataclass, field, replace

from nrcsynth.syntax import alpha_key, dual, free_vars, all_names


@dataclass(frozen=True)
class Sequent1:
    """Θ ⊢ Δ with Θ a set of membership atoms."""
    theta: tuple = ()
    delta: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'theta', _dedup(self.theta))
        object.__setattr__(self, 'delta', tuple(self.delta))

    @property
    def formulas(self):
        return self.delta

    def free_vars(self):
        return free_vars(list(self.theta) + list(self.delta))

    def names(self):
        return all_names(list(self.theta) + list(self.delta))

    def same_as(self, other):
        return (isinstance(other, Sequent1)
                and _set_key(self.theta) == _set_key(other.theta)
                and _bag_key(self.delta) == _bag_key(other.delta))

    def __str__(self):
        theta = ', '.join(str(a) for a in self.theta)
        delta = ', '.join(str(f) for f in self.delta)
        return f'{theta} |- {delta}'.strip()


@dataclass(frozen=True)
class Sequent2:
    """Θ; Γ ⊢ Δ."""
    theta: tuple = ()
    gamma: tuple = ()
    delta: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'theta', _dedup(self.theta))
        object.__setattr__(self, 'gamma', tuple(self.gamma))
        object.__setattr__(self, 'delta', tuple(self.delta))

    @property
    def formulas(self):
        return self.gamma + self.delta

    def free_vars(self):
        return free_vars(list(self.theta) + list(self.gamma)
                         + list(self.delta))

    def names(self):
        return all_names(list(self.theta) + list(self.gamma)
                         + list(self.delta))

    def same_as(self, other):
        return (isinstance(other, Sequent2)
                and _set_key(self.theta) == _set_key(other.theta)
                and _bag_key(self.gamma) == _bag_key(other.gamma)
                and _bag_key(self.delta) == _bag_key(other.delta))

    def __str__(self):
        theta = ', '.join(str(a) for a in self.theta)
        gamma = ', '.join(str(f) for f in self.gamma)
        delta = ', '.join(str(f) for f in self.delta)
        return f'{theta} ; {gamma} |- {delta}'.strip()


def _dedup(atoms):
    seen = set()
    result = []
    for a in atoms:
        key = alpha_key(a)
        if key not in seen:
            seen.add(key)
            result.append(a)
    return tuple(result)


def _set_key(atoms):
    return frozenset(alpha_key(a) for a in atoms)


def _bag_key(formulas):
    return Counter(alpha_key(f) for f in formulas)


def lower(s):
    """Θ; Γ ⊢ Δ as the one-sided Θ ⊢ ¬Γ, Δ."""
    if isinstance(s, Sequent1):
        return s
    return Sequent1(s.theta, tuple(dual(f) for f in s.gamma) + s.delta)


# Locations: t<i> for theta atoms, g<i> for gamma, d<i> for delta.

def loc(kind, index):
    assert kind in 'tgd'
    return f'{kind}{index}'


def parse_loc(text):
    return text[0], int(text[1:])


def at(sequent, location):
    kind, index = parse_loc(location)
    if kind == 't':
        return sequent.theta[index]
    if kind == 'g':
        return sequent.gamma[index]
    return sequent.delta[index]


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    principal: tuple = ()
    witness: tuple = ()
    fresh: tuple = ()
    occ: tuple = ()
    side: int = 0

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class ProofTree:
    conclusion: object
    rule: RuleInstance
    premises: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'premises', tuple(self.premises))

    @property
    def tag(self):
        return self.rule.rule

    def with_(self, **changes):
        return replace(self, **changes)

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def names(self):
        result = set()
        for node in self.nodes():
            result |= node.conclusion.names()
            result |= {v.name for v in node.rule.fresh}
            result |= all_names(list(node.rule.witness))
        return result


def proof_size(p):
    return sum(1 for _ in p.nodes())


def node_at(p, path):
    for i in path:
        p = p.premises[i]
    return p
