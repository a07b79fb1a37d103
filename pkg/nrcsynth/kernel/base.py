from abc import ABC, abstractmethod
import logging
from dataclasses import dataclass

from nrcsynth.errors import (
    MalformedProof, ProofRejected, FreshnessViolation, NonMaximalSpecialization)
from nrcsynth.kernel.rules import RuleViolation, expand, align

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    path: tuple = ()
    rule: str = ''
    condition: str = ''
    message: str = ''
    nodes: int = 0

    def __bool__(self):
        return self.accepted

    def as_dict(self):
        return {'accepted': self.accepted, 'path': list(self.path),
                'rule': self.rule, 'condition': self.condition,
                'message': self.message, 'nodes': self.nodes}

    def require(self):
        """Raises the matching ProofRejected subclass unless accepted."""
        if self.accepted:
            return self
        cls = {'FreshnessViolation': FreshnessViolation,
               'NonMaximalSpecialization': NonMaximalSpecialization}.get(
                   self.condition, ProofRejected)
        raise cls(self)


class Checker(ABC):

    @abstractmethod
    def __init__(self, strict, allowed, sequent_type):
        self._strict = strict
        self._allowed = allowed
        self._sequent_type = sequent_type

    @property
    def strict(self):
        return self._strict

    def check(self, p):
        """Checks every node top-down; reports the first failure."""
        count = 0
        stack = [((), p)]
        while stack:
            path, node = stack.pop()
            count += 1
            if not isinstance(node.conclusion, self._sequent_type):
                raise MalformedProof(
                    f'node {path} is not a {self._sequent_type.__name__}')
            try:
                self.check_node(node)
            except RuleViolation as e:
                logger.debug('rejected %s at %s: %s', node.tag, path, e)
                return CheckReport(False, path, node.tag, e.condition,
                                   e.message, count)
            for i in reversed(range(len(node.premises))):
                stack.append((path + (i,), node.premises[i]))
        return CheckReport(True, nodes=count)

    def check_node(self, node):
        expected = expand(node.conclusion, node.rule, self._strict,
                          self._allowed)
        if len(expected) != len(node.premises):
            raise RuleViolation(
                'ArityMismatch',
                f'{node.tag} has {len(node.premises)} premises, expected '
                f'{len(expected)}')
        two_sided = self._sequent_type.__name__ == 'Sequent2'
        for i, (e, q) in enumerate(zip(expected, node.premises)):
            if align(e, q.conclusion) is None:
                raise RuleViolation(
                    'PremiseMismatch',
                    f'premise {i} is {q.conclusion}, expected '
                    f'{e.sequent(two_sided)}')
