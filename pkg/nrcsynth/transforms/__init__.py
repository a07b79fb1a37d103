from .structural import (
    weaken, and_project, or_invert, forall_invert, contract, substitute_proof,
    freshen, exists_block, flip_neq, identity_proof)
from .congruence import gen_congruence, mem_context
from .normalize import beta_normalize
from .focusing import Focuser, focus, refocus
from .goals import move_down, equiv_to_biconditional, project_goal
