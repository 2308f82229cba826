"""Persistence-aware edge contraction for filtered simplicial complexes."""
from .core import FilteredComplex, build_complex, closed_skeleton, link, lower_star_extend
from .contraction import Chain, classify, contract, link_condition, make_chain, xi_chain
from .errors import ContractaError, InputError, InvariantViolation
from .generators import generate_terrain
from .io import RunReport, load_diagram, load_mesh, save_diagram, save_mesh
from .pairing2m import compute_pairing, is_admissible
from .persistence import (
    PersistenceDiagram,
    PersistencePairing,
    bottleneck,
    diagram,
    homologous,
    reduce,
)
from .stability import (
    compatible_set,
    is_p_eps_admissible,
    psi_chain,
    simplify,
    window,
)

__version__ = "0.1.0"

__all__ = [
    "FilteredComplex", "build_complex", "closed_skeleton", "link", "lower_star_extend",
    "Chain", "classify", "contract", "link_condition", "make_chain", "xi_chain",
    "ContractaError", "InputError", "InvariantViolation",
    "generate_terrain",
    "RunReport", "load_diagram", "load_mesh", "save_diagram", "save_mesh",
    "compute_pairing", "is_admissible",
    "PersistenceDiagram", "PersistencePairing", "bottleneck", "diagram", "homologous", "reduce",
    "compatible_set", "is_p_eps_admissible", "psi_chain", "simplify", "window",
]
