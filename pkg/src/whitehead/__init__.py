"""Whitehead's quadratic functor Gamma and its kernel over the integers.

Exact integer linear algebra, finitely generated abelian groups, the
functors tensor, exterior powers, Tor and Gamma, homology of the
two-element group, and checks of the exact sequences relating them.
"""

__version__ = "0.1.0"

from .abgroup import FgAbGroup, GroupElement, GroupHom
from .functors import gamma_presentation, gamma_structural, tensor, tor
from .theorems import batch_verify, kunneth_homology, theorem_h4_suite

__all__ = [
    "FgAbGroup", "GroupElement", "GroupHom", "__version__", "batch_verify",
    "gamma_presentation", "gamma_structural", "kunneth_homology", "tensor",
    "theorem_h4_suite", "tor",
]
