"""Functor calculus on finitely generated abelian groups."""

from .bilinear import (
    BifunctorValue,
    Involutions,
    TensorValue,
    TorValue,
    exterior_cube,
    exterior_square,
    norm_chain,
    norm_chain_map,
    norm_chain_outer,
    resolution_complex,
    sigma_involutions,
    swap_tensor,
    tau_cycle,
    tau_colimit_map,
    tau_map,
    tau_n,
    tensor,
    tensor_hom,
    tor,
)
from .gamma import (
    GammaComparison,
    GammaValue,
    compare_gamma,
    gamma_image_generates,
    gamma_presentation,
    gamma_relations,
    gamma_structural,
    quadratic_check,
    universal_factorization,
)

__all__ = [
    "BifunctorValue",
    "Involutions",
    "TensorValue",
    "TorValue",
    "exterior_cube",
    "exterior_square",
    "norm_chain",
    "norm_chain_map",
    "norm_chain_outer",
    "resolution_complex",
    "sigma_involutions",
    "swap_tensor",
    "tau_cycle",
    "tau_colimit_map",
    "tau_map",
    "tau_n",
    "tensor",
    "tensor_hom",
    "tor",
    "GammaComparison",
    "GammaValue",
    "compare_gamma",
    "gamma_image_generates",
    "gamma_presentation",
    "gamma_relations",
    "gamma_structural",
    "quadratic_check",
    "universal_factorization",
]
