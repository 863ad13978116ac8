"""Global RBF semidiscretizations of linear advection with strong, FR and
SAT boundary treatments, plus the experiment harness used to compare them."""

from .interpolation import (
    CenterSet,
    NodalBasis,
    assemble_vandermonde,
    build_nodal_basis,
    equidistant_centers,
    grid_centers,
)
from .kernels import Kernel, cubic, gaussian, kernel_from_name, multiquadric, quintic, thin_plate
from .quadrature import QuadratureRule, gauss_legendre_nodes
from .runner import RunConfig, execute_run, run_study

__version__ = "0.1.0"

__all__ = [
    "CenterSet",
    "Kernel",
    "NodalBasis",
    "QuadratureRule",
    "RunConfig",
    "assemble_vandermonde",
    "build_nodal_basis",
    "cubic",
    "equidistant_centers",
    "execute_run",
    "gauss_legendre_nodes",
    "gaussian",
    "grid_centers",
    "kernel_from_name",
    "multiquadric",
    "quintic",
    "run_study",
    "thin_plate",
]
