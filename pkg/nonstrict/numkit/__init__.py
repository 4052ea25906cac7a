"""Numerical kernels shared by the analysis modules."""

from nonstrict.numkit.linalg import expm
from nonstrict.numkit.ode import OdeTrajectory, Termination, integrate_ode
from nonstrict.numkit.quadrature import quad_sqrt_singular
from nonstrict.numkit.roots import Root, find_first_root, first_root_in_samples, locate_first_root

__all__ = [
    'expm',
    'OdeTrajectory',
    'Termination',
    'integrate_ode',
    'quad_sqrt_singular',
    'Root',
    'find_first_root',
    'first_root_in_samples',
    'locate_first_root',
]
