"""Finite-difference solver for the parabolic counterpart with diffusion B V_xx."""

from nonstrict.parabolic.fd_solver import FdHistory, GridState, cfl_limits, fd_solve, upwind_step

__all__ = ['FdHistory', 'GridState', 'cfl_limits', 'fd_solve', 'upwind_step']
