"""theta_forge: verified numerics for Jacobi theta and Weierstrass functions."""

from .errors import ThetaForgeError
from .theta import UHTau, ThetaChar, SeriesBudget, Bounded, theta_q, theta_derivs, theta_bounded, reduce_x
from .constants import (theta_constants, eta_w, eta_dedekind, g2_g3_lambert, branch_points, klein_j,
                        solve_j, modular_inversion, invariants_of_periods, fundamental_domain_reduce)
from .weierstrass import sigma_from_theta, zeta_wp, weierstrass_periods
from .modular import Multiplier8, transform_theta1, transform_eta, transform_theta_ab, multiply_argument
from .noncanonical import NoncanonicalParams, GeneralSolution, general_solution_eval, integrals_A, mu_from_J
from .painleve import (PicardHitchinParams, complete_elliptic, hitchin_solution, picard_solution,
                       p6_residual, pole_lattice, tau_functions)

__version__ = "0.1.0"
