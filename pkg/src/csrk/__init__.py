"""Runge-Kutta methods from weighted orthogonal polynomials.

Build orthonormal polynomial systems for Jacobi-type weights on [0, 1],
assemble continuous-stage tableaux from them, collapse those to standard
Butcher tableaux with Gauss-Christoffel (or fixed-node interpolatory)
quadrature, verify order/symplecticity/symmetry/stability, and run the
resulting methods on Hamiltonian test problems.
"""
from .orthopoly import (MAX_DEGREE, OrthoBasis, Weight, build_basis, chebyshev_first,
                        chebyshev_second, gegenbauer, jacobi_type1, jacobi_type2,
                        jacobi_type3, legendre)
from .quadrature import (QuadratureRule, chebyshev_gauss_lobatto_nodes, gauss_christoffel,
                         interpolatory_rule, interpolatory_weights)
from .cstab import (ContinuousTableau, b_series, chebyshev_symmetric_family,
                    chebyshev_symplectic_order2, hairer_collocation, legendre_family,
                    symmetric_skew, symplectic_expansion_check, symplectic_skew,
                    truncated_family)
from .reduce import RKTableau, parse_rk, serialize, to_rk
from .analyze import (AnalysisReport, a_stability, analyze_tableau, cs_simplifying_levels,
                      cs_symmetric_residual, cs_symplectic_residual, order_bound,
                      order_bound_reduced, simplifying_levels, stability_function,
                      symmetric_residual, symplectic_residual)
from .integrate import (InstrumentationLimit, NonConvergence, Problem, SolverConfig,
                        Trajectory, empirical_order, harmonic_oscillator, integrate,
                        invariant_drift, kepler2d, pendulum, rk_step,
                        self_adjointness_defect, trajectory_csv)
from .tables import reference_cases, reproduce

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
