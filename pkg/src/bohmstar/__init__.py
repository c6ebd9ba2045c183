"""Phase-space quasi-distributions, star products and Bohmian mechanics in 1D."""

__version__ = "0.1.0"

from .bohm import (BohmDistribution, PolarFields, bohm_distribution, bohm_residuals,
                   bohmian_trajectories, evolve_bohm_distribution, polar_decompose,
                   quantum_potential, quantum_potential_from_density)
from .cohen import (ambiguity, cohen_transform, expectation, gauge_transform, marginals,
                    mehta, probability_linear, wigner_direct)
from .dynamics import Potential, moyal_evolve_quadratic, split_step_evolve
from .grids import (GaussianPacketParams, PhaseSpaceGrid, PhysicalConstants, SpatialGrid,
                    WaveFunction, from_momentum, l2_norm, make_gaussian, normalize,
                    to_momentum, wavefunction)
from .kernels import (ANTISTANDARD, BORNJORDAN, STANDARD, WIGNER, CohenKernel,
                      custom_kernel, kernel_by_name)
from .phasespace import MixedField, QuasiDistribution
from .star import (moyal_bracket, poly_star, sandwich_standard, star_delta_standard,
                   star_delta_weyl, star_delta_weyl_expansion, symbol_transform)
from .symbols import PolynomialSymbol, parse_symbol
from .theorem import (CausalFormReport, causal_form, classical_limit_distribution,
                      hbar_expansion_check, verify_kernel_constraints, verify_theorem)
