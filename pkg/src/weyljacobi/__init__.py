"""Direct and inverse spectral theory of non-self-adjoint Jacobi matrices.

A Jacobi matrix with ``a_n > 0`` and complex ``b_n`` is encoded by the pair
``(nu, psi)``: the spectral measure of ``|J|`` at ``delta_0`` and a phase
function with ``|psi| <= 1``.
"""
__version__ = "0.1.0"

from .analysis import (Classification, ContinuityReport, DecayFit, borg_marchenko_fit, classify,
                       continuity_check, default_test_bank, scaled_difference)
from .direct import (SpectralData, coefficient_scale, cyclicity_check, direct_map, intertwining_check,
                     moment_check, weyl_M)
from .errors import (DimensionTooLarge, IndexOutOfRange, InputError, InvalidMeasure, NoConvergence,
                     NotHermitian, NotScalarPolar, NumericError, OnCut, ParseError, PoleProximity,
                     SchemaError, SingularBlock, SingularWeylValue, TruncationTooSmall, WeylJacobiError)
from .inverse import (ExpansionFit, GaugeTrace, block_lanczos, dense_weyl_R, expansion_check,
                      expansion_remainder, gauge_fix, inverse_map, leading_from_moments, roundtrip_error,
                      strip_weyl, weyl_R)
from .jacobi import (BlockCoefficients, JacobiCoefficients, Properness, block_dense, block_embed,
                     dense_truncation, hermitian_embedding, interleave, properness_sufficient,
                     random_coefficients, wronskian)
from .matops import (HermitianEig, cluster_indices, hermitian_eig, polar_scalar_unitary,
                     quarter_power_scaling, spectral_norm_2x2)
from .measure import (DiscreteMatrixMeasure, determinacy_sufficient, gram_matrix, moments,
                      nondegeneracy_rank, stieltjes, symmetry_check, to_matrix_measure)
