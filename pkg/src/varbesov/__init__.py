"""Grid-based evaluation of variable-exponent Besov and Triebel-Lizorkin type
norms with 2-microlocal weights and Morrey-type set functions.

The modules build on one another:

``grid``        boxes, grid functions, FFT convolution, finite differences
``exponents``   variable exponents and log-Hoelder estimates
``lebesgue``    modulars and Luxemburg norms
``mixed``       dyadic cubes, set functions, mixed and phi-modified norms
``weights``     admissible weight sequences
``kernels``     admissible pairs, local means, Peetre maximal functions
``spaces``      space norms, thresholds and the experiments
``atoms``       Hoelder norms, atoms, sequence spaces, synthesis
``cli``         expression language, scenarios and the command line
"""
from .grid import Box, GridError, GridFunction, convolve, integrate, make_grid_function
from .exponents import ExponentError, VariableExponent, check_log_holder_global, check_log_holder_local
from .lebesgue import luxemburg_norm, modular
from .mixed import (DyadicCube, FunctionSequence, SetFunction, check_set_function_class,
                    enumerate_dyadic_cubes, norm_Lp_lq, norm_lq_Lp, phi_norm_B, phi_norm_F)
from .weights import (WeightSequence, check_admissible_weights, make_weight_sequence,
                      make_weight_sequence_from_smoothness)
from .kernels import (KernelPair, LocalMeansPair, check_moments, check_tauberian,
                      make_admissible_pair, make_local_means, make_shifted_pair, peetre_maximal)
from .spaces import (B_PRESET, F_PRESET, Preset, SpaceParams, ThresholdError, space_norm,
                     space_norm_variants, thresholds)
from .atoms import (Atom, CoefficientSequence, holder_norm, make_smooth_atom, sequence_norm,
                    synthesize, validate_nonsmooth_atom)

__version__ = "0.1.0"

__all__ = [
    "Box", "GridError", "GridFunction", "convolve", "integrate", "make_grid_function",
    "ExponentError", "VariableExponent", "check_log_holder_global", "check_log_holder_local",
    "luxemburg_norm", "modular",
    "DyadicCube", "FunctionSequence", "SetFunction", "check_set_function_class",
    "enumerate_dyadic_cubes", "norm_Lp_lq", "norm_lq_Lp", "phi_norm_B", "phi_norm_F",
    "WeightSequence", "check_admissible_weights", "make_weight_sequence",
    "make_weight_sequence_from_smoothness",
    "KernelPair", "LocalMeansPair", "check_moments", "check_tauberian", "make_admissible_pair",
    "make_local_means", "make_shifted_pair", "peetre_maximal",
    "B_PRESET", "F_PRESET", "Preset", "SpaceParams", "ThresholdError", "space_norm",
    "space_norm_variants", "thresholds",
    "Atom", "CoefficientSequence", "holder_norm", "make_smooth_atom", "sequence_norm",
    "synthesize", "validate_nonsmooth_atom",
]
