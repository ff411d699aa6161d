"""vdclab: correlation inequalities, witness polynomials, spectral tests
and recurrence experiments for difference sets in Z^d."""

__version__ = "0.1.0"

from .correlations import (
    SampledFamily,
    cesaro_average,
    correlation_gamma,
    discrepancy_star,
    family_on_counts,
    gamma_tail,
    weyl_test,
)
from .divisibility import (
    APPENDIX_P,
    APPENDIX_Q,
    IntPolynomial,
    appendix_construct,
    divisible_up_to,
    lift_pow2,
    simultaneous_divisible,
)
from .dynamics import (
    BernoulliCylinderSystem,
    CyclicSystem,
    RotationSystem,
    correlation_exact,
    random_block_orbit,
    recurrence_test,
)
from .inequalities import check_box_vdc, check_generalized_vdc, check_group_vdc
from .lattice import Box, FiniteSet, box_points, delta_density, transform_set
from .measures import (
    AtomicTorusMeasure,
    FourierMeasure,
    affinity,
    bernoulli_spectral_measure,
    convolve,
    fourier_coefficient,
    spectral_test,
)
from .posdef import (
    CoefficientFamily,
    fejer_family,
    is_positive_definite,
    kmf_witness_from_sequence,
    product_family,
    verify_kmf_witness,
    witness_search,
)
from .sequences import (
    BlockSequenceParams,
    SequenceSpec,
    block_sequence,
    generate,
    primes_in_class,
    spec_from_json,
)
