"""
Numerics for additive free Levy processes: truncated free Fock space
operators, moment-cumulant transforms over set, non-crossing and interval
partitions, mixed moments under tensor and free independence, generator
tuples and their Ito-Levy split, and increments on the dual affine group.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DepthError,
    FreeLevyError,
    IntervalError,
    MissingLawError,
    MixedSpaceError,
    PreconditionError,
    RecursionCapError,
    ShapeError,
    SizeLimitError,
)
from .moments import (  # noqa: E402
    CumulantSequence,
    Flavor,
    MomentSequence,
    bercovici_pata,
    convolve,
    cumulants_to_moments,
    is_homomorphism_check,
    moments_to_cumulants,
)
from .partitions import (  # noqa: E402
    Partition,
    enumerate_interval_partitions,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
    is_noncrossing,
)
from .fock import (  # noqa: E402
    FockSpace,
    annihilation,
    conservation,
    creation,
    free_embedding,
    vacuum_expectation,
)
from .mixedmoments import MarginalLaw, free_mixed_moment, tensor_mixed_moment  # noqa: E402
from .levy import (  # noqa: E402
    GeneratorTuple,
    IncrementSpec,
    Kind,
    classify,
    ito_levy_split,
    minimal_tuple,
    realize_process,
    tuple_cumulants,
)
from .dualaffine import (  # noqa: E402
    AffineIncrementFree,
    AffineIncrementTensor,
    azema_free,
    compose_free,
    compose_tensor_moments,
)
