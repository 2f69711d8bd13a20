"""Exact quantum discord of two-qubit X states from the steering ellipse."""
from ._kernels import BACKEND
from .core import (
    Povm,
    ReducedBloch,
    SteeredOutcome,
    XState,
    binary_entropy,
    conditional_entropy,
    joint_entropy,
    mutual_information,
    steer,
    validate_xstate,
    xstate_eigenvalues,
)
from .curve import (
    Convexity,
    ConvexityClass,
    Endpoint,
    EntropyCurve,
    classify_convexity,
    delta,
    r_of_z,
    s_horizontal,
    s_horizontal_d1,
    s_horizontal_d2,
    s_vertical,
    tangent_from_endpoint,
)
from .discord import (
    Decomposition,
    DiscordResult,
    EllipseClass,
    Kind,
    analyse,
    optimal_decomposition,
    quantum_discord,
    reconstruct_povm,
)
from .geometry import (
    Degeneracy,
    SteeringEllipse,
    ellipse_from_xstate,
    x_on_ellipse,
    xstate_from_ellipse,
)
from .oracle import (
    OracleResult,
    ensemble_oracle,
    povm_oracle,
    random_xstate,
    random_xstates,
    vonneumann_oracle,
)

__version__ = "0.1.0"
