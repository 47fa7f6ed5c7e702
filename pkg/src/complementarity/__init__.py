"""Complementarity relations for two-qubit states.

Concurrence, single-particle visibility and predictability, the quantities
derived from them, and numerical cross-checks: local-unitary optimization,
CHSH search and simulated two-particle interferometry.
"""

from .errors import ComplementarityError
from .measures import (
    ComplementarityReport,
    binary_entropy,
    concurrence_from_observables,
    concurrence_mixed,
    concurrence_pure,
    derived_quantities,
    entanglement_of_formation,
    full_report,
    local_quantities,
    spin_flip,
    triality_residual,
)
from .qstate import (
    DensityMatrix,
    PureState,
    ReducedState,
    load_state,
    make_pure,
    partial_trace,
    purity,
    to_density,
    validate_density,
)

__version__ = "0.1.0"
