"""Exact simulation of coined quantum walks on a line and on an n-cycle.

Pure-state and density-matrix evolution under ``G U B`` steps with
optional coin noise, plus the symmetry and coherence diagnostics built
on top.  Angles are degrees throughout the public API.
"""

from .errors import (
    BoundaryError,
    CapacityError,
    ChannelIntegrityError,
    NumericalIntegrityError,
    QWError,
    RangeError,
    ShapeError,
    ValidationError,
)
from .evolution import EvolutionRecord, RunSpec, evolve, evolve_noisy, evolve_pure, line_spec, paired_run
from .noise import (
    GADParams,
    PhaseDampingParams,
    apply_channel,
    gad_kraus,
    phase_damping_kraus,
    thermal_occupation,
)
from .observables import (
    CoherenceProfile,
    SymmetryMetrics,
    coherence_function,
    coherence_total,
    kolmogorov_distance,
    normalized_metrics,
    position_distribution,
)
from .operators import (
    HADAMARD,
    CoinParams,
    PhaseGateParams,
    apply_coin,
    apply_shift,
    build_coin,
    build_phase_gate,
    walk_step,
)
from .pathsum import path_sum_state, phase_factor_audit
from .state import (
    Cycle,
    DensityMatrix,
    InitialStateParams,
    Line,
    PureState,
    make_initial_pure,
    position_index,
    position_label,
    pure_to_density,
)

__version__ = "0.1.0"
