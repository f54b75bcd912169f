"""Two co-propagating photon modes, indirectly coupled through a
magnetized electron medium, exchange polarization correlations.  This
package solves the quasiphoton dispersion relation, builds the mode
transformation block, forms the post-interaction two-qubit state, and
evaluates its entanglement measures over parameter sweeps.
"""
__version__ = "0.1.0"

from .bogoliubov import BogoliubovBlock, build_block, identity_defect
from .dispersion import ModeRoots, exact_roots, perturbative_roots, residual
from .entangle import (
    EntanglementReport,
    full_report,
    info_measure,
    phi_closed,
    reduced_density,
    schmidt_measure,
)
from .errors import (
    ComputationError,
    ParseError,
    QubeamError,
    ValidationError,
)
from .params import ModelParams, PhysicalInputs, derive_couplings, make_params
from .qstate import PolarizationConfig, TwoQubitAmplitudes, amplitudes, closed_form_ab
from .sweep import SweepConfig, parse_config, run_sweep, verify, verify_point

__all__ = [
    "__version__",
    "BogoliubovBlock", "build_block", "identity_defect",
    "ModeRoots", "exact_roots", "perturbative_roots", "residual",
    "EntanglementReport", "full_report", "info_measure", "phi_closed",
    "reduced_density", "schmidt_measure",
    "ComputationError", "ParseError", "QubeamError", "ValidationError",
    "ModelParams", "PhysicalInputs", "derive_couplings", "make_params",
    "PolarizationConfig", "TwoQubitAmplitudes", "amplitudes", "closed_form_ab",
    "SweepConfig", "parse_config", "run_sweep", "verify", "verify_point",
]
