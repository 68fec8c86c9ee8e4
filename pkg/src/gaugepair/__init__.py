"""gaugepair: virtual-photon entanglement of two charged oscillators, computed
independently in a covariant (indefinite-metric) gauge and in the Coulomb
gauge, with the transformation between them checked mode by mode.

Natural units hbar = c = eps0 = 1 throughout.
"""

from .core import SystemParams, ValidationError, derive_dipole, validate
from .fock import ModeRegistry, PhotonMode, PolarizationKind, StateVector
from .perturbation import DiagramSpec, lorentz_bracket
from .quadrature import QuadratureConfig, epsilon_coulomb, epsilon_lorentz
from .gauge import per_k_equivalence, transformed_epsilon

__version__ = "0.1.0"

__all__ = [
    "SystemParams",
    "ValidationError",
    "derive_dipole",
    "validate",
    "ModeRegistry",
    "PhotonMode",
    "PolarizationKind",
    "StateVector",
    "DiagramSpec",
    "lorentz_bracket",
    "QuadratureConfig",
    "epsilon_coulomb",
    "epsilon_lorentz",
    "per_k_equivalence",
    "transformed_epsilon",
    "__version__",
]
