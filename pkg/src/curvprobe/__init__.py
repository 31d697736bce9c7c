"""Quantum probes for estimating the radius of curved surfaces."""
from .estimation import (
    EstimationReport,
    UndefinedRatioError,
    fi_qfi_ratio,
    position_fi_cylinder,
    position_fi_sphere,
    qfi_cylinder_closed,
    qfi_pure,
    qfi_sphere_closed,
)
from .geometry import Cylinder, Sphere, SurfacePoint, Torus
from .probe import EvolvedModel, SpectralState, evolve, lambda_derivative, superposition, two_level, von_mises_packet
from .spectral import CylinderMode, SphereMode, sphere_harmonic, sphere_quadrature

__version__ = "0.1.0"
