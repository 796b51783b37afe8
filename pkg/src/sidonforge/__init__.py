"""Construction, exact verification and bounds for g-Sidon sets."""

from .groups import GroupKind, GroupSpec, legendre
from .repfn import Flavor, RepProfile, SidonSet, rep_profile, verify_g_sidon

__all__ = [
    "Flavor",
    "GroupKind",
    "GroupSpec",
    "RepProfile",
    "SidonSet",
    "legendre",
    "rep_profile",
    "verify_g_sidon",
]

__version__ = "0.1.0"
