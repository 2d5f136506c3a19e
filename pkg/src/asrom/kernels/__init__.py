"""Hot numeric kernels with backend selection.

The numba-compiled backend is the default; set ASROM_NUMBA=0 to force the
pure-numpy fallback (useful for debugging and as the benchmark baseline).
Both backends expose identical functions and agree to rounding error.
"""

import os

from .reference import triangle_geometry

_flag = os.environ.get("ASROM_NUMBA", "auto").strip().lower()

if _flag in ("0", "off", "false", "no"):
    from . import numpy_backend as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_backend as _impl

        BACKEND = "numba"
    except ImportError:
        if _flag in ("1", "on", "true", "yes"):
            raise
        from . import numpy_backend as _impl

        BACKEND = "numpy"

stiffness_mass_local = _impl.stiffness_mass_local
divergence_local = _impl.divergence_local
pressure_mass_local = _impl.pressure_mass_local
convection_local = _impl.convection_local
gradient_coupling_local = _impl.gradient_coupling_local
rbf_displace = _impl.rbf_displace

__all__ = [
    "BACKEND",
    "triangle_geometry",
    "stiffness_mass_local",
    "divergence_local",
    "pressure_mass_local",
    "convection_local",
    "gradient_coupling_local",
    "rbf_displace",
]
