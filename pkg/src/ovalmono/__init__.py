"""Monodromy of cut-area functions of plane algebraic ovals, with the
associated vanishing-cycle lattices and reflection-group certificates."""

__version__ = "0.1.0"

from .curve import (BivariatePoly, CriticalData, DirectionFrame, DomainSpec,
                    critical_values, discriminant_t, fiber_roots,
                    genericity_check, real_slice)
from .kernel import BACKEND, HAVE_COMPILED
from .lattice import (FinitenessVerdict, GramLattice, OrbitResult,
                      gram_kernel, group_order_by_enumeration,
                      irreducible_components, is_finite, orbit, reflect)
from .tracking import (FiberState, TrackingConfig, loop_permutation,
                       standard_loops, track_fiber)

__all__ = [
    "BACKEND", "BivariatePoly", "CriticalData", "DirectionFrame",
    "DomainSpec", "FiberState", "FinitenessVerdict", "GramLattice",
    "HAVE_COMPILED", "OrbitResult", "TrackingConfig", "__version__",
    "critical_values", "discriminant_t", "fiber_roots", "genericity_check",
    "gram_kernel", "group_order_by_enumeration", "irreducible_components",
    "is_finite", "loop_permutation", "orbit", "real_slice", "reflect",
    "standard_loops", "track_fiber",
]
