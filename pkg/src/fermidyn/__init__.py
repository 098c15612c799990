"""Numerical engine for classical and quantum fermionic mechanics.

Observables live in the exterior algebra over a real phase space with a
positive-definite metric; the quantum algebra is the same space with the
Clifford product.
"""

from .algebra import (
    Blade,
    Generator,
    LinearMap,
    Metric,
    Multivector,
    OrthogonalMap,
    apply_orthogonal,
    casalbuoni_bracket,
    dagger,
    derivative,
    distinguished_functionals,
    epsilon,
    extended_inner,
    generator_of,
    generator_two_form_iso,
    integral,
    make_metric,
    scalar_functional,
    two_form_of,
    wedge,
)
from .clifford import (
    DeformationParameter,
    clifford_commutator,
    clifford_product,
    deformation_derivative,
    wick_product,
)
from .dynamics import (
    EvolutionSpec,
    evolution_operator,
    evolve_observable,
    evolve_phase,
    noether_drift,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
