"""Exact eigenfunction families, nodal-domain decomposition on grids, and
empirical verification of local nodal-volume and growth inequalities."""

__version__ = "0.1.0"

from .fields import (
    FieldSpec,
    ScalarField,
    SphericalPoint,
    assoc_legendre_e,
    field_from_json,
    harmonic_polynomial_2d,
    legendre_p,
    sphere_harmonic_h,
    sphere_harmonic_y,
    sphere_north_pole,
    torus_eigenfunction,
    zonal_harmonic,
)
from .grids import (
    Domain,
    MetricBall,
    SampleGrid,
    build_grid,
    cells_in_ball,
    geodesic_distance,
    spherical_layers,
)
from .components import (
    ComponentTable,
    components_touching_point,
    cross_section_bound,
    label_components,
    local_components,
    stable_touch_count,
)
from .growth import (
    GrowthReport,
    SubharmonicRestriction,
    dim2_volume_bound_check,
    eremenko_check,
    growth_exponent,
    max_function_profile,
    propagation_check,
    rapid_growth_ratio,
    sup_on_region,
)
