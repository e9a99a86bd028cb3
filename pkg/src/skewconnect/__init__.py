"""skewconnect: exact difference / q-difference / differential / mixed
linear systems as connection matrices, with functorial constructions,
integrability and p-curvature diagnostics, truncated Newton-basis
fundamental solutions, and the q -> 1 confluence of the basic
hypergeometric family."""

from .confluence import (
    HeineSeries,
    HypergeometricSpec,
    QHypergeometric,
    TrivialityReport,
    build_q_hypergeometric,
    casorati_trivial_predicate,
    closed_form_casorati_rate,
    confluence_specialize,
    heine_coefficients,
    heine_series,
    hypergeometric_ode_companion,
    q_factorial,
    q_number,
    q_pochhammer,
    q_power,
    z_coefficients,
)
from .connection import (
    Action,
    ActionType,
    LinearSystem,
    companion_system,
    derivation_companion,
    gauge_transform,
    residual,
    volte,
)
from .constructions import (
    casorati_rate,
    direct_sum,
    dual,
    ext_power,
    internal_hom,
    sym_power,
    tensor,
)
from .curvature import integrability_defect, is_integrable, p_curvature
from .exactalg import (
    Frac,
    HSeries,
    Matrix,
    Poly,
    PolyRing,
    ScalarTower,
    TowerMode,
    binomial,
    h_series_power,
    partial_derivative,
)
from .sigma import (
    Direction,
    DirectionKind,
    OreOperator,
    SigmaBase,
    XAction,
    apply_delta,
    apply_sigma,
    ore_apply,
    ore_mul,
)
from .solutions import (
    FundamentalMatrix,
    NewtonBasis,
    NewtonChart,
    coefficient_extract,
    fundamental_matrix,
    horizontal_sections,
    horizontality_report,
    is_horizontal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
