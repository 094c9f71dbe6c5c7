"""Moment vanishing and universal-center analysis for PL paths on curves."""

from .curve_model import (
    CurveComplex,
    Edge,
    EdgeWord,
    SampledPath,
    build_complex,
    realize,
    trace_path,
)
from .errors import (
    Blowup,
    ComplexDisconnected,
    ConditionStarViolated,
    DegenerateGeometry,
    DegreeTooLarge,
    FormatError,
    MomentAtlasError,
    NotClosed,
    PathOffCurve,
    PointOnCurve,
    TraceError,
)
from .moments import (
    MomentReport,
    MomentSpec,
    face_coefficients,
    iterated_integral,
    moment_quadrature,
    moment_report,
    moment_via_homology,
    monomial_face_integral,
    vanishing_scan,
)
from .planar_geometry import (
    CubeFamily,
    Face,
    FaceSet,
    extract_faces,
    inscribed_square_side,
    n_bound_2d,
    n_bound_nd,
    q_independence_check,
    winding_number,
)
from .topology import (
    CycleBasis,
    betti1,
    covers_trail,
    cycle_basis,
    euler_classify,
    homology_coefficients,
    reduce_word,
)
from .projection import (
    DirectionPair,
    expansion_check,
    project,
    restricted_moment,
    sample_direction,
)
from .approx import C_OP, TensorPolynomial, approximate, error_bound, evaluate, sup_error
from .center import (
    CenterVerdict,
    DecideOptions,
    OdeSystem,
    classify_conditions,
    decide,
    first_return_map,
    fourth_coefficient,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
