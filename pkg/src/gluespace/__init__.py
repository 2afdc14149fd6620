"""Glued polygonal length spaces: distances, geodesics, and numerical
verification of lower curvature bounds."""

from .comparison import (
    Curvature,
    TriangleSides,
    comparison_angle,
    cone_distance,
    cs,
    d_kappa,
    model_side,
    rho,
    sn,
    tg,
)
from .errors import (
    DomainError,
    GlueSpaceError,
    NumericInconsistencyError,
    SceneParseError,
    UnsupportedSceneError,
)
from .links import (
    LinkSpace,
    Sector,
    build_link,
    catalog_links,
    classify_and_judge,
    link_distance,
    locate_direction,
)
from .metric import DiscretizedComplex, GeodesicPath, NodeClass, discretize, node_at
from .model import (
    BoundaryArc,
    ComplexSpec,
    GluingClass,
    Piece,
    ValidationReport,
    gluing_isometry_check,
    induced_arc_distance,
    validate,
)
from .scene import parse_scene, parse_scene_text
from .verifier import (
    Quadruple,
    VerifierConfig,
    VerifyReport,
    ViolationCertificate,
    antipodal_check,
    diameter_check,
    e_geodesic,
    liberman_check,
    make_quadruple,
    monotonicity_check,
    quadruple_test,
    verify,
)

__version__ = "0.1.0"
