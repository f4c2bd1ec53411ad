"""shellkorn: optimal Korn constants of thin shells by finite elements."""

from . import ansatz, assembly, eigensolver, fields, geometry, harness, mesh
from .geometry import (
    Chart,
    CylinderChart,
    PlaneChart,
    ShellDomain,
    SpherePatchChart,
    SurfaceGeometry,
    classify_shell,
    evaluate_geometry,
    geodesic_distance,
    principal_directions,
    shell_map,
    sphere_cover,
    spherical_cap,
)

__version__ = "0.1.0"
