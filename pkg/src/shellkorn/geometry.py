"""Analytic mid-surface charts and their first/second-order geometry.

Canonical surfaces only: cylinder segments, gnomonic sphere patches (a
single square cap or the six-face cover of a closed sphere) and a flat
plane as the degenerate control case.  Charts expose exact derivatives up
to second order, so all curvature data below is free of discretization
error; finite differences appear only in cross-checks.

Conventions
-----------
* The unit normal is ``n = (r_u x r_v) / |r_u x r_v|`` and points outward
  for all built-in charts, so shell volume elements are positive.
* The second fundamental form is the bilinear form of the shape operator,
  ``Pi(a, b) = <grad_a n, b>``; on a sphere of radius R this gives
  ``Pi = g / R`` (positive), and the Gaussian curvature is
  ``det(Pi) / det(g)``.
* 2x2 tensors are stored with covariant indices in chart coordinates;
  ``orthonormal_frame`` supplies the change of basis to a positively
  oriented g-orthonormal frame when Frobenius norms are needed.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedError

__all__ = [
    "Chart",
    "CylinderChart",
    "SpherePatchChart",
    "PlaneChart",
    "SurfaceGeometry",
    "ShellDomain",
    "PrincipalDirections",
    "sphere_cover",
    "spherical_cap",
    "evaluate_geometry",
    "classify_shell",
    "shell_map",
    "principal_directions",
    "geodesic_distance",
    "orthonormal_frame",
    "finite_difference_dpi",
    "finite_difference_weingarten_residual",
]

# Face frames for the cubed-sphere cover: (base, a, b) with a x b = base,
# which makes every gnomonic patch positively oriented with outward normal.
_EX = np.array([1.0, 0.0, 0.0])
_EY = np.array([0.0, 1.0, 0.0])
_EZ = np.array([0.0, 0.0, 1.0])
_FACE_FRAMES = (
    (_EX, _EY, _EZ),
    (-_EX, _EZ, _EY),
    (_EY, _EZ, _EX),
    (-_EY, _EX, _EZ),
    (_EZ, _EX, _EY),
    (-_EZ, _EY, _EX),
)


def _dot(a, b):
    return np.sum(a * b, axis=-1)


class Chart:
    """Base class: an analytic immersion of a closed parameter rectangle."""

    kind = "abstract"
    periodic = (False, False)

    @property
    def domain(self):
        raise NotImplementedError

    @property
    def length_scale(self):
        """Characteristic length used for relative tolerances."""
        raise NotImplementedError

    @property
    def max_principal_curvature(self):
        """Upper bound of |principal curvature| over the chart."""
        raise NotImplementedError

    def position(self, u, v):
        raise NotImplementedError

    def first_derivatives(self, u, v):
        raise NotImplementedError

    def second_derivatives(self, u, v):
        raise NotImplementedError

    # -- derived quantities (vectorized over broadcastable u, v) ---------

    def normal(self, u, v):
        r_u, r_v = self.first_derivatives(u, v)
        cross = np.cross(r_u, r_v)
        return cross / np.linalg.norm(cross, axis=-1, keepdims=True)

    def domain_diameter(self):
        (u0, u1), (v0, v1) = self.domain
        return math.hypot(u1 - u0, v1 - v0)

    def contains(self, u, v, tol=1e-12):
        (u0, u1), (v0, v1) = self.domain
        su = tol * max(u1 - u0, 1.0)
        sv = tol * max(v1 - v0, 1.0)
        ok_u = True if self.periodic[0] else (u >= u0 - su) & (u <= u1 + su)
        ok_v = True if self.periodic[1] else (v >= v0 - sv) & (v <= v1 + sv)
        return np.logical_and(ok_u, ok_v)

    def bundle(self, u, v):
        """All pointwise geometric data, vectorized.

        Returns a dict of arrays whose leading shape is the broadcast shape
        of ``u`` and ``v``; trailing axes are tensor indices.
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        r = self.position(u, v)
        r_u, r_v = self.first_derivatives(u, v)
        r_uu, r_uv, r_vv = self.second_derivatives(u, v)
        n = self.normal(u, v)

        g = np.empty(r.shape[:-1] + (2, 2))
        g[..., 0, 0] = _dot(r_u, r_u)
        g[..., 0, 1] = g[..., 1, 0] = _dot(r_u, r_v)
        g[..., 1, 1] = _dot(r_v, r_v)
        det_g = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
        g_inv = np.empty_like(g)
        g_inv[..., 0, 0] = g[..., 1, 1] / det_g
        g_inv[..., 1, 1] = g[..., 0, 0] / det_g
        g_inv[..., 0, 1] = g_inv[..., 1, 0] = -g[..., 0, 1] / det_g

        # Pi_ij = <d_i n, d_j r> = -<n, r_ij>
        pi = np.empty_like(g)
        pi[..., 0, 0] = -_dot(n, r_uu)
        pi[..., 0, 1] = pi[..., 1, 0] = -_dot(n, r_uv)
        pi[..., 1, 1] = -_dot(n, r_vv)

        det_pi = pi[..., 0, 0] * pi[..., 1, 1] - pi[..., 0, 1] ** 2
        gauss = det_pi / det_g
        trace = np.einsum("...ij,...ij->...", g_inv, pi)
        norm2 = np.einsum("...ik,...jl,...ij,...kl->...", g_inv, g_inv, pi, pi)

        # Weingarten: d_i n = Pi_ik g^{kj} d_j r
        shape_mixed = np.einsum("...ik,...kj->...ij", pi, g_inv)
        tangents = np.stack([r_u, r_v], axis=-2)
        n_deriv = np.einsum("...ij,...jc->...ic", shape_mixed, tangents)

        # Gamma^k_ij = g^{kl} <r_ij, r_l>
        second = np.empty(r.shape[:-1] + (2, 2, 3))
        second[..., 0, 0, :] = r_uu
        second[..., 0, 1, :] = second[..., 1, 0, :] = r_uv
        second[..., 1, 1, :] = r_vv
        proj = np.einsum("...ijc,...lc->...ijl", second, tangents)
        gamma = np.einsum("...kl,...ijl->...kij", g_inv, proj)

        return {
            "position": r,
            "r_u": r_u,
            "r_v": r_v,
            "r_uu": r_uu,
            "r_uv": r_uv,
            "r_vv": r_vv,
            "normal": n,
            "normal_u": n_deriv[..., 0, :],
            "normal_v": n_deriv[..., 1, :],
            "metric": g,
            "metric_inv": g_inv,
            "det_metric": det_g,
            "sqrt_det_metric": np.sqrt(det_g),
            "second_form": pi,
            "gauss_curvature": gauss,
            "trace_second_form": trace,
            "second_form_norm_sq": norm2,
            "christoffels": gamma,
            "dpi": self.dpi(u, v),
        }

    def dpi(self, u, v):
        """Covariant derivative of the second fundamental form, D_k Pi_ij.

        Zero for every built-in chart (parallel second form); subclasses
        with non-parallel curvature would override.
        """
        shape = np.broadcast_shapes(np.shape(u), np.shape(v))
        return np.zeros(shape + (2, 2, 2))


@dataclasses.dataclass(frozen=True)
class CylinderChart(Chart):
    """Circular cylinder of radius R about the z axis, height ``length``."""

    radius: float
    length: float

    kind = "cylinder"
    periodic = (True, False)

    @property
    def domain(self):
        return ((0.0, 2.0 * math.pi), (0.0, self.length))

    @property
    def length_scale(self):
        return self.radius

    @property
    def max_principal_curvature(self):
        return 1.0 / self.radius

    def position(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        R = self.radius
        return np.stack([R * np.cos(u), R * np.sin(u), v], axis=-1)

    def first_derivatives(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        R = self.radius
        zero = np.zeros_like(u)
        r_u = np.stack([-R * np.sin(u), R * np.cos(u), zero], axis=-1)
        r_v = np.stack([zero, zero, np.ones_like(u)], axis=-1)
        return r_u, r_v

    def second_derivatives(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        R = self.radius
        zero3 = np.zeros(u.shape + (3,))
        r_uu = np.stack([-R * np.cos(u), -R * np.sin(u), np.zeros_like(u)], axis=-1)
        return r_uu, zero3, zero3.copy()

    def normal(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return np.stack([np.cos(u), np.sin(u), np.zeros_like(u)], axis=-1)


@dataclasses.dataclass(frozen=True)
class SpherePatchChart(Chart):
    """Gnomonic (cube-face) patch of a sphere of radius R.

    Parameters live on the square ``[-extent, extent]^2`` of the tangent
    cube face; ``extent = 1`` gives one face of the six-face cover of the
    closed sphere, while a cap of half-angle ``alpha`` uses
    ``extent = tan(alpha)`` on the +z face (the polar angle of the edge
    midpoints is then exactly ``alpha``).
    """

    radius: float
    face: int = 4
    extent: float = 1.0
    role: str = "closed-sphere-patch"

    @property
    def kind(self):
        return self.role

    @property
    def domain(self):
        a = self.extent
        return ((-a, a), (-a, a))

    @property
    def length_scale(self):
        return self.radius

    @property
    def max_principal_curvature(self):
        return 1.0 / self.radius

    def _frame(self):
        return _FACE_FRAMES[self.face]

    def cube_point(self, u, v):
        """Point on the tangent cube (exact across shared face edges)."""
        base, a_vec, b_vec = self._frame()
        u = np.asarray(u, float)[..., None]
        v = np.asarray(v, float)[..., None]
        return base + u * a_vec + v * b_vec

    def position(self, u, v):
        c = self.cube_point(u, v)
        q = np.linalg.norm(c, axis=-1, keepdims=True)
        return self.radius * c / q

    def first_derivatives(self, u, v):
        base, a_vec, b_vec = self._frame()
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        u, v = np.broadcast_arrays(u, v)
        c = self.cube_point(u, v)
        q2 = 1.0 + u * u + v * v
        q = np.sqrt(q2)
        q3 = (q2 * q)[..., None]
        r_u = self.radius * (a_vec / q[..., None] - u[..., None] * c / q3)
        r_v = self.radius * (b_vec / q[..., None] - v[..., None] * c / q3)
        return r_u, r_v

    def second_derivatives(self, u, v):
        base, a_vec, b_vec = self._frame()
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        u, v = np.broadcast_arrays(u, v)
        c = self.cube_point(u, v)
        q2 = 1.0 + u * u + v * v
        q = np.sqrt(q2)
        q3 = (q2 * q)[..., None]
        q5 = (q2 * q2 * q)[..., None]
        uu = u[..., None]
        vv = v[..., None]
        R = self.radius
        r_uu = R * (-2.0 * uu * a_vec / q3 - c / q3 + 3.0 * uu * uu * c / q5)
        r_vv = R * (-2.0 * vv * b_vec / q3 - c / q3 + 3.0 * vv * vv * c / q5)
        r_uv = R * (-vv * a_vec / q3 - uu * b_vec / q3 + 3.0 * uu * vv * c / q5)
        return r_uu, r_uv, r_vv

    def normal(self, u, v):
        c = self.cube_point(u, v)
        return c / np.linalg.norm(c, axis=-1, keepdims=True)


@dataclasses.dataclass(frozen=True)
class PlaneChart(Chart):
    """Flat square patch; the degenerate (zero curvature form) control."""

    size: float = 1.0

    kind = "plane"

    @property
    def domain(self):
        return ((0.0, self.size), (0.0, self.size))

    @property
    def length_scale(self):
        return self.size

    @property
    def max_principal_curvature(self):
        return 0.0

    def position(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return np.stack([u, v, np.zeros_like(u)], axis=-1)

    def first_derivatives(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        zero = np.zeros_like(u)
        one = np.ones_like(u)
        return (np.stack([one, zero, zero], axis=-1),
                np.stack([zero, one, zero], axis=-1))

    def second_derivatives(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        zero3 = np.zeros(u.shape + (3,))
        return zero3, zero3.copy(), zero3.copy()


def sphere_cover(radius):
    """The six gnomonic patches covering a closed sphere."""
    return tuple(SpherePatchChart(radius, face=i) for i in range(6))


def spherical_cap(radius, alpha):
    """Square gnomonic cap on the +z face with edge-midpoint polar angle alpha."""
    if not 0.0 < alpha < 0.5 * math.pi:
        raise DomainError(f"cap half-angle must lie in (0, pi/2), got {alpha}")
    return SpherePatchChart(radius, face=4, extent=math.tan(alpha), role="spherical-cap")


@dataclasses.dataclass(frozen=True)
class SurfaceGeometry:
    """All first/second-order geometric data of a chart at one point."""

    chart: Chart
    u: float
    v: float
    position: np.ndarray
    r_u: np.ndarray
    r_v: np.ndarray
    normal: np.ndarray
    normal_u: np.ndarray
    normal_v: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    det_metric: float
    sqrt_det_metric: float
    second_form: np.ndarray
    gauss_curvature: float
    trace_second_form: float
    second_form_norm_sq: float
    christoffels: np.ndarray
    dpi: np.ndarray


def evaluate_geometry(chart, u, v):
    """Evaluate all geometric data of ``chart`` at a single point."""
    u = float(u)
    v = float(v)
    if not bool(chart.contains(u, v)):
        raise DomainError(
            f"({u}, {v}) outside parameter domain {chart.domain} of {chart.kind} chart")
    b = chart.bundle(u, v)
    return SurfaceGeometry(
        chart=chart, u=u, v=v,
        position=b["position"], r_u=b["r_u"], r_v=b["r_v"],
        normal=b["normal"], normal_u=b["normal_u"], normal_v=b["normal_v"],
        metric=b["metric"], metric_inv=b["metric_inv"],
        det_metric=float(b["det_metric"]),
        sqrt_det_metric=float(b["sqrt_det_metric"]),
        second_form=b["second_form"],
        gauss_curvature=float(b["gauss_curvature"]),
        trace_second_form=float(b["trace_second_form"]),
        second_form_norm_sq=float(b["second_form_norm_sq"]),
        christoffels=b["christoffels"], dpi=b["dpi"],
    )


def orthonormal_frame(geom_or_bundle):
    """Positively oriented g-orthonormal tangent frame by Gram-Schmidt.

    Returns ``P`` with ``E_a = P[..., i, a] d_i r``  (columns are chart
    coordinates of the frame vectors), built from ``(r_u, r_v)``.
    """
    if isinstance(geom_or_bundle, SurfaceGeometry):
        g = geom_or_bundle.metric
    else:
        g = geom_or_bundle["metric"]
    g00 = g[..., 0, 0]
    g01 = g[..., 0, 1]
    g11 = g[..., 1, 1]
    det = g00 * g11 - g01 ** 2
    P = np.zeros(g.shape)
    P[..., 0, 0] = 1.0 / np.sqrt(g00)
    s = np.sqrt(det / g00)
    P[..., 0, 1] = -g01 / (g00 * s)
    P[..., 1, 1] = 1.0 / s
    return P


@dataclasses.dataclass(frozen=True)
class ShellDomain:
    """Mid-surface chart set, half-thickness and clamping description."""

    charts: tuple
    half_thickness: float
    boundary: str = "clamped"  # "clamped" on the lateral face, or "closed"
    classification_grid: int = 16

    def __post_init__(self):
        h = self.half_thickness
        if h <= 0.0:
            raise DomainError(f"half-thickness must be positive, got {h}")
        if h >= self.curvature_radius:
            raise DomainError(
                f"half-thickness {h} >= minimal curvature radius "
                f"{self.curvature_radius}; shell map is not a diffeomorphism")
        if self.boundary not in ("clamped", "closed"):
            raise DomainError(f"unknown boundary condition {self.boundary!r}")
        if self.boundary == "closed":
            if len(self.charts) != 6 or any(
                    c.kind != "closed-sphere-patch" for c in self.charts):
                raise DomainError(
                    "closed boundary condition is only allowed for the "
                    "six-patch closed-sphere chart set")

    @property
    def curvature_radius(self):
        kmax = max(c.max_principal_curvature for c in self.charts)
        return math.inf if kmax == 0.0 else 1.0 / kmax

    @classmethod
    def cylinder(cls, radius, length, half_thickness, **kw):
        return cls((CylinderChart(radius, length),), half_thickness, "clamped", **kw)

    @classmethod
    def closed_sphere(cls, radius, half_thickness, **kw):
        return cls(sphere_cover(radius), half_thickness, "closed", **kw)

    @classmethod
    def spherical_cap(cls, radius, alpha, half_thickness, **kw):
        return cls((spherical_cap(radius, alpha),), half_thickness, "clamped", **kw)

    @classmethod
    def plane(cls, size, half_thickness, **kw):
        return cls((PlaneChart(size),), half_thickness, "clamped", **kw)


def classify_shell(domain):
    """Classify a shell as ``parabolic``, ``elliptic`` or ``other``.

    Sampling is pointwise on a uniform grid per chart; with analytic charts
    the tolerances (1e-10 relative to the chart length scale) make this an
    effectively exact test.
    """
    n = max(8, int(domain.classification_grid))
    parabolic = True
    elliptic = True
    for chart in domain.charts:
        ell = chart.length_scale
        tol_k = 1e-10 / ell ** 2
        tol_p = 1e-10 / ell
        (u0, u1), (v0, v1) = chart.domain
        uu = np.linspace(u0, u1, n)
        vv = np.linspace(v0, v1, n)
        U, V = np.meshgrid(uu, vv, indexing="ij")
        b = chart.bundle(U, V)
        kappa = b["gauss_curvature"]
        pnorm = np.sqrt(b["second_form_norm_sq"])
        parabolic &= bool(np.all(np.abs(kappa) <= tol_k) and np.all(pnorm >= tol_p))
        elliptic &= bool(np.all(kappa >= tol_k))
    if parabolic:
        return "parabolic"
    if elliptic:
        return "elliptic"
    return "other"


def shell_map(geom, t, half_thickness):
    """Map a mid-surface point along its normal: position, Jacobian, weight.

    The volume weight is ``(1 + t tr Pi + t^2 kappa) sqrt(det g)`` and equals
    the determinant of the returned Jacobian identically.
    """
    if abs(t) > half_thickness:
        raise DomainError(f"|t|={abs(t)} exceeds half-thickness {half_thickness}")
    position = geom.position + t * geom.normal
    jac = np.stack([geom.r_u + t * geom.normal_u,
                    geom.r_v + t * geom.normal_v,
                    geom.normal], axis=-1)
    weight = (1.0 + t * geom.trace_second_form
              + t * t * geom.gauss_curvature) * geom.sqrt_det_metric
    return position, jac, weight


@dataclasses.dataclass(frozen=True)
class PrincipalDirections:
    lambda1: float
    lambda2: float
    e1: np.ndarray
    e2: np.ndarray
    umbilic: bool


def principal_directions(geom, umbilic_rtol=1e-8):
    """Shape-operator eigenpairs, ``lambda1 >= lambda2``, unit directions.

    At an umbilic point any g-orthonormal pair is returned and the
    ``umbilic`` flag is set instead of raising.
    """
    P = orthonormal_frame(geom)
    # shape operator in the orthonormal frame: S_ab = Pi(E_a, E_b)
    S = P.T @ geom.second_form @ P
    vals, vecs = np.linalg.eigh(S)
    lam2, lam1 = float(vals[0]), float(vals[1])
    frame_amb = np.stack([geom.r_u, geom.r_v], axis=-1) @ P  # (3, 2) columns E_a
    e2 = frame_amb @ vecs[:, 0]
    e1 = frame_amb @ vecs[:, 1]
    scale = max(abs(lam1), abs(lam2), 1.0 / geom.chart.length_scale)
    umbilic = abs(lam1 - lam2) <= umbilic_rtol * scale
    return PrincipalDirections(lam1, lam2, e1, e2, umbilic)


def _is_sphere(chart):
    return isinstance(chart, SpherePatchChart)


def geodesic_distance(chart, p0, p1, chart2=None):
    """Exact geodesic distance between two parameter points.

    Great-circle distance on sphere patches (``chart2`` may name a second
    patch of the same sphere), developable distance on the cylinder,
    Euclidean on the plane.
    """
    other = chart if chart2 is None else chart2
    if _is_sphere(chart):
        if not (_is_sphere(other) and other.radius == chart.radius):
            raise UnsupportedError(
                "cross-chart distance requires two patches of the same sphere")
        x0 = chart.position(*p0)
        x1 = other.position(*p1)
        R = chart.radius
        c = np.clip(float(np.dot(x0, x1)) / R ** 2, -1.0, 1.0)
        s = float(np.linalg.norm(np.cross(x0, x1))) / R ** 2
        return R * math.atan2(s, c)
    if other is not chart and other != chart:
        raise UnsupportedError(
            f"no overlap data between {chart.kind} and {other.kind} charts")
    if isinstance(chart, CylinderChart):
        du = (p1[0] - p0[0] + math.pi) % (2.0 * math.pi) - math.pi
        return math.hypot(chart.radius * du, p1[1] - p0[1])
    if isinstance(chart, PlaneChart):
        return math.hypot(p1[0] - p0[0], p1[1] - p0[1])
    raise UnsupportedError(f"geodesic distance not implemented for {chart.kind}")


# ----------------------------------------------------------------------
# finite-difference cross-checks


def finite_difference_dpi(chart, u, v, step=None):
    """Central-difference covariant derivative of the second form."""
    if step is None:
        step = 1e-5 * chart.domain_diameter()
    b = chart.bundle(u, v)
    gamma = b["christoffels"]
    pi = b["second_form"]
    dpi = np.zeros((2, 2, 2))
    # (D_k Pi)_ij = d_k Pi_ij - Gamma^l_ki Pi_lj - Gamma^l_kj Pi_il
    for k, (du, dv) in enumerate(((step, 0.0), (0.0, step))):
        pp = chart.bundle(u + du, v + dv)["second_form"]
        pm = chart.bundle(u - du, v - dv)["second_form"]
        dpi[k] = (pp - pm) / (2.0 * step)
        dpi[k] -= np.einsum("li,lj->ij", gamma[:, k, :], pi)
        dpi[k] -= np.einsum("lj,il->ij", gamma[:, k, :], pi)
    return dpi


def finite_difference_weingarten_residual(chart, u, v, step=None):
    """Max residual of ``d_i n = Pi_ik g^{kj} d_j r`` by central differences."""
    if step is None:
        step = 1e-6 * chart.domain_diameter()
    b = chart.bundle(u, v)
    res = 0.0
    exact = (b["normal_u"], b["normal_v"])
    for k, (du, dv) in enumerate(((step, 0.0), (0.0, step))):
        npp = chart.normal(u + du, v + dv)
        nmm = chart.normal(u - du, v - dv)
        fd = (npp - nmm) / (2.0 * step)
        res = max(res, float(np.max(np.abs(fd - exact[k]))))
    return res
