"""Geometry module: analytic values, invariants, finite-difference checks."""

import math

import numpy as np
import pytest

from shellkorn.errors import DomainError, UnsupportedError
from shellkorn.geometry import (
    CylinderChart,
    PlaneChart,
    ShellDomain,
    SpherePatchChart,
    classify_shell,
    evaluate_geometry,
    finite_difference_dpi,
    finite_difference_weingarten_residual,
    geodesic_distance,
    orthonormal_frame,
    principal_directions,
    shell_map,
    sphere_cover,
    spherical_cap,
)

RNG = np.random.default_rng(20240811)


def sample_points(chart, n):
    (u0, u1), (v0, v1) = chart.domain
    # stay marginally inside so finite-difference stencils remain in-domain
    pad_u = 0.02 * (u1 - u0)
    pad_v = 0.02 * (v1 - v0)
    u = RNG.uniform(u0 + pad_u, u1 - pad_u, n)
    v = RNG.uniform(v0 + pad_v, v1 - pad_v, n)
    return u, v


def all_charts():
    return [
        CylinderChart(1.0, 2.0),
        spherical_cap(1.0, math.pi / 3),
        SpherePatchChart(2.0, face=1),
    ]


# ---------------------------------------------------------------- basics


def test_cylinder_curvatures():
    chart = CylinderChart(1.0, 2.0)
    for u, v in zip(*sample_points(chart, 10)):
        geom = evaluate_geometry(chart, u, v)
        assert abs(geom.gauss_curvature) < 1e-14
        assert abs(geom.second_form_norm_sq - 1.0) < 1e-12
        pd = principal_directions(geom)
        assert abs(pd.lambda1 - 1.0) < 1e-12
        assert abs(pd.lambda2) < 1e-12


def test_sphere_radius_two():
    chart = SpherePatchChart(2.0, face=3)
    for u, v in zip(*sample_points(chart, 10)):
        geom = evaluate_geometry(chart, u, v)
        assert abs(geom.gauss_curvature - 0.25) < 1e-12
        np.testing.assert_allclose(geom.second_form, geom.metric / 2.0,
                                   rtol=0, atol=1e-12)
        assert abs(geom.trace_second_form - 1.0) < 1e-12


def test_normal_unit_and_orthogonal():
    for chart in all_charts():
        u, v = sample_points(chart, 20)
        b = chart.bundle(u, v)
        n = b["normal"]
        assert np.max(np.abs(np.sum(n * n, axis=-1) - 1.0)) < 1e-12
        assert np.max(np.abs(np.sum(n * b["r_u"], axis=-1))) < 1e-12
        assert np.max(np.abs(np.sum(n * b["r_v"], axis=-1))) < 1e-12


def test_immersion_on_closed_domain():
    for chart in all_charts() + [PlaneChart(1.0)]:
        (u0, u1), (v0, v1) = chart.domain
        U, V = np.meshgrid(np.linspace(u0, u1, 17), np.linspace(v0, v1, 17),
                           indexing="ij")
        r_u, r_v = chart.first_derivatives(U, V)
        cross = np.cross(r_u, r_v)
        assert np.min(np.linalg.norm(cross, axis=-1)) > 1e-8


def test_gauss_equation_consistency():
    # det(Pi)/det(g) must equal the known analytic curvature
    for chart, kappa in [(CylinderChart(1.5, 2.0), 0.0),
                         (SpherePatchChart(2.0, face=0), 0.25),
                         (spherical_cap(0.5, 1.0), 4.0)]:
        u, v = sample_points(chart, 30)
        b = chart.bundle(u, v)
        assert np.max(np.abs(b["gauss_curvature"] - kappa)) < 1e-10


def test_second_form_norm_vs_eigenvalues():
    for chart in all_charts():
        for u, v in zip(*sample_points(chart, 5)):
            geom = evaluate_geometry(chart, u, v)
            pd = principal_directions(geom)
            assert abs(geom.second_form_norm_sq
                       - pd.lambda1 ** 2 - pd.lambda2 ** 2) < 1e-10


def test_weingarten_finite_difference():
    for chart in all_charts():
        for u, v in zip(*sample_points(chart, 8)):
            assert finite_difference_weingarten_residual(chart, u, v) < 1e-8


def test_dpi_zero_with_fd_crosscheck():
    for chart in all_charts():
        for u, v in zip(*sample_points(chart, 5)):
            geom = evaluate_geometry(chart, u, v)
            assert np.max(np.abs(geom.dpi)) == 0.0
            assert np.max(np.abs(finite_difference_dpi(chart, u, v))) < 1e-6


def test_out_of_domain_raises():
    chart = spherical_cap(1.0, math.pi / 3)
    with pytest.raises(DomainError):
        evaluate_geometry(chart, 10.0, 0.0)
    # periodic direction of the cylinder accepts any angle
    cyl = CylinderChart(1.0, 2.0)
    evaluate_geometry(cyl, 17.0, 1.0)
    with pytest.raises(DomainError):
        evaluate_geometry(cyl, 0.0, 3.0)


# ------------------------------------------------------------- classify


def test_classification():
    assert classify_shell(ShellDomain.cylinder(1.0, 2.0, 0.1)) == "parabolic"
    assert classify_shell(ShellDomain.spherical_cap(1.0, math.pi / 3, 0.1)) == "elliptic"
    assert classify_shell(ShellDomain.closed_sphere(1.0, 0.1)) == "elliptic"
    assert classify_shell(ShellDomain.plane(1.0, 0.1)) == "other"


# ------------------------------------------------------------- shell map


def test_shell_map_weights():
    cyl = evaluate_geometry(CylinderChart(1.0, 2.0), 0.3, 0.7)
    _, _, w0 = shell_map(cyl, 0.0, 0.2)
    assert abs(w0 - cyl.sqrt_det_metric) < 1e-14
    _, _, w1 = shell_map(cyl, 0.05, 0.2)
    assert abs(w1 / cyl.sqrt_det_metric - 1.05) < 1e-12

    sph = evaluate_geometry(SpherePatchChart(1.0, face=4), 0.2, -0.3)
    _, _, w = shell_map(sph, 0.1, 0.2)
    assert abs(w / sph.sqrt_det_metric - 1.21) < 1e-12

    with pytest.raises(DomainError):
        shell_map(cyl, 0.3, 0.2)


def test_volume_weight_equals_jacobian_determinant():
    rng = np.random.default_rng(7)
    charts = all_charts()
    for _ in range(1000):
        chart = charts[rng.integers(len(charts))]
        (u0, u1), (v0, v1) = chart.domain
        u = rng.uniform(u0, u1)
        v = rng.uniform(v0, v1)
        h = 0.2 * chart.length_scale
        t = rng.uniform(-h, h)
        geom = evaluate_geometry(chart, u, v)
        _, jac, w = shell_map(geom, t, h)
        assert abs(np.linalg.det(jac) - w) <= 1e-10 * abs(w)


# --------------------------------------------------- principal directions


def test_principal_directions_cylinder():
    geom = evaluate_geometry(CylinderChart(1.0, 2.0), 0.9, 0.4)
    pd = principal_directions(geom)
    assert not pd.umbilic
    # e1 circumferential, e2 axial
    circ = geom.r_u / np.linalg.norm(geom.r_u)
    assert min(np.linalg.norm(pd.e1 - circ), np.linalg.norm(pd.e1 + circ)) < 1e-10
    assert min(np.linalg.norm(pd.e2 - [0, 0, 1]), np.linalg.norm(pd.e2 + [0, 0, 1])) < 1e-10
    assert abs(np.dot(pd.e1, pd.e2)) < 1e-12


def test_principal_directions_sphere_umbilic():
    geom = evaluate_geometry(SpherePatchChart(1.0, face=2), 0.4, 0.1)
    pd = principal_directions(geom)
    assert pd.umbilic
    assert abs(pd.lambda1 - 1.0) < 1e-12 and abs(pd.lambda2 - 1.0) < 1e-12


def test_weingarten_along_principal_direction():
    # finite-difference n along e1 must reproduce lambda1 * e1
    chart = CylinderChart(1.0, 2.0)
    geom = evaluate_geometry(chart, 1.1, 0.8)
    pd = principal_directions(geom)
    P = orthonormal_frame(geom)
    # chart components of e1: solve [r_u r_v] coords
    coords = geom.metric_inv @ np.array([np.dot(pd.e1, geom.r_u),
                                         np.dot(pd.e1, geom.r_v)])
    eps = 1e-5
    npp = chart.normal(geom.u + eps * coords[0], geom.v + eps * coords[1])
    nmm = chart.normal(geom.u - eps * coords[0], geom.v - eps * coords[1])
    fd = (npp - nmm) / (2 * eps)
    assert np.linalg.norm(fd - pd.lambda1 * pd.e1) < 1e-8
    assert P.shape == (2, 2)


# ----------------------------------------------------------- six patches


def test_six_patch_cover_and_overlap():
    patches = sphere_cover(1.0)
    rng = np.random.default_rng(3)
    # cover: every direction has max-norm coordinate on some face
    for _ in range(200):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        hits = 0
        for p in patches:
            base, a_vec, b_vec = p._frame()
            denom = np.dot(d, base)
            if denom <= 0:
                continue
            uu = np.dot(d, a_vec) / denom
            vv = np.dot(d, b_vec) / denom
            if abs(uu) <= 1 + 1e-12 and abs(vv) <= 1 + 1e-12:
                hits += 1
                # same ambient position through this patch
                assert np.linalg.norm(p.position(uu, vv) - d) < 1e-12
        assert hits >= 1


def test_patch_edge_agreement():
    # shared edge of faces +x and +y: cube points (1, 1, z)
    px = SpherePatchChart(1.0, face=0)   # base ex, a=ey, b=ez
    py = SpherePatchChart(1.0, face=2)   # base ey, a=ez, b=ex
    for z in np.linspace(-1, 1, 9):
        pos_x = px.position(1.0, z)
        pos_y = py.position(z, 1.0)
        assert np.linalg.norm(pos_x - pos_y) < 1e-12
        gx = evaluate_geometry(px, 1.0, z)
        gy = evaluate_geometry(py, z, 1.0)
        assert np.linalg.norm(gx.normal - gy.normal) < 1e-10
        assert abs(gx.gauss_curvature - gy.gauss_curvature) < 1e-10
        assert abs(gx.second_form_norm_sq - gy.second_form_norm_sq) < 1e-10


# ------------------------------------------------------------- distances


def test_geodesic_distances():
    sphere = SpherePatchChart(1.0, face=4)
    anti = SpherePatchChart(1.0, face=5)
    assert abs(geodesic_distance(sphere, (0, 0), (0, 0), anti) - math.pi) < 1e-12

    big = SpherePatchChart(2.0, face=4)
    side = SpherePatchChart(2.0, face=0)
    # pole to equator point: quarter turn, distance R*pi/2 = pi
    assert abs(geodesic_distance(big, (0, 0), (0, 0), side) - math.pi) < 1e-12

    cyl = CylinderChart(1.0, 2.0)
    assert abs(geodesic_distance(cyl, (0.5, 0.2), (0.5, 0.5)) - 0.3) < 1e-14
    # wrap-around in the periodic direction
    assert abs(geodesic_distance(cyl, (0.1, 0.0), (2 * math.pi - 0.1, 0.0)) - 0.2) < 1e-12

    with pytest.raises(UnsupportedError):
        geodesic_distance(cyl, (0, 0), (0, 0), sphere)
    with pytest.raises(UnsupportedError):
        geodesic_distance(sphere, (0, 0), (0, 0), SpherePatchChart(2.0, face=4))


# ---------------------------------------------------------------- domain


def test_shell_domain_validation():
    with pytest.raises(DomainError):
        ShellDomain.closed_sphere(1.0, 1.5)
    with pytest.raises(DomainError):
        ShellDomain.cylinder(1.0, 2.0, -0.1)
    with pytest.raises(DomainError):
        ShellDomain((CylinderChart(1.0, 2.0),), 0.1, "closed")
    dom = ShellDomain.plane(1.0, 0.3)
    assert dom.curvature_radius == math.inf
