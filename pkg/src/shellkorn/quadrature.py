"""Gauss-Legendre rules and tensor-product quadrature helpers."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_rule(order):
    """Gauss-Legendre points/weights on (-1, 1) for a given point count."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(int(order))
    return x, w


def interval_rule(a, b, n_cells, order):
    """Composite Gauss rule on [a, b] with ``n_cells`` equal cells.

    Returns flat arrays of points and weights of length ``n_cells * order``.
    """
    x, w = gauss_rule(order)
    edges = np.linspace(a, b, n_cells + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def rectangle_rule(u_bounds, v_bounds, cells, order):
    """Composite tensor-product Gauss rule on a parameter rectangle.

    ``cells`` is ``(n_u, n_v)``. Returns ``(points (N, 2), weights (N,))``.
    """
    nu, nv = cells
    up, uw = interval_rule(u_bounds[0], u_bounds[1], nu, order)
    vp, vw = interval_rule(v_bounds[0], v_bounds[1], nv, order)
    uu, vv = np.meshgrid(up, vp, indexing="ij")
    ww = np.outer(uw, vw)
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    return pts, ww.ravel()
