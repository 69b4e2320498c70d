"""Composite Gauss-Legendre rules on intervals with interior breakpoints."""

from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np


@lru_cache(maxsize=32)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def composite_gauss_legendre(
    breakpoints: Iterable[float],
    panels_per_piece: int,
    order: int = 16,
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite rule.

    Every interval between consecutive (sorted, deduplicated) breakpoints is split
    into `panels_per_piece` equal panels carrying an `order`-point Gauss rule, so
    a discontinuity placed at a breakpoint never falls inside a panel.
    """
    points = np.unique(np.asarray(list(breakpoints), dtype=float))
    ref_nodes, ref_weights = _reference_rule(order)
    edges = np.concatenate(
        [np.linspace(a, b, panels_per_piece + 1)[:-1] for a, b in zip(points[:-1], points[1:])]
        + [points[-1:]]
    )
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    return nodes, weights
