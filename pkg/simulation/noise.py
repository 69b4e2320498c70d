"""Counter-based noise streams and the joint law of one OU step.

Normals come from numpy's Philox keyed by (seed, stream). Mode k owns the counter
lane [j, 0, k, 0]: step j of mode k consumes exactly one Philox block, turned
into two standard normals by the inverse normal CDF. The draw of (k, j) is
therefore fixed by (seed, stream, k, j) alone and does not depend on the mode
count, the chunking or the order in which blocks are generated.
"""

from typing import Tuple

import numpy as np
from scipy.special import ndtri

_WORDS_PER_BLOCK = 4
_UNIT = 2.0**-53


def block_generator(seed: int, stream: int, block: int) -> np.random.Generator:
    """Generator for time block `block` of the stream keyed by (seed, stream)."""
    key = np.array([seed, stream], dtype=np.uint64)
    counter = np.array([0, 0, 0, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def mode_normals(seed: int, stream: int, mode: int, start: int, steps: int) -> np.ndarray:
    """(steps, 2) standard normals of mode `mode` (0-based) for steps start, ..., start + steps - 1."""
    key = np.array([seed, stream], dtype=np.uint64)
    counter = np.array([start, 0, mode, 0], dtype=np.uint64)
    raw = np.random.Philox(key=key, counter=counter).random_raw(_WORDS_PER_BLOCK * steps)
    words = raw.reshape(steps, _WORDS_PER_BLOCK)[:, :2]
    # 53-bit midpoints keep the uniforms strictly inside (0, 1)
    return ndtri(((words >> np.uint64(11)).astype(float) + 0.5) * _UNIT)


def block_normals(seed: int, stream: int, start: int, steps: int, modes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Two independent (steps, modes) standard normal arrays for steps start.. of modes 0..modes-1.

    Column k of both arrays is `mode_normals(seed, stream, k, start, steps)`, so
    the Brownian part is reproducible without the transition part and vice versa.
    """
    z1 = np.empty((steps, modes))
    z2 = np.empty((steps, modes))
    for k in range(modes):
        pair = mode_normals(seed, stream, k, start, steps)
        z1[:, k] = pair[:, 0]
        z2[:, k] = pair[:, 1]
    return z1, z2


def transition_moments(eigenvalues: np.ndarray, dt: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(decay, v, c) of one exact step of dx = -lambda x dt + dW.

    decay = e^{-lambda dt}; v = Var(int e^{-lambda(dt-s)} dW); c = Cov of that
    integral with the increment dW itself.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    decay = np.exp(-lam * dt)
    v = -np.expm1(-2.0 * lam * dt) / (2.0 * lam)
    c = -np.expm1(-lam * dt) / lam
    return decay, v, c


def transition_covariance(eigenvalue: float, dt: float) -> np.ndarray:
    """2x2 covariance of (xi, dW) for a single mode."""
    _, v, c = transition_moments(np.array([eigenvalue]), dt)
    return np.array([[v[0], c[0]], [c[0], dt]])


def joint_increments(z1: np.ndarray, z2: np.ndarray, v: np.ndarray, c: np.ndarray, dt: float):
    """Brownian increments dW and exact transition noise xi with the right joint law.

    dW = sqrt(dt) z1 and xi = (c / dt) dW + sqrt(v - c^2 / dt) z2.
    """
    dw = np.sqrt(dt) * z1
    residual = np.sqrt(np.maximum(v - c * c / dt, 0.0))
    xi = (c / dt) * dw + residual * z2
    return dw, xi
