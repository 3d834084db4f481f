import math

import numpy as np

from phaseobs import HardyState, PhaseMatrix, PhaseWindow

TWO_PI = 2.0 * math.pi


def random_state(rng, dim, band_limit=None):
    """Random unit state; optionally band-limited to indices <= band_limit."""
    head = dim if band_limit is None else band_limit + 1
    raw = rng.standard_normal(head) + 1j * rng.standard_normal(head)
    vec = np.zeros(dim, dtype=complex)
    vec[:head] = raw / np.linalg.norm(raw)
    return HardyState(vec)


def random_gram_matrix(rng, dim, ambient=None):
    """Random phase matrix as the Gram matrix of unit vectors.

    The ambient dimension defaults to 2*dim so the Gram matrix stays well
    conditioned (no accidental near-zero eigenvalues).
    """
    amb = ambient or 2 * dim
    vecs = rng.standard_normal((dim, amb)) + 1j * rng.standard_normal((dim, amb))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return PhaseMatrix.from_gram(vecs)


def random_window(rng, max_arcs=3):
    count = int(rng.integers(1, max_arcs + 1))
    pts = np.sort(rng.random(2 * count) * TWO_PI)
    arcs = tuple(
        (float(pts[2 * i]), float(pts[2 * i + 1]))
        for i in range(count)
        if pts[2 * i] < pts[2 * i + 1]
    )
    if not arcs:
        arcs = ((0.0, math.pi),)
    return PhaseWindow(arcs)


def eig2(a, b):
    """Eigenvalues of [[a, b], [conj(b), a]]: independent 2x2 oracle."""
    return a - abs(b), a + abs(b)
