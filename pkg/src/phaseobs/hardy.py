"""Truncated Hardy-space states and phase windows.

A state holds the Fourier coefficients (a_0, ..., a_{S-1}) of the phase
wave function psi(theta) = sum_n a_n exp(-i n theta), normalized so that
sum |a_n|^2 = 1.  A window is a finite union of disjoint half-open arcs
inside [0, 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhaseObsError, ValidationError

TWO_PI = 2.0 * math.pi

# Unit-norm tolerance; double precision leaves ample headroom up to S = 4096.
TOL_NORM = 1e-12


def canonical_angle(alpha: float) -> float:
    """Reduce an angle to [0, 2*pi) by exact floating-point remainder."""
    alpha = math.fmod(alpha, TWO_PI)
    if alpha < 0.0:
        alpha += TWO_PI
    return alpha


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1 or arr.size < 1:
        raise PhaseObsError("coefficients must form a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise PhaseObsError("coefficients must be finite")
    return arr


def _pair_list(values, what: str) -> list[tuple[float, float]]:
    pairs = []
    for item in values:
        pair = tuple(float(x) for x in item)
        if len(pair) != 2 or not all(math.isfinite(x) for x in pair):
            raise PhaseObsError(f"{what} entries must be finite [lo, hi] pairs")
        pairs.append(pair)
    return pairs


@dataclass(frozen=True, eq=False)
class HardyState:
    """Unit vector of the truncated Hardy space, stored as Fourier coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_complex_vector(self.coeffs).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > TOL_NORM:
            raise ValidationError(
                f"state norm {norm} deviates from 1 beyond {TOL_NORM}"
            )

    @property
    def dim(self) -> int:
        return self.coeffs.size

    @classmethod
    def basis(cls, n: int, dim: int) -> "HardyState":
        """Number state eta_n at truncation `dim` (coefficient a_n = 1)."""
        if not 0 <= n < dim:
            raise PhaseObsError(f"basis index {n} outside [0, {dim})")
        c = np.zeros(dim, dtype=complex)
        c[n] = 1.0
        return cls(c)

    def padded(self, dim: int) -> "HardyState":
        """Zero-pad to a larger truncation (identity if already that size)."""
        if dim < self.dim:
            raise PhaseObsError("cannot pad to a smaller dimension")
        if dim == self.dim:
            return self
        c = np.zeros(dim, dtype=complex)
        c[: self.dim] = self.coeffs
        return HardyState(c)

    def to_dict(self) -> dict:
        return {"coeffs": [[z.real, z.imag] for z in self.coeffs]}

    @classmethod
    def from_dict(cls, data: dict) -> "HardyState":
        pairs = _pair_list(data["coeffs"], "coeffs")
        return cls(np.array([complex(re, im) for re, im in pairs]))


def normalize(raw) -> HardyState:
    """Scale a raw coefficient vector to unit norm."""
    arr = _as_complex_vector(raw)
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise PhaseObsError("cannot normalize the zero vector")
    return HardyState(arr / norm)


def phase_shift(psi: HardyState, alpha: float) -> HardyState:
    """Shift the phase: new wave function is theta -> psi(theta + alpha).

    Multiplies a_n by exp(-i n alpha); the norm is preserved exactly.
    """
    alpha = canonical_angle(alpha)
    if alpha == 0.0:
        return psi
    n = np.arange(psi.dim)
    return HardyState(psi.coeffs * np.exp(-1j * n * alpha))


def evaluate(psi: HardyState, theta):
    """Evaluate psi(theta) = sum_n a_n exp(-i n theta); theta may be an array."""
    theta_arr = np.asarray(theta, dtype=float)
    n = np.arange(psi.dim)
    values = np.exp(-1j * np.multiply.outer(theta_arr, n)) @ psi.coeffs
    if np.isscalar(theta) or theta_arr.ndim == 0:
        return complex(values)
    return values


def superpose(
    c1: complex,
    psi: HardyState,
    c2: complex,
    phi: HardyState,
    renormalize: bool = False,
) -> HardyState:
    """Coefficient-wise c1*psi + c2*phi; smaller state is zero-padded.

    In strict mode (default) the result must already be a unit vector.
    """
    dim = max(psi.dim, phi.dim)
    vec = c1 * psi.padded(dim).coeffs + c2 * phi.padded(dim).coeffs
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise PhaseObsError("superposition collapsed to the zero vector")
    if renormalize:
        return HardyState(vec / norm)
    if abs(norm - 1.0) > TOL_NORM:
        raise ValidationError(
            f"superposition norm {norm} deviates from 1 beyond {TOL_NORM}"
        )
    return HardyState(vec)


@dataclass(frozen=True)
class PhaseWindow:
    """Finite union of disjoint half-open arcs [lo, hi) within [0, 2*pi)."""

    arcs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        arcs = tuple(
            (float(lo), float(hi)) for lo, hi in _pair_list(self.arcs, "arcs")
        )
        prev_hi = 0.0
        for lo, hi in arcs:
            if not (0.0 <= lo < hi <= TWO_PI):
                raise PhaseObsError(f"arc ({lo}, {hi}) outside 0 <= lo < hi <= 2*pi")
            if lo < prev_hi:
                raise PhaseObsError("arcs must be sorted by lo and pairwise disjoint")
            prev_hi = hi
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def full_circle(cls) -> "PhaseWindow":
        return cls(((0.0, TWO_PI),))

    @property
    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.arcs)

    def is_full_circle(self) -> bool:
        """True when the arcs tile all of [0, 2*pi) with no gaps."""
        return not self.complement().arcs and bool(self.arcs)

    def shifted(self, alpha: float) -> "PhaseWindow":
        """Translate every arc by alpha mod 2*pi, re-splitting wrapped arcs."""
        alpha = canonical_angle(alpha)
        if alpha == 0.0:
            return self
        pieces = []
        for lo, hi in self.arcs:
            lo2, hi2 = lo + alpha, hi + alpha
            if lo2 >= TWO_PI:
                pieces.append((lo2 - TWO_PI, hi2 - TWO_PI))
            elif hi2 > TWO_PI:
                pieces.append((lo2, TWO_PI))
                if hi2 - TWO_PI > 0.0:
                    pieces.append((0.0, hi2 - TWO_PI))
            else:
                pieces.append((lo2, hi2))
        pieces.sort()
        return PhaseWindow(tuple(pieces))

    def complement(self) -> "PhaseWindow":
        gaps = []
        cursor = 0.0
        for lo, hi in self.arcs:
            if lo > cursor:
                gaps.append((cursor, lo))
            cursor = hi
        if cursor < TWO_PI:
            gaps.append((cursor, TWO_PI))
        return PhaseWindow(tuple(gaps))

    def to_dict(self) -> dict:
        return {"arcs": [[lo, hi] for lo, hi in self.arcs]}

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseWindow":
        return cls(tuple(_pair_list(data["arcs"], "arcs")))


def window_measure(window: PhaseWindow) -> float:
    return window.measure


def window_shift(window: PhaseWindow, alpha: float) -> PhaseWindow:
    return window.shifted(alpha)


def window_complement(window: PhaseWindow) -> PhaseWindow:
    return window.complement()
