"""Phase probability densities, window probabilities, kernels, and sampling.

The density of a pair of states under a phase matrix (c_{n,m}) is

    f(theta) = sum_{n,m} c_{n,m} exp(i (n - m) theta) conj(a_n) b_m

and the probability of a phase window X is the same double sum with the
exponential replaced by the closed-form Fourier window integral
(1/2pi) int_X exp(i k theta) dtheta.  Closed forms are used on every
production path; quadrature appears only in test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhaseObsError, ValidationError
from .hardy import TWO_PI, HardyState, PhaseWindow, phase_shift, superpose, window_shift
from .observable import PhaseMatrix

# Imaginary residue / probability-bound tolerance: larger deviations signal
# an invalid matrix and raise instead of being clamped away.
TOL_PROB = 1e-10


def _aligned(matrix: PhaseMatrix, state: HardyState) -> np.ndarray:
    if state.dim > matrix.dim:
        raise PhaseObsError(
            f"state dimension {state.dim} exceeds matrix dimension {matrix.dim}"
        )
    return state.padded(matrix.dim).coeffs


def fourier_window_integral(k: int, window: PhaseWindow) -> complex:
    """(1/2pi) int_X exp(i k theta) dtheta, summed in closed form per arc."""
    total = 0.0 + 0.0j
    for lo, hi in window.arcs:
        if k == 0:
            total += (hi - lo) / TWO_PI
        else:
            total += (np.exp(1j * k * hi) - np.exp(1j * k * lo)) / (TWO_PI * 1j * k)
    return complex(total)


def _window_integrals(dim: int, window: PhaseWindow) -> np.ndarray:
    """Integrals for k = 0..dim-1; negative k follow by conjugation."""
    if window.is_full_circle():
        vals = np.zeros(dim, dtype=complex)
        vals[0] = 1.0
        return vals
    return np.array([fourier_window_integral(k, window) for k in range(dim)])


def density(
    matrix: PhaseMatrix,
    psi: HardyState,
    phi: HardyState | None = None,
    theta: float = 0.0,
) -> complex:
    """f_{psi,phi}(theta) as the direct double sum (reference semantics)."""
    a = _aligned(matrix, psi)
    b = a if phi is None or phi is psi else _aligned(matrix, phi)
    n = np.arange(matrix.dim)
    phases = np.exp(1j * np.subtract.outer(n, n) * float(theta))
    return complex(np.sum(matrix.entries * phases * np.outer(a.conj(), b)))


def _diagonal_weights(matrix: PhaseMatrix, psi: HardyState) -> np.ndarray:
    """w_k = sum_{n-m=k} c_{n,m} conj(a_n) a_m for k = -(S-1)..(S-1),
    so that f(theta) = sum_k w_k exp(i k theta)."""
    a = _aligned(matrix, psi)
    prod = matrix.entries * np.outer(a.conj(), a)
    dim = matrix.dim
    return np.array([prod.diagonal(-k).sum() for k in range(-dim + 1, dim)])


def density_grid(matrix: PhaseMatrix, psi: HardyState, grid_size: int) -> np.ndarray:
    """Real density values at theta_j = 2*pi*j/G via an FFT rearrangement.

    Requires G >= 2S - 1 so every Fourier mode lands in a distinct bin.
    """
    dim = matrix.dim
    if grid_size < max(2, 2 * dim - 1):
        raise PhaseObsError(f"grid size {grid_size} too small for dimension {dim}")
    w = _diagonal_weights(matrix, psi)
    spectrum = np.zeros(grid_size, dtype=complex)
    for k, wk in zip(range(-dim + 1, dim), w):
        spectrum[k % grid_size] += wk
    values = grid_size * np.fft.ifft(spectrum)
    worst_imag = float(np.max(np.abs(values.imag)))
    if worst_imag > TOL_PROB:
        raise ValidationError(f"density has imaginary residue {worst_imag:g}")
    return values.real


def window_probability(
    matrix: PhaseMatrix, psi: HardyState, window: PhaseWindow
) -> float:
    """(1/2pi) int_X f_{psi,psi}; imaginary residue below tolerance is
    discarded and values are clamped to [0, 1] only within tolerance."""
    a = _aligned(matrix, psi)
    dim = matrix.dim
    pos = _window_integrals(dim, window)
    integrals = np.empty((dim, dim), dtype=complex)
    for n in range(dim):
        for m in range(dim):
            k = n - m
            integrals[n, m] = pos[k] if k >= 0 else pos[-k].conjugate()
    value = complex(np.sum(matrix.entries * integrals * np.outer(a.conj(), a)))
    if abs(value.imag) > TOL_PROB:
        raise ValidationError(
            f"window probability has imaginary residue {abs(value.imag):g}"
        )
    p = value.real
    if p < -TOL_PROB or p > 1.0 + TOL_PROB:
        raise ValidationError(f"window probability {p} escapes [0, 1]")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True, eq=False)
class WindowOperator:
    """Truncated POM effect E(X): Hermitian with spectrum in [0, 1]."""

    entries: np.ndarray
    window: PhaseWindow
    source: str

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def expectation(self, psi: HardyState) -> float:
        a = psi.padded(self.dim).coeffs
        return float(np.real(a.conj() @ self.entries @ a))


def window_operator(
    matrix: PhaseMatrix, window: PhaseWindow, dim: int | None = None
) -> WindowOperator:
    """entries[n][m] = c_{n,m} * (1/2pi) int_X exp(i (n-m) theta) dtheta.

    `dim` selects a top-left truncation of the matrix (default: full size).
    The full circle yields the identity exactly.
    """
    mat = matrix if dim is None else matrix.truncated(dim)
    size = mat.dim
    pos = _window_integrals(size, window)
    # entry (n, m) uses k = n - m; negative k by conjugate symmetry of pos.
    entries = np.empty((size, size), dtype=complex)
    for n in range(size):
        entries[n, n] = mat.entries[n, n] * pos[0]
        for m in range(n + 1, size):
            entries[n, m] = mat.entries[n, m] * pos[m - n].conjugate()
            entries[m, n] = mat.entries[m, n] * pos[m - n]
    return WindowOperator(entries=entries, window=window, source=mat.label)


def check_interference(
    matrix: PhaseMatrix,
    psi: HardyState,
    phi: HardyState,
    c1: complex,
    c2: complex,
    theta: float,
) -> float:
    """Residual of the sesquilinear expansion of f at a normalized
    superposition c1*psi + c2*phi; zero for a genuine phase observable."""
    combined = superpose(c1, psi, c2, phi)
    lhs = density(matrix, combined, combined, theta)
    rhs = (
        abs(c1) ** 2 * density(matrix, psi, psi, theta)
        + abs(c2) ** 2 * density(matrix, phi, phi, theta)
        + np.conj(c1) * c2 * density(matrix, psi, phi, theta)
        + c1 * np.conj(c2) * density(matrix, phi, psi, theta)
    )
    return abs(lhs - rhs)


def check_covariance(
    matrix: PhaseMatrix, psi: HardyState, alpha: float, window: PhaseWindow
) -> float:
    """Residual of phase-shift covariance: shifting the state equals
    shifting the window."""
    lhs = window_probability(matrix, phase_shift(psi, alpha), window)
    rhs = window_probability(matrix, psi, window_shift(window, alpha))
    return abs(lhs - rhs)


def kernel_C(matrix: PhaseMatrix, s: int, x: float, y: float) -> complex:
    """Partial-sum kernel sum_{n,m<=s} exp(-i n x) c_{n,m} exp(i m y)."""
    if not 0 <= s < matrix.dim:
        raise PhaseObsError(f"kernel order {s} outside [0, {matrix.dim})")
    n = np.arange(s + 1)
    left = np.exp(-1j * n * float(x))
    right = np.exp(1j * n * float(y))
    return complex(left @ matrix.entries[: s + 1, : s + 1] @ right)


def kernel_apply(
    matrix: PhaseMatrix,
    s: int,
    psi: HardyState,
    theta: float,
    grid_size: int = 4096,
) -> float:
    """Kernel sandwich (1/2pi)^2 double integral of
    conj(psi(x)) C_s(x - theta, y - theta) psi(y) by the periodic
    trapezoid rule on a G x G grid (computed separably).

    Requires psi band-limited to indices <= s; then the result matches the
    density at theta once G exceeds the band limit.
    """
    if not 0 <= s < matrix.dim:
        raise PhaseObsError(f"kernel order {s} outside [0, {matrix.dim})")
    a = psi.coeffs
    if a.size > s + 1 and np.any(a[s + 1 :] != 0):
        raise PhaseObsError(f"state is not band-limited to index {s}")
    if grid_size < 2:
        raise PhaseObsError("grid size must be >= 2")
    xs = TWO_PI * np.arange(grid_size) / grid_size
    n = np.arange(s + 1)
    samples = np.exp(-1j * np.outer(xs, np.arange(a.size))) @ a  # psi on grid
    modes = np.exp(-1j * np.outer(n, xs - float(theta)))
    left = modes @ samples.conj() / grid_size
    right = (modes.conj() @ samples) / grid_size
    value = complex(left @ matrix.entries[: s + 1, : s + 1] @ right)
    if abs(value.imag) > 1e-8:
        raise ValidationError(f"kernel sandwich has imaginary residue {value.imag:g}")
    return value.real


def exact_cdf(matrix: PhaseMatrix, psi: HardyState, theta: float) -> float:
    """Probability of [0, theta); theta = 2*pi closes the full circle."""
    if not 0.0 <= theta <= TWO_PI:
        raise PhaseObsError(f"theta {theta} outside [0, 2*pi]")
    if theta == 0.0:
        return 0.0
    if theta == TWO_PI:
        window = PhaseWindow.full_circle()
    else:
        window = PhaseWindow(((0.0, float(theta)),))
    return window_probability(matrix, psi, window)


def _cdf_vectorized(weights: np.ndarray, dim: int, thetas: np.ndarray) -> np.ndarray:
    ks = np.arange(-dim + 1, dim)
    nz = ks != 0
    w0 = weights[~nz][0].real
    values = w0 * thetas / TWO_PI
    phases = np.exp(1j * np.outer(ks[nz], thetas))
    coeffs = weights[nz] / (TWO_PI * 1j * ks[nz])
    values = values + np.real(coeffs @ (phases - 1.0))
    return values


def sample(
    matrix: PhaseMatrix, psi: HardyState, count: int, seed: int
) -> np.ndarray:
    """Inverse-CDF sampling of phase outcomes in [0, 2*pi).

    Bisection (never Newton: the density may vanish) narrows each bracket
    below 1e-10; the generator is private to the call, so a fixed seed is
    fully deterministic.
    """
    if count < 0:
        raise PhaseObsError("sample count must be non-negative")
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    weights = _diagonal_weights(matrix, psi)
    dim = matrix.dim
    lo = np.zeros(count)
    hi = np.full(count, TWO_PI)
    while float(np.max(hi - lo, initial=0.0)) > 1e-10:
        mid = 0.5 * (lo + hi)
        below = _cdf_vectorized(weights, dim, mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)
