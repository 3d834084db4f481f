"""Phase matrices and their contraction (Kraus) decompositions.

A phase matrix is a Hermitian, positive semidefinite complex matrix with
unit diagonal; it parameterizes a covariant phase observable.  The Kraus
side stores the weight matrix (z_{n,k}): column k collects the weights of
the number state |k> across the diagonal contractions V_n, with
sum_n |z_{n,k}|^2 = 1 and sum_n z_{n,k} * conj(z_{n,l}) = c_{k,l}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhaseObsError, ValidationError

TOL_HERM = 1e-12
TOL_DIAG = 1e-12
TOL_PSD_FACTOR = 1e-10  # PSD tolerance is TOL_PSD_FACTOR * S
TOL_KRAUS = 1e-10


def _as_square_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise PhaseObsError("expected a non-empty square matrix")
    if not np.all(np.isfinite(arr)):
        raise PhaseObsError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class ValidationIssue:
    prop: str  # "hermitian" | "diagonal" | "psd"
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    dim: int
    issues: tuple[ValidationIssue, ...]

    @property
    def valid(self) -> bool:
        return not self.issues

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "dim": self.dim,
            "issues": [
                {"property": i.prop, "magnitude": i.magnitude} for i in self.issues
            ],
        }


def validate(
    entries,
    herm_tol: float = TOL_HERM,
    diag_tol: float = TOL_DIAG,
    psd_tol: float | None = None,
) -> ValidationReport:
    """Check hermiticity, unit diagonal, and positive semidefiniteness.

    Each failed property is reported with the worst offending magnitude.
    """
    arr = _as_square_matrix(entries)
    dim = arr.shape[0]
    if psd_tol is None:
        psd_tol = TOL_PSD_FACTOR * dim
    issues = []
    herm_defect = float(np.max(np.abs(arr - arr.conj().T)))
    if herm_defect > herm_tol:
        issues.append(ValidationIssue("hermitian", herm_defect))
    diag_defect = float(np.max(np.abs(np.diag(arr) - 1.0)))
    if diag_defect > diag_tol:
        issues.append(ValidationIssue("diagonal", diag_defect))
    sym = 0.5 * (arr + arr.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig < -psd_tol:
        issues.append(ValidationIssue("psd", -min_eig))
    return ValidationReport(dim=dim, issues=tuple(issues))


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """Hermitian PSD unit-diagonal matrix (c_{n,m}) plus a family label."""

    entries: np.ndarray
    label: str = "explicit"
    q: float | None = None

    def __post_init__(self):
        arr = _as_square_matrix(self.entries).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def canonical(cls, dim: int) -> "PhaseMatrix":
        """All-ones matrix: the sharpest phase observable."""
        if dim < 1:
            raise PhaseObsError("dimension must be >= 1")
        return cls(np.ones((dim, dim), dtype=complex), label="canonical")

    @classmethod
    def trivial(cls, dim: int) -> "PhaseMatrix":
        """Identity matrix: the uniform (phase-blind) observable."""
        if dim < 1:
            raise PhaseObsError("dimension must be >= 1")
        return cls(np.eye(dim, dtype=complex), label="trivial")

    @classmethod
    def exponential(cls, q: float, dim: int) -> "PhaseMatrix":
        """Interpolating family c_{n,m} = q^|n-m|; q=1 is canonical, q=0 trivial.

        PSD because it is the correlation matrix of an AR(1) process.
        """
        if dim < 1:
            raise PhaseObsError("dimension must be >= 1")
        if not 0.0 <= q <= 1.0:
            raise PhaseObsError(f"exponential parameter q={q} outside [0, 1]")
        n = np.arange(dim)
        entries = np.power(float(q), np.abs(np.subtract.outer(n, n)), dtype=float)
        entries = entries.astype(complex)
        entries[np.diag_indices(dim)] = 1.0
        return cls(entries, label="exponential", q=float(q))

    @classmethod
    def from_gram(cls, vectors) -> "PhaseMatrix":
        """Gram matrix of unit vectors: c_{n,m} = <u_n, u_m> (conjugate-linear
        in the first slot).  Valid by construction."""
        mat = np.asarray(vectors, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] < 1:
            raise PhaseObsError("expected a non-empty list of equal-length vectors")
        norms = np.linalg.norm(mat, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise PhaseObsError("Gram construction requires unit vectors")
        entries = mat.conj() @ mat.T
        entries[np.diag_indices(mat.shape[0])] = 1.0
        return cls(entries, label="explicit")

    @classmethod
    def explicit(cls, entries, strict: bool = False) -> "PhaseMatrix":
        """Accept an explicit matrix after validation.

        The diagonal (within 1e-12 of 1) is renormalized to exactly 1 and the
        off-diagonals rescaled accordingly; `strict` rejects any matrix whose
        diagonal is not already exactly 1.
        """
        arr = _as_square_matrix(entries)
        report = validate(arr)
        if not report.valid:
            worst = ", ".join(f"{i.prop} ({i.magnitude:g})" for i in report.issues)
            raise ValidationError(f"not a phase matrix: {worst}")
        diag = np.real(np.diag(arr))
        if strict:
            if np.any(diag != 1.0):
                raise ValidationError("strict mode requires an exactly unit diagonal")
            fixed = arr.copy()
        else:
            scale = 1.0 / np.sqrt(diag)
            fixed = arr * np.outer(scale, scale)
        fixed[np.diag_indices(arr.shape[0])] = 1.0
        return cls(fixed, label="explicit")

    def to_dict(self) -> dict:
        data: dict = {"kind": self.label, "dim": self.dim}
        if self.label == "exponential":
            data["q"] = self.q
        if self.label == "explicit":
            data["entries"] = [
                [[z.real, z.imag] for z in row] for row in self.entries
            ]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseMatrix":
        kind = data.get("kind")
        if kind == "canonical":
            return cls.canonical(int(data["dim"]))
        if kind == "trivial":
            return cls.trivial(int(data["dim"]))
        if kind == "exponential":
            return cls.exponential(float(data["q"]), int(data["dim"]))
        if kind == "explicit":
            entries = np.array(
                [[complex(re, im) for re, im in row] for row in data["entries"]]
            )
            return cls.explicit(entries)
        raise PhaseObsError(f"unknown matrix kind {kind!r}")

    def truncated(self, dim: int) -> "PhaseMatrix":
        """Top-left principal submatrix (still a phase matrix)."""
        if not 1 <= dim <= self.dim:
            raise PhaseObsError(f"truncation {dim} outside [1, {self.dim}]")
        if dim == self.dim:
            return self
        return PhaseMatrix(self.entries[:dim, :dim], label=self.label, q=self.q)


@dataclass(frozen=True, eq=False)
class KrausFamily:
    """Weight matrix (z_{n,k}) of the diagonal contractions V_n, one row per
    retained contraction; columns are unit norm."""

    z: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.z, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise PhaseObsError("weight matrix must be 2-D and non-empty")
        if not np.all(np.isfinite(arr)):
            raise PhaseObsError("weights must be finite")
        col_norms = np.linalg.norm(arr, axis=0)
        worst = float(np.max(np.abs(col_norms - 1.0)))
        if worst > TOL_KRAUS:
            raise ValidationError(
                f"column norm deviates from 1 by {worst:g} (tolerance {TOL_KRAUS})"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "z", arr)

    @property
    def rank(self) -> int:
        return self.z.shape[0]

    @property
    def dim(self) -> int:
        return self.z.shape[1]

    def to_dict(self) -> dict:
        return {"rows": [[[z.real, z.imag] for z in row] for row in self.z]}

    @classmethod
    def from_dict(cls, data: dict) -> "KrausFamily":
        return cls(
            np.array([[complex(re, im) for re, im in row] for row in data["rows"]])
        )


def _fix_vector_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate so the first significant component is real positive."""
    mags = np.abs(vec)
    peak = float(mags.max())
    if peak == 0.0:
        return vec
    idx = int(np.argmax(mags > 1e-8 * peak))
    pivot = vec[idx]
    return vec * (pivot.conjugate() / abs(pivot))


def _row_sort_key(row: np.ndarray):
    return tuple(x for z in row for x in (z.real, z.imag))


def kraus_decompose(matrix: PhaseMatrix) -> KrausFamily:
    """Factor c_{k,l} = sum_n z_{n,k} * conj(z_{n,l}) via Hermitian
    eigendecomposition, clipping eigenvalues within the PSD tolerance of
    zero and dropping the resulting zero rows.

    Rows are ordered by descending eigenvalue; each eigenvector's phase is
    fixed (first significant component real positive) and exact eigenvalue
    ties are broken lexicographically, so the output is deterministic.
    """
    dim = matrix.dim
    tol = TOL_PSD_FACTOR * dim
    evals, evecs = np.linalg.eigh(matrix.entries)
    if evals[0] < -tol:
        raise ValidationError(
            f"matrix is not PSD: min eigenvalue {evals[0]:g} below -{tol:g}"
        )
    rows = []
    for lam, vec in zip(evals, evecs.T):
        if lam <= tol:
            continue
        rows.append((float(lam), np.sqrt(lam) * _fix_vector_phase(vec)))
    if not rows:
        raise ValidationError("matrix has no eigenvalue above the clipping tolerance")
    rows.sort(key=lambda item: (-item[0], _row_sort_key(item[1])))
    return KrausFamily(np.array([row for _, row in rows]))


def kraus_reconstruct(family: KrausFamily) -> PhaseMatrix:
    """Rebuild the phase matrix: c_{k,l} = sum_n z_{n,k} * conj(z_{n,l})."""
    entries = family.z.T @ family.z.conj()
    return PhaseMatrix.explicit(entries)
