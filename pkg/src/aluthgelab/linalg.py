"""Dense complex linear-algebra primitives.

Everything downstream (polar decomposition, the transform iteration, the
spectral analyses) is built on the five operations here. All of them work
on square complex matrices, validate their inputs, and satisfy explicit
residual contracts checked in the test suite:

* ``hermitian_eig`` -- reconstruction and unitarity residuals bounded by
  ``1e-12 * max(1, ||A||)``,
* ``svd``           -- same reconstruction bound, singular values sorted
  descending,
* ``psd_power``     -- functional calculus ``A^p`` on PSD matrices with the
  convention ``0^p = 0``,
* ``op_norm``       -- largest singular value,
* ``eigenvalues``   -- full multiset of eigenvalues, solver failures are
  reported, never silenced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianEig",
    "SvdParts",
    "as_matrix",
    "op_norm",
    "hermitian_eig",
    "svd",
    "psd_power",
    "eigenvalues",
]

# Relative threshold below which a negative eigenvalue of a nominally PSD
# matrix is treated as rounding noise and clamped to zero.
PSD_CLAMP = 1e-10

# Hermitian inputs may deviate from A = A* by at most this (relative) much
# before hermitian_eig refuses to symmetrize silently.
HERMITIAN_TOL = 1e-8


def as_matrix(a) -> np.ndarray:
    """Validate and convert input to a square complex128 matrix.

    Raises ValueError for non-square shapes and non-finite entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def op_norm(a) -> float:
    """Operator (spectral) norm: the largest singular value of ``a``."""
    m = as_matrix(a)
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[0])


@dataclass
class HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvector columns are orthonormal,
    so ``A = V diag(w) V*``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class SvdParts:
    """Singular value decomposition ``A = left diag(s) right*``.

    ``singulars`` is real, descending, nonnegative; ``left`` and ``right``
    are unitary.
    """

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


def hermitian_eig(a, sym_tol: float | None = None) -> HermitianEig:
    """Eigendecomposition of a (numerically) Hermitian matrix.

    The input is symmetrized to (A + A*)/2 before factorization, but only
    if it is Hermitian to within ``sym_tol`` (default
    ``HERMITIAN_TOL * max(1, ||A||)``); a wildly non-Hermitian input is an
    error, not something to silently average away.
    """
    m = as_matrix(a)
    scale = max(1.0, op_norm(m))
    if sym_tol is None:
        sym_tol = HERMITIAN_TOL * scale
    herm_defect = op_norm(m - m.conj().T)
    if herm_defect > sym_tol:
        raise ValueError(
            f"input is not Hermitian: ||A - A*|| = {herm_defect:.3e} "
            f"exceeds tolerance {sym_tol:.3e}"
        )
    sym = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(sym)
    return HermitianEig(eigenvalues=w, eigenvectors=v)


def svd(a) -> SvdParts:
    """Full SVD of a square complex matrix, ``A = left diag(s) right*``."""
    m = as_matrix(a)
    u, s, vh = np.linalg.svd(m)
    return SvdParts(left=u, singulars=s, right=vh.conj().T)


def psd_power(a, p: float) -> np.ndarray:
    """Fractional power ``A^p`` of a Hermitian PSD matrix, ``p > 0``.

    Computed by functional calculus on the eigendecomposition with the
    convention ``0^p = 0``, so singular PSD matrices are fine. Eigenvalues
    in ``[-PSD_CLAMP * ||A||, 0)`` are treated as rounding noise and
    clamped to zero; anything more negative raises ValueError.
    """
    if p <= 0:
        raise ValueError(f"power must be positive, got {p}")
    eig = hermitian_eig(a)
    w, v = eig.eigenvalues, eig.eigenvectors
    scale = float(np.abs(w).max()) if w.size else 0.0
    floor = -PSD_CLAMP * max(scale, 0.0)
    if (w < floor).any():
        worst = float(w.min())
        raise ValueError(
            f"matrix is not PSD: eigenvalue {worst:.6e} below clamp "
            f"threshold {floor:.6e}"
        )
    w = np.where(w > 0.0, w, 0.0)
    powered = np.where(w > 0.0, w**p, 0.0)
    out = (v * powered[None, :]) @ v.conj().T
    # construction is Hermitian up to rounding; make it exact
    return (out + out.conj().T) / 2.0


def eigenvalues(a) -> np.ndarray:
    """All eigenvalues of ``a`` with algebraic multiplicity.

    A QR-iteration failure inside LAPACK is re-raised with context rather
    than passed through as a bare LinAlgError.
    """
    m = as_matrix(a)
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise np.linalg.LinAlgError(
            f"eigenvalue iteration failed for {m.shape[0]}x{m.shape[0]} "
            f"matrix: {exc}"
        ) from exc
