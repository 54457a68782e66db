"""Polar decomposition T = U|T| with the canonical partial isometry.

U is built from the SVD as the sum of u_i v_i* over singular values above
the numerical rank cut, so ker(U) = ker(T) -- U is zero on the numerical
kernel rather than extended arbitrarily. Rank determination is the central
numerical hazard here (singular values of compact-operator truncations
decay smoothly), so the cut is user-overridable and borderline singular
values are flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import SvdParts, as_matrix, svd

__all__ = ["PolarParts", "polar_decompose", "unitary_polar_factor"]

# A singular value within this factor of the rank cut marks the
# decomposition as borderline: the transform is not Lipschitz across rank
# changes, so the caller should see it.
BORDERLINE_FACTOR = 10.0


@dataclass
class PolarParts:
    """Parts of T = U|T|.

    isometry is the canonical partial isometry U (zero on ker T), modulus
    is |T| = (T*T)^(1/2), rank is the numerical rank at rank_tol.
    borderline is set when some singular value lies within a factor of
    BORDERLINE_FACTOR of rank_tol. The SVD the parts were built from is
    kept so downstream users (the transform) can take modulus powers
    without refactorizing.
    """

    isometry: np.ndarray
    modulus: np.ndarray
    rank: int
    rank_tol: float
    borderline: bool
    svd_parts: SvdParts


def polar_decompose(t, rank_tol: float | None = None) -> PolarParts:
    """Polar decomposition of a square complex matrix.

    rank_tol defaults to dim * machine_epsilon * ||T||. The zero matrix is
    legal and yields U = 0, |T| = 0, rank 0.
    """
    m = as_matrix(t)
    n = m.shape[0]
    parts = svd(m)
    w, s, v = parts.left, parts.singulars, parts.right
    if rank_tol is None:
        rank_tol = n * np.finfo(float).eps * float(s[0])
    elif rank_tol < 0:
        raise ValueError(f"rank_tol must be nonnegative, got {rank_tol}")
    rank = int(np.sum(s > rank_tol))
    nonzero = s[s > 0]
    borderline = bool(
        rank_tol > 0
        and np.any(
            (nonzero >= rank_tol / BORDERLINE_FACTOR)
            & (nonzero <= rank_tol * BORDERLINE_FACTOR)
        )
    )
    isometry = w[:, :rank] @ v[:, :rank].conj().T
    modulus = (v * s[None, :]) @ v.conj().T
    modulus = (modulus + modulus.conj().T) / 2.0
    return PolarParts(
        isometry=isometry,
        modulus=modulus,
        rank=rank,
        rank_tol=float(rank_tol),
        borderline=borderline,
        svd_parts=parts,
    )


def unitary_polar_factor(parts: PolarParts) -> np.ndarray:
    """Unitary extension of the partial isometry.

    Fills the kernel-to-cokernel directions isometrically (full W V* from
    the SVD). Exists for the invariance check that the transform does not
    depend on U's behavior on ker(T); the canonical partial isometry is
    the default everywhere else.
    """
    return parts.svd_parts.left @ parts.svd_parts.right.conj().T
