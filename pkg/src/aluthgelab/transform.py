"""The Aluthge transform and its iteration driver.

For T = U|T| the transform is |T|^(1/2) U |T|^(1/2). Iterating it drives
any matrix toward a normal limit with the same spectrum; the driver here
records per-step statistics (norm, step size, normality defect), detects
convergence by consecutive small steps, and reports stagnation and
iteration-budget exhaustion as outcomes rather than errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, op_norm
from .polar import polar_decompose

__all__ = [
    "aluthge",
    "IterationConfig",
    "StepRecord",
    "IterationTrace",
    "iterate",
]

# Steps without a new running-minimum step_delta before the driver calls
# the run stagnant (only counted while above the step tolerance).
STAGNATION_WINDOW = 1000


def _aluthge_from_parts(parts) -> np.ndarray:
    w = parts.svd_parts.left
    s = parts.svd_parts.singulars
    v = parts.svd_parts.right
    r = parts.rank
    sq = np.sqrt(s)
    # P^(1/2) U P^(1/2) = (V S^(1/2)) (V* W_r) (S_r^(1/2) V_r*)
    left = v * sq[None, :]
    mid = v.conj().T @ w[:, :r]
    right = sq[:r, None] * v[:, :r].conj().T
    return (left @ mid) @ right


def aluthge(t, rank_tol: float | None = None) -> np.ndarray:
    """One application of the transform: |T|^(1/2) U |T|^(1/2).

    U is the canonical partial isometry from ``polar_decompose`` and the
    modulus square roots are taken by functional calculus on the singular
    spectrum, so the whole map costs a single SVD. Satisfies
    ``||result|| <= ||T||``.
    """
    return _aluthge_from_parts(polar_decompose(t, rank_tol))


@dataclass
class IterationConfig:
    """Stopping-rule knobs for ``iterate``.

    Convergence requires ``consecutive_hits`` successive steps with
    ``step_delta <= tol_step * max(1, ||T||)``; a single small step can be
    a plateau, not a limit.
    """

    max_iter: int = 50_000
    tol_step: float = 1e-12
    consecutive_hits: int = 3
    record_full_iterates: bool = False
    rank_tol_override: float | None = None

    def validate(self) -> None:
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol_step <= 0:
            raise ValueError(f"tol_step must be > 0, got {self.tol_step}")
        if self.consecutive_hits < 1:
            raise ValueError(
                f"consecutive_hits must be >= 1, got {self.consecutive_hits}"
            )
        if self.rank_tol_override is not None and self.rank_tol_override < 0:
            raise ValueError(
                f"rank_tol_override must be nonnegative, "
                f"got {self.rank_tol_override}"
            )


@dataclass
class StepRecord:
    """Statistics of one iterate.

    index 0 is the input itself (step_delta is NaN there); index n >= 1 is
    the n-th transform application.
    """

    index: int
    op_norm: float
    step_delta: float
    normality_defect: float


@dataclass
class IterationTrace:
    """Everything ``iterate`` learned about one operator.

    ``converged_at`` is the first step of the terminal small-step streak
    (the reported iteration count for a fixed point is therefore 1, even
    though the driver confirms ``consecutive_hits`` steps before
    stopping). ``borderline_steps`` lists iterations whose polar
    decomposition had a singular value near the rank cut.
    """

    steps: list[StepRecord]
    limit: np.ndarray
    converged: bool
    stop_reason: str  # "step_tolerance" | "max_iter" | "stagnation"
    converged_at: int | None
    rank_tol: float
    borderline_steps: list[int] = field(default_factory=list)
    iterates: list[np.ndarray] | None = None

    @property
    def iterations(self) -> int:
        """Reported iteration count: convergence index, else steps run."""
        if self.converged_at is not None:
            return self.converged_at
        return self.steps[-1].index


def _defect(s: np.ndarray) -> float:
    sh = s.conj().T
    return op_norm(sh @ s - s @ sh)


def iterate(t, cfg: IterationConfig | None = None) -> IterationTrace:
    """Apply the transform repeatedly until the iterates stop moving.

    Stops with reason "step_tolerance" (converged) after
    ``cfg.consecutive_hits`` successive steps of size at most
    ``cfg.tol_step * max(1, ||T||)``; with "stagnation" when the step size
    fails to make a new minimum over ``STAGNATION_WINDOW`` successive
    above-tolerance steps; with "max_iter" when the budget runs out.
    Non-convergence is an outcome, not an error.
    """
    if cfg is None:
        cfg = IterationConfig()
    cfg.validate()
    current = as_matrix(t)
    norm0 = op_norm(current)
    tol = cfg.tol_step * max(1.0, norm0)

    steps = [StepRecord(0, norm0, float("nan"), _defect(current))]
    iterates = [current.copy()] if cfg.record_full_iterates else None
    borderline: list[int] = []
    rank_tol_used = (
        cfg.rank_tol_override
        if cfg.rank_tol_override is not None
        else current.shape[0] * np.finfo(float).eps * norm0
    )

    hits = 0
    first_hit: int | None = None
    best_delta = float("inf")
    since_best = 0
    converged = False
    stop_reason = "max_iter"
    converged_at: int | None = None

    for n in range(1, cfg.max_iter + 1):
        parts = polar_decompose(current, cfg.rank_tol_override)
        nxt = _aluthge_from_parts(parts)
        delta = op_norm(nxt - current)
        steps.append(StepRecord(n, op_norm(nxt), delta, _defect(nxt)))
        if parts.borderline:
            borderline.append(n)
        if iterates is not None:
            iterates.append(nxt.copy())
        current = nxt

        if delta <= tol:
            hits += 1
            if hits == 1:
                first_hit = n
            if hits >= cfg.consecutive_hits:
                converged = True
                stop_reason = "step_tolerance"
                converged_at = first_hit
                break
        else:
            hits = 0
            first_hit = None
            if delta < best_delta:
                best_delta = delta
                since_best = 0
            else:
                since_best += 1
                if since_best >= STAGNATION_WINDOW:
                    stop_reason = "stagnation"
                    break

    return IterationTrace(
        steps=steps,
        limit=current,
        converged=converged,
        stop_reason=stop_reason,
        converged_at=converged_at,
        rank_tol=float(rank_tol_used),
        borderline_steps=borderline,
        iterates=iterates,
    )
