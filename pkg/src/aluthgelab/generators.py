"""Operator families: shifts, Jordan blocks, diagonal compacts, seeded
random compacts, and finite sections thereof.

Shifts are lower (entry (k+1, k) carries weight k), fixing the orientation
for the weighted-shift transform rule new_weight_k = sqrt(w_k * w_{k+1})
with the truncation edge convention w_N = 0. Shift/diagonal/jordan
families nest exactly: the NxN instantiation is the leading corner of any
larger one, which is what makes finite-section studies meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import as_matrix

__all__ = [
    "weighted_shift",
    "jordan_block",
    "diagonal",
    "random_unitary",
    "random_compact",
    "resolve_rule",
    "OperatorFamily",
    "finite_sections",
]

NESTED_KINDS = {"weighted_shift", "jordan", "diagonal"}


def weighted_shift(weights, dim: int) -> np.ndarray:
    """Lower weighted shift: entry (k+1, k) = weights[k], k = 0..dim-2."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    w = np.asarray(weights, dtype=complex).ravel()
    if w.size < dim - 1:
        raise ValueError(
            f"need at least {dim - 1} weights for dim {dim}, got {w.size}"
        )
    m = np.zeros((dim, dim), dtype=complex)
    if dim > 1:
        m[np.arange(1, dim), np.arange(dim - 1)] = w[: dim - 1]
    return m


def jordan_block(lam: complex, dim: int) -> np.ndarray:
    """Jordan block: lam on the diagonal, ones on the superdiagonal."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    m = np.eye(dim, dtype=complex) * lam
    if dim > 1:
        m[np.arange(dim - 1), np.arange(1, dim)] = 1.0
    return m


def diagonal(entries, dim: int) -> np.ndarray:
    """Diagonal matrix from the first dim entries of a sequence."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    e = np.asarray(entries, dtype=complex).ravel()
    if e.size < dim:
        raise ValueError(f"need at least {dim} entries, got {e.size}")
    return np.diag(e[:dim])


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like random unitary from a seeded complex Gaussian.

    QR-orthonormalization with the R diagonal phase-normalized, which
    makes the draw distribution-correct and reproducible per generator
    state.
    """
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases[None, :]


def random_compact(dim: int, singulars, seed: int) -> np.ndarray:
    """Seeded random matrix with prescribed singular values.

    W diag(s) V* with W, V independent Haar-like unitaries; deterministic
    per seed. The singular values must be nonnegative and non-increasing
    (they model a compact operator's decay).
    """
    s = np.asarray(singulars, dtype=float).ravel()
    if s.size < dim:
        raise ValueError(f"need at least {dim} singular values, got {s.size}")
    s = s[:dim]
    if (s < 0).any():
        raise ValueError("singular values must be nonnegative")
    if (np.diff(s) > 0).any():
        raise ValueError("singular values must be non-increasing")
    rng = np.random.default_rng(seed)
    w = random_unitary(dim, rng)
    v = random_unitary(dim, rng)
    return (w * s[None, :]) @ v.conj().T


def resolve_rule(rule, count: int) -> np.ndarray:
    """Turn a sequence rule into ``count`` concrete values.

    Accepts an explicit sequence, or a dict:
      {"rule": "inverse_power", "power": p, "scale": c} -> c / k^p, k >= 1
      {"rule": "geometric", "ratio": q, "scale": c}     -> c * q^(k-1)
      {"rule": "constant", "value": v}                  -> v, v, ...
    """
    if isinstance(rule, dict):
        name = rule.get("rule")
        if name == "inverse_power":
            p = float(rule.get("power", 1.0))
            c = float(rule.get("scale", 1.0))
            k = np.arange(1, count + 1, dtype=float)
            return c / k**p
        if name == "geometric":
            q = float(rule.get("ratio", 0.5))
            c = float(rule.get("scale", 1.0))
            return c * q ** np.arange(count, dtype=float)
        if name == "constant":
            return np.full(count, float(rule.get("value", 0.0)))
        raise ValueError(f"unknown sequence rule {name!r}")
    vals = np.asarray(rule, dtype=complex).ravel()
    if vals.size < count:
        raise ValueError(f"rule sequence too short: need {count}, got {vals.size}")
    return vals[:count]


@dataclass
class OperatorFamily:
    """A dimension-parametrized operator construction.

    kind is one of weighted_shift | jordan | diagonal | random_compact |
    block_diag | custom_matrix | sum; params hold the kind-specific data.
    Instantiation at dimension N is deterministic given any seed in the
    params. ``nested`` families satisfy the exact-corner property.
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def nested(self) -> bool:
        if self.kind in NESTED_KINDS:
            return True
        if self.kind == "sum":
            return all(t["family"].nested for t in self.params["terms"])
        return False

    def materialize(self, dim: int) -> np.ndarray:
        """Build the NxN matrix of this family."""
        if self.kind == "weighted_shift":
            w = resolve_rule(self.params["weights"], max(dim - 1, 1))
            return weighted_shift(w, dim)
        if self.kind == "jordan":
            return jordan_block(complex(self.params.get("eigenvalue", 0)), dim)
        if self.kind == "diagonal":
            return diagonal(resolve_rule(self.params["entries"], dim), dim)
        if self.kind == "random_compact":
            if "seed" not in self.params:
                raise ValueError("random_compact family requires a seed")
            decay = resolve_rule(self.params["decay"], dim).real
            return random_compact(dim, decay, int(self.params["seed"]))
        if self.kind == "block_diag":
            children = self.params["children"]
            blocks = [c["family"].materialize(int(c["dim"])) for c in children]
            total = sum(b.shape[0] for b in blocks)
            if total != dim:
                raise ValueError(
                    f"block_diag children dims sum to {total}, expected {dim}"
                )
            out = np.zeros((dim, dim), dtype=complex)
            at = 0
            for b in blocks:
                k = b.shape[0]
                out[at : at + k, at : at + k] = b
                at += k
            return out
        if self.kind == "custom_matrix":
            m = as_matrix(self.params["matrix"])
            if m.shape[0] != dim:
                raise ValueError(
                    f"custom matrix has dim {m.shape[0]}, requested {dim}"
                )
            return m
        if self.kind == "sum":
            out = np.zeros((dim, dim), dtype=complex)
            for term in self.params["terms"]:
                out += complex(term.get("coeff", 1.0)) * term["family"].materialize(dim)
            return out
        raise ValueError(f"unknown family kind {self.kind!r}")

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "sum":
            return {
                "kind": "sum",
                "terms": [
                    {"coeff": _num_out(t.get("coeff", 1.0)), "family": t["family"].to_dict()}
                    for t in self.params["terms"]
                ],
            }
        out: dict[str, Any] = {"kind": self.kind}
        for key, val in self.params.items():
            out[key] = _num_out(val)
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "OperatorFamily":
        if not isinstance(data, dict) or "kind" not in data:
            raise ValueError("family descriptor must be an object with a 'kind'")
        kind = data["kind"]
        if kind == "sum":
            terms = [
                {
                    "coeff": _num_in(t.get("coeff", 1.0)),
                    "family": cls.from_dict(t["family"]),
                }
                for t in data.get("terms", [])
            ]
            if not terms:
                raise ValueError("sum family needs at least one term")
            return cls("sum", {"terms": terms})
        params = {k: _num_in(v) for k, v in data.items() if k != "kind"}
        fam = cls(kind, params)
        # fail fast on unknown kinds / missing params
        if kind not in NESTED_KINDS | {"random_compact", "block_diag", "custom_matrix"}:
            raise ValueError(f"unknown family kind {kind!r}")
        return fam


def _num_in(v):
    """JSON-side value to python: [re, im] pairs become complex."""
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(x, (int, float)) for x in v
    ):
        return complex(v[0], v[1])
    return v


def _num_out(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def finite_sections(
    family: OperatorFamily, dims, allow_independent: bool = False
) -> list[np.ndarray]:
    """Instantiate a family at a strictly increasing list of dimensions.

    For nested families the smaller matrices are exact leading corners of
    the larger ones. Non-nested kinds (random_compact and friends) produce
    independent draws, not corners, so they are rejected unless the caller
    opts in.
    """
    dims = [int(d) for d in dims]
    if len(dims) < 1:
        raise ValueError("need at least one dimension")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing, got {dims}")
    if not family.nested and not allow_independent:
        raise ValueError(
            f"family kind {family.kind!r} is not nested: sections would be "
            "independent draws, not corners (pass allow_independent=True "
            "to accept that)"
        )
    return [family.materialize(d) for d in dims]
