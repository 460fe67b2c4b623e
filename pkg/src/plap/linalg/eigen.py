"""Symmetric eigenvalues by cyclic Jacobi rotation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_SYMMETRY_TOL = 1e-9
JACOBI_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order, repeated by multiplicity."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(x) for x in self.eigenvalues)
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __iter__(self) -> Iterator[float]:
        return iter(self.eigenvalues)

    def __getitem__(self, k: int) -> float:
        return self.eigenvalues[k]

    def min(self) -> float:
        return self.eigenvalues[0] if self.eigenvalues else math.inf

    def to_json(self) -> list[float]:
        return list(self.eigenvalues)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigenvalues(s: np.ndarray, rtol: float = JACOBI_RTOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Cyclic Jacobi sweeps until the off-diagonal Frobenius norm is below ``rtol * ||S||_F``.

    Returns the (unsorted) diagonal.  Raises ``RuntimeError`` if ``max_sweeps``
    is exhausted.
    """
    a = np.array(s, dtype=float, copy=True)
    n = a.shape[0]
    if n <= 1:
        return np.diag(a).copy()
    target = rtol * np.linalg.norm(a)
    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            return np.diag(a).copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-300 * max(abs(diff), 1.0):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = diff / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - sn * aq
                a[:, q] = sn * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q, :] = sn * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    off = _off_norm(a)
    if off <= target:
        return np.diag(a).copy()
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")


def symmetric_spectrum(s, tol: float = DEFAULT_SYMMETRY_TOL) -> Spectrum:
    """Ascending eigenvalues of a symmetric float matrix.

    Raises ``ValueError`` if ``max|S - S^T| > tol``.
    """
    a = np.asarray(s, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("spectrum of a non-square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if a.size and np.max(np.abs(a - a.T)) > tol:
        raise ValueError(f"matrix is not symmetric within {tol}")
    a = (a + a.T) / 2.0
    return Spectrum(tuple(sorted(jacobi_eigenvalues(a))))
