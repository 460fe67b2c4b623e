"""Randomised exact checks of generalised Schur complement identities."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import ExactMatrix
from .ops import is_psd_exact, kernel_basis, pseudoinverse, rank, same_column_space, schur_complement

PROPERTIES = ("cancellation", "schur_kernel", "restriction", "extremal", "basis_independence")


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def random_matrix(rng: random.Random, rows: int, cols: int, **kw) -> ExactMatrix:
    return ExactMatrix([[random_rational(rng, **kw) for _ in range(cols)] for _ in range(rows)], shape=(rows, cols))


def random_invertible(rng: random.Random, n: int) -> ExactMatrix:
    while True:
        m = random_matrix(rng, n, n)
        if rank(m) == n:
            return m


def random_psd(rng: random.Random, n: int, r: int | None = None) -> ExactMatrix:
    """``A A^T`` with A of ``r`` columns, so rank at most ``r``."""
    a = random_matrix(rng, n, rng.randint(0, n) if r is None else r)
    return a @ a.T if a.cols else ExactMatrix.zeros(n, n)


def random_signed_permutation(rng: random.Random, n: int) -> ExactMatrix:
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[i][j] = rng.choice((-1, 1))
    return ExactMatrix(rows, shape=(n, n))


def extend(m: ExactMatrix, n: int) -> ExactMatrix:
    """Zero-pad a k x k matrix to n x n (the extension by zero off the leading block)."""
    return ExactMatrix.block_diag(m, ExactMatrix.zeros(n - m.rows, n - m.rows))


@dataclass
class SchurReport:
    seed: int
    results: dict[str, bool] = field(default_factory=dict)
    sizes: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def to_json(self) -> dict:
        return {"seed": self.seed, "pass": self.ok, "properties": dict(self.results),
                "sizes": {k: list(v) for k, v in self.sizes.items()}}


def check_cancellation(rng: random.Random, max_size: int) -> tuple[bool, tuple]:
    """``E^T R (R^-1 E E^T R)+ R^-1 E = E+ E``."""
    n, m = rng.randint(1, max_size), rng.randint(1, max_size)
    r = random_invertible(rng, n)
    e = random_matrix(rng, n, m)
    r_inv = r.inverse()
    lhs = e.T @ r @ pseudoinverse(r_inv @ e @ e.T @ r) @ r_inv @ e
    mid = e.T @ pseudoinverse(e @ e.T) @ e
    return lhs == mid == pseudoinverse(e) @ e, (n, m)


def check_schur_kernel(rng: random.Random, max_size: int) -> tuple[bool, tuple]:
    """ker Sch(L, W) equals the projection of ker L onto W (W a coordinate subspace, L PSD)."""
    n = rng.randint(1, max_size)
    k = rng.randint(1, n)
    lap = random_psd(rng, n, rng.randint(0, n - 1) if n > 1 else 0)
    sch = schur_complement(lap, n - k)
    projected = kernel_basis(lap)[:k, :]
    return same_column_space(kernel_basis(sch), projected), (n, k)


def check_restriction(rng: random.Random, max_size: int) -> tuple[bool, tuple]:
    """Sch(f f*, W) equals f_W f_W* built from f^-1(W), with random diagonal inner products."""
    from ..oracle import schur_restriction_direct

    m, p = rng.randint(1, max_size), rng.randint(1, max_size)
    k = rng.randint(1, m)
    f = random_matrix(rng, m, p)
    dw = [random_rational(rng, 1, 3) for _ in range(p)]
    cw = [random_rational(rng, 1, 3) for _ in range(m)]
    # f* = W_dom f^T W_cod^-1 for <e_i, e_i> = 1/w_i
    ff = f @ ExactMatrix.diag(dw) @ f.T @ ExactMatrix.diag([1 / w for w in cw])
    w_basis = ExactMatrix.identity(m)[:, :k]
    direct = schur_restriction_direct(f, w_basis, dw, cw).matrix
    return schur_complement(ff, m - k) == direct, (m, p, k)


def check_extremal(rng: random.Random, max_size: int, candidates: int = 4) -> tuple[bool, tuple]:
    """For PSD M with L >= ext(M) the difference Sch(L, W) - M is PSD."""
    n = rng.randint(1, max_size)
    k = rng.randint(1, n)
    lap = random_psd(rng, n)
    sch = schur_complement(lap, n - k)
    ok = True
    for _ in range(candidates):
        m = random_psd(rng, k)
        # shrink until dominated; the zero matrix always is
        for _ in range(12):
            if is_psd_exact(lap - extend(m, n)):
                break
            m = m * Fraction(1, 2)
        else:
            m = ExactMatrix.zeros(k, k)
        ok = ok and is_psd_exact(sch - m)
    # the Schur complement itself is dominated and attains the bound
    ok = ok and is_psd_exact(lap - extend(sch, n))
    return ok, (n, k)


def check_basis_independence(rng: random.Random, max_size: int) -> tuple[bool, tuple]:
    """Block-diagonal changes of basis conjugate the Schur complement by the leading block."""
    n = rng.randint(1, max_size)
    k = rng.randint(1, n)
    lap = random_psd(rng, n)
    sch = schur_complement(lap, n - k)
    ok = True
    for r1, r2 in [
        (random_signed_permutation(rng, k), random_signed_permutation(rng, n - k)),
        (random_invertible(rng, k), random_invertible(rng, n - k)),
    ]:
        t = ExactMatrix.block_diag(r1, r2)
        moved = schur_complement(t.inverse() @ lap @ t, n - k)
        ok = ok and moved == r1.inverse() @ sch @ r1
    return ok, (n, k)


_CHECKS = {
    "cancellation": check_cancellation,
    "schur_kernel": check_schur_kernel,
    "restriction": check_restriction,
    "extremal": check_extremal,
    "basis_independence": check_basis_independence,
}


def verify_schur_properties(seed: int, max_size: int = 6) -> SchurReport:
    """Run every property once on random rational instances drawn from ``seed``."""
    rng = random.Random(seed)
    report = SchurReport(seed)
    for name in PROPERTIES:
        ok, sizes = _CHECKS[name](rng, max_size)
        report.results[name] = bool(ok)
        report.sizes[name] = sizes
    return report
