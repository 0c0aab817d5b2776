"""Mixed Hessians, real Hessians, their congruence, and exact determinants.

The mixed Hessian of P is the 2n x 2n matrix of second Wirtinger derivatives
in the block order (z_1..z_n, zbar_1..zbar_n).  The real Hessians of Re P and
Im P live over the real variables (x_1..x_n, y_1..y_n); the two sides are tied
together by the constant change-of-basis matrix T (entries 0, 1, +-i) coming
from z = x + iy, which congruence_witness constructs and verifies exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mixedpoly import (
    GR_I,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    MixedPolynomial,
    RealPoly,
    RealPolyPair,
    realize,
)

DET_SIZE_LIMIT = 6


class PolyMatrix:
    """Rectangular matrix of mixed polynomials sharing one variable count."""

    __slots__ = ("rows", "cols", "n", "entries")

    def __init__(self, entries: list[list[MixedPolynomial]]):
        if not entries or not entries[0]:
            raise ValueError("empty matrix")
        self.rows = len(entries)
        self.cols = len(entries[0])
        self.n = entries[0][0].n
        for row in entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.n != self.n:
                    raise ValueError("entries disagree on variable count")
        self.entries = entries

    @classmethod
    def from_scalars(cls, n: int, values: list[list]) -> "PolyMatrix":
        return cls([[MixedPolynomial.constant(n, v) for v in row] for row in values])

    def __getitem__(self, idx: tuple[int, int]) -> MixedPolynomial:
        return self.entries[idx[0]][idx[1]]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[r][c] for r in range(self.rows)] for c in range(self.cols)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for r in range(self.rows):
            row = []
            for c in range(other.cols):
                acc = MixedPolynomial.zero(self.n)
                for k in range(self.cols):
                    acc = acc + self.entries[r][k] * other.entries[k][c]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [
                [self.entries[r][c] - other.entries[r][c] for c in range(self.cols)]
                for r in range(self.rows)
            ]
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[r][c] == other.entries[r][c]
                for r in range(self.rows)
                for c in range(self.cols)
            )
        )

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[r][c] == self.entries[c][r]
            for r in range(self.rows)
            for c in range(r + 1, self.cols)
        )

    def evaluate(self, w) -> np.ndarray:
        """Numeric complex matrix at the point w."""
        return np.array(
            [[e.evaluate(w) for e in row] for row in self.entries], dtype=np.complex128
        )

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]


def mixed_hessian(poly: MixedPolynomial) -> PolyMatrix:
    """2n x 2n matrix of second Wirtinger derivatives, (z, zbar) block order."""
    n = poly.n
    firsts = [poly.wirtinger(j) for j in range(n)] + [
        poly.wirtinger(j, barred=True) for j in range(n)
    ]

    def second(du: MixedPolynomial, k: int) -> MixedPolynomial:
        return du.wirtinger(k) if k < n else du.wirtinger(k - n, barred=True)

    return PolyMatrix([[second(firsts[r], c) for c in range(2 * n)] for r in range(2 * n)])


def real_hessian(poly: MixedPolynomial, part: str) -> list[list[RealPoly]]:
    """Hessian of Re P or Im P over (x_1..x_n, y_1..y_n); part is 're' or 'im'."""
    pair = realize(poly)
    if part == "re":
        f = pair.re_part
    elif part == "im":
        f = pair.im_part
    else:
        raise ValueError("part must be 're' or 'im'")
    m = 2 * poly.n
    grads = [f.diff(a) for a in range(m)]
    return [[grads[a].diff(b) for b in range(m)] for a in range(m)]


def eval_real_matrix(entries: list[list[RealPoly]], xy) -> np.ndarray:
    return np.array([[e.evaluate(xy) for e in row] for row in entries], dtype=float)


def xy_coords(w) -> list[float]:
    """Real coordinates (x_1..x_n, y_1..y_n) of a complex point."""
    return [complex(z).real for z in w] + [complex(z).imag for z in w]


def basis_change_matrix(n: int) -> PolyMatrix:
    """T with T[c][a] = du_c/dv_a for u = (z, zbar), v = (x, y); entries 0,1,+-i."""
    rows = []
    for c in range(2 * n):
        row = [MixedPolynomial.constant(n, GR_ZERO) for _ in range(2 * n)]
        j = c if c < n else c - n
        row[j] = MixedPolynomial.constant(n, GR_ONE)
        row[n + j] = MixedPolynomial.constant(n, GR_I if c < n else -GR_I)
        rows.append(row)
    return PolyMatrix(rows)


@dataclass
class CongruenceReport:
    """Exact witness for H_R(Re P) + i H_R(Im P) = T^t H(P) T."""

    holds: bool
    basis_change: PolyMatrix
    defects: list[list[MixedPolynomial]]

    def max_defect_terms(self) -> int:
        return max(len(d.terms) for row in self.defects for d in row)


def congruence_witness(poly: MixedPolynomial) -> CongruenceReport:
    """Verify the real/mixed Hessian congruence symbolically.

    Both sides are expanded over the real variables: the left side directly
    from the real Hessians, the right side by realizing each entry of
    T^t H(P) T.  The defect entries must all be the zero polynomial.
    """
    n = poly.n
    T = basis_change_matrix(n)
    rhs = T.transpose() @ mixed_hessian(poly) @ T
    h_re = real_hessian(poly, "re")
    h_im = real_hessian(poly, "im")
    defects = []
    for a in range(2 * n):
        row = []
        for b in range(2 * n):
            lhs_mixed = RealPolyPair(n, h_re[a][b], h_im[a][b]).to_mixed()
            row.append(rhs.entries[a][b] - lhs_mixed)
        defects.append(row)
    holds = all(d.is_zero() for row in defects for d in row)
    return CongruenceReport(holds=holds, basis_change=T, defects=defects)


def determinant(matrix: PolyMatrix) -> MixedPolynomial:
    """Exact determinant by expansion over column subsets; size capped."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant needs a square matrix")
    k = matrix.rows
    if k > DET_SIZE_LIMIT:
        raise ValueError(f"size guard: {k} > {DET_SIZE_LIMIT}")
    n = matrix.n
    # D[mask] = det of rows 0..popcount(mask)-1, columns = set bits of mask
    cache: dict[int, MixedPolynomial] = {0: MixedPolynomial.constant(n, 1)}

    def minor(mask: int) -> MixedPolynomial:
        if mask in cache:
            return cache[mask]
        r = bin(mask).count("1") - 1
        acc = MixedPolynomial.zero(n)
        idx = 0
        for j in range(k):
            if not mask & (1 << j):
                continue
            entry = matrix.entries[r][j]
            if not entry.is_zero():
                sub = minor(mask & ~(1 << j))
                term = entry * sub
                acc = acc + (term if (r + idx) % 2 == 0 else -term)
            idx += 1
        cache[mask] = acc
        return acc

    return minor((1 << k) - 1)


def numeric_rank(matrix: np.ndarray, tol: float = 1e-8) -> int:
    """Count singular values above tol * (largest singular value)."""
    m = np.asarray(matrix, dtype=np.complex128)
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix has non-finite entries")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def pencil_regular_value(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> float:
    """Real u0 with det(A + u0 B) != 0, given det(A + iB) != 0.

    det(A + uB) is a polynomial of degree <= n in u, so among n+2 samples from
    0, 1, -1, 2, -2, ... at least one misses every root; the first sample whose
    determinant modulus clears a relative threshold is returned (smallest
    magnitude first).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need two square real matrices of equal size")
    n = a.shape[0]
    sv = np.linalg.svd(a + 1j * b, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= tol * sv[0]:
        raise ValueError("hypothesis violated: det(A + iB) is numerically zero")
    samples = [0.0]
    step = 1
    while len(samples) < n + 2:
        samples.extend([float(step), float(-step)])
        step += 1
    samples = samples[: n + 2]
    dets = [abs(np.linalg.det(a + u * b)) for u in samples]
    threshold = tol * max(dets)
    for u, d in zip(samples, dets):
        if d > threshold:
            return u
    raise ValueError("no regular pencil value found; hypothesis likely violated")


def holomorphic_hessian_det(g: MixedPolynomial) -> tuple[MixedPolynomial, bool]:
    """det of the 2x2 complex Hessian of a holomorphic g; also whether it is 0.

    Vanishes identically exactly for the exceptional shape b1*z1 + b2*z2^k
    (up to swapping variables), which is what the downstream determinant
    arguments must avoid.
    """
    if g.n != 2:
        raise ValueError("implemented for two variables")
    if not g.is_holomorphic():
        raise ValueError("polynomial has conjugated variables")
    d1 = g.wirtinger(0)
    d2 = g.wirtinger(1)
    det = d1.wirtinger(0) * d2.wirtinger(1) - d1.wirtinger(1) * d2.wirtinger(0)
    return det, det.is_zero()
