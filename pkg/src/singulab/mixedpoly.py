"""Exact arithmetic for mixed polynomials in z_1..z_n and their conjugates.

A mixed polynomial is stored sparsely as a dictionary mapping a term key
``(nu, mu)`` to a Gaussian-rational coefficient, where ``nu`` and ``mu`` are
exponent tuples for the plain and conjugated variables:

    P(z, zbar) = sum  c[(nu, mu)] * z^nu * zbar^mu

Every identity check in this module is an exact zero-polynomial test; floats
only appear in the compiled evaluators used by the numeric search modules.

Variable indices are 0-based in code; the printer and parser use the 1-based
names ``z1, z2, ...`` and ``~z1, ~z2, ...`` for the conjugated variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponents = tuple[int, ...]
TermKey = tuple[Exponents, Exponents]


class VariableCountMismatch(ValueError):
    """Operands live in rings with different numbers of variables."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "GaussianRational":
        """Coerce an int, Fraction, complex or GaussianRational to exact form.

        Floats inside a complex are accepted only when they are exactly
        representable (Fraction(float) is exact), so e.g. 0.5 is fine while
        0.1 would silently carry binary round-off; prefer Fractions.
        """
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value), Fraction(0))
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def power(self, k: int) -> "GaussianRational":
        """self**k for k >= 0; negative k allowed only on the unit circle."""
        if k < 0:
            if self.abs2() != 1:
                raise ValueError("negative powers need |value| = 1 exactly")
            return self.conjugate().power(-k)
        out = GaussianRational(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.im < 0:
            return f"{self.re}-{-self.im}i"
        return f"{self.re}+{self.im}i"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1), Fraction(0))
GR_I = GaussianRational(Fraction(0), Fraction(1))

# Exact unit-modulus scalars (from Pythagorean triples), used to exercise the
# polar action without floating error.
UNIT_SAMPLES = (
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(8, 17), Fraction(-15, 17)),
    GaussianRational(Fraction(-20, 29), Fraction(21, 29)),
)


# ---------------------------------------------------------------------------
# Mixed polynomials
# ---------------------------------------------------------------------------

def _canonical(terms: Mapping[TermKey, GaussianRational]) -> dict[TermKey, GaussianRational]:
    return {key: c for key, c in terms.items() if not c.is_zero()}


class MixedPolynomial:
    """Sparse mixed polynomial with Gaussian-rational coefficients.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, so values are safe to share across worker threads.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[TermKey, GaussianRational] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        canon = _canonical(terms or {})
        for nu, mu in canon:
            if len(nu) != n or len(mu) != n:
                raise ValueError(f"exponent tuples must have length {n}")
            if any(e < 0 for e in nu) or any(e < 0 for e in mu):
                raise ValueError("exponents must be non-negative")
        self.terms = canon
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "MixedPolynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value) -> "MixedPolynomial":
        zero = (0,) * n
        return cls(n, {(zero, zero): GaussianRational.of(value)})

    @classmethod
    def variable(cls, n: int, j: int, conjugated: bool = False) -> "MixedPolynomial":
        """The monomial z_j (or zbar_j), with 0-based index j."""
        if not 0 <= j < n:
            raise IndexError(f"variable index {j} out of range for n={n}")
        e = [0] * n
        e[j] = 1
        nu, mu = ((0,) * n, tuple(e)) if conjugated else (tuple(e), (0,) * n)
        return cls(n, {(nu, mu): GR_ONE})

    @classmethod
    def monomial(cls, n: int, nu: Sequence[int], mu: Sequence[int], coeff=1) -> "MixedPolynomial":
        return cls(n, {(tuple(nu), tuple(mu)): GaussianRational.of(coeff)})

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "MixedPolynomial") -> None:
        if self.n != other.n:
            raise VariableCountMismatch(f"{self.n} variables vs {other.n}")

    def __add__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, GR_ZERO) + c
        return MixedPolynomial(self.n, out)

    def __sub__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, GR_ZERO) - c
        return MixedPolynomial(self.n, out)

    def __neg__(self) -> "MixedPolynomial":
        return MixedPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other: "MixedPolynomial") -> "MixedPolynomial":
        self._check(other)
        out: dict[TermKey, GaussianRational] = {}
        for (nu1, mu1), c1 in self.terms.items():
            for (nu2, mu2), c2 in other.terms.items():
                key = (
                    tuple(a + b for a, b in zip(nu1, nu2)),
                    tuple(a + b for a, b in zip(mu1, mu2)),
                )
                out[key] = out.get(key, GR_ZERO) + c1 * c2
        return MixedPolynomial(self.n, out)

    def scale(self, value) -> "MixedPolynomial":
        c0 = GaussianRational.of(value)
        return MixedPolynomial(self.n, {k: c * c0 for k, c in self.terms.items()})

    def __pow__(self, k: int) -> "MixedPolynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MixedPolynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "MixedPolynomial":
        """Complex conjugate: swaps nu <-> mu and conjugates coefficients."""
        return MixedPolynomial(
            self.n, {(mu, nu): c.conjugate() for (nu, mu), c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MixedPolynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, tuple(sorted((k, (c.re, c.im)) for k, c in self.terms.items()))))
        return self._hash

    # -- calculus ------------------------------------------------------------

    def wirtinger(self, j: int, barred: bool = False) -> "MixedPolynomial":
        """Formal derivative d/dz_j (or d/dzbar_j when barred), 0-based j."""
        if not 0 <= j < self.n:
            raise IndexError(f"variable index {j} out of range for n={self.n}")
        out: dict[TermKey, GaussianRational] = {}
        for (nu, mu), c in self.terms.items():
            exps = mu if barred else nu
            e = exps[j]
            if e == 0:
                continue
            new = list(exps)
            new[j] = e - 1
            key = ((nu, tuple(new)) if barred else (tuple(new), mu))
            out[key] = out.get(key, GR_ZERO) + c * GaussianRational.of(e)
        return MixedPolynomial(self.n, out)

    def wirtinger_gradient(self, barred: bool = False) -> list["MixedPolynomial"]:
        return [self.wirtinger(j, barred) for j in range(self.n)]

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, w: Sequence[complex]) -> complex:
        """Numeric value at w, with zbar_j bound to conj(w_j)."""
        if len(w) != self.n:
            raise VariableCountMismatch(f"point has {len(w)} coordinates, need {self.n}")
        total = 0j
        for (nu, mu), c in self.terms.items():
            v = c.to_complex()
            for j in range(self.n):
                if nu[j]:
                    v *= w[j] ** nu[j]
                if mu[j]:
                    v *= w[j].conjugate() ** mu[j]
            total += v
        return total

    def evaluate_exact(self, w: Sequence[GaussianRational]) -> GaussianRational:
        """Exact value at a Gaussian-rational point."""
        if len(w) != self.n:
            raise VariableCountMismatch(f"point has {len(w)} coordinates, need {self.n}")
        total = GR_ZERO
        for (nu, mu), c in self.terms.items():
            v = c
            for j in range(self.n):
                if nu[j]:
                    v = v * w[j].power(nu[j])
                if mu[j]:
                    v = v * w[j].conjugate().power(mu[j])
            total = total + v
        return total

    def compile(self) -> "NumericPoly":
        return NumericPoly(self)

    # -- structure queries ----------------------------------------------------

    def is_holomorphic(self) -> bool:
        """True when no conjugated variable occurs."""
        return all(all(e == 0 for e in mu) for _, mu in self.terms)

    def axis_restriction(self, j: int) -> "MixedPolynomial":
        """Restriction to the j-th coordinate axis (all other variables 0)."""
        out = {
            (nu, mu): c
            for (nu, mu), c in self.terms.items()
            if all(nu[k] == 0 and mu[k] == 0 for k in range(self.n) if k != j)
        }
        return MixedPolynomial(self.n, out)

    def is_convenient(self) -> bool:
        """True iff the restriction to every coordinate axis is nonzero."""
        return all(not self.axis_restriction(j).is_zero() for j in range(self.n))

    def coefficient(self, nu: Sequence[int], mu: Sequence[int]) -> GaussianRational:
        return self.terms.get((tuple(nu), tuple(mu)), GR_ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(nu) + sum(mu) for nu, mu in self.terms)

    def coefficient_bound(self) -> float:
        """Sum of coefficient moduli; crude scale for numeric tolerances."""
        return sum(math.sqrt(float(c.abs2())) for c in self.terms.values()) or 1.0

    # -- printing --------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[TermKey, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self) -> str:
        if not self.terms:
            return "(0)"
        parts = []
        for (nu, mu), c in self.sorted_terms():
            factors = [f"({c})"]
            for j, e in enumerate(nu):
                if e == 1:
                    factors.append(f"z{j + 1}")
                elif e > 1:
                    factors.append(f"z{j + 1}^{e}")
            for j, e in enumerate(mu):
                if e == 1:
                    factors.append(f"~z{j + 1}")
                elif e > 1:
                    factors.append(f"~z{j + 1}^{e}")
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MixedPolynomial({self})"


class NumericPoly:
    """Compiled float view of a MixedPolynomial for batched evaluation."""

    __slots__ = ("n", "coeffs", "nu", "mu")

    def __init__(self, poly: MixedPolynomial):
        self.n = poly.n
        items = poly.sorted_terms()
        self.coeffs = np.array([c.to_complex() for _, c in items], dtype=np.complex128)
        self.nu = np.array([key[0] for key, _ in items], dtype=np.int64).reshape(len(items), poly.n)
        self.mu = np.array([key[1] for key, _ in items], dtype=np.int64).reshape(len(items), poly.n)

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (N, n); returns shape (N,)."""
        if self.coeffs.size == 0:
            return np.zeros(points.shape[0], dtype=np.complex128)
        z = points[:, None, :]
        mono = np.prod(z ** self.nu[None, :, :], axis=2) * np.prod(
            np.conj(z) ** self.mu[None, :, :], axis=2
        )
        return mono @ self.coeffs

    def eval_one(self, point: np.ndarray) -> complex:
        return complex(self.eval_many(np.asarray(point, dtype=np.complex128)[None, :])[0])


# ---------------------------------------------------------------------------
# Real realization
# ---------------------------------------------------------------------------

class RealPoly:
    """Real polynomial in (x_1..x_n, y_1..y_n) with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Fraction] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls, nvars: int) -> "RealPoly":
        return cls(nvars, {})

    def __add__(self, other: "RealPoly") -> "RealPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return RealPoly(self.nvars, out)

    def __sub__(self, other: "RealPoly") -> "RealPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return RealPoly(self.nvars, out)

    def __mul__(self, other: "RealPoly") -> "RealPoly":
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return RealPoly(self.nvars, out)

    def diff(self, k: int) -> "RealPoly":
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[k] == 0:
                continue
            new = list(e)
            new[k] = e[k] - 1
            out[tuple(new)] = out.get(tuple(new), Fraction(0)) + c * e[k]
        return RealPoly(self.nvars, out)

    def evaluate(self, x: Sequence[float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            v = float(c)
            for k, ek in enumerate(e):
                if ek:
                    v *= x[k] ** ek
            total += v
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, RealPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = [f"x{k + 1}" for k in range(self.nvars // 2)] + [
            f"y{k + 1}" for k in range(self.nvars // 2)
        ]
        parts = []
        for e, c in sorted(self.terms.items()):
            factors = [str(c)] + [
                (names[k] if ek == 1 else f"{names[k]}^{ek}") for k, ek in enumerate(e) if ek
            ]
            parts.append("*".join(factors))
        return " + ".join(parts)


@dataclass(frozen=True)
class RealPolyPair:
    """Exact (Re P, Im P) of a mixed polynomial, over (x_1..x_n, y_1..y_n)."""

    n: int
    re_part: RealPoly
    im_part: RealPoly

    def to_mixed(self) -> MixedPolynomial:
        """Reverse substitution x_j = (z_j+zbar_j)/2, y_j = (z_j-zbar_j)/2i."""
        n = self.n
        half = GaussianRational(Fraction(1, 2), Fraction(0))
        halfi = GaussianRational(Fraction(0), Fraction(-1, 2))  # 1/(2i) = -i/2
        xs = [
            (MixedPolynomial.variable(n, j) + MixedPolynomial.variable(n, j, conjugated=True)).scale(half)
            for j in range(n)
        ]
        ys = [
            (MixedPolynomial.variable(n, j) - MixedPolynomial.variable(n, j, conjugated=True)).scale(halfi)
            for j in range(n)
        ]

        def lift(rp: RealPoly, factor: GaussianRational) -> MixedPolynomial:
            total = MixedPolynomial.zero(n)
            for e, c in rp.terms.items():
                term = MixedPolynomial.constant(n, GaussianRational(c, Fraction(0)) * factor)
                for k in range(n):
                    if e[k]:
                        term = term * xs[k] ** e[k]
                for k in range(n):
                    if e[n + k]:
                        term = term * ys[k] ** e[n + k]
                total = total + term
            return total

        return lift(self.re_part, GR_ONE) + lift(self.im_part, GR_I)

    def evaluate(self, w: Sequence[complex]) -> complex:
        x = [wj.real for wj in w] + [wj.imag for wj in w]
        return complex(self.re_part.evaluate(x), self.im_part.evaluate(x))


def realize(poly: MixedPolynomial) -> RealPolyPair:
    """Expand P(z, zbar) into exact real polynomials (Re P, Im P).

    Works over complex-coefficient polynomials in the 2n real variables and
    splits at the end, so the round trip RealPolyPair.to_mixed() is exact.
    """
    n = poly.n
    acc: dict[Exponents, GaussianRational] = {}
    zero2n = (0,) * (2 * n)
    for (nu, mu), c in poly.terms.items():
        # product over j of (x_j + i y_j)^nu_j (x_j - i y_j)^mu_j
        partial: dict[Exponents, GaussianRational] = {zero2n: c}
        for j in range(n):
            for conj_sign, count in ((1, nu[j]), (-1, mu[j])):
                for _ in range(count):
                    nxt: dict[Exponents, GaussianRational] = {}
                    for e, ce in partial.items():
                        ex = list(e)
                        ex[j] += 1
                        key = tuple(ex)
                        nxt[key] = nxt.get(key, GR_ZERO) + ce
                        ey = list(e)
                        ey[n + j] += 1
                        key = tuple(ey)
                        fac = GR_I if conj_sign > 0 else -GR_I
                        nxt[key] = nxt.get(key, GR_ZERO) + ce * fac
                    partial = nxt
        for e, ce in partial.items():
            acc[e] = acc.get(e, GR_ZERO) + ce
    re_terms = {e: c.re for e, c in acc.items() if c.re != 0}
    im_terms = {e: c.im for e, c in acc.items() if c.im != 0}
    return RealPolyPair(n, RealPoly(2 * n, re_terms), RealPoly(2 * n, im_terms))


# ---------------------------------------------------------------------------
# Weighted homogeneity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSystem:
    """Polar weights p and radial weights q for the S^1 and R_{>0} actions."""

    p: tuple[int, ...]
    q: tuple[int, ...]
    d_p: int | None = None
    d_r: int | None = None

    def __post_init__(self):
        if len(self.p) != len(self.q):
            raise ValueError("polar and radial weight tuples differ in length")
        if math.gcd(*(abs(w) for w in self.p)) != 1:
            raise ValueError("polar weights must have gcd 1")
        if any(w <= 0 for w in self.q):
            raise ValueError("radial weights must be positive")

    @property
    def n(self) -> int:
        return len(self.p)


def term_polar_degree(key: TermKey, weights: Sequence[int]) -> int:
    nu, mu = key
    return sum(w * (a - b) for w, a, b in zip(weights, nu, mu))


def term_radial_degree(key: TermKey, weights: Sequence[int]) -> int:
    nu, mu = key
    return sum(w * (a + b) for w, a, b in zip(weights, nu, mu))


def polar_components(poly: MixedPolynomial, w: WeightSystem) -> dict[int, MixedPolynomial]:
    """Split P into polar-degree-homogeneous pieces: P(s o z) = sum s^k P_k(z).

    This is the symbolic form of the S^1 action with s kept as a formal
    unit-modulus parameter; P is polar weighted homogeneous iff there is a
    single component.
    """
    buckets: dict[int, dict[TermKey, GaussianRational]] = {}
    for key, c in poly.terms.items():
        k = term_polar_degree(key, w.p)
        buckets.setdefault(k, {})[key] = c
    return {k: MixedPolynomial(poly.n, t) for k, t in sorted(buckets.items())}


def radial_components(poly: MixedPolynomial, w: WeightSystem) -> dict[int, MixedPolynomial]:
    buckets: dict[int, dict[TermKey, GaussianRational]] = {}
    for key, c in poly.terms.items():
        k = term_radial_degree(key, w.q)
        buckets.setdefault(k, {})[key] = c
    return {k: MixedPolynomial(poly.n, t) for k, t in sorted(buckets.items())}


@dataclass(frozen=True)
class HomogeneityReport:
    """Outcome of the per-term polar/radial degree scan."""

    polar_degree: int | None
    radial_degree: int | None
    polar_degrees_seen: tuple[int, ...]
    radial_degrees_seen: tuple[int, ...]

    @property
    def is_homogeneous(self) -> bool:
        return self.polar_degree is not None and self.radial_degree is not None

    def failure_reason(self) -> str | None:
        bad = []
        if self.polar_degree is None:
            bad.append(f"polar degrees disagree: {self.polar_degrees_seen}")
        if self.radial_degree is None:
            bad.append(f"radial degrees disagree: {self.radial_degrees_seen}")
        return "; ".join(bad) or None


def polar_radial_degrees(poly: MixedPolynomial, w: WeightSystem) -> HomogeneityReport:
    """Per-term degree scan; degrees are unique iff P is weighted homogeneous."""
    if poly.is_zero():
        raise ValueError("the zero polynomial is vacuously homogeneous; rejected")
    if w.n != poly.n:
        raise VariableCountMismatch(f"{poly.n} variables vs {w.n} weights")
    pdegs = sorted({term_polar_degree(k, w.p) for k in poly.terms})
    rdegs = sorted({term_radial_degree(k, w.q) for k in poly.terms})
    return HomogeneityReport(
        polar_degree=pdegs[0] if len(pdegs) == 1 else None,
        radial_degree=rdegs[0] if len(rdegs) == 1 else None,
        polar_degrees_seen=tuple(pdegs),
        radial_degrees_seen=tuple(rdegs),
    )


@dataclass(frozen=True)
class EulerReport:
    """Exact verdicts for the weighted Euler identities."""

    polar_holds: bool
    radial_holds: bool
    eq1_holds: bool | None  # None when p != q
    polar_defect: MixedPolynomial
    radial_defect: MixedPolynomial
    eq1_defect: MixedPolynomial | None

    @property
    def all_hold(self) -> bool:
        return self.polar_holds and self.radial_holds and self.eq1_holds in (None, True)


def verify_euler_identities(poly: MixedPolynomial, w: WeightSystem) -> EulerReport:
    """Check d_p P = sum p_j (P_zj z_j - P_zbarj zbar_j) and the radial analogue.

    When p = q also checks sum p_j z_j P_zj = (d_p + d_r)/2 * P; all three are
    exact zero-polynomial tests.
    """
    report = polar_radial_degrees(poly, w)
    if not report.is_homogeneous:
        raise ValueError(f"not weighted homogeneous: {report.failure_reason()}")
    n = poly.n
    zvars = [MixedPolynomial.variable(n, j) for j in range(n)]
    zbars = [MixedPolynomial.variable(n, j, conjugated=True) for j in range(n)]

    polar_sum = MixedPolynomial.zero(n)
    radial_sum = MixedPolynomial.zero(n)
    eq1_sum = MixedPolynomial.zero(n)
    for j in range(n):
        dz = poly.wirtinger(j)
        dzb = poly.wirtinger(j, barred=True)
        polar_sum = polar_sum + (dz * zvars[j] - dzb * zbars[j]).scale(w.p[j])
        radial_sum = radial_sum + (dz * zvars[j] + dzb * zbars[j]).scale(w.q[j])
        eq1_sum = eq1_sum + (dz * zvars[j]).scale(w.p[j])

    polar_defect = polar_sum - poly.scale(report.polar_degree)
    radial_defect = radial_sum - poly.scale(report.radial_degree)
    eq1_defect = None
    eq1_holds: bool | None = None
    if w.p == w.q:
        half = Fraction(report.polar_degree + report.radial_degree, 2)
        eq1_defect = eq1_sum - poly.scale(half)
        eq1_holds = eq1_defect.is_zero()
    return EulerReport(
        polar_holds=polar_defect.is_zero(),
        radial_holds=radial_defect.is_zero(),
        eq1_holds=eq1_holds,
        polar_defect=polar_defect,
        radial_defect=radial_defect,
        eq1_defect=eq1_defect,
    )


# ---------------------------------------------------------------------------
# Group actions
# ---------------------------------------------------------------------------

def act_point(w: Sequence[complex], s: complex, weights: Sequence[int]) -> tuple[complex, ...]:
    """Apply the weighted action: w_j -> s^{p_j} w_j (numeric)."""
    if len(w) != len(weights):
        raise VariableCountMismatch(f"point has {len(w)} coordinates, need {len(weights)}")
    return tuple(s ** pj * complex(wj) for wj, pj in zip(w, weights))


def act_poly_polar(poly: MixedPolynomial, s: GaussianRational, weights: Sequence[int]) -> MixedPolynomial:
    """P(s o z) as an exact polynomial; needs |s| = 1 exactly.

    Each term picks up s^(its polar degree), where negative powers use the
    conjugate; this is the substitution z_j -> s^{p_j} z_j with
    zbar_j -> conj(s)^{p_j} zbar_j folded into the coefficients.
    """
    if s.abs2() != 1:
        raise ValueError("polar action needs a unit-modulus scalar")
    out = {
        key: c * s.power(term_polar_degree(key, weights))
        for key, c in poly.terms.items()
    }
    return MixedPolynomial(poly.n, out)


def act_poly_radial(poly: MixedPolynomial, r: Fraction, weights: Sequence[int]) -> MixedPolynomial:
    """P(r o z) for a positive rational r, exact."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radial action is exercised only for r > 0")
    out: dict[TermKey, GaussianRational] = {}
    for key, c in poly.terms.items():
        k = term_radial_degree(key, weights)
        out[key] = c * GaussianRational(r ** k, Fraction(0))
    return MixedPolynomial(poly.n, out)
