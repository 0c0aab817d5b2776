"""Deformation families of f*conj(g) and instance-level certification.

Case 1 perturbs by t*(g1*z1^(p(m-n)) + g2*z2^(q(m-n))); Case 2 (linear g) by
t*(z1^m*zbar1 + z1^(m-1) + g*z2^(m-1)).  The second stage adds s*(c1 z1 + c2 z2).
Certificates are numeric instance records: every hypothesis and conclusion a
lemma supplies is checked on the concrete family with explicit margins,
tolerances and the RNG seed that produced the coefficients.

Curves through the origin are handled by their weighted root rays: a
holomorphic weighted homogeneous curve {u = 0} decomposes into rays
c -> (c^q * zeta, c^p) over the roots zeta of u(zeta, 1), which makes
common-branch tests and the second-stage point solve one-dimensional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CertificationFailure, HypothesisRejected, NonConvergence
from .hessian import determinant, mixed_hessian, numeric_rank
from .mixedpoly import (
    GR_ONE,
    GaussianRational,
    MixedPolynomial,
    WeightSystem,
    act_point,
    polar_components,
    polar_radial_degrees,
)
from .singular import (
    MapCache,
    LocusReport,
    SearchParams,
    SingularPoint,
    classify,
    locus_search,
    prop1_residual,
    prop1_residual_many,
    refine_batch,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Weighted homogeneous pairs
# ---------------------------------------------------------------------------

@dataclass
class WHPair:
    """Convenient weighted homogeneous pair (f, g) with f(c o z) = c^(pqm) f(z)."""

    f: MixedPolynomial
    g: MixedPolynomial
    p: int
    q: int
    m: int
    n_deg: int
    corners: dict[str, GaussianRational]  # a1, a2, b1, b2

    @property
    def weights(self) -> WeightSystem:
        # the action c o z = (c^q z1, c^p z2) puts weight q on z1 and p on z2
        return WeightSystem((self.q, self.p), (self.q, self.p))

    @property
    def fg_bar(self) -> MixedPolynomial:
        return self.f * self.g.conjugate()

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "g": str(self.g),
            "p": self.p,
            "q": self.q,
            "m": self.m,
            "n": self.n_deg,
            "corners": {k: str(v) for k, v in self.corners.items()},
        }


def analyze_pair(f: MixedPolynomial, g: MixedPolynomial, p: int, q: int) -> WHPair:
    """Validate the structural hypotheses and extract degrees and corners."""
    if math.gcd(p, q) != 1:
        raise HypothesisRejected(f"gcd(p, q) = {math.gcd(p, q)} != 1")
    if not (1 <= p <= q):
        raise HypothesisRejected("weights must satisfy q >= p >= 1")
    for name, poly in (("f", f), ("g", g)):
        if not poly.is_holomorphic():
            raise HypothesisRejected(f"{name} is not holomorphic")
        if not poly.is_convenient():
            raise HypothesisRejected(f"{name} is not convenient")
    weights = WeightSystem((q, p), (q, p))
    hf = polar_radial_degrees(f, weights)
    hg = polar_radial_degrees(g, weights)
    if hf.polar_degree is None:
        raise HypothesisRejected(f"f not weighted homogeneous: {hf.failure_reason()}")
    if hg.polar_degree is None:
        raise HypothesisRejected(f"g not weighted homogeneous: {hg.failure_reason()}")
    if hf.polar_degree % (p * q) or hg.polar_degree % (p * q):
        raise HypothesisRejected("degrees are not multiples of p*q")
    m = hf.polar_degree // (p * q)
    n_deg = hg.polar_degree // (p * q)
    if m <= n_deg:
        raise HypothesisRejected(f"need m > n, got m = {m}, n = {n_deg}")
    zero = (0, 0)
    corners = {
        "a1": f.coefficient((p * m, 0), zero),
        "a2": f.coefficient((0, q * m), zero),
        "b1": g.coefficient((p * n_deg, 0), zero),
        "b2": g.coefficient((0, q * n_deg), zero),
    }
    if any(c.is_zero() for c in corners.values()):
        raise HypothesisRejected("a corner coefficient vanishes (pair not convenient)")
    return WHPair(f=f, g=g, p=p, q=q, m=m, n_deg=n_deg, corners=corners)


# ---------------------------------------------------------------------------
# Ray decomposition of weighted homogeneous holomorphic curves
# ---------------------------------------------------------------------------

def _ray_roots(poly: MixedPolynomial, q: int, p: int) -> list[complex]:
    """Roots zeta of poly(zeta, 1); the zero set off {z2 = 0} is the union of
    rays c -> (c^q zeta, c^p)."""
    deg = max((nu[0] for nu, _ in poly.terms), default=0)
    coeffs = np.zeros(deg + 1, dtype=np.complex128)
    for (nu, mu), c in poly.terms.items():
        if any(mu):
            raise ValueError("ray decomposition needs a holomorphic polynomial")
        coeffs[deg - nu[0]] += c.to_complex()
    while coeffs.size > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if coeffs.size <= 1:
        return []
    return [complex(r) for r in np.roots(coeffs)]


def _ray_point(c: complex, zeta: complex, q: int, p: int) -> tuple[complex, complex]:
    return (c**q * zeta, c**p)


def _ray_radius_param(zeta: complex, q: int, p: int, radius: float) -> float:
    """|c| such that the ray point lands on the sphere of the given radius."""
    lo, hi = 0.0, max(1.0, radius)
    norm = lambda a: math.hypot(a**q * abs(zeta), a**p)
    while norm(hi) < radius:
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if norm(mid) < radius:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zero_set_samples(
    curve: MixedPolynomial, q: int, p: int, radius: float, phases: int = 64
) -> list[tuple[complex, complex]]:
    """Sample points of {curve = 0} on the sphere of the given radius,
    including the z1 = 0 slice when the curve vanishes there."""
    pts: list[tuple[complex, complex]] = []
    for zeta in _ray_roots(curve, q, p):
        a = _ray_radius_param(zeta, q, p, radius)
        for k in range(phases):
            th = TWO_PI * k / phases
            c = a * complex(math.cos(th), math.sin(th))
            pts.append(_ray_point(c, zeta, q, p))
    if curve.axis_restriction(1).is_zero():  # vanishes on {z1 = 0}
        for k in range(phases):
            th = TWO_PI * k / phases
            pts.append((0.0, radius * complex(math.cos(th), math.sin(th))))
    return pts


def common_branch_margin(
    curve_a: MixedPolynomial,
    curve_b_factors: list[MixedPolynomial],
    q: int,
    p: int,
    radii: tuple[float, float] = (1.0, 0.53),
    phases: int = 64,
) -> float:
    """Per-ray median of |curve_a| over the zero set of the product of the
    given holomorphic factors, minimized over rays and radii.

    A common branch forces the whole phase circle of some ray to lie in
    {curve_a = 0}, so the median over phases collapses; isolated transverse
    intersections only pull down a few samples and leave the median positive.
    """
    ca = curve_a.compile()
    worst = math.inf
    for factor in curve_b_factors:
        for radius in radii:
            for zeta in _ray_roots(factor, q, p):
                a = _ray_radius_param(zeta, q, p, radius)
                vals = []
                for k in range(phases):
                    th = TWO_PI * k / phases
                    c = a * complex(math.cos(th), math.sin(th))
                    vals.append(abs(ca.eval_one(np.array(_ray_point(c, zeta, q, p)))))
                worst = min(worst, float(np.median(vals)))
            if factor.axis_restriction(1).is_zero():
                vals = [
                    abs(ca.eval_one(np.array((0.0, radius * np.exp(1j * TWO_PI * k / phases)))))
                    for k in range(phases)
                ]
                worst = min(worst, float(np.median(vals)))
    return worst


# ---------------------------------------------------------------------------
# Deformation families
# ---------------------------------------------------------------------------

@dataclass
class DeformationFamily:
    kind: str  # "case1" | "case2"
    pair: WHPair
    h: MixedPolynomial
    t: Fraction
    F: MixedPolynomial
    coefficients: dict[str, GaussianRational]
    ell: MixedPolynomial | None = None
    s: Fraction | None = None

    @property
    def d_h(self) -> int:
        return self.pair.p * self.pair.q * (self.pair.m - self.pair.n_deg)

    @property
    def weights(self) -> WeightSystem:
        return self.pair.weights

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "pair": self.pair.to_json(),
            "h": str(self.h),
            "t": str(self.t),
            "F": str(self.F),
            "coefficients": {k: str(v) for k, v in self.coefficients.items()},
        }
        if self.ell is not None:
            out["ell"] = str(self.ell)
            out["s"] = str(self.s)
        return out


def _case1_h(pair: WHPair, g1: GaussianRational, g2: GaussianRational) -> MixedPolynomial:
    a = pair.p * (pair.m - pair.n_deg)
    b = pair.q * (pair.m - pair.n_deg)
    z1 = MixedPolynomial.variable(2, 0)
    z2 = MixedPolynomial.variable(2, 1)
    return (z1**a).scale(g1) + (z2**b).scale(g2)


def build_case1(pair: WHPair, g1, g2, t, branch_tol: float = 1e-8) -> DeformationFamily:
    """F_t = f*conj(g) + t*(g1 z1^(p(m-n)) + g2 z2^(q(m-n))).

    Rejects zero coefficients and (numerically) a common branch between
    {h = 0} and {f g = 0}; verifies the polar homogeneity of the result
    symbolically (single polar component of degree pq(m-n)).
    """
    g1 = GaussianRational.of(g1)
    g2 = GaussianRational.of(g2)
    t = Fraction(t)
    if g1.is_zero() or g2.is_zero():
        raise HypothesisRejected("both perturbation coefficients must be nonzero")
    if t <= 0:
        raise HypothesisRejected("t must be positive (t = 0 is the undeformed map)")
    h = _case1_h(pair, g1, g2)
    margin = common_branch_margin(pair.fg_bar, [h], pair.q, pair.p)
    scale = pair.f.coefficient_bound() * pair.g.coefficient_bound()
    if margin < branch_tol * scale:
        raise HypothesisRejected(
            f"h shares a branch with f*conj(g) (margin {margin:.2e})"
        )
    F = pair.fg_bar + h.scale(t)
    comps = polar_components(F, pair.weights)
    d_h = pair.p * pair.q * (pair.m - pair.n_deg)
    if list(comps) != [d_h]:
        raise HypothesisRejected(f"family is not polar homogeneous of degree {d_h}")
    return DeformationFamily(
        kind="case1", pair=pair, h=h, t=t, F=F, coefficients={"gamma1": g1, "gamma2": g2}
    )


def gamma_feasible(pair: WHPair, g1, g2) -> bool:
    """Exact sign test Re(conj(a_j) b_j / conj(gamma_j)) > 0 for j = 1, 2."""
    g1 = GaussianRational.of(g1)
    g2 = GaussianRational.of(g2)
    if g1.is_zero() or g2.is_zero():
        return False
    for aj, bj, gj in (
        (pair.corners["a1"], pair.corners["b1"], g1),
        (pair.corners["a2"], pair.corners["b2"], g2),
    ):
        val = aj.conjugate() * bj / gj.conjugate()
        if not val.re > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Lemma-8 auxiliary polynomials
# ---------------------------------------------------------------------------

def phi_pair(family: DeformationFamily) -> tuple[MixedPolynomial, MixedPolynomial]:
    """Phi(z, alpha) = A(z) - alpha * B(z), the elimination of t from the
    two singularity equations of a Case-1 family."""
    f, g, h = family.pair.f, family.pair.g, family.h
    wr = lambda u, j: u.wirtinger(j)
    a = (wr(f, 0) * wr(h, 1) - wr(f, 1) * wr(h, 0)).conjugate() * g
    b = (wr(g, 0) * wr(h, 1) - wr(g, 1) * wr(h, 0)).conjugate() * f
    return a, b


def eq4_residual(family: DeformationFamily, w, alpha: complex) -> float:
    """pqm*conj(f)g + pq(m-n)t*conj(h) - alpha*pqn*f*conj(g) at w, scaled."""
    p, q, m, nd = family.pair.p, family.pair.q, family.pair.m, family.pair.n_deg
    f = family.pair.f.evaluate(w)
    g = family.pair.g.evaluate(w)
    h = family.h.evaluate(w)
    t = float(family.t)
    terms = (
        p * q * m * np.conj(f) * g,
        p * q * (m - nd) * t * np.conj(h),
        -alpha * p * q * nd * f * np.conj(g),
    )
    scale = sum(abs(v) for v in terms) + 1.0
    return abs(sum(terms)) / scale


def eq5_residual(family: DeformationFamily, w, alpha: complex) -> float:
    """Second-derivative identity of h on the locus, worst of j = 1, 2."""
    p, q = family.pair.p, family.pair.q
    pj = (q, p)
    d_h = family.d_h
    t = float(family.t)
    f, g, h = family.pair.f, family.pair.g, family.h
    worst = 0.0
    for j in range(2):
        lhs = t * h.wirtinger(j).wirtinger(j).evaluate(w)
        fz = f.wirtinger(j).evaluate(w)
        gz = g.wirtinger(j).evaluate(w)
        fv = f.evaluate(w)
        gv = g.evaluate(w)
        rhs = ((d_h - pj[j]) / (pj[j] * w[j])) * (
            np.conj(alpha) * np.conj(fv) * gz - fz * np.conj(gv)
        )
        scale = abs(lhs) + abs(rhs) + 1.0
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def restriction_identity_check(family: DeformationFamily, w, alpha: complex) -> float:
    """|F_t(w) - (-n/(m-n)) (f conj(g) - conj(alpha) conj(f) g)(w)|, scaled."""
    m, nd = family.pair.m, family.pair.n_deg
    fv = family.pair.f.evaluate(w)
    gv = family.pair.g.evaluate(w)
    lhs = family.F.evaluate(w)
    rhs = (-nd / (m - nd)) * (fv * np.conj(gv) - np.conj(alpha) * np.conj(fv) * gv)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1.0)


@dataclass
class OrbitDerivativeReport:
    max_relative_error: float
    closed_form_at_zero: complex
    ok: bool


def orbit_derivative_check(
    family: DeformationFamily, w, theta_samples: int = 16, fd_step: float = 1e-5
) -> OrbitDerivativeReport:
    """Finite-difference d/dtheta of F_t along the weighted circle through w
    against the closed form i*pq(m-n)*e^(i pq(m-n) theta)*F_t(w)."""
    p, q = family.pair.p, family.pair.q
    d = family.d_h
    Fc = family.F.compile()
    base = Fc.eval_one(np.asarray(w, dtype=np.complex128))

    def at(theta: float) -> complex:
        s = complex(math.cos(theta), math.sin(theta))
        return Fc.eval_one(np.asarray(act_point(w, s, (q, p)), dtype=np.complex128))

    worst = 0.0
    for k in range(theta_samples):
        th = TWO_PI * k / theta_samples
        fd = (at(th + fd_step) - at(th - fd_step)) / (2 * fd_step)
        closed = 1j * d * complex(math.cos(d * th), math.sin(d * th)) * base
        scale = max(abs(closed), abs(fd), 1e-9)
        worst = max(worst, abs(fd - closed) / scale)
    return OrbitDerivativeReport(
        max_relative_error=worst, closed_form_at_zero=1j * d * base, ok=worst < 1e-6
    )


@dataclass
class MonotonicityReport:
    """|F_t|^2 along the two constructed transverse curves at a fold point."""

    increasing_ok: bool
    decreasing_ok: bool
    derivative_modulus: float
    steps: int

    @property
    def ok(self) -> bool:
        return self.increasing_ok and self.decreasing_ok


def monotonicity_check(
    family: DeformationFamily, w, steps: int = 100, span_factor: float = 1e-3
) -> MonotonicityReport:
    """Sample |F_t|^2 along straight curves w + u*e^(i chi) e_j, with the phase
    chi chosen from d|F|^2/dz_j to force strictly increasing resp. decreasing
    values; the fold's transversality makes both strict."""
    Fc = family.F.compile()
    cache = MapCache(family.F)
    pt = np.asarray(w, dtype=np.complex128)
    dz, dzb = cache.grads(pt[None, :])
    val = Fc.eval_one(pt)
    # d|F|^2/dz_j = F_zj * conj(F) + F * conj(F_zbarj)
    dmod = dz[0] * np.conj(val) + val * np.conj(dzb[0])
    j = int(np.argmax(np.abs(dmod)))
    dmag = abs(dmod[j])
    span = span_factor * max(abs(pt[0]), abs(pt[1]))
    us = np.linspace(0.0, span, steps + 1)[1:]

    def values(chi: float) -> np.ndarray:
        pts = np.repeat(pt[None, :], len(us), axis=0)
        pts[:, j] += us * complex(math.cos(chi), math.sin(chi))
        return np.abs(Fc.eval_many(pts)) ** 2

    chi_inc = -math.atan2(dmod[j].imag, dmod[j].real)
    inc = values(chi_inc)
    dec = values(chi_inc + math.pi)
    base = abs(val) ** 2
    inc_ok = bool(np.all(np.diff(np.concatenate([[base], inc])) > 0))
    dec_ok = bool(np.all(np.diff(np.concatenate([[base], dec])) < 0))
    return MonotonicityReport(inc_ok, dec_ok, float(dmag), steps)


# ---------------------------------------------------------------------------
# Certification (Case 1)
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    kind: str
    ok: bool
    failures: list[str]
    coefficients: dict[str, str]
    parameters: dict
    margins: dict[str, float]
    counts: dict[str, int]
    locus: LocusReport | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "failures": self.failures,
            "coefficients": self.coefficients,
            "parameters": self.parameters,
            "margins": self.margins,
            "counts": self.counts,
            "locus": None if self.locus is None else self.locus.to_json(),
            "extra": self.extra,
        }


def isolated_singularity_certificate(
    pair: WHPair, params: SearchParams | None = None
) -> dict:
    """Numeric check that f*conj(g) has no singular orbit in the annulus, at
    two radii (the product is radially homogeneous, so this is a cone check)."""
    params = params or SearchParams()
    out = {}
    for label, radius in (("outer", params.radius), ("inner", 0.5 * params.radius)):
        p2 = SearchParams(**{**params.to_json(), "radius": radius})
        rep = locus_search(pair.fg_bar, pair.weights, p2)
        out[f"{label}_orbits"] = rep.orbit_count
        out[f"{label}_s2"] = len(rep.s2_points)
        out[f"{label}_completeness"] = rep.completeness
        if rep.orbit_count or rep.s2_points or rep.degenerate_locus:
            raise CertificationFailure(
                f"f*conj(g) has singular points off the origin at radius {radius}"
            )
    return out


def certify_gamma(
    pair: WHPair,
    g1,
    g2,
    t,
    params: SearchParams | None = None,
    margin_floor: float = 1e-7,
    seed: int | None = None,
) -> Certificate:
    """Run the full Lemma 7/8/9 battery on one Case-1 coefficient choice.

    Checks, at every singular orbit representative: positive margins for
    |det H(F_t)| and |F_t|, the axis-avoidance of the locus, the
    Prop-1-derived identities (Phi consistency, restriction identity, the two
    Euler-derived equations), the orbit-derivative closed form, and the
    indefinite-fold classification.  Off the locus, Phi is confirmed nonzero
    at seeded random samples.
    """
    params = params or SearchParams()
    if not gamma_feasible(pair, g1, g2):
        raise HypothesisRejected("gamma fails the exact feasibility sign test")
    family = build_case1(pair, g1, g2, t)
    failures: list[str] = []
    margins: dict[str, float] = {}

    locus = locus_search(family.F, family.weights, params)
    if locus.degenerate_locus:
        failures.append("degenerate locus (certification refused)")
    if locus.s2_points:
        failures.append(f"{len(locus.s2_points)} S2 points off the origin (Lemma 6)")
    reps = locus.representatives

    hessian = mixed_hessian(family.F)
    phi_a, phi_b = phi_pair(family)
    pa, pb = phi_a.compile(), phi_b.compile()

    det_margin = math.inf
    f_margin = math.inf
    axis_margin = math.inf
    phi_consistency = 0.0
    eq4_worst = 0.0
    eq5_worst = 0.0
    restriction_worst = 0.0
    orbit_worst = 0.0
    mono_ok = True
    for rep in reps:
        w = rep.w
        scale = max(abs(w[0]), abs(w[1]))
        hv = hessian.evaluate(w)
        det_margin = min(det_margin, abs(np.linalg.det(hv)))
        f_margin = min(f_margin, abs(family.F.evaluate(w)))
        axis_margin = min(axis_margin, min(abs(w[0]), abs(w[1])) / scale)
        if rep.alpha is not None:
            wv = np.asarray(w, dtype=np.complex128)
            phi_consistency = max(
                phi_consistency,
                abs(pa.eval_one(wv) - rep.alpha * pb.eval_one(wv))
                / (abs(pa.eval_one(wv)) + abs(pb.eval_one(wv)) + 1.0),
            )
            eq4_worst = max(eq4_worst, eq4_residual(family, w, rep.alpha))
            eq5_worst = max(eq5_worst, eq5_residual(family, w, rep.alpha))
            restriction_worst = max(
                restriction_worst, restriction_identity_check(family, w, rep.alpha)
            )
        orbit_worst = max(orbit_worst, orbit_derivative_check(family, w).max_relative_error)
        mono = monotonicity_check(family, w)
        mono_ok = mono_ok and mono.ok
        if rep.classification != "IndefiniteFold":
            failures.append(
                f"representative at {w} classifies {rep.classification}, not IndefiniteFold"
            )

    if reps:
        margins["det_hessian"] = det_margin
        margins["family_value"] = f_margin
        margins["axis_distance"] = axis_margin
        margins["phi_consistency_residual"] = phi_consistency
        margins["eq4_residual"] = eq4_worst
        margins["eq5_residual"] = eq5_worst
        margins["restriction_residual"] = restriction_worst
        margins["orbit_derivative_error"] = orbit_worst
        if det_margin < margin_floor:
            failures.append(f"det H margin {det_margin:.2e} below floor (condition (3))")
        if f_margin < margin_floor:
            failures.append(f"|F_t| margin {f_margin:.2e} below floor (Lemma 8)")
        if axis_margin < 1e-6:
            failures.append(f"locus touches a coordinate axis (Lemma 7), margin {axis_margin:.2e}")
        if phi_consistency > 1e-8:
            failures.append(f"Phi does not vanish on the locus: {phi_consistency:.2e}")
        if eq4_worst > 1e-9:
            failures.append(f"Eq.(4) residual {eq4_worst:.2e} above 1e-9")
        if eq5_worst > 1e-9:
            failures.append(f"Eq.(5) residual {eq5_worst:.2e} above 1e-9")
        if restriction_worst > 1e-9:
            failures.append(f"restriction identity residual {restriction_worst:.2e}")
        if orbit_worst > 1e-6:
            failures.append(f"orbit derivative mismatch {orbit_worst:.2e}")
        if not mono_ok:
            failures.append("|F_t|^2 monotonicity failed along a constructed curve")
    else:
        failures.append("no singular orbits found (locus search came up empty)")

    # Phi away from the locus: for unit alpha, min_alpha |Phi| = ||A| - |B||
    rng = np.random.default_rng(seed if seed is not None else 0)
    samples = rng.normal(size=(64, 4))
    pts = (samples[:, :2] + 1j * samples[:, 2:]).astype(np.complex128)
    norms = np.linalg.norm(np.abs(pts), axis=1)
    pts = pts / norms[:, None] * (0.3 + 0.7 * rng.random((64, 1)))
    cache = MapCache(family.F)
    resid, _, _ = prop1_residual_many(cache, pts)
    off = pts[resid > 1e3 * params.accept_tol]
    if off.size:
        va = np.abs(pa.eval_many(off))
        vb = np.abs(pb.eval_many(off))
        phi_off = float((np.abs(va - vb) / (va + vb + 1e-30)).min())
        margins["phi_off_locus"] = phi_off
        if phi_off < 1e-9:
            failures.append(f"Phi vanishes off the locus (margin {phi_off:.2e})")

    return Certificate(
        kind="case1",
        ok=not failures,
        failures=failures,
        coefficients={"gamma1": str(GaussianRational.of(g1)), "gamma2": str(GaussianRational.of(g2))},
        parameters={"t": str(Fraction(t)), "seed": seed},
        margins=margins,
        counts={"orbits": len(reps), "s2_off_origin": len(locus.s2_points)},
        locus=locus,
    )


def _random_gamma(rng: np.random.Generator) -> GaussianRational:
    while True:
        a = int(rng.integers(-6, 7))
        b = int(rng.integers(-6, 7))
        if a or b:
            return GaussianRational(Fraction(a, 4), Fraction(b, 4))


def find_gamma(
    pair: WHPair,
    t,
    params: SearchParams | None = None,
    seed: int = 0,
    trials: int = 16,
) -> tuple[DeformationFamily, Certificate]:
    """Randomized feasible-gamma search; the first certified candidate wins.

    The RNG is seeded, candidates are drawn as quarter-integer Gaussian
    rationals and sign-flipped into the feasible half-planes, so reruns with
    the same seed reproduce the same certificate.
    """
    params = params or SearchParams()
    rng = np.random.default_rng(seed)
    attempts = []
    for trial in range(trials):
        g1, g2 = _random_gamma(rng), _random_gamma(rng)
        for aj, bj, idx in (
            (pair.corners["a1"], pair.corners["b1"], 0),
            (pair.corners["a2"], pair.corners["b2"], 1),
        ):
            gj = (g1, g2)[idx]
            val = aj.conjugate() * bj / gj.conjugate()
            if val.re < 0:
                gj = -gj
            elif val.re == 0:
                gj = gj + GaussianRational(Fraction(1, 4), Fraction(0))
            if idx == 0:
                g1 = gj
            else:
                g2 = gj
        if not gamma_feasible(pair, g1, g2):
            continue
        try:
            cert = certify_gamma(pair, g1, g2, t, params, seed=seed)
        except HypothesisRejected as exc:
            attempts.append(f"trial {trial}: {exc}")
            continue
        cert.parameters["trial"] = trial
        if cert.ok:
            return build_case1(pair, g1, g2, t), cert
        attempts.append(f"trial {trial}: {'; '.join(cert.failures)}")
    raise CertificationFailure(
        f"no gamma certified in {trials} trials: " + " | ".join(attempts[-3:])
    )


def certify_case1_auto(
    pair: WHPair,
    params: SearchParams | None = None,
    seed: int = 0,
    t0=Fraction(1, 10),
    retries: int = 8,
) -> tuple[DeformationFamily, Certificate]:
    """Find (gamma, t) by halving t whenever every gamma trial fails."""
    t = Fraction(t0)
    last: Exception | None = None
    for attempt in range(retries):
        try:
            family, cert = find_gamma(pair, t, params, seed=seed)
            cert.parameters["t_retries"] = attempt
            return family, cert
        except CertificationFailure as exc:
            last = exc
            t = t / 2
    raise CertificationFailure(f"certification failed after {retries} halvings: {last}")


# ---------------------------------------------------------------------------
# Case 2
# ---------------------------------------------------------------------------

def build_case2(f: MixedPolynomial, beta, gamma, t) -> DeformationFamily:
    """F_t = f*conj(z1 + beta z2) + t*(z1^m zbar1 + z1^(m-1) + gamma z2^(m-1))."""
    beta = GaussianRational.of(beta)
    gamma = GaussianRational.of(gamma)
    t = Fraction(t)
    if beta.is_zero():
        raise HypothesisRejected("beta must be nonzero")
    if t <= 0:
        raise HypothesisRejected("t must be positive")
    z1 = MixedPolynomial.variable(2, 0)
    z2 = MixedPolynomial.variable(2, 1)
    g = z1 + z2.scale(beta)
    pair = analyze_pair(f, g, 1, 1)
    m = pair.m
    h = (z1**m) * MixedPolynomial.variable(2, 0, conjugated=True) + z1 ** (m - 1) + (
        z2 ** (m - 1)
    ).scale(gamma)
    F = pair.fg_bar + h.scale(t)
    comps = polar_components(F, pair.weights)
    if list(comps) != [m - 1]:
        raise HypothesisRejected(f"family is not polar homogeneous of degree {m - 1}")
    return DeformationFamily(
        kind="case2", pair=pair, h=h, t=t, F=F, coefficients={"beta": beta, "gamma": gamma}
    )


def case2_closed_form_det(family: DeformationFamily) -> MixedPolynomial:
    """t^2 m^2 conj(beta)^2 z1^(2m-2) (df/dz2)^2."""
    m = family.pair.m
    beta = family.coefficients["beta"]
    z1 = MixedPolynomial.variable(2, 0)
    fz2 = family.pair.f.wirtinger(1)
    coef = GaussianRational(Fraction(m * m) * family.t * family.t, Fraction(0)) * (
        beta.conjugate() * beta.conjugate()
    )
    return (z1 ** (2 * m - 2) * fz2 * fz2).scale(coef)


def case2_det_identity(family: DeformationFamily) -> tuple[bool, MixedPolynomial, MixedPolynomial]:
    """Exact symbolic equality of det H(F_t) with the closed form."""
    if family.kind != "case2":
        raise ValueError("needs a Case-2 family")
    det = determinant(mixed_hessian(family.F))
    closed = case2_closed_form_det(family)
    return (det == closed, det, closed)


def case2_phi_prime_parts(family: DeformationFamily) -> tuple[MixedPolynomial, MixedPolynomial]:
    """The affine-in-alpha split Phi' = A' + alpha*B' of the Case-2 singularity
    elimination curve (used as the curve whose intersection with
    {det H(F_t) = 0} the gamma choice must confine to the origin)."""
    f, g, h = family.pair.f, family.pair.g, family.h
    m = family.pair.m
    beta = family.coefficients["beta"]
    z1m = MixedPolynomial.variable(2, 0) ** m
    hz1c = h.wirtinger(0).conjugate()
    hz2c = h.wirtinger(1).conjugate()
    a = f.wirtinger(0).conjugate() * hz2c * g - f.wirtinger(1).conjugate() * g * hz1c
    b = f.scale(beta.conjugate()) * hz1c - (f + z1m) * hz2c
    return a, b


def case2_elimination_residual(family: DeformationFamily, w, alpha: complex) -> float:
    """Residual of the t-eliminated singularity identity at (w, alpha):
    (conj(f_z1)g - alpha f) conj(h_z2) - (alpha conj(beta) f - conj(f_z2) g)(alpha z1^m - conj(h_z1))."""
    f, g, h = family.pair.f, family.pair.g, family.h
    m = family.pair.m
    beta = family.coefficients["beta"].to_complex()
    fv, gv = f.evaluate(w), g.evaluate(w)
    fz1, fz2 = f.wirtinger(0).evaluate(w), f.wirtinger(1).evaluate(w)
    hz1, hz2 = h.wirtinger(0).evaluate(w), h.wirtinger(1).evaluate(w)
    z1m = w[0] ** m
    lhs = (np.conj(fz1) * gv - alpha * fv) * np.conj(hz2)
    rhs = (alpha * np.conj(beta) * fv - np.conj(fz2) * gv) * (alpha * z1m - np.conj(hz1))
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1.0)


def certify_case2(
    family: DeformationFamily,
    params: SearchParams | None = None,
    margin_floor: float = 1e-7,
) -> Certificate:
    """Instance battery for a Case-2 family: symbolic determinant identity,
    locus classification (all indefinite folds), margins, the intersection
    condition on {det H = 0}, and the |F_t|^2 monotonicity samples."""
    params = params or SearchParams()
    failures: list[str] = []
    margins: dict[str, float] = {}

    det_ok, det, _ = case2_det_identity(family)
    if not det_ok:
        failures.append("det H(F_t) does not match the closed form")
    if det.is_zero():
        failures.append("det H(F_t) is identically zero")

    locus = locus_search(family.F, family.weights, params)
    if locus.degenerate_locus:
        failures.append("degenerate locus")
    reps = locus.representatives
    if not reps:
        failures.append("no singular orbits found")
    for rep in reps:
        if rep.classification != "IndefiniteFold":
            failures.append(f"{rep.w} classifies {rep.classification}")
    if locus.s2_points:
        failures.append("S2 points off the origin")

    hess = mixed_hessian(family.F)
    det_margin = math.inf
    f_margin = math.inf
    elim_worst = 0.0
    mono_ok = True
    for rep in reps:
        det_margin = min(det_margin, abs(np.linalg.det(hess.evaluate(rep.w))))
        f_margin = min(f_margin, abs(family.F.evaluate(rep.w)))
        if rep.alpha is not None:
            elim_worst = max(elim_worst, case2_elimination_residual(family, rep.w, rep.alpha))
        mono_ok = mono_ok and monotonicity_check(family, rep.w).ok
    if reps:
        margins["det_hessian"] = det_margin
        margins["family_value"] = f_margin
        margins["elimination_residual"] = elim_worst
        if det_margin < margin_floor:
            failures.append(f"det H margin {det_margin:.2e}")
        if f_margin < margin_floor:
            failures.append(f"|F_t| margin {f_margin:.2e}")
        if elim_worst > 1e-8:
            failures.append(f"singularity elimination identity residual {elim_worst:.2e}")
        if not mono_ok:
            failures.append("monotonicity of |F_t|^2 failed")

    # {det H = 0} decomposes into the rays of z1 and of df/dz2; on those rays
    # Phi'(., alpha) must stay away from zero for every unit alpha.
    pa, pb = case2_phi_prime_parts(family)
    pac, pbc = pa.compile(), pb.compile()
    z1poly = MixedPolynomial.variable(2, 0)
    fz2 = family.pair.f.wirtinger(1)
    worst = math.inf
    for radius in (params.radius, 0.53 * params.radius):
        for curve in (z1poly, fz2):
            for w in zero_set_samples(curve, 1, 1, radius, phases=48):
                wv = np.asarray(w, dtype=np.complex128)
                va, vb = abs(pac.eval_one(wv)), abs(pbc.eval_one(wv))
                worst = min(worst, abs(va - vb) / (va + vb + 1e-30))
    margins["phi_prime_on_det_zero"] = worst
    if worst < 1e-9:
        failures.append(f"Phi' meets {{det H = 0}} away from the origin ({worst:.2e})")

    return Certificate(
        kind="case2",
        ok=not failures,
        failures=failures,
        coefficients={k: str(v) for k, v in family.coefficients.items()},
        parameters={"t": str(family.t)},
        margins=margins,
        counts={"orbits": len(reps)},
        locus=locus,
    )


# ---------------------------------------------------------------------------
# Second stage F_{t,s}
# ---------------------------------------------------------------------------

def _ell(c1: GaussianRational, c2: GaussianRational) -> MixedPolynomial:
    return MixedPolynomial.variable(2, 0).scale(c1) + MixedPolynomial.variable(2, 1).scale(c2)


def condition_margins(
    family: DeformationFamily, c1: GaussianRational, c2: GaussianRational, s: Fraction
) -> tuple[float, float]:
    """Numeric margins for conditions (i) and (ii) against {f g = 0}."""
    p, q = family.pair.p, family.pair.q
    d_h = family.d_h
    z1 = MixedPolynomial.variable(2, 0)
    z2 = MixedPolynomial.variable(2, 1)
    t_dh_h = family.h.scale(Fraction(d_h) * family.t)
    ell_w = z1.scale(GaussianRational.of(Fraction(q)) * c1) + z2.scale(
        GaussianRational.of(Fraction(p)) * c2
    )
    curve_i = t_dh_h + ell_w.scale(s)
    curve_ii = z1.scale(GaussianRational.of(Fraction((d_h - q) * q)) * c1) + z2.scale(
        GaussianRational.of(Fraction((d_h - p) * p)) * c2
    )
    factors = [family.pair.f, family.pair.g]
    m_i = common_branch_margin(curve_i, factors, q, p)
    m_ii = common_branch_margin(curve_ii, factors, q, p)
    return m_i, m_ii


def build_second_stage(
    family: DeformationFamily, c1, c2, s, branch_tol: float = 1e-9
) -> DeformationFamily:
    """F_{t,s} = F_t + s*(c1 z1 + c2 z2), after certifying conditions (i)/(ii)
    numerically and asserting H(F_{t,s}) = H(F_{t,0}) exactly."""
    c1 = GaussianRational.of(c1)
    c2 = GaussianRational.of(c2)
    s = Fraction(s)
    if c1.is_zero() or c2.is_zero():
        raise HypothesisRejected("c1 and c2 must be nonzero")
    if not 0 < s < family.t:
        raise HypothesisRejected("need 0 < s < t")
    m_i, m_ii = condition_margins(family, c1, c2, s)
    scale = family.pair.f.coefficient_bound() * family.pair.g.coefficient_bound()
    if m_i < branch_tol * scale:
        raise HypothesisRejected(f"condition (i) violated (margin {m_i:.2e})")
    if m_ii < branch_tol * scale:
        raise HypothesisRejected(f"condition (ii) violated (margin {m_ii:.2e})")
    ell = _ell(c1, c2)
    F = family.F + ell.scale(s)
    if not (mixed_hessian(F) == mixed_hessian(family.F)):
        raise AssertionError("H(F_{t,s}) != H(F_{t,0}); the linear term leaked")
    out = DeformationFamily(
        kind=family.kind,
        pair=family.pair,
        h=family.h,
        t=family.t,
        F=F,
        coefficients={**family.coefficients, "c1": c1, "c2": c2},
        ell=ell,
        s=s,
    )
    return out


def _s2_refine(cache: MapCache, seeds: np.ndarray, accept_tol: float, max_iter: int = 60):
    """Gauss-Newton on the full first-derivative system (rank-0 points)."""
    pts = np.array(seeds, dtype=np.complex128).reshape(-1, 2).copy()
    N = pts.shape[0]
    for _ in range(max_iter):
        dz, dzb = cache.grads(pts)
        res = np.stack(
            [dz[:, 0].real, dz[:, 0].imag, dz[:, 1].real, dz[:, 1].imag,
             dzb[:, 0].real, dzb[:, 0].imag, dzb[:, 1].real, dzb[:, 1].imag],
            axis=1,
        )
        if np.abs(res).max() < 0.01 * accept_tol:
            break
        H = cache.hess_at(pts)
        J = np.zeros((N, 8, 4))
        for j in range(2):
            for k in range(2):
                dxx = H[:, j, k] + H[:, j, 2 + k]
                dyy = 1j * (H[:, j, k] - H[:, j, 2 + k])
                J[:, 2 * j, k] = dxx.real
                J[:, 2 * j + 1, k] = dxx.imag
                J[:, 2 * j, 2 + k] = dyy.real
                J[:, 2 * j + 1, 2 + k] = dyy.imag
                bxx = H[:, 2 + j, k] + H[:, 2 + j, 2 + k]
                byy = 1j * (H[:, 2 + j, k] - H[:, 2 + j, 2 + k])
                J[:, 4 + 2 * j, k] = bxx.real
                J[:, 4 + 2 * j + 1, k] = bxx.imag
                J[:, 4 + 2 * j, 2 + k] = byy.real
                J[:, 4 + 2 * j + 1, 2 + k] = byy.imag
        step = -np.matmul(np.linalg.pinv(J, rcond=1e-13), res[:, :, None])[:, :, 0]
        pts[:, 0] += step[:, 0] + 1j * step[:, 2]
        pts[:, 1] += step[:, 1] + 1j * step[:, 3]
    dz, dzb = cache.grads(pts)
    resid = np.maximum(np.abs(dz).max(axis=1), np.abs(dzb).max(axis=1))
    return pts, resid


def second_stage_s2_points(
    family: DeformationFamily, params: SearchParams | None = None
) -> list[SingularPoint]:
    """Solve {f conj(g) = 0, t d_h h + s(q c1 z1 + p c2 z2) = 0} by restricting
    the second equation to the root rays of f and g, then keep exactly the
    candidates that refine into honest rank-0 points of F_{t,s}."""
    if family.ell is None or family.s is None:
        raise HypothesisRejected("family has no second stage (s = 0 refused)")
    params = params or SearchParams()
    p, q = family.pair.p, family.pair.q
    d_h = family.d_h
    c1 = family.coefficients["c1"]
    c2 = family.coefficients["c2"]
    z1 = MixedPolynomial.variable(2, 0)
    z2 = MixedPolynomial.variable(2, 1)
    curve = family.h.scale(Fraction(d_h) * family.t) + (
        z1.scale(GaussianRational.of(Fraction(q)) * c1)
        + z2.scale(GaussianRational.of(Fraction(p)) * c2)
    ).scale(family.s)

    candidates: list[tuple[complex, complex]] = []
    for factor in (family.pair.f, family.pair.g):
        for zeta in _ray_roots(factor, q, p):
            # restrict the curve to the ray: sum over terms c_k zeta^i c^(qi+pj)
            coeffs: dict[int, complex] = {}
            for (nu, mu), cc in curve.terms.items():
                deg = q * nu[0] + p * nu[1]
                coeffs[deg] = coeffs.get(deg, 0j) + cc.to_complex() * zeta ** nu[0]
            top = max(coeffs)
            poly = np.zeros(top + 1, dtype=np.complex128)
            for deg, cc in coeffs.items():
                poly[top - deg] = cc
            for root in np.roots(poly):
                r = complex(root)
                if abs(r) < 1e-12:
                    continue
                w = _ray_point(r, zeta, q, p)
                if 1e-4 * params.inner_radius < math.hypot(abs(w[0]), abs(w[1])) < 2 * params.radius:
                    candidates.append(w)

    bound = len(candidates)
    cache = MapCache(family.F)
    if not candidates:
        return []
    pts, resid = _s2_refine(cache, np.array(candidates, dtype=np.complex128), params.accept_tol)
    out: list[SingularPoint] = []
    seen: list[np.ndarray] = []
    for i in range(pts.shape[0]):
        if resid[i] > params.accept_tol:
            continue
        v = pts[i]
        if any(np.linalg.norm(v - u) < 1e-6 * max(1.0, np.linalg.norm(u)) for u in seen):
            continue
        seen.append(v)
        w = (complex(v[0]), complex(v[1]))
        _, r1 = prop1_residual(cache, w)
        sp = classify(cache, w, params)
        if sp.stratum != "S2":
            continue
        sp.residual = max(r1, float(resid[i]))
        out.append(sp)
    if len(out) > bound:
        raise CertificationFailure("non-finite S2 solution set detected (condition (i))")
    out.sort(key=lambda s: (abs(s.w[0]), abs(s.w[1])))
    return out


def tune_second_stage(
    family: DeformationFamily,
    s,
    seed: int = 0,
    params: SearchParams | None = None,
) -> DeformationFamily:
    """Choose (c1, c2) so that F_{t,s} has an honest rank-0 point.

    The rank-0 system is overdetermined for generic (c1, c2): its zbar-half
    forces f(w) = 0 and the z-half then has one excess complex condition, so
    S2(F_{t,s}) is generically empty.  Solving the z-half *for* (c1, c2) at a
    chosen point of {f = 0} places one honest rank-0 point there; conditions
    (i)/(ii) are then certified for the tuned coefficients as usual.
    """
    s = Fraction(s)
    params = params or SearchParams()
    p, q = family.pair.p, family.pair.q
    f, g, h = family.pair.f, family.pair.g, family.h
    t = float(family.t)
    sf = float(s)
    roots = _ray_roots(f, q, p)
    if not roots:
        raise HypothesisRejected("f has no root rays to host a rank-0 point")
    rng = np.random.default_rng(seed)
    fz = [f.wirtinger(j).compile() for j in range(2)]
    hz = [h.wirtinger(j).compile() for j in range(2)]
    gc = g.compile()
    d_h = family.d_h
    # target |c| near the scale where t*h and s*ell balance
    base = (sf / (2 * t)) ** (1.0 / max(1, d_h - 1))
    for trial in range(24):
        zeta = roots[int(rng.integers(0, len(roots)))]
        scale = base * float(0.6 + 0.9 * rng.random())
        phase = float(rng.random() * TWO_PI)
        w = _ray_point(scale * complex(math.cos(phase), math.sin(phase)), zeta, q, p)
        wv = np.asarray(w, dtype=np.complex128)
        gbar = np.conj(gc.eval_one(wv))
        c1 = -(fz[0].eval_one(wv) * gbar + t * hz[0].eval_one(wv)) / sf
        c2 = -(fz[1].eval_one(wv) * gbar + t * hz[1].eval_one(wv)) / sf
        if min(abs(c1), abs(c2)) < 1e-3 or max(abs(c1), abs(c2)) > 1e3:
            continue
        c1g = GaussianRational(Fraction(c1.real), Fraction(c1.imag))
        c2g = GaussianRational(Fraction(c2.real), Fraction(c2.imag))
        try:
            staged = build_second_stage(family, c1g, c2g, s)
        except HypothesisRejected:
            continue
        pts = second_stage_s2_points(staged, params)
        if pts:
            return staged
    raise CertificationFailure("could not tune (c1, c2) to produce a rank-0 point")


def lemma13_pattern_check(
    family: DeformationFamily, point: SingularPoint, params: SearchParams | None = None
) -> dict:
    """Machine-checkable facts of the rank-3 Hessian pattern at a rank-0 point:
    rank H = 3, vanishing (zbar, zbar) block, rank-1 (z, zbar) block, and the
    nonzero diagonal witness -s((d_h-q)q c1 z1 + (d_h-p)p c2 z2)."""
    params = params or SearchParams()
    p, q = family.pair.p, family.pair.q
    d_h = family.d_h
    w = point.w
    hv = mixed_hessian(family.F).evaluate(w)
    scale = max(1e-30, float(np.abs(hv).max()))
    c1 = family.coefficients["c1"].to_complex()
    c2 = family.coefficients["c2"].to_complex()
    mu = -float(family.s) * ((d_h - q) * q * c1 * w[0] + (d_h - p) * p * c2 * w[1])
    out = {
        "rank": numeric_rank(hv, params.rank_tol),
        "zbar_block_max": float(np.abs(hv[2:, 2:]).max()) / scale,
        "mixed_block_rank": numeric_rank(hv[:2, 2:], 1e-6),
        "mu_abs": abs(mu),
        "f_value": abs(family.pair.f.evaluate(w)),
    }
    out["ok"] = (
        out["rank"] == 3
        and out["zbar_block_max"] < 1e-6
        and out["mixed_block_rank"] == 1
        and out["mu_abs"] > 1e-12
    )
    return out


def classify_remaining_singularities(
    staged: DeformationFamily,
    base_locus: LocusReport,
    params: SearchParams | None = None,
    orbit_samples: int = 12,
) -> list[SingularPoint]:
    """Continue the fold orbits of F_t into F_{t,s} and classify them there.

    S1(F_{t,s}) lives in a neighborhood of S1(F_{t,0}); seeding with sampled
    phases of each certified orbit and refining against F_{t,s} reaches it.
    """
    params = params or SearchParams()
    p, q = staged.pair.p, staged.pair.q
    cache = MapCache(staged.F)
    seeds = []
    for rep in base_locus.representatives:
        for k in range(orbit_samples):
            th = TWO_PI * k / orbit_samples
            seeds.append(act_point(rep.w, complex(math.cos(th), math.sin(th)), (q, p)))
    if not seeds:
        return []
    pts, alphas, resid, conv = refine_batch(
        cache, np.array(seeds, dtype=np.complex128), None, params
    )
    out = []
    for i in np.nonzero(conv)[0]:
        w = (complex(pts[i, 0]), complex(pts[i, 1]))
        out.append(classify(cache, w, params))
    return out
