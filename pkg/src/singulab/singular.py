"""Singular locus search, stratification, and fold/Morse classification.

A point w is singular when conj(grad_z P)(w) = alpha * grad_zbar P(w) for some
unit alpha; the residual of that system (plus the unit-modulus defect of the
alpha estimate) is the acceptance quantity everywhere in this module.  The
locus of a polar weighted homogeneous polynomial is a union of S^1 orbits, so
the search seeds a fundamental-domain grid, refines with a damped batched
Gauss-Newton iteration, and deduplicates refined points into orbit
representatives via exact orbit invariants (|w1|, |w2|, arg(w2^p1 / w1^p2)).

Classification runs the intrinsic-second-differential test: at a rank-1 point
the cokernel component of the map has a critical point, so its Hessian
restricted to the 3-dimensional kernel is well defined; a nondegenerate
restriction means a fold, with definiteness read from the eigenvalue signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NonConvergence
from .hessian import eval_real_matrix, mixed_hessian, numeric_rank, real_hessian, xy_coords
from .mixedpoly import (
    MixedPolynomial,
    RealPoly,
    RealPolyPair,
    WeightSystem,
    act_point,
    polar_radial_degrees,
)

TWO_PI = 2.0 * math.pi

# Default tolerances; all CLI-overridable through SearchParams.
ACCEPT_TOL = 1e-10
RANK_TOL = 1e-8
S2_FLOOR = 1e-7
KERNEL_GAP = 1e3
EIG_FLOOR = 1e-8


@dataclass
class SearchParams:
    radius: float = 1.0
    inner_radius: float = 1e-2
    grid: int = 48
    radial_slices: int = 16
    accept_tol: float = ACCEPT_TOL
    rank_tol: float = RANK_TOL
    s2_floor: float = S2_FLOOR
    dedup_tol: float = 1e-4
    tube_radius: float = 0.05
    max_iter: int = 60
    max_orbits: int = 64
    workers: int = 1

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class SingularPoint:
    w: tuple[complex, complex]
    alpha: complex | None
    residual: float
    stratum: str  # "S0" | "S1" | "S2"
    classification: str = "Unclassified"
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "w": [[z.real, z.imag] for z in self.w],
            "alpha": None if self.alpha is None else [self.alpha.real, self.alpha.imag],
            "residual": self.residual,
            "stratum": self.stratum,
            "classification": self.classification,
            "diagnostics": {
                k: (v.tolist() if isinstance(v, np.ndarray) else v)
                for k, v in self.diagnostics.items()
            },
        }


@dataclass
class LocusReport:
    representatives: list[SingularPoint]
    degenerate_locus: bool
    completeness: float  # min 2nd singular value of dP at seeds off the found orbits
    s2_points: list[SingularPoint]
    metadata: dict

    @property
    def orbit_count(self) -> int:
        return len(self.representatives)

    def to_json(self) -> dict:
        return {
            "representatives": [r.to_json() for r in self.representatives],
            "s2_points": [r.to_json() for r in self.s2_points],
            "degenerate_locus": self.degenerate_locus,
            "completeness": self.completeness,
            "metadata": self.metadata,
        }


# ---------------------------------------------------------------------------
# Compiled map data
# ---------------------------------------------------------------------------

class MapCache:
    """Compiled derivative data of one mixed polynomial map C^2 -> C."""

    def __init__(self, poly: MixedPolynomial):
        if poly.n != 2:
            raise ValueError("search machinery is specialized to two variables")
        self.poly = poly
        self.n = poly.n
        self.value = poly.compile()
        self.dz = [poly.wirtinger(j).compile() for j in range(2)]
        self.dzb = [poly.wirtinger(j, barred=True).compile() for j in range(2)]
        hess = mixed_hessian(poly)
        self.hess = [[hess.entries[r][c].compile() for c in range(4)] for r in range(4)]
        self._h_re: list[list[RealPoly]] | None = None
        self._h_im: list[list[RealPoly]] | None = None

    @property
    def h_re(self) -> list[list[RealPoly]]:
        if self._h_re is None:
            self._h_re = real_hessian(self.poly, "re")
        return self._h_re

    @property
    def h_im(self) -> list[list[RealPoly]]:
        if self._h_im is None:
            self._h_im = real_hessian(self.poly, "im")
        return self._h_im

    def grads(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(dz, dzb) values, each of shape (N, 2)."""
        dz = np.stack([d.eval_many(pts) for d in self.dz], axis=1)
        dzb = np.stack([d.eval_many(pts) for d in self.dzb], axis=1)
        return dz, dzb

    def hess_at(self, pts: np.ndarray) -> np.ndarray:
        """Mixed Hessian values, shape (N, 4, 4)."""
        N = pts.shape[0]
        out = np.empty((N, 4, 4), dtype=np.complex128)
        for r in range(4):
            for c in range(r, 4):
                v = self.hess[r][c].eval_many(pts)
                out[:, r, c] = v
                out[:, c, r] = v
        return out


def real_jacobian_many(cache: MapCache, pts: np.ndarray) -> np.ndarray:
    """Real 2x4 Jacobians of (Re P, Im P) over (x1, x2, y1, y2); shape (N,2,4)."""
    dz, dzb = cache.grads(pts)
    dx = dz + dzb            # dP/dx_a
    dy = 1j * (dz - dzb)     # dP/dy_a
    cols = np.concatenate([dx, dy], axis=1)  # (N, 4) complex
    return np.stack([cols.real, cols.imag], axis=1)


def prop1_residual_many(
    cache: MapCache, pts: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Residual of the conj-gradient alignment system at each point.

    Returns (residual, alpha, alpha_set): alpha is estimated from the
    largest-modulus component of grad_zbar P; where that gradient vanishes the
    alpha is unset and the residual is the modulus of the other gradient
    (zero exactly on the S2 stratum).
    """
    dz, dzb = cache.grads(pts)
    a = np.conj(dz)
    b = dzb
    amax = np.abs(a).max(axis=1)
    bmax = np.abs(b).max(axis=1)
    jstar = np.abs(b).argmax(axis=1)
    rows = np.arange(pts.shape[0])
    bsel = b[rows, jstar]
    alpha_set = bmax > 1e-13 * np.maximum(1.0, amax)
    safe = np.where(alpha_set, bsel, 1.0)
    alpha = a[rows, jstar] / safe
    misfit = np.abs(a - alpha[:, None] * b).max(axis=1)
    defect = np.abs(np.abs(alpha) - 1.0)
    residual = np.where(alpha_set, misfit + defect, amax)
    alpha = np.where(alpha_set, alpha, np.nan + 0j)
    return residual, alpha, alpha_set


def prop1_residual(poly: MixedPolynomial, w) -> tuple[complex | None, float]:
    """Single-point convenience wrapper: (alpha or None, residual)."""
    cache = poly if isinstance(poly, MapCache) else MapCache(poly)
    pts = np.array([w], dtype=np.complex128)
    residual, alpha, alpha_set = prop1_residual_many(cache, pts)
    return (complex(alpha[0]) if alpha_set[0] else None), float(residual[0])


def jacobian_stratum(
    poly: MixedPolynomial | MapCache,
    w,
    rank_tol: float = RANK_TOL,
    s2_floor: float = S2_FLOOR,
) -> str:
    cache = poly if isinstance(poly, MapCache) else MapCache(poly)
    jac = real_jacobian_many(cache, np.array([w], dtype=np.complex128))[0]
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv[0] <= s2_floor:
        return "S2"
    if sv[1] <= rank_tol * sv[0]:
        return "S1"
    return "S0"


# ---------------------------------------------------------------------------
# Gauss-Newton refinement
# ---------------------------------------------------------------------------

def _residual_vector(
    cache: MapCache, pts: np.ndarray, alphas: np.ndarray, radius: float | None
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked real residuals and the report residual (prop1 + sphere defect)."""
    dz, dzb = cache.grads(pts)
    r_complex = np.conj(dz) - alphas[:, None] * dzb  # (N, 2)
    rows = [r_complex[:, 0].real, r_complex[:, 0].imag, r_complex[:, 1].real, r_complex[:, 1].imag]
    rows.append(np.abs(alphas) ** 2 - 1.0)
    if radius is not None:
        rows.append((np.abs(pts) ** 2).sum(axis=1) - radius**2)
    res = np.stack(rows, axis=1)
    report = np.abs(r_complex).max(axis=1) + np.abs(np.abs(alphas) - 1.0)
    if radius is not None:
        report = report + np.abs(rows[-1])
    return res, report


def _jacobian(
    cache: MapCache, pts: np.ndarray, alphas: np.ndarray, radius: float | None
) -> np.ndarray:
    """Real Jacobian of the residual system wrt (x1, x2, y1, y2, aRe, aIm)."""
    N = pts.shape[0]
    H = cache.hess_at(pts)
    _, dzb = cache.grads(pts)
    m = 5 + (1 if radius is not None else 0)
    J = np.zeros((N, m, 6))
    for j in range(2):
        # d/dx_k and d/dy_k of conj(P_zj) - alpha * P_zbarj
        for k in range(2):
            dxx = np.conj(H[:, j, k] + H[:, j, 2 + k]) - alphas * (H[:, 2 + j, k] + H[:, 2 + j, 2 + k])
            dyy = -1j * np.conj(H[:, j, k] - H[:, j, 2 + k]) - 1j * alphas * (
                H[:, 2 + j, k] - H[:, 2 + j, 2 + k]
            )
            J[:, 2 * j, k] = dxx.real
            J[:, 2 * j + 1, k] = dxx.imag
            J[:, 2 * j, 2 + k] = dyy.real
            J[:, 2 * j + 1, 2 + k] = dyy.imag
        da_re = -dzb[:, j]
        da_im = -1j * dzb[:, j]
        J[:, 2 * j, 4] = da_re.real
        J[:, 2 * j + 1, 4] = da_re.imag
        J[:, 2 * j, 5] = da_im.real
        J[:, 2 * j + 1, 5] = da_im.imag
    J[:, 4, 4] = 2.0 * alphas.real
    J[:, 4, 5] = 2.0 * alphas.imag
    if radius is not None:
        J[:, 5, 0] = 2.0 * pts[:, 0].real
        J[:, 5, 1] = 2.0 * pts[:, 1].real
        J[:, 5, 2] = 2.0 * pts[:, 0].imag
        J[:, 5, 3] = 2.0 * pts[:, 1].imag
    return J


def refine_batch(
    cache: MapCache,
    seeds: np.ndarray,
    radius: float | None,
    params: SearchParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Damped Gauss-Newton on the singularity system from every seed.

    Returns (points, alphas, residuals, converged).  The iteration works on
    the full batch with an active mask; steps are clipped to a fraction of the
    working radius so seeds cannot tunnel across the annulus.
    """
    pts = np.array(seeds, dtype=np.complex128).reshape(-1, 2).copy()
    N = pts.shape[0]
    _, alpha0, aset = prop1_residual_many(cache, pts)
    alphas = np.where(aset, alpha0, 1.0 + 0j)
    alphas = alphas / np.abs(alphas)
    scale = radius if radius is not None else params.radius
    max_step = 0.25 * scale
    active = np.ones(N, dtype=bool)
    report = np.full(N, np.inf)
    for _ in range(params.max_iter):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        res, rep = _residual_vector(cache, pts[idx], alphas[idx], radius)
        report[idx] = rep
        done = rep < params.accept_tol
        still = idx[~done]
        active[idx[done]] = False
        if still.size == 0:
            continue
        J = _jacobian(cache, pts[still], alphas[still], radius)
        step = -np.matmul(np.linalg.pinv(J, rcond=1e-12), res[~done][:, :, None])[:, :, 0]
        norms = np.linalg.norm(step, axis=1)
        big = norms > max_step
        step[big] *= (max_step / norms[big])[:, None]
        pts[still, 0] += step[:, 0] + 1j * step[:, 2]
        pts[still, 1] += step[:, 1] + 1j * step[:, 3]
        alphas[still] += step[:, 4] + 1j * step[:, 5]
        # keep blow-ups from wasting iterations
        bad = (np.abs(pts[still]).sum(axis=1) > 10 * scale) | ~np.isfinite(
            pts[still].sum(axis=1)
        )
        active[still[bad]] = False
        report[still[bad]] = np.inf
    res, rep = _residual_vector(cache, pts, alphas, radius)
    converged = rep < params.accept_tol
    return pts, alphas, rep, converged


def refine(
    poly: MixedPolynomial | MapCache,
    w0,
    radius: float | None = None,
    params: SearchParams | None = None,
):
    """Refine one seed; raises NonConvergence when it leaves the basin."""
    cache = poly if isinstance(poly, MapCache) else MapCache(poly)
    params = params or SearchParams()
    pts, alphas, rep, conv = refine_batch(
        cache, np.array([w0], dtype=np.complex128), radius, params
    )
    if not conv[0]:
        raise NonConvergence(f"refinement diverged from seed {w0} (residual {rep[0]:.3e})")
    return (complex(pts[0, 0]), complex(pts[0, 1])), complex(alphas[0]), float(rep[0])


# ---------------------------------------------------------------------------
# Orbit bookkeeping
# ---------------------------------------------------------------------------

def orbit_invariants(w, weights: tuple[int, int]) -> tuple[float, float, float, float]:
    """Complete S^1-orbit invariant of a point: moduli plus the phase of
    w2^p1 * conj(w1)^p2 (constant along the orbit since gcd(p1, p2) = 1)."""
    w1, w2 = complex(w[0]), complex(w[1])
    p1, p2 = weights
    r1, r2 = abs(w1), abs(w2)
    scale = max(r1, r2, 1e-300)
    if r1 < 1e-9 * scale or r2 < 1e-9 * scale:
        return (r1, r2, 0.0, 0.0)
    phi = p1 * math.atan2(w2.imag, w2.real) - p2 * math.atan2(w1.imag, w1.real)
    return (r1, r2, math.cos(phi), math.sin(phi))


def canonical_orbit_point(w, weights: tuple[int, int]) -> tuple[complex, complex]:
    """Rotate w along its orbit so z1 (or z2 if z1 = 0) has argument ~0, with
    the remaining discrete freedom fixed by the smallest nonneg arg of z2."""
    w1, w2 = complex(w[0]), complex(w[1])
    p1, p2 = weights
    scale = max(abs(w1), abs(w2), 1e-300)
    if abs(w1) > 1e-9 * scale:
        theta0 = -math.atan2(w1.imag, w1.real) / p1
        best = None
        for k in range(abs(p1)):
            th = theta0 + TWO_PI * k / p1
            cand = act_point((w1, w2), complex(math.cos(th), math.sin(th)), weights)
            a2 = math.atan2(cand[1].imag, cand[1].real) % TWO_PI if abs(w2) > 1e-9 * scale else 0.0
            if best is None or a2 < best[0]:
                best = (a2, cand)
        return best[1]
    theta0 = -math.atan2(w2.imag, w2.real) / p2
    return act_point((w1, w2), complex(math.cos(theta0), math.sin(theta0)), weights)


def _dedupe_orbits(
    pts: np.ndarray, alphas: np.ndarray, reps_resid: np.ndarray, weights, tol: float
) -> list[tuple[tuple[complex, complex], complex, float]]:
    found: list[tuple[np.ndarray, tuple, complex, float]] = []
    order = np.argsort(reps_resid)
    for i in order:
        w = (complex(pts[i, 0]), complex(pts[i, 1]))
        inv = np.array(orbit_invariants(w, weights))
        scale = max(1.0, float(np.linalg.norm(inv[:2])))
        if any(np.linalg.norm(inv - f[0]) < tol * scale for f in found):
            continue
        found.append((inv, w, complex(alphas[i]), float(reps_resid[i])))
    return [(f[1], f[2], f[3]) for f in found]


# ---------------------------------------------------------------------------
# Intrinsic second differential and classification
# ---------------------------------------------------------------------------

@dataclass
class SecondFormReport:
    restricted: np.ndarray          # 3x3 symmetric form on the kernel
    representation: np.ndarray      # 4x3 matrix of d^2P against the kernel
    eigenvalues: np.ndarray
    rank_representation: int
    image_dir: np.ndarray
    cokernel_dir: np.ndarray
    kernel_basis: np.ndarray        # 4x3
    jacobian_sv: np.ndarray


def intrinsic_second_form(
    poly: MixedPolynomial | MapCache,
    w,
    rank_tol: float = RANK_TOL,
    kernel_gap: float = KERNEL_GAP,
) -> SecondFormReport:
    """Second differential of the map at a rank-1 point, against ker dP.

    The target is rotated so the image of dP is the first coordinate; the
    cokernel component then has a critical point at w and its Hessian
    restricted to the kernel is the intrinsic quadratic form deciding the
    fold type.
    """
    cache = poly if isinstance(poly, MapCache) else MapCache(poly)
    jac = real_jacobian_many(cache, np.array([w], dtype=np.complex128))[0]
    U, sv, Vt = np.linalg.svd(jac)
    if sv[0] <= 0 or sv[1] * kernel_gap > sv[0]:
        raise NonConvergence(
            f"numerically ambiguous kernel: jacobian singular values {sv}"
        )
    u_img = U[:, 0]
    u_cok = U[:, 1]
    kernel = Vt[1:4].T  # 4x3
    xy = xy_coords(w)
    hq = u_cok[0] * eval_real_matrix(cache.h_re, xy) + u_cok[1] * eval_real_matrix(
        cache.h_im, xy
    )
    representation = hq @ kernel
    restricted = kernel.T @ hq @ kernel
    restricted = 0.5 * (restricted + restricted.T)
    eig = np.linalg.eigvalsh(restricted)
    return SecondFormReport(
        restricted=restricted,
        representation=representation,
        eigenvalues=eig,
        rank_representation=numeric_rank(representation, rank_tol),
        image_dir=u_img,
        cokernel_dir=u_cok,
        kernel_basis=kernel,
        jacobian_sv=sv,
    )


def classify(
    poly: MixedPolynomial | MapCache,
    w,
    params: SearchParams | None = None,
    alpha: complex | None = None,
    residual: float | None = None,
) -> SingularPoint:
    """Full verdict at one point: Regular, fold type, MorseCandidate, or
    Degenerate.  A fold needs the 4x3 representation of the second
    differential at full rank and the restricted 3x3 form nondegenerate;
    definite vs indefinite is the eigenvalue sign pattern."""
    cache = poly if isinstance(poly, MapCache) else MapCache(poly)
    params = params or SearchParams()
    if alpha is None or residual is None:
        alpha, residual = prop1_residual(cache, w)
    diagnostics: dict = {}
    if residual > 10 * params.accept_tol:
        return SingularPoint(tuple(w), alpha, residual, "S0", "Regular", diagnostics)
    stratum = jacobian_stratum(cache, w, params.rank_tol, params.s2_floor)
    if stratum == "S2":
        return SingularPoint(tuple(w), None, residual, "S2", "MorseCandidate", diagnostics)
    if stratum == "S0":
        return SingularPoint(tuple(w), alpha, residual, "S0", "Regular", diagnostics)
    h_num = np.array(
        [[c.eval_one(np.asarray(w)) for c in row] for row in cache.hess], dtype=np.complex128
    )
    diagnostics["rank_mixed_hessian"] = numeric_rank(h_num, params.rank_tol)
    try:
        form = intrinsic_second_form(cache, w, params.rank_tol)
    except NonConvergence as exc:
        diagnostics["error"] = str(exc)
        return SingularPoint(tuple(w), alpha, residual, "S1", "Degenerate", diagnostics)
    diagnostics["eigenvalues"] = form.eigenvalues
    diagnostics["rank_d2_representation"] = form.rank_representation
    diagnostics["jacobian_sv"] = form.jacobian_sv
    eig = form.eigenvalues
    floor = EIG_FLOOR * max(1.0, float(np.abs(eig).max()))
    if form.rank_representation < 3 or np.any(np.abs(eig) < floor):
        return SingularPoint(tuple(w), alpha, residual, "S1", "Degenerate", diagnostics)
    if np.all(eig > 0) or np.all(eig < 0):
        verdict = "DefiniteFold"
    else:
        verdict = "IndefiniteFold"
    return SingularPoint(tuple(w), alpha, residual, "S1", verdict, diagnostics)


# ---------------------------------------------------------------------------
# Locus search
# ---------------------------------------------------------------------------

def _seed_grid(params: SearchParams, radii: list[float]) -> np.ndarray:
    g = params.grid
    psis = (np.arange(g) + 0.5) * (0.5 * math.pi / g)
    phis = np.arange(g) * (TWO_PI / g)
    seeds = []
    for r in radii:
        for psi in psis:
            z1 = r * math.cos(psi)
            z2mod = r * math.sin(psi)
            for phi in phis:
                seeds.append((z1, z2mod * complex(math.cos(phi), math.sin(phi))))
        # axis slices: z1 = 0 and z2 = 0
        for phi in phis:
            seeds.append((0.0, r * complex(math.cos(phi), math.sin(phi))))
            seeds.append((r * complex(math.cos(phi), math.sin(phi)), 0.0))
    return np.array(seeds, dtype=np.complex128)


def locus_search(
    poly: MixedPolynomial,
    weights: WeightSystem,
    params: SearchParams | None = None,
) -> LocusReport:
    """Find, refine, and classify the singular orbits of a polar weighted
    homogeneous P in the working annulus.

    When P is also radially homogeneous the locus is a cone, so only the
    sphere of the working radius is scanned and refinement carries a sphere
    constraint; otherwise seeds cover geometric radial shells and the sphere
    constraint is dropped (orbits sit on spheres of unknown radii).
    """
    params = params or SearchParams()
    hom = polar_radial_degrees(poly, weights)
    if hom.polar_degree is None:
        raise ValueError(f"locus search needs polar homogeneity: {hom.failure_reason()}")
    radial = hom.radial_degree is not None
    cache = MapCache(poly)
    wts = (weights.p[0], weights.p[1])

    if radial:
        radii = [params.radius]
        sphere: float | None = params.radius
    else:
        k = params.radial_slices
        lo, hi = params.inner_radius, params.radius
        radii = [lo * (hi / lo) ** (i / (k - 1)) for i in range(k)] if k > 1 else [hi]
        sphere = None

    seeds = _seed_grid(params, radii)
    pts, alphas, resid, conv = refine_batch(cache, seeds, sphere, params)

    # keep converged points inside the working annulus and off the origin
    norms = np.linalg.norm(np.abs(pts), axis=1)
    floor = 1e-3 * params.radius if radial else 0.25 * params.inner_radius
    keep = conv & (norms > floor) & (norms < 2.0 * params.radius)
    good = np.nonzero(keep)[0]

    strata = []
    for i in good:
        strata.append(jacobian_stratum(cache, pts[i], params.rank_tol, params.s2_floor))
    strata = np.array(strata) if strata else np.empty(0, dtype="U2")

    s1_idx = good[strata == "S1"] if good.size else good
    s2_idx = good[strata == "S2"] if good.size else good

    degenerate = False
    uniq = _dedupe_orbits(pts[s1_idx], alphas[s1_idx], resid[s1_idx], wts, params.dedup_tol) if s1_idx.size else []
    if len(uniq) > params.max_orbits:
        degenerate = True
        uniq = uniq[: params.max_orbits]

    reps: list[SingularPoint] = []
    for w, alpha, r in uniq:
        wc = canonical_orbit_point(w, wts)
        sp = classify(cache, wc, params)
        sp.residual = min(sp.residual, r)
        reps.append(sp)
    reps.sort(key=lambda s: (abs(s.w[0]), abs(s.w[1]), s.w[1].real))

    s2_pts: list[SingularPoint] = []
    seen_s2: list[np.ndarray] = []
    for i in s2_idx:
        v = pts[i]
        if any(np.linalg.norm(v - u) < params.dedup_tol * max(1.0, np.linalg.norm(u)) for u in seen_s2):
            continue
        seen_s2.append(v)
        s2_pts.append(
            SingularPoint((complex(v[0]), complex(v[1])), None, float(resid[i]), "S2", "MorseCandidate")
        )

    # completeness: smallest second singular value of dP over seeds away from
    # every found orbit (a lower bound witness that nothing was missed there)
    inv_reps = [np.array(orbit_invariants(r.w, wts)) for r in reps] + [
        np.array(orbit_invariants(r.w, wts)) for r in s2_pts
    ]
    jacs = real_jacobian_many(cache, seeds)
    sv = np.linalg.svd(jacs, compute_uv=False)[:, 1]
    off = np.ones(len(seeds), dtype=bool)
    if inv_reps:
        for i, s in enumerate(seeds):
            inv = np.array(orbit_invariants((s[0], s[1]), wts))
            if any(np.linalg.norm(inv - ir) < params.tube_radius for ir in inv_reps):
                off[i] = False
    completeness = float(sv[off].min()) if off.any() else 0.0

    if degenerate or (conv.mean() > 0.5 and len(uniq) >= params.max_orbits):
        degenerate = True

    return LocusReport(
        representatives=reps,
        degenerate_locus=degenerate,
        completeness=completeness,
        s2_points=s2_pts,
        metadata={
            "seeds": int(len(seeds)),
            "converged": int(conv.sum()),
            "radial_homogeneous": radial,
            "polar_degree": hom.polar_degree,
            "radial_degree": hom.radial_degree,
            "params": params.to_json(),
        },
    )


# ---------------------------------------------------------------------------
# Orbit invariance of Proposition 1 data
# ---------------------------------------------------------------------------

@dataclass
class OrbitInvarianceReport:
    max_residual: float
    max_alpha_deviation: float
    samples: int
    ok: bool


def orbit_invariance_check(
    poly: MixedPolynomial,
    weights: WeightSystem,
    w,
    samples: int = 32,
    tol: float = 1e-9,
) -> OrbitInvarianceReport:
    """Check that s o w stays singular with alpha transported by s^(-2 d_p)."""
    hom = polar_radial_degrees(poly, weights)
    if hom.polar_degree is None:
        raise ValueError("needs a polar weighted homogeneous polynomial")
    cache = MapCache(poly)
    alpha0, res0 = prop1_residual(cache, w)
    if alpha0 is None:
        raise ValueError("base point has no alpha (S2 stratum)")
    worst_res = res0
    worst_dev = 0.0
    for k in range(samples):
        th = TWO_PI * k / samples
        s = complex(math.cos(th), math.sin(th))
        wk = act_point(w, s, weights.p)
        alpha_k, res_k = prop1_residual(cache, wk)
        predicted = s ** (-2 * hom.polar_degree) * alpha0
        worst_res = max(worst_res, res_k)
        if alpha_k is not None:
            worst_dev = max(worst_dev, abs(alpha_k - predicted))
    return OrbitInvarianceReport(
        max_residual=worst_res,
        max_alpha_deviation=worst_dev,
        samples=samples,
        ok=worst_res < tol and worst_dev < tol,
    )


# ---------------------------------------------------------------------------
# Fold normal forms (classifier calibration targets)
# ---------------------------------------------------------------------------

def fold_normal_form(signs: tuple[int, int, int]) -> MixedPolynomial:
    """The model map (u1, s2*u2^2 + s3*u3^2 + s4*u4^2) on R^4 = C^2 as a mixed
    polynomial, with real coordinates (u1..u4) = (x1, x2, y1, y2)."""
    if len(signs) != 3 or any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be three values +-1")
    re = RealPoly(4, {(1, 0, 0, 0): Fraction(1)})
    im_terms = {
        (0, 2, 0, 0): Fraction(signs[0]),
        (0, 0, 2, 0): Fraction(signs[1]),
        (0, 0, 0, 2): Fraction(signs[2]),
    }
    return RealPolyPair(2, re, RealPoly(4, im_terms)).to_mixed()
