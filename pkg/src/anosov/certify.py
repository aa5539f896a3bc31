"""Empirical certification machinery.

Gap profiles over word-metric balls, lower-envelope Anosov certificates,
positivity and semi-proximality scans in exterior powers, limit-map sampling
with transversality and span audits, signed-eigenvalue tracking along
deformation paths, and a projective ping-pong power search.

Verdicts produced here are empirical statements about a finite ball radius,
never proofs.  Identical inputs (including seeds) give byte-identical
reports; thread counts only partition work and cannot change any output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    InsufficientRadius,
    NoProximalElements,
    NotBiproximal,
    TransversalityFailure,
)
from .exterior import compound_matrix, plucker_point
from .linalg import (
    EPS_GAP,
    TRANSVERSALITY_COND,
    ScaledMatrix,
    is_transverse,
    orthonormalize,
    proximality_report,
    singular_values,
    spectrum,
)
from .words import (
    Ball,
    Presentation,
    Representation,
    Word,
    conjugacy_key,
    enumerate_ball,
    evaluate,
    is_primitive_cyclic,
    word_str,
)

_T = TypeVar("_T")
_U = TypeVar("_U")

REFUTATION_TOL = 1e-9
DEFAULT_ALPHA_MIN = 0.05
DEFAULT_ELL_MIN = 2


def _parallel_map(fn: Callable[[_T], _U], items: Sequence[_T], threads: int) -> list[_U]:
    """Order-preserving map; results do not depend on the thread count."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _ball_matrices(
    rep: Representation, ball: Ball
) -> tuple[list[Word], list[ScaledMatrix]]:
    """Evaluate every ball word once, sharing prefixes (one multiply per word)."""
    cache: dict[tuple[int, ...], ScaledMatrix] = {}
    words = list(ball.words())
    return words, [evaluate(rep, w, cache) for w in words]


def compound_rep(rep: Representation, k: int) -> Representation:
    """Generator-wise induced representation on the k-th exterior power."""
    if k == 1:
        return rep
    return Representation.from_generators(
        rep.presentation, [compound_matrix(g, k) for g in rep.images]
    )


# ---------------------------------------------------------------------------
# gap profiles and certificates


@dataclass(frozen=True)
class GapRow:
    word: str
    length: int
    log_gap: float
    log_total: float


@dataclass(frozen=True)
class GapProfile:
    """Per-word log singular-value gaps over a ball, at one index k."""

    k: int
    radius: int
    dim: int
    presentation: str
    rows: tuple[GapRow, ...]

    def per_length_minima(self, column: str = "log_gap") -> dict[int, float]:
        out: dict[int, float] = {}
        for row in self.rows:
            val = getattr(row, column)
            if row.length not in out or val < out[row.length]:
                out[row.length] = val
        return out


def gap_profile(
    rep: Representation, k: int, radius: int, threads: int = 1
) -> GapProfile:
    """log(sigma_k / sigma_{k+1}) and log(sigma_1 / sigma_d) per canonical word."""
    d = rep.dim
    if not 1 <= k <= d - 1:
        raise DimensionMismatch(f"k={k} out of range for dimension {d}")
    ball = enumerate_ball(rep.presentation, radius)
    words, mats = _ball_matrices(rep, ball)

    def row(iw: tuple[Word, ScaledMatrix]) -> GapRow:
        w, m = iw
        sv = singular_values(m)
        return GapRow(
            word=str(w),
            length=len(w),
            log_gap=max(sv.log_gap(k), 0.0),
            log_total=sv.log_total_ratio,
        )

    rows = _parallel_map(row, list(zip(words, mats)), threads)
    return GapProfile(
        k=k,
        radius=radius,
        dim=d,
        presentation=rep.presentation.describe(),
        rows=tuple(rows),
    )


@dataclass(frozen=True)
class EnvelopeFit:
    """Least-squares line through the per-length minima of a profile column."""

    slope: float
    intercept: float
    min_margin: float
    minima: tuple[tuple[int, float], ...]


def _envelope_fit(profile: GapProfile, column: str, ell_min: int) -> EnvelopeFit:
    minima = profile.per_length_minima(column)
    xs = np.array([l for l in sorted(minima) if l >= ell_min], dtype=float)
    ys = np.array([minima[int(l)] for l in xs])
    design = np.vstack([xs, np.ones_like(xs)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, ys, rcond=None)
    return EnvelopeFit(
        slope=float(slope),
        intercept=float(intercept),
        min_margin=minima[profile.radius],
        minima=tuple((int(l), minima[int(l)]) for l in sorted(minima)),
    )


def _minima_nondecreasing_top_half(fit: EnvelopeFit, radius: int) -> bool:
    start = max(2, math.ceil(radius / 2))
    vals = [v for l, v in fit.minima if l >= start]
    return all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


@dataclass(frozen=True)
class CertificateEstimate:
    """Fitted lower envelope of a gap profile with an empirical verdict.

    Certified: slope alpha_hat >= alpha_min and per-length minima
    nondecreasing over the top half of the radii.  Refuted: some word of
    length >= 2 has a vanishing gap; the reported witness is the first word
    of any positive length whose gap vanishes.  Everything else is
    Inconclusive.  The quasi-isometry fit applies the same machinery to the
    total ratio log(sigma_1 / sigma_d).
    """

    k: int
    radius: int
    alpha_hat: float
    logC_hat: float
    min_margin: float
    verdict: str
    witness: str | None
    qie: EnvelopeFit
    qie_passed: bool
    alpha_min: float
    ell_min: int


def certify_anosov(
    profile: GapProfile,
    alpha_min: float = DEFAULT_ALPHA_MIN,
    ell_min: int = DEFAULT_ELL_MIN,
) -> CertificateEstimate:
    if profile.radius < ell_min + 2:
        raise InsufficientRadius(
            f"radius {profile.radius} < ell_min + 2 = {ell_min + 2}"
        )
    fit = _envelope_fit(profile, "log_gap", ell_min)
    refuted = any(
        row.length >= 2 and row.log_gap < REFUTATION_TOL for row in profile.rows
    )
    witness = None
    for row in profile.rows:
        if row.length >= 1 and row.log_gap < REFUTATION_TOL:
            witness = row.word
            break
    qie = _envelope_fit(profile, "log_total", ell_min)
    qie_passed = qie.slope >= alpha_min and _minima_nondecreasing_top_half(
        qie, profile.radius
    )
    if refuted:
        verdict = "Refuted"
    elif fit.slope >= alpha_min and _minima_nondecreasing_top_half(fit, profile.radius):
        verdict = "Certified"
        witness = None
    else:
        verdict = "Inconclusive"
    return CertificateEstimate(
        k=profile.k,
        radius=profile.radius,
        alpha_hat=fit.slope,
        logC_hat=fit.intercept,
        min_margin=fit.min_margin,
        verdict=verdict,
        witness=witness,
        qie=qie,
        qie_passed=qie_passed,
        alpha_min=alpha_min,
        ell_min=ell_min,
    )


# ---------------------------------------------------------------------------
# positivity scans


@dataclass(frozen=True)
class PositivityRow:
    word: str
    length: int
    proximal: bool
    ell1_sign: int  # +-1 when defined, 0 otherwise
    semiproximal_positive: bool
    log_gap: float


@dataclass(frozen=True)
class PositivityReport:
    """Positive-proximality verdict for a ball acting on an exterior power.

    The verdict restricts the subgroup-level notion to the scanned ball:
    PositivelyProximal when proximal elements exist and all have positive
    top eigenvalue, NotPositivelyProximal with the first counterexample as
    witness, NoProximalFound otherwise.  Words failing positive
    semi-proximality obstruct any invariant properly convex cone, so they
    are collected separately.
    """

    k: int
    radius: int
    dim_scanned: int
    rows: tuple[PositivityRow, ...]
    n_proximal: int
    n_negative: int
    verdict: str
    witness: str | None
    witness_recheck: bool
    semiproximal_failures: tuple[str, ...]


def scan_positivity(
    rep: Representation,
    k: int,
    radius: int,
    eps_gap: float = EPS_GAP,
    threads: int = 1,
) -> PositivityReport:
    """Scan signed top eigenvalues of the induced exterior-power action.

    The scan multiplies compound generator images along the ball; a
    NotPositivelyProximal witness is re-verified through the independent
    route (compound of the base-dimension product, fresh eigensolve).
    """
    crep = compound_rep(rep, k)
    ball = enumerate_ball(rep.presentation, radius)
    words, mats = _ball_matrices(crep, ball)

    def row(iw: tuple[Word, ScaledMatrix]) -> PositivityRow:
        w, m = iw
        sp = spectrum(m, eps_gap=eps_gap)
        proximal = sp.is_proximal(1) if m.dim > 1 else False
        return PositivityRow(
            word=str(w),
            length=len(w),
            proximal=proximal,
            ell1_sign=sp.top_sign or 0,
            semiproximal_positive=sp.is_semiproximal_positive,
            log_gap=sp.log_gap(1) if m.dim > 1 else 0.0,
        )

    rows = _parallel_map(row, list(zip(words, mats)), threads)
    n_proximal = sum(1 for r in rows if r.proximal)
    n_negative = sum(1 for r in rows if r.proximal and r.ell1_sign < 0)
    witness = next(
        (r.word for r in rows if r.proximal and r.ell1_sign < 0), None
    )
    if n_proximal == 0:
        verdict = "NoProximalFound"
    elif witness is not None:
        verdict = "NotPositivelyProximal"
    else:
        verdict = "PositivelyProximal"
    recheck = False
    if witness is not None:
        base = evaluate(rep, next(w for w in words if str(w) == witness))
        lifted = compound_matrix(base, k) if k > 1 else base
        sp = spectrum(lifted, eps_gap=eps_gap)
        recheck = sp.is_proximal(1) and sp.top_sign == -1
    failures = tuple(r.word for r in rows if not r.semiproximal_positive)
    return PositivityReport(
        k=k,
        radius=radius,
        dim_scanned=crep.dim,
        rows=tuple(rows),
        n_proximal=n_proximal,
        n_negative=n_negative,
        verdict=verdict,
        witness=witness,
        witness_recheck=recheck,
        semiproximal_failures=failures,
    )


# ---------------------------------------------------------------------------
# limit-map sampling


@dataclass(frozen=True)
class LimitSample:
    """Attracting data of one primitive conjugacy class and its inverse.

    ``plus_k`` is the attracting k-plane of the element, ``minus_dk`` the
    attracting (d-k)-plane of its inverse (the repelling complement).  The
    secondary planes ``minus_k`` / ``plus_dk`` exist when the inverse gap is
    also open (biproximality) and feed the span and transversality audits.
    """

    word: str
    inverse_word: str
    dynamics_preserving: bool
    log_gap: float
    plus_k: np.ndarray | None
    minus_dk: np.ndarray | None
    minus_k: np.ndarray | None
    plus_dk: np.ndarray | None


def limit_map_sample(
    rep: Representation,
    k: int,
    radius: int,
    eps_gap: float = EPS_GAP,
    seed: int = 0,
) -> list[LimitSample]:
    """One sample per conjugacy-distinct primitive ball word (cyclic dedup).

    Raises NoProximalElements when no sampled word is proximal at k.
    """
    if radius < 2:
        raise InsufficientRadius("limit sampling needs radius >= 2")
    ball = enumerate_ball(rep.presentation, radius)
    samples: list[LimitSample] = []
    seen: set[tuple[int, ...]] = set()
    any_proximal = False
    index = 0
    for w in ball.words():
        if len(w) == 0 or not is_primitive_cyclic(w.letters):
            continue
        key = conjugacy_key(w.letters)
        if key in seen:
            continue
        seen.add(key)
        m = evaluate(rep, w)
        rng = np.random.default_rng([seed, index])
        index += 1
        fwd = proximality_report(m, k, eps_gap=eps_gap, rng=rng)
        plus_k = minus_dk = minus_k = plus_dk = None
        dynamics = False
        log_gap = fwd.log_gap
        if fwd.is_proximal:
            any_proximal = True
            plus_k, minus_dk = fwd.attracting_plane, fwd.repelling_plane
            dynamics = True
        if fwd.is_biproximal:
            bwd = proximality_report(
                m.inverse(), k, eps_gap=eps_gap, rng=rng, verify=False
            )
            minus_k, plus_dk = bwd.attracting_plane, bwd.repelling_plane
        samples.append(
            LimitSample(
                word=str(w),
                inverse_word=word_str(w.inverse().letters),
                dynamics_preserving=dynamics,
                log_gap=log_gap,
                plus_k=plus_k,
                minus_dk=minus_dk,
                minus_k=minus_k,
                plus_dk=plus_dk,
            )
        )
    if not any_proximal:
        raise NoProximalElements(f"no P_{k}-proximal element in the radius-{radius} ball")
    return samples


@dataclass(frozen=True)
class LimitAudit:
    """Transversality and Pluecker-span audit over sampled boundary points."""

    n_samples: int
    n_boundary_points: int
    n_pairs_checked: int
    transversality_failures: tuple[tuple[str, str], ...]
    span_rank: int
    span_dim: int

    @property
    def all_transverse(self) -> bool:
        return not self.transversality_failures

    @property
    def spanning(self) -> bool:
        return self.span_rank == self.span_dim


def audit_limit_samples(
    samples: Sequence[LimitSample],
    cond_threshold: float = TRANSVERSALITY_COND,
    span_cutoff: float = 1e-8,
) -> LimitAudit:
    """Check pairwise transversality of (k, d-k)-plane pairs and span rank."""
    points: list[tuple[str, np.ndarray | None, np.ndarray | None]] = []
    for s in samples:
        points.append((s.word, s.plus_k, s.plus_dk))
        points.append((s.inverse_word, s.minus_k, s.minus_dk))
    failures: list[tuple[str, str]] = []
    checked = 0
    for label_x, k_plane, _ in points:
        if k_plane is None:
            continue
        for label_y, _, dk_plane in points:
            if label_y == label_x or dk_plane is None:
                continue
            checked += 1
            if not is_transverse(k_plane, dk_plane, cond_threshold):
                failures.append((label_x, label_y))
    k_planes = [p for _, p, _ in points if p is not None]
    span_rank, span_dim = 0, 0
    if k_planes:
        coords = np.stack([plucker_point(p).unit().coeffs for p in k_planes])
        span_dim = coords.shape[1]
        sv = np.linalg.svd(coords, compute_uv=False)
        span_rank = int(np.sum(sv > span_cutoff * sv[0]))
    return LimitAudit(
        n_samples=len(samples),
        n_boundary_points=sum(1 for _, p, _ in points if p is not None),
        n_pairs_checked=checked,
        transversality_failures=tuple(failures),
        span_rank=span_rank,
        span_dim=span_dim,
    )


# ---------------------------------------------------------------------------
# signed-eigenvalue tracking along paths


@dataclass(frozen=True)
class SignTrace:
    """Signs of the top eigenvalue of one word along a representation path.

    ConstantSign: proximal at every step with constant sign.  Inconclusive:
    proximality failed at ``failing_step`` (no sign claim is made).
    SignChange: proximal at every sampled step yet the sign flips at
    ``failing_step``, which certifies a proximality loss between samples,
    since along a continuous path of proximal matrices the signed top
    eigenvalue cannot change sign.
    """

    word: str
    k: int
    signs: tuple[int, ...]
    proximal: tuple[bool, ...]
    verdict: str
    failing_step: int | None


def track_ell1_along_path(
    path: Sequence[Representation],
    word: Word | Sequence[int],
    k: int,
    eps_gap: float = EPS_GAP,
) -> SignTrace:
    signs: list[int] = []
    proximal: list[bool] = []
    for rep in path:
        base = evaluate(rep, word)
        scanned = compound_matrix(base, k) if k > 1 else base
        sp = spectrum(scanned, eps_gap=eps_gap)
        proximal.append(sp.is_proximal(1))
        signs.append(sp.top_sign or 0)
    letters = word.letters if isinstance(word, Word) else tuple(word)
    failing: int | None = None
    if not all(proximal):
        verdict = "Inconclusive"
        failing = proximal.index(False)
    else:
        changes = [i for i in range(1, len(signs)) if signs[i] != signs[i - 1]]
        if changes:
            verdict = "SignChange"
            failing = changes[0]
        else:
            verdict = "ConstantSign"
    return SignTrace(
        word=word_str(letters),
        k=k,
        signs=tuple(signs),
        proximal=tuple(proximal),
        verdict=verdict,
        failing_step=failing,
    )


# ---------------------------------------------------------------------------
# projective ping-pong


@dataclass(frozen=True)
class PingpongResult:
    n: int
    delta: float


def _hyperplane_normal(plane: np.ndarray) -> np.ndarray:
    null = scipy.linalg.null_space(plane.T)
    if null.shape[1] != 1:
        raise TransversalityFailure("repelling plane is not a hyperplane")
    vec = null[:, 0]
    lead = vec[int(np.argmax(np.abs(vec)))]
    return vec if lead > 0 else -vec


def _sin_distance_points(u: np.ndarray, v: np.ndarray) -> float:
    return math.sqrt(max(0.0, 1.0 - float(u @ v) ** 2))


def _direction_samples(d: int, count: int = 8192) -> np.ndarray:
    """Deterministic unit sample directions (dense half-circle grid for d=2)."""
    if d == 2:
        phis = np.linspace(0.0, math.pi, count, endpoint=False)
        return np.stack([np.cos(phis), np.sin(phis)], axis=1)
    rng = np.random.default_rng(0)
    dirs = rng.standard_normal((count, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return dirs


def _contraction_sup(
    entries: np.ndarray, x: np.ndarray, normal: np.ndarray, delta: float, dirs: np.ndarray
) -> float:
    """Numeric sup of dist(m u, x) over directions with dist(u, hyperplane) >= delta.

    Sampled, hence an empirical bound; in dimension 2 the dense grid makes it
    effectively exact.
    """
    mask = np.abs(dirs @ normal) >= delta
    if not np.any(mask):
        return 0.0
    images = dirs[mask] @ entries.T
    norms = np.linalg.norm(images, axis=1)
    good = norms > 0
    projections = (images[good] @ x) / norms[good]
    return float(np.sqrt(np.maximum(0.0, 1.0 - projections**2)).max())


def pingpong_power(
    rep: Representation,
    g: Word | Sequence[int],
    t: Word | Sequence[int] | np.ndarray | ScaledMatrix,
    max_n: int = 20,
    eps_gap: float = EPS_GAP,
    cond_threshold: float = TRANSVERSALITY_COND,
) -> PingpongResult | None:
    """Smallest N for which g^{+-N} and (t g t^-1)^{+-N} play projective ping-pong.

    Each of the four maps must send the complement of the delta-neighborhood
    of its repelling hyperplane into the delta-neighborhood of its attracting
    point, for a delta (found by bisection) small enough that the attracting
    neighborhoods stay clear of every other map's repelling neighborhood.
    Distances are sines of angles in projective space.

    ``t`` may be a word of the group or an explicit conjugating matrix (for
    example a rotation moving the axis of g onto a transverse axis).
    Returns None when no N <= max_n satisfies the criterion.
    """
    mg = evaluate(rep, g)
    sp = spectrum(mg, eps_gap=eps_gap)
    tol = math.log1p(eps_gap)
    if not (sp.log_gap(1) > tol and sp.log_gap(mg.dim - 1) > tol):
        raise NotBiproximal("base element is not biproximal at k = 1")
    if isinstance(t, (Word, tuple, list)):
        conj = evaluate(rep, t)
    elif isinstance(t, ScaledMatrix):
        conj = t
    else:
        conj = ScaledMatrix.from_array(np.asarray(t, dtype=float))
    if conj.dim != mg.dim:
        raise DimensionMismatch("conjugator dimension mismatch")

    fwd = proximality_report(mg, 1, eps_gap=eps_gap, verify=False)
    bwd = proximality_report(mg.inverse(), 1, eps_gap=eps_gap, verify=False)
    b_mat = conj @ mg @ conj.inverse()

    def transported(point: np.ndarray, plane: np.ndarray):
        p = conj.entries @ point
        return p / np.linalg.norm(p), orthonormalize(conj.entries @ plane)

    players = []  # (name, base matrix, attracting point, repelling plane, its normal)
    for name, base, report in (("g", mg, fwd), ("g^-1", mg.inverse(), bwd)):
        x = report.attracting_plane[:, 0]
        plane = report.repelling_plane
        players.append((name, base, x, plane, _hyperplane_normal(plane)))
    for name, base, report in (
        ("tgt^-1", b_mat, fwd),
        ("tg^-1t^-1", b_mat.inverse(), bwd),
    ):
        x, plane = transported(report.attracting_plane[:, 0], report.repelling_plane)
        players.append((name, base, x, plane, _hyperplane_normal(plane)))

    inverse_of = {0: 1, 1: 0, 2: 3, 3: 2}
    separations: list[float] = []
    for i, (_, _, x_i, _, _) in enumerate(players):
        for j, (_, _, _, plane_j, n_j) in enumerate(players):
            if j == inverse_of[i]:
                continue
            sep = abs(float(x_i @ n_j))
            if sep == 0.0 or not is_transverse(
                x_i.reshape(-1, 1), plane_j, cond_threshold
            ):
                raise TransversalityFailure(
                    "attracting/repelling data is not pairwise transverse"
                )
            separations.append(sep)
    for i in range(len(players)):
        for j in range(i + 1, len(players)):
            separations.append(_sin_distance_points(players[i][2], players[j][2]))
    delta_cap = 0.999 * min(separations) / 2.0
    if delta_cap <= 0.0:
        raise TransversalityFailure("degenerate fixed-point configuration")

    dirs = _direction_samples(mg.dim)

    def worst(delta: float, powers: list[ScaledMatrix]) -> float:
        return max(
            _contraction_sup(p.entries, x, n, delta, dirs)
            for p, (_, _, x, _, n) in zip(powers, players)
        )

    for n_power in range(1, max_n + 1):
        powers = [base.power(n_power) for _, base, _, _, _ in players]
        if worst(delta_cap, powers) > delta_cap:
            continue
        lo, hi = 0.0, delta_cap
        for _ in range(60):
            mid = (lo + hi) / 2.0
            if mid == lo or mid == hi:
                break
            if worst(mid, powers) <= mid:
                hi = mid
            else:
                lo = mid
        return PingpongResult(n=n_power, delta=hi)
    return None


def pingpong_subgroup(
    rep: Representation,
    g: Word | Sequence[int],
    t: Word | Sequence[int] | np.ndarray | ScaledMatrix,
    n: int,
) -> Representation:
    """Free rank-2 representation generated by g^n and (t g t^-1)^n."""
    mg = evaluate(rep, g)
    if isinstance(t, (Word, tuple, list)):
        conj = evaluate(rep, t)
    elif isinstance(t, ScaledMatrix):
        conj = t
    else:
        conj = ScaledMatrix.from_array(np.asarray(t, dtype=float))
    b_mat = conj @ mg @ conj.inverse()
    return Representation.from_generators(
        Presentation.free(2), [mg.power(n), b_mat.power(n)]
    )
