"""Spectral primitives on log-scaled real matrices.

Matrices are carried as a unit-normalized entry block plus a separate
logarithmic scale factor, so that products along long words never overflow
doubles.  Eigenvalue moduli, singular values, proximality classification,
invariant planes and transversality checks all operate on this
representation and report magnitudes on the log scale.

Conventions:

* eigenvalue moduli are written lambda_1 >= ... >= lambda_d,
* singular values sigma_1 >= ... >= sigma_d, with sigma_i = sqrt(lambda_i(g g^T)),
* a matrix is proximal at index k when lambda_k / lambda_{k+1} > 1 + eps_gap,
* subspaces are always carried as matrices with orthonormal columns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    EigensolveFailure,
    MarginalGapWarning,
    SingularInput,
)

#: Relative threshold separating "proximal" from "marginal / no gap".  The
#: theory has an exact inequality; in double precision simple gaps resolve to
#: ~1e-12 but clustered spectra need headroom, so verdicts within eps_gap of
#: equality are never reported as proximal.
EPS_GAP = 1e-8

#: Condition-number ceiling above which inputs are treated as singular.
COND_LIMIT = 1e12

#: Condition-number default for declaring two complementary planes transverse.
TRANSVERSALITY_COND = 1e8


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ScaledMatrix:
    """A square real matrix ``exp(log_scale) * entries``.

    ``entries`` is kept with max-norm in [1/2, 2] (renormalized after every
    operation), which keeps products of dozens of factors representable.
    """

    entries: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self) -> None:
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {e.shape}")
        m = float(np.max(np.abs(e)))
        if not (0.5 <= m <= 2.0):
            raise ValueError(
                "entries must be pre-normalized; use ScaledMatrix.from_array"
            )

    @classmethod
    def from_array(cls, a: np.ndarray, log_scale: float = 0.0) -> "ScaledMatrix":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise SingularInput("matrix has non-finite entries")
        m = float(np.max(np.abs(a)))
        if m == 0.0:
            raise SingularInput("zero matrix cannot be log-scaled")
        return cls(_as_readonly(a / m), log_scale + math.log(m))

    @classmethod
    def identity(cls, dim: int) -> "ScaledMatrix":
        return cls(_as_readonly(np.eye(dim)), 0.0)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def array(self) -> np.ndarray:
        """The true matrix as a plain array.  Overflows for extreme scales."""
        return math.exp(self.log_scale) * self.entries

    def __matmul__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return ScaledMatrix.from_array(
            self.entries @ other.entries, self.log_scale + other.log_scale
        )

    def inverse(self) -> "ScaledMatrix":
        sign, _ = np.linalg.slogdet(self.entries)
        if sign == 0.0:
            raise SingularInput("matrix is singular")
        return ScaledMatrix.from_array(np.linalg.inv(self.entries), -self.log_scale)

    def transpose(self) -> "ScaledMatrix":
        return ScaledMatrix(_as_readonly(self.entries.T), self.log_scale)

    def power(self, n: int) -> "ScaledMatrix":
        if n < 0:
            return self.inverse().power(-n)
        result = ScaledMatrix.identity(self.dim)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base if n > 1 else base
            n >>= 1
        return result

    def slogdet(self) -> tuple[float, float]:
        """(sign, log|det|) of the true matrix."""
        sign, logabs = np.linalg.slogdet(self.entries)
        return float(sign), float(logabs) + self.dim * self.log_scale

    def distance_to_identity(self) -> float:
        """Spectral-norm distance of the true matrix from the identity."""
        return float(np.linalg.norm(self.array() - np.eye(self.dim), 2))


@dataclass(frozen=True)
class SingularValues:
    """Nonincreasing singular values, stored as natural logs."""

    log_values: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    def log_gap(self, k: int) -> float:
        """log(sigma_k / sigma_{k+1}) for 1 <= k <= d-1."""
        if not 1 <= k < len(self.log_values):
            raise DimensionMismatch(f"gap index {k} out of range")
        return float(self.log_values[k - 1] - self.log_values[k])

    @property
    def log_total_ratio(self) -> float:
        return float(self.log_values[0] - self.log_values[-1])


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue moduli (log scale) plus reality data for the top modulus.

    ``top_sign`` is +-1 when exactly one eigenvalue attains the maximum
    modulus and that eigenvalue is real, else None.
    ``is_semiproximal_positive`` records whether some real positive
    eigenvalue attains the maximum modulus.
    """

    log_moduli: np.ndarray
    top_sign: int | None
    is_semiproximal_positive: bool
    eps_gap: float = field(default=EPS_GAP, compare=False)

    @property
    def moduli(self) -> np.ndarray:
        return np.exp(self.log_moduli)

    @property
    def top_signed(self) -> float | None:
        """Signed top eigenvalue, when defined.  May overflow for huge scales."""
        if self.top_sign is None:
            return None
        return self.top_sign * math.exp(float(self.log_moduli[0]))

    def log_gap(self, k: int) -> float:
        if not 1 <= k < len(self.log_moduli):
            raise DimensionMismatch(f"gap index {k} out of range")
        return float(self.log_moduli[k - 1] - self.log_moduli[k])

    def is_proximal(self, k: int, eps_gap: float | None = None) -> bool:
        eps = self.eps_gap if eps_gap is None else eps_gap
        return self.log_gap(k) > math.log1p(eps)


@dataclass(frozen=True)
class ProximalityReport:
    """Classification of one matrix at one gap index.

    ``attracting_plane`` (d x k) and ``repelling_plane`` (d x (d-k)) carry
    orthonormal bases of the dominant and complementary invariant subspaces;
    both are None when the matrix is not proximal at k (a flag, not an
    error).  ``is_positively_proximal`` is only defined for k = 1.
    """

    k: int
    gap_eig: float
    log_gap: float
    is_proximal: bool
    is_biproximal: bool
    is_positively_proximal: bool | None
    attracting_plane: np.ndarray | None
    repelling_plane: np.ndarray | None


def _require_nonsingular(g: ScaledMatrix, cond_limit: float | None = None) -> np.ndarray:
    sv = np.linalg.svd(g.entries, compute_uv=False)
    if sv[-1] <= 0.0 or not np.isfinite(sv[-1]):
        raise SingularInput("singular matrix")
    if cond_limit is not None and sv[0] / sv[-1] > cond_limit:
        raise SingularInput(
            f"condition number {sv[0] / sv[-1]:.3e} exceeds {cond_limit:.0e}"
        )
    return sv


def singular_values(g: ScaledMatrix) -> SingularValues:
    """Full nonincreasing singular-value list of the true matrix, log-scaled.

    All values are reported to full relative accuracy, which requires the
    condition number to stay below COND_LIMIT.
    """
    sv = _require_nonsingular(g, cond_limit=COND_LIMIT)
    return SingularValues(log_values=_as_readonly(np.log(sv) + g.log_scale))


def _real_schur_eigendata(t: np.ndarray) -> list[tuple[float, bool, float]]:
    """(log-modulus, is_real, signed value or 0) per eigenvalue of a real Schur form."""
    d = t.shape[0]
    out: list[tuple[float, bool, float]] = []
    i = 0
    while i < d:
        if i + 1 < d and t[i + 1, i] != 0.0:
            # standardized 2x2 block, complex conjugate pair
            det = t[i, i] * t[i + 1, i + 1] - t[i, i + 1] * t[i + 1, i]
            if det <= 0.0:
                raise EigensolveFailure("non-standard 2x2 Schur block")
            lm = 0.5 * math.log(det)
            out.append((lm, False, 0.0))
            out.append((lm, False, 0.0))
            i += 2
        else:
            val = float(t[i, i])
            if val == 0.0:
                raise SingularInput("zero eigenvalue")
            out.append((math.log(abs(val)), True, val))
            i += 1
    return out


def spectrum(g: ScaledMatrix, eps_gap: float = EPS_GAP) -> Spectrum:
    """Eigenvalue moduli via a real Schur decomposition.

    Complex pairs are read off the standardized 2x2 blocks, so no complex
    arithmetic is involved.  The signed top eigenvalue is reported only when
    the maximum modulus is attained exactly once (within relative eps_gap)
    and by a real eigenvalue.

    Unlike :func:`singular_values`, no condition-number ceiling applies: wide
    spectra (long words in exterior powers) are fine, with the usual caveat
    that eigenvalues far below the top carry absolute rather than relative
    accuracy.
    """
    _require_nonsingular(g)
    try:
        t, _ = scipy.linalg.schur(g.entries, output="real")
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigensolveFailure(str(exc)) from exc
    eigs = _real_schur_eigendata(t)
    eigs.sort(key=lambda e: -e[0])
    log_moduli = np.array([e[0] + g.log_scale for e in eigs])
    tol = math.log1p(eps_gap)
    attained = [e for e in eigs if eigs[0][0] - e[0] <= tol]
    top_sign: int | None = None
    if len(attained) == 1 and attained[0][1]:
        top_sign = 1 if attained[0][2] > 0 else -1
    semi_positive = any(e[1] and e[2] > 0 for e in attained)
    return Spectrum(
        log_moduli=_as_readonly(log_moduli),
        top_sign=top_sign,
        is_semiproximal_positive=semi_positive,
        eps_gap=eps_gap,
    )


def orthonormalize(a: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column span, deterministic up to column signs."""
    q, r = np.linalg.qr(np.asarray(a, dtype=float))
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def subspace_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Sine of the largest principal angle between two equal-dimension planes.

    Both arguments must already carry orthonormal columns.
    """
    if a.shape != b.shape:
        raise DimensionMismatch(f"plane shapes {a.shape} != {b.shape}")
    resid = a - b @ (b.T @ a)
    return float(np.linalg.norm(resid, 2))


def _invariant_plane(entries: np.ndarray, log_thresh: float, count: int, top: bool) -> np.ndarray:
    """Orthonormal basis of the invariant subspace above/below a modulus threshold."""
    thr = math.exp(log_thresh)
    if top:
        sort = lambda x, y: math.hypot(x, y) > thr  # noqa: E731
    else:
        sort = lambda x, y: math.hypot(x, y) < thr  # noqa: E731
    try:
        _, z, sdim = scipy.linalg.schur(entries, output="real", sort=sort)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigensolveFailure(str(exc)) from exc
    if sdim != count:
        raise EigensolveFailure(
            f"ordered Schur selected {sdim} eigenvalues, expected {count}"
        )
    return z[:, :count]


#: Smallest eigenvalue gap for which the 200-step power-iteration audit can
#: reach the 1e-6 angle target from a generic start.
_VERIFIABLE_GAP = 1.1

_POWER_ITERATIONS = 200
_POWER_ANGLE_TOL = 1e-6
_INVARIANCE_TOL = 1e-6


def _power_iteration_check(
    entries: np.ndarray,
    attracting: np.ndarray,
    repelling: np.ndarray,
    rng: np.random.Generator,
) -> None:
    d, k = attracting.shape
    # resample if the random start is nearly tangent to the repelling plane
    start = orthonormalize(rng.standard_normal((d, k)))
    for _ in range(8):
        if is_transverse(start, repelling):
            break
        start = orthonormalize(rng.standard_normal((d, k)))
    v = start
    for _ in range(_POWER_ITERATIONS):
        v = orthonormalize(entries @ v)
        if subspace_angle(v, attracting) < _POWER_ANGLE_TOL:
            return
    raise EigensolveFailure(
        "power iteration did not converge to the computed attracting plane"
    )


def proximality_report(
    g: ScaledMatrix,
    k: int,
    eps_gap: float = EPS_GAP,
    rng: np.random.Generator | None = None,
    verify: bool = True,
) -> ProximalityReport:
    """Classify proximality of ``g`` at gap index ``k`` and extract planes.

    When proximal, the attracting plane spans the generalized eigenspaces of
    the k largest-modulus eigenvalues and the repelling plane the
    complementary invariant subspace.  With ``verify`` the attracting plane
    is additionally audited by power iteration from a random start whenever
    the gap is large enough for 200 iterations to converge; invariance of
    both planes is always checked.
    """
    d = g.dim
    if not 1 <= k <= d - 1:
        raise DimensionMismatch(f"k={k} out of range for dimension {d}")
    spec = spectrum(g, eps_gap=eps_gap)
    log_gap = spec.log_gap(k)
    gap_eig = math.exp(log_gap) if log_gap < 700 else math.inf
    tol = math.log1p(eps_gap)
    is_proximal = log_gap > tol
    if tol < log_gap <= math.log1p(10 * eps_gap):
        warnings.warn(
            f"gap at k={k} is within a decade of eps_gap; verdict is marginal",
            MarginalGapWarning,
            stacklevel=2,
        )
    is_biproximal = is_proximal and spec.log_gap(d - k) > tol
    positively: bool | None = None
    if k == 1:
        positively = bool(is_proximal and spec.top_sign == 1)

    attracting = repelling = None
    if is_proximal:
        lm_entries = spec.log_moduli - g.log_scale
        log_thresh = 0.5 * (lm_entries[k - 1] + lm_entries[k])
        attracting = _invariant_plane(g.entries, log_thresh, k, top=True)
        repelling = _invariant_plane(g.entries, log_thresh, d - k, top=False)
        for plane in (attracting, repelling):
            image = orthonormalize(g.entries @ plane)
            if subspace_angle(image, plane) > _INVARIANCE_TOL:
                raise EigensolveFailure("computed plane is not invariant")
        if verify and gap_eig >= _VERIFIABLE_GAP:
            _power_iteration_check(
                g.entries,
                attracting,
                repelling,
                rng if rng is not None else np.random.default_rng(0),
            )
    return ProximalityReport(
        k=k,
        gap_eig=gap_eig,
        log_gap=log_gap,
        is_proximal=is_proximal,
        is_biproximal=is_biproximal,
        is_positively_proximal=positively,
        attracting_plane=attracting,
        repelling_plane=repelling,
    )


def is_transverse(
    v: np.ndarray, w: np.ndarray, cond_threshold: float = TRANSVERSALITY_COND
) -> bool:
    """Whether a k-plane and a (d-k)-plane span the whole space stably.

    Both planes must be given by orthonormal bases; the verdict is that the
    concatenated d x d basis matrix has condition number below the threshold.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.ndim != 2 or w.ndim != 2 or v.shape[0] != w.shape[0]:
        raise DimensionMismatch("planes must be column bases in the same space")
    d = v.shape[0]
    if v.shape[1] + w.shape[1] != d:
        raise DimensionMismatch(
            f"dimensions {v.shape[1]} + {w.shape[1]} do not sum to {d}"
        )
    sv = np.linalg.svd(np.hstack([v, w]), compute_uv=False)
    if sv[-1] <= 0.0:
        return False
    return bool(sv[0] / sv[-1] < cond_threshold)


def normalize_to_sl(g: ScaledMatrix) -> ScaledMatrix:
    """Rescale so |det| = 1.  Entry block is untouched, only the scale moves,
    hence all eigenvalue/singular-value ratios and verdicts are preserved.
    """
    sign, logabs = np.linalg.slogdet(g.entries)
    if sign == 0.0:
        raise SingularInput("determinant underflow")
    return ScaledMatrix(g.entries, -float(logabs) / g.dim)
