"""Reliability and secrecy exponents of the coupled code/cipher construction.

Two variational quantities drive every finite-n bound in this package:

    E(R|p) = min { D(P||p) : H(P) >= R }           (decay of decoding error)
    F(R|p) = min_P { [H(P) - R]^+ + D(P||p) }      (decay of key-pad leakage)

with [a]^+ = max(a, 0) and all information in bits.  E is positive exactly
when R > H(p); F is positive exactly when R < H(p).  Two solvers are
provided and cross-validated:

* ``grid`` — brute-force enumeration of the simplex (alphabets of size 2 or
  3 only).  Slow, assumption-free; the arbiter of record in the tests.
* ``tilted`` — one-dimensional search over the exponential family
  P_s ∝ p**s.  The minimizer of D(P||p) under an entropy constraint lies in
  this family (Lagrange stationarity), so each regime of the objective
  reduces to a bisection on H(P_s) = R.  Used by default.

The family argument for F needs care: {H(P) <= R} is not convex, so the
active-slack regime is solved by collecting every stationary candidate —
both crossings of H = R along the family (s > 1 and s < 0 branches),
restrictions to sub-alphabets, and point masses — and taking the minimum.
The regime with [·]^+ active minimizes the linear cross-entropy functional
over the convex set {H(P) >= R} and needs only the aligned branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .simplex import Distribution, entropy, kl_divergence

__all__ = [
    "ExponentResult",
    "exponent_E",
    "exponent_F",
    "positivity_region",
    "admissible_thresholds",
]

GRID_MAX_ALPHABET = 3
DEFAULT_GRID_STEP = 1e-4
POSITIVITY_THRESHOLD = 1e-9


@dataclass(frozen=True)
class ExponentResult:
    value: float
    argmin: Distribution | None
    method: str
    tolerance: float

    def rounded_down(self) -> float:
        """Conservative value for use inside upper bounds."""
        if math.isinf(self.value):
            return self.value
        return max(self.value - self.tolerance, 0.0)


# ----------------------------------------------------------------------
# shared helpers
# ----------------------------------------------------------------------


def _support(p: Distribution) -> tuple[np.ndarray, np.ndarray]:
    full = np.asarray(p, dtype=np.float64)
    idx = np.flatnonzero(full > 0.0)
    return full, idx


def _embed(sub: np.ndarray, idx: np.ndarray, q: int) -> Distribution:
    full = np.zeros(q)
    full[idx] = sub
    # Clean tiny negative round-off before handing to the validator.
    full = np.clip(full, 0.0, None)
    return Distribution(full / full.sum())


def _tilt(logp: np.ndarray, s: float) -> np.ndarray:
    w = s * logp
    w -= w.max()
    P = np.exp2(w)
    return P / P.sum()


def _xlog2x(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    pos = v > 0.0
    out[pos] = v[pos] * np.log2(v[pos])
    return out


def _H(P: np.ndarray) -> float:
    return float(-_xlog2x(P).sum())


def _D(P: np.ndarray, p: np.ndarray) -> float:
    pos = P > 0.0
    return float(np.sum(P[pos] * (np.log2(P[pos]) - np.log2(p[pos]))))


def _cross_entropy(P: np.ndarray, p: np.ndarray) -> float:
    pos = P > 0.0
    return float(-np.sum(P[pos] * np.log2(p[pos])))


def _bisect_entropy(
    logp: np.ndarray, target: float, s_lo: float, s_hi: float, iters: int = 80
) -> np.ndarray:
    """Find P_s with H(P_s) = target between two s values bracketing it.

    Caller guarantees H is monotone on [s_lo, s_hi]; returns the endpoint on
    whichever side the caller bracketed as feasible last.
    """
    h_lo = _H(_tilt(logp, s_lo))
    for _ in range(iters):
        mid = 0.5 * (s_lo + s_hi)
        if (_H(_tilt(logp, mid)) >= target) == (h_lo >= target):
            s_lo = mid
        else:
            s_hi = mid
    return _tilt(logp, s_lo)


def _expand_until(logp: np.ndarray, target: float, direction: float) -> float | None:
    """Smallest |s| along `direction` (+1/-1) with H(P_s) strictly past target."""
    s = direction
    for _ in range(80):
        if _H(_tilt(logp, s)) < target:
            return s
        s *= 2.0
    return None


# ----------------------------------------------------------------------
# tilted solvers
# ----------------------------------------------------------------------


def _tilted_E(R: float, p: Distribution, tol: float) -> ExponentResult:
    full, idx = _support(p)
    sub = full[idx]
    k = idx.size
    log_k = math.log2(k)
    Hp = _H(sub)
    if R <= Hp:
        return ExponentResult(0.0, Distribution(full), "tilted", tol)
    if R > log_k:
        return ExponentResult(math.inf, None, "tilted", tol)
    logp = np.log2(sub)
    # H(P_s) falls from log k at s=0 to H(p) at s=1; keep the feasible side.
    P = _bisect_entropy(logp, R, s_lo=0.0, s_hi=1.0)
    return ExponentResult(_D(P, sub), _embed(P, idx, len(p)), "tilted", tol)


def _regime_plain(R: float, sub: np.ndarray, logp: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Stationary candidates for min D(P||p) over {H(P) <= R}."""
    k = sub.size
    cands: list[tuple[float, np.ndarray]] = []
    if k <= 4:
        faces = [
            np.array(c) for r in range(1, k + 1) for c in combinations(range(k), r)
        ]
    else:
        order = np.argsort(-sub)
        faces = [order[:j] for j in range(1, k + 1)]
    for face in faces:
        fsub = sub[face]
        flog = logp[face]
        j = fsub.size
        if j == 1:
            P = np.zeros(k)
            P[face] = 1.0
            cands.append((_D(P, sub), P))
            continue
        interior = fsub / fsub.sum()
        if _H(interior) <= R:
            P = np.zeros(k)
            P[face] = interior
            cands.append((_D(P, sub), P))
        # Crossings of H = R on the two monotone branches of the family.
        for direction in (+1.0, -1.0):
            far = _expand_until(flog, R, direction)
            if far is None:
                continue
            Pf = _bisect_entropy(flog, R, s_lo=far, s_hi=0.0)
            P = np.zeros(k)
            P[face] = Pf
            cands.append((_D(P, sub), P))
    return cands


def _tilted_F(R: float, p: Distribution, tol: float) -> ExponentResult:
    full, idx = _support(p)
    sub = full[idx]
    k = idx.size
    log_k = math.log2(k)
    logp = np.log2(sub)
    Hp = _H(sub)

    candidates: list[tuple[float, np.ndarray]] = []

    # [.]^+ inactive: minimize D over {H <= R}.
    if Hp <= R:
        candidates.append((0.0, sub.copy()))
    else:
        candidates.extend(_regime_plain(R, sub, logp))

    # [.]^+ active: minimize cross-entropy - R over the convex set {H >= R}.
    if R <= log_k:
        pmax = sub.max()
        ties = int(np.sum(sub >= pmax * (1.0 - 1e-12)))
        if math.log2(ties) >= R:
            P = np.where(sub >= pmax * (1.0 - 1e-12), 1.0, 0.0)
            P /= P.sum()
            candidates.append((_cross_entropy(P, sub) - R, P))
        else:
            far = _expand_until(logp, R, +1.0)
            if far is not None:
                P = _bisect_entropy(logp, R, s_lo=0.0, s_hi=far)
                candidates.append((_cross_entropy(P, sub) - R, P))

    value, P = min(candidates, key=lambda c: c[0])
    return ExponentResult(max(value, 0.0), _embed(P, idx, len(p)), "tilted", tol)


# ----------------------------------------------------------------------
# grid solvers (the brute-force arbiter)
# ----------------------------------------------------------------------


def _grid_points(k: int, step: float) -> np.ndarray:
    t = np.arange(0.0, 1.0 + step / 2, step)
    t[-1] = 1.0
    if k == 2:
        return np.column_stack([t, 1.0 - t])
    a, b = np.meshgrid(t, t, indexing="ij")
    keep = a + b <= 1.0 + 1e-15
    a, b = a[keep], b[keep]
    return np.column_stack([a, b, np.clip(1.0 - a - b, 0.0, None)])


def _grid_eval(P: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Entropies and divergences against p for every row of P."""
    H = -_xlog2x(P).sum(axis=1)
    inside = np.all((P == 0.0) | (p > 0.0), axis=1)
    D = np.full(P.shape[0], np.inf)
    if np.any(inside):
        sel = P[inside]
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(sel > 0.0, sel * (np.log2(np.where(sel > 0, sel, 1.0)) - np.log2(np.where(p > 0, p, 1.0))), 0.0)
        D[inside] = terms.sum(axis=1)
    return H, D


def _refine_box(center: np.ndarray, radius: float, step: float, k: int) -> np.ndarray:
    axes = []
    for c in center[: k - 1]:
        lo = max(0.0, c - radius)
        hi = min(1.0, c + radius)
        axes.append(np.arange(lo, hi + step / 2, step))
    if k == 2:
        t = axes[0]
        P = np.column_stack([t, 1.0 - t])
    else:
        a, b = np.meshgrid(axes[0], axes[1], indexing="ij")
        keep = a + b <= 1.0 + 1e-15
        a, b = a[keep], b[keep]
        P = np.column_stack([a, b, 1.0 - a - b])
    return np.clip(P, 0.0, None)


def _grid_min(
    objective, p: np.ndarray, k: int, step: float
) -> tuple[float, np.ndarray | None]:
    """Two-stage grid minimization; coarse pass only when the fine lattice
    would be too large to enumerate outright."""
    coarse = max(step, 1e-3) if k == 3 else step
    P = _grid_points(k, coarse)
    vals = objective(P)
    best = int(np.argmin(vals))
    if not np.isfinite(vals[best]):
        return math.inf, None
    best_val, best_P = float(vals[best]), P[best]
    if coarse > step:
        for center in (best_P, np.full(k, 1.0 / k)):
            Pr = _refine_box(center, 3 * coarse, step, k)
            vr = objective(Pr)
            i = int(np.argmin(vr))
            if np.isfinite(vr[i]) and vr[i] < best_val:
                best_val, best_P = float(vr[i]), Pr[i]
    return best_val, best_P


def _grid_E(R: float, p: Distribution, step: float) -> ExponentResult:
    full = np.asarray(p, dtype=np.float64)
    k = full.size
    if k > GRID_MAX_ALPHABET:
        raise ValueError(f"grid solver limited to alphabets of size <= {GRID_MAX_ALPHABET}")

    def objective(P: np.ndarray) -> np.ndarray:
        H, D = _grid_eval(P, full)
        return np.where(H >= R, D, np.inf)

    value, P = _grid_min(objective, full, k, step)
    if not np.isfinite(value):
        return ExponentResult(math.inf, None, "grid", step)
    return ExponentResult(value, Distribution(P / P.sum()), "grid", step)


def _grid_F(R: float, p: Distribution, step: float) -> ExponentResult:
    full = np.asarray(p, dtype=np.float64)
    k = full.size
    if k > GRID_MAX_ALPHABET:
        raise ValueError(f"grid solver limited to alphabets of size <= {GRID_MAX_ALPHABET}")

    def objective(P: np.ndarray) -> np.ndarray:
        H, D = _grid_eval(P, full)
        return np.maximum(H - R, 0.0) + D

    value, P = _grid_min(objective, full, k, step)
    return ExponentResult(max(value, 0.0), Distribution(P / P.sum()), "grid", step)


# ----------------------------------------------------------------------
# public entry points
# ----------------------------------------------------------------------


def exponent_E(
    R: float, p: Distribution, method: str = "tilted", tol: float = 1e-9
) -> ExponentResult:
    """E(R|p): smallest divergence from p among laws of entropy at least R."""
    if not (R > 0.0) or math.isnan(R):
        raise ValueError(f"rate must be positive, got {R}")
    if method == "grid":
        return _grid_E(R, p, step=max(tol, DEFAULT_GRID_STEP))
    if method == "tilted":
        return _tilted_E(R, p, tol)
    raise ValueError(f"unknown method {method!r}")


def exponent_F(
    R: float, p: Distribution, method: str = "tilted", tol: float = 1e-9
) -> ExponentResult:
    """F(R|p): min over the simplex of [H(P)-R]^+ + D(P||p)."""
    if R < 0.0 or math.isnan(R):
        raise ValueError(f"rate must be nonnegative, got {R}")
    if method == "grid":
        return _grid_F(R, p, step=max(tol, DEFAULT_GRID_STEP))
    if method == "tilted":
        return _tilted_F(R, p, tol)
    raise ValueError(f"unknown method {method!r}")


def positivity_region(
    p_X: Distribution,
    p_K: Distribution,
    R_grid,
    method: str = "tilted",
    threshold: float = POSITIVITY_THRESHOLD,
) -> list[dict]:
    """Per-rate positivity flags for E(R|p_X) and F(R|p_K).

    Both are positive together exactly on {H(X) < R < H(K)} (up to grid
    resolution and the numeric threshold).
    """
    rows = []
    for R in R_grid:
        e = exponent_E(float(R), p_X, method=method)
        f = exponent_F(float(R), p_K, method=method)
        rows.append(
            {
                "R": float(R),
                "E": e.value,
                "F": f.value,
                "E_positive": bool(e.value > threshold),
                "F_positive": bool(f.value > threshold),
            }
        )
    return rows


def admissible_thresholds(p_X: Distribution, p_K: Distribution) -> dict:
    """Rate thresholds of the admissible region.

    achievable_threshold: H(X) when H(X) < H(K), else +inf — above it the
    scheme is simultaneously reliable and secret.  converse_threshold: the
    same with a non-strict comparison — below it no scheme works.
    strong_converse_rate: H(X) when the strict inequality holds (the single
    rate at which the transition is sharp); None otherwise.
    """
    hx = entropy(p_X)
    hk = entropy(p_K)
    return {
        "h_x": hx,
        "h_k": hk,
        "achievable_threshold": hx if hx < hk else math.inf,
        "converse_threshold": hx if hx <= hk else math.inf,
        "strong_converse_rate": hx if hx < hk else None,
    }
