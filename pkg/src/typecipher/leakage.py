"""Exact and estimated security quantities for the affine cipher.

The adversary sees only the ciphertext C = phi(K) + encode(X); leakage is
measured by the mutual information I(C; X) in bits.  Because every
conditional law C | X=x is a cyclic shift of the pad law, the exact value
collapses to H(C) - H(pad), which this module computes by enumeration at
small scales and estimates by sampling beyond them.

On top of the exact value sit the certified upper bounds, checked as a
chain with explicit margins:

    I(C;X) <= m log2 q - H(pad)                       (pad divergence)
           <= sum_P class_prob(P, p_K) D(Omega_P||U)  (typewise bound)
           <= |P_n| sum_P class_prob(P, p_K) theta(P) (derandomized encoders)
           <= (R_n + 1/2) (n+1)^{3q} 2^{-n(F - gamma_n)}
            = (2 R_n + 1) q (n+1)^{4q} 2^{-n F(R|p_K)} (security bound)

with F the key-law exponent from `exponents`.  The final equality is the
identity 2^{n gamma_n} = 2 (n+1)^q q.

The converse side conditions on the high-information plaintexts that decode
correctly and checks the entropy/peak/amplification inequalities that force
H(K) to be large whenever leakage and error are both small; the strong
converse probe evaluates the best possible error of *any* code of a given
size to show rates below H(X) are hopeless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cipher import (
    CipherSystem,
    n_types,
    omega_divergences,
    pad_law,
    theta_n,
)
from .code import encode, exact_error_prob, make_rate_plan
from .exponents import ExponentResult, exponent_F
from .fields import FieldError, FieldSpec, all_vectors, vectors_to_indices
from .simplex import Distribution, entropy
from .typeclasses import class_prob, class_size, enumerate_types

__all__ = [
    "MAX_EXACT_PAIRS",
    "LeakageReport",
    "exact_mutual_info",
    "MonteCarloMI",
    "monte_carlo_mi",
    "check_birkhoff",
    "BoundCheck",
    "SecurityCertificate",
    "security_certificate",
    "security_bound_curve",
    "ConverseDiagnostics",
    "converse_diagnostics",
    "strong_converse_probe",
]

# Exact enumeration works over all (key, plaintext) pairs: q**(2n) of them.
MAX_EXACT_PAIRS = 1 << 24
# Cap on (distinct codewords) x (word space) touched by shift mixtures.
MAX_SHIFT_WORK = 1 << 28

DELTA_CAP_DEFAULT = 1.0


def _entropy_bits(law: np.ndarray) -> float:
    pos = law[law > 0]
    return float(-np.sum(pos * np.log2(pos)))


def _shift_mixture(
    pad: np.ndarray, weights: np.ndarray, digits: np.ndarray, q: int
) -> np.ndarray:
    """sum_w weights[w] * pad((. - w) mod q), over word indices."""
    support = np.nonzero(weights)[0]
    if support.size * pad.size > MAX_SHIFT_WORK:
        raise FieldError(
            f"shift mixture of {support.size} words over {pad.size} exceeds "
            f"the work cap {MAX_SHIFT_WORK}"
        )
    out = np.zeros_like(pad)
    for w in support:
        shifted = (digits - digits[w]) % q
        idx = shifted[:, 0]
        for j in range(1, digits.shape[1]):
            idx = idx * q + shifted[:, j]
        out += weights[w] * pad[idx]
    return out


def _codeword_weights(
    sys: CipherSystem, p_X: Distribution, mask: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Plaintext mass grouped by codeword index.

    Returns (weights over word indices, plaintext rows, per-row probs).
    """
    spec = sys.spec
    plan = sys.plan
    cb = sys.codebook
    total = spec.q**plan.m
    xs = all_vectors(plan.n, spec)
    px = np.prod(np.asarray(p_X)[xs], axis=1)
    weights = np.zeros(total)
    rows = range(xs.shape[0]) if mask is None else np.nonzero(mask)[0]
    for i in rows:
        x = tuple(int(v) for v in xs[i])
        rank = cb.member_rank.get(x)
        weights[0 if rank is None else rank + 1] += px[i]
    return weights, xs, px


def _check_pair_scale(sys: CipherSystem) -> None:
    q, n = sys.spec.q, sys.plan.n
    if q ** (2 * n) > MAX_EXACT_PAIRS:
        raise FieldError(
            f"exact enumeration over {q}^{2 * n} (key, plaintext) pairs exceeds "
            f"{MAX_EXACT_PAIRS}; use monte_carlo_mi instead"
        )


@dataclass(frozen=True)
class LeakageReport:
    """Exact leakage of one system together with its certified upper bounds.

    `security_bound` and `f_exponent` are None when the rate plan does not
    use the canonical word length m (the exponent bound is proved only for
    that choice).
    """

    mi_exact: float
    h_pad: float
    h_ciphertext: float
    pad_divergence: float
    typewise_bound: float
    security_bound: float | None
    f_exponent: float | None
    canonical: bool

    def to_json(self) -> dict:
        return {
            "mi_exact": self.mi_exact,
            "h_pad": self.h_pad,
            "h_ciphertext": self.h_ciphertext,
            "pad_divergence": self.pad_divergence,
            "typewise_bound": self.typewise_bound,
            "security_bound": self.security_bound,
            "f_exponent": self.f_exponent,
            "canonical": self.canonical,
            "provenance": "exact",
        }


def _pad_and_ciphertext(
    sys: CipherSystem, p_X: Distribution, p_K: Distribution
) -> tuple[np.ndarray, np.ndarray]:
    _check_pair_scale(sys)
    spec = sys.spec
    pad = pad_law(sys.key_encoder, p_K, spec)
    weights, _, _ = _codeword_weights(sys, p_X)
    digits = all_vectors(sys.plan.m, spec)
    p_c = _shift_mixture(pad, weights, digits, spec.q)
    return pad, p_c


def exact_mutual_info(
    sys: CipherSystem,
    p_X: Distribution,
    p_K: Distribution,
    f_result: ExponentResult | None = None,
) -> LeakageReport:
    """I(C; X) by full enumeration, plus every upper bound in the chain.

    Independence of K and X and the shift structure give
    H(C | X = x) = H(pad) for every x, so I(C; X) = H(C) - H(pad) exactly.
    Guarded by MAX_EXACT_PAIRS; larger systems must sample.
    """
    plan = sys.plan
    pad, p_c = _pad_and_ciphertext(sys, p_X, p_K)
    h_pad = _entropy_bits(pad)
    h_c = _entropy_bits(p_c)
    mi = max(0.0, h_c - h_pad)
    divergence = plan.m * math.log2(plan.q) - h_pad

    typewise = 0.0
    for P, d in omega_divergences(sys.key_encoder, plan):
        typewise += class_prob(P, p_K) * d

    security_bound = None
    f_value = None
    if plan.canonical:
        if f_result is None:
            f_result = exponent_F(plan.R, p_K, method="tilted", tol=1e-9)
        f_value = f_result.rounded_down()
        n, q = plan.n, plan.q
        security_bound = (2 * plan.R_n + 1) * q * (n + 1) ** (4 * q) * 2.0 ** (
            -n * f_value
        )
    return LeakageReport(
        mi_exact=mi,
        h_pad=h_pad,
        h_ciphertext=h_c,
        pad_divergence=divergence,
        typewise_bound=typewise,
        security_bound=security_bound,
        f_exponent=f_value,
        canonical=plan.canonical,
    )


# ----------------------------------------------------------------------
# sampling estimator
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloMI:
    estimate: float
    std_error: float
    samples: int
    raw_plugin: float
    corrected: bool

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "samples": self.samples,
            "raw_plugin": self.raw_plugin,
            "corrected": self.corrected,
            "provenance": "estimate",
        }


def _plugin_mi(xi: np.ndarray, ci: np.ndarray, corrected: bool) -> float:
    n_samples = xi.size
    pairs = np.stack([xi, ci], axis=1)
    _, joint = np.unique(pairs, axis=0, return_counts=True)
    _, left = np.unique(xi, return_counts=True)
    _, right = np.unique(ci, return_counts=True)

    def h(counts: np.ndarray) -> float:
        p = counts / n_samples
        return float(-np.sum(p * np.log2(p)))

    mi = h(left) + h(right) - h(joint)
    if corrected:
        # Miller-Madow: each plug-in entropy is low by ~(cells-1)/(2N ln 2),
        # so the net MI bias is (K_x + K_c - K_joint - 1)/(2N ln 2) with
        # the joint term dominating; subtracting it recentres near-zero MI.
        mi += (left.size + right.size - joint.size - 1) / (
            2.0 * n_samples * math.log(2.0)
        )
    return mi


def monte_carlo_mi(
    sys: CipherSystem,
    p_X: Distribution,
    p_K: Distribution,
    samples: int,
    seed: int,
    corrected: bool = True,
    bootstrap: int = 200,
) -> MonteCarloMI:
    """Plug-in estimate of I(C; X) from sampled pairs, with bootstrap SE.

    The plug-in estimator is biased upward by roughly (cells - 1)/(2N ln 2);
    the default first-order correction removes most of it, which matters
    when testing near-zero leakage.  The uncorrected value is kept in
    `raw_plugin`.
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    spec = sys.spec
    plan = sys.plan
    cb = sys.codebook
    rng = np.random.default_rng(seed)
    q = spec.q
    xs = rng.choice(q, size=(samples, plan.n), p=np.asarray(p_X))
    ks = rng.choice(q, size=(samples, plan.n), p=np.asarray(p_K))
    pads = (ks @ sys.key_encoder.A + np.asarray(sys.key_encoder.b)) % q
    words = np.empty((samples, plan.m), dtype=np.int64)
    word_cache: dict[tuple[int, ...], tuple[int, ...]] = {}
    for i in range(samples):
        x = tuple(int(v) for v in xs[i])
        w = word_cache.get(x)
        if w is None:
            w = encode(cb, x)
            word_cache[x] = w
        words[i] = w
    ci = vectors_to_indices((pads + words) % q, spec)
    xi = vectors_to_indices(xs.astype(np.int64), spec)

    point = _plugin_mi(xi, ci, corrected)
    raw = point if not corrected else _plugin_mi(xi, ci, False)
    reps = np.empty(bootstrap)
    for b in range(bootstrap):
        idx = rng.integers(0, samples, size=samples)
        reps[b] = _plugin_mi(xi[idx], ci[idx], corrected)
    return MonteCarloMI(
        estimate=point,
        std_error=float(np.std(reps, ddof=1)),
        samples=samples,
        raw_plugin=raw,
        corrected=corrected,
    )


# ----------------------------------------------------------------------
# row-sum (substochasticity) check
# ----------------------------------------------------------------------


def check_birkhoff(sys: CipherSystem, p_K: Distribution) -> float:
    """max over ciphertexts c of sum over decodable x of Pr[encrypt(K,x)=c].

    Each conditional law is a shift of the pad law and members map to
    distinct codewords, so every row sum is at most 1 (the
    doubly-substochastic property, Birkhoff/von Neumann flavor).  Returns
    the maximum so callers can check the contract max <= 1 + 1e-12.
    """
    spec = sys.spec
    plan = sys.plan
    cb = sys.codebook
    pad = pad_law(sys.key_encoder, p_K, spec)
    if not cb.members:
        return 0.0
    weights = np.zeros(spec.q**plan.m)
    for x in cb.members:
        w = encode(cb, x)
        idx = 0
        for a in w:
            idx = idx * spec.q + a
        weights[idx] += 1.0
    digits = all_vectors(plan.m, spec)
    sums = _shift_mixture(pad, weights, digits, spec.q)
    return float(sums.max())


# ----------------------------------------------------------------------
# certified bound chain
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class SecurityCertificate:
    report: LeakageReport
    checks: tuple[BoundCheck, ...]
    typewise_theta_bound: float | None
    padded_exponent_bound: float | None
    derandomized: bool

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json(self) -> dict:
        return {
            "report": self.report.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "typewise_theta_bound": self.typewise_theta_bound,
            "padded_exponent_bound": self.padded_exponent_bound,
            "derandomized": self.derandomized,
            "passed": self.passed,
        }


def _le(name: str, lhs: float, rhs: float, slack: float) -> BoundCheck:
    tol = slack * max(1.0, abs(lhs), abs(rhs))
    return BoundCheck(name=name, lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol)


def security_certificate(
    sys: CipherSystem,
    p_X: Distribution,
    p_K: Distribution,
    f_result: ExponentResult | None = None,
    derandomized: bool = False,
    slack: float = 1e-9,
) -> SecurityCertificate:
    """Evaluate the whole bound chain with margins; nothing is assumed.

    Steps needing extra hypotheses are included only when they apply: the
    theta step requires an encoder whose per-type divergences were
    certified (`derandomized=True`), and the exponent steps require the
    canonical word length.  A failing check falsifies the implementation,
    not the theory, so callers should treat failures as bugs.
    """
    plan = sys.plan
    report = exact_mutual_info(sys, p_X, p_K, f_result=f_result)
    pad = pad_law(sys.key_encoder, p_K, sys.spec)
    direct_divergence = plan.m * math.log2(plan.q) + float(
        np.sum(pad[pad > 0] * np.log2(pad[pad > 0]))
    )

    checks: list[BoundCheck] = [
        _le("mi_nonnegative", 0.0, report.mi_exact, slack),
        _le("mi_vs_pad_divergence", report.mi_exact, report.pad_divergence, slack),
        BoundCheck(
            name="pad_divergence_identity",
            lhs=report.pad_divergence,
            rhs=direct_divergence,
            holds=abs(report.pad_divergence - direct_divergence)
            <= slack * max(1.0, abs(direct_divergence)),
        ),
        _le(
            "pad_divergence_vs_typewise",
            report.pad_divergence,
            report.typewise_bound,
            slack,
        ),
    ]

    theta_bound = None
    padded_bound = None
    if derandomized:
        count = n_types(plan.n, plan.q)
        theta_sum = sum(
            class_prob(P, p_K) * theta_n(P, plan)
            for P in enumerate_types(plan.n, plan.spec)
        )
        theta_bound = count * theta_sum
        checks.append(
            _le("typewise_vs_theta", report.typewise_bound, theta_bound, slack)
        )
        checks.append(_le("mi_vs_theta", report.mi_exact, theta_bound, slack))
    if plan.canonical and report.security_bound is not None:
        n, q = plan.n, plan.q
        padded_bound = (
            (plan.R_n + 0.5)
            * (n + 1) ** (3 * q)
            * 2.0 ** (-n * (report.f_exponent - plan.gamma_n))
        )
        if derandomized and theta_bound is not None:
            checks.append(
                _le("theta_vs_padded_exponent", theta_bound, padded_bound, slack)
            )
        checks.append(
            BoundCheck(
                name="padded_equals_security_bound",
                lhs=padded_bound,
                rhs=report.security_bound,
                holds=abs(padded_bound - report.security_bound)
                <= slack * max(1.0, abs(report.security_bound)),
            )
        )
        checks.append(
            _le("mi_vs_security_bound", report.mi_exact, report.security_bound, slack)
        )
    return SecurityCertificate(
        report=report,
        checks=tuple(checks),
        typewise_theta_bound=theta_bound,
        padded_exponent_bound=padded_bound,
        derandomized=derandomized,
    )


def security_bound_curve(
    R: float,
    p_K: Distribution,
    n_list: Sequence[int],
    q: int | None = None,
    tol: float = 1e-9,
) -> list[dict]:
    """log2 of the security bound across block lengths, at fixed rate.

    The raw bound carries a polynomial factor (n+1)^{4q} that dominates at
    desk-scale n, so the quantity that actually decays is the per-symbol
    value log2(bound)/n; both are reported.
    """
    q = len(p_K) if q is None else q
    spec = FieldSpec(q)
    f = exponent_F(R, p_K, method="tilted", tol=tol).rounded_down()
    rows = []
    for n in n_list:
        plan = make_rate_plan(int(n), R, spec)
        log_bound = (
            math.log2(2 * plan.R_n + 1)
            + math.log2(q)
            + 4 * q * math.log2(n + 1)
            - n * f
        )
        rows.append(
            {
                "n": int(n),
                "f_exponent": f,
                "log2_bound": log_bound,
                "per_symbol": log_bound / n,
            }
        )
    return rows


# ----------------------------------------------------------------------
# converse-side diagnostics
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ConverseDiagnostics:
    """Measured quantities behind the key-rate converse, on one system.

    Conditioning is on B = {x : information density >= H(X) - gamma and x
    decodes correctly}; `coverage` is its probability Q.  The four `*_ok`
    flags are the enumeration-checked inequalities; the key-rate fields
    evaluate the end-to-end conclusion in two instantiations of the margin
    term (error-numerator and leakage-numerator), both reported because the
    two appear in different roles in the derivation.
    """

    gamma: float
    nu_n: float
    coverage: float
    measured_eps: float
    measured_delta: float
    leak_margin: float
    leak_margin_delta: float
    max_conditional: float
    conditional_cap: float
    peak_ok: bool
    h_cond_ciphertext: float
    entropy_floor: float
    entropy_floor_ok: bool
    h_pad: float
    pad_entropy_cap: float
    pad_entropy_cap_ok: bool
    conditional_mi: float
    amplified_mi: float
    mi_amplification_ok: bool
    coverage_floor: float
    coverage_ok: bool
    h_x: float
    h_k: float
    key_rate_display_rhs: float
    key_rate_display_holds: bool
    key_rate_proof_rhs: float
    key_rate_proof_holds: bool
    hypotheses_hold: bool
    degenerate: bool

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def converse_diagnostics(
    sys: CipherSystem,
    p_X: Distribution,
    p_K: Distribution,
    gamma: float,
    delta_cap: float = DELTA_CAP_DEFAULT,
    slack: float = 1e-9,
) -> ConverseDiagnostics:
    """Exhaustive evaluation of the converse inequalities at small scale.

    gamma > 0 widens the set of "typical enough" plaintexts; nu_n is the
    mass it misses.  With Q the mass that is both typical and decodable,
    the checks certify: the conditioned ciphertext law has no point mass
    above Q^{-1} 2^{-n(H(X)-gamma)}; its entropy is at least
    n(H(X)-gamma) + log2 Q; the conditional entropy given the plaintext is
    exactly H(pad) <= n H(K); and Q^{-1} I(C;X) dominates the conditioned
    mutual information.  The key-rate conclusion is evaluated in display
    form H(K) >= H(X) + gamma + margin (recorded, not asserted — it demands
    more than the finite-n inequalities provide) and in the proof's form
    H(K) >= H(X) - gamma - margin_delta.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    _check_pair_scale(sys)
    spec = sys.spec
    plan = sys.plan
    n = plan.n
    h_x = entropy(p_X)
    h_k = entropy(p_K)

    xs = all_vectors(n, spec)
    px = np.prod(np.asarray(p_X)[xs], axis=1)
    with np.errstate(divide="ignore"):
        info = -np.log2(px) / n
    typical = info >= h_x - gamma - 1e-12
    nu_n = float(px[~typical].sum())
    member_mask = np.zeros(xs.shape[0], dtype=bool)
    for i in range(xs.shape[0]):
        member_mask[i] = tuple(int(v) for v in xs[i]) in sys.codebook.member_rank
    retained = typical & member_mask
    coverage = float(px[retained].sum())
    measured_eps = exact_error_prob(sys.codebook, p_X)

    pad, p_c = _pad_and_ciphertext(sys, p_X, p_K)
    h_pad = _entropy_bits(pad)
    measured_delta = max(0.0, _entropy_bits(p_c) - h_pad)

    nu_tilde = nu_n + measured_eps
    if nu_tilde < 1.0:
        shrink = 1.0 - nu_tilde
        leak_margin = (measured_eps / shrink + math.log2(1.0 / shrink)) / n
        leak_margin_delta = (measured_delta / shrink + math.log2(1.0 / shrink)) / n
    else:
        leak_margin = math.inf
        leak_margin_delta = math.inf

    degenerate = coverage <= 0.0
    if degenerate:
        max_conditional = 0.0
        conditional_cap = math.inf
        h_cond = 0.0
        entropy_floor = -math.inf
        conditional_mi = 0.0
        peak_ok = entropy_ok = amplification_ok = True
    else:
        weights, _, _ = _codeword_weights(sys, p_X, mask=retained)
        digits = all_vectors(plan.m, spec)
        q_cond = _shift_mixture(pad, weights, digits, spec.q) / coverage
        max_conditional = float(q_cond.max())
        conditional_cap = 2.0 ** (-n * (h_x - gamma)) / coverage
        peak_ok = max_conditional <= conditional_cap * (1 + slack)
        h_cond = _entropy_bits(q_cond)
        entropy_floor = n * (h_x - gamma) + math.log2(coverage)
        entropy_ok = h_cond >= entropy_floor - slack * max(1.0, abs(entropy_floor))
        conditional_mi = max(0.0, h_cond - h_pad)
        amplified = measured_delta / coverage
        amplification_ok = conditional_mi <= amplified + slack * max(1.0, amplified)

    pad_entropy_cap = n * h_k
    pad_cap_ok = h_pad <= pad_entropy_cap + slack * max(1.0, pad_entropy_cap)
    coverage_floor = 1.0 - nu_n - measured_eps
    coverage_ok = coverage >= coverage_floor - slack

    hypotheses = 0.0 < measured_eps < 1.0 and 0.0 < measured_delta <= delta_cap
    display_rhs = h_x + gamma + leak_margin
    proof_rhs = h_x - gamma - leak_margin_delta

    return ConverseDiagnostics(
        gamma=gamma,
        nu_n=nu_n,
        coverage=coverage,
        measured_eps=measured_eps,
        measured_delta=measured_delta,
        leak_margin=leak_margin,
        leak_margin_delta=leak_margin_delta,
        max_conditional=max_conditional,
        conditional_cap=conditional_cap,
        peak_ok=peak_ok,
        h_cond_ciphertext=h_cond,
        entropy_floor=entropy_floor,
        entropy_floor_ok=entropy_ok,
        h_pad=h_pad,
        pad_entropy_cap=pad_entropy_cap,
        pad_entropy_cap_ok=pad_cap_ok,
        conditional_mi=conditional_mi,
        amplified_mi=(measured_delta / coverage) if coverage > 0 else math.inf,
        mi_amplification_ok=amplification_ok,
        coverage_floor=coverage_floor,
        coverage_ok=coverage_ok,
        h_x=h_x,
        h_k=h_k,
        key_rate_display_rhs=display_rhs,
        key_rate_display_holds=h_k >= display_rhs,
        key_rate_proof_rhs=proof_rhs,
        key_rate_proof_holds=h_k >= proof_rhs,
        hypotheses_hold=hypotheses,
        degenerate=degenerate,
    )


# ----------------------------------------------------------------------
# strong-converse probe for plain source coding
# ----------------------------------------------------------------------


def _stable_floor(v: float) -> int:
    f = math.floor(v)
    if v - f > 1.0 - 1e-9:
        f += 1
    return f


def strong_converse_probe(
    p_X: Distribution, R: float, n_list: Sequence[int]
) -> list[dict]:
    """Best achievable error of ANY size-2^{floor(nR)} code, per block length.

    The optimum keeps the 2^{floor(nR)} most probable sequences, so the
    error is one minus that top mass, computed per type (all sequences of a
    type share one probability).  Below-entropy rates drive it to 1.
    """
    h = entropy(p_X)
    if R >= h:
        raise ValueError(f"rate {R} is not below the source entropy {h:.6f}")
    q = len(p_X)
    spec = FieldSpec(q)
    p = np.asarray(p_X)
    out = []
    for n in n_list:
        n = int(n)
        if q**n > MAX_EXACT_PAIRS:
            raise FieldError(f"{q}^{n} sequences exceed {MAX_EXACT_PAIRS}")
        log_size = _stable_floor(n * R)
        budget = 2**log_size
        per_type = []
        for P in enumerate_types(n, spec):
            if any(c > 0 and p[a] == 0 for a, c in enumerate(P.counts)):
                continue
            logp = sum(c * math.log2(p[a]) for a, c in enumerate(P.counts) if c > 0)
            per_type.append((logp, class_size(P)))
        per_type.sort(key=lambda t: -t[0])
        mass = 0.0
        remaining = budget
        for logp, size in per_type:
            take = min(size, remaining)
            mass += take * 2.0**logp
            remaining -= take
            if remaining == 0:
                break
        out.append({"n": n, "log2_size": log_size, "error": max(0.0, 1.0 - mass)})
    return out
