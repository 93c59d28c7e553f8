"""Affine key encoder and the resulting cipher.

A key k in X^n is whitened to a length-m pad through phi(k) = kA + b over
Z_q, with A and b drawn entrywise uniform from a seeded generator.  The
ciphertext is the pad plus the codeword of the plaintext; the receiver
subtracts its own pad and decodes.  Decryption therefore recovers
decode(encode(x)) for every key — the correctness condition of the cipher —
and is exact on codebook members.

Security accounting happens per type class of the key: for each type P the
image law

    Omega_P(w) = |{k in T^n(P) : phi(k) = w}| / |T^n(P)|

measures how evenly the class spreads over the word space, and

    theta(P) = log2(1 + (q**m - 1) / |T^n(P)|)

caps its expected divergence from uniform when the encoder is drawn at
random.  The weighted score sum_P D(Omega_P || uniform) / theta(P) has
expectation at most |P_n(X)|, so scanning seeds for a score below that count
yields a concrete encoder certified type-by-type (D(Omega_P||U) <=
|P_n(X)| theta(P) for every P).  That scan is `derandomize`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .code import Codebook, RatePlan, decode, encode
from .fields import (
    FieldError,
    FieldSpec,
    all_vectors,
    field_matrix,
    field_vector,
    vec_add,
    vec_affine,
    vec_sub,
    vector_to_text,
    vectors_to_indices,
)
from .simplex import Distribution
from .typeclasses import (
    TypeComposition,
    class_members,
    class_size,
    enumerate_types,
)

__all__ = [
    "AffineEncoder",
    "CipherSystem",
    "draw_encoder",
    "make_encoder",
    "encrypt",
    "decrypt",
    "check_decryption_condition",
    "injective_on_members",
    "n_types",
    "pad_law",
    "pad_law_fraction",
    "omega_counts",
    "omega_dist",
    "theta_n",
    "omega_divergences",
    "search_score",
    "SearchResult",
    "derandomize",
    "encoder_to_json",
]

# Largest word space q**m that omega/pad computations will materialize.
MAX_WORDS = 1 << 20


@dataclass(frozen=True, eq=False)
class AffineEncoder:
    """The key-whitening map k -> kA + b; seed records the draw (None if
    hand-built)."""

    A: np.ndarray
    b: tuple[int, ...]
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]


def draw_encoder(plan: RatePlan, seed: int) -> AffineEncoder:
    """Entrywise-uniform A then b from numpy's seeded default generator."""
    rng = np.random.default_rng(seed)
    q = plan.q
    A = rng.integers(0, q, size=(plan.n, plan.m), dtype=np.int64)
    b = rng.integers(0, q, size=plan.m, dtype=np.int64)
    A.flags.writeable = False
    return AffineEncoder(A=A, b=tuple(int(v) for v in b), seed=int(seed))


def make_encoder(A, b, spec: FieldSpec, seed: int | None = None) -> AffineEncoder:
    """Hand-built encoder with validation (used by tests and diagnostics)."""
    return AffineEncoder(A=field_matrix(A, spec), b=field_vector(b, spec), seed=seed)


@dataclass(frozen=True)
class CipherSystem:
    codebook: Codebook
    key_encoder: AffineEncoder

    def __post_init__(self) -> None:
        plan = self.codebook.plan
        enc = self.key_encoder
        if enc.A.shape != (plan.n, plan.m):
            raise FieldError(
                f"encoder shape {enc.A.shape} does not match plan ({plan.n}, {plan.m})"
            )
        if len(enc.b) != plan.m:
            raise FieldError(f"offset length {len(enc.b)} does not match m={plan.m}")

    @property
    def plan(self) -> RatePlan:
        return self.codebook.plan

    @property
    def spec(self) -> FieldSpec:
        return self.codebook.spec


def encrypt(sys: CipherSystem, k: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    pad = vec_affine(k, sys.key_encoder.A, sys.key_encoder.b, sys.spec)
    return vec_add(pad, encode(sys.codebook, x), sys.spec)


def decrypt(sys: CipherSystem, k: Sequence[int], c: Sequence[int]) -> tuple[int, ...]:
    pad = vec_affine(k, sys.key_encoder.A, sys.key_encoder.b, sys.spec)
    return decode(sys.codebook, vec_sub(c, pad, sys.spec))


def check_decryption_condition(sys: CipherSystem) -> bool:
    """Exhaustive check that decrypt(k, encrypt(k, x)) = decode(encode(x)).

    This certifies that the correctly-decodable set is the same for every
    key.  Exponential in n; intended for q**n up to a few thousand.
    """
    spec = sys.spec
    n = sys.plan.n
    keys = [tuple(int(v) for v in row) for row in all_vectors(n, spec)]
    plaintexts = keys
    expected = {x: decode(sys.codebook, encode(sys.codebook, x)) for x in plaintexts}
    for k in keys:
        for x in plaintexts:
            if decrypt(sys, k, encrypt(sys, k, x)) != expected[x]:
                return False
    return True


def injective_on_members(sys: CipherSystem) -> bool:
    """For every key, x -> encrypt(k, x) is one-to-one on codebook members."""
    spec = sys.spec
    cb = sys.codebook
    if not cb.members:
        return True
    words = np.array([encode(cb, x) for x in cb.members], dtype=np.int64)
    for k in all_vectors(sys.plan.n, spec):
        pad = np.asarray(
            vec_affine(tuple(int(v) for v in k), sys.key_encoder.A, sys.key_encoder.b, spec),
            dtype=np.int64,
        )
        images = vectors_to_indices((words + pad) % spec.q, spec)
        if np.unique(images).size != len(cb.members):
            return False
    return True


def n_types(n: int, q: int) -> int:
    """|P_n(X)| = C(n+q-1, q-1), the number of length-n types."""
    return math.comb(n + q - 1, q - 1)


# ----------------------------------------------------------------------
# image laws of the key encoder
# ----------------------------------------------------------------------


def _check_word_space(spec: FieldSpec, m: int) -> int:
    total = spec.q**m
    if total > MAX_WORDS:
        raise FieldError(
            f"word space {spec.q}^{m} exceeds the materialization cap {MAX_WORDS}; "
            "use a sampling path instead"
        )
    return total


def key_image_indices(enc: AffineEncoder, spec: FieldSpec) -> np.ndarray:
    """Word index of phi(k) for every key k in lexicographic order."""
    keys = all_vectors(enc.n, spec)
    images = (keys @ enc.A + np.asarray(enc.b, dtype=np.int64)) % spec.q
    return vectors_to_indices(images, spec)


def pad_law(enc: AffineEncoder, p_K: Distribution, spec: FieldSpec) -> np.ndarray:
    """Distribution of the pad phi(K) over word indices, K i.i.d. p_K."""
    total = _check_word_space(spec, enc.m)
    keys = all_vectors(enc.n, spec)
    key_probs = np.prod(np.asarray(p_K)[keys], axis=1)
    images = key_image_indices(enc, spec)
    return np.bincount(images, weights=key_probs, minlength=total)


def pad_law_fraction(
    enc: AffineEncoder, p_K: Sequence[Fraction], spec: FieldSpec
) -> list[Fraction]:
    """Exact-rational pad law for a rational key law (small n only)."""
    total = _check_word_space(spec, enc.m)
    out = [Fraction(0)] * total
    for key in all_vectors(enc.n, spec):
        k = tuple(int(v) for v in key)
        prob = Fraction(1)
        for a in k:
            prob *= Fraction(p_K[a])
        w = vec_affine(k, enc.A, enc.b, spec)
        idx = 0
        for a in w:
            idx = idx * spec.q + a
        out[idx] += prob
    return out


def omega_counts(
    P: TypeComposition, enc: AffineEncoder, spec: FieldSpec
) -> tuple[np.ndarray, int]:
    """Integer image counts of the type class T^n(P) under the key encoder."""
    total = _check_word_space(spec, enc.m)
    members = np.array(list(class_members(P)), dtype=np.int64)
    images = (members @ enc.A + np.asarray(enc.b, dtype=np.int64)) % spec.q
    counts = np.bincount(vectors_to_indices(images, spec), minlength=total)
    return counts, class_size(P)


def omega_dist(P: TypeComposition, enc: AffineEncoder, spec: FieldSpec) -> Distribution:
    """Omega_P: the image law of a uniformly random key of type P."""
    counts, size = omega_counts(P, enc, spec)
    return Distribution(counts / size)


def theta_n(P: TypeComposition, plan: RatePlan) -> float:
    """log2(1 + (q**m - 1)/|T^n(P)|), the expected-divergence cap for P."""
    size = class_size(P)
    return math.log2(plan.q**plan.m - 1 + size) - math.log2(size)


def _divergence_from_counts(counts: np.ndarray, size: int, total_words: int) -> float:
    """D(counts/size || uniform over total_words) in bits, from integers."""
    pos = counts[counts > 0].astype(np.float64)
    h = math.log2(size) - float(np.sum(pos * np.log2(pos))) / size
    return math.log2(total_words) - h


def omega_divergences(
    enc: AffineEncoder, plan: RatePlan
) -> list[tuple[TypeComposition, float]]:
    """(P, D(Omega_P || uniform)) for every type P of length n."""
    spec = plan.spec
    total = _check_word_space(spec, plan.m)
    keys = all_vectors(plan.n, spec)
    images = key_image_indices(enc, spec)
    counts_per_symbol = np.stack(
        [(keys == a).sum(axis=1) for a in range(spec.q)], axis=1
    )
    out = []
    for P in enumerate_types(plan.n, spec):
        mask = np.all(counts_per_symbol == np.asarray(P.counts), axis=1)
        counts = np.bincount(images[mask], minlength=total)
        out.append((P, _divergence_from_counts(counts, int(mask.sum()), total)))
    return out


def search_score(enc: AffineEncoder, plan: RatePlan) -> float:
    """sum_P D(Omega_P||uniform) / theta(P); expectation <= |P_n(X)|."""
    return sum(d / theta_n(P, plan) for P, d in omega_divergences(enc, plan))


@dataclass(frozen=True)
class SearchResult:
    encoder: AffineEncoder
    seed: int
    score: float
    attempts: int
    type_count: int


def derandomize(
    plan: RatePlan, max_attempts: int = 1000, base_seed: int = 0
) -> SearchResult:
    """First seed whose encoder scores at most |P_n(X)|.

    Success is typically immediate: the score's expectation over the draw is
    at most |P_n(X)|.  The returned encoder then automatically satisfies the
    per-type certificate D(Omega_P||U) <= |P_n(X)| theta(P), which is
    asserted before returning.
    """
    count = n_types(plan.n, plan.q)
    best = math.inf
    for attempt in range(max_attempts):
        seed = base_seed + attempt
        enc = draw_encoder(plan, seed)
        divs = omega_divergences(enc, plan)
        score = sum(d / theta_n(P, plan) for P, d in divs)
        best = min(best, score)
        if score <= count:
            for P, d in divs:
                cap = count * theta_n(P, plan)
                if d > cap * (1 + 1e-9) + 1e-12:
                    raise AssertionError(
                        f"score {score} <= {count} but type {P.counts} has "
                        f"divergence {d} above its cap {cap}"
                    )
            return SearchResult(
                encoder=enc, seed=seed, score=score, attempts=attempt + 1,
                type_count=count,
            )
    raise RuntimeError(
        f"no encoder scored <= {count} within {max_attempts} seeds "
        f"(best score {best}); this should be unreachable"
    )


def encoder_to_json(enc: AffineEncoder, spec: FieldSpec) -> dict:
    return {
        "n": enc.n,
        "m": enc.m,
        "q": spec.q,
        "seed": enc.seed,
        "A": [vector_to_text(tuple(int(v) for v in row), spec) for row in enc.A],
        "b": vector_to_text(enc.b, spec),
    }
