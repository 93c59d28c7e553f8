"""Universal fixed-length source code built from low-entropy type classes.

The codebook at block length n and target rate R collects every sequence
whose type P satisfies H(P) < R (strictly; ties go to the error set).  Rate
bookkeeping follows

    gamma_n = (1/n) (q log2(n+1) + log2 q + 1),
    R_n     = R + gamma_n,
    m       = floor(n R_n / log2 q),

so the number of codebook members never reaches q**m - 1 and one ciphertext
word (the all-zero word x0) stays reserved for the error report.  The
encoder maps the i-th member (in type order, then lexicographic order) to
the word with positional value i+1; the decoder inverts that and maps x0 and
any out-of-image word to a fixed default sequence.

At desk scale gamma_n is large (over a bit per symbol for n <= 8), so m
routinely exceeds n; that is what the formulas give, and every finite-n bound
downstream remains valid.  An explicit-m plan exists for experiments that
need a small word space; it is flagged non-canonical and excluded from the
bound checks that assume the canonical m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import FieldError, FieldSpec, index_decode, index_encode, vector_to_text
from .simplex import Distribution
from .typeclasses import (
    TypeComposition,
    class_members,
    class_prob,
    class_size,
    enumerate_types,
    type_entropy,
)

__all__ = [
    "RatePlan",
    "make_rate_plan",
    "explicit_m_plan",
    "Codebook",
    "build_codebook",
    "encode",
    "decode",
    "exact_error_prob",
    "codebook_to_json",
    "codebook_size_margins",
]

# Largest member set a codebook will materialize.
MAX_MEMBERS = 1 << 22


@dataclass(frozen=True)
class RatePlan:
    """Block length, target rate, and the derived slack / word length.

    canonical is True when m came from the floor rule above; explicit-m plans
    set R_n = (m/n) log2 q and gamma_n = R_n - R instead, so the identity
    R_n = R + gamma_n holds either way.
    """

    spec: FieldSpec
    n: int
    R: float
    gamma_n: float
    R_n: float
    m: int
    canonical: bool = True

    @property
    def q(self) -> int:
        return self.spec.q


def make_rate_plan(n: int, R: float, spec: FieldSpec) -> RatePlan:
    """Canonical rate plan: the slack gamma_n and word length m at rate R."""
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if R <= 0:
        raise ValueError(f"target rate must be positive, got {R}")
    q = spec.q
    log_q = math.log2(q)
    gamma_n = (q * math.log2(n + 1) + log_q + 1.0) / n
    R_n = R + gamma_n
    # Nudge before flooring so an exact-integer quotient is not lost to
    # rounding, then repair against the float-evaluated sandwich.
    m = math.floor(n * R_n / log_q + 1e-12)
    while m * log_q > n * R_n:
        m -= 1
    while (m + 1) * log_q <= n * R_n:
        m += 1
    if m < 1:
        raise ValueError(f"degenerate plan: m = {m} at n={n}, R={R}, q={q}")
    return RatePlan(spec=spec, n=n, R=R, gamma_n=gamma_n, R_n=R_n, m=m)


def explicit_m_plan(n: int, m: int, spec: FieldSpec, R: float | None = None) -> RatePlan:
    """Non-canonical plan with a caller-chosen word length m.

    R defaults to the raw ciphertext rate (m/n) log2 q, which then also
    drives codebook membership.
    """
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"word length must be >= 1, got {m}")
    R_n = m * math.log2(spec.q) / n
    if R is None:
        R = R_n
    if R <= 0:
        raise ValueError(f"target rate must be positive, got {R}")
    return RatePlan(
        spec=spec, n=n, R=R, gamma_n=R_n - R, R_n=R_n, m=m, canonical=False
    )


class Codebook:
    """Materialized codebook: ordered members plus the word bijection."""

    def __init__(self, plan: RatePlan):
        spec = plan.spec
        n, q, m = plan.n, plan.q, plan.m
        if q**n > MAX_MEMBERS:
            raise FieldError(
                f"refusing to build a codebook over {q}^{n} sequences"
            )

        member_types: list[TypeComposition] = []
        error_types: list[TypeComposition] = []
        for P in enumerate_types(n, spec):
            if type_entropy(P) < plan.R:
                member_types.append(P)
            else:
                error_types.append(P)

        members: list[tuple[int, ...]] = []
        for P in member_types:
            members.extend(class_members(P))
        if len(members) > q**m - 1:
            raise AssertionError(
                f"{len(members)} members exceed the {q}^{m}-1 usable words; "
                "the size bound guarantees this cannot happen"
            )

        self.plan = plan
        self.spec = spec
        self.member_types = tuple(member_types)
        self.error_types = tuple(error_types)
        self.members = tuple(members)
        self.member_rank = {x: i for i, x in enumerate(members)}
        self.x0 = (0,) * m
        self.default_decode = self._smallest_non_member()

    def _smallest_non_member(self) -> tuple[int, ...]:
        n, q = self.plan.n, self.plan.q
        if len(self.members) == q**n:
            return (0,) * n
        taken = self.member_rank
        i = 0
        while True:
            x = index_decode(i, n, self.spec)
            if x not in taken:
                return x
            i += 1

    def __repr__(self) -> str:
        p = self.plan
        return (
            f"Codebook(n={p.n}, R={p.R}, q={p.q}, m={p.m}, "
            f"members={len(self.members)})"
        )


def build_codebook(plan: RatePlan) -> Codebook:
    return Codebook(plan)


def encode(cb: Codebook, x) -> tuple[int, ...]:
    """Member i maps to the word with positional value i+1; others to x0."""
    rank = cb.member_rank.get(tuple(int(a) for a in x))
    if rank is None:
        return cb.x0
    return index_decode(rank + 1, cb.plan.m, cb.spec)


def decode(cb: Codebook, w) -> tuple[int, ...]:
    """Inverse of encode on its image; default elsewhere (including x0)."""
    value = index_encode(tuple(int(a) for a in w), cb.spec)
    if 1 <= value <= len(cb.members):
        return cb.members[value - 1]
    return cb.default_decode


def exact_error_prob(cb: Codebook, p_X: Distribution) -> float:
    """Pr[X^n outside the codebook], summed exactly over excluded types."""
    return sum(class_prob(P, p_X) for P in cb.error_types)


def codebook_to_json(cb: Codebook, include_members: bool = False) -> dict:
    plan = cb.plan
    out = {
        "n": plan.n,
        "R": plan.R,
        "q": plan.q,
        "gamma_n": plan.gamma_n,
        "R_n": plan.R_n,
        "m": plan.m,
        "canonical": plan.canonical,
        "member_count": len(cb.members),
        "default_decode": vector_to_text(cb.default_decode, cb.spec),
    }
    if include_members:
        out["members"] = [vector_to_text(x, cb.spec) for x in cb.members]
    return out


def codebook_size_margins(cb: Codebook) -> dict:
    """The two codebook size bounds, reported with their margins.

    member_count <= (n+1)**q 2**(n R) <= q**m / 2 <= q**m - 1.
    """
    plan = cb.plan
    n, q = plan.n, plan.q
    count = len(cb.members)
    entropy_bound = (n + 1) ** q * 2.0 ** (n * plan.R)
    word_budget = q**plan.m - 1
    return {
        "member_count": count,
        "entropy_bound": entropy_bound,
        "word_budget": word_budget,
        "holds": count <= entropy_bound and count <= word_budget,
    }


__all__.append("codebook_size_margins")
