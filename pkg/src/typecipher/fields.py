"""Exact arithmetic over the prime field Z_q: residues, vectors, matrices.

Everything downstream (codebook, cipher, leakage accounting) works with
length-n symbol strings over an alphabet that is a finite field.  Prime
fields are enough for every experiment at desk scale, so residues are plain
integers mod q and vectors are tuples; nothing in this module touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "FieldSpec",
    "field_vector",
    "field_matrix",
    "fe_add",
    "fe_sub",
    "vec_add",
    "vec_sub",
    "vec_affine",
    "index_encode",
    "index_decode",
    "vector_to_text",
    "vector_from_text",
    "all_vectors",
    "vectors_to_indices",
]

# Enumeration cost grows like q**(2n); past this cap nothing exact is feasible
# on a desk machine anyway.
MAX_Q = 257

# Largest table of vectors all_vectors() will materialize (number of entries).
MAX_ENUM = 1 << 22


class FieldError(ValueError):
    """Invalid field element, dimension mismatch, or unusable modulus."""


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The alphabet: the prime field Z_q with q symbols 0..q-1."""

    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int):
            raise FieldError(f"modulus must be an integer, got {self.q!r}")
        if not _is_prime(self.q):
            raise FieldError(f"modulus {self.q} is not prime")
        if self.q > MAX_Q:
            raise FieldError(f"modulus {self.q} exceeds the desk-scale cap {MAX_Q}")


def _check_residue(a: int, spec: FieldSpec) -> int:
    a = int(a)
    if not 0 <= a < spec.q:
        raise FieldError(f"residue {a} out of range [0, {spec.q})")
    return a


def field_vector(entries: Iterable[int], spec: FieldSpec) -> tuple[int, ...]:
    """Validate and freeze a sequence of residues as a vector over Z_q."""
    return tuple(_check_residue(a, spec) for a in entries)


def field_matrix(rows: Sequence[Sequence[int]], spec: FieldSpec) -> np.ndarray:
    """Validate a rows x cols residue matrix; returns a read-only int array."""
    A = np.asarray(rows, dtype=np.int64)
    if A.ndim != 2:
        raise FieldError(f"matrix must be two-dimensional, got shape {A.shape}")
    if A.size and (A.min() < 0 or A.max() >= spec.q):
        raise FieldError(f"matrix entries out of range [0, {spec.q})")
    A.flags.writeable = False
    return A


def fe_add(a: int, b: int, spec: FieldSpec) -> int:
    return (_check_residue(a, spec) + _check_residue(b, spec)) % spec.q


def fe_sub(a: int, b: int, spec: FieldSpec) -> int:
    return (_check_residue(a, spec) - _check_residue(b, spec)) % spec.q


def vec_add(x: Sequence[int], y: Sequence[int], spec: FieldSpec) -> tuple[int, ...]:
    if len(x) != len(y):
        raise FieldError(f"length mismatch: {len(x)} vs {len(y)}")
    return tuple((int(a) + int(b)) % spec.q for a, b in zip(x, y))


def vec_sub(x: Sequence[int], y: Sequence[int], spec: FieldSpec) -> tuple[int, ...]:
    if len(x) != len(y):
        raise FieldError(f"length mismatch: {len(x)} vs {len(y)}")
    return tuple((int(a) - int(b)) % spec.q for a, b in zip(x, y))


def vec_affine(
    k: Sequence[int], A: np.ndarray, b: Sequence[int], spec: FieldSpec
) -> tuple[int, ...]:
    """Affine map k |-> kA + b over Z_q (k a row vector of length n, A n x m)."""
    if A.ndim != 2:
        raise FieldError(f"matrix must be two-dimensional, got shape {A.shape}")
    n, m = A.shape
    if len(k) != n:
        raise FieldError(f"vector length {len(k)} does not match matrix rows {n}")
    if len(b) != m:
        raise FieldError(f"offset length {len(b)} does not match matrix cols {m}")
    kv = np.asarray(k, dtype=np.int64)
    bv = np.asarray(b, dtype=np.int64)
    return tuple(int(v) for v in (kv @ A + bv) % spec.q)


def index_encode(v: Sequence[int], spec: FieldSpec) -> int:
    """Big-endian positional base-q value of a vector (exact, any length)."""
    i = 0
    for a in v:
        i = i * spec.q + _check_residue(a, spec)
    return i


def index_decode(i: int, length: int, spec: FieldSpec) -> tuple[int, ...]:
    """Inverse of index_encode: the length-`length` vector with value i."""
    i = int(i)
    if not 0 <= i < spec.q**length:
        raise FieldError(f"index {i} out of range [0, {spec.q}^{length})")
    digits = []
    for _ in range(length):
        i, r = divmod(i, spec.q)
        digits.append(r)
    return tuple(reversed(digits))


def vector_to_text(v: Sequence[int], spec: FieldSpec) -> str:
    """Digit string like "0110" when q <= 10, comma-separated otherwise."""
    if spec.q <= 10:
        return "".join(str(_check_residue(a, spec)) for a in v)
    return ",".join(str(_check_residue(a, spec)) for a in v)


def vector_from_text(s: str, spec: FieldSpec) -> tuple[int, ...]:
    parts = s.split(",") if "," in s or spec.q > 10 else list(s)
    if parts == [""]:
        parts = []
    try:
        return field_vector((int(p) for p in parts), spec)
    except ValueError as exc:
        raise FieldError(f"cannot parse {s!r} as a vector over Z_{spec.q}") from exc


def all_vectors(length: int, spec: FieldSpec) -> np.ndarray:
    """All q**length vectors in lexicographic order, one per row.

    Row i holds the digits of index i (big-endian), so lexicographic order on
    rows coincides with numeric order of index_encode.
    """
    total = spec.q**length
    if total > MAX_ENUM:
        raise FieldError(
            f"refusing to materialize {spec.q}^{length} vectors (cap {MAX_ENUM})"
        )
    out = np.empty((total, length), dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        idx, out[:, pos] = np.divmod(idx, spec.q)
    return out


def vectors_to_indices(arr: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """index_encode applied to every row of a digit array (fits in int64)."""
    length = arr.shape[-1]
    if spec.q**length > np.iinfo(np.int64).max:
        raise FieldError("index range exceeds int64; use index_encode per vector")
    weights = spec.q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return arr @ weights
