"""Construction, encoding, and erasure decoding of network protection codes.

A protection code lays an [n, k, d_min] systematic binary code across n
disjoint connections: k of them carry plain data, the remaining m = n - k
carry parity symbols, and any d_min - 1 lost connections can be rebuilt
from the survivors.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from . import gf2
from .gf2 import BitMatrix, BitVector, DimensionMismatch, Inconsistent, TooLarge

__all__ = [
    "AmbiguousErasure",
    "ErasurePattern",
    "Inconsistent",
    "ProtectionCode",
    "ProtectionReport",
    "TooManyPatterns",
    "bch_code",
    "encode",
    "erasure_decode",
    "erasure_decode_with_cost",
    "format_code_file",
    "hamming_code",
    "parse_code_file",
    "shorten",
    "single_parity_code",
    "verify_protection",
]

PATTERN_ENUMERATION_LIMIT = 10**6


class AmbiguousErasure(ValueError):
    """More symbols were lost than the parity equations can pin down."""


class TooManyPatterns(ValueError):
    """Exhaustive pattern enumeration would exceed the supported bound."""


@dataclass(frozen=True)
class ErasurePattern:
    """Known positions of lost symbols in a length-n word."""

    n: int
    erased: frozenset[int]

    def __init__(self, n: int, erased: Iterable[int]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "erased", frozenset(erased))
        if self.n < 1:
            raise ValueError("pattern length must be positive")
        for p in self.erased:
            if not 0 <= p < self.n:
                raise ValueError(f"erased position {p} out of range [0, {self.n})")


@dataclass(frozen=True)
class ProtectionCode:
    """An [n, k, d_min] systematic code over the two-element field.

    The generator has the form [I_k | P]; the parity check is [P^T | I_m].
    ``d_min_verified`` records whether d_min was confirmed by exhaustive
    search or merely declared by the construction.
    """

    n: int
    k: int
    m: int
    generator: BitMatrix
    parity_check: BitMatrix
    d_min: int
    d_min_verified: bool

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if self.m != self.n - self.k:
            raise ValueError("m must equal n - k")
        if (self.generator.rows, self.generator.cols) != (self.k, self.n):
            raise ValueError("generator shape must be k x n")
        if (self.parity_check.rows, self.parity_check.cols) != (self.m, self.n):
            raise ValueError("parity check shape must be m x n")
        if not 1 <= self.d_min <= self.n:
            raise ValueError("d_min out of range")
        ident = (1 << self.k) - 1
        for i in range(self.k):
            if self.generator.row_word(i) & ident != 1 << i:
                raise ValueError("generator is not in systematic form")
        for i in range(self.k):
            g = self.generator.row_word(i)
            for j in range(self.m):
                if (g & self.parity_check.row_word(j)).bit_count() & 1:
                    raise ValueError("generator and parity check are not orthogonal")

    def __str__(self) -> str:
        flag = "verified" if self.d_min_verified else "declared"
        return f"[{self.n},{self.k},{self.d_min}] ({flag})"


@dataclass(frozen=True)
class ProtectionReport:
    """Outcome of exhaustively checking every t-erasure pattern."""

    recoverable: bool
    failing_patterns: tuple[tuple[int, ...], ...]
    patterns_checked: int


def _assemble(parity_rows: Sequence[int], k: int, m: int) -> tuple[BitMatrix, BitMatrix]:
    """[I_k | P] and [P^T | I_m] from packed P rows (bit j = parity column j)."""
    gen = BitMatrix.from_row_words(
        ((1 << i) | (parity_rows[i] << k) for i in range(k)), k + m
    )
    h_words = []
    for j in range(m):
        w = 1 << (k + j)
        for i in range(k):
            if (parity_rows[i] >> j) & 1:
                w |= 1 << i
        h_words.append(w)
    return gen, BitMatrix.from_row_words(h_words, k + m)


def _build(parity_rows: Sequence[int], k: int, m: int, d_min: int, verified: bool) -> ProtectionCode:
    gen, chk = _assemble(parity_rows, k, m)
    return ProtectionCode(k + m, k, m, gen, chk, d_min, verified)


def _measured_distance(parity_rows: Sequence[int], k: int, m: int) -> int | None:
    """Exhaustive minimum distance, or None above the enumeration bound."""
    if k > gf2.MIN_DISTANCE_ROW_LIMIT:
        return None
    gen, _ = _assemble(parity_rows, k, m)
    return gf2.min_distance(gen)


def single_parity_code(n: int) -> ProtectionCode:
    """The [n, n-1, 2] code: one connection carries the XOR of all the others."""
    if n < 2:
        raise ValueError(f"a parity code needs n >= 2 connections, got {n}")
    return _build([1] * (n - 1), n - 1, 1, 2, True)


def hamming_code(mu: int) -> ProtectionCode:
    """The systematic [2^mu - 1, 2^mu - 1 - mu, 3] Hamming code.

    Parity-check columns enumerate every nonzero mu-bit pattern: the
    weight->=2 patterns in ascending order form the data columns, the
    weight-1 patterns form the identity tail. The distance is confirmed by
    exhaustive search for mu <= 5 and declared for mu = 6.
    """
    if not 2 <= mu <= 6:
        raise ValueError(f"mu must be in [2, 6], got {mu}")
    n = (1 << mu) - 1
    parity_rows = [v for v in range(1, n + 1) if v & (v - 1)]
    k = len(parity_rows)
    measured = _measured_distance(parity_rows, k, mu)
    if measured is None:
        return _build(parity_rows, k, mu, 3, False)
    return _build(parity_rows, k, mu, measured, True)


# Primitive polynomials for the extension fields backing the BCH constructions,
# packed with bit d = coefficient of x^d.
_PRIMITIVE_POLY = {3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011}


def _field_tables(m: int) -> tuple[list[int], dict[int, int]]:
    """Discrete exp/log tables for the 2^m-element field."""
    prim = _PRIMITIVE_POLY[m]
    size = 1 << m
    exp = []
    cur = 1
    for _ in range(size - 1):
        exp.append(cur)
        cur <<= 1
        if cur & size:
            cur ^= prim
    log = {v: i for i, v in enumerate(exp)}
    return exp, log


def _minimal_polynomial(coset: Sequence[int], exp: list[int], log: dict[int, int]) -> int:
    """Product of (x + a^s) over a conjugacy class; the result has 0/1 coefficients."""
    order = len(exp)
    poly = [1]
    for s in coset:
        root = exp[s % order]
        nxt = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] ^= c
            if c:
                nxt[d] ^= exp[(log[c] + log[root]) % order]
        poly = nxt
    packed = 0
    for d, c in enumerate(poly):
        if c == 1:
            packed |= 1 << d
        elif c:
            raise RuntimeError("minimal polynomial has a coefficient outside {0, 1}")
    return packed


def _poly_mul(a: int, b: int) -> int:
    """Carry-less product of packed binary polynomials."""
    out = 0
    while a:
        if a & 1:
            out ^= b
        a >>= 1
        b <<= 1
    return out


def _bch_generator_poly(n: int, design_t: int) -> int:
    m = n.bit_length()
    exp, log = _field_tables(m)
    g = 1
    seen = set()
    for i in range(1, 2 * design_t + 1):
        coset = frozenset((i << j) % n for j in range(m))
        if coset in seen:
            continue
        seen.add(coset)
        g = _poly_mul(g, _minimal_polynomial(sorted(coset), exp, log))
    return g


def bch_code(n: int, design_t: int) -> ProtectionCode:
    """Primitive narrow-sense BCH code of length n = 2^m - 1.

    The generator polynomial is the product of the minimal polynomials of
    the first 2*design_t powers of the field generator, which guarantees a
    distance of at least 2*design_t + 1. The stored d_min is the measured
    distance when the message space fits the enumeration bound, otherwise
    the declared design value. The message length k falls out of the
    generator-polynomial degree; it is not a free parameter.
    """
    if n not in (7, 15, 31, 63) or design_t not in (1, 2):
        raise ValueError(
            f"unsupported parameters: n must be 2^m - 1 with m in [3, 6] "
            f"and design_t in {{1, 2}}, got n={n}, design_t={design_t}"
        )
    g = _bch_generator_poly(n, design_t)
    k = n - (g.bit_length() - 1)
    # Rows x^i * g(x) have their leading term on the diagonal, so reduction
    # always lands in systematic form.
    words, pivots = gf2._eliminate([g << i for i in range(k)], n)
    if list(pivots) != list(range(k)):
        raise RuntimeError("cyclic generator rows did not reduce to systematic form")
    parity_rows = [w >> k for w in words]
    measured = _measured_distance(parity_rows, k, n - k)
    if measured is None:
        return _build(parity_rows, k, n - k, 2 * design_t + 1, False)
    return _build(parity_rows, k, n - k, measured, True)


def shorten(code: ProtectionCode, drop: Iterable[int]) -> ProtectionCode:
    """Remove message positions by pinning them to zero and deleting them.

    Unlike puncturing, shortening never decreases the minimum distance, so
    the shortened code keeps the protection promise of the original.
    """
    dropped = frozenset(drop)
    if not dropped:
        return code
    for p in dropped:
        if not 0 <= p < code.k:
            raise ValueError(f"drop position {p} is not a message coordinate")
    if len(dropped) >= code.k:
        raise ValueError("at least one message position must remain")
    keep = [i for i in range(code.k) if i not in dropped]
    parity_rows = [code.generator.row_word(i) >> code.k for i in keep]
    k2 = len(keep)
    measured = _measured_distance(parity_rows, k2, code.m)
    if measured is None:
        return _build(parity_rows, k2, code.m, code.d_min, code.d_min_verified)
    return _build(parity_rows, k2, code.m, measured, True)


def encode(code: ProtectionCode, message: BitVector | Sequence[int]) -> BitVector:
    """Codeword for a k-symbol message; the first k symbols are the message."""
    vec = message if isinstance(message, BitVector) else BitVector(message)
    if len(vec) != code.k:
        raise DimensionMismatch(f"message length {len(vec)} != k = {code.k}")
    return gf2.mat_vec_mul(code.generator, vec)


def erasure_decode_with_cost(
    code: ProtectionCode,
    received: Sequence[int | None],
    pattern: ErasurePattern,
) -> tuple[BitVector, int]:
    """Recover the message from a word with erased slots, counting symbol XORs.

    The count covers the XORs that accumulate the parity sums of the
    surviving symbols plus those spent combining right-hand sides while
    solving for the lost symbols; it depends only on the code and the
    pattern, never on the data.
    """
    n, k, m = code.n, code.k, code.m
    if pattern.n != n:
        raise DimensionMismatch(f"pattern length {pattern.n} != n = {n}")
    if len(received) != n:
        raise DimensionMismatch(f"received length {len(received)} != n = {n}")
    known_word = 0
    value_word = 0
    for j, sym in enumerate(received):
        if sym is None:
            if j not in pattern.erased:
                raise ValueError(f"slot {j} is erased but not in the pattern")
        elif j in pattern.erased:
            raise ValueError(f"slot {j} is in the pattern but carries a value")
        elif sym == 1:
            known_word |= 1 << j
            value_word |= 1 << j
        elif sym == 0:
            known_word |= 1 << j
        else:
            raise ValueError(f"symbols must be 0, 1, or None, got {sym!r}")

    ops = 0
    syndrome = []
    for i in range(m):
        h = code.parity_check.row_word(i)
        terms = (h & known_word).bit_count()
        if terms > 1:
            ops += terms - 1
        syndrome.append((h & value_word).bit_count() & 1)

    erased = sorted(pattern.erased)
    if not erased:
        if any(syndrome):
            raise Inconsistent("surviving symbols violate the parity checks")
        return BitVector.from_int(value_word & ((1 << k) - 1), k), ops

    restricted = []
    for i in range(m):
        h = code.parity_check.row_word(i)
        w = 0
        for t_idx, pos in enumerate(erased):
            if (h >> pos) & 1:
                w |= 1 << t_idx
        restricted.append(w)
    try:
        x, cost = gf2.solve_with_cost(
            BitMatrix.from_row_words(restricted, len(erased)), syndrome
        )
    except gf2.NoUniqueSolution as exc:
        raise AmbiguousErasure(
            f"erasures at {tuple(erased)} are not uniquely decodable"
        ) from exc
    ops += cost
    full = value_word
    for t_idx, pos in enumerate(erased):
        if x[t_idx]:
            full |= 1 << pos
    return BitVector.from_int(full & ((1 << k) - 1), k), ops


def erasure_decode(
    code: ProtectionCode,
    received: Sequence[int | None],
    pattern: ErasurePattern,
) -> BitVector:
    """Recover the full message from a word with erased slots.

    Succeeds exactly when the erased columns of the parity check are
    linearly independent; raises AmbiguousErasure otherwise, and
    Inconsistent if the surviving symbols fit no codeword at all.
    """
    message, _ = erasure_decode_with_cost(code, received, pattern)
    return message


def verify_protection(code: ProtectionCode, t: int) -> ProtectionReport:
    """Try to decode every t-subset of erased positions; list the failures."""
    if not 0 <= t <= code.n:
        raise ValueError(f"t must be in [0, {code.n}], got {t}")
    total = math.comb(code.n, t)
    if total > PATTERN_ENUMERATION_LIMIT:
        raise TooManyPatterns(
            f"C({code.n}, {t}) = {total} exceeds {PATTERN_ENUMERATION_LIMIT}"
        )
    # Decodability never depends on the data, so one generic probe word is
    # enough; comparing the decoded message guards the decoder itself.
    rng = random.Random(0x4E5043)
    message = BitVector([rng.randrange(2) for _ in range(code.k)])
    base = list(encode(code, message))
    failing = []
    for pat in itertools.combinations(range(code.n), t):
        received = base.copy()
        for p in pat:
            received[p] = None
        try:
            decoded = erasure_decode(code, received, ErasurePattern(code.n, pat))
        except AmbiguousErasure:
            failing.append(pat)
            continue
        if decoded != message:
            failing.append(pat)
    return ProtectionReport(not failing, tuple(failing), total)


def format_code_file(code: ProtectionCode) -> str:
    """Serialize: an ``NPC n k d_min verified|declared`` header, then the generator."""
    flag = "verified" if code.d_min_verified else "declared"
    return f"NPC {code.n} {code.k} {code.d_min} {flag}\n" + code.generator.to_text()


def parse_code_file(text: str) -> ProtectionCode:
    """Parse :func:`format_code_file` output, rejecting mismatched dimensions."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty code file")
    head = lines[0].split(" ")
    if len(head) != 5 or head[0] != "NPC":
        raise ValueError(f"malformed code file header: {lines[0]!r}")
    if not all(part.isdigit() for part in head[1:4]):
        raise ValueError(f"malformed code file header: {lines[0]!r}")
    n, k, d_min = int(head[1]), int(head[2]), int(head[3])
    if head[4] not in ("verified", "declared"):
        raise ValueError(f"unknown distance flag: {head[4]!r}")
    gen = BitMatrix.from_text("\n".join(lines[1:]) + "\n")
    if (gen.rows, gen.cols) != (k, n):
        raise ValueError(
            f"header claims {k} x {n} but the matrix is {gen.rows} x {gen.cols}"
        )
    parity_rows = [gen.row_word(i) >> k for i in range(k)]
    _, chk = _assemble(parity_rows, k, n - k)
    return ProtectionCode(n, k, n - k, gen, chk, d_min, head[4] == "verified")
