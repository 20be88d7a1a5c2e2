"""Signed permutations of an index set ``{1, ..., n}``.

A signed permutation sends each half-index ``i+``/``i-`` to ``j+`` or
``j-`` for a single ``j``.  It is stored as the underlying permutation
plus the set of indices whose halves get exchanged on the way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, TypeVar

from .errors import DomainMismatch, InputError, LengthMismatch

T = TypeVar("T")

LITERAL = "literal"
ALL_FLIPS = "all_flips"
SGN_PRIME_MODES = (LITERAL, ALL_FLIPS)


def perm_parity(images: Sequence[int]) -> int:
    """Parity (0 even, 1 odd) of a permutation given as 1-based images."""
    n = len(images)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = images[i] - 1
    return (n - cycles) % 2


def _check_bijection(images: Sequence[int]) -> None:
    if sorted(images) != list(range(1, len(images) + 1)):
        raise InputError(f"not a permutation of 1..{len(images)}: {list(images)}")


@dataclass(frozen=True)
class SignedPermutation:
    """An element of the hyperoctahedral group on ``1..domain_size``.

    ``perm[i - 1]`` is the image of index ``i``; ``i in flips`` means
    ``i+`` is sent to ``perm(i)-``.
    """

    perm: tuple[int, ...]
    flips: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", tuple(int(x) for x in self.perm))
        object.__setattr__(self, "flips", frozenset(int(x) for x in self.flips))
        _check_bijection(self.perm)
        bad = [i for i in self.flips if not 1 <= i <= len(self.perm)]
        if bad:
            raise InputError(f"flip indices out of range: {sorted(bad)}")

    @property
    def domain_size(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> tuple[int, bool]:
        """Image of ``i+`` as ``(j, flipped)``."""
        return self.perm[i - 1], i in self.flips

    def is_identity(self) -> bool:
        return not self.flips and all(p == i for i, p in enumerate(self.perm, 1))

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """``self o other``: apply ``other`` first."""
        if self.domain_size != other.domain_size:
            raise DomainMismatch(
                f"cannot compose domains of size {self.domain_size} and {other.domain_size}"
            )
        perm = tuple(self.perm[j - 1] for j in other.perm)
        flips = frozenset(
            i
            for i in range(1, self.domain_size + 1)
            if (i in other.flips) != (other.perm[i - 1] in self.flips)
        )
        return SignedPermutation(perm, flips)

    __mul__ = compose

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.domain_size
        for i, j in enumerate(self.perm, 1):
            perm[j - 1] = i
        return SignedPermutation(tuple(perm), frozenset(self.perm[i - 1] for i in self.flips))

    def sgn(self) -> int:
        return -1 if perm_parity(self.perm) else 1

    def sgn_prime(self, mode: str = LITERAL) -> int:
        """``(-1)^k`` where k counts flipped fixed points (``literal``) or all flips."""
        if mode == LITERAL:
            k = sum(1 for i in self.flips if self.perm[i - 1] == i)
        elif mode == ALL_FLIPS:
            k = len(self.flips)
        else:
            raise InputError(f"unknown sgn' mode {mode!r}; expected one of {SGN_PRIME_MODES}")
        return -1 if k % 2 else 1

    def act_on_tuple(self, t: Sequence[tuple[T, T]]) -> tuple[tuple[T, T], ...]:
        """Move entry ``i`` to position ``perm(i)``, swapping it if ``i`` is flipped."""
        if len(t) != self.domain_size:
            raise LengthMismatch(f"tuple of length {len(t)} for domain size {self.domain_size}")
        out: list[tuple[T, T]] = [None] * len(t)  # type: ignore[list-item]
        for i, (a, b) in enumerate(t, 1):
            out[self.perm[i - 1] - 1] = (b, a) if i in self.flips else (a, b)
        return tuple(out)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "flips": sorted(self.flips)}

    @classmethod
    def from_json(cls, data: dict) -> "SignedPermutation":
        try:
            return cls(tuple(data["perm"]), frozenset(data.get("flips", ())))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad signed permutation object: {data!r}") from exc


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    return a.compose(b)


def inverse(s: SignedPermutation) -> SignedPermutation:
    return s.inverse()


def sgn(s: SignedPermutation) -> int:
    return s.sgn()


def sgn_prime(s: SignedPermutation, mode: str = LITERAL) -> int:
    return s.sgn_prime(mode)


def act_on_tuple(s: SignedPermutation, t: Sequence[tuple[T, T]]) -> tuple[tuple[T, T], ...]:
    return s.act_on_tuple(t)


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """Every element of the group, permutations in lexicographic order."""
    for p in itertools.permutations(range(1, n + 1)):
        for bits in itertools.product((False, True), repeat=n):
            yield SignedPermutation(p, frozenset(i for i, b in enumerate(bits, 1) if b))


def orientation_twist(s: SignedPermutation, d: int, mode: str = LITERAL) -> int:
    """Sign ``(-1)^((d-1)e + d e')`` with e, e' the parities of sgn and sgn'."""
    if d < 3:
        raise InputError(f"d must be >= 3, got {d}")
    e = 0 if s.sgn() == 1 else 1
    e_prime = 0 if s.sgn_prime(mode) == 1 else 1
    return -1 if ((d - 1) * e + d * e_prime) % 2 else 1
