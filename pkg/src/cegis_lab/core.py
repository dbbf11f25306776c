"""Core data model: pairing codec, languages, traces, programs.

Languages are decidable sets of natural numbers with a declared universe
bound B.  Every family built on top of these types guarantees that two
distinct member languages differ on some element <= B, which is what makes
bounded verifier search exact.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

# The padding symbol in traces.  A trace entry is either a natural number
# or BOT (no information this step).
BOT = None

TraceEntry = Optional[int]

# Sanity cap for pairing arguments; Python ints are unbounded but code
# values this large indicate a caller bug, not a meaningful language.
_PAIR_ARG_LIMIT = 1 << 40


class PairRangeError(ValueError):
    """Pairing argument outside the supported range."""


class EmptyLanguageError(ValueError):
    """Canonical trace generation requires a nonempty language."""


def pair_encode(n1: int, n2: int) -> int:
    """Cantor pairing code for (n1, n2).

    Strictly monotone in each argument and bijective, with
    pair_encode(a, 0) >= a (the floor property the singleton-probe
    constructions rely on).
    """
    if n1 < 0 or n2 < 0:
        raise PairRangeError("pairing is defined on naturals only")
    if n1 > _PAIR_ARG_LIMIT or n2 > _PAIR_ARG_LIMIT:
        raise PairRangeError(f"pairing argument exceeds supported range: ({n1}, {n2})")
    s = n1 + n2
    return s * (s + 1) // 2 + n2


def pair_decode(code: int) -> tuple[int, int]:
    """Inverse of pair_encode."""
    if code < 0:
        raise PairRangeError("pair codes are naturals")
    s = (math.isqrt(8 * code + 1) - 1) // 2
    n2 = code - s * (s + 1) // 2
    return s - n2, n2


def zigzag_encode(z: int) -> int:
    """Map a signed integer onto a natural: 0->0, -1->1, 1->2, -2->3, ..."""
    return 2 * z if z >= 0 else -2 * z - 1


def zigzag_decode(n: int) -> int:
    if n < 0:
        raise ValueError("zigzag codes are naturals")
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def point_encode(x: int, y: int) -> int:
    """Encode a signed grid point as a natural (zigzag both axes, then pair)."""
    return pair_encode(zigzag_encode(x), zigzag_encode(y))


def point_decode(code: int) -> tuple[int, int]:
    a, b = pair_decode(code)
    return zigzag_decode(a), zigzag_decode(b)


def _natural_key(n: int) -> tuple:
    return (n,)


@dataclass(frozen=True, eq=False)
class Language:
    """A decidable membership predicate over [0, universe_bound].

    ``ordering_key`` totalizes the family's element ordering: it maps an
    element to a sortable tuple whose first component is the declared
    (possibly partial) order and whose remaining components implement the
    documented tie-break.
    """

    membership: Callable[[int], bool]
    universe_bound: int
    descriptor: str
    ordering_key: Callable[[int], tuple] = _natural_key
    explicit_members: Optional[frozenset] = None

    def contains(self, n: int) -> bool:
        if self.explicit_members is not None:
            return n in self.explicit_members
        return bool(self.membership(n))

    def members(self) -> frozenset:
        """All members <= universe_bound (cached)."""
        cached = self.__dict__.get("_members")
        if cached is None:
            if self.explicit_members is not None:
                cached = frozenset(
                    m for m in self.explicit_members if m <= self.universe_bound
                )
            else:
                cached = frozenset(
                    n for n in range(self.universe_bound + 1) if self.membership(n)
                )
            self.__dict__["_members"] = cached
        return cached

    def intersect_singleton(self, k: int) -> "Language":
        members = frozenset({k}) if self.contains(k) else frozenset()
        return Language(
            membership=members.__contains__,
            universe_bound=self.universe_bound,
            descriptor=f"{self.descriptor}&{{{k}}}",
            ordering_key=self.ordering_key,
            explicit_members=members,
        )


def semantically_equal(a: Language, b: Language) -> bool:
    """Agreement on the shared bounded universe."""
    if a.universe_bound == b.universe_bound:
        return a.members() == b.members()
    bound = max(a.universe_bound, b.universe_bound)
    return all(a.contains(n) == b.contains(n) for n in range(bound + 1))


def explicit_language(
    members: Iterable[int],
    universe_bound: int,
    descriptor: Optional[str] = None,
    ordering_key: Callable[[int], tuple] = _natural_key,
) -> Language:
    ms = frozenset(members)
    if descriptor is None:
        descriptor = "set{" + ",".join(str(m) for m in sorted(ms)) + "}"
    return Language(
        membership=ms.__contains__,
        universe_bound=universe_bound,
        descriptor=descriptor,
        ordering_key=ordering_key,
        explicit_members=ms,
    )


@dataclass(frozen=True)
class Trace:
    """A finite prefix of a presentation of positive examples.

    ``target_hint`` is harness bookkeeping only and must never reach an
    engine or a log.
    """

    entries: tuple[TraceEntry, ...]
    target_hint: Optional[str] = None

    def prefix(self, k: int) -> tuple[TraceEntry, ...]:
        return self.entries[:k]

    def __len__(self) -> int:
        return len(self.entries)


def smpl(entries: Iterable[TraceEntry]) -> frozenset:
    """Natural numbers occurring in a trace prefix (padding excluded)."""
    return frozenset(e for e in entries if e is not BOT)


@dataclass(frozen=True)
class IndexedFamily:
    """The recursive map TEMPLATE(i, n) together with language construction."""

    name: str
    template: Callable[[int, int], int]
    make_language: Callable[[int], Language]


@dataclass(frozen=True, eq=False)
class Program:
    """An index into a candidate space plus bounded engine-owned state.

    Two programs are semantically equal iff their languages agree on the
    universe; ``aux`` never participates in identity.
    """

    family: str
    index: object
    language: Language
    aux: object = None

    def descriptor(self) -> str:
        return self.language.descriptor

    def semantic_key(self) -> frozenset:
        return self.language.members()


CANONICAL = "canonical"
SEEDED_RANDOM = "seeded-random"
PADDED_SEEDED = "padded-seeded"

_SCHEDULES = (CANONICAL, SEEDED_RANDOM, PADDED_SEEDED)


def trace_generate(
    language: Language,
    schedule: str,
    seed: int = 0,
    length: int = 0,
    target_hint: Optional[str] = None,
) -> Trace:
    """Sample a trace prefix for a language.

    canonical: members in ascending order, no padding, repeating the
    largest member once exhausted.  seeded-random: uniform member draws
    (all padding for an empty language).  padded-seeded: repeated shuffled
    passes over the members with interleaved padding, so every member
    recurs within a computable horizon.
    """
    if schedule not in _SCHEDULES:
        raise ValueError(f"unknown schedule: {schedule}")
    if length == 0:
        return Trace(entries=(), target_hint=target_hint)
    members = sorted(language.members())

    if schedule == CANONICAL:
        if not members:
            raise EmptyLanguageError(
                f"canonical schedule needs a nonempty language: {language.descriptor}"
            )
        entries = [members[i] if i < len(members) else members[-1] for i in range(length)]
        return Trace(entries=tuple(entries), target_hint=target_hint)

    rng = random.Random(seed)
    entries: list[TraceEntry] = []
    if schedule == SEEDED_RANDOM:
        for _ in range(length):
            entries.append(rng.choice(members) if members else BOT)
        return Trace(entries=tuple(entries), target_hint=target_hint)

    # padded-seeded
    if not members:
        return Trace(entries=(BOT,) * length, target_hint=target_hint)
    while len(entries) < length:
        block = list(members)
        rng.shuffle(block)
        for m in block:
            if rng.random() < 0.25:
                entries.append(BOT)
            entries.append(m)
    return Trace(entries=tuple(entries[:length]), target_hint=target_hint)
