"""Built-in indexed families: chain, rectangle, diagonal, gold.

Each family declares a universe bound B that is a true witness bound: any
two distinct member languages differ on some element <= B.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import (
    IndexedFamily,
    Language,
    explicit_language,
    pair_decode,
    pair_encode,
    point_decode,
    point_encode,
    zigzag_encode,
)


class IndexOutOfRangeError(ValueError):
    """Family index beyond the harness cap."""


class InvalidRectangleError(ValueError):
    """Inverted rectangle bounds or bounds outside the grid."""


class InvalidFamilyMemberError(ValueError):
    """A finite diagonal-family member violating the family definition."""


@dataclass(frozen=True)
class ChainFamily:
    """L_i = {n | n <= i}; the languages form a strict chain."""

    max_index: int = 120

    @property
    def universe_bound(self) -> int:
        return self.max_index + 2

    def language(self, i: int) -> Language:
        if not 0 <= i <= self.max_index:
            raise IndexOutOfRangeError(f"chain index {i} not in [0, {self.max_index}]")
        return explicit_language(
            range(i + 1), self.universe_bound, f"chain[{i}]"
        )

    def template(self, i: int, n: int) -> int:
        return 1 if n <= i else 0

    def indexed(self) -> IndexedFamily:
        return IndexedFamily("chain", self.template, self.language)


def _radial_key_factory(bound: int):
    # Precomputed decode keeps the ordering key O(1) during mincheck scans.
    keys = []
    for code in range(bound + 1):
        x, y = point_decode(code)
        keys.append((x * x + y * y, x, y))

    def key(code: int) -> tuple:
        return keys[code]

    return key


@dataclass(frozen=True)
class RectangleFamily:
    """Axis-aligned rectangles on a signed grid, encoded as pair-codes.

    Elements are point_encode(x, y) for grid points; the element ordering
    is radial (x^2 + y^2) with lexicographic (x, y) tie-break.  The family
    includes one distinguished universal member covering the whole grid.
    """

    grid_bound: int = 32

    @property
    def universe_bound(self) -> int:
        g = self.grid_bound
        return pair_encode(zigzag_encode(g), zigzag_encode(g))

    def _tables(self):
        cached = self.__dict__.get("_tables_cache")
        if cached is None:
            import numpy as np

            bound = self.universe_bound
            g = self.grid_bound
            points = []
            for code in range(bound + 1):
                points.append(point_decode(code))
            xs = np.array([p[0] for p in points], dtype=np.int64)
            ys = np.array([p[1] for p in points], dtype=np.int64)
            in_grid = (np.abs(xs) <= g) & (np.abs(ys) <= g)
            cached = (points, xs, ys, in_grid, _radial_key_factory(bound))
            self.__dict__["_tables_cache"] = cached
        return cached

    def decode(self, code: int) -> tuple[int, int]:
        return self._tables()[0][code]

    def ordering_key(self, code: int) -> tuple:
        return self._tables()[4](code)

    def language(self, ax: int, bx: int, ay: int, by: int) -> Language:
        g = self.grid_bound
        if ax > bx or ay > by:
            raise InvalidRectangleError(f"inverted bounds ({ax},{bx},{ay},{by})")
        if min(ax, ay) < -g or max(bx, by) > g:
            raise InvalidRectangleError(f"bounds outside +/-{g} grid")
        memo = self.__dict__.setdefault("_language_memo", {})
        bounds = (ax, bx, ay, by)
        lang = memo.get(bounds)
        if lang is None:
            import numpy as np

            _, xs, ys, in_grid, key = self._tables()
            mask = in_grid & (xs >= ax) & (xs <= bx) & (ys >= ay) & (ys <= by)
            members = frozenset(int(c) for c in np.nonzero(mask)[0])
            lang = Language(
                membership=members.__contains__,
                universe_bound=self.universe_bound,
                descriptor=f"rect[{ax},{bx},{ay},{by}]",
                ordering_key=key,
                explicit_members=members,
            )
            memo[bounds] = lang
        return lang

    def universal_language(self) -> Language:
        g = self.grid_bound
        return self.language(-g, g, -g, g)

    def template(self, i: int, n: int) -> int:
        """TEMPLATE for rectangles: the index packs the four zigzagged bounds."""
        ab, cd = pair_decode(i)
        za, zb = pair_decode(ab)
        zc, zd = pair_decode(cd)
        from .core import zigzag_decode

        ax, bx, ay, by = map(zigzag_decode, (za, zb, zc, zd))
        if ax > bx or ay > by:
            return 0
        x, y = point_decode(n)
        return 1 if ax <= x <= bx and ay <= y <= by else 0

    def index_of(self, ax: int, bx: int, ay: int, by: int) -> int:
        za, zb, zc, zd = map(zigzag_encode, (ax, bx, ay, by))
        return pair_encode(pair_encode(za, zb), pair_encode(zc, zd))


@dataclass(frozen=True)
class DiagonalFamily:
    """The two-form family over encoded pairs <j, n>.

    diag(i): {<0, n> | i <= n <= base_max}, so the index is the minimum of
    the base language.  fin(members): any finite set of <j, n> codes with
    j in {0, 1} and at least one <1, .> element.
    """

    universe_bound: int = 600

    @property
    def base_max(self) -> int:
        n = 0
        while pair_encode(0, n + 1) <= self.universe_bound:
            n += 1
        return n

    def diag_language(self, i: int) -> Language:
        if not 0 <= i <= self.base_max:
            raise IndexOutOfRangeError(
                f"diag index {i} not representable below bound {self.universe_bound}"
            )
        members = frozenset(
            pair_encode(0, n) for n in range(i, self.base_max + 1)
        )
        return explicit_language(members, self.universe_bound, f"diag[{i}]")

    def fin_language(self, members: Iterable[tuple[int, int]]) -> Language:
        pairs = sorted(set(tuple(m) for m in members))
        if not pairs:
            raise InvalidFamilyMemberError("fin language must be nonempty")
        if any(j not in (0, 1) for j, _ in pairs):
            raise InvalidFamilyMemberError("fin members must have first coordinate 0 or 1")
        if not any(j == 1 for j, _ in pairs):
            raise InvalidFamilyMemberError("fin language needs at least one <1, .> member")
        codes = frozenset(pair_encode(j, n) for j, n in pairs)
        if max(codes) > self.universe_bound:
            raise InvalidFamilyMemberError(
                f"fin member code exceeds universe bound {self.universe_bound}"
            )
        label = ",".join(f"({j},{n})" for j, n in pairs)
        return explicit_language(codes, self.universe_bound, f"fin[{label}]")

    def template(self, i: int, n: int) -> int:
        """TEMPLATE for the diag sub-family (fin members are parameter blocks)."""
        a, b = pair_decode(n)
        return 1 if a == 0 and i <= b <= self.base_max else 0

    def indexed(self) -> IndexedFamily:
        return IndexedFamily("diagonal", self.template, self.diag_language)


@dataclass(frozen=True)
class GoldFamily:
    """The universal set [0, B] together with every one-point deletion."""

    bound: int = 50

    @property
    def universe_bound(self) -> int:
        return self.bound

    def full_language(self) -> Language:
        return explicit_language(range(self.bound + 1), self.bound, "gold[full]")

    def minus_language(self, i: int) -> Language:
        if not 0 <= i <= self.bound:
            raise IndexOutOfRangeError(f"gold deletion index {i} not in [0, {self.bound}]")
        members = frozenset(range(self.bound + 1)) - {i}
        return explicit_language(members, self.bound, f"gold[-{i}]")

    def template(self, i: int, n: int) -> int:
        """Index 0 is the full set; index i+1 deletes point i."""
        if n > self.bound:
            return 0
        if i == 0:
            return 1
        return 0 if n == i - 1 else 1

    def indexed(self) -> IndexedFamily:
        return IndexedFamily("gold", self.template, lambda i: (
            self.full_language() if i == 0 else self.minus_language(i - 1)
        ))
