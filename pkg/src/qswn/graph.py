"""Small-world graph generation: N-vertex ring plus random shortcut links.

Vertices are labeled 1..n.  Ring edges connect nearest neighbors (with
wrap-around); shortcuts are extra edges between non-adjacent vertex pairs,
drawn uniformly at random without replacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class GraphCapacityError(ValueError):
    """Requested more shortcuts than the graph can hold."""


@dataclass(frozen=True)
class SmallWorldGraph:
    """Ring of ``n`` vertices plus an ordered list of shortcut pairs.

    Each shortcut ``(a, b)`` satisfies ``1 <= a < b <= n``, never duplicates
    a ring edge, and no pair appears twice.
    """

    n: int
    shortcuts: tuple[tuple[int, int], ...]
    seed_record: str = ""

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need n >= 3, got n={self.n}")
        seen = set()
        for a, b in self.shortcuts:
            if not (1 <= a < b <= self.n):
                raise ValueError(f"shortcut ({a}, {b}) out of range for n={self.n}")
            if b - a in (1, self.n - 1):
                raise ValueError(f"shortcut ({a}, {b}) duplicates a ring edge")
            if (a, b) in seen:
                raise ValueError(f"duplicate shortcut ({a}, {b})")
            seen.add((a, b))
        if len(self.shortcuts) > eligible_pair_count(self.n):
            raise GraphCapacityError(
                f"{len(self.shortcuts)} shortcuts exceed capacity "
                f"{eligible_pair_count(self.n)} at n={self.n}"
            )

    @property
    def shortcut_count(self) -> int:
        return len(self.shortcuts)

    def ring_edges(self) -> list[tuple[int, int]]:
        """Nearest-neighbor edges including the (1, n) wrap-around bond."""
        edges = [(i, i + 1) for i in range(1, self.n)]
        edges.append((1, self.n))
        return edges

    def degrees(self) -> np.ndarray:
        deg = np.full(self.n, 2, dtype=int)
        for a, b in self.shortcuts:
            deg[a - 1] += 1
            deg[b - 1] += 1
        return deg

    def to_edge_list(self) -> str:
        """Plain-text serialization: header line, then sorted shortcut pairs."""
        lines = [f"n {self.n} shortcuts {len(self.shortcuts)} seed {self.seed_record}"]
        for a, b in sorted(self.shortcuts):
            lines.append(f"{a} {b}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "SmallWorldGraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "n" or head[2] != "shortcuts" or head[4] != "seed":
            raise ValueError(f"malformed edge-list header: {lines[0]!r}")
        n = int(head[1])
        count = int(head[3])
        seed_record = " ".join(head[5:])
        pairs = tuple((int(a), int(b)) for a, b in (ln.split() for ln in lines[1:]))
        if len(pairs) != count:
            raise ValueError(f"header promises {count} shortcuts, file has {len(pairs)}")
        return cls(n=n, shortcuts=pairs, seed_record=seed_record)


def eligible_pair_count(n: int) -> int:
    """Number of vertex pairs not already joined by a ring edge: n(n-3)/2."""
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    return n * (n - 3) // 2


def shortcut_count_from_density(n: int, p: float) -> int:
    """Convert shortcut density p to an absolute count, round(p*n).

    Ties round away from zero so the count grid is monotone in p.
    """
    if p < 0:
        raise ValueError(f"need p >= 0, got p={p}")
    count = math.floor(p * n + 0.5)
    if count > eligible_pair_count(n):
        raise GraphCapacityError(
            f"p={p} at n={n} asks for {count} shortcuts, capacity is {eligible_pair_count(n)}"
        )
    return count


def _is_eligible(a: int, b: int, n: int) -> bool:
    d = b - a
    return d not in (1, n - 1)


def _all_eligible_pairs(n: int) -> list[tuple[int, int]]:
    return [
        (a, b)
        for a in range(1, n + 1)
        for b in range(a + 1, n + 1)
        if _is_eligible(a, b, n)
    ]


def generate_small_world(
    n: int,
    shortcut_count: int,
    seed,
    strict_endpoints: bool = False,
) -> SmallWorldGraph:
    """Draw ``shortcut_count`` shortcuts uniformly without replacement.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; identical
    inputs give identical graphs, including shortcut order.  With
    ``strict_endpoints`` every shortcut endpoint is distinct (each vertex in
    at most one shortcut), which caps the count at floor(n/2).
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    if shortcut_count < 0:
        raise ValueError(f"need shortcut_count >= 0, got {shortcut_count}")
    capacity = eligible_pair_count(n)
    if shortcut_count > capacity:
        raise GraphCapacityError(
            f"shortcut_count={shortcut_count} exceeds capacity {capacity} at n={n}"
        )
    if strict_endpoints and shortcut_count > n // 2:
        raise GraphCapacityError(
            f"strict endpoints cap shortcut_count at {n // 2}, got {shortcut_count}"
        )

    rng = np.random.default_rng(seed)
    if not strict_endpoints and shortcut_count > capacity // 2:
        # Dense regime: rejection sampling stalls, enumerate and shuffle.
        pairs = _all_eligible_pairs(n)
        order = rng.permutation(len(pairs))[:shortcut_count]
        chosen = tuple(pairs[i] for i in order)
    else:
        chosen_list: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        used: set[int] = set()
        while len(chosen_list) < shortcut_count:
            a = int(rng.integers(1, n + 1))
            b = int(rng.integers(1, n + 1))
            if a == b:
                continue
            if a > b:
                a, b = b, a
            if not _is_eligible(a, b, n) or (a, b) in seen:
                continue
            if strict_endpoints and (a in used or b in used):
                continue
            seen.add((a, b))
            used.update((a, b))
            chosen_list.append((a, b))
        chosen = tuple(chosen_list)

    return SmallWorldGraph(n=n, shortcuts=chosen, seed_record=str(seed))
