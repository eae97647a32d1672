"""Wall's generators acting on H_2(CP^2 # k CP^2-bar), Cremona descent, orbit search.

The group is generated by the trivial automorphisms (permuting the e_i and
e_i -> -e_i) together with the reflection in H - e_1 - e_2 when k = 2, or in
H - e_1 - e_2 - e_3 when k >= 3.  Orbits are infinite once k >= 9, so orbit
equivalence is only ever decided inside a cap on |a|.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

from .lattice import (
    DimensionError,
    DomainError,
    LatticeClass,
    k_dot,
    normalize_trivial,
    pair,
    square,
)

PAIR = "pair"
CREMONA = "cremona"


@dataclass(frozen=True)
class Reflection:
    kind: str
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.kind not in (PAIR, CREMONA):
            raise ValueError(f"unknown reflection kind {self.kind!r}")
        need = 2 if self.kind == PAIR else 3
        if len(self.indices) != need or len(set(self.indices)) != need:
            raise IndexError(f"{self.kind} reflection needs {need} distinct indices, got {self.indices}")

    def check(self, k: int):
        if self.kind == PAIR and k < 2:
            raise IndexError("pair reflection needs k >= 2")
        if self.kind == CREMONA and k < 3:
            raise IndexError("cremona reflection needs k >= 3")
        if any(not 0 <= i < k for i in self.indices):
            raise IndexError(f"indices {self.indices} out of range for k={k}")

    def root(self, k: int) -> LatticeClass:
        self.check(k)
        b = [0] * k
        for i in self.indices:
            b[i] = 1
        return LatticeClass(1, tuple(b))

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices)}


def reflect(x: LatticeClass, r: Reflection) -> LatticeClass:
    root = r.root(x.k)
    # s(x) = x - 2 pair(x,r)/r^2 * r, with r^2 = -1 (pair) or -2 (cremona)
    coeff = 2 * pair(x, root) if r.kind == PAIR else pair(x, root)
    return x + coeff * root


def descent_reflection(k: int) -> Optional[Reflection]:
    """The reflection used by :func:`reduce` on a trivially normalized class."""
    if k >= 3:
        return Reflection(CREMONA, (0, 1, 2))
    if k == 2:
        return Reflection(PAIR, (0, 1))
    return None


# -- words in the generators -------------------------------------------------


@dataclass(frozen=True)
class Flip:
    i: int

    def apply(self, x: LatticeClass) -> LatticeClass:
        b = list(x.b)
        b[self.i] = -b[self.i]
        return LatticeClass(x.a, tuple(b))

    def to_json(self):
        return {"gen": "flip", "i": self.i}


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    def apply(self, x: LatticeClass) -> LatticeClass:
        b = list(x.b)
        b[self.i], b[self.j] = b[self.j], b[self.i]
        return LatticeClass(x.a, tuple(b))

    def to_json(self):
        return {"gen": "swap", "i": self.i, "j": self.j}


@dataclass(frozen=True)
class Reflect:
    r: Reflection

    def apply(self, x: LatticeClass) -> LatticeClass:
        return reflect(x, self.r)

    def to_json(self):
        return {"gen": "reflect", **self.r.to_json()}


@dataclass(frozen=True)
class Negate:
    """Global sign x -> -x.  Not a group element; only used on request."""

    def apply(self, x: LatticeClass) -> LatticeClass:
        return -x

    def to_json(self):
        return {"gen": "negate"}


Step = Union[Flip, Swap, Reflect, Negate]


def apply_word(x: LatticeClass, word) -> LatticeClass:
    for step in word:
        x = step.apply(x)
    return x


def step_from_json(obj: dict) -> Step:
    gen = obj.get("gen")
    if gen == "flip":
        return Flip(int(obj["i"]))
    if gen == "swap":
        return Swap(int(obj["i"]), int(obj["j"]))
    if gen == "reflect":
        return Reflect(Reflection(obj["kind"], tuple(obj["indices"])))
    if gen == "negate":
        return Negate()
    raise DomainError(f"unknown generator {obj!r}")


def normalize_with_word(x: LatticeClass) -> tuple[LatticeClass, list[Step]]:
    """Like ``normalize_trivial`` but also return the flips and swaps used."""
    word: list[Step] = [Flip(i) for i, v in enumerate(x.b) if v < 0]
    b = [abs(v) for v in x.b]
    for i in range(len(b)):
        j = max(range(i, len(b)), key=lambda t: (b[t], -t))
        if j != i:
            b[i], b[j] = b[j], b[i]
            word.append(Swap(i, j))
    return LatticeClass(x.a, tuple(b)), word


# -- Cremona descent ---------------------------------------------------------


def reduction_key(x: LatticeClass) -> tuple:
    return (abs(x.a), x.b)


def reduce(x: LatticeClass) -> LatticeClass:
    """Greedy descent to a key-minimal representative of the orbit of x.

    Normalize, then reflect in the root through the largest two (k = 2) or
    three (k >= 3) coefficients while that strictly lowers ``(|a|, b)``.
    """
    cur = normalize_trivial(x)
    r = descent_reflection(cur.k)
    if r is None:
        return cur
    seen = {cur}
    while True:
        nxt = normalize_trivial(reflect(cur, r))
        if nxt in seen or reduction_key(nxt) >= reduction_key(cur):
            return cur
        seen.add(nxt)
        cur = nxt


# -- bounded orbit search ----------------------------------------------------

EQUIVALENT = "equivalent"
DISTINCT_WITHIN_BOUND = "distinct-within-bound"


@dataclass(frozen=True)
class OrbitVerdict:
    status: str
    witness: Optional[tuple] = None
    explored: int = 0
    bound: int = 0
    global_sign: bool = False

    @property
    def equivalent(self) -> bool:
        return self.status == EQUIVALENT

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [s.to_json() for s in self.witness],
            "explored": self.explored,
            "bound": self.bound,
            "global_sign": self.global_sign,
        }


def default_cap(*classes: LatticeClass) -> int:
    return max(abs(x.a) for x in classes) + 8


def _raw_neighbours(a: int, b: tuple, a_cap: int):
    """Signed-root reflections of the normal form (a, b), on raw tuples.

    Yields ``(a', b', idx, signs)``; b' is already trivially normalized.
    """
    k = len(b)
    if k < 2:
        return
    size = 2 if k == 2 else 3
    mult = 2 if k == 2 else 1
    done = set()
    for idx in itertools.combinations(range(k), size):
        vals = [b[i] for i in idx]
        for signs in itertools.product((1, -1), repeat=size):
            sig = tuple(sorted(zip(vals, signs)))
            if sig in done:
                continue
            done.add(sig)
            p = mult * (a - sum(v * s for v, s in zip(vals, signs)))
            a2 = a + p
            if abs(a2) > a_cap:
                continue
            nb = list(b)
            for i, s in zip(idx, signs):
                nb[i] += p * s
            yield a2, tuple(sorted((abs(v) for v in nb), reverse=True)), idx, signs


def _move_word(n: LatticeClass, idx: tuple, signs: tuple) -> list[Step]:
    kind = PAIR if n.k == 2 else CREMONA
    flips = [Flip(i) for i, s in zip(idx, signs) if s < 0]
    word: list[Step] = flips + [Reflect(Reflection(kind, idx))] + flips
    _, w = normalize_with_word(apply_word(n, word))
    return word + w


def _bfs(start: LatticeClass, a_cap: int, targets=()) -> tuple[dict, Optional[tuple]]:
    """BFS over trivial normal forms with |a| <= a_cap, stopping at a target.

    The parent map sends ``(a, b)`` to ``((a, b) of predecessor, idx, signs)``.
    """
    root = (start.a, start.b)
    parent = {root: None}
    if root in targets:
        return parent, root
    queue = deque([root])
    while queue:
        a, b = queue.popleft()
        for a2, b2, idx, signs in _raw_neighbours(a, b, a_cap):
            node = (a2, b2)
            if node in parent:
                continue
            parent[node] = ((a, b), idx, signs)
            if node in targets:
                return parent, node
            queue.append(node)
    return parent, None


def _path(parent: dict, node: tuple) -> list[Step]:
    hops = []
    while parent[node] is not None:
        prev, idx, signs = parent[node]
        hops.append((prev, idx, signs))
        node = prev
    word: list[Step] = []
    for (a, b), idx, signs in reversed(hops):
        word.extend(_move_word(LatticeClass(a, b), idx, signs))
    return word


def inverse_word(word) -> list[Step]:
    # every generator is an involution
    return list(reversed(word))


_inverse_trivial = inverse_word


def orbit_component(x: LatticeClass, a_cap: int) -> dict:
    """Trivial normal forms reachable from x with |a| <= a_cap, mapped to a word from normalize(x)."""
    parent, _ = _bfs(normalize_trivial(x), a_cap)
    return {LatticeClass(a, b): node for (a, b), node in parent.items()}


def simplify_word(word) -> list:
    """Cancel flips within each run of flips (they commute) and adjacent repeated swaps."""
    out: list = []
    run: dict = {}

    def flush():
        out.extend(Flip(i) for i in sorted(i for i, n in run.items() if n % 2))
        run.clear()

    for step in word:
        if isinstance(step, Flip):
            run[step.i] = run.get(step.i, 0) + 1
            continue
        flush()
        if isinstance(step, Swap) and out and isinstance(out[-1], Swap) and \
                {out[-1].i, out[-1].j} == {step.i, step.j}:
            out.pop()
            continue
        out.append(step)
    flush()
    return out


def component_word(x: LatticeClass, a_cap: int, parent: Optional[dict] = None):
    """Return ``(nodes, word_to)``: the reachable normal forms and a word builder."""
    if parent is None:
        parent, _ = _bfs(normalize_trivial(x), a_cap)
    _, wx = normalize_with_word(x)

    def word_to(y: LatticeClass) -> Optional[list[Step]]:
        ny, wy = normalize_with_word(y)
        key = (ny.a, ny.b)
        if key not in parent:
            return None
        return simplify_word(list(wx) + _path(parent, key) + _inverse_trivial(wy))

    return {LatticeClass(a, b) for (a, b) in parent}, word_to


def orbit_equivalent(
    x: LatticeClass,
    y: LatticeClass,
    a_cap: Optional[int] = None,
    allow_global_sign: bool = False,
) -> OrbitVerdict:
    """Decide whether y lies in the orbit of x, searching only |a| <= a_cap.

    A negative answer is reported as ``distinct-within-bound``: for k >= 9 the
    orbit is infinite and a bounded search proves nothing about distinctness.
    """
    if x.k != y.k:
        raise DimensionError(f"classes live over k={x.k} and k={y.k}")
    if a_cap is None:
        a_cap = default_cap(x, y)
    if a_cap < max(abs(x.a), abs(y.a)):
        raise DomainError(f"a_cap={a_cap} is below max(|a|) of the inputs")
    start, wx = normalize_with_word(x)
    ny, wy = normalize_with_word(y)
    targets = {(ny.a, ny.b): (wy, False)}
    if allow_global_sign:
        nny, wny = normalize_with_word(-y)
        targets.setdefault((nny.a, nny.b), (wny, True))

    parent, hit = _bfs(start, a_cap, targets)
    if hit is None:
        return OrbitVerdict(DISTINCT_WITHIN_BOUND, None, len(parent), a_cap, allow_global_sign)
    back, negated = targets[hit]
    word = list(wx) + _path(parent, hit) + _inverse_trivial(back)
    if negated:
        word.append(Negate())
    word = simplify_word(word)
    if apply_word(x, word) != y:
        raise AssertionError("orbit witness failed to replay")
    return OrbitVerdict(EQUIVALENT, tuple(word), len(parent), a_cap, allow_global_sign)


# -- enumerations ------------------------------------------------------------


def _nonincreasing(k: int, total_sq: int, top: int, low: int = 0) -> Iterator[tuple[int, ...]]:
    """Non-increasing k-tuples with entries in [low, top] and sum of squares total_sq."""
    if k == 0:
        if total_sq == 0:
            yield ()
        return
    hi = min(top, math.isqrt(total_sq))
    for v in range(hi, low - 1, -1):
        rest = total_sq - v * v
        if rest > (k - 1) * max(v * v, low * low):
            break
        for tail in _nonincreasing(k - 1, rest, v, low):
            yield (v,) + tail


def enumerate_reduced(k: int, square_: int, a_max: int) -> list[LatticeClass]:
    """Trivially normalized classes with the given square, 0 <= a <= a_max, fixed by reduce."""
    if a_max < 0:
        raise DomainError("a_max must be nonnegative")
    out = []
    for a in range(a_max + 1):
        total = a * a - square_
        if total < 0:
            continue
        for b in _nonincreasing(k, total, total):
            x = LatticeClass(a, b)
            if reduce(x) == x:
                out.append(x)
    return sorted(out, key=lambda c: (c.a, c.b))


def is_exceptional(x: LatticeClass) -> bool:
    return square(x) == -1 and k_dot(x) == -1


def _sorted_solutions(k: int, sq: int, lin: int, top: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing integer k-tuples (any sign) with sum b^2 = sq, sum b = lin, max <= top."""
    if k == 0:
        if sq == 0 and lin == 0:
            yield ()
        return
    r = math.isqrt(sq)
    for v in range(min(top, r), -r - 1, -1):
        rest_sq = sq - v * v
        rest_lin = lin - v
        m = k - 1
        # Cauchy-Schwarz on the remaining entries
        if rest_lin * rest_lin > m * rest_sq:
            continue
        # remaining entries are <= v
        if rest_lin > m * v:
            continue
        yield from ((v,) + t for t in _sorted_solutions(m, rest_sq, rest_lin, v))


def distinct_permutations(seq) -> Iterator[tuple]:
    counts = Counter(seq)
    keys = sorted(counts, reverse=True)
    n = len(seq)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in keys:
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                yield from rec(prefix)
                prefix.pop()
                counts[v] += 1

    yield from rec([])


@lru_cache(maxsize=None)
def _exceptional_catalog(k: int, a_max: int) -> tuple[LatticeClass, ...]:
    out = []
    for a in range(a_max + 1):
        sq, lin = a * a + 1, 3 * a - 1
        for shape in _sorted_solutions(k, sq, lin, math.isqrt(sq)):
            out.extend(LatticeClass(a, b) for b in distinct_permutations(shape))
    return tuple(sorted(out, key=lambda c: (c.a, c.b)))


def enumerate_exceptional(k: int, a_max: int) -> list[LatticeClass]:
    """All classes with 0 <= a <= a_max, square -1 and K_st-degree -1, sorted by (a, b)."""
    if a_max < 0:
        raise DomainError("a_max must be nonnegative")
    return list(_exceptional_catalog(k, a_max))
