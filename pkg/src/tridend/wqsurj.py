"""Surjections (packed words), the WQSym products, and leveled trees.

A surjection ``f: {1..n} -> {1..r}`` is stored as the tuple of its values.
Formal sums of surjections are plain ``dict`` objects mapping a
:class:`Surjection` to an integer multiplicity.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import DomainError
from .treekit import LEAF, Tree, _node, degree

ROOT_DEEPEST = "root-deepest"
ROOT_TOP = "root-top"
LEVEL_ORIENTATIONS = (ROOT_DEEPEST, ROOT_TOP)

PREC, SUCC, DOT = "prec", "succ", "dot"
_OP_ALIASES = {"<": PREC, "prec": PREC, ">": SUCC, "succ": SUCC, ".": DOT, "dot": DOT}


class Surjection(tuple):
    __slots__ = ()

    def __new__(cls, word):
        word = tuple(int(x) for x in word)
        if not word:
            raise DomainError("a surjection needs at least one letter")
        if set(word) != set(range(1, max(word) + 1)):
            raise DomainError(f"{word} is not standard: its image is not an initial interval")
        return tuple.__new__(cls, word)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def r(self) -> int:
        return max(self)

    @property
    def degree(self) -> int:
        return len(self)

    def __repr__(self):
        return f"Surjection({encode(self)!r})"

    def __str__(self):
        return encode(self)


def _surj(word) -> Surjection:
    return tuple.__new__(Surjection, word)


def encode(f) -> str:
    return ",".join(str(x) for x in f)


def parse(text: str) -> Surjection:
    text = text.strip()
    if not text:
        raise DomainError("empty surjection text")
    try:
        return Surjection(int(x) for x in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse surjection {text!r}: {exc}") from None


def standardize(word) -> Surjection:
    """Rank-compress a word of positive integers, keeping the strict value order."""
    word = tuple(word)
    if not word:
        raise DomainError("cannot standardize the empty word")
    rank = {v: i + 1 for i, v in enumerate(sorted(set(word)))}
    return _surj(tuple(rank[v] for v in word))


def is_standard(word) -> bool:
    return bool(word) and set(word) == set(range(1, max(word) + 1))


@lru_cache(maxsize=None)
def _surjections(n: int) -> tuple:
    out = []
    for r in range(1, n + 1):
        for w in itertools.product(range(1, r + 1), repeat=n):
            if len(set(w)) == r:
                out.append(_surj(w))
    out.sort()
    return tuple(out)


def enumerate_surjections(n: int) -> list:
    """All of ST_n in lexicographic order."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return list(_surjections(n))


class Descents(NamedTuple):
    strict: int
    weak: int


def descents(f) -> Descents:
    strict = sum(1 for x, y in zip(f, f[1:]) if x > y)
    weak = sum(1 for x, y in zip(f, f[1:]) if x >= y)
    return Descents(strict, weak)


# -- WQSym products ----------------------------------------------------------

def _canon_op(which):
    try:
        return _OP_ALIASES[which]
    except KeyError:
        raise DomainError(f"unknown product {which!r}") from None


@lru_cache(maxsize=None)
def _wq_product(f, g, op) -> tuple:
    rf, rg = max(f), max(g)
    out = []
    # F and G take value sets A, B with A | B = {1..R}; std(F)=f forces F to be
    # f with its values relabelled increasingly into A.
    for big_r in range(max(rf, rg), rf + rg + 1):
        universe = range(1, big_r + 1)
        for a in itertools.combinations(universe, rf):
            missing = set(universe).difference(a)
            if len(missing) > rg:
                continue
            maxa = a[-1]
            for b in itertools.combinations(universe, rg):
                if not missing.issubset(b):
                    continue
                maxb = b[-1]
                if op == PREC and not maxa > maxb:
                    continue
                if op == SUCC and not maxa < maxb:
                    continue
                if op == DOT and maxa != maxb:
                    continue
                out.append(_surj(tuple(a[v - 1] for v in f) + tuple(b[v - 1] for v in g)))
    out.sort()
    return tuple(out)


def wq_product(f, g, which) -> dict:
    """Basis product ``f < g``, ``f > g`` or ``f . g`` in WQSym as {surjection: 1}."""
    op = _canon_op(which)
    return {w: 1 for w in _wq_product(_surj(tuple(f)), _surj(tuple(g)), op)}


def wq_star(f, g) -> dict:
    out = {}
    for op in (PREC, SUCC, DOT):
        for w in _wq_product(_surj(tuple(f)), _surj(tuple(g)), op):
            out[w] = out.get(w, 0) + 1
    return out


# -- leveled trees -----------------------------------------------------------

@dataclass(frozen=True)
class LeveledTree:
    """Planar reduced tree with a level on each internal vertex.

    ``vertex_levels`` pairs each vertex path (child indices from the root)
    with its level, sorted by path so the record stays hashable.
    """

    shape: Tree
    vertex_levels: tuple  # ((path, level), ...) sorted by path
    orientation: str = ROOT_DEEPEST

    @property
    def r(self) -> int:
        return max((lv for _, lv in self.vertex_levels), default=0)

    def level_map(self) -> dict:
        return dict(self.vertex_levels)

    def validate(self):
        lv = self.level_map()
        paths = set(_vertex_paths(self.shape))
        if set(lv) != paths:
            raise DomainError("levels must be given for exactly the internal vertices")
        r = self.r
        if set(lv.values()) != set(range(1, r + 1)):
            raise DomainError("levels are not surjective onto {1..r}")
        for p in paths:
            if p:
                parent = p[:-1]
                if self.orientation == ROOT_DEEPEST and not lv[parent] > lv[p]:
                    raise DomainError(f"vertex {p} is not above its parent in level order")
                if self.orientation == ROOT_TOP and not lv[parent] < lv[p]:
                    raise DomainError(f"vertex {p} is not below its parent in level order")


def _vertex_paths(t, path=()):
    if t:
        yield path
        for i, c in enumerate(t):
            yield from _vertex_paths(c, path + (i,))


def _check_orientation(orientation):
    if orientation not in LEVEL_ORIENTATIONS:
        raise DomainError(f"unknown level orientation {orientation!r}")


def split_blocks(f, orientation: str = ROOT_DEEPEST) -> list:
    """Cut the word at the occurrences of its root value (max, or min for root-top)."""
    _check_orientation(orientation)
    pivot = max(f) if orientation == ROOT_DEEPEST else min(f)
    blocks, cur = [], []
    for x in f:
        if x == pivot:
            blocks.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    blocks.append(tuple(cur))
    return blocks


def to_leveled_tree(f, orientation: str = ROOT_DEEPEST) -> LeveledTree:
    """Inverse bijection: surjection -> planar reduced tree with levels."""
    f = tuple(f)
    if not is_standard(f):
        raise DomainError(f"{f} is not a standard word")
    _check_orientation(orientation)
    levels = []

    def build(word, path, value_of):
        # value_of maps the standardized block values back to the original levels
        if not word:
            return LEAF
        blocks = split_blocks(word, orientation)
        pivot = max(word) if orientation == ROOT_DEEPEST else min(word)
        levels.append((path, value_of[pivot]))
        kids = []
        for i, b in enumerate(blocks):
            if b:
                std = standardize(b)
                back = {s: value_of[o] for s, o in zip(std, b)}
                kids.append(build(tuple(std), path + (i,), back))
            else:
                kids.append(LEAF)
        return _node(tuple(kids))

    shape = build(f, (), {v: v for v in f})
    return LeveledTree(shape, tuple(sorted(levels)), orientation)


def from_leveled_tree(lt: LeveledTree) -> Surjection:
    """Read the level of the vertex sitting between consecutive leaves."""
    lt.validate()
    lv = lt.level_map()
    word = []

    def walk(t, path):
        for i, c in enumerate(t):
            if c:
                walk(c, path + (i,))
            if i < len(t) - 1:
                word.append(lv[path])

    walk(lt.shape, ())
    return Surjection(word)


@lru_cache(maxsize=None)
def _shape(f, orientation) -> Tree:
    if not f:
        return LEAF
    kids = []
    for b in split_blocks(f, orientation):
        kids.append(_shape(tuple(standardize(b)), orientation) if b else LEAF)
    return _node(tuple(kids))


def forget_levels(f, orientation: str = ROOT_DEEPEST) -> Tree:
    """The surjection ST_n -> trees of degree n obtained by dropping the levels."""
    _check_orientation(orientation)
    return _shape(tuple(f), orientation)


@lru_cache(maxsize=None)
def _fibers(n: int, orientation: str) -> dict:
    out = {}
    for f in _surjections(n):
        out.setdefault(_shape(tuple(f), orientation), []).append(f)
    return {t: tuple(fs) for t, fs in out.items()}


def fiber(t: Tree, orientation: str = ROOT_DEEPEST) -> tuple:
    """All surjections f with forget_levels(f) == t, sorted."""
    _check_orientation(orientation)
    if not t:
        raise DomainError("the leaf has no fiber")
    return _fibers(degree(t), orientation).get(t, ())


def psi_star(t: Tree, orientation: str = ROOT_DEEPEST) -> dict:
    """Dual map: a tree goes to the sum of its fiber."""
    return {f: 1 for f in fiber(t, orientation)}


def count_levelings(t: Tree) -> int:
    """Number of level maps on the vertices of t, by brute force.

    Cross-check for the fiber sizes: each leveling of t is one surjection.
    """
    paths = list(_vertex_paths(t))
    parent = {p: p[:-1] for p in paths if p}
    m = len(paths)
    total = 0
    for r in range(1, m + 1):
        for assign in itertools.product(range(1, r + 1), repeat=m):
            if len(set(assign)) != r:
                continue
            lv = dict(zip(paths, assign))
            if all(lv[parent[p]] > lv[p] for p in parent):
                total += 1
    return total


def fiber_sizes(n: int, orientation: str = ROOT_DEEPEST) -> Counter:
    return Counter({t: len(fs) for t, fs in _fibers(n, orientation).items()})
