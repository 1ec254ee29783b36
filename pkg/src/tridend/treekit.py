"""Planar reduced trees: construction, enumeration, descents, contraction order.

A tree is stored as a nested tuple. The leaf ``|`` is the empty tuple and a
vertex is the tuple of its (at least two) children, left to right. Because
:class:`Tree` subclasses ``tuple``, trees hash, compare and sort cheaply and
are immutable.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import ArityError, DomainError, TreeParseError

AS_PRINTED = "as-printed"
MIRRORED = "mirrored"
ORIENTATIONS = (AS_PRINTED, MIRRORED)

DEFAULT_DEGREE_CAP = 10


class Tree(tuple):
    """Planar reduced tree. ``Tree()`` is the leaf, ``Tree(children)`` a vertex."""

    __slots__ = ()

    def __new__(cls, children=()):
        children = tuple(children)
        if len(children) == 1:
            raise ArityError("a vertex needs at least 2 children, got 1")
        for c in children:
            if not isinstance(c, Tree):
                raise TypeError(f"children must be Tree instances, got {type(c).__name__}")
        return tuple.__new__(cls, children)

    @property
    def is_leaf(self) -> bool:
        return len(self) == 0

    @property
    def degree(self) -> int:
        return degree(self)

    def __repr__(self):
        return f"Tree({encode(self)!r})"

    def __str__(self):
        return encode(self)


def _node(children) -> Tree:
    # unchecked constructor for internal hot paths
    return tuple.__new__(Tree, children)


LEAF = _node(())
Y = _node((LEAF, LEAF))


def graft(children) -> Tree:
    """Graft an ordered list of at least two trees onto a new root vertex."""
    children = list(children)
    if len(children) < 2:
        raise ArityError(f"graft needs at least 2 children, got {len(children)}")
    return Tree(children)


@lru_cache(maxsize=None)
def degree(t: Tree) -> int:
    """Number of leaves minus one."""
    if not t:
        return 0
    return len(t) - 1 + sum(degree(c) for c in t)


def n_leaves(t: Tree) -> int:
    return degree(t) + 1


def n_vertices(t: Tree) -> int:
    if not t:
        return 0
    return 1 + sum(n_vertices(c) for c in t)


def is_binary(t: Tree) -> bool:
    if not t:
        return True
    return len(t) == 2 and all(is_binary(c) for c in t)


def mirror(t: Tree) -> Tree:
    if not t:
        return t
    return _node(tuple(mirror(c) for c in reversed(t)))


def comb(n: int, side: str = "right") -> Tree:
    """Right comb ``(|,(|,...))`` or left comb ``((...,|),|)`` of degree n."""
    if n < 0:
        raise DomainError("comb degree must be >= 0")
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    t = LEAF
    for _ in range(n):
        t = _node((LEAF, t)) if side == "right" else _node((t, LEAF))
    return t


def corolla(k: int) -> Tree:
    """The one-vertex tree with k leaves."""
    return graft([LEAF] * k)


# -- text encoding ----------------------------------------------------------

@lru_cache(maxsize=None)
def encode(t: Tree) -> str:
    if not t:
        return "|"
    return "(" + ",".join(encode(c) for c in t) + ")"


def parse(text: str) -> Tree:
    """Inverse of :func:`encode`; whitespace is ignored."""
    s = "".join(text.split())
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(s):
            raise TreeParseError("unexpected end of input", pos)
        ch = s[pos]
        if ch == "|":
            pos += 1
            return LEAF
        if ch != "(":
            raise TreeParseError(f"unexpected character {ch!r}", pos)
        start = pos
        pos += 1
        children = [node()]
        while pos < len(s) and s[pos] == ",":
            pos += 1
            children.append(node())
        if pos >= len(s) or s[pos] != ")":
            raise TreeParseError("expected ')'", pos)
        pos += 1
        if len(children) < 2:
            raise TreeParseError("vertex with a single child", start)
        return _node(tuple(children))

    if not s:
        raise TreeParseError("empty input", 0)
    t = node()
    if pos != len(s):
        raise TreeParseError("trailing characters", pos)
    return t


# -- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def _trees_of_degree(n: int) -> tuple:
    if n == 0:
        return (LEAF,)
    out = []
    # arity k >= 2 consumes k - 1 of the degree; the rest is spread over children
    for k in range(2, n + 2):
        rest = n - (k - 1)
        for degs in _compositions(rest, k):
            pools = [_trees_of_degree(d) for d in degs]
            for kids in itertools.product(*pools):
                out.append(_node(kids))
    return tuple(out)


def _compositions(total, parts):
    """Weak compositions of ``total`` into ``parts`` non-negative integers."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for tail in _compositions(total - first, parts - 1):
            yield (first,) + tail


def enumerate_trees(n: int, *, allow_large: bool = False) -> list:
    """All planar reduced trees of degree n, sorted by encoding."""
    if n < 0:
        raise DomainError("degree must be >= 0")
    if n > DEFAULT_DEGREE_CAP and not allow_large:
        raise DomainError(
            f"degree {n} exceeds the enumeration cap {DEFAULT_DEGREE_CAP}; "
            "pass allow_large=True to override"
        )
    return sorted(_trees_of_degree(n), key=encode)


def binary_trees(n: int) -> list:
    return [t for t in enumerate_trees(n) if is_binary(t)]


# -- descents ----------------------------------------------------------------

class DescentStats(NamedTuple):
    weak: int
    strict: int


def _leaf_flags(t: Tree) -> Iterator[tuple]:
    """Yield (leftmost_of_tree, rightmost_above_vertex, leftmost_above_vertex) per leaf."""
    first = True

    def walk(v):
        nonlocal first
        last = len(v) - 1
        for i, c in enumerate(v):
            if c:
                yield from walk(c)
            else:
                yield (first, i == last, i == 0)
                first = False

    if t:
        yield from walk(t)


@lru_cache(maxsize=None)
def _stats_as_printed(t: Tree) -> DescentStats:
    weak = strict = 0
    for leftmost, rightmost_edge, leftmost_edge in _leaf_flags(t):
        if leftmost or rightmost_edge:
            continue
        weak += 1
        if leftmost_edge:
            strict += 1
    return DescentStats(weak, strict)


def descent_stats(t: Tree, orientation: str = AS_PRINTED) -> DescentStats:
    """Count descents (weak) and strict descents among the leaves of t.

    A leaf is a descent when it is not the leftmost leaf of the tree and not
    the rightmost edge above its vertex; a strict descent is moreover the
    leftmost edge above its vertex. ``orientation="mirrored"`` reads the
    tree right to left instead.
    """
    if orientation == AS_PRINTED:
        return _stats_as_printed(t)
    if orientation == MIRRORED:
        return _stats_as_printed(mirror(t))
    raise DomainError(f"unknown descent orientation {orientation!r}")


# -- contraction order -------------------------------------------------------

class InnerEdge(NamedTuple):
    """Edge from a vertex to its child vertex.

    ``path`` addresses the parent vertex (child indices from the root),
    ``index`` is the child's position, ``arity`` the parent's arity.
    """

    path: tuple
    index: int
    arity: int

    @property
    def kind(self) -> str:
        if self.index == self.arity - 1:
            return "right"
        if self.index == 0:
            return "left"
        return "middle"


def inner_edges(t: Tree) -> list:
    out = []

    def walk(v, path):
        for i, c in enumerate(v):
            if c:
                out.append(InnerEdge(path, i, len(v)))
                walk(c, path + (i,))

    walk(t, ())
    return out


def contract_edge(t: Tree, edge: InnerEdge) -> Tree:
    """Shrink one inner edge, merging the child vertex into its parent."""
    if not edge.path:
        kids = list(t)
        child = kids[edge.index]
        if not child:
            raise DomainError("edge does not end in a vertex")
        return _node(tuple(kids[: edge.index]) + tuple(child) + tuple(kids[edge.index + 1:]))
    head, rest = edge.path[0], edge.path[1:]
    kids = list(t)
    kids[head] = contract_edge(kids[head], InnerEdge(rest, edge.index, edge.arity))
    return _node(tuple(kids))


@lru_cache(maxsize=None)
def _closure(t: Tree) -> frozenset:
    if not t:
        return frozenset((t,))
    options = []
    for c in t:
        opts = []
        for c2 in _closure(c):
            opts.append((c2,))
            if c2:
                opts.append(tuple(c2))  # edge to this child shrunk
        options.append(opts)
    out = set()
    for pick in itertools.product(*options):
        out.add(_node(tuple(itertools.chain.from_iterable(pick))))
    return frozenset(out)


def contraction_closure(t: Tree) -> frozenset:
    """All trees t' <= t, i.e. obtained from t by shrinking inner edges."""
    return _closure(t)


def contract_by_kind(t: Tree, kinds) -> frozenset:
    """Trees reachable from t by repeatedly shrinking edges of the given kinds."""
    kinds = set(kinds)
    seen = {t}
    frontier = [t]
    while frontier:
        nxt = []
        for s in frontier:
            for e in inner_edges(s):
                if e.kind in kinds:
                    s2 = contract_edge(s, e)
                    if s2 not in seen:
                        seen.add(s2)
                        nxt.append(s2)
        frontier = nxt
    return frozenset(seen)


def subtree(t: Tree, path) -> Tree:
    for i in path:
        t = t[i]
    return t


def contraction_descent_rule(t: Tree, edge: InnerEdge) -> dict:
    """What shrinking ``edge`` does to the as-printed descent counts.

    Returns the statistics that are determined: a right-pointing edge keeps
    ``weak``, a left-pointing edge keeps ``strict``. For a middle edge weak
    grows by one iff the upper vertex ends in a leaf, and strict drops by
    one iff the upper vertex starts with a leaf.
    """
    before = descent_stats(t)
    if edge.kind == "right":
        return {"weak": before.weak}
    if edge.kind == "left":
        return {"strict": before.strict}
    child = subtree(t, edge.path + (edge.index,))
    return {"weak": before.weak + (not child[-1]), "strict": before.strict - (not child[0])}
