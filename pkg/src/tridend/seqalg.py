"""The tridendriform algebra of matrix-valued sequences.

A sequence is stored as its finite prefix f(0..H-1), an object ndarray of
shape (H, d, d) holding ``gmpy2.mpq`` rationals. With the summation operator
S f(N) = sum_{r<N} f(r) (Rota-Baxter of weight 1) the products are

    f < g = f S(g),    f > g = S(f) g,    f . g = f g

all taken pointwise in N.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb as binomial

import gmpy2
import numpy as np

from . import treekit, wqsurj
from .errors import DimensionError, DomainError, HorizonError
from .rng import SplitMix64
from .treekit import Tree
from .trialg import TriTarget

DIRECT = "direct"
INVERTED = "inverted"
T_ORDERS = (DIRECT, INVERTED)

_mpq = gmpy2.mpq
ZERO = _mpq(0)
ONE = _mpq(1)


def to_mpq(x):
    if isinstance(x, str):
        return _mpq(Fraction(x))
    if isinstance(x, Fraction):
        return _mpq(x.numerator, x.denominator)
    return _mpq(x)


def rational_text(x) -> str:
    x = _mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _matrix(rows) -> np.ndarray:
    m = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != len(rows):
            raise DimensionError("matrices must be square")
        for j, v in enumerate(row):
            m[i, j] = to_mpq(v)
    return m


def identity(d: int) -> np.ndarray:
    m = np.full((d, d), ZERO, dtype=object)
    for i in range(d):
        m[i, i] = ONE
    return m


def zeros(horizon: int, d: int) -> np.ndarray:
    return np.full((horizon, d, d), ZERO, dtype=object)


class MatSeq:
    """Finite prefix a(0..H-1) of a sequence of d x d rational matrices."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.asarray(data, dtype=object)
        if data.ndim != 3 or data.shape[1] != data.shape[2]:
            raise DimensionError(f"expected shape (H, d, d), got {data.shape}")
        self.data = data

    @classmethod
    def from_matrices(cls, mats, dim=None):
        mats = list(mats)
        if not mats:
            if dim is None:
                raise DimensionError("empty sequence needs an explicit dim")
            return cls(np.empty((0, dim, dim), dtype=object))
        arr = np.stack([_matrix(m) for m in mats])
        if dim is not None and arr.shape[1] != dim:
            raise DimensionError(f"matrices are {arr.shape[1]}x{arr.shape[1]}, dim says {dim}")
        return cls(arr)

    @classmethod
    def constant(cls, value, horizon: int, dim: int = 1):
        v = to_mpq(value)
        arr = zeros(horizon, dim)
        for i in range(dim):
            arr[:, i, i] = v
        return cls(arr)

    @classmethod
    def random(cls, rng: SplitMix64, horizon: int, dim: int, num_range=5, max_den=4):
        arr = np.empty((horizon, dim, dim), dtype=object)
        for idx in np.ndindex(arr.shape):
            arr[idx] = to_mpq(rng.fraction(num_range, max_den))
        return cls(arr)

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def horizon(self) -> int:
        return self.data.shape[0]

    def __len__(self):
        return self.horizon

    def __getitem__(self, n):
        if isinstance(n, slice):
            return MatSeq(self.data[n])
        if not 0 <= n < self.horizon:
            raise HorizonError(f"index {n} outside the stored horizon 0..{self.horizon - 1}")
        return self.data[n]

    def prefix(self, horizon: int) -> "MatSeq":
        if horizon > self.horizon:
            raise HorizonError(f"requested horizon {horizon} exceeds {self.horizon}")
        return MatSeq(self.data[:horizon])

    def _pair(self, other):
        if not isinstance(other, MatSeq):
            return None
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        h = min(self.horizon, other.horizon)
        return self.data[:h], other.data[:h]

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return MatSeq(pair[0] + pair[1])

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return MatSeq(pair[0] - pair[1])

    def __neg__(self):
        return MatSeq(-self.data)

    def __mul__(self, k):
        if isinstance(k, MatSeq):
            return NotImplemented
        return MatSeq(self.data * to_mpq(k))

    __rmul__ = __mul__

    def __matmul__(self, other):
        """Pointwise matrix product f(N) g(N)."""
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return MatSeq(np.matmul(pair[0], pair[1]))

    def __eq__(self, other):
        if not isinstance(other, MatSeq):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def __repr__(self):
        return f"MatSeq(dim={self.dim}, horizon={self.horizon})"

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[[rational_text(v) for v in row] for row in m] for m in self.data],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "MatSeq":
        try:
            dim = int(data["dim"])
            entries = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError("MatSeq JSON needs 'dim' and 'entries'") from exc
        return cls.from_matrices([[[str(v) for v in row] for row in m] for m in entries], dim)

    @classmethod
    def from_json(cls, text: str) -> "MatSeq":
        return cls.from_dict(json.loads(text))


def matrices_json(seq: MatSeq) -> list:
    return seq.to_dict()["entries"]


# -- D, S and the three products ----------------------------------------------

def summ(f: MatSeq) -> MatSeq:
    """S f(N) = sum_{r<N} f(r), for N = 0..H (one step past f's horizon)."""
    out = zeros(f.horizon + 1, f.dim)
    if f.horizon:
        out[1:] = np.cumsum(f.data, axis=0)
    return MatSeq(out)


def diff(f: MatSeq) -> MatSeq:
    """D f(N) = f(N+1) - f(N), for N = 0..H-2."""
    return MatSeq(f.data[1:] - f.data[:-1])


def _s(f: MatSeq) -> MatSeq:
    # S(f) on the same horizon as f
    return summ(f).prefix(f.horizon)


def seq_prec(f, g):
    return f @ _s(g)


def seq_succ(f, g):
    return _s(f) @ g


def seq_dot(f, g):
    return f @ g


def seq_star(f, g):
    return seq_prec(f, g) + seq_succ(f, g) + seq_dot(f, g)


def tri_products(f: MatSeq, g: MatSeq, which: str) -> MatSeq:
    ops = {"<": seq_prec, "prec": seq_prec, ">": seq_succ, "succ": seq_succ,
           ".": seq_dot, "dot": seq_dot, "*": seq_star, "star": seq_star}
    try:
        return ops[which](f, g)
    except KeyError:
        raise DomainError(f"unknown product {which!r}") from None


def sequence_target(dim: int, horizon: int) -> TriTarget:
    return TriTarget(
        name="sequences",
        prec=seq_prec, succ=seq_succ, dot=seq_dot,
        add=lambda u, v: u + v,
        scale=lambda c, u: u * c,
        zero=lambda: MatSeq(zeros(horizon, dim)),
    )


# -- partial diagonals ----------------------------------------------------------

def _check_order(order):
    if order not in T_ORDERS:
        raise DomainError(f"unknown partial-diagonal order {order!r}")


def enumerate_T(sigma, N: int, order: str = DIRECT) -> list:
    """Tuples (s_1..s_n) in {0..N-1}^n whose order pattern is sigma.

    ``direct``: s_i < s_j exactly when sigma(i) < sigma(j).
    ``inverted``: s_i > s_j exactly when sigma(i) < sigma(j).
    Equal values of sigma always give equal coordinates.
    """
    _check_order(order)
    sigma = tuple(sigma)
    r = max(sigma)
    out = []
    for values in itertools.combinations(range(N), r):
        if order == DIRECT:
            out.append(tuple(values[v - 1] for v in sigma))
        else:
            out.append(tuple(values[r - v] for v in sigma))
    out.sort()
    return out


def pattern_of(s, order: str = DIRECT):
    """The surjection sigma with s in T_sigma."""
    std = wqsurj.standardize(tuple(x + 1 for x in s))
    if order == DIRECT:
        return std
    r = max(std)
    return wqsurj._surj(tuple(r + 1 - v for v in std))


def t_size(sigma, N: int) -> int:
    return binomial(N, max(sigma)) if N >= 0 else 0


@dataclass
class SplitReport:
    sigma: tuple
    tau: tuple
    N: int
    ok: bool = True
    counts: dict = field(default_factory=dict)
    counterexample: object = None

    def __bool__(self):
        return self.ok


def split_check(sigma, tau, N: int, order: str = DIRECT, extreme: str | None = None) -> SplitReport:
    """Verify the product of two partial diagonals splits into three parts.

    Pairs (s, t) are classed by comparing an extreme coordinate of each half
    (max for the direct order, min for the inverted one). The class where
    s wins must equal the union of T_FG over juxtapositions with
    max F > max G, and likewise for the other two classes.
    """
    _check_order(order)
    if extreme is None:
        extreme = "max" if order == DIRECT else "min"
    pick = max if extreme == "max" else min
    sigma, tau = tuple(sigma), tuple(tau)
    n = len(sigma)
    report = SplitReport(sigma, tau, N)

    expected = {"prec": set(), "succ": set(), "dot": set()}
    for op in expected:
        for w in wqsurj.wq_product(sigma, tau, op):
            expected[op].update(enumerate_T(w, N, order))

    actual = {"prec": set(), "succ": set(), "dot": set()}
    left, right = enumerate_T(sigma, N, order), enumerate_T(tau, N, order)
    for s in left:
        ps = pick(s)
        for t in right:
            pt = pick(t)
            wins = ps > pt if extreme == "max" else ps < pt
            loses = ps < pt if extreme == "max" else ps > pt
            key = "prec" if wins else "succ" if loses else "dot"
            actual[key].add(s + t)

    union = set()
    for op in ("prec", "succ", "dot"):
        if union & expected[op]:
            report.ok = False
            report.counterexample = ("overlap", op, sorted(union & expected[op])[0])
            return report
        union |= expected[op]
        report.counts[op] = len(actual[op])
        if actual[op] != expected[op]:
            diff_ = sorted(actual[op] ^ expected[op])
            report.ok = False
            report.counterexample = (op, diff_[0], diff_[0][:n], diff_[0][n:])
            return report
    if len(union) != len(left) * len(right):
        report.ok = False
        report.counterexample = ("cardinality", len(union), len(left) * len(right))
    return report


# -- evaluation maps -----------------------------------------------------------

def _word_product(a: MatSeq, s) -> np.ndarray:
    m = a.data[s[0]]
    for i in s[1:]:
        m = m.dot(a.data[i])
    return m


def diagonal_sum(sigma, a: MatSeq, N: int, order: str = DIRECT) -> np.ndarray:
    """sum over T_sigma(N) of a(s_1) ... a(s_n); needs a(0..N-1)."""
    if N > a.horizon:
        raise HorizonError(f"N={N} exceeds the horizon {a.horizon}")
    total = np.full((a.dim, a.dim), ZERO, dtype=object)
    for s in enumerate_T(sigma, N, order):
        total = total + _word_product(a, s)
    return total


def f_tilde(x, a: MatSeq, order: str = DIRECT) -> MatSeq:
    """F~_a(sigma)(N) = D(N -> sum_{T_sigma(N)} a(s_1)...a(s_n)) for N < H.

    ``x`` is a surjection or a dict {surjection: coefficient}.
    """
    terms = {tuple(x): 1} if not isinstance(x, dict) else x
    H = a.horizon
    out = zeros(H, a.dim)
    for sigma, c in terms.items():
        c = to_mpq(c)
        partial = [diagonal_sum(sigma, a, M, order) for M in range(H + 1)]
        for N in range(H):
            out[N] = out[N] + c * (partial[N + 1] - partial[N])
    return MatSeq(out)


class SequenceEvaluator:
    """F_a on trees for a fixed sequence a, by the recursive S-insertion formula.

    With SF(t) = S(F_a(t)) and SF(leaf) = identity:

        F_a(V(t_1, t_2))      = SF(t_1) a SF(t_2)
        F_a(V(t_1, ..., t_n)) = SF(t_1) a F_a(V(t_2, ..., t_n))     (n >= 3)

    Values are cached per tree, so evaluating all trees of degree <= n costs
    O(H) matrix products per tree.

    Internally a is scaled by the lcm L of its denominators and the work is
    done on integer numerators: F_a(t) of degree n is (integer array) / L^n.
    Python ints multiply several times faster than mpq and the result is the
    same exact rational.
    """

    def __init__(self, a: MatSeq):
        self.a = a
        dens = [int(_mpq(x).denominator) for x in a.data.flat]
        self.scale = math.lcm(1, *dens)
        self._a = np.vectorize(lambda x: int(x * self.scale), otypes=[object])(a.data) \
            if a.data.size else np.empty(a.data.shape, dtype=object)
        self._f = {}
        self._sf = {}

    def _left(self, t):
        if not t:
            return self._a
        return np.matmul(self.sf_int(t), self._a)

    def sf_int(self, t: Tree) -> np.ndarray:
        got = self._sf.get(t)
        if got is None:
            f = self.f_int(t)
            got = np.empty_like(f)
            if len(f):
                got[0] = 0
                got[1:] = np.cumsum(f[:-1], axis=0)
            self._sf[t] = got
        return got

    def f_int(self, t: Tree) -> np.ndarray:
        """Numerator of F_a(t); the denominator is scale ** degree(t)."""
        if not t:
            raise DomainError("F_a(leaf) is the unit, not a sequence")
        got = self._f.get(t)
        if got is not None:
            return got
        if len(t) == 2:
            out = self._left(t[0])
            if t[1]:
                out = np.matmul(out, self.sf_int(t[1]))
        else:
            out = np.matmul(self._left(t[0]), self.f_int(treekit._node(tuple(t[1:]))))
        self._f[t] = out
        return out

    def _to_seq(self, num, den) -> MatSeq:
        den = _mpq(den)
        return MatSeq(np.vectorize(lambda x: _mpq(x) / den, otypes=[object])(num)
                      if num.size else np.empty(num.shape, dtype=object))

    def sf(self, t: Tree) -> MatSeq:
        if not t:
            raise DomainError("S(F(leaf)) is the unit; callers skip it")
        return self._to_seq(self.sf_int(t), self.scale ** treekit.degree(t))

    def __call__(self, t: Tree) -> MatSeq:
        return self._to_seq(self.f_int(t), self.scale ** treekit.degree(t))

    def series(self, terms) -> MatSeq:
        """Linear combination sum_t c_t F_a(t), exact, summed in sorted order."""
        h, d = self.a.horizon, self.a.dim
        by_degree = {}
        for t in sorted(terms, key=lambda t: (treekit.degree(t), treekit.encode(t))):
            by_degree.setdefault(treekit.degree(t), []).append(t)
        total = MatSeq(zeros(h, d))
        for n, trees in by_degree.items():
            coeffs = [Fraction(terms[t]) for t in trees]
            den = math.lcm(1, *(c.denominator for c in coeffs))
            acc = np.zeros((h, d, d), dtype=object)
            for t, c in zip(trees, coeffs):
                k = c.numerator * (den // c.denominator)
                if k:
                    acc += self.f_int(t) * k
            total = total + self._to_seq(acc, den * self.scale ** n)
        return total


def fast_eval(t: Tree, a: MatSeq) -> MatSeq:
    return SequenceEvaluator(a)(t)


# -- graded sequences ---------------------------------------------------------

class GradedSeq:
    """Series sum_n h^n x_n whose coefficients x_n are matrix sequences.

    The degree-0 part is a scalar multiple of the unit.
    """

    def __init__(self, dim, horizon, truncation, parts=None, scalar=0):
        self.dim = dim
        self.horizon = horizon
        self.truncation = truncation
        self.scalar = Fraction(scalar)
        self.parts = {}
        for n, v in (parts or {}).items():
            if 1 <= n <= truncation:
                self.parts[n] = v.prefix(horizon) if v.horizon > horizon else v

    def __getitem__(self, n) -> MatSeq:
        got = self.parts.get(n)
        if got is None:
            return MatSeq(zeros(self.horizon, self.dim))
        return got

    def _like(self, parts, scalar=0):
        return GradedSeq(self.dim, self.horizon, self.truncation, parts, scalar)

    def __add__(self, other):
        parts = dict(self.parts)
        for n, v in other.parts.items():
            parts[n] = parts[n] + v if n in parts else v
        return self._like(parts, self.scalar + other.scalar)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, k):
        return self._like({n: v * k for n, v in self.parts.items()}, self.scalar * Fraction(k))

    def __eq__(self, other):
        if not isinstance(other, GradedSeq) or self.scalar != other.scalar:
            return False
        for n in range(1, min(self.truncation, other.truncation) + 1):
            if self[n] != other[n]:
                return False
        return True

    __hash__ = None

    def star(self, other) -> "GradedSeq":
        parts = {}
        for i, x in self.parts.items():
            for j, y in other.parts.items():
                if i + j <= self.truncation:
                    v = seq_star(x, y)
                    parts[i + j] = parts[i + j] + v if i + j in parts else v
        for i, x in self.parts.items():
            if other.scalar:
                parts[i] = parts[i] + x * other.scalar if i in parts else x * other.scalar
        for j, y in other.parts.items():
            if self.scalar:
                parts[j] = parts[j] + y * self.scalar if j in parts else y * self.scalar
        return self._like(parts, self.scalar * other.scalar)

    def summed(self) -> "GradedSeq":
        """Apply S to every positive-degree coefficient (horizon grows by one)."""
        return GradedSeq(self.dim, self.horizon + 1, self.truncation,
                         {n: summ(v) for n, v in self.parts.items()}, self.scalar)

    def at(self, N: int) -> dict:
        """Degree -> matrix at index N."""
        return {n: self[n][N] for n in range(1, self.truncation + 1)}


def graded_log(x: GradedSeq) -> GradedSeq:
    if x.scalar != 1:
        raise DomainError("log needs scalar part 1")
    y = x._like(x.parts, 0)
    total = x._like({}, 0)
    power = x._like({}, 1)
    for k in range(1, x.truncation + 1):
        power = power.star(y)
        total = total + power * Fraction((-1) ** (k + 1), k)
    return total


def graded_exp(x: GradedSeq) -> GradedSeq:
    if x.scalar:
        raise DomainError("exp needs scalar part 0")
    total = x._like({}, 1)
    power = x._like({}, 1)
    fact = 1
    for k in range(1, x.truncation + 1):
        fact *= k
        power = power.star(x)
        total = total + power * Fraction(1, fact)
    return total


def fixed_point_sequences(a: MatSeq, truncation: int, flavor: str = "prec") -> GradedSeq:
    """X = 1 + h a < X (flavor prec) or X = 1 + h a ⪯ X (flavor preceq)."""
    parts = {1: a}
    for n in range(2, truncation + 1):
        prev = parts[n - 1]
        nxt = seq_prec(a, prev)
        if flavor == "preceq":
            nxt = nxt + seq_dot(a, prev)
        elif flavor != "prec":
            raise DomainError(f"unknown flavor {flavor!r}")
        parts[n] = nxt
    return GradedSeq(a.dim, a.horizon, truncation, parts, 1)


def ordered_product_log(a: MatSeq, N: int, truncation: int, flavor: str = "prec") -> dict:
    """Degree-n parts of log((1 + h a(N-1)) ... (1 + h a(0))), n <= truncation.

    For ``flavor="preceq"`` the factors are (1 - h a(k))^{-1} instead. This
    is S applied to the solution of the fixed-point equation, computed with
    plain matrix polynomials and no tree or surjection machinery.
    """
    if flavor not in ("prec", "preceq"):
        raise DomainError(f"unknown flavor {flavor!r}")
    if N > a.horizon:
        raise HorizonError(f"N={N} exceeds the horizon {a.horizon}")
    d = a.dim
    zero = np.full((d, d), ZERO, dtype=object)
    # polynomial in h: list of matrices, index = degree
    prod = [identity(d)] + [zero.copy() for _ in range(truncation)]
    for k in range(N):
        if flavor == "preceq":
            factor = [identity(d)]
            p = identity(d)
            for _ in range(truncation):
                p = p.dot(a.data[k])
                factor.append(p)
        else:
            factor = [identity(d), a.data[k]] + [zero] * (truncation - 1)
        new = [zero.copy() for _ in range(truncation + 1)]
        for i, fi in enumerate(factor):
            if not np.any(fi != ZERO):
                continue
            for j in range(truncation + 1 - i):
                new[i + j] = new[i + j] + fi.dot(prod[j])
        prod = new
    q = [zero] + prod[1:]
    out = [zero.copy() for _ in range(truncation + 1)]
    power = [identity(d)] + [zero] * truncation
    for k in range(1, truncation + 1):
        nxt = [zero.copy() for _ in range(truncation + 1)]
        for i in range(truncation + 1):
            for j in range(1, truncation + 1 - i):
                nxt[i + j] = nxt[i + j] + power[i].dot(q[j])
        power = nxt
        c = _mpq((-1) ** (k + 1), k)
        for n in range(truncation + 1):
            out[n] = out[n] + c * power[n]
    return {n: out[n] for n in range(1, truncation + 1)}
