"""Exact sparse linear algebra over the rationals."""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import _kernels


class ConsistencyError(RuntimeError):
    """An internal invariant failed (d^2 != 0, rank disagreement, ...)."""


class SparseMatrix:
    """rows x cols matrix stored as {(row, col): Fraction} with no zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), v in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError("entry (%d, %d) outside %dx%d" % (i, j, rows, cols))
                v = Fraction(v)
                if v:
                    if (i, j) in self.entries:
                        raise ValueError("duplicate entry (%d, %d)" % (i, j))
                    self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def shape(self):
        return (self.rows, self.cols)

    def nnz(self):
        return len(self.entries)

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def permuted(self, row_perm, col_perm):
        """Matrix with row i moved to row_perm[i] and column j to col_perm[j]."""
        return SparseMatrix(self.rows, self.cols,
                            {(row_perm[i], col_perm[j]): v for (i, j), v in self.entries.items()})

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        orows = other.row_dicts()
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in orows[k].items():
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return SparseMatrix(self.rows, other.cols, {key: v for key, v in acc.items() if v})

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return "SparseMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, len(self.entries))

    def sorted_entries(self):
        return sorted(self.entries.items())


def _integer_rows(m):
    """Rows scaled to primitive integer vectors (row scaling keeps the rank)."""
    out = []
    for row in m.row_dicts():
        if not row:
            continue
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        irow = {j: int(v * den) for j, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        out.append({j: v // g for j, v in irow.items()})
    return out


def rank_exact(m: SparseMatrix) -> int:
    """Rank over Q by fraction-free elimination with Markowitz pivoting.

    Pivot choice minimises (row count - 1) * (column count - 1); ties go to
    the entry of smallest bit length.  Eliminated rows are divided by their
    content so integers stay small.
    """
    rows = _integer_rows(m)
    if not rows:
        return 0
    active = set(range(len(rows)))
    colrows = {}
    for i, row in enumerate(rows):
        for j in row:
            colrows.setdefault(j, set()).add(i)
    rank = 0
    while active:
        best = None
        minlen = min(len(rows[i]) for i in active)
        if minlen == 0:
            for i in [i for i in active if not rows[i]]:
                active.discard(i)
            continue
        for i in active:
            ri = rows[i]
            if len(ri) > minlen + 1 and best is not None:
                continue
            for j, v in ri.items():
                key = ((len(ri) - 1) * (len(colrows[j]) - 1), abs(v).bit_length(), i, j)
                if best is None or key < best:
                    best = key
        _, _, pi, pj = best
        prow = rows[pi]
        pv = prow[pj]
        active.discard(pi)
        for j in prow:
            colrows[j].discard(pi)
        rank += 1
        for i in list(colrows[pj]):
            row = rows[i]
            f = row[pj]
            new = {}
            for j, v in row.items():
                new[j] = v * pv
            for j, v in prow.items():
                w = new.get(j, 0) - f * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {j: v // g for j, v in new.items()}
            for j in row:
                if j not in new:
                    colrows[j].discard(i)
            for j in new:
                colrows.setdefault(j, set()).add(i)
            rows[i] = new
    return rank


_PRIME_LOW = 2 ** 30
_PRIME_HIGH = 2 ** 31 - 1


def random_primes(count=2, seed=None):
    from sympy import nextprime

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = int(nextprime(rng.randrange(_PRIME_LOW, _PRIME_HIGH - 1000)))
        if p < _PRIME_HIGH and p not in out:
            out.append(p)
    return out


def reduce_mod(m: SparseMatrix, p: int):
    """Dense int64 image of m modulo p, or None if a denominator vanishes mod p."""
    a = np.zeros((m.rows, m.cols), dtype=np.int64)
    for (i, j), v in m.entries.items():
        den = v.denominator % p
        if den == 0:
            return None
        a[i, j] = (v.numerator % p) * pow(den, p - 2, p) % p
    return a


def rank_mod(m: SparseMatrix, p: int, backend=None) -> int:
    a = reduce_mod(m, p)
    if a is None:
        raise ValueError("prime %d divides a denominator" % p)
    return _kernels.rank_mod(a, p, backend)


def rank(m: SparseMatrix, verify_modular=False, seed=None, backend=None) -> int:
    """Exact rank over Q; with ``verify_modular`` also checks two random primes."""
    r = rank_exact(m)
    if verify_modular and m.entries:
        rng = random.Random(seed)
        checked = 0
        while checked < 2:
            p = random_primes(1, rng.random())[0]
            a = reduce_mod(m, p)
            if a is None:
                continue
            rp = _kernels.rank_mod(a, p, backend)
            if rp != r:
                raise ConsistencyError("rank over Q is %d but rank mod %d is %d" % (r, p, rp))
            checked += 1
    return r


@dataclass(frozen=True)
class HomologySlice:
    degree: int
    chain_dim: int
    rank_out: int
    rank_in: int
    homology_dim: int


def homology_dims(dims, maps, step=-1, verify_modular=False):
    """Homology of a complex given per-degree dims and differentials.

    ``dims`` maps degree -> chain dimension.  ``maps[n]`` is the matrix of
    the differential from degree n to degree n + step (shape dims[n+step] x
    dims[n]); missing maps are zero.  step is -1 for chain complexes, +1 for
    cochain complexes.  Consecutive composites must vanish.
    """
    for n, a in maps.items():
        nxt = maps.get(n + step)
        if nxt is not None and a.entries and nxt.entries:
            if not (nxt @ a).is_zero():
                raise ConsistencyError("differential squares to a nonzero map at degree %d" % n)
    ranks = {n: rank(a, verify_modular) for n, a in maps.items()}
    out = []
    for n in sorted(dims):
        c = dims[n]
        r_out = ranks.get(n, 0)
        r_in = ranks.get(n - step, 0)
        h = c - r_out - r_in
        if h < 0:
            raise ConsistencyError("negative homology at degree %d" % n)
        out.append(HomologySlice(n, c, r_out, r_in, h))
    return out


def solve_in_span(basis_cols, targets):
    """Coordinates of target vectors in a full-column-rank basis.

    Vectors are dicts {coordinate: Fraction}.  Returns a list of coordinate
    dicts {basis index: Fraction}; raises ConsistencyError when a target is
    outside the span.
    """
    nb = len(basis_cols)
    keys = sorted({k for v in basis_cols for k in v} | {k for v in targets for k in v})
    kidx = {k: i for i, k in enumerate(keys)}
    # augmented rows: one row per coordinate, columns = basis then targets
    rows = [dict() for _ in keys]
    for j, v in enumerate(basis_cols):
        for k, x in v.items():
            rows[kidx[k]][j] = Fraction(x)
    for t, v in enumerate(targets):
        for k, x in v.items():
            rows[kidx[k]][nb + t] = Fraction(x)
    pivot_row_of = {}
    used = set()
    for col in range(nb):
        piv = None
        for i, row in enumerate(rows):
            if i not in used and row.get(col):
                piv = i
                break
        if piv is None:
            raise ConsistencyError("basis is not linearly independent")
        used.add(piv)
        prow = rows[piv]
        inv = 1 / prow[col]
        prow = {j: x * inv for j, x in prow.items()}
        rows[piv] = prow
        for i, row in enumerate(rows):
            if i != piv and row.get(col):
                f = row[col]
                for j, x in prow.items():
                    w = row.get(j, 0) - f * x
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
        pivot_row_of[col] = piv
    for i, row in enumerate(rows):
        if i not in used and any(j >= nb for j in row):
            raise ConsistencyError("target vector outside the span of the basis")
    out = []
    for t in range(len(targets)):
        coords = {}
        for col in range(nb):
            x = rows[pivot_row_of[col]].get(nb + t)
            if x:
                coords[col] = x
        out.append(coords)
    return out


def independent_subset(vectors):
    """Indices of a greedy maximal linearly independent subset (in order)."""
    chosen = []
    echelon = []  # list of (pivot key, row dict normalised so pivot = 1)
    for idx, v in enumerate(vectors):
        w = {k: Fraction(x) for k, x in v.items() if x}
        for pk, prow in echelon:
            f = w.get(pk)
            if f:
                for k, x in prow.items():
                    y = w.get(k, 0) - f * x
                    if y:
                        w[k] = y
                    else:
                        w.pop(k, None)
        if w:
            pk = min(w)
            inv = 1 / w[pk]
            w = {k: x * inv for k, x in w.items()}
            for j, (qk, qrow) in enumerate(echelon):
                f = qrow.get(pk)
                if f:
                    for k, x in w.items():
                        y = qrow.get(k, 0) - f * x
                        if y:
                            qrow[k] = y
                        else:
                            qrow.pop(k, None)
            echelon.append((pk, w))
            chosen.append(idx)
    return chosen
