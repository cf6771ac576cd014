"""Independent combinatorial oracles.

* Poincare polynomials of ordered configuration spaces in R^n.
* Free graded Lie algebras: dimensions by inverting the PBW identity, and an
  explicit bracket basis realised inside the tensor algebra.
* The tree-part homology model ker(V (x) L(V) -> L(V)) and the Whitehead
  kernel computing rational pi_0.
"""

import itertools
from fractions import Fraction
from math import factorial

from .graded_core import InvalidInput
from .linalg import SparseMatrix, independent_subset, rank


def config_poincare(k: int, n: int):
    """Coefficients of prod_{j=1}^{k-1} (1 + j q^{n-1}) as {degree: coeff}."""
    if k < 0 or n < 2:
        raise InvalidInput("need k >= 0 and n >= 2")
    poly = {0: 1}
    for j in range(1, k):
        new = {}
        for deg, c in poly.items():
            new[deg] = new.get(deg, 0) + c
            new[deg + n - 1] = new.get(deg + n - 1, 0) + j * c
        poly = new
    return dict(sorted(poly.items()))


def lie_operad_dim(n: int) -> int:
    if n <= 0:
        raise InvalidInput("Lie(n) is defined for n >= 1")
    return factorial(n - 1)


def _multiweights(r, max_weight):
    """All nonzero multiweights of total weight <= max_weight, by total weight."""
    out = []
    for total in range(1, max_weight + 1):
        for w in itertools.product(range(total + 1), repeat=r):
            if sum(w) == total:
                out.append(w)
    return out


def _multinomial(w):
    out = factorial(sum(w))
    for x in w:
        out //= factorial(x)
    return out


def free_graded_lie_dims(gen_degrees, max_weight):
    """{(multiweight, degree): dim} for the free graded Lie algebra.

    The tensor algebra series equals the product over Lie pieces of
    (1 + x^w)^dim (odd degree) or (1 - x^w)^(-dim) (even degree); the dims
    are peeled off weight by weight.
    """
    r = len(gen_degrees)
    weights = _multiweights(r, max_weight)

    def fits(w):
        return sum(w) <= max_weight

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    series = {tuple([0] * r): 1}
    out = {}
    for w in weights:
        deg = sum(a * b for a, b in zip(w, gen_degrees))
        dim = _multinomial(w) - series.get(w, 0)
        if dim < 0:
            raise ArithmeticError("negative Lie dimension at weight %r" % (w,))
        if dim:
            out[(w, deg)] = dim
        for _ in range(dim):
            new = dict(series)
            if deg % 2:
                for u, c in series.items():
                    v = add(u, w)
                    if fits(v):
                        new[v] = new.get(v, 0) + c
            else:
                # multiply by 1/(1 - x^w) = sum_j x^{jw}
                for u in [tuple([0] * r)] + weights:
                    v = add(u, w)
                    if fits(v):
                        if new.get(u):
                            new[v] = new.get(v, 0) + new[u]
            series = new
    return out


# ---------------------------------------------------------------------------
# brackets in the tensor algebra

class FreeLie:
    """Free graded Lie algebra on generators of the given degrees.

    Elements are dicts word -> Fraction, words being tuples of generator
    indices.  All elements handled here are homogeneous.
    """

    def __init__(self, gen_degrees):
        self.gen_degrees = tuple(gen_degrees)
        self.r = len(self.gen_degrees)
        self._basis = {}

    def word_degree(self, word):
        return sum(self.gen_degrees[i] for i in word)

    def weight(self, word):
        w = [0] * self.r
        for i in word:
            w[i] += 1
        return tuple(w)

    def degree(self, elem):
        for word in elem:
            return self.word_degree(word)
        return 0

    def generator(self, i):
        return {(i,): Fraction(1)}

    def bracket(self, a, b):
        if not a or not b:
            return {}
        sgn = -1 if (self.degree(a) * self.degree(b)) % 2 else 1
        out = {}
        for u, x in a.items():
            for v, y in b.items():
                out[u + v] = out.get(u + v, 0) + x * y
                out[v + u] = out.get(v + u, 0) - sgn * x * y
        return {k: v for k, v in out.items() if v}

    def basis(self, w):
        """Basis of the multiweight-w piece, from brackets [x_i, basis(w - e_i)]."""
        w = tuple(w)
        if w in self._basis:
            return self._basis[w]
        total = sum(w)
        if total == 0:
            res = []
        elif total == 1:
            res = [self.generator(w.index(1))]
        else:
            cands = []
            for i in range(self.r):
                if w[i]:
                    sub = tuple(x - (j == i) for j, x in enumerate(w))
                    for y in self.basis(sub):
                        cands.append(self.bracket(self.generator(i), y))
            res = [cands[i] for i in independent_subset(cands)]
        self._basis[w] = res
        return res


def lie_basis_dims(gen_degrees, max_weight):
    """Same shape as free_graded_lie_dims, computed from explicit brackets."""
    lie = FreeLie(gen_degrees)
    out = {}
    for w in _multiweights(len(gen_degrees), max_weight):
        n = len(lie.basis(w))
        if n:
            out[(w, sum(a * b for a, b in zip(w, gen_degrees)))] = n
    return out


def _vectors_rank(vectors):
    keys = sorted({k for v in vectors for k in v})
    kidx = {k: i for i, k in enumerate(keys)}
    m = SparseMatrix(len(keys), len(vectors),
                     {(kidx[k], j): x for j, v in enumerate(vectors) for k, x in v.items()})
    return rank(m)


def hair_generator_degrees(m, d):
    return tuple(d - mi - 2 for mi in m)


def tree_homology_oracle(m, d, s):
    """{degree: dim} of the s-multiweight piece of ker(V (x) L(V) -> L(V)).

    Generators have degree d - m_i - 2; the result is shifted down by d - 3.
    """
    s = tuple(s)
    if len(s) != len(m):
        raise InvalidInput("s and m must have the same length")
    if sum(s) < 1:
        raise InvalidInput("need at least one hair")
    lie = FreeLie(hair_generator_degrees(m, d))
    images = []
    for i in range(len(s)):
        if s[i]:
            sub = tuple(x - (j == i) for j, x in enumerate(s))
            for y in lie.basis(sub):
                images.append(lie.bracket(lie.generator(i), y))
    dim = len(images) - (_vectors_rank(images) if images else 0)
    deg = sum(a * b for a, b in zip(s, lie.gen_degrees)) - (d - 3)
    return {deg: dim} if dim else {}


def whitehead_kernel_dim(m, d) -> int:
    """dim ker( (a_1..a_r) -> sum_i [iota_i, a_i] ), a_i of degree m_i - 1."""
    if d - max(m) <= 2:
        raise InvalidInput("codimension must exceed 2")
    degs = hair_generator_degrees(m, d)
    lie = FreeLie(degs)
    low = min(degs)
    images = []
    for i, mi in enumerate(m):
        target = mi - 1
        if target < low:
            continue
        for w in _multiweights(len(m), target // low):
            if sum(a * b for a, b in zip(w, degs)) == target:
                for y in lie.basis(w):
                    images.append(lie.bracket(lie.generator(i), y))
    if not images:
        return 0
    return len(images) - _vectors_rank(images)


def corollary_pi0_rank(m: int, d: int) -> int:
    """0/1 rank of rational pi_0 for a single component."""
    if (m - 1) % 2 == 0 and m >= 3 and d == 2 * m + 1:
        return 1  # m = 2k+1, d = 4k+3
    if (m + 1) % 4 == 0 and m >= 3 and d * 2 == 3 * (m + 1):
        return 1  # m = 4k-1, d = 6k
    return 0
