"""Koszul-side graph complex of colored forests and Arnold monomials.

Generators are built on labeled vertices 0..k-1, sorted by color, and then
passed to coinvariants of the color-preserving symmetric group through orbit
sums.  A labeled generator is a pair (colored, plain) of monomials in normal
form: each is a tuple of pairs (i, j) with i < j, pairwise distinct targets j,
sorted by target.

The orientation of a labeled generator is the list
    [vertices in label order] + [colored factors] + [non-colored factors]
where a vertex of color i has degree -m_i, a colored factor of color i has
degree m_i - 1 and reverses with sign (-1)^{m_i}, and a non-colored factor has
degree d - 1 and reverses with sign (-1)^d.  Relabeling vertices therefore
carries the twist sign(sigma_i)^{m_i} automatically.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .graded_core import InvalidInput, parity_sign
from .linalg import independent_subset, solve_in_span


# ---------------------------------------------------------------------------
# Arnold algebra

def admissible_monomials(vertices, n_edges, cover_all=False):
    """Normal-form monomials with n_edges factors on the given sorted vertices."""
    vertices = tuple(vertices)
    out = []
    for targets in itertools.combinations(vertices[1:], n_edges):
        choices = [[v for v in vertices if v < j] for j in targets]
        for sources in itertools.product(*choices):
            mono = tuple(zip(sources, targets))
            if cover_all:
                touched = set(sources) | set(targets)
                if len(touched) != len(vertices):
                    continue
            out.append(mono)
    out.sort()
    return out


def admissible_basis(k, n, cover_all=False):
    """{degree: [monomial, ...]} on points 0..k-1; degree = (n-1) * edges."""
    if k < 0 or n < 2:
        raise InvalidInput("need k >= 0 and n >= 2")
    out = {}
    for e in range(0, max(k, 1)):
        monos = admissible_monomials(range(k), e, cover_all)
        if monos:
            out[(n - 1) * e] = monos
    if cover_all:
        out.pop(0, None) if k > 0 else None
    return out


def _pars(n):
    """(degree parity, reversal parity) of a factor g_ij in H^*C(-, R^n)."""
    return ((n - 1) % 2, n % 2)


_reduce_cache = {}


def arnold_reduce(factors, n=None):
    """Rewrite an ordered product of factors into admissible normal form.

    ``factors`` is a sequence of (i, j) or (i, j, n_i) entries; n_i is the
    ambient dimension of that factor (defaults to ``n``).  Returns
    {normal-form monomial: integer coefficient}.  Factor degrees and reversal
    signs follow n_i.  Only factors of equal n_i that share a target are
    rewritten against each other.
    """
    norm = []
    for f in factors:
        if len(f) == 2:
            if n is None:
                raise InvalidInput("ambient dimension missing")
            i, j, ni = f[0], f[1], n
        else:
            i, j, ni = f
        if i == j:
            raise InvalidInput("tadpole factor g_%d%d" % (i, j))
        norm.append((i, j, ni % 2))
    res = _reduce(tuple(norm))
    return dict(res)


def _reduce(fs):
    hit = _reduce_cache.get(fs)
    if hit is not None:
        return hit
    out = _reduce_uncached(fs)
    _reduce_cache[fs] = out
    return out


def _reduce_uncached(fs):
    # orient every factor as i < j
    sign = 1
    oriented = []
    for i, j, np_ in fs:
        if i > j:
            i, j = j, i
            if np_:
                sign = -sign
        oriented.append((i, j, np_))
    pairs = [(i, j) for i, j, _ in oriented]
    if len(set(pairs)) != len(pairs):
        return ()
    by_target = {}
    clash = None
    for pos, (i, j, _) in enumerate(oriented):
        if j in by_target:
            clash = (by_target[j], pos)
            break
        by_target[j] = pos
    if clash is None:
        seq = [((j, i), 1 - np_) for i, j, np_ in oriented]
        sign *= parity_sign(seq)
        mono = tuple(sorted(pairs, key=lambda p: p[1]))
        return ((mono, sign),)
    p, q = clash
    fp, fq = oriented[p], oriented[q]
    x, y = sorted((fp[0], fq[0]))
    z = fp[1]
    np_ = fp[2]
    rest = [f for pos, f in enumerate(oriented) if pos not in (p, q)]
    # bring the clashing pair to the front in the order (g_xz, g_yz)
    first, second = (p, q) if fp[0] == x else (q, p)
    order = [first, second] + [pos for pos in range(len(oriented)) if pos not in (p, q)]
    seq_par = [1 - f[2] for f in oriented]
    inv = 0
    for a in range(len(order)):
        if not seq_par[order[a]]:
            continue
        for b in range(a + 1, len(order)):
            if seq_par[order[b]] and order[a] > order[b]:
                inv += 1
    if inv % 2:
        sign = -sign
    # g_xz g_yz = g_xy g_yz - g_xy g_xz
    acc = {}
    for coeff, pair in ((1, ((x, y, np_), (y, z, np_))), (-1, ((x, y, np_), (x, z, np_)))):
        for mono, c in _reduce(pair + tuple(rest)):
            acc[mono] = acc.get(mono, 0) + sign * coeff * c
    return tuple((k, v) for k, v in sorted(acc.items()) if v)


# ---------------------------------------------------------------------------
# labeled generators

@dataclass(frozen=True)
class LabeledShape:
    """Vertex colors of a labeled configuration, sorted by color (1-based)."""

    m: tuple
    d: int
    kbar: tuple

    @property
    def k(self):
        return sum(self.kbar)

    @property
    def vcol(self):
        return tuple(c + 1 for c, n in enumerate(self.kbar) for _ in range(n))

    def color_range(self, c):
        start = sum(self.kbar[:c - 1])
        return range(start, start + self.kbar[c - 1])

    def vertex_parities(self):
        return tuple(self.m[c - 1] % 2 for c in self.vcol)


def _colored_factors(shape, col):
    vcol = shape.vcol
    return [(a, b, shape.m[vcol[a] - 1]) for a, b in col]


def _plain_factors(shape, nc):
    return [(a, b, shape.d) for a, b in nc]


def normalize(shape, col_factors, nc_factors, coeff=1):
    """Reduce both monomial blocks; returns {(col, nc): coefficient}."""
    cres = _reduce(tuple((a, b, n % 2) for a, b, n in col_factors))
    if not cres:
        return {}
    nres = _reduce(tuple((a, b, n % 2) for a, b, n in nc_factors))
    out = {}
    for cm, cc in cres:
        for nm, nc in nres:
            out[(cm, nm)] = out.get((cm, nm), 0) + coeff * cc * nc
    return {k: v for k, v in out.items() if v}


def is_connected(k, col, nc):
    if k == 0:
        return False
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in tuple(col) + tuple(nc):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in range(k)}) == 1


def labeled_basis(shape, s, t, connected=True):
    """Sorted labeled basis (col, nc) of the piece with vertex counts kbar."""
    per_color = []
    for c in range(1, len(shape.kbar) + 1):
        kc = shape.kbar[c - 1]
        sc = s[c - 1]
        if kc < sc or (kc > 0 and sc == 0):
            return []
        per_color.append(admissible_monomials(shape.color_range(c), kc - sc))
    plain = admissible_monomials(range(shape.k), t, cover_all=True) if shape.k else ([()] if t == 0 else [])
    out = []
    for parts in itertools.product(*per_color):
        col = tuple(sorted((f for part in parts for f in part), key=lambda p: p[1]))
        for nc in plain:
            if connected and not is_connected(shape.k, col, nc):
                continue
            out.append((col, nc))
    out.sort()
    return out


def color_permutations(shape):
    """All color-preserving permutations of 0..k-1 as tuples sigma[v]."""
    blocks = [list(shape.color_range(c)) for c in range(1, len(shape.kbar) + 1)]
    for choice in itertools.product(*[itertools.permutations(b) for b in blocks]):
        sigma = [0] * shape.k
        for block, img in zip(blocks, choice):
            for v, w in zip(block, img):
                sigma[v] = w
        yield tuple(sigma)


def act(shape, sigma, elem):
    """sigma . (col, nc) as {(col, nc): coefficient}."""
    col, nc = elem
    vpar = shape.vertex_parities()
    # vertex tokens land at their original positions carrying new labels;
    # sorting them back costs the Koszul sign on vertex parities
    sign = parity_sign([(sigma[v], vpar[v]) for v in range(shape.k)])
    cf = [(sigma[a], sigma[b], n) for a, b, n in _colored_factors(shape, col)]
    nf = [(sigma[a], sigma[b], n) for a, b, n in _plain_factors(shape, nc)]
    return normalize(shape, cf, nf, sign)


_orbit_cache = {}


def orbit_sum(shape, elem, perms=None):
    """Sum of sigma . elem over the color-preserving symmetric group."""
    key = (shape, elem)
    hit = _orbit_cache.get(key)
    if hit is not None:
        return hit
    if perms is None:
        perms = list(color_permutations(shape))
    out = {}
    for sigma in perms:
        for k, c in act(shape, sigma, elem).items():
            out[k] = out.get(k, 0) + c
    res = {k: Fraction(v) for k, v in out.items() if v}
    _orbit_cache[key] = res
    return res


def group_order(shape):
    out = 1
    for n in shape.kbar:
        out *= factorial(n)
    return out


def symmetrize(shape, vector):
    """Averaging projector onto invariants: (1/|G|) sum_sigma sigma . v."""
    out = {}
    for elem, c in vector.items():
        for k, x in orbit_sum(shape, elem).items():
            out[k] = out.get(k, 0) + c * x
    n = group_order(shape)
    return {k: v / n for k, v in out.items() if v}


def contraction_terms(shape, elem):
    """Labeled contraction differential: list of (new shape, {(col, nc): coeff})."""
    col, nc = elem
    vpar = shape.vertex_parities()
    vcol = shape.vcol
    cfs = _colored_factors(shape, col)
    out = []
    vsum_before = [0] * (shape.k + 1)
    for v in range(shape.k):
        vsum_before[v + 1] = vsum_before[v] + vpar[v]
    total_vpar = vsum_before[shape.k]
    passed_edges = 0
    for p, (a, b, n) in enumerate(cfs):
        e_par = (n - 1) % 2
        sign = 1
        if e_par and (total_vpar + passed_edges) % 2:
            sign = -sign
        passed_edges += e_par
        # source vertex a to the second slot
        if vpar[a] and vsum_before[a] % 2:
            sign = -sign
        c = vcol[a]
        phi = [v if v < a else v - 1 for v in range(shape.k)]
        phi[a] = b - 1
        new_cf = [(phi[x], phi[y], nn) for q, (x, y, nn) in enumerate(cfs) if q != p]
        new_nf = []
        dead = False
        for x, y in nc:
            fx, fy = phi[x], phi[y]
            if fx == fy:
                dead = True
                break
            new_nf.append((fx, fy, shape.d))
        if dead:
            continue
        kbar = list(shape.kbar)
        kbar[c - 1] -= 1
        new_shape = LabeledShape(shape.m, shape.d, tuple(kbar))
        res = normalize(new_shape, new_cf, new_nf, sign)
        if res:
            out.append((new_shape, res))
    return out


def apply_contraction(shape, vector):
    """Extend the labeled differential linearly: {kbar: {(col, nc): Fraction}}."""
    out = {}
    for elem, coeff in vector.items():
        for new_shape, res in contraction_terms(shape, elem):
            tgt = out.setdefault(new_shape.kbar, {})
            for key, c in res.items():
                tgt[key] = tgt.get(key, 0) + coeff * c
    return {kb: {k: Fraction(v) for k, v in vec.items() if v} for kb, vec in out.items()}


# ---------------------------------------------------------------------------
# coinvariant blocks

@dataclass
class CoinvariantPiece:
    """Orbit-sum basis of one vertex-count piece."""

    shape: LabeledShape
    labeled: list
    reps: list            # labeled representative of each basis orbit sum
    vectors: list         # the orbit sums themselves
    zero_orbits: int      # labeled generators whose orbit sum vanishes
    classes: dict = None  # labeled generator y -> (class representative x, sign), y = sign * sigma.x
    class_sums: dict = None  # representative -> orbit sum

    @property
    def dim(self):
        return len(self.vectors)

    def project(self, vector):
        """(1/|G|) sum_sigma sigma.v, using y = +-sigma.x  =>  P(y) = +-P(x)."""
        out = {}
        for y, c in vector.items():
            rep, sign = self.classes[y]
            for k, x in self.class_sums[rep].items():
                out[k] = out.get(k, 0) + c * sign * x
        n = group_order(self.shape)
        return {k: v / n for k, v in out.items() if v}


def _pair_sets(elem, sigma=None):
    col, nc = elem
    if sigma is None:
        return (frozenset(col), frozenset(nc))
    return (frozenset(tuple(sorted((sigma[a], sigma[b]))) for a, b in col),
            frozenset(tuple(sorted((sigma[a], sigma[b]))) for a, b in nc))


def relabeling_classes(shape, labeled, perms=None):
    """Group labeled generators that are signed relabelings of each other.

    Returns {y: (x, sign)} with act(sigma, x) = sign * y for some sigma and
    x the first member of its class.
    """
    if perms is None:
        perms = list(color_permutations(shape))
    index = {_pair_sets(y): y for y in labeled}
    classes = {}
    for x in labeled:
        if x in classes:
            continue
        classes[x] = (x, 1)
        for sigma in perms:
            y = index.get(_pair_sets(x, sigma))
            if y is None or y in classes:
                continue
            img = act(shape, sigma, x)
            if list(img) != [y]:
                raise ArithmeticError("relabeling of an admissible monomial did not normalise to one term")
            classes[y] = (x, img[y])
    return classes


_piece_cache = {}


def coinvariant_piece(m, d, s, t, kbar, connected=True):
    key = (tuple(m), d, tuple(s), t, tuple(kbar), connected)
    hit = _piece_cache.get(key)
    if hit is not None:
        return hit
    shape = LabeledShape(tuple(m), d, tuple(kbar))
    labeled = labeled_basis(shape, s, t, connected)
    perms = list(color_permutations(shape))
    classes = relabeling_classes(shape, labeled, perms)
    class_sums = {}
    sums = []
    cand = []
    for x in labeled:
        if classes[x][0] != x:
            continue
        v = orbit_sum(shape, x, perms)
        class_sums[x] = v
        if v:
            sums.append(v)
            cand.append(x)
    zero = sum(1 for y in labeled if not class_sums[classes[y][0]])
    keep = independent_subset(sums)
    piece = CoinvariantPiece(shape, labeled, [cand[i] for i in keep], [sums[i] for i in keep], zero,
                             classes, class_sums)
    _piece_cache[key] = piece
    return piece


def coinvariant_basis(m, d, s, t, kbar, connected=False):
    """Orbit-sum basis elements {degree: [vector, ...]} for one vertex-count piece."""
    piece = coinvariant_piece(m, d, s, t, kbar, connected)
    if not piece.vectors:
        return {}
    return {cohomological_degree(m, d, s, t, sum(kbar)): list(piece.vectors)}


def connected_filter(vectors, k):
    """Keep the vectors whose labeled support is connected."""
    out = []
    for v in vectors:
        if v and all(is_connected(k, col, nc) for col, nc in v):
            out.append(v)
    return out


def cohomological_degree(m, d, s, t, k):
    """(d-1) t - (colored edges) - sum m_i s_i, with colored edges = k - sum s."""
    return (d - 1) * t - (k - sum(s)) - sum(a * b for a, b in zip(m, s))


def vertex_count_range(s, t):
    """kbar vectors that can carry generators of the (s, t) block."""
    r = len(s)
    lo = [x for x in s]
    hi_total = 2 * t
    out = []
    ranges = [range(x, hi_total + 1) if x > 0 else range(0, 1) for x in lo]
    for kbar in itertools.product(*ranges):
        k = sum(kbar)
        if k > hi_total:
            continue
        if k == 0 and t > 0:
            continue
        if k == 1:
            continue
        out.append(tuple(kbar))
    return sorted(out)


def contraction_matrix(m, d, s, t, kbar, connected=True):
    """Matrices of the induced differential from piece kbar to each kbar - e_c.

    Returns {target kbar: list of columns}, each column a {row index: Fraction}.
    """
    src = coinvariant_piece(m, d, s, t, kbar, connected)
    out = {}
    images = [apply_contraction(src.shape, v) for v in src.vectors]
    targets = sorted({kb for img in images for kb in img})
    for kb in targets:
        tgt = coinvariant_piece(m, d, s, t, kb, connected)
        # the labeled image of an orbit sum need not be invariant; its
        # symmetrisation is the image under the induced map on coinvariants
        cols = [tgt.project(img.get(kb, {})) for img in images]
        if not tgt.vectors:
            if any(cols):
                from .linalg import ConsistencyError
                raise ConsistencyError("contraction leaves the invariant subspace")
            continue
        out[kb] = solve_in_span(tgt.vectors, cols)
    return out


def kq_dimension(m, s, kbar):
    """(degree, dim) of the vertex-count piece of the Koszul dual sequence.

    degree = sum s_i (m_i - 1) + k; dim = k!/prod k_i! * prod_i a_i where a_i
    counts admissible monomials with k_i - s_i factors on k_i points.
    """
    k = sum(kbar)
    deg = sum(si * (mi - 1) for si, mi in zip(s, m)) + k
    dim = factorial(k)
    for si, ki, mi in zip(s, kbar, m):
        if si > ki or (ki > 0 and si == 0):
            return deg, 0
        dim //= factorial(ki)
    for si, ki, mi in zip(s, kbar, m):
        dim *= len(admissible_monomials(range(ki), ki - si))
    return deg, dim
