"""Colored hairy graphs: canonical forms with signs, enumeration, differential.

Vertices 0..ne-1 are external (valence 1, colored 1..r); vertices ne.. are
internal (valence >= 3).  Edges are directed pairs; tadpoles and parallel
edges are allowed.  An orientation is a total order on the tokens
("v", i) and ("e", j).  The standard order lists all vertices by index, then
all edges by index.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graded_core import InvalidInput, parity_sign


@dataclass(frozen=True)
class HairyGraph:
    colors: tuple
    n_int: int
    edges: tuple
    order: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.order is None:
            object.__setattr__(self, "order", standard_order(self.n_vertices, len(self.edges)))
        else:
            object.__setattr__(self, "order", tuple(tuple(t) for t in self.order))

    @property
    def n_ext(self):
        return len(self.colors)

    @property
    def n_vertices(self):
        return len(self.colors) + self.n_int

    def valences(self):
        val = [0] * self.n_vertices
        for u, v in self.edges:
            val[u] += 1
            val[v] += 1
        return val

    def is_connected(self):
        n = self.n_vertices
        if n == 0:
            return False
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n

    def validate(self, r=None):
        if not self.colors:
            raise InvalidInput("a hairy graph needs at least one external vertex")
        if r is not None and any(not 1 <= c <= r for c in self.colors):
            raise InvalidInput("external color out of range")
        n = self.n_vertices
        if any(not (0 <= u < n and 0 <= v < n) for u, v in self.edges):
            raise InvalidInput("edge endpoint out of range")
        val = self.valences()
        ne = self.n_ext
        if any(val[i] != 1 for i in range(ne)):
            raise InvalidInput("external vertices must have valence 1")
        if any(val[i] < 3 for i in range(ne, n)):
            raise InvalidInput("internal vertices must have valence >= 3")
        if not self.is_connected():
            raise InvalidInput("hairy graphs are connected")
        if sorted(self.order) != sorted(standard_order(n, len(self.edges))):
            raise InvalidInput("orientation order must list every vertex and edge once")
        return self


def standard_order(n_vertices, n_edges):
    return tuple([("v", i) for i in range(n_vertices)] + [("e", j) for j in range(n_edges)])


def degree(g: HairyGraph, d: int, m) -> int:
    """(d-1)|E| - d|V^I| - sum_i m_i s_i."""
    r = len(m)
    if any(not 1 <= c <= r for c in g.colors):
        raise InvalidInput("external color out of range for r=%d" % r)
    return (d - 1) * len(g.edges) - d * g.n_int - sum(m[c - 1] for c in g.colors)


def hair_counts(g: HairyGraph, r: int):
    s = [0] * r
    for c in g.colors:
        s[c - 1] += 1
    return tuple(s)


def gradings(g: HairyGraph, r: int = None):
    """(hair counts per color, genus, complexity)."""
    if r is None:
        r = max(g.colors) if g.colors else 0
    s = hair_counts(g, r)
    genus = len(g.edges) - g.n_vertices + 1
    return s, genus, genus + sum(s) - 1


# ---------------------------------------------------------------------------
# canonical forms

def _token_parity(tok, colors, n_ext, d, m):
    kind, i = tok
    if kind == "e":
        return (d - 1) % 2
    if i < n_ext:
        return m[colors[i] - 1] % 2
    return d % 2


def _refine(colors, n_int, edges):
    n = len(colors) + n_int
    ne = len(colors)
    val = [0] * n
    loops = [0] * n
    nbrs = [[] for _ in range(n)]
    for u, v in edges:
        val[u] += 1
        val[v] += 1
        if u == v:
            loops[u] += 1
        else:
            nbrs[u].append(v)
            nbrs[v].append(u)
    cur = [(0, colors[i], val[i], loops[i]) if i < ne else (1, 0, val[i], loops[i]) for i in range(n)]
    ranks = _rank_labels(cur)
    while True:
        sig = [(ranks[i], tuple(sorted(ranks[j] for j in nbrs[i]))) for i in range(n)]
        new = _rank_labels(sig)
        if len(set(new)) == len(set(ranks)):
            return new
        ranks = new


def _rank_labels(labels):
    table = {lab: k for k, lab in enumerate(sorted(set(labels)))}
    return [table[lab] for lab in labels]


def _encode(edges, pos):
    return tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges))


def _minimal_labelings(colors, n_int, edges):
    """All vertex maps old->new position achieving the minimal edge encoding."""
    ranks = _refine(colors, n_int, edges)
    n = len(ranks)
    cells = {}
    for i, c in enumerate(ranks):
        cells.setdefault(c, []).append(i)
    ordered = [cells[c] for c in sorted(cells)]
    slots = []
    start = 0
    for cell in ordered:
        slots.append(list(range(start, start + len(cell))))
        start += len(cell)

    best = None
    best_maps = []
    # backtracking over cells; the encoding is compared only once complete
    per_cell = [list(itertools.permutations(cell)) for cell in ordered]
    for choice in itertools.product(*per_cell):
        pos = [0] * n
        for cell_perm, slot in zip(choice, slots):
            for v, p in zip(cell_perm, slot):
                pos[v] = p
        enc = _encode(edges, pos)
        if best is None or enc < best:
            best = enc
            best_maps = [tuple(pos)]
        elif enc == best:
            best_maps.append(tuple(pos))
    return best, best_maps


@dataclass(frozen=True, order=True)
class CanonicalGenerator:
    """Canonical hairy graph in standard orientation plus the zero flag."""

    key: tuple
    zero: bool = field(default=False, compare=False)

    @property
    def colors(self):
        return self.key[0]

    @property
    def n_int(self):
        return self.key[1]

    @property
    def edges(self):
        return self.key[2]

    def graph(self):
        return HairyGraph(self.colors, self.n_int, self.edges)


_structure_cache = {}


def _structure(colors, n_int, edges, d_par, m_par):
    """Cached (canonical key, representative map, zero flag) of a labeled structure."""
    ck = (colors, n_int, tuple(sorted(edges)), d_par, m_par)
    hit = _structure_cache.get(ck)
    if hit is not None:
        return hit
    enc, maps = _minimal_labelings(colors, n_int, edges)
    pos0 = maps[0]
    ne = len(colors)
    new_colors = [0] * ne
    for i in range(ne):
        new_colors[pos0[i]] = colors[i]
    key = (tuple(new_colors), n_int, enc)
    zero = False
    counts = {}
    for e in enc:
        counts[e] = counts.get(e, 0) + 1
    if d_par == 0 and any(c > 1 for c in counts.values()):
        zero = True  # two parallel odd edges swap with sign -1
    if d_par == 1 and any(a == b for a, b in enc):
        zero = True  # reversing a tadpole costs (-1)^d
    if not zero and len(maps) > 1:
        base_edges = sorted(edges)
        ref = _relabel_sign(colors, n_int, base_edges, standard_order(ne + n_int, len(base_edges)),
                            pos0, enc, d_par, m_par)
        for pos in maps[1:]:
            s = _relabel_sign(colors, n_int, base_edges, standard_order(ne + n_int, len(base_edges)),
                              pos, enc, d_par, m_par)
            if s != ref:
                zero = True
                break
    hit = (key, pos0, zero)
    _structure_cache[ck] = hit
    return hit


def _relabel_sign(colors, n_int, edges, order, pos, enc, d_par, m_par):
    """Sign relating (edges, order) to the canonical graph enc in standard order."""
    ne = len(colors)
    slot_start = {}
    for idx, e in enumerate(enc):
        slot_start.setdefault(e, idx)
    used = {}
    edge_slot = []
    sign = 1
    for u, v in edges:
        a, b = pos[u], pos[v]
        k = (min(a, b), max(a, b))
        off = used.get(k, 0)
        used[k] = off + 1
        edge_slot.append(slot_start[k] + off)
        if a > b and d_par:
            sign = -sign
    seq = []
    for kind, i in order:
        if kind == "v":
            par = (m_par[colors[i] - 1] if i < ne else d_par)
            seq.append(((0, pos[i]), par))
        else:
            seq.append(((1, edge_slot[i]), 1 - d_par))
    return sign * parity_sign(seq)


def canonicalize(g: HairyGraph, d: int, m):
    """Return (CanonicalGenerator, sign) with g = sign * canonical generator.

    If the canonical graph has an orientation-reversing automorphism the
    generator carries the zero flag and the sign is reported as +1.
    """
    d_par = d % 2
    m_par = tuple(x % 2 for x in m)
    key, pos0, zero = _structure(g.colors, g.n_int, g.edges, d_par, m_par)
    if zero:
        return CanonicalGenerator(key, True), 1
    sign = _relabel_sign(g.colors, g.n_int, g.edges, g.order, pos0, key[2], d_par, m_par)
    return CanonicalGenerator(key, False), sign


# ---------------------------------------------------------------------------
# enumeration

def max_internal_vertices(s, t):
    genus = t - sum(s) + 1
    return 2 * max(genus, 0) - 2 + sum(s)


def enumerate_block(m, d, s, t):
    """All canonical generators (nonzero and zero) with hair counts s, complexity t."""
    s = tuple(s)
    total = sum(s)
    genus = t - total + 1
    found = {}
    if total == 0 or genus < 0 or t < 0:
        return []
    colors = tuple(c + 1 for c, k in enumerate(s) for _ in range(k))
    for ni in range(0, max_internal_vertices(s, t) + 1):
        n_edges = t + ni
        if ni == 0:
            if total == 2 and n_edges == 1:
                _add(found, HairyGraph(colors, 0, ((0, 1),)), d, m)
            continue
        n_inner = n_edges - total
        if n_inner < 0:
            continue
        internal = range(total, total + ni)
        pairs = [(a, b) for a in internal for b in internal if a <= b]
        for attach in _hair_attachments(s, ni):
            hair_edges = tuple((h, total + attach[h]) for h in range(total))
            base_val = [0] * ni
            for a in attach:
                base_val[a] += 1
            for inner in itertools.combinations_with_replacement(pairs, n_inner):
                val = list(base_val)
                for a, b in inner:
                    val[a - total] += 1
                    val[b - total] += 1
                if min(val) < 3:
                    continue
                g = HairyGraph(colors, ni, hair_edges + inner)
                if not g.is_connected():
                    continue
                _add(found, g, d, m)
    return sorted(found.values())


def _hair_attachments(s, ni):
    """Hair-to-internal-vertex maps, sorted within each color to cut duplicates."""
    groups = []
    for k in s:
        groups.append(list(itertools.combinations_with_replacement(range(ni), k)))
    for choice in itertools.product(*groups):
        yield tuple(x for grp in choice for x in grp)


def _add(found, g, d, m):
    gen, _ = canonicalize(g, d, m)
    found.setdefault(gen.key, gen)


def enumerate_generators(m, d, s, t, degree_range=None):
    """Nonzero canonical generators of the block grouped by degree.

    Returns (dict degree -> sorted list, number of zero classes discarded).
    """
    gens = enumerate_block(m, d, s, t)
    out = {}
    zeros = 0
    for gen in gens:
        if gen.zero:
            zeros += 1
            continue
        deg = degree(gen.graph(), d, m)
        if degree_range is not None and not (degree_range[0] <= deg <= degree_range[1]):
            continue
        out.setdefault(deg, []).append(gen)
    for deg in out:
        out[deg].sort()
    return out, zeros


# ---------------------------------------------------------------------------
# differential

def expansion_terms(gen: CanonicalGenerator):
    """Raw expansion terms (before canonicalization) as oriented HairyGraphs."""
    g = gen.graph()
    n = g.n_vertices
    ne = g.n_ext
    n_edges = len(g.edges)
    new_v = n
    new_e = n_edges
    order = (("v", new_v), ("e", new_e)) + g.order
    for x in range(ne, n):
        halves = []
        for j, (u, v) in enumerate(g.edges):
            if u == x:
                halves.append((j, 0))
            if v == x:
                halves.append((j, 1))
        l = len(halves)
        rest = halves[1:]
        for size in range(2, l - 1):
            for moved in itertools.combinations(rest, size):
                edges = [list(e) for e in g.edges]
                for j, end in moved:
                    edges[j][end] = new_v
                edges.append([x, new_v])
                yield HairyGraph(g.colors, g.n_int + 1, tuple(tuple(e) for e in edges), order)


def expansion_differential(gen: CanonicalGenerator, d: int, m):
    """Expansion differential as {CanonicalGenerator: Fraction}."""
    if gen.zero:
        raise InvalidInput("the differential is defined on nonzero generators")
    out = {}
    for term in expansion_terms(gen):
        cg, sign = canonicalize(term, d, m)
        if cg.zero:
            continue
        out[cg] = out.get(cg, 0) + sign
    return {k: Fraction(v) for k, v in out.items() if v}
