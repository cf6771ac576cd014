"""Block assembly, homology tables, cross-checks and derived tables."""

import itertools
import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import hairy, koszul
from .graded_core import InvalidInput
from .linalg import ConsistencyError, SparseMatrix, homology_dims

log = logging.getLogger(__name__)

HAIRY = "hairy-pi"
KOSZUL_PI = "koszul-HHpi"
KOSZUL = "koszul-HH"
KINDS = (HAIRY, KOSZUL_PI, KOSZUL)


class BelowTheoremRange(UserWarning):
    """Codimension d - max m is at most 2."""


@dataclass(frozen=True, order=True)
class BlockKey:
    m: tuple
    d: int
    s: tuple
    t: int
    kind: str = HAIRY

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        object.__setattr__(self, "s", tuple(self.s))
        if len(self.m) != len(self.s) or not self.m:
            raise InvalidInput("m and s must have the same positive length")
        if any(x < 1 for x in self.m) or any(x < 0 for x in self.s) or self.t < 0:
            raise InvalidInput("need m_i >= 1, s_i >= 0, t >= 0")
        if self.kind not in KINDS:
            raise InvalidInput("unknown complex kind %r" % (self.kind,))

    def slug(self):
        j = "-".join
        return "%s_m%s_d%d_s%s_t%d" % (self.kind, j(map(str, self.m)), self.d, j(map(str, self.s)), self.t)


@dataclass
class ChainBlock:
    key: BlockKey
    dims: dict                    # degree -> chain dimension
    maps: dict                    # source degree -> SparseMatrix
    step: int                     # -1 homological, +1 cohomological
    bases: dict = field(default_factory=dict)
    zero_discarded: dict = field(default_factory=dict)   # degree -> count
    vertex_counts: dict = field(default_factory=dict)    # degree -> total k (Koszul)
    below_range: bool = False

    def check_square_zero(self):
        for n, a in self.maps.items():
            b = self.maps.get(n + self.step)
            if b is not None and a.entries and b.entries and not (b @ a).is_zero():
                raise ConsistencyError("d^2 != 0 in %s at degree %d" % (self.key.slug(), n))
        return True


def codimension_ok(m, d):
    return d - max(m) > 2


def _warn_range(m, d):
    if not codimension_ok(m, d):
        warnings.warn("codimension d - max m = %d <= 2; results are outside the theorem range"
                      % (d - max(m)), BelowTheoremRange, stacklevel=3)
        return True
    return False


def build_block(key: BlockKey, truncation=None, cache=None) -> ChainBlock:
    """Bases and differential matrices for one (m, d, s, t, kind) block.

    ``truncation`` (Koszul kinds only) is an int bounding the total vertex
    count or a tuple bounding it per color.  ``cache`` is an optional object
    with ``load(name, rows, cols)`` / ``store(name, matrix)``.
    """
    below = _warn_range(key.m, key.d)
    if key.kind == HAIRY:
        if truncation is not None:
            raise InvalidInput("truncations apply to the Koszul complexes only")
        block = _build_hairy(key, cache)
    else:
        block = _build_koszul(key, truncation, cache)
    block.below_range = below
    block.check_square_zero()
    return block


def _cached_maps(key, dims, step, cache, compute):
    maps = {}
    todo = []
    for n in sorted(dims):
        tgt = n + step
        if tgt not in dims:
            continue
        name = "%s_deg%d" % (key.slug(), n)
        got = cache.load(name, dims[tgt], dims[n]) if cache is not None else None
        if got is None:
            todo.append((n, name))
        else:
            maps[n] = got
    if todo:
        fresh = compute([n for n, _ in todo])
        for n, name in todo:
            a = fresh[n]
            maps[n] = a
            if cache is not None:
                cache.store(name, a)
    return maps


def _build_hairy(key, cache):
    gens, _ = hairy.enumerate_generators(key.m, key.d, key.s, key.t)
    zero_by_deg = {}
    for g in hairy.enumerate_block(key.m, key.d, key.s, key.t):
        if g.zero:
            deg = hairy.degree(g.graph(), key.d, key.m)
            zero_by_deg[deg] = zero_by_deg.get(deg, 0) + 1
    dims = {n: len(v) for n, v in gens.items()}

    def compute(degrees):
        out = {}
        for n in degrees:
            tidx = {g: i for i, g in enumerate(gens[n - 1])}
            ent = {}
            for j, g in enumerate(gens[n]):
                for h, c in hairy.expansion_differential(g, key.d, key.m).items():
                    if h not in tidx:
                        raise ConsistencyError("expansion left the block %s" % key.slug())
                    ent[(tidx[h], j)] = c
            out[n] = SparseMatrix(dims[n - 1], dims[n], ent)
        return out

    maps = _cached_maps(key, dims, -1, cache, compute)
    return ChainBlock(key, dims, maps, -1, bases=gens, zero_discarded=zero_by_deg)


def _kbar_allowed(kbar, truncation):
    if truncation is None:
        return True
    if isinstance(truncation, int):
        return sum(kbar) <= truncation
    return all(k <= n for k, n in zip(kbar, truncation))


def _build_koszul(key, truncation, cache):
    connected = key.kind == KOSZUL_PI
    m, d, s, t = key.m, key.d, key.s, key.t
    pieces = {}
    zero_by_deg = {}
    for kbar in koszul.vertex_count_range(s, t):
        if not _kbar_allowed(kbar, truncation):
            continue
        if connected and sum(kbar) == 0:
            continue
        piece = koszul.coinvariant_piece(m, d, s, t, kbar, connected)
        deg = koszul.cohomological_degree(m, d, s, t, sum(kbar))
        if piece.zero_orbits:
            zero_by_deg[deg] = zero_by_deg.get(deg, 0) + piece.zero_orbits
        if piece.dim:
            pieces[kbar] = piece
    bydeg = {}
    for kbar in sorted(pieces):
        bydeg.setdefault(koszul.cohomological_degree(m, d, s, t, sum(kbar)), []).append(kbar)
    offsets = {}
    dims = {}
    bases = {}
    vcount = {}
    for deg, kbars in bydeg.items():
        off = 0
        bases[deg] = []
        for kbar in kbars:
            offsets[kbar] = off
            off += pieces[kbar].dim
            bases[deg].extend((kbar, rep) for rep in pieces[kbar].reps)
        dims[deg] = off
        vcount[deg] = sum(kbars[0])

    def compute(degrees):
        out = {}
        wanted = set(degrees)
        ents = {n: {} for n in degrees}
        for kbar, piece in pieces.items():
            n = koszul.cohomological_degree(m, d, s, t, sum(kbar))
            if n not in wanted:
                continue
            for tk, cols in koszul.contraction_matrix(m, d, s, t, kbar, connected).items():
                if tk not in pieces:
                    if any(cols):
                        raise ConsistencyError("contraction left the truncated complex")
                    continue
                for j, col in enumerate(cols):
                    for i, v in col.items():
                        ents[n][(offsets[tk] + i, offsets[kbar] + j)] = v
        for n in degrees:
            out[n] = SparseMatrix(dims[n + 1], dims[n], ents[n])
        return out

    use_cache = cache if truncation is None else None
    maps = _cached_maps(key, dims, +1, use_cache, compute)
    return ChainBlock(key, dims, maps, +1, bases=bases, zero_discarded=zero_by_deg,
                      vertex_counts=vcount)


def homology(block: ChainBlock, verify_modular=False):
    return homology_dims(block.dims, block.maps, block.step, verify_modular)


def euler(block: ChainBlock, slices=None):
    """Euler characteristic from chain dims and from homology dims (must agree)."""
    if slices is None:
        slices = homology(block)
    chi_chain = sum((-1) ** (n % 2) * c for n, c in block.dims.items())
    chi_hom = sum((-1) ** (x.degree % 2) * x.homology_dim for x in slices)
    if chi_chain != chi_hom:
        raise ConsistencyError("Euler characteristic mismatch in %s: %d vs %d"
                               % (block.key.slug(), chi_chain, chi_hom))
    return chi_chain


def homology_of(key, truncation=None, cache=None, verify_modular=False):
    block = build_block(key, truncation, cache)
    return block, homology(block, verify_modular)


def cross_check(m, d, s, t, cache=None):
    """Compare hairy-pi homology with Koszul-HHpi cohomology degreewise."""
    m, s = tuple(m), tuple(s)
    _, hs = homology_of(BlockKey(m, d, s, t, HAIRY), cache=cache)
    _, ks = homology_of(BlockKey(m, d, s, t, KOSZUL_PI), cache=cache)
    h = {x.degree: x.homology_dim for x in hs if x.homology_dim}
    k = {x.degree: x.homology_dim for x in ks if x.homology_dim}
    rows = {n: (h.get(n, 0), k.get(n, 0)) for n in sorted(set(h) | set(k))}
    mism = [n for n, (a, b) in rows.items() if a != b]
    return {"m": m, "d": d, "s": s, "t": t, "degrees": rows, "ok": not mism, "mismatch": mism}


def grid_keys(m, S, T, min_hairs=1):
    """All (s, t) with min_hairs <= sum s <= S and 0 <= t <= T."""
    out = []
    for s in itertools.product(range(S + 1), repeat=len(m)):
        if min_hairs <= sum(s) <= S:
            for t in range(T + 1):
                out.append((s, t))
    return sorted(out)


def _job(args):
    key, truncation, cache, verify = args
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BelowTheoremRange)
        block, slices = homology_of(key, truncation, cache, verify)
    euler(block, slices)
    ms = (time.perf_counter() - t0) * 1000.0
    return key, block.zero_discarded, slices, ms, block.below_range


@dataclass
class HomologyTable:
    blocks: dict = field(default_factory=dict)     # BlockKey -> list of HomologySlice
    zero_discarded: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def nonzero(self):
        out = {}
        for key, slices in self.blocks.items():
            for x in slices:
                if x.homology_dim:
                    out[(key.s, key.t, x.degree)] = x.homology_dim
        return out


def compute_table(m, d, S, T, kind=HAIRY, truncation=None, workers=1, cache=None,
                  verify_modular=False, min_hairs=None):
    """Homology of every block with sum(s) <= S, t <= T."""
    m = tuple(m)
    if min_hairs is None:
        min_hairs = 0 if kind == KOSZUL else 1
    below = _warn_range(m, d)
    jobs = [(BlockKey(m, d, s, t, kind), truncation, cache, verify_modular)
            for s, t in grid_keys(m, S, T, min_hairs)]
    table = HomologyTable()
    timings = {}
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    for key, zero, slices, ms, _ in sorted(results, key=lambda r: r[0]):
        table.blocks[key] = slices
        table.zero_discarded[key] = zero
        timings[key.slug()] = round(ms, 3)
    table.meta = {"below_theorem_range": below, "timings_ms": timings,
                  "codimension": d - max(m)}
    return table


def truncated_table(m, d, S, T, n, kind=KOSZUL_PI, cache=None):
    """Homology of the Koszul complex keeping generators with k <= n (or k_i <= n_i)."""
    if kind == HAIRY:
        raise InvalidInput("truncations apply to the Koszul complexes only")
    if isinstance(n, (list, tuple)):
        n = tuple(n)
        if len(n) != len(m) or min(n) < 0:
            raise InvalidInput("per-color bounds must match m and be >= 0")
    elif n < 0:
        raise InvalidInput("truncation bound must be >= 0")
    return compute_table(m, d, S, T, kind, truncation=n, cache=cache)


def cofree_extension(pi_dims, r, S, T):
    """Free graded-commutative algebra dims on a table {(s, t, degree): dim}.

    Odd classes are exterior, even classes polynomial; gradings add.  Only
    multidegrees with sum(s) <= S and t <= T are kept.
    """
    zero = (tuple([0] * r), 0, 0)
    series = {zero: 1}
    for (s, t, deg), dim in sorted(pi_dims.items()):
        if len(s) != r:
            raise InvalidInput("multidegree %r does not have %d colors" % (s, r))
        if sum(s) == 0 and t == 0:
            raise InvalidInput("a class of weight zero generates an infinite algebra")
        for _ in range(dim):
            new = dict(series)
            power = 1
            while True:
                grew = False
                for (u, ut, ud), c in series.items():
                    v = (tuple(a + power * b for a, b in zip(u, s)), ut + power * t, ud + power * deg)
                    if sum(v[0]) <= S and v[1] <= T:
                        new[v] = new.get(v, 0) + c
                        grew = True
                if deg % 2 or not grew:
                    break
                power += 1
            series = new
    return dict(sorted(series.items()))


def degree_zero_hair_bound(m, d):
    """Largest total hair count of a degree-0 tree class (tree degrees grow with s)."""
    step = min(d - mi - 2 for mi in m)
    if step <= 0:
        raise InvalidInput("codimension too small for a finite bound")
    return max(2, (d - 3) // step + 1)


def h0_total(m, d):
    """dim H_0 of the hairy complex over every block that can carry degree 0."""
    S = degree_zero_hair_bound(m, d)
    table = compute_table(m, d, S, S - 1)
    return sum(x.homology_dim for slices in table.blocks.values() for x in slices if x.degree == 0)


def genus_degree_violations(m, d, S, T):
    """Positive-genus generators of degree < 1 (expected: none in codim > 2)."""
    bad = []
    for s, t in grid_keys(m, S, T):
        for g in hairy.enumerate_block(m, d, s, t):
            _, genus, _ = hairy.gradings(g.graph(), len(m))
            if genus >= 1 and hairy.degree(g.graph(), d, m) < 1:
                bad.append((s, t, g.key))
    return bad
