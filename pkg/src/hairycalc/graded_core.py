"""Sign bookkeeping for graded orientation sets.

An orientation set is an ordered list of elements, each carrying an integer
degree.  Reordering it costs the Koszul sign of the permutation; reversing an
edge costs a sign depending on the edge kind.
"""

from dataclasses import dataclass
from typing import Hashable, Sequence

NON_COLORED_EDGE = "non-colored-edge"
COLORED_EDGE = "colored-edge"
INTERNAL_VERTEX = "internal-vertex"
EXTERNAL_VERTEX = "external-vertex"
COLORED_COMPONENT = "colored-component"

KINDS = (NON_COLORED_EDGE, COLORED_EDGE, INTERNAL_VERTEX, EXTERNAL_VERTEX, COLORED_COMPONENT)


class InvalidInput(ValueError):
    """Raised when an operation receives arguments outside its domain."""


@dataclass(frozen=True)
class OrientationElement:
    kind: str
    id: Hashable
    color: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput("unknown element kind %r" % (self.kind,))
        colored = self.kind in (COLORED_EDGE, EXTERNAL_VERTEX, COLORED_COMPONENT)
        if colored and self.color is None:
            raise InvalidInput("%s needs a color" % self.kind)

    def degree(self, d: int, m: Sequence[int], colored_edge_degree: str = "second") -> int:
        """Degree of the element for ambient dimension d and codimension data m.

        Colors are 1-based.  ``colored_edge_degree`` selects ``"first"``
        (m_i - 1) or ``"second"`` (-1) for colored edges.
        """
        if self.kind == NON_COLORED_EDGE:
            return d - 1
        if self.kind == INTERNAL_VERTEX:
            return -d
        mi = _color_m(self.color, m)
        if self.kind == COLORED_EDGE:
            if colored_edge_degree == "first":
                return mi - 1
            if colored_edge_degree == "second":
                return -1
            raise InvalidInput("colored_edge_degree must be 'first' or 'second'")
        return -mi


def _color_m(color, m):
    if color is None or not 1 <= color <= len(m):
        raise InvalidInput("color %r out of range for r=%d" % (color, len(m)))
    return m[color - 1]


@dataclass(frozen=True)
class OrientationData:
    """Ordered orientation set plus edge directions (edge id -> (source, target))."""

    order: tuple
    directions: tuple = ()

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise InvalidInput("orientation order lists an element twice")

    def reorder(self, new_order: Sequence, d: int, m: Sequence[int], colored_edge_degree="second"):
        """Rewrite the total order; returns (new OrientationData, sign)."""
        pos = {e: i for i, e in enumerate(self.order)}
        if len(new_order) != len(self.order) or set(new_order) != set(pos):
            raise InvalidInput("new order is not a permutation of the orientation set")
        perm = [pos[e] for e in new_order]
        degs = [e.degree(d, m, colored_edge_degree) for e in self.order]
        return OrientationData(tuple(new_order), self.directions), koszul_sign(perm, degs)


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of moving elements into a new order.

    ``permutation[i]`` is the old position of the element placed at new
    position i.  Only pairs of odd-degree elements that change relative order
    contribute a factor -1.
    """
    n = len(degrees)
    if len(permutation) != n:
        raise InvalidInput("permutation and degree list have different lengths")
    if sorted(permutation) != list(range(n)):
        raise InvalidInput("not a permutation of range(%d)" % n)
    odd = [p for p in permutation if degrees[p] % 2]
    inversions = 0
    for i in range(len(odd)):
        oi = odd[i]
        for j in range(i + 1, len(odd)):
            if oi > odd[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def parity_sign(parities: Sequence[int]) -> int:
    """Koszul sign of sorting a sequence of keys, given as (key, parity) pairs.

    Accepts a list of (key, parity); returns the sign of the stable sort by key.
    """
    inv = 0
    n = len(parities)
    for i in range(n):
        ki, pi = parities[i]
        if not pi:
            continue
        for j in range(i + 1, n):
            kj, pj = parities[j]
            if pj and kj < ki:
                inv += 1
    return -1 if inv % 2 else 1


def edge_flip_sign(kind: str, d: int, m: Sequence[int], color: int | None = None) -> int:
    """Sign relating an edge to its reverse: (-1)^d or (-1)^{m_i}."""
    if kind == NON_COLORED_EDGE:
        return -1 if d % 2 else 1
    if kind == COLORED_EDGE:
        return -1 if _color_m(color, m) % 2 else 1
    raise InvalidInput("edge_flip_sign is undefined for %r" % (kind,))
