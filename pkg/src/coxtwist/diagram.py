"""Coxeter diagrams as labelled graphs, and the subset operations built on them.

A diagram stores the symmetric order matrix ``m(s, t)`` of a Coxeter system of
finite rank.  Infinite orders are the sentinel :data:`INF`.  Subsets of
generators are plain ``int`` bitmasks over the diagram's generator order, so
every subset routine takes and returns ints; :meth:`CoxeterDiagram.mask` and
:meth:`CoxeterDiagram.members` convert to and from generator names.

Two graphs live on the same vertex set and are easy to confuse:

* the *nerve*, with an edge whenever ``m(s, t) < inf`` (label-2 edges included).
  Connectivity, separation and twist-rigidity always use the nerve.
* the *Coxeter graph*, with an edge whenever ``m(s, t) >= 3`` (``inf`` included).
  Its components are the irreducible factors of ``W_T``.
"""

import json
import math
from typing import Iterable, NamedTuple

from .errors import ParseError

INF = math.inf


# ---------------------------------------------------------------------------
# bit helpers

def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def submasks(mask: int):
    """Yield every submask of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# ---------------------------------------------------------------------------

class CoxeterDiagram:
    """An immutable Coxeter matrix with named generators.

    Parameters
    ----------
    names : iterable of str
        Generator labels, pairwise distinct and non-empty.
    orders : square nested sequence
        Symmetric matrix with 1 on the diagonal and entries in ``{2, 3, ...}``
        or :data:`INF` off the diagonal.
    """

    __slots__ = ("names", "orders", "rank", "full", "index",
                 "nerve", "coxeter", "commuting", "_cache", "_hash")

    def __init__(self, names: Iterable[str], orders):
        names = tuple(names)
        n = len(names)
        for s in names:
            if not isinstance(s, str) or not s:
                raise ValueError(f"generator names must be non-empty strings, got {s!r}")
        if len(set(names)) != n:
            raise ValueError("generator names must be distinct")
        rows = tuple(tuple(_check_order(v) for v in row) for row in orders)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("order matrix must be rank x rank")
        for i in range(n):
            if rows[i][i] != 1:
                raise ValueError(f"diagonal entry for {names[i]!r} must be 1")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"asymmetric orders for {names[i]!r}, {names[j]!r}")
                if rows[i][j] < 2:
                    raise ValueError(f"order of {names[i]!r}{names[j]!r} must be >= 2")
        self.names = names
        self.orders = rows
        self.rank = n
        self.full = (1 << n) - 1
        self.index = {s: i for i, s in enumerate(names)}
        nerve, coxeter, commuting = [], [], []
        for i in range(n):
            a = b = c = 0
            for j in range(n):
                if i == j:
                    continue
                m = rows[i][j]
                if m != INF:
                    a |= 1 << j
                if m >= 3:
                    b |= 1 << j
                if m == 2:
                    c |= 1 << j
            nerve.append(a)
            coxeter.append(b)
            commuting.append(c)
        self.nerve = tuple(nerve)
        self.coxeter = tuple(coxeter)
        self.commuting = tuple(commuting)
        self._cache = {}
        self._hash = hash((names, rows))

    @classmethod
    def from_edges(cls, names, edges=()):
        """Build a diagram from ``(s, t, m)`` triples; unlisted pairs get ``INF``."""
        names = tuple(names)
        idx = {s: i for i, s in enumerate(names)}
        n = len(names)
        rows = [[INF] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = 1
        for s, t, m in edges:
            i, j = idx[s], idx[t]
            if i == j:
                raise ValueError(f"self-edge on {s!r}")
            rows[i][j] = rows[j][i] = m
        return cls(names, rows)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, CoxeterDiagram):
            return NotImplemented
        return self.names == other.names and self.orders == other.orders

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"CoxeterDiagram(rank={self.rank}, names={list(self.names)})"

    # -- access -----------------------------------------------------------

    def order(self, s, t):
        """Order of ``st``; ``s`` and ``t`` may be names or indices."""
        i = s if isinstance(s, int) else self.index[s]
        j = t if isinstance(t, int) else self.index[t]
        return self.orders[i][j]

    def mask(self, subset) -> int:
        """Bitmask of ``subset`` (an int mask, or an iterable of names)."""
        if isinstance(subset, int):
            if subset < 0 or subset & ~self.full:
                raise ValueError(f"mask {subset:#x} is not a subset of the generators")
            return subset
        m = 0
        for s in subset:
            try:
                m |= 1 << self.index[s]
            except KeyError:
                raise ValueError(f"unknown generator {s!r}") from None
        return m

    def members(self, mask: int) -> tuple:
        """Generator names in ``mask``, in diagram order."""
        return tuple(self.names[i] for i in bits(mask))

    def edges(self):
        """Yield ``(s, t, m)`` for every finite-order pair, in index order."""
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                m = self.orders[i][j]
                if m != INF:
                    yield self.names[i], self.names[j], m

    def restrict(self, subset) -> "CoxeterDiagram":
        """The diagram induced on ``subset`` (generator order preserved)."""
        idx = list(bits(self.mask(subset)))
        return CoxeterDiagram([self.names[i] for i in idx],
                              [[self.orders[i][j] for j in idx] for i in idx])

    def rename(self, mapping) -> "CoxeterDiagram":
        return CoxeterDiagram([mapping.get(s, s) for s in self.names], self.orders)

    def relabel(self, pairs, label) -> "CoxeterDiagram":
        """Copy with the finite order of each name pair in ``pairs`` set to ``label``."""
        rows = [list(r) for r in self.orders]
        for s, t in pairs:
            i, j = self.index[s], self.index[t]
            rows[i][j] = rows[j][i] = label
        return CoxeterDiagram(self.names, rows)

    def cached(self, key, compute):
        """Memoize ``compute()`` on this (immutable) diagram under ``key``."""
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = compute()
            return value


def _check_order(v):
    if v == INF:
        return INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"orders must be integers or INF, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# connectivity

def _components(adj, mask):
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = frontier = seed
        while frontier:
            i = lowest(frontier)
            frontier &= frontier - 1
            new = adj[i] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def components(D: CoxeterDiagram, T) -> list:
    """Connected components of ``T`` in the nerve (finite-order bonds).

    Components come back ordered by their smallest member index.
    """
    return _components(D.nerve, D.mask(T))


def is_connected(D: CoxeterDiagram, T) -> bool:
    """True for a non-empty ``T`` whose nerve is connected."""
    T = D.mask(T)
    return T != 0 and len(_components(D.nerve, T)) == 1


def irreducible_components(D: CoxeterDiagram, T) -> list:
    """Irreducible factors of ``W_T``: components of ``T`` in the Coxeter graph."""
    return _components(D.coxeter, D.mask(T))


def perp(D: CoxeterDiagram, T) -> int:
    """Generators commuting (order exactly 2) with every member of ``T``."""
    out = D.full
    for i in bits(D.mask(T)):
        out &= D.commuting[i]
    return out


class SigmaNuSplit(NamedTuple):
    sigma: int
    nu: int


def sigma_nu_split(D: CoxeterDiagram, U) -> SigmaNuSplit:
    """Split ``U`` into the union of its finite and of its infinite irreducible factors."""
    from .sphericity import recognize_irreducible

    U = D.mask(U)

    def compute():
        sigma = nu = 0
        for comp in irreducible_components(D, U):
            if recognize_irreducible(D, comp) is None:
                nu |= comp
            else:
                sigma |= comp
        return SigmaNuSplit(sigma, nu)

    return D.cached(("split", U), compute)


def spherical_product_witness(D: CoxeterDiagram, U):
    """A spherical ``sigma`` with ``U`` inside ``sigma | perp(sigma)``, or None.

    If ``U`` has finite irreducible factors their union is the witness.  Otherwise a
    witness can never meet ``U``, so a single outside generator commuting with all
    of ``U`` is enough, and the lowest-index one is returned.
    """
    U = D.mask(U)
    if not U:
        return None
    sigma, _ = sigma_nu_split(D, U)
    if sigma:
        return sigma
    outside = perp(D, U) & ~U
    if outside:
        return outside & -outside
    return None


def is_spherical_product(D: CoxeterDiagram, U) -> bool:
    U = D.mask(U)
    return D.cached(("sp", U), lambda: spherical_product_witness(D, U) is not None)


# ---------------------------------------------------------------------------
# JSON document format

_ALLOWED_KEYS = {"generators", "orders", "infinite", "note", "fixture"}


def parse_diagram(text) -> CoxeterDiagram:
    """Parse the JSON diagram document.

    ``{"generators": [names], "orders": [[s, t, m], ...]}`` with integer ``m >= 2``;
    pairs not listed are infinite.  An optional ``"infinite": [[s, t], ...]`` list
    is accepted and must not contradict ``orders``.  ``"note"`` (a string) and
    ``"fixture"`` (an object) are carried but ignored.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if not text.strip():
        raise ParseError("empty diagram document")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("diagram document must be a JSON object")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise ParseError(f"unknown key {sorted(unknown)[0]!r}")
    if "generators" not in doc:
        raise ParseError("missing key 'generators'")
    gens = doc["generators"]
    if not isinstance(gens, list):
        raise ParseError("'generators' must be a list")
    seen = set()
    for g in gens:
        if not isinstance(g, str) or not g:
            raise ParseError(f"bad generator name {g!r}")
        if g in seen:
            raise ParseError(f"duplicate generator name {g!r}")
        seen.add(g)
    if "note" in doc and not isinstance(doc["note"], str):
        raise ParseError("'note' must be a string")

    finite = {}
    for entry in doc.get("orders", []):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError(f"order entry must be [name, name, m], got {entry!r}")
        s, t, m = entry
        _known(s, seen)
        _known(t, seen)
        if s == t:
            raise ParseError(f"self-edge on {s!r}")
        if isinstance(m, bool) or not isinstance(m, int):
            raise ParseError(f"order for {s!r},{t!r} must be an integer, got {m!r}")
        if m < 2:
            raise ParseError(f"order {m} < 2 for {s!r},{t!r}")
        key = frozenset((s, t))
        if key in finite and finite[key] != m:
            raise ParseError(f"asymmetric entries for {s!r},{t!r}: {finite[key]} vs {m}")
        finite[key] = m
    for entry in doc.get("infinite", []):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError(f"infinite entry must be [name, name], got {entry!r}")
        s, t = entry
        _known(s, seen)
        _known(t, seen)
        if s == t:
            raise ParseError(f"self-edge on {s!r}")
        if frozenset((s, t)) in finite:
            raise ParseError(f"pair {s!r},{t!r} listed as both finite and infinite")
    edges = [(*sorted(k, key=gens.index), m) for k, m in finite.items()]
    return CoxeterDiagram.from_edges(gens, edges)


def _known(name, seen):
    if not isinstance(name, str) or name not in seen:
        raise ParseError(f"unknown generator name {name!r}")


def diagram_to_doc(D: CoxeterDiagram, note=None) -> dict:
    doc = {"generators": list(D.names),
           "orders": [[s, t, m] for s, t, m in D.edges()]}
    if note is not None:
        doc["note"] = note
    return doc


def dump_diagram(D: CoxeterDiagram, note=None) -> str:
    return json.dumps(diagram_to_doc(D, note), indent=1, sort_keys=True) + "\n"
