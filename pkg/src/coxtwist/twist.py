"""Diagram twists, twist orbits and the bounded compatibility searches.

An elementary twist across a separating spherical-product subset ``U`` picks a
side ``Y`` (a union of components of ``S - U``, with ``X`` the rest) and replaces
each ``y`` in ``Y`` by a fresh generator ``y'``.  Bonds inside ``X | U`` and
inside ``Y`` are kept, and ``o(y', u) = o(y, pi^-1(u))`` where ``pi`` is the
permutation of ``U`` induced by conjugation: ``omega`` of ``U_sigma`` on
``U_sigma`` and the identity on ``U_nu``.

Verdicts are only ever ``YES`` (with a replayable witness) or ``UNKNOWN``.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx

from .canon import canonical_labelling, certificate_bytes, diagram_matrix, order_code
from .diagram import (INF, CoxeterDiagram, bits, components, perp, sigma_nu_split)
from .errors import CapacityError, DomainError
from .separation import _ambient, _separates_in, is_separation, separating_spherical_products
from .diagram import is_spherical_product
from .sphericity import omega_map
from .standard import standard_separation

YES = "YES"
UNKNOWN = "UNKNOWN"
MAX_STATES = 20000


# ---------------------------------------------------------------------------
# moves

@dataclass(frozen=True)
class TwistMove:
    """One twist, described by generator names so it can be replayed.

    ``pi`` maps each member of ``U`` to its image; it is stored as a sorted
    tuple of pairs to keep the move hashable.
    """

    U: tuple
    sigma: tuple
    X: tuple
    Y: tuple
    pi: tuple = field(default=())

    @property
    def pi_map(self):
        return dict(self.pi)

    def is_trivial(self):
        return all(a == b for a, b in self.pi)

    def to_json(self):
        return {"U": list(self.U), "sigma": list(self.sigma), "X": list(self.X),
                "Y": list(self.Y), "pi": {a: b for a, b in self.pi}}

    @classmethod
    def from_json(cls, doc):
        return cls(tuple(doc["U"]), tuple(doc["sigma"]), tuple(doc["X"]),
                   tuple(doc["Y"]), tuple(sorted(doc["pi"].items())))


def elementary_move(D: CoxeterDiagram, U, Y, sigma=None) -> TwistMove:
    """The elementary twist across ``U`` moving side ``Y``.

    ``sigma`` defaults to ``U_sigma``; when ``U`` has no finite factor a single
    outside generator commuting with ``U`` is used and the induced permutation is
    the identity.  ``sigma`` may also be given explicitly as a spherical subset
    of ``U_sigma | perp(U)`` containing ``U_sigma``.
    """
    U, Y = D.mask(U), D.mask(Y)
    split = sigma_nu_split(D, U)
    if sigma is None:
        if split.sigma:
            sigma = split.sigma
        else:
            outside = perp(D, U) & ~U
            if not outside:
                raise DomainError("U is not a spherical-product subset")
            sigma = outside & -outside
    else:
        sigma = D.mask(sigma)
        if sigma & U != split.sigma:
            raise DomainError("sigma must meet U exactly in U_sigma")
        if U & ~sigma & ~perp(D, sigma):
            raise DomainError("U is not contained in sigma | perp(sigma)")
    S = _ambient(D, U)
    if S is None:
        raise DomainError("U is not connected to a single component")
    X = D.full & ~U & ~Y
    pi = {i: i for i in bits(U)}
    if split.sigma:
        pi.update(omega_map(D, sigma) if sigma == split.sigma
                  else {i: j for i, j in omega_map(D, sigma).items() if i in pi})
    return TwistMove(D.members(U), D.members(sigma), D.members(X), D.members(Y),
                     tuple(sorted((D.names[i], D.names[j]) for i, j in pi.items())))


def general_move(D: CoxeterDiagram, U, Y, pi) -> TwistMove:
    """A twist driven by a caller-supplied permutation ``pi`` of ``U`` (names to names).

    ``pi`` must be an automorphism of the sub-diagram on ``U`` that preserves
    ``U_sigma``; whether some group element realises it is not checked.
    """
    U, Y = D.mask(U), D.mask(Y)
    split = sigma_nu_split(D, U)
    X = D.full & ~U & ~Y
    pairs = tuple(sorted((str(a), str(b)) for a, b in pi.items()))
    move = TwistMove(D.members(U), D.members(split.sigma), D.members(X), D.members(Y), pairs)
    _validate(D, move)
    idx = {D.index[a]: D.index[b] for a, b in pairs}
    if any((i in bits(split.sigma)) != (j in bits(split.sigma)) for i, j in idx.items()):
        raise DomainError("pi must preserve U_sigma")
    return move


def _validate(D, M):
    """Check a move against ``D``; returns index-level data or raises DomainError."""
    try:
        U, X, Y = D.mask(M.U), D.mask(M.X), D.mask(M.Y)
    except ValueError as exc:
        raise DomainError(f"move refers to {exc}") from None
    if U & X or U & Y or X & Y or (U | X | Y) != D.full:
        raise DomainError("X, U and Y must partition S")
    if not X or not Y:
        raise DomainError("both sides X and Y must be non-empty")
    for y in bits(Y):
        if D.nerve[y] & X:
            raise DomainError("X and Y are joined by a finite bond")
    if not is_spherical_product(D, U):
        raise DomainError("U is not a spherical-product subset")
    S = _ambient(D, U)
    if S is None or not _separates_in(D, S, U):
        raise DomainError("U does not separate S")
    pi = {}
    for a, b in M.pi:
        if a not in D.index or b not in D.index:
            raise DomainError(f"pi mentions unknown generator {a!r} or {b!r}")
        pi[D.index[a]] = D.index[b]
    if set(pi) != set(bits(U)) or set(pi.values()) != set(bits(U)):
        raise DomainError("pi must be a permutation of U")
    for i in pi:
        for j in pi:
            if D.orders[i][j] != D.orders[pi[i]][pi[j]]:
                raise DomainError("pi does not preserve the diagram on U")
    return U, X, Y, pi


def _prime(name, taken):
    new = name + "'"
    while new in taken:
        new += "'"
    return new


class TwistResult(NamedTuple):
    """The twisted diagram and where each old generator went."""

    diagram: CoxeterDiagram
    rename: dict  # old name -> new name (identity off Y)
    move: TwistMove


def apply_twist(D: CoxeterDiagram, M: TwistMove) -> TwistResult:
    """Apply a twist; generators of ``Y`` come back primed.

    Raises
    ------
    DomainError
        If the move does not fit ``D``; the message names the failed clause.
    """
    U, X, Y, pi = _validate(D, M)
    inv = {j: i for i, j in pi.items()}
    taken = set(D.names)
    rename = {}
    for s in D.names:
        if D.mask([s]) & Y:
            rename[s] = _prime(s, taken)
            taken.add(rename[s])
        else:
            rename[s] = s
    n = D.rank
    rows = [list(r) for r in D.orders]
    for y in bits(Y):
        for u in bits(U):
            rows[y][u] = rows[u][y] = D.orders[y][inv[u]]
        for x in bits(X):
            rows[y][x] = rows[x][y] = INF
    new = CoxeterDiagram([rename[s] for s in D.names], [rows[i] for i in range(n)])
    return TwistResult(new, rename, M)


def inverse_move(result: TwistResult) -> TwistMove:
    """The move on the twisted diagram that undoes ``result`` up to renaming."""
    M = result.move
    r = result.rename
    inv_pi = tuple(sorted((b, a) for a, b in M.pi))
    return TwistMove(M.U, M.sigma, M.X, tuple(r[y] for y in M.Y), inv_pi)


def preserves_family(D: CoxeterDiagram, M: TwistMove, F) -> bool:
    """Every block lies in ``X | U`` or in ``Y | U``."""
    U, X, Y = D.mask(M.U), D.mask(M.X), D.mask(M.Y)
    return all(A & (X | U) == A or A & (Y | U) == A for A in (D.mask(B) for B in F))


def image_of(D: CoxeterDiagram, result: TwistResult, A, through_pi=True) -> int:
    """Image of subset ``A`` in the twisted diagram.

    Blocks inside ``X | U`` stay put.  Otherwise ``Y`` goes to ``Y'`` and, with
    ``through_pi``, ``U`` is moved by ``pi``; without it, generators of ``U`` are
    tracked by name.
    """
    A = D.mask(A)
    M = result.move
    X, U = D.mask(M.X), D.mask(M.U)
    new = result.diagram
    if A & (X | U) == A:
        return new.mask(D.members(A))
    pi = M.pi_map if through_pi else {}
    names = []
    for s in D.members(A):
        if s in pi:
            names.append(pi[s])
        else:
            names.append(result.rename[s])
    return new.mask(names)


def induced_family(D: CoxeterDiagram, result: TwistResult, F, check=True) -> tuple:
    """Carry a preserved family over to the twisted diagram."""
    F = [D.mask(A) for A in F]
    if not preserves_family(D, result.move, F):
        raise DomainError("the move does not preserve the family")
    from .separation import _sorted
    out = _sorted(image_of(D, result, A) for A in F)
    if check and F and is_separation(D, F) and not is_separation(result.diagram, out):
        from .errors import InvariantViolation
        raise InvariantViolation("the induced family is not a separation of the twisted diagram")
    return out


def elementary_moves(D: CoxeterDiagram, include_trivial=False) -> list:
    """Every elementary twist of ``D``, in a fixed order.

    For each separating spherical-product ``U`` every split of the components of
    ``S - U`` into two non-empty sides is generated once (the first component is
    always kept in ``X``).  Moves with identity ``pi`` only rename generators and
    are skipped unless ``include_trivial``.
    """
    out = []
    for U in separating_spherical_products(D):
        S = _ambient(D, U)
        comps = components(D, S & ~U)
        rest = comps[1:]
        for pick in range(1, 1 << len(rest)):
            Y = 0
            for k, C in enumerate(rest):
                if pick >> k & 1:
                    Y |= C
            M = elementary_move(D, U, Y)
            if include_trivial or not M.is_trivial():
                out.append(M)
    return out


# ---------------------------------------------------------------------------
# canonical forms

class CanonicalForm(NamedTuple):
    certificate: bytes


def canonical_form(D: CoxeterDiagram) -> CanonicalForm:
    """Renaming-invariant certificate of the labelled diagram."""
    def compute():
        _, matrix = diagram_matrix(D)
        cert, _ = canonical_labelling(matrix)
        return CanonicalForm(certificate_bytes(cert))

    return D.cached("canon", compute)


def _augmented(D, base, blocks):
    """Structure on ``base`` plus one extra coloured vertex per block (membership edges)."""
    idx, matrix = diagram_matrix(D, base)
    k = len(idx)
    rows = [r + [0] * len(blocks) for r in matrix]
    for bi, B in enumerate(blocks):
        row = []
        for i in idx:
            row.append(-1 if (B >> i) & 1 else -2)
        for r, val in zip(rows, row):
            r[k + bi] = val
        rows.append(row + [-3 if bj != bi else 1 for bj in range(len(blocks))])
    colors = [0] * k + [1] * len(blocks)
    return idx, rows, colors


def _augmented_form(D, base, blocks):
    idx, rows, colors = _augmented(D, base, blocks)
    cert, order = canonical_labelling(rows, colors)
    return certificate_bytes(cert), idx, order


def isomorphism(D1: CoxeterDiagram, D2: CoxeterDiagram, sub1=None, sub2=None,
                blocks1=(), blocks2=()):
    """A label-preserving map (names to names) from ``D1[sub1]`` onto ``D2[sub2]``, or None.

    Optional block lists must be carried onto each other as sets.
    """
    sub1 = D1.full if sub1 is None else D1.mask(sub1)
    sub2 = D2.full if sub2 is None else D2.mask(sub2)
    c1, idx1, o1 = _augmented_form(D1, sub1, [D1.mask(B) for B in blocks1])
    c2, idx2, o2 = _augmented_form(D2, sub2, [D2.mask(B) for B in blocks2])
    if c1 != c2:
        return None
    k = len(idx1)
    out = {}
    for a, b in zip(o1, o2):
        if a < k:
            out[D1.names[idx1[a]]] = D2.names[idx2[b]]
    return out


# ---------------------------------------------------------------------------
# orbit search

class OrbitEntry(NamedTuple):
    form: CanonicalForm
    diagram: CoxeterDiagram
    path: tuple  # TwistMoves, each in the names of the diagram it applies to
    tracked: tuple  # evolved tracked subsets (masks in ``diagram``)


def _state_key(D, tracked, preserve_count):
    if not tracked:
        return canonical_form(D).certificate
    blocks = list(tracked)
    # tag the tracked subsets beyond the preserved family by repeating them,
    # so they can't be confused with preserved blocks
    cert, _, _ = _augmented_form(D, D.full, blocks + blocks[preserve_count:])
    return cert


def twist_orbit(D: CoxeterDiagram, depth: int, preserve=None, track=(),
                max_states=None) -> list:
    """Breadth-first search over elementary twists, up to canonical isomorphism.

    Parameters
    ----------
    depth : int
        Maximum number of moves.
    preserve : iterable of subsets, optional
        Only moves preserving this family (as it evolves) are taken.
    track : iterable of subsets
        Further subsets carried along through every move (by generator identity).
    max_states : int, optional
        Guard on the number of distinct states (default :data:`MAX_STATES`).

    Returns
    -------
    list of OrbitEntry
        One per distinct state, in discovery order; the first is ``D`` itself.

    Raises
    ------
    CapacityError
        When the guard trips; ``partial`` holds the entries found so far.
    """
    if depth < 0:
        raise DomainError("depth must be non-negative")
    limit = MAX_STATES if max_states is None else max_states
    preserve = tuple(D.mask(A) for A in (preserve or ()))
    track = tuple(D.mask(A) for A in track)
    start = OrbitEntry(canonical_form(D), D, (), preserve + track)
    seen = {_state_key(D, start.tracked, len(preserve))}
    out = [start]
    queue = deque([(start, 0)])
    while queue:
        entry, d = queue.popleft()
        if d == depth:
            continue
        cur = entry.diagram
        fam = entry.tracked[:len(preserve)]
        for M in elementary_moves(cur):
            if preserve and not preserves_family(cur, M, fam):
                continue
            res = apply_twist(cur, M)
            new_fam = tuple(image_of(cur, res, A) for A in fam)
            new_track = tuple(image_of(cur, res, A, through_pi=False)
                              for A in entry.tracked[len(preserve):])
            tracked = new_fam + new_track
            key = _state_key(res.diagram, tracked, len(preserve))
            if key in seen:
                continue
            seen.add(key)
            nxt = OrbitEntry(canonical_form(res.diagram), res.diagram, entry.path + (M,), tracked)
            out.append(nxt)
            if len(out) > limit:
                raise CapacityError(f"twist orbit exceeded {limit} states", partial=out)
            queue.append((nxt, d + 1))
    return out


def replay(D: CoxeterDiagram, path) -> CoxeterDiagram:
    """Apply a witness path of moves and return the final diagram."""
    for M in path:
        D = apply_twist(D, M).diagram
    return D


# ---------------------------------------------------------------------------
# verdicts

class Verdict(NamedTuple):
    status: str
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.status == YES


def twist_equivalent(D1: CoxeterDiagram, D2: CoxeterDiagram, depth: int,
                     max_states=None) -> Verdict:
    """``YES`` with a move path and a final renaming if ``D2`` is reachable from ``D1``."""
    if D1.rank != D2.rank:
        return Verdict(UNKNOWN, reason="ranks differ")
    target = canonical_form(D2)
    for entry in twist_orbit(D1, depth, max_states=max_states):
        if entry.form == target:
            iso = isomorphism(entry.diagram, D2)
            return Verdict(YES, {"path": entry.path, "isomorphism": iso})
    return Verdict(UNKNOWN, reason=f"not reached within depth {depth}")


def attachments(D: CoxeterDiagram, family, A) -> list:
    """Non-empty intersections of block ``A`` with the other blocks of ``family``."""
    A = D.mask(A)
    out = sorted({A & B for B in family if B != A and A & B})
    return out


def type2_compatible(D1: CoxeterDiagram, A, D2: CoxeterDiagram, B, depth: int,
                     max_states=None) -> Verdict:
    """Search for twists of ``D1`` fixing the rest of its standard separation that carry ``A`` onto ``B``.

    ``A`` and ``B`` must be type(II) blocks.  A reachable state counts as a match
    when the sub-diagram on the evolved ``A``, together with its intersections
    with the other (evolved) blocks, is isomorphic to ``D2[B]`` with its own
    intersections.
    """
    A, B = D1.mask(A), D2.mask(B)
    st1, st2 = standard_separation(D1), standard_separation(D2)
    if A not in st1.type2 or B not in st2.type2:
        raise DomainError("both blocks must be type(II) blocks of their standard separations")
    if bin(A).count("1") != bin(B).count("1"):
        return Verdict(UNKNOWN, reason="blocks differ in size")
    others = tuple(C for C in st1.family if C != A)
    att2 = attachments(D2, st2.family, B)
    for entry in twist_orbit(D1, depth, preserve=others, track=(A,), max_states=max_states):
        cur = entry.diagram
        fam = entry.tracked[:len(others)]
        A_now = entry.tracked[-1]
        att1 = sorted({A_now & C for C in fam if A_now & C})
        iso = isomorphism(cur, D2, A_now, B, att1, att2)
        if iso is not None:
            return Verdict(YES, {"path": entry.path, "isomorphism": iso})
    return Verdict(UNKNOWN, reason=f"no match within depth {depth}")


def _perfect_matching(left, right, edges):
    if len(left) != len(right):
        return None
    if not left:
        return {}
    G = nx.Graph()
    G.add_nodes_from(("L", x) for x in left)
    G.add_nodes_from(("R", y) for y in right)
    G.add_edges_from((("L", x), ("R", y)) for x, y in edges)
    match = nx.bipartite.hopcroft_karp_matching(G, top_nodes=[("L", x) for x in left])
    pairs = {k[1]: v[1] for k, v in match.items() if k[0] == "L"}
    return pairs if len(pairs) == len(left) else None


def type12_compatible(D1: CoxeterDiagram, D2: CoxeterDiagram, depth: int,
                      max_states=None) -> Verdict:
    """Match type(I) blocks by isomorphism and type(II) blocks by :func:`type2_compatible`.

    ``YES`` needs a perfect matching on both kinds; the witness lists the pairs
    (as name lists) and, for type(II) pairs, the twist paths.
    """
    st1, st2 = standard_separation(D1), standard_separation(D2)
    if len(st1.type1) != len(st2.type1) or len(st1.type2) != len(st2.type2):
        return Verdict(UNKNOWN, reason="type(I)/type(II) counts differ")
    edges1 = []
    for A in st1.type1:
        for B in st2.type1:
            if isomorphism(D1, D2, A, B, attachments(D1, st1.family, A),
                           attachments(D2, st2.family, B)) is not None:
                edges1.append((A, B))
    m1 = _perfect_matching(st1.type1, st2.type1, edges1)
    if m1 is None:
        return Verdict(UNKNOWN, reason="no consistent matching of type(I) blocks")
    edges2, paths = [], {}
    for A in st1.type2:
        for B in st2.type2:
            v = type2_compatible(D1, A, D2, B, depth, max_states=max_states)
            if v:
                edges2.append((A, B))
                paths[(A, B)] = v.witness
    m2 = _perfect_matching(st1.type2, st2.type2, edges2)
    if m2 is None:
        return Verdict(UNKNOWN, reason="no matching of type(II) blocks within depth")
    witness = {
        "type1": [(D1.members(A), D2.members(B)) for A, B in sorted(m1.items())],
        "type2": [(D1.members(A), D2.members(B), paths[(A, B)]) for A, B in sorted(m2.items())],
    }
    return Verdict(YES, witness)


__all__ = ["TwistMove", "TwistResult", "CanonicalForm", "Verdict", "YES", "UNKNOWN",
           "elementary_move", "general_move", "apply_twist", "inverse_move",
           "preserves_family", "induced_family", "image_of", "elementary_moves",
           "canonical_form", "isomorphism", "twist_orbit", "replay",
           "twist_equivalent", "type2_compatible", "type12_compatible", "attachments",
           "order_code"]
