"""Untangle chains: conjugating subsets one longest element at a time.

``U ~_T U'`` holds when ``T`` is spherical and contains both sigma-parts,
``omega_T`` carries ``U_sigma`` onto ``U'_sigma``, the nu-parts agree and every
generator of that nu-part commutes with all of ``T``.  Chains of such steps
witness conjugacy of ``U`` and ``U'``; closed chains at ``U`` give permutations
of ``U`` induced by conjugation.
"""

from collections import deque
from typing import NamedTuple

from .diagram import CoxeterDiagram, bits, perp, sigma_nu_split
from .separation import subset_key
from .sphericity import is_spherical, omega_image, omega_map, spherical_subsets


class UntanglePath(NamedTuple):
    """A chain ``U_1 ~ U_2 ~ ... ~ U_q``.

    Attributes
    ----------
    nodes : tuple of int
        ``U_1 .. U_q``.
    links : tuple of int
        Spherical ``T_1 .. T_{q-1}``.
    induced : dict
        Index map ``U_1 -> U_q`` given by conjugating with ``w_{T_{q-1}} ... w_{T_1}``.
    """

    nodes: tuple
    links: tuple
    induced: dict

    def to_json(self, D: CoxeterDiagram):
        return {
            "nodes": [list(D.members(U)) for U in self.nodes],
            "links": [list(D.members(T)) for T in self.links],
            "induced": {D.names[i]: D.names[j] for i, j in sorted(self.induced.items())},
        }


def untangle_step(D: CoxeterDiagram, U, U2, T) -> bool:
    """True iff ``U ~_T U2``."""
    U, U2, T = D.mask(U), D.mask(U2), D.mask(T)
    if not U or not U2 or not is_spherical(D, T):
        return False
    a, b = sigma_nu_split(D, U), sigma_nu_split(D, U2)
    if (a.sigma | b.sigma) & ~T or a.nu != b.nu:
        return False
    if a.nu & ~perp(D, T):
        return False
    return omega_image(D, T, a.sigma) == b.sigma


def _moves(D, V, spherical):
    """Neighbours ``(W, T)`` of ``V`` in increasing order of ``(W, T)``."""
    split = sigma_nu_split(D, V)
    room = perp(D, split.nu) if split.nu else D.full
    out = []
    for T in spherical:
        if split.sigma & ~T or T & ~room:
            continue
        W = omega_image(D, T, split.sigma) | split.nu
        if untangle_step(D, V, W, T):
            out.append((W, T))
    out.sort(key=lambda p: (subset_key(p[0]), subset_key(p[1])))
    return out


def _spherical(D):
    return D.cached("spherical_nonempty", lambda: [s.subset for s in spherical_subsets(D) if s.subset])


def _push(perm, D, T):
    w = omega_map(D, T)
    return {a: w.get(x, x) for a, x in perm.items()}


def untangle_reachable(D: CoxeterDiagram, U, U2, maxlen=None):
    """Shortest chain from ``U`` to ``U2``, or None.

    Ties between shortest chains are broken lexicographically on the sorted
    member indices of the nodes, then of the links.  ``maxlen`` bounds the
    number of links; without it the search runs until the reachable set is
    exhausted (it is finite).
    """
    U, U2 = D.mask(U), D.mask(U2)
    if not U or not U2:
        return None
    ident = {i: i for i in bits(U)}
    if U == U2:
        return UntanglePath((U,), (), ident)
    if sigma_nu_split(D, U).nu != sigma_nu_split(D, U2).nu:
        return None
    spherical = _spherical(D)
    parent = {U: None}
    queue = deque([(U, 0)])
    while queue:
        V, d = queue.popleft()
        if maxlen is not None and d >= maxlen:
            continue
        for W, T in _moves(D, V, spherical):
            if W in parent:
                continue
            parent[W] = (V, T)
            if W == U2:
                return _path(D, parent, U, W)
            queue.append((W, d + 1))
    return None


def _path(D, parent, U, W):
    nodes, links = [W], []
    while parent[nodes[-1]] is not None:
        V, T = parent[nodes[-1]]
        nodes.append(V)
        links.append(T)
    nodes.reverse()
    links.reverse()
    perm = {i: i for i in bits(U)}
    for T in links:
        perm = _push(perm, D, T)
    return UntanglePath(tuple(nodes), tuple(links), perm)


class LoopPermutation(NamedTuple):
    """A permutation of ``U`` (index map) with a closed chain inducing it."""

    perm: dict
    path: UntanglePath


def loop_automorphisms(D: CoxeterDiagram, U, maxlen=None) -> list:
    """Permutations of ``U`` induced by closed chains at ``U``.

    States ``(node, accumulated permutation)`` are explored breadth first, so
    each permutation comes with a shortest closed chain.  The identity (empty
    chain) is always first; the rest are sorted by their image tuples.  Since
    closed chains compose, the result is already a group.
    """
    U = D.mask(U)
    members = tuple(bits(U))
    ident = {i: i for i in members}
    if not U:
        return [LoopPermutation(ident, UntanglePath((U,), (), ident))]
    spherical = _spherical(D)
    key = lambda V, perm: (V, tuple(perm[i] for i in members))
    start = key(U, ident)
    parent = {start: None}
    found = {}
    queue = deque([(U, ident, 0)])
    while queue:
        V, perm, d = queue.popleft()
        if maxlen is not None and d >= maxlen:
            continue
        for W, T in _moves(D, V, spherical):
            p2 = _push(perm, D, T)
            k = key(W, p2)
            if k in parent:
                continue
            parent[k] = (key(V, perm), T)
            if W == U and k[1] not in found:
                found[k[1]] = _loop_path(parent, k, p2)
            queue.append((W, p2, d + 1))
    out = [LoopPermutation(ident, UntanglePath((U,), (), ident))]
    for img in sorted(found):
        if img != start[1]:
            out.append(LoopPermutation(found[img].induced, found[img]))
    return out


def _loop_path(parent, k, perm):
    nodes, links = [k[0]], []
    while parent[k] is not None:
        k, T = parent[k]
        nodes.append(k[0])
        links.append(T)
    nodes.reverse()
    links.reverse()
    return UntanglePath(tuple(nodes), tuple(links), dict(perm))


def automorphism_count(D: CoxeterDiagram, U) -> int:
    """Number of label-preserving permutations of the sub-diagram on ``U`` (brute force)."""
    from itertools import permutations

    idx = list(bits(D.mask(U)))
    count = 0
    for p in permutations(idx):
        m = dict(zip(idx, p))
        if all(D.orders[a][b] == D.orders[m[a]][m[b]] for a in idx for b in idx):
            count += 1
    return count
