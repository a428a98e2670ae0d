"""Separating subsets, twist-rigid subsets, separators and separations.

Families of blocks are represented as tuples of int bitmasks sorted by
:func:`subset_key`; every function that takes a family also accepts any
iterable of masks or of name collections.

All notions here are defined for a connected generating set.  When the diagram
is disconnected each connected component is treated on its own: separating
subsets and twist-rigid subsets are computed inside each component, and a
family is a separation when its blocks inside each component form a separation
of that component.
"""

from collections import deque
from itertools import product
from typing import NamedTuple

from more_itertools import set_partitions

from .diagram import (CoxeterDiagram, bits, components, is_connected,
                      is_spherical_product, perp, popcount, submasks)
from .errors import CapacityError, DomainError, InvariantViolation

MAX_EXHAUSTIVE_RANK = 22
MAX_PARTITION_BLOCKS = 10


def subset_key(mask: int):
    """Sort key for subsets: the tuple of member indices."""
    return tuple(bits(mask))


def _sorted(masks):
    return tuple(sorted(set(masks), key=subset_key))


def as_family(D: CoxeterDiagram, F) -> tuple:
    """Normalize a family to a sorted tuple of distinct bitmasks."""
    return _sorted(D.mask(A) for A in F)


def _ambient(D, mask):
    """The connected component of ``S`` containing ``mask``, or None if it straddles."""
    for comp in components(D, D.full):
        if mask & comp == mask:
            return comp
    return None


# ---------------------------------------------------------------------------
# separating spherical-product subsets

def separates(D: CoxeterDiagram, U) -> bool:
    """True if ``S`` is connected and ``S - U`` has at least two components."""
    U = D.mask(U)
    return is_connected(D, D.full) and len(components(D, D.full & ~U)) >= 2


def _separates_in(D, S, U):
    return len(components(D, S & ~U)) >= 2


def separates_component(D: CoxeterDiagram, U) -> bool:
    """Like :func:`separates`, inside the connected component of ``S`` holding ``U``."""
    U = D.mask(U)
    S = _ambient(D, U) if U else None
    return S is not None and _separates_in(D, S, U)


def _check_rank(D):
    if D.rank > MAX_EXHAUSTIVE_RANK:
        raise CapacityError(
            f"rank {D.rank} exceeds the exhaustive subset guard "
            f"({MAX_EXHAUSTIVE_RANK}); raise separation.MAX_EXHAUSTIVE_RANK to force it")


def separating_spherical_products(D: CoxeterDiagram) -> tuple:
    """All spherical-product subsets that separate (their component of) ``S``.

    Exhaustive over subsets, so the rank is capped by :data:`MAX_EXHAUSTIVE_RANK`.
    """
    _check_rank(D)

    def compute():
        out = []
        for S in components(D, D.full):
            for U in _candidates(D, S):
                if U != S and _separates_in(D, S, U) and is_spherical_product(D, U):
                    out.append(U)
        return _sorted(out)

    return D.cached("seps", compute)


def _candidates(D, S):
    """Non-empty subsets of ``S`` that could be spherical products.

    Every spherical product lies in ``sigma | perp(sigma)`` for a spherical
    ``sigma``, so when those sets are small it is cheaper to walk their subsets
    than all of ``S``.
    """
    from .sphericity import spherical_subsets

    roots = set()
    for T, _ in spherical_subsets(D):
        if T:
            roots.add((T | perp(D, T)) & S)
    if sum(1 << popcount(M) for M in roots) >= 1 << popcount(S):
        return [U for U in submasks(S) if U]
    seen = set()
    for M in roots:
        for U in submasks(M):
            if U:
                seen.add(U)
    return sorted(seen)


def _seps_in(D, S):
    return tuple(U for U in separating_spherical_products(D) if U & S == U)


# ---------------------------------------------------------------------------
# twist-rigid subsets

def _splits(D, S, U, A):
    """True if ``A - U`` meets two or more components of ``S - U``."""
    rest = A & ~U
    if not rest:
        return False
    return len([X for X in components(D, S & ~U) if X & rest]) > 1


def is_twist_rigid_subset(D: CoxeterDiagram, A) -> bool:
    """``A`` is connected and no separating spherical-product subset splits it.

    A connected ``A`` counts as split by ``U`` when ``A - U`` meets at least two
    components of ``S - U``.
    """
    A = D.mask(A)
    if not is_connected(D, A):
        return False
    S = _ambient(D, A)
    return not any(_splits(D, S, U, A) for U in _seps_in(D, S))


def _maximal(masks):
    masks = sorted(set(masks), key=popcount, reverse=True)
    keep = []
    for m in masks:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return keep


def maximal_twist_rigid_subsets(D: CoxeterDiagram) -> tuple:
    """The maximal twist-rigid subsets, by refining ``{S}`` against every separator.

    Each separating ``U`` replaces a candidate ``A`` by the connected pieces of
    ``A & (X_i | U)`` over the components ``X_i`` of ``S - U``.  Pieces refined
    against ``U`` stay inside one ``X_i | U``, so after one pass every piece is
    twist-rigid and every twist-rigid set lies in some piece.
    """
    def compute():
        out = []
        for S in components(D, D.full):
            cands = [S]
            for U in _seps_in(D, S):
                sides = components(D, S & ~U)
                new = []
                for A in cands:
                    for X in sides:
                        new.extend(components(D, A & (X | U)))
                cands = _maximal(new)
            out.extend(cands)
        return _sorted(out)

    return D.cached("A0", compute)


def brute_force_maximal_twist_rigid(D: CoxeterDiagram) -> tuple:
    """Maximal twist-rigid subsets by checking every subset (small ranks only)."""
    _check_rank(D)
    rigid = [A for A in range(1, D.full + 1) if is_twist_rigid_subset(D, A)]
    return _sorted(_maximal(rigid))


# ---------------------------------------------------------------------------
# separators

def _check_blocks(D, S, F):
    """Conditions (1)-(3) for family ``F`` of a connected ``S``; returns a reason or None."""
    union = 0
    for A in F:
        union |= A
    if union != S:
        return "blocks do not cover S"
    A0 = [A for A in maximal_twist_rigid_subsets(D) if A & S == A]
    for A in F:
        if not is_connected(D, A):
            return f"block {set(D.members(A))} is not connected"
        inner = 0
        for R in A0:
            if R & A == R:
                inner |= R
        if inner != A:
            return f"block {set(D.members(A))} is not a union of maximal twist-rigid subsets"
    for R in A0:
        hits = sum(1 for A in F if R & A == R)
        if hits != 1:
            return f"maximal twist-rigid subset {set(D.members(R))} lies in {hits} blocks"
    return None


def _split_family(D, F):
    """Group blocks by connected component; None if some block straddles components."""
    parts = {S: [] for S in components(D, D.full)}
    for A in F:
        S = _ambient(D, A)
        if S is None:
            return None
        parts[S].append(A)
    return {S: tuple(v) for S, v in parts.items()}


def _side_map(D, S, U, F):
    """Component index of ``A - U`` for each block, or None if condition (iii) fails."""
    sides = components(D, S & ~U)
    out = {}
    for A in F:
        rest = A & ~U
        hit = [j for j, X in enumerate(sides) if X & rest]
        if len(hit) != 1:
            return None
        out[A] = hit[0]
    return out


def _maximal_steps(union, used, F):
    """Blocks ``C`` not in ``used`` whose ``union & C`` is inclusion-maximal."""
    rest = [(union & C, C) for C in F if C not in used]
    out = []
    for inter, C in rest:
        if not any(other != inter and inter & other == inter for other, _ in rest):
            out.append((inter, C))
    return out


def _chain_condition_holds(S_blocks, F, target):
    """Condition (v) for one side: every maximal chain covering ``target`` has a block containing it."""
    seen = set()
    queue = deque()
    for A in S_blocks:
        if A & target == target:
            continue
        state = frozenset([A])
        seen.add(state)
        queue.append((state, A))
    side = set(S_blocks)
    while queue:
        used, union = queue.popleft()
        for _, C in _maximal_steps(union, used, F):
            if C not in side or C & target == target:
                continue
            nxt = used | {C}
            if nxt in seen:
                continue
            seen.add(nxt)
            new_union = union | C
            if new_union & target == target:
                return False
            queue.append((nxt, new_union))
    return True


def _is_separator(D, S, U, F):
    key = ("sep", S, U, F)

    def compute():
        if not U or U & S != U or not is_spherical_product(D, U):
            return False
        if not _separates_in(D, S, U):
            return False
        side = _side_map(D, S, U, F)
        if side is None:
            return False
        if not any(A1 & A2 == U and side[A1] != side[A2]
                   for A1 in F for A2 in F if A1 < A2):
            return False
        for j in set(side.values()):
            blocks = [A for A in F if side[A] == j]
            closure = 0
            for A in blocks:
                closure |= A
            target = U & closure
            if target and not _chain_condition_holds(blocks, F, target):
                return False
        return True

    return D.cached(key, compute)


def is_separator(D: CoxeterDiagram, U, F) -> bool:
    """Check conditions (i)-(v) for ``U`` against the block family ``F``.

    Raises
    ------
    DomainError
        If ``F`` does not cover ``S`` by connected unions of maximal twist-rigid
        subsets with each of them in exactly one block.
    """
    U = D.mask(U)
    F = as_family(D, F)
    parts = _split_family(D, F)
    if parts is None:
        raise DomainError("a block straddles two components of S")
    for S, Fi in parts.items():
        reason = _check_blocks(D, S, Fi)
        if reason:
            raise DomainError(reason)
    S = _ambient(D, U) if U else None
    if S is None:
        return False
    return _is_separator(D, S, U, parts[S])


def separators(D: CoxeterDiagram, F) -> tuple:
    """All separators of ``F``, drawn from the separating spherical-product subsets."""
    F = as_family(D, F)
    return tuple(U for U in separating_spherical_products(D) if is_separator(D, U, F))


# ---------------------------------------------------------------------------
# separations

def _step_ok(D, S, F, union, U, C):
    """Condition (4) for one extension of a chain by block ``C`` across ``U``.

    ``U`` must be a separator, ``C - U`` must sit in a single component ``X_j``
    of ``S - U``, and the blocks already used must stay off ``X_j``.  The used
    blocks may be spread over several other components (this is what the
    induced separations with three or more sides need).
    """
    if not _is_separator(D, S, U, F):
        return False
    sides = components(D, S & ~U)
    left = {j for j, X in enumerate(sides) if X & union & ~U}
    right = [j for j, X in enumerate(sides) if X & C & ~U]
    if len(right) > 1:
        return False
    if right:
        return right[0] not in left
    return len(left) < len(sides)


def _is_separation_connected(D, S, F):
    if not F or _check_blocks(D, S, F) is not None:
        return False
    seen = set()
    queue = deque()
    for A in F:
        state = frozenset([A])
        seen.add(state)
        queue.append((state, A))
    while queue:
        used, union = queue.popleft()
        for U, C in _maximal_steps(union, used, F):
            if not _step_ok(D, S, F, union, U, C):
                return False
            nxt = used | {C}
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, union | C))
    return True


def is_separation(D: CoxeterDiagram, F) -> bool:
    """Check conditions (1)-(4), component by component when ``S`` is disconnected."""
    F = as_family(D, F)
    key = ("is_sep", F)

    def compute():
        parts = _split_family(D, F)
        if parts is None:
            return False
        return all(_is_separation_connected(D, S, Fi) for S, Fi in parts.items())

    return D.cached(key, compute)


def induced_separation(D: CoxeterDiagram, U) -> tuple:
    """The separation induced by a separating spherical-product subset ``U``.

    Blocks are ``Xbar_i``, the union of maximal twist-rigid subsets inside
    ``X_i | U`` but not inside ``U``, plus ``Ybar``, the union of those inside
    ``U`` when there are any.  Other components of a disconnected ``S`` are kept
    whole.

    A twist-rigid subset of ``U`` already covered by some ``Xbar_i`` is left
    out of ``Ybar``; otherwise it would sit in two blocks (this happens when
    the edges around ``U`` are all commuting).
    """
    U = D.mask(U)
    S = _ambient(D, U) if U else None
    if S is None or not _separates_in(D, S, U) or not is_spherical_product(D, U):
        raise DomainError("U must be a spherical-product subset that separates S")
    A0 = maximal_twist_rigid_subsets(D)
    blocks = []
    for X in components(D, S & ~U):
        Xbar = 0
        for A in A0:
            if A & (X | U) == A and A & U != A:
                Xbar |= A
        blocks.append(Xbar)
    Ybar = 0
    for A in A0:
        if A & U == A and not any(A & B == A for B in blocks):
            Ybar |= A
    if Ybar:
        blocks.append(Ybar)
    blocks.extend(C for C in components(D, D.full) if C != S)
    F = _sorted(blocks)
    if not is_separation(D, F):
        raise InvariantViolation(
            f"induced separation by {set(D.members(U))} fails the separation conditions")
    return F


def preceq(F1, F2) -> bool:
    """Every block of ``F1`` lies inside some block of ``F2`` (masks only)."""
    return all(any(A & B == A for B in F2) for A in F1)


def _separations_connected(D, S):
    A0 = [A for A in maximal_twist_rigid_subsets(D) if A & S == A]
    if len(A0) > MAX_PARTITION_BLOCKS:
        raise CapacityError(
            f"{len(A0)} maximal twist-rigid subsets exceed the partition guard "
            f"({MAX_PARTITION_BLOCKS})")
    found = set()
    for part in set_partitions(A0):
        blocks = []
        for cell in part:
            u = 0
            for A in cell:
                u |= A
            blocks.append(u)
        if len(set(blocks)) != len(blocks):
            continue
        if not all(is_connected(D, b) for b in blocks):
            continue
        F = _sorted(blocks)
        if _is_separation_connected(D, S, F):
            found.add(F)
    return found


def _minimal(fams):
    fams = sorted(fams, key=lambda F: [subset_key(A) for A in F])
    return [F for F in fams
            if not any(G != F and preceq(G, F) for G in fams)]


def all_separations(D: CoxeterDiagram) -> list:
    """Every separation of ``S``, enumerated through set partitions of the maximal twist-rigid subsets."""
    def compute():
        per = [_separations_connected(D, S) for S in components(D, D.full)]
        out = {_sorted(A for F in combo for A in F) for combo in product(*per)}
        return sorted(out, key=lambda F: [subset_key(A) for A in F])

    return D.cached("all_seps", compute)


def minimal_separations(D: CoxeterDiagram) -> list:
    """The ``preceq``-minimal separations, deterministically ordered.

    Raises
    ------
    CapacityError
        If some component has more maximal twist-rigid subsets than
        :data:`MAX_PARTITION_BLOCKS`.
    """
    def compute():
        per = [_minimal(_separations_connected(D, S)) for S in components(D, D.full)]
        out = {_sorted(A for F in combo for A in F) for combo in product(*per)}
        return sorted(out, key=lambda F: [subset_key(A) for A in F])

    return D.cached("min_seps", compute)


class OrderedChain(NamedTuple):
    sequence: tuple
    intersections: tuple


def ordering_chains(D: CoxeterDiagram, F, first=None, limit=None) -> list:
    """Orderings ``A_1, ..., A_n`` of ``F`` whose successive intersections are maximal.

    ``U_i = (A_1 | ... | A_i) & A_{i+1}`` must be inclusion-maximal among the
    intersections of the prefix with the blocks not yet used.  ``first`` pins the
    starting block; ``limit`` stops after that many chains.
    """
    F = as_family(D, F)
    starts = [D.mask(first)] if first is not None else list(F)
    out = []

    def walk(seq, used, union, inters):
        if limit is not None and len(out) >= limit:
            return
        if len(seq) == len(F):
            out.append(OrderedChain(tuple(seq), tuple(inters)))
            return
        for U, C in _maximal_steps(union, used, F):
            walk(seq + [C], used | {C}, union | C, inters + [U])

    for A in starts:
        if A not in F:
            raise DomainError("starting block is not in the family")
        walk([A], {A}, A, [])
    return out
