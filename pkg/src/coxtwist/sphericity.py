"""Finite-type recognition of standard subgroups and the longest-element automorphism.

Recognition runs on the Coxeter graph (bonds of order >= 3, infinity included),
so commuting pairs split a subset into irreducible factors, each of which is
matched against the list of connected finite Coxeter diagrams.  Each recognised
factor carries its generators in the classical (Bourbaki) order, which is what
:mod:`coxtwist.oracle` uses to build concrete models.

The involution ``omega_T`` induced on ``T`` by conjugation with the longest
element ``w_T`` comes from the classical table: reversal on ``A_n``, the swap of
the two short arms on ``D_n`` for odd ``n``, the non-trivial symmetry of
``E_6``, the swap on ``I_2(m)`` for odd ``m``, and the identity otherwise.
"""

from typing import NamedTuple

from .diagram import INF, CoxeterDiagram, bits, irreducible_components, lowest, popcount
from .errors import DomainError


class IrreducibleType(NamedTuple):
    """Finite irreducible Coxeter type.

    ``family`` is one of ``A B D E6 E7 E8 F4 H3 H4 I2``; ``m`` is only set for
    ``I2``.  Every rank-2 factor is reported as ``I2(m)`` (so ``A2`` is ``I2(3)``
    and ``B2`` is ``I2(4)``), and a single vertex is ``A1``.
    """

    family: str
    rank: int
    m: int = None

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.m})"
        if self.family in ("A", "B", "D"):
            return f"{self.family}{self.rank}"
        return self.family


class Factor(NamedTuple):
    """One irreducible factor: its type and generator indices in classical order."""

    type: IrreducibleType
    order: tuple

    @property
    def mask(self):
        m = 0
        for i in self.order:
            m |= 1 << i
        return m


class SphericalSubset(NamedTuple):
    subset: int
    maximal: bool


# ---------------------------------------------------------------------------
# recognition

def _path_from(D, comp, start):
    """Walk the Coxeter-graph path inside ``comp`` starting at an end vertex."""
    order = [start]
    prev, cur = -1, start
    while True:
        nxt = [j for j in bits(D.coxeter[cur] & comp) if j != prev]
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def _arm(D, comp, branch, first):
    arm = [first]
    prev, cur = branch, first
    while True:
        nxt = [j for j in bits(D.coxeter[cur] & comp) if j != prev]
        if not nxt:
            return arm
        prev, cur = cur, nxt[0]
        arm.append(cur)


def recognize_irreducible(D: CoxeterDiagram, comp: int):
    """Classify one Coxeter-graph component; ``None`` if ``W_comp`` is infinite."""
    return D.cached(("irr", comp), lambda: _recognize(D, comp))


def _recognize(D, comp):
    n = popcount(comp)
    if n == 0:
        return None
    if n == 1:
        return Factor(IrreducibleType("A", 1), (lowest(comp),))
    members = list(bits(comp))
    degree = {}
    n_edges = 0
    for i in members:
        nb = D.coxeter[i] & comp
        degree[i] = popcount(nb)
        for j in bits(nb):
            if j > i:
                if D.orders[i][j] == INF:
                    return None
                n_edges += 1
    if n_edges != n - 1:
        return None  # contains a cycle
    if n == 2:
        i, j = members
        return Factor(IrreducibleType("I2", 2, D.orders[i][j]), (i, j))
    if max(degree.values()) > 3:
        return None
    branches = [i for i in members if degree[i] == 3]
    if len(branches) > 1:
        return None
    if branches:
        return _recognize_branched(D, comp, branches[0])
    return _recognize_path(D, comp, [i for i in members if degree[i] == 1])


def _recognize_branched(D, comp, b):
    for i in bits(comp):
        for j in bits(D.coxeter[i] & comp):
            if D.orders[i][j] != 3:
                return None
    arms = sorted((_arm(D, comp, b, f) for f in bits(D.coxeter[b] & comp)),
                  key=lambda a: (len(a), a))
    lengths = tuple(len(a) for a in arms)
    n = popcount(comp)
    if lengths[:2] == (1, 1):
        # D_n: long arm from its far end to the branch, then the two leaves
        long_arm = arms[2]
        order = tuple(reversed(long_arm)) + (b, arms[0][0], arms[1][0])
        return Factor(IrreducibleType("D", n), order)
    if lengths[:2] == (1, 2) and lengths[2] in (2, 3, 4):
        short, mid, long_arm = arms
        # s1 - s3 - s4 - s5 - ..., with s2 hanging off s4
        order = (mid[1], short[0], mid[0], b) + tuple(long_arm)
        family = {2: "E6", 3: "E7", 4: "E8"}[lengths[2]]
        return Factor(IrreducibleType(family, n), order)
    return None


def _recognize_path(D, comp, ends):
    path = _path_from(D, comp, min(ends))
    n = len(path)
    labels = [D.orders[path[k]][path[k + 1]] for k in range(n - 1)]
    odd = [k for k, m in enumerate(labels) if m != 3]
    if not odd:
        return Factor(IrreducibleType("A", n), tuple(path))
    if len(odd) > 1:
        return None
    k = odd[0]
    m = labels[k]
    if k == 0:  # put the special bond at the end the families expect
        path.reverse()
        labels.reverse()
        k = n - 2
    if m == 4:
        if k == n - 2:
            return Factor(IrreducibleType("B", n), tuple(path))
        if n == 4 and k == 1:
            return Factor(IrreducibleType("F4", 4), tuple(path))
        return None
    if m == 5 and k == n - 2 and n in (3, 4):
        # H_n is written with the 5 bond first
        return Factor(IrreducibleType(f"H{n}", n), tuple(reversed(path)))
    return None


def recognize(D: CoxeterDiagram, T):
    """Irreducible factors of ``W_T`` with their types, or ``None`` if infinite.

    Factors come back ordered by smallest member index; the empty set gives ``[]``.
    """
    T = D.mask(T)

    def compute():
        out = []
        for comp in irreducible_components(D, T):
            f = recognize_irreducible(D, comp)
            if f is None:
                return None
            out.append(f)
        return out

    return D.cached(("rec", T), compute)


def is_spherical(D: CoxeterDiagram, T) -> bool:
    return recognize(D, T) is not None


# ---------------------------------------------------------------------------
# longest element

def _omega_positions(t: IrreducibleType):
    """Permutation of classical positions ``0..rank-1`` induced by ``-w_0``."""
    n = t.rank
    ident = list(range(n))
    if t.family == "A":
        return ident[::-1]
    if t.family == "D" and n % 2 == 1:
        return ident[:-2] + [n - 1, n - 2]
    if t.family == "E6":
        # s1<->s6, s3<->s5 in classical numbering; positions are 0-based
        return [5, 1, 4, 3, 2, 0]
    if t.family == "I2" and t.m % 2 == 1:
        return [1, 0]
    return ident


def factor_omega(f: Factor) -> dict:
    pos = _omega_positions(f.type)
    return {f.order[k]: f.order[pos[k]] for k in range(len(f.order))}


def omega_map(D: CoxeterDiagram, T) -> dict:
    """``omega_T`` as an index-to-index dict on the members of ``T``."""
    T = D.mask(T)

    def compute():
        factors = recognize(D, T)
        if factors is None:
            raise DomainError(f"{set(D.members(T))} is not spherical")
        out = {}
        for f in factors:
            out.update(factor_omega(f))
        return out

    return D.cached(("omega", T), compute)


def omega_image(D: CoxeterDiagram, T, subset) -> int:
    """Image of ``subset`` (contained in ``T``) under ``omega_T``."""
    w = omega_map(D, T)
    out = 0
    for i in bits(D.mask(subset)):
        out |= 1 << w[i]
    return out


def longest_automorphism(D: CoxeterDiagram, T) -> dict:
    """The involution of ``T`` given by conjugation with ``w_T``, as names.

    Raises
    ------
    DomainError
        If ``T`` is not spherical.
    """
    w = omega_map(D, T)
    return {D.names[i]: D.names[j] for i, j in sorted(w.items())}


# ---------------------------------------------------------------------------
# enumeration

def spherical_subsets(D: CoxeterDiagram, bound=None) -> list:
    """Every spherical subset (size at most ``bound``), each flagged if maximal.

    Maximality is with respect to all spherical subsets, regardless of ``bound``.
    Sets are produced in increasing bitmask order.
    """
    n = D.rank
    found = []

    def extend(T, top, common):
        found.append(T)
        if bound is not None and popcount(T) >= bound:
            return
        for k in range(top + 1, n):
            if not (common >> k) & 1:
                continue
            T2 = T | (1 << k)
            if is_spherical(D, T2):
                extend(T2, k, common & D.nerve[k])

    extend(0, -1, D.full)
    found.sort()
    out = []
    for T in found:
        maximal = True
        cand = D.full & ~T
        for i in bits(T):
            cand &= D.nerve[i]
        for k in bits(cand):
            if is_spherical(D, T | (1 << k)):
                maximal = False
                break
        out.append(SphericalSubset(T, maximal))
    return out


def maximal_spherical_subsets(D: CoxeterDiagram) -> list:
    return [s.subset for s in spherical_subsets(D) if s.maximal]
