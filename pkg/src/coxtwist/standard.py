"""The standard separation and the type(I) / type(II) split of its blocks."""

from typing import NamedTuple

from .diagram import CoxeterDiagram, components
from .errors import InvariantViolation
from .separation import (_sorted, is_separation, maximal_twist_rigid_subsets,
                         minimal_separations, separators)


class StandardSeparation(NamedTuple):
    """Result of :func:`standard_separation`.

    Attributes
    ----------
    family : tuple of int
        Blocks of the standard separation, sorted.
    type1, type2 : tuple of int
        Blocks that are, respectively are not, a block of every minimal separation.
    ubar : tuple of int
        Subsets that are separators of every minimal separation.
    closure_pairs : tuple of (int, int)
        Pairs of maximal twist-rigid subsets that only became equivalent through
        transitive closure.  Empty whenever the defining relation is already an
        equivalence, which is what the theory predicts.
    """

    family: tuple
    type1: tuple
    type2: tuple
    ubar: tuple
    closure_pairs: tuple


def ubar(D: CoxeterDiagram) -> tuple:
    """Subsets that are separators of every minimal separation."""
    def compute():
        common = None
        for F in minimal_separations(D):
            here = set(separators(D, F))
            common = here if common is None else common & here
        return _sorted(common or ())

    return D.cached("ubar", compute)


def _related(minimal, A, B):
    both = A | B
    return any(both & blk == both for F in minimal for blk in F)


def _separated_by(D, U, A, B):
    """True if ``A - U`` and ``B - U`` are non-empty and in different components of ``S - U``."""
    ra, rb = A & ~U, B & ~U
    if not ra or not rb:
        return False
    sides = components(D, D.full & ~U)
    hit_a = {j for j, X in enumerate(sides) if X & ra}
    hit_b = {j for j, X in enumerate(sides) if X & rb}
    return not (hit_a & hit_b)


def related_by_ubar(D: CoxeterDiagram, A, B) -> bool:
    """The alternative phrasing: no common separator separates ``A`` from ``B``."""
    A, B = D.mask(A), D.mask(B)
    return not any(_separated_by(D, U, A, B) for U in ubar(D))


def standard_separation(D: CoxeterDiagram, check=True) -> StandardSeparation:
    """Group the maximal twist-rigid subsets into the standard separation.

    Two maximal twist-rigid subsets are related when a block of some minimal
    separation contains both; blocks are unions of the equivalence classes of
    the transitive closure.  With ``check`` the result is verified to be a
    separation and the type(I) blocks are recomputed directly from the minimal
    separations; a mismatch raises :class:`InvariantViolation`.
    """
    def compute():
        A0 = list(maximal_twist_rigid_subsets(D))
        minimal = minimal_separations(D)
        parent = list(range(len(A0)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        direct = set()
        for i in range(len(A0)):
            for j in range(i + 1, len(A0)):
                if _related(minimal, A0[i], A0[j]):
                    direct.add((i, j))
                    parent[find(j)] = find(i)
        classes = {}
        for i in range(len(A0)):
            classes.setdefault(find(i), []).append(i)
        closure = []
        for members in classes.values():
            for x in members:
                for y in members:
                    if x < y and (x, y) not in direct:
                        closure.append((A0[x], A0[y]))
        blocks = []
        for members in classes.values():
            u = 0
            for i in members:
                u |= A0[i]
            blocks.append(u)
        family = _sorted(blocks)
        type1 = tuple(A for A in family if all(A in F for F in minimal))
        type2 = tuple(A for A in family if A not in type1)
        return StandardSeparation(family, type1, type2, ubar(D), tuple(closure))

    result = D.cached("standard", compute)
    if check and D.rank:
        if not is_separation(D, result.family):
            raise InvariantViolation("the standard separation fails the separation conditions")
        minimal = minimal_separations(D)
        common = set(minimal[0]).intersection(*minimal[1:]) if minimal else set()
        if set(result.type1) != common:
            raise InvariantViolation("type(I) blocks disagree with the blocks shared by all minimal separations")
    return result


def phrasing_disagreements(D: CoxeterDiagram) -> list:
    """Pairs of maximal twist-rigid subsets on which the two phrasings of the relation differ."""
    A0 = maximal_twist_rigid_subsets(D)
    minimal = minimal_separations(D)
    out = []
    for i, A in enumerate(A0):
        for B in A0[i + 1:]:
            if _related(minimal, A, B) != related_by_ubar(D, A, B):
                out.append((A, B))
    return out
