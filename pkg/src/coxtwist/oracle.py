"""Brute-force models of small finite Coxeter groups.

These are deliberately naive: groups are enumerated element by element so they
can serve as ground truth for the table-driven code in :mod:`coxtwist.sphericity`.

Supported irreducible factors:

* ``A_n`` (n <= 6) as the symmetric group on ``n + 1`` points,
* ``B_n`` (n <= 4) as signed permutations of ``n`` letters,
* ``D_n`` (n = 4, 5) as even-signed permutations,
* ``I2(m)`` (m <= 12) as pairs ``(rotation, flip)``.

A signed permutation of ``{1..n}`` is stored as a permutation of ``2n`` points
where point ``i + n`` stands for ``-i``.  Elements of a reducible model are
tuples with one entry per factor.
"""

from collections import deque
from functools import lru_cache
from typing import NamedTuple

from .diagram import CoxeterDiagram
from .errors import DomainError, InvariantViolation
from .sphericity import IrreducibleType, factor_omega, recognize, spherical_subsets

LIMITS = {"A": 6, "B": 4, "D": 5}
MAX_DIHEDRAL = 12


# ---------------------------------------------------------------------------
# irreducible factors

class _PermFactor:
    """Permutation group given by generator tuples; ``a * b`` applies ``b`` first."""

    def __init__(self, gens):
        self.gens = tuple(gens)
        self.identity = tuple(range(len(self.gens[0])))

    def mul(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, j in enumerate(a):
            out[j] = i
        return tuple(out)


class _DihedralFactor:
    """Dihedral group of order ``2m`` on pairs ``(k, f)`` meaning ``r^k s^f``."""

    def __init__(self, m):
        self.m = m
        self.gens = ((0, 1), (1, 1))
        self.identity = (0, 0)

    def mul(self, a, b):
        k1, f1 = a
        k2, f2 = b
        k = (k1 - k2 if f1 else k1 + k2) % self.m
        return (k, f1 ^ f2)

    def inv(self, a):
        k, f = a
        return a if f else ((-k) % self.m, 0)


def _transposition(size, i, j):
    p = list(range(size))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def _signed_swap(n, i, j, negate=False):
    """Swap letters ``i`` and ``j`` of a signed permutation, optionally negating both."""
    p = list(range(2 * n))
    if negate:
        p[i], p[j + n], p[j], p[i + n] = j + n, i, i + n, j
    else:
        p[i], p[j], p[i + n], p[j + n] = j, i, j + n, i + n
    return tuple(p)


def _sign_flip(n, i):
    return _transposition(2 * n, i, i + n)


def _factor_group(t: IrreducibleType):
    n = t.rank
    if t.family == "A":
        return _PermFactor(_transposition(n + 1, i, i + 1) for i in range(n))
    if t.family == "B":
        gens = [_signed_swap(n, i, i + 1) for i in range(n - 1)]
        gens.append(_sign_flip(n, n - 1))
        return _PermFactor(gens)
    if t.family == "D":
        gens = [_signed_swap(n, i, i + 1) for i in range(n - 1)]
        gens.append(_signed_swap(n, n - 2, n - 1, negate=True))
        return _PermFactor(gens)
    if t.family == "I2":
        return _DihedralFactor(t.m)
    raise DomainError(f"no model for type {t}")


def supported(t: IrreducibleType) -> bool:
    if t.family in LIMITS:
        lo = 4 if t.family == "D" else 1
        return lo <= t.rank <= LIMITS[t.family]
    return t.family == "I2" and t.m <= MAX_DIHEDRAL


def classical_order(t: IrreducibleType) -> int:
    n = t.rank
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    if t.family == "A":
        return fact * (n + 1)
    if t.family == "B":
        return 2 ** n * fact
    if t.family == "D":
        return 2 ** (n - 1) * fact
    if t.family == "I2":
        return 2 * t.m
    raise DomainError(f"no order formula for {t}")


def positive_roots(t: IrreducibleType) -> int:
    n = t.rank
    return {"A": n * (n + 1) // 2, "B": n * n, "D": n * (n - 1), "I2": t.m}[t.family]


def _element_order(group, g):
    k, x = 1, g
    while x != group.identity:
        x = group.mul(x, g)
        k += 1
    return k


def _coxeter_label(t, i, j):
    """Order of ``s_i s_j`` in the classical numbering of type ``t``."""
    if t.family == "I2":
        return t.m
    n = t.rank
    if t.family == "D":
        adj = {(k, k + 1) for k in range(n - 2)} | {(n - 3, n - 1)}
    else:
        adj = {(k, k + 1) for k in range(n - 1)}
    i, j = min(i, j), max(i, j)
    if (i, j) not in adj:
        return 2
    if t.family == "B" and j == n - 1:
        return 4
    return 3


class FactorModel(NamedTuple):
    type: IrreducibleType
    group: object
    size: int
    longest: object
    longest_length: int


@lru_cache(maxsize=None)
def factor_model(t: IrreducibleType) -> FactorModel:
    """Enumerate the group of type ``t`` and find its longest element."""
    group = _factor_group(t)
    gens = group.gens
    for i, s in enumerate(gens):
        if group.mul(s, s) != group.identity or s == group.identity:
            raise InvariantViolation(f"{t}: generator {i} is not an involution")
        for j in range(i + 1, len(gens)):
            got = _element_order(group, group.mul(s, gens[j]))
            if got != _coxeter_label(t, i, j):
                raise InvariantViolation(f"{t}: o(s{i + 1}s{j + 1}) = {got}")
    dist = {group.identity: 0}
    queue = deque([group.identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = group.mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    if len(dist) != classical_order(t):
        raise InvariantViolation(f"{t}: enumerated {len(dist)} elements")
    top = max(dist.values())
    far = [g for g, d in dist.items() if d == top]
    if len(far) != 1:
        raise InvariantViolation(f"{t}: {len(far)} elements of maximal length")
    if top != positive_roots(t):
        raise InvariantViolation(f"{t}: longest element has length {top}")
    return FactorModel(t, group, len(dist), far[0], top)


# ---------------------------------------------------------------------------
# models of W_T

class FiniteModel:
    """A concrete copy of ``W_T`` for a spherical ``T`` of supported type.

    Attributes
    ----------
    factors : list of FactorModel
    generator : dict
        Diagram index of each member of ``T`` -> group element (a tuple with one
        entry per factor).
    order : int
        Group order, the product of the factor orders.
    """

    def __init__(self, D, T, factors, placements):
        self.diagram = D
        self.subset = T
        self.factors = factors
        ident = tuple(f.group.identity for f in factors)
        self.identity = ident
        self.generator = {}
        for k, (f, order) in enumerate(zip(factors, placements)):
            for pos, idx in enumerate(order):
                el = list(ident)
                el[k] = f.group.gens[pos]
                self.generator[idx] = tuple(el)
        self.order = 1
        for f in factors:
            self.order *= f.size
        self._check_relations()

    def mul(self, a, b):
        return tuple(f.group.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.group.inv(x) for f, x in zip(self.factors, a))

    def _check_relations(self):
        D = self.diagram
        idx = sorted(self.generator)
        for a in idx:
            for b in idx:
                if a >= b:
                    continue
                g = self.mul(self.generator[a], self.generator[b])
                k, x = 1, g
                while x != self.identity:
                    x = self.mul(x, g)
                    k += 1
                if k != D.orders[a][b]:
                    raise InvariantViolation(
                        f"model relation o({D.names[a]}{D.names[b]}) = {k}, "
                        f"diagram says {D.orders[a][b]}")


def build_model(D: CoxeterDiagram, T):
    """Model of ``W_T``, or ``None`` if some factor lies outside the supported families.

    Raises
    ------
    DomainError
        If ``T`` is not spherical.
    """
    T = D.mask(T)
    factors = recognize(D, T)
    if factors is None:
        raise DomainError(f"{set(D.members(T))} is not spherical")
    if not all(supported(f.type) for f in factors):
        return None
    return FiniteModel(D, T, [factor_model(f.type) for f in factors],
                       [f.order for f in factors])


def longest_element(M: FiniteModel):
    """The longest element, assembled from the longest element of each factor."""
    return tuple(f.longest for f in M.factors)


def conjugate_generators(M: FiniteModel, w) -> dict:
    """Map each generator index ``t`` to the generator equal to ``w t w^-1`` (or None)."""
    winv = M.inv(w)
    lookup = {g: i for i, g in M.generator.items()}
    out = {}
    for i, g in sorted(M.generator.items()):
        out[i] = lookup.get(M.mul(M.mul(w, g), winv))
    return out


class OmegaCheck(NamedTuple):
    subset: int
    status: str  # "pass", "fail" or "skipped"
    detail: str


def verify_omega(D: CoxeterDiagram) -> list:
    """Compare the table-driven ``omega_T`` with brute force for every spherical ``T``.

    Every non-empty spherical subset gets one entry; those with an unsupported
    factor are reported as skipped.
    """
    out = []
    for T, _ in spherical_subsets(D):
        if not T:
            continue
        M = build_model(D, T)
        if M is None:
            kinds = ", ".join(str(f.type) for f in recognize(D, T) if not supported(f.type))
            out.append(OmegaCheck(T, "skipped", f"unsupported family {kinds}"))
            continue
        brute = conjugate_generators(M, longest_element(M))
        table = {}
        for f in recognize(D, T):
            table.update(factor_omega(f))
        if brute == table:
            out.append(OmegaCheck(T, "pass", ""))
        else:
            bad = [D.names[i] for i in sorted(table) if brute.get(i) != table[i]]
            out.append(OmegaCheck(T, "fail", "mismatch at " + ",".join(bad)))
    return out


def is_diagram_automorphism(D: CoxeterDiagram, mapping: dict) -> bool:
    """True if the index map ``mapping`` preserves every order among its keys."""
    keys = list(mapping)
    return all(D.orders[a][b] == D.orders[mapping[a]][mapping[b]]
               for a in keys for b in keys)

