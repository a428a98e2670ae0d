"""Canonical labelling of edge-labelled complete graphs.

A structure is an ``n x n`` matrix of integer labels plus an integer colour per
vertex.  Its certificate is the lexicographically smallest relabelled
``(colours, matrix)`` over all leaves of an individualisation-refinement search,
so two structures share a certificate exactly when they are isomorphic.
Automorphisms found along the way prune branches that would only repeat work.
"""

from itertools import permutations

from .diagram import INF, CoxeterDiagram, bits

_INF_CODE = 0


def order_code(m):
    return _INF_CODE if m == INF else m


def diagram_matrix(D: CoxeterDiagram, subset=None):
    idx = list(bits(D.full if subset is None else D.mask(subset)))
    return idx, [[order_code(D.orders[i][j]) for j in idx] for i in idx]


def _rank(keys):
    table = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _refine(matrix, colors):
    """Colour refinement to the coarsest equitable partition (canonical ranks)."""
    n = len(colors)
    cells = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted((matrix[v][w], colors[w]) for w in range(n) if w != v)))
               for v in range(n)]
        new = _rank(sig)
        k = len(set(new))
        colors = new
        if k == cells:
            return colors
        cells = k


def _individualize(colors, v):
    return _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])


def _target_cell(colors):
    counts = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    best = min((c for c, k in counts.items() if k > 1), key=lambda c: (counts[c], c))
    return [v for v, c in enumerate(colors) if c == best]


def _leaf(matrix, vcolors, colors):
    n = len(colors)
    order = [0] * n
    for v, c in enumerate(colors):
        order[c] = v
    cert = (tuple(vcolors[v] for v in order),
            tuple(tuple(matrix[a][b] for b in order) for a in order))
    return cert, tuple(order)


def canonical_labelling(matrix, vcolors=None):
    """Return ``(certificate, order)`` where ``order[i]`` is the vertex placed at position ``i``."""
    n = len(matrix)
    if vcolors is None:
        vcolors = [0] * n
    if n == 0:
        return ((), ()), ()
    best = [None, None]
    autos = []

    def orbit_reps(cell, prefix):
        parent = {v: v for v in cell}

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for g in autos:
            if all(g[p] == p for p in prefix):
                for v in cell:
                    w = g[v]
                    if w in parent:
                        a, b = find(v), find(w)
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        return [v for v in cell if find(v) == v]

    def search(colors, prefix):
        if len(set(colors)) == n:
            cert, order = _leaf(matrix, vcolors, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            elif cert == best[0]:
                # same relabelled structure: best[1][i] <-> order[i] is an automorphism
                g = [0] * n
                for a, b in zip(order, best[1]):
                    g[a] = b
                autos.append(g)
            return
        cell = _target_cell(colors)
        for v in cell:
            if v not in orbit_reps(cell, prefix):
                continue
            search(_refine(matrix, _individualize(colors, v)), prefix + [v])

    search(_refine(matrix, _rank(vcolors)), [])
    return best[0], best[1]


def certificate_bytes(cert) -> bytes:
    vcolors, matrix = cert
    rows = ";".join(",".join(map(str, r)) for r in matrix)
    return f"{len(vcolors)}|{','.join(map(str, vcolors))}|{rows}".encode()


def brute_force_isomorphism(m1, m2, c1=None, c2=None):
    """A vertex map from structure 1 onto structure 2, or None (small sizes only)."""
    n = len(m1)
    if n != len(m2):
        return None
    c1 = c1 or [0] * n
    c2 = c2 or [0] * n
    for perm in permutations(range(n)):
        if all(c1[i] == c2[perm[i]] for i in range(n)) and all(
                m1[i][j] == m2[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return perm
    return None
