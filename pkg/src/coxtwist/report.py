"""The analysis report behind ``coxtwist analyze`` and its JSON/DOT renderings."""

import json
import time
from dataclasses import dataclass, field

from .diagram import INF, CoxeterDiagram, components
from .separation import (maximal_twist_rigid_subsets, minimal_separations,
                         separating_spherical_products)
from .standard import standard_separation

SCHEMA = 1


def encode_order(m):
    return "inf" if m == INF else m


def decode_order(m):
    return INF if m == "inf" else m


@dataclass
class AnalysisReport:
    """Everything ``analyze`` prints, with subsets as name lists in generator order."""

    generators: list
    edges: list  # [s, t, m] for finite m
    components: list
    separating: list
    maximal_twist_rigid: list
    minimal_separations: list
    blocks: list  # {"members": [...], "type": "I" | "II"}
    ubar: list
    closure_pairs: list
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {
            "schema": SCHEMA,
            "diagram": {"generators": self.generators, "rank": len(self.generators),
                        "edges": [[s, t, encode_order(m)] for s, t, m in self.edges],
                        "components": self.components},
            "separating_spherical_products": self.separating,
            "maximal_twist_rigid": self.maximal_twist_rigid,
            "minimal_separations": self.minimal_separations,
            "standard_separation": {"blocks": self.blocks, "ubar": self.ubar,
                                    "closure_pairs": self.closure_pairs},
        }
        if self.timing:
            doc["timing"] = self.timing
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, doc):
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
        d, st = doc["diagram"], doc["standard_separation"]
        return cls(d["generators"], [[s, t, decode_order(m)] for s, t, m in d["edges"]],
                   d["components"], doc["separating_spherical_products"],
                   doc["maximal_twist_rigid"], doc["minimal_separations"], st["blocks"],
                   st["ubar"], st["closure_pairs"], doc.get("timing", {}))


def analyze(D: CoxeterDiagram, timing=False) -> AnalysisReport:
    """Run the separation pipeline on ``D``.

    Stages are timed only when asked, so default reports are byte-for-byte
    reproducible.
    """
    names = lambda m: list(D.members(m))
    clock = {}

    def stage(key, fn):
        t0 = time.perf_counter()
        out = fn()
        clock[key] = round(time.perf_counter() - t0, 4)
        return out

    seps = stage("separating", lambda: separating_spherical_products(D))
    A0 = stage("twist_rigid", lambda: maximal_twist_rigid_subsets(D))
    minimal = stage("minimal_separations", lambda: minimal_separations(D))
    st = stage("standard", lambda: standard_separation(D))
    blocks = [{"members": names(A), "type": "I" if A in st.type1 else "II"} for A in st.family]
    return AnalysisReport(
        list(D.names), [list(e) for e in D.edges()],
        [names(C) for C in components(D, D.full)],
        [names(U) for U in seps], [names(A) for A in A0],
        [[names(A) for A in F] for F in minimal], blocks,
        [names(U) for U in st.ubar],
        [[names(a), names(b)] for a, b in st.closure_pairs],
        clock if timing else {})


def _q(s):
    return '"' + s.replace('"', '\\"') + '"'


def to_dot(D: CoxeterDiagram, family=(), tags=None) -> str:
    """DOT text of the nerve with labels as edge attributes and blocks as clusters.

    Infinite pairs are omitted.  A generator shared by several blocks is listed
    in each cluster; Graphviz draws it once, in the first.
    """
    lines = ["graph coxeter {", "  node [shape=circle];"]
    for k, A in enumerate(family):
        tag = f" (type {tags[k]})" if tags else ""
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="block {k + 1}{tag}";')
        for s in D.members(D.mask(A)):
            lines.append(f"    {_q(s)};")
        lines.append("  }")
    for s in D.names:
        lines.append(f"  {_q(s)};")
    for s, t, m in D.edges():
        lines.append(f'  {_q(s)} -- {_q(t)} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
