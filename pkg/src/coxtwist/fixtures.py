"""Bundled example diagrams and their embedded checklists.

Each fixture file is an ordinary diagram document with an extra ``"fixture"``
object: ``name``, ``free_labels`` (pairs whose finite order is arbitrary) and
``checklist``, a list of facts the diagram is expected to exhibit.  An item
tagged ``"labels": "default"`` holds only for the stored labels, and
``min_free_label`` (default 2) is the smallest value the free orders may take
without changing the shape of the example.  Items marked ``"conflict": true``
record an expected fact that the implementation does not reproduce; they
are skipped by default so the rest of the list stays meaningful.
"""

import json
from importlib import resources
from typing import NamedTuple

from .diagram import CoxeterDiagram, components, parse_diagram, sigma_nu_split
from .separation import (induced_separation, is_separation, is_separator,
                         maximal_twist_rigid_subsets, minimal_separations,
                         separating_spherical_products)
from .sphericity import maximal_spherical_subsets, spherical_subsets
from .standard import standard_separation, ubar


class Fixture(NamedTuple):
    name: str
    diagram: CoxeterDiagram
    free_labels: tuple
    checklist: tuple
    note: str
    min_free_label: int = 2
    free_label: object = None


def fixture_names() -> list:
    root = resources.files("coxtwist") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name) -> str:
    return str(resources.files("coxtwist") / "fixtures" / f"{name}.json")


def load_fixture(name, free_label=None) -> Fixture:
    """Load a bundled fixture; ``free_label`` overrides every free finite order."""
    text = (resources.files("coxtwist") / "fixtures" / f"{name}.json").read_text()
    doc = json.loads(text)
    D = parse_diagram(text)
    meta = doc.get("fixture", {})
    free = tuple(tuple(p) for p in meta.get("free_labels", []))
    floor = meta.get("min_free_label", 2)
    if free_label is not None and free:
        if free_label < floor:
            raise ValueError(f"{name}: free labels must be at least {floor}")
        D = D.relabel(free, free_label)
    return Fixture(meta.get("name", name), D, free, tuple(meta.get("checklist", [])),
                   doc.get("note", ""), floor, free_label)


# ---------------------------------------------------------------------------
# checklist evaluation

def _set(D, blocks):
    return {D.mask(b) for b in blocks}


def _fam(D, F):
    return frozenset(D.mask(b) for b in F)


def _names(D, masks):
    return sorted(sorted(D.members(m)) for m in masks)


def evaluate(D: CoxeterDiagram, item: dict):
    """Return ``(ok, observed)`` for one checklist item."""
    kind, args, want = item["check"], item.get("args", {}), item.get("expect")
    if kind == "separating":
        got = set(separating_spherical_products(D))
        return got == _set(D, want), _names(D, got)
    if kind == "separating_includes":
        got = set(separating_spherical_products(D))
        return _set(D, want) <= got, _names(D, got)
    if kind == "maximal_twist_rigid":
        got = set(maximal_twist_rigid_subsets(D))
        return got == _set(D, want), _names(D, got)
    if kind == "not_twist_rigid":
        from .separation import is_twist_rigid_subset
        got = is_twist_rigid_subset(D, args["A"])
        return not got, got
    if kind == "maximal_spherical":
        got = set(maximal_spherical_subsets(D))
        return got == _set(D, want), _names(D, got)
    if kind == "spherical_includes":
        got = {s.subset for s in spherical_subsets(D)}
        return _set(D, want) <= got, len(got)
    if kind == "minimal_separations":
        got = {frozenset(F) for F in minimal_separations(D)}
        return got == {_fam(D, F) for F in want}, [_names(D, F) for F in got]
    if kind == "minimal_separation_count":
        got = len(minimal_separations(D))
        return got == want, got
    if kind in ("type1", "type2", "standard"):
        st = standard_separation(D)
        got = set({"type1": st.type1, "type2": st.type2, "standard": st.family}[kind])
        return got == _set(D, want), _names(D, got)
    if kind == "ubar":
        got = set(ubar(D))
        return got == _set(D, want), _names(D, got)
    if kind == "components":
        got = set(components(D, D.mask(args["T"])))
        return got == _set(D, want), _names(D, got)
    if kind == "split":
        s = sigma_nu_split(D, args["U"])
        ok = s.sigma == D.mask(want["sigma"]) and s.nu == D.mask(want["nu"])
        return ok, {"sigma": list(D.members(s.sigma)), "nu": list(D.members(s.nu))}
    if kind == "induced_separation":
        got = set(induced_separation(D, args["U"]))
        return got == _set(D, want), _names(D, got)
    if kind == "separator":
        got = is_separator(D, args["U"], args["family"])
        return got == want, got
    if kind == "is_separation":
        got = is_separation(D, args["family"])
        return got == want, got
    if kind == "untangle_step":
        from .untangle import untangle_step
        got = untangle_step(D, args["U"], args["U2"], args["T"])
        return got == want, got
    if kind == "reachable":
        from .untangle import untangle_reachable
        path = untangle_reachable(D, args["U"], args["U2"])
        got = None if path is None else len(path.links)
        return got == want, got
    if kind == "loop_contains":
        from .untangle import loop_automorphisms
        perm = {D.index[a]: D.index[b] for a, b in args["perm"].items()}
        got = [p.perm for p in loop_automorphisms(D, args["U"])]
        return (perm in got) == want, len(got)
    raise ValueError(f"unknown checklist item {kind!r}")


def run_checklist(fx: Fixture, conflicts=False) -> list:
    """Evaluate every item; returns ``(item, ok, observed)`` triples.

    Items tied to the stored labels are skipped on a relabelled fixture.  With
    ``conflicts`` only the items marked as conflicting are evaluated.
    """
    relabelled = fx.free_label is not None and fx.free_labels
    return [(item, *evaluate(fx.diagram, item)) for item in fx.checklist
            if not (relabelled and item.get("labels") == "default")
            and bool(item.get("conflict")) == conflicts]
