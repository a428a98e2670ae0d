"""Matplotlib figures of a diagram's nerve with the blocks of a separation shaded."""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx
from matplotlib.patches import Polygon

from .diagram import CoxeterDiagram


def nerve_graph(D: CoxeterDiagram) -> nx.Graph:
    """Finite-order pairs as a networkx graph; edge attribute ``m`` holds the order."""
    G = nx.Graph()
    G.add_nodes_from(D.names)
    for s, t, m in D.edges():
        G.add_edge(s, t, m=m)
    return G


def layout(D: CoxeterDiagram, seed=0) -> dict:
    G = nerve_graph(D)
    if G.number_of_edges() == 0:
        return nx.circular_layout(G)
    return nx.spring_layout(G, seed=seed)


def _hull(points):
    """Points around their centroid, padded outward a little."""
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    pts = sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    out = []
    for x, y in pts:
        dx, dy = x - cx, y - cy
        r = math.hypot(dx, dy) or 1.0
        out.append((x + 0.12 * dx / r, y + 0.12 * dy / r))
    return out


def plot_diagram(D: CoxeterDiagram, path, family=(), title=None, seed=0):
    """Draw the nerve (labels > 2 written on edges) and shade each block.

    ``family`` is a list of subsets (names or masks).  Returns the figure after
    saving it to ``path``.
    """
    pos = layout(D, seed)
    fig, ax = plt.subplots(figsize=(6, 6))
    colors = plt.get_cmap("tab10")
    for k, A in enumerate(family):
        members = D.members(D.mask(A))
        pts = [tuple(pos[s]) for s in members]
        if len(pts) >= 3:
            poly = Polygon(_hull(pts), closed=True, alpha=0.15, color=colors(k % 10), lw=0)
            ax.add_patch(poly)
        else:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, lw=14, alpha=0.15, color=colors(k % 10), solid_capstyle="round")
    G = nerve_graph(D)
    nx.draw_networkx_edges(G, pos, ax=ax, edge_color="0.3")
    labels = {(s, t): str(d["m"]) for s, t, d in G.edges(data=True) if d["m"] != 2}
    nx.draw_networkx_edge_labels(G, pos, edge_labels=labels, ax=ax, font_size=8)
    nx.draw_networkx_nodes(G, pos, ax=ax, node_color="white", edgecolors="k", node_size=380)
    nx.draw_networkx_labels(G, pos, ax=ax, font_size=8)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return fig
