"""Matplotlib figures written next to the CLI's delimited reports.

Every function takes an output path and returns it; the Agg backend is used
so nothing needs a display.
"""
from __future__ import annotations

import itertools

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import lorentz  # noqa: E402

STATUS_COLORS = {"MATCH": "#2e7d32", "MISMATCH": "#c62828", "INDETERMINATE": "#9e9e9e"}


def klein_wireframe(r, path, title=None):
    """Edges of the realized polyhedron in the Klein model, with the unit sphere for scale."""
    verts = lorentz.vertices(r)
    pts = {t: np.array(lorentz.klein(p)) for t, p in verts}
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="3d")
    u, v = np.mgrid[0:2 * np.pi:30j, 0:np.pi:15j]
    ax.plot_wireframe(np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v), color="0.85", linewidth=0.3)
    for (t1, p1), (t2, p2) in itertools.combinations(pts.items(), 2):
        if len(set(t1) & set(t2)) == 2:
            ax.plot(*zip(p1, p2), color="k", linewidth=1.2)
    xyz = np.array(list(pts.values()))
    ax.scatter(*xyz.T, color="tab:blue", s=12)
    ax.set_box_aspect((1, 1, 1))
    ax.set_axis_off()
    ax.set_title(title or f"{r.poly.n_faces} faces, {r.poly.n_vertices} vertices")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def gram_heatmap(G, faces, path, title=None):
    """Gram matrix as a labelled heat map."""
    a = np.array([[float(G[i, j]) for j in range(G.cols)] for i in range(G.rows)])
    fig, ax = plt.subplots(figsize=(1 + 0.5 * len(faces), 0.8 + 0.5 * len(faces)))
    im = ax.imshow(a, cmap="coolwarm", vmin=-max(2, abs(a).max()), vmax=max(2, abs(a).max()))
    ax.set_xticks(range(len(faces)), faces, rotation=90, fontsize=7)
    ax.set_yticks(range(len(faces)), faces, fontsize=7)
    fig.colorbar(im, ax=ax, shrink=0.8)
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def table_summary(results, path):
    """Computed vs expected field degree per pair, and the status grid."""
    pairs = [r.pair for r in results]
    cols = ("itf", "integral", "arithmetic", "mutual", "verdict")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 0.4 * len(pairs) + 1.5),
                                   gridspec_kw={"width_ratios": [3, 2]})
    y = np.arange(len(pairs))
    ax1.barh(y - 0.2, [r.expected.poly.degree for r in results], height=0.4, color="0.7", label="expected")
    ax1.barh(y + 0.2, [r.degree or 0 for r in results], height=0.4,
             color=[STATUS_COLORS[r.itf] for r in results], label="computed")
    ax1.set_yticks(y, pairs)
    ax1.invert_yaxis()
    ax1.set_xlabel("invariant trace field degree")
    ax1.legend(loc="lower right", fontsize=8)
    for i, r in enumerate(results):
        for j, c in enumerate(cols):
            status = getattr(r, c)
            ax2.add_patch(plt.Rectangle((j, i), 0.95, 0.9, color=STATUS_COLORS[status]))
    ax2.set_xlim(0, len(cols))
    ax2.set_ylim(len(pairs), 0)
    ax2.set_xticks(np.arange(len(cols)) + 0.47, cols, rotation=30, fontsize=8)
    ax2.set_yticks(y + 0.45, pairs, fontsize=8)
    ax2.set_title("comparison status")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
