"""Pictures of tilings: SVG and ASCII for the command line, matplotlib for reports."""

from __future__ import annotations

import math
from typing import Sequence

from .minkowski import compute_zone
from .trigrid import DOWN, UP, Direction, GridCoord, LabeledTiling, Tiling, grid

SQRT3_2 = math.sqrt(3) / 2

# fill colours of the three lozenge orientations, keyed by how the DOWN half is glued
LOZENGE_FILL = {Direction.HYP: "#f2c14e", Direction.E: "#5b8e7d", Direction.N: "#8cb3d9"}
FREE_FILL = "#ffffff"
ZONE_FILL = "#d1495b"


def _as_labeled(t: Tiling | LabeledTiling) -> LabeledTiling:
    return t if isinstance(t, LabeledTiling) else LabeledTiling.default(t)


def plane(p: tuple[int, int], k: int, scale: float = 40.0, margin: float = 10.0) -> tuple[float, float]:
    """Lattice point to SVG coordinates (y grows downwards)."""
    x, y = p
    return (margin + scale * (x + y / 2), margin + scale * SQRT3_2 * (k - y))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polygon(points, fill, opacity=1.0) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    extra = "" if opacity == 1.0 else f' fill-opacity="{opacity}"'
    return f'<polygon points="{pts}" fill="{fill}"{extra} stroke="#222222" stroke-width="1"/>'


def _lozenge_outline(d: GridCoord, u: GridCoord) -> list[tuple[int, int]]:
    """Four corners of a lozenge in cyclic order."""
    shared = set(d.corners()) & set(u.corners())
    (pd,) = set(d.corners()) - shared
    (pu,) = set(u.corners()) - shared
    s1, s2 = sorted(shared)
    return [pd, s1, pu, s2]


def to_svg(t: Tiling | LabeledTiling, zone: int | None = None, scale: float = 40.0) -> str:
    lt = _as_labeled(t)
    k = lt.k
    width = 20 + scale * k
    height = 20 + scale * SQRT3_2 * k
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
           f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">']
    g = grid(k)
    for d, m in zip(g.downs, lt.tiling.match):
        u = lt.tiling.partner(d)
        pts = [plane(p, k, scale) for p in _lozenge_outline(d, u)]
        out.append(_polygon(pts, LOZENGE_FILL[m]))
    for i, u in enumerate(lt.labels, 1):
        pts = [plane(p, k, scale) for p in u.corners()]
        out.append(_polygon(pts, FREE_FILL))
        cx = sum(p[0] for p in pts) / 3
        cy = sum(p[1] for p in pts) / 3
        out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy + scale * 0.12)}" font-size="{_fmt(scale * 0.35)}" '
                   f'text-anchor="middle" font-family="sans-serif">{i}</text>')
    if zone is not None:
        z = compute_zone(lt, zone)
        for tri in sorted(z.triangles(), key=GridCoord.sort_key):
            pts = [plane(p, k, scale) for p in tri.corners()]
            out.append(_polygon(pts, ZONE_FILL, opacity=0.45))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _label_char(i: int) -> str:
    return "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"[i - 1] if i <= 35 else "*"


def to_ascii(t: Tiling | LabeledTiling, zone: int | None = None) -> str:
    """Rows from the apex down; free triangles show their label, lozenge halves
    the gluing direction of the lozenge (H, E or N), and with ``zone`` every
    triangle outside that zone is dotted out."""
    lt = _as_labeled(t)
    k = lt.k
    char: dict[GridCoord, str] = {}
    for d, m in zip(grid(k).downs, lt.tiling.match):
        char[d] = char[lt.tiling.partner(d)] = m.name[0]
    for i, u in enumerate(lt.labels, 1):
        char[u] = _label_char(i)
    keep = compute_zone(lt, zone).triangles() if zone is not None else None
    lines = []
    for y in range(k - 1, -1, -1):
        row = []
        for x in range(k - y):
            cells = [GridCoord(x, y, UP)] + ([GridCoord(x, y, DOWN)] if x < k - 1 - y else [])
            for c in cells:
                row.append(char[c] if keep is None or c in keep else ".")
        lines.append(" " * y + "".join(row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# matplotlib figures for the report

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_tiling(ax, t: Tiling | LabeledTiling, zone: int | None = None) -> None:
    from matplotlib.patches import Polygon

    lt = _as_labeled(t)
    k = lt.k

    def xy(p):
        return (p[0] + p[1] / 2, SQRT3_2 * p[1])

    for d, m in zip(grid(k).downs, lt.tiling.match):
        u = lt.tiling.partner(d)
        ax.add_patch(Polygon([xy(p) for p in _lozenge_outline(d, u)], closed=True,
                             facecolor=LOZENGE_FILL[m], edgecolor="#222222", linewidth=0.8))
    for i, u in enumerate(lt.labels, 1):
        pts = [xy(p) for p in u.corners()]
        ax.add_patch(Polygon(pts, closed=True, facecolor=FREE_FILL, edgecolor="#222222", linewidth=0.8))
        ax.text(sum(p[0] for p in pts) / 3, sum(p[1] for p in pts) / 3, str(i),
                ha="center", va="center", fontsize=8)
    if zone is not None:
        for tri in compute_zone(lt, zone).triangles():
            ax.add_patch(Polygon([xy(p) for p in tri.corners()], closed=True,
                                 facecolor=ZONE_FILL, alpha=0.45, edgecolor="none"))
    ax.set_xlim(-0.1, k + 0.1)
    ax.set_ylim(-0.1, SQRT3_2 * k + 0.1)
    ax.set_aspect("equal")
    ax.axis("off")


def entropy_figure(rows: Sequence, beta: float, path) -> None:
    """ln(count)/area against k, with the two elementary bounds and the limit beta."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = [r.k for r in rows]
    ax.plot(ks, [r.ratio for r in rows], "o-", label="ln(tilings) / (k²/2)")
    ax.plot(ks, [r.upper for r in rows], "--", label="upper bound")
    lower = [(r.k, r.lower) for r in rows if r.lower is not None]
    if lower:
        ax.plot([k for k, _ in lower], [v for _, v in lower], "s:", label="lower bound (3 | k)")
    ax.axhline(beta, color="grey", linewidth=0.8, label=f"β ≈ {beta:.5f}")
    ax.set_xlabel("k")
    ax.set_ylabel("entropy per unit area")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def counts_figure(rows: Sequence, path) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy([r.k for r in rows], [float(r.count) for r in rows], "o-")
    ax.set_xlabel("k")
    ax.set_ylabel("lozenge tilings of T_k")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def zones_figure(t: Tiling | LabeledTiling, path) -> None:
    """One panel per zone of a labeled tiling."""
    plt = _pyplot()
    lt = _as_labeled(t)
    fig, axes = plt.subplots(1, lt.k, figsize=(2.2 * lt.k, 2.2), squeeze=False)
    for i, ax in enumerate(axes[0], 1):
        plot_tiling(ax, lt, zone=i)
        ax.set_title(f"zone {i}", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
