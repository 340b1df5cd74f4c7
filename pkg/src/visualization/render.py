"""
SVG rendering of square ice and lattice path diagrams.

Square ice: one vertex per cell of the half matrix. Each compass label names
the two arms whose arrows point into the vertex (WE: both horizontal arms,
NS: both vertical arms, and so on). Row i and row N+1-i are joined on the
left by a U-turn.

Lattice paths: straight edges become polylines and the starting spurs become
quadratic curves. Heights grow downwards so the letters 1..n sit at the top
and 0bar at the bottom. Points lying on two paths are highlighted.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from src.core.asm import Compass, HalfTurnAsm, to_compass
from src.core.paths import CURVE, LatticePathConfig, bottom_height, height_label
from src.visualization.visualization_backend import initialize_backend, save_svg

logger = logging.getLogger(__name__)

PATH_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_ARM_OFFSETS = {"N": (0.0, 0.5), "S": (0.0, -0.5), "W": (-0.5, 0.0), "E": (0.5, 0.0)}


def _arm_arrows(label: Compass, x: float, y: float) -> List[Tuple[Tuple[float, float], Tuple[float, float]]]:
    """(tail, head) of the arrow on each of the four arms around (x, y)."""
    arrows = []
    for arm, (dx, dy) in sorted(_ARM_OFFSETS.items()):
        outer = (x + dx, y + dy)
        inner = (x + 0.25 * dx, y + 0.25 * dy)
        arrows.append((outer, inner) if arm in label.value else (inner, outer))
    return arrows


def render_square_ice(A: HalfTurnAsm, output_file: str, title: Optional[str] = None) -> str:
    """Draw the U-turn square ice configuration of A as an SVG file.

    Args:
        A: the half matrix
        output_file: destination path
        title: optional figure title

    Returns:
        The output path
    """
    initialize_backend()
    import matplotlib.pyplot as plt
    from matplotlib.patches import Arc

    compass = to_compass(A)
    N, m = A.N, A.m
    fig, ax = plt.subplots(figsize=(1.0 + 0.8 * m, 1.0 + 0.8 * N))

    for i, row in enumerate(compass.labels, start=1):
        y = N + 1 - i
        for j, label in enumerate(row, start=1):
            for tail, head in _arm_arrows(label, j, y):
                ax.annotate(
                    "", xy=head, xytext=tail,
                    arrowprops={"arrowstyle": "->", "color": "black", "lw": 0.9},
                )
            entry = A.entries[i - 1][j - 1]
            if entry:
                ax.plot([j], [y], marker="o", color="black" if entry > 0 else "white",
                        markeredgecolor="black", markersize=5)
            ax.text(j + 0.08, y + 0.12, label.value, fontsize=6, color="gray")

    # U-turns on the left boundary
    for i in range(1, N // 2 + 1):
        top, bottom = N + 1 - i, i
        centre = (top + bottom) / 2.0
        ax.add_patch(Arc((0.5, centre), top - bottom, top - bottom, theta1=90, theta2=270, lw=1.0))
    if N % 2:
        ax.plot([0.3, 0.5], [(N + 1) / 2.0] * 2, color="black", lw=1.0)

    ax.set_xlim(-N / 2.0 - 0.5, m + 1)
    ax.set_ylim(0, N + 1)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or f"{A.kind.value} half-turn ASM, n={A.n}, lambda=({A.lam})", fontsize=9)
    save_svg(fig, output_file)
    return output_file


def _segments(edges) -> List[Tuple[str, List[Tuple[int, int]]]]:
    """Split a path into curved spurs and maximal runs of straight edges."""
    pieces: List[Tuple[str, List[Tuple[int, int]]]] = []
    for e in edges:
        if e.kind == CURVE:
            pieces.append((CURVE, [tuple(e.start), tuple(e.end)]))
        elif pieces and pieces[-1][0] != CURVE:
            pieces[-1][1].append(tuple(e.end))
        else:
            pieces.append(("line", [tuple(e.start), tuple(e.end)]))
    return pieces


def render_paths(config: LatticePathConfig, output_file: str, title: Optional[str] = None) -> str:
    """Draw a lattice path configuration as an SVG file.

    Args:
        config: the paths, one per tableau row
        output_file: destination path
        title: optional figure title

    Returns:
        The output path
    """
    initialize_backend()
    import matplotlib.pyplot as plt
    from matplotlib.patches import PathPatch
    from matplotlib.path import Path

    n = config.n
    bottom = bottom_height(n)
    width = max((p.end().column for p in config.paths), default=1)
    fig, ax = plt.subplots(figsize=(2.0 + 0.6 * (width + n), 1.0 + 0.45 * bottom))

    grid = [(c, h) for c in range(1, width + 1) for h in range(1, bottom + 1)]
    ax.scatter([c for c, _ in grid], [h for _, h in grid], s=6, color="lightgray", zorder=1)
    for h in range(1, bottom + 1):
        ax.text(0.35, h, height_label(h, n), fontsize=7, ha="right", va="center")

    for index, path in enumerate(config.paths):
        color = PATH_COLORS[index % len(PATH_COLORS)]
        for kind, points in _segments(path.edges):
            if kind == CURVE:
                (x0, y0), (x1, y1) = points
                control = (x1, y0)
                patch = PathPatch(
                    Path([(x0, y0), control, (x1, y1)], [Path.MOVETO, Path.CURVE3, Path.CURVE3]),
                    facecolor="none", edgecolor=color, lw=1.5, zorder=2,
                )
                ax.add_patch(patch)
            else:
                ax.plot([c for c, _ in points], [h for _, h in points], color=color, lw=1.5, zorder=2)
        ax.plot([path.start.column], [path.start.height], marker="s", color=color, markersize=4, zorder=3)

    shared = config.shared_points()
    if shared:
        ax.scatter([p.column for p in shared], [p.height for p in shared], s=60,
                   facecolors="none", edgecolors="red", linewidths=1.5, zorder=4)
        logger.debug(f"{len(shared)} shared points highlighted")

    ax.set_xlim(-n - 0.5, width + 0.5)
    ax.set_ylim(bottom + 0.5, 0.5)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or f"Lattice paths, n={n}, ends {list(config.end_columns())}", fontsize=9)
    save_svg(fig, output_file)
    return output_file


def path_segment_counts(config: LatticePathConfig) -> Sequence[int]:
    """Number of drawn pieces per path (spur plus straight runs)."""
    return [len(_segments(p.edges)) for p in config.paths]
