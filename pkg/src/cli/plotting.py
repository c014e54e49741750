"""
SVG renderings of barcodes, diagrams and landscapes

Figures are built on the Agg backend and written through an in-memory
buffer. The hash salt, font handling and metadata are pinned so a given
summary always produces the same SVG bytes.
"""

from __future__ import annotations

import io
import math
from typing import Optional, Sequence

import matplotlib as mpl
mpl.use('Agg')

from matplotlib.figure import Figure

from src.landscape.landscape import PersistenceLandscape
from src.persistence.diagram import Barcode, PersistenceDiagram
from src.utils.fileio import atomic_write
from src.utils.logger import get_logger

logger = get_logger('plot')

SVG_STYLE = {
    'svg.hashsalt': 'tda-stats',
    'svg.fonttype': 'none',
    'font.family': 'DejaVu Sans',
    'font.size': 9,
    'axes.grid': False,
}
DIMENSION_COLORS = ('tab:red', 'tab:blue', 'tab:green', 'tab:purple', 'tab:orange', 'tab:brown')


def _color(h):
    return DIMENSION_COLORS[h % len(DIMENSION_COLORS)]


def save_svg(fig: Figure, path):
    """Render ``fig`` to SVG and move it into place atomically"""
    buffer = io.BytesIO()
    with mpl.rc_context(SVG_STYLE):
        fig.savefig(buffer, format='svg', metadata={'Date': None, 'Creator': None})
    with atomic_write(path, mode='wb') as handle:
        handle.write(buffer.getvalue())
    logger.debug('Wrote %s', path)


def _new_figure(width=6.0, height=4.0):
    with mpl.rc_context(SVG_STYLE):
        fig = Figure(figsize=(width, height))
        ax = fig.add_subplot(1, 1, 1)
    return fig, ax


def _finite_top(values, max_scale):
    finite = [v for v in values if math.isfinite(v)]
    if max_scale is not None:
        return max_scale
    if finite and max(finite) > 0:
        return max(finite) * 1.1
    return 1.0


def plot_barcode(path, barcode: Barcode, max_scale: Optional[float] = None, title='Barcode'):
    """
    Horizontal bars grouped by homology dimension

    Every interval is drawn as its own line with id ``bar-<i>``; infinite
    bars run to the right edge and end in an arrow head.
    """
    right = _finite_top([p.death for p in barcode] + [p.birth for p in barcode], max_scale)
    fig, ax = _new_figure(6.0, max(2.0, 0.12 * len(barcode) + 1.0))
    row = 0
    ticks, labels = [], []
    for h in barcode.homology_dimensions:
        intervals = [p for p in barcode if p.dimension == h]
        if not intervals:
            continue
        start_row = row
        for pair in intervals:
            end = right if pair.is_infinite else pair.death
            ax.plot([pair.birth, end], [row, row], color=_color(h), linewidth=1.5,
                    solid_capstyle='butt', gid=f'bar-{row}')
            if pair.is_infinite:
                ax.plot([end], [row], marker='>', color=_color(h), markersize=4)
            row += 1
        ticks.append((start_row + row - 1) / 2.0)
        labels.append(f'H{h}')
        row += 1
    ax.set_yticks(ticks)
    ax.set_yticklabels(labels)
    ax.set_xlim(0.0, right * 1.02)
    ax.set_ylim(row, -1)
    ax.set_xlabel('scale')
    ax.set_title(title)
    save_svg(fig, path)


def plot_diagram(path, diagram: PersistenceDiagram, title='Persistence diagram'):
    """Scatter of (birth, death) above the diagonal; infinite deaths sit on the top edge"""
    values = [v for p in diagram for v in (p.birth, p.death)]
    top = _finite_top(values, diagram.max_scale)
    fig, ax = _new_figure(4.5, 4.5)
    ax.plot([0.0, top], [0.0, top], color='0.5', linewidth=1.0, gid='diagonal')
    for h in diagram.homology_dimensions:
        points = diagram.points(h)
        finite = points[~(points[:, 1] == math.inf)]
        infinite = points[points[:, 1] == math.inf]
        if finite.shape[0]:
            ax.scatter(finite[:, 0], finite[:, 1], s=12, color=_color(h), label=f'H{h}', gid=f'points-H{h}')
        if infinite.shape[0]:
            ax.scatter(infinite[:, 0], [top] * infinite.shape[0], s=18, marker='^',
                       color=_color(h), gid=f'infinite-H{h}')
    ax.axhline(top, color='0.7', linestyle=':', linewidth=0.8)
    ax.set_xlim(0.0, top * 1.05)
    ax.set_ylim(0.0, top * 1.05)
    ax.set_xlabel('birth')
    ax.set_ylabel('death')
    ax.set_title(title)
    if diagram.pairs:
        ax.legend(loc='lower right', frameon=False)
    save_svg(fig, path)


def plot_landscape(path, landscapes: Sequence[PersistenceLandscape],
                   mean: Optional[PersistenceLandscape] = None, max_levels: int = 5,
                   title='Persistence landscape'):
    """
    Level curves drawn through their exact breakpoints

    With several landscapes each is drawn faintly; ``mean`` is overlaid in
    black dashes.
    """
    fig, ax = _new_figure(6.0, 3.5)
    alpha = 1.0 if len(landscapes) == 1 else 0.35
    for index, landscape in enumerate(landscapes):
        for k, level in enumerate(landscape.levels[:max_levels]):
            label = f'λ{k + 1}' if index == 0 and len(landscapes) == 1 else None
            ax.plot(level[:, 0], level[:, 1], color=f'C{k}', alpha=alpha, linewidth=1.2,
                    label=label, gid=f'level-{index}-{k + 1}')
    if mean is not None:
        for k, level in enumerate(mean.levels[:max_levels]):
            ax.plot(level[:, 0], level[:, 1], color='black', linestyle='--', linewidth=1.2,
                    label='mean' if k == 0 else None, gid=f'mean-{k + 1}')
    ax.set_xlabel('t')
    ax.set_ylabel('λ(t)')
    ax.set_ylim(bottom=0.0)
    ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc='upper right', frameon=False)
    save_svg(fig, path)
