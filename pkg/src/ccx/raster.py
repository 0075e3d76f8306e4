"""Raster topology of planar sets.

A vectorised predicate is sampled at cell centres of a rectangle in C, the
true cells are labelled with 4-connectivity and the false cells with
8-connectivity (the pairing for which the discrete Jordan theorem holds).
A bounded false component is a hole. "Contractible" means one component
and no holes; features thinner than a cell are not resolved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import ndimage

from .lines import ComplexLine

Predicate = Callable[[np.ndarray], np.ndarray]

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)
_CHUNK = 1 << 18


class OutsideWindow(ValueError):
    pass


class UnboundedWindow(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError(f"window has no area: {self}")

    @classmethod
    def square(cls, center: complex, half: float) -> "Window":
        return cls(center.real - half, center.real + half, center.imag - half, center.imag + half)

    def contains(self, w: complex) -> bool:
        return self.re_min <= w.real <= self.re_max and self.im_min <= w.imag <= self.im_max

    def padded(self, frac: float) -> "Window":
        """Grow both half-widths by ``frac`` about the centre."""
        dx = 0.5 * frac * (self.re_max - self.re_min)
        dy = 0.5 * frac * (self.im_max - self.im_min)
        return Window(self.re_min - dx, self.re_max + dx, self.im_min - dy, self.im_max + dy)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.re_min, self.re_max, self.im_min, self.im_max)


@dataclass(frozen=True)
class RasterGrid:
    window: Window
    cells: np.ndarray  # bool, shape (rows, cols); row 0 is im_min

    @property
    def resolution(self) -> tuple[int, int]:
        rows, cols = self.cells.shape
        return cols, rows

    def cell_of(self, w: complex) -> tuple[int, int]:
        if not self.window.contains(w):
            raise OutsideWindow(f"{w} is outside {self.window}")
        cols, rows = self.resolution
        win = self.window
        j = int((w.real - win.re_min) / (win.re_max - win.re_min) * cols)
        i = int((w.imag - win.im_min) / (win.im_max - win.im_min) * rows)
        return min(i, rows - 1), min(j, cols - 1)


@dataclass(frozen=True)
class TopologyReport:
    component_count: int
    hole_count: int
    labels: np.ndarray  # int, 0 on false cells

    @property
    def contractible(self) -> bool:
        return self.component_count == 1 and self.hole_count == 0

    @property
    def euler(self) -> int:
        return self.component_count - self.hole_count


def cell_centers(window: Window, resolution: tuple[int, int]) -> np.ndarray:
    cols, rows = resolution
    re = window.re_min + (np.arange(cols) + 0.5) * (window.re_max - window.re_min) / cols
    im = window.im_min + (np.arange(rows) + 0.5) * (window.im_max - window.im_min) / rows
    return re[None, :] + 1j * im[:, None]


def rasterize(pred: Predicate, window: Window, resolution: tuple[int, int] | int = 512) -> RasterGrid:
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    cols, rows = resolution
    if cols < 16 or rows < 16:
        raise ValueError("resolution must be at least 16x16")
    pts = cell_centers(window, resolution).ravel()
    out = np.empty(pts.shape, dtype=bool)
    for s in range(0, pts.size, _CHUNK):
        out[s : s + _CHUNK] = pred(pts[s : s + _CHUNK])
    return RasterGrid(window, out.reshape(rows, cols))


def analyze(grid: RasterGrid) -> TopologyReport:
    labels, ncomp = ndimage.label(grid.cells, structure=FOUR)
    holes, nfree = ndimage.label(~grid.cells, structure=EIGHT)
    border = np.concatenate([holes[0], holes[-1], holes[:, 0], holes[:, -1]])
    touching = np.unique(border[border > 0])
    return TopologyReport(int(ncomp), int(nfree - touching.size), labels)


def euler_characteristic(cells: np.ndarray) -> int:
    """Euler characteristic of the 4-connected cell complex: cells - adjacent pairs + full 2x2 blocks."""
    c = np.asarray(cells, dtype=bool)
    v = int(c.sum())
    e = int((c[:, 1:] & c[:, :-1]).sum() + (c[1:, :] & c[:-1, :]).sum())
    f = int((c[1:, 1:] & c[1:, :-1] & c[:-1, 1:] & c[:-1, :-1]).sum())
    return v - e + f


def component_of(grid: RasterGrid, report: TopologyReport, point: complex) -> int | None:
    i, j = grid.cell_of(complex(point))
    label = int(report.labels[i, j])
    return label or None


def coefficient_bounds(n: int) -> np.ndarray:
    """|z_k| <= C(n, k) on the closure of G_n."""
    return np.array([math.comb(n, k) for k in range(1, n + 1)], dtype=float)


def slice_window(line: ComplexLine, n: int | None = None) -> Window:
    """A parameter rectangle containing every lam with line.at(lam) in the closure of G_n."""
    n = line.dim if n is None else n
    if line.dim != n:
        raise ValueError("line dimension does not match n")
    bounds = coefficient_bounds(n)
    lo_re = lo_im = -math.inf
    hi_re = hi_im = math.inf
    smallest = None
    for b, d, cap in zip(line.base, line.dir, bounds):
        if abs(d) <= 1e-15:
            continue
        c = -b / d
        r = cap / abs(d)
        lo_re, hi_re = max(lo_re, c.real - r), min(hi_re, c.real + r)
        lo_im, hi_im = max(lo_im, c.imag - r), min(hi_im, c.imag + r)
        if smallest is None or r < smallest[1]:
            smallest = (c, r)
    if smallest is None:
        raise UnboundedWindow("direction has no nonzero coordinate")
    if not (hi_re > lo_re and hi_im > lo_im):
        # line misses the bounding polydisc; any window contains the empty slice
        c, r = smallest
        return Window.square(c, r).padded(0.1)
    return Window(lo_re, hi_re, lo_im, hi_im).padded(0.1)


def fit_window(
    pred: Predicate,
    window: Window,
    probe: int = 128,
    must_contain: tuple[complex, ...] = (),
    margin_cells: int = 2,
) -> Window | None:
    """Shrink ``window`` to the occupied part seen by a coarse probe raster.

    Returns None when the probe sees no true cell and no point is forced in.
    Marks outside ``window`` are ignored.
    """
    grid = rasterize(pred, window, probe)
    rows, cols = np.nonzero(grid.cells)
    dx = (window.re_max - window.re_min) / probe
    dy = (window.im_max - window.im_min) / probe
    marks = [w for w in must_contain if window.contains(w)]  # outside marks cannot be slice points
    re = list(window.re_min + (cols + 0.5) * dx) + [w.real for w in marks]
    im = list(window.im_min + (rows + 0.5) * dy) + [w.imag for w in marks]
    if not re:
        return None
    pad_x = margin_cells * dx
    pad_y = margin_cells * dy
    lo_re, hi_re = max(window.re_min, min(re) - pad_x), min(window.re_max, max(re) + pad_x)
    lo_im, hi_im = max(window.im_min, min(im) - pad_y), min(window.im_max, max(im) + pad_y)
    return Window(lo_re, hi_re, lo_im, hi_im).padded(0.1)


# Image dumps -----------------------------------------------------------------


def to_pgm(report: TopologyReport) -> bytes:
    """Binary P5 greymap: 0 empty, 255*label/max otherwise; top row is the largest imaginary part."""
    labels = report.labels[::-1]
    top = max(int(labels.max()), 1)
    img = np.where(labels > 0, np.maximum(1, (255 * labels) // top), 0).astype(np.uint8)
    rows, cols = img.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + img.tobytes()


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _runs_path(mask: np.ndarray) -> str:
    """SVG path of horizontal cell runs; image rows run top-down."""
    parts = []
    for i, row in enumerate(mask):
        padded = np.concatenate([[False], row, [False]])
        edges = np.flatnonzero(padded[1:] != padded[:-1])
        for a, b in zip(edges[::2], edges[1::2]):
            parts.append(f"M{a} {i}h{b - a}v1h{a - b}z")
    return "".join(parts)


def to_svg(report: TopologyReport, title: str = "") -> str:
    labels = report.labels[::-1]
    rows, cols = labels.shape
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{cols}" height="{rows}" '
        f'viewBox="0 0 {cols} {rows}" shape-rendering="crispEdges">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    for label in range(1, report.component_count + 1):
        color = _PALETTE[(label - 1) % len(_PALETTE)]
        out.append(f'<path id="component-{label}" fill="{color}" d="{_runs_path(labels == label)}"/>')
    holes, nfree = ndimage.label(labels == 0, structure=EIGHT)
    border = set(np.concatenate([holes[0], holes[-1], holes[:, 0], holes[:, -1]]).tolist())
    for k in range(1, nfree + 1):
        if k in border:
            continue
        out.append(f'<path class="hole" fill="none" stroke="#000000" stroke-width="0.5" d="{_runs_path(holes == k)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def rasterize_disc_union(
    centers: np.ndarray, radii: np.ndarray, window: Window, resolution: tuple[int, int] | int = 512
) -> RasterGrid:
    """Occupancy of a union of open discs, touching only each disc's bounding box."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    cols, rows = resolution
    if cols < 16 or rows < 16:
        raise ValueError("resolution must be at least 16x16")
    dx = (window.re_max - window.re_min) / cols
    dy = (window.im_max - window.im_min) / rows
    re = window.re_min + (np.arange(cols) + 0.5) * dx
    im = window.im_min + (np.arange(rows) + 0.5) * dy
    cells = np.zeros((rows, cols), dtype=bool)
    for c, r in zip(np.asarray(centers, dtype=complex), np.asarray(radii, dtype=float)):
        if not np.isfinite(r) or r <= 0:
            continue
        j0 = max(0, int(np.floor((c.real - r - window.re_min) / dx)))
        j1 = min(cols, int(np.ceil((c.real + r - window.re_min) / dx)) + 1)
        i0 = max(0, int(np.floor((c.imag - r - window.im_min) / dy)))
        i1 = min(rows, int(np.ceil((c.imag + r - window.im_min) / dy)) + 1)
        if j0 >= j1 or i0 >= i1:
            continue
        d2 = (re[j0:j1] - c.real)[None, :] ** 2 + (im[i0:i1] - c.imag)[:, None] ** 2
        cells[i0:i1, j0:j1] |= d2 < r * r
    return RasterGrid(window, cells)


def bridge_thin_features(
    pred: Predicate, grid: RasterGrid, max_size: int = 8, factor: int = 32, pad: int = 3
) -> RasterGrid:
    """Re-examine small components at a finer local scale and add the cells that join them up.

    Centre sampling breaks thin wedges and cusp tips into isolated cells. For
    every component of at most ``max_size`` cells, the surrounding block is
    rasterized ``factor`` times finer; when a fine 4-component touches both
    the small component and another one, every coarse cell it crosses is
    marked occupied. Cells are only ever added where the set was seen.
    """
    labels, ncomp = ndimage.label(grid.cells, structure=FOUR)
    if ncomp < 2:
        return grid
    sizes = np.bincount(labels.ravel())
    cells = grid.cells.copy()
    rows, cols = cells.shape
    win = grid.window
    dx = (win.re_max - win.re_min) / cols
    dy = (win.im_max - win.im_min) / rows
    for k in np.flatnonzero(sizes[1:] <= max_size) + 1:
        ii, jj = np.nonzero(labels == k)
        i0, i1 = max(0, ii.min() - pad), min(rows, ii.max() + pad + 1)
        j0, j1 = max(0, jj.min() - pad), min(cols, jj.max() + pad + 1)
        local = Window(win.re_min + j0 * dx, win.re_min + j1 * dx, win.im_min + i0 * dy, win.im_min + i1 * dy)
        fine = rasterize(pred, local, (factor * (j1 - j0), factor * (i1 - i0))).cells
        fine_labels, _ = ndimage.label(fine, structure=FOUR)
        # coarse label of the cell each fine cell falls in
        coarse = np.repeat(np.repeat(labels[i0:i1, j0:j1], factor, axis=0), factor, axis=1)
        mine = set(np.unique(fine_labels[(coarse == k) & fine]).tolist()) - {0}
        others = set(np.unique(fine_labels[(coarse > 0) & (coarse != k) & fine]).tolist()) - {0}
        for lab in mine & others:
            hit = (fine_labels == lab).reshape(i1 - i0, factor, j1 - j0, factor).any(axis=(1, 3))
            cells[i0:i1, j0:j1] |= hit
    return RasterGrid(grid.window, cells)


@dataclass(frozen=True)
class Magnifier:
    """Radial homeomorphism of the plane that blows up small discs around marked points.

    Inside the disc of ``radius`` about a centre c, the point c + r e^{ia} is
    sent to c + radius (r/radius)**power e^{ia}; outside all discs it is the
    identity. Discs must be disjoint. Sampling a set through this map changes
    neither its component count nor its holes, but resolves features near c.
    """

    centers: tuple[complex, ...]
    radius: float
    power: float = 3.0

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        lam = np.array(xi, dtype=complex, copy=True)
        for c in self.centers:
            d = xi - c
            r = np.abs(d)
            near = r < self.radius
            lam[near] = c + d[near] * (r[near] / self.radius) ** (self.power - 1.0)
        return lam

    def cover(self, window: Window) -> Window:
        """Smallest window containing ``window`` and every magnified disc."""
        re = [window.re_min, window.re_max] + [c.real + s * self.radius for c in self.centers for s in (-1, 1)]
        im = [window.im_min, window.im_max] + [c.imag + s * self.radius for c in self.centers for s in (-1, 1)]
        return Window(min(re), max(re), min(im), max(im))
