"""Figures for sensor fields: SVG via matplotlib, plain PGM (P2) rasters via numpy."""

from __future__ import annotations

import os

import matplotlib
import numpy as np
from matplotlib.colors import Normalize
from matplotlib.figure import Figure
from matplotlib.tri import LinearTriInterpolator, Triangulation

CMAP = "RdBu_r"  # white sits at the midpoint, which the norm pins to zero
SVG_RC = {"svg.hashsalt": "defeuler", "svg.fonttype": "path", "font.size": 9}


def _triangulation(K):
    if K.ambient_dim != 2:
        raise ValueError("field figures need a complex in R^2")
    xy = np.array([[float(x), float(y)] for x, y in K.coords])
    tris = np.array([c for c in K.cells if len(c) == 3], dtype=int).reshape(-1, 3)
    return Triangulation(xy[:, 0], xy[:, 1], tris)


def _norm(vals):
    top = float(np.max(np.abs(vals))) if len(vals) else 0.0
    top = top or 1.0
    return Normalize(-top, top)


def field_figure(K, values, title: str = "") -> Figure:
    """PL field over the triangulation, coloured by height with white at zero."""
    tri = _triangulation(K)
    z = np.array([float(v) for v in values])
    fig = Figure(figsize=(4.2, 3.6))
    ax = fig.add_subplot()
    pc = ax.tripcolor(tri, z, shading="gouraud", cmap=CMAP, norm=_norm(z))
    ax.triplot(tri, color="0.75", lw=0.2)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.colorbar(pc, ax=ax, shrink=0.85, label="height")
    fig.tight_layout()
    return fig


def estimates_figure(rows, title: str = "") -> Figure:
    """Raw and smoothed estimates per seed against the true count."""
    seeds = [r.seed for r in rows]
    fig = Figure(figsize=(5, 3))
    ax = fig.add_subplot()
    ax.plot(seeds, [float(r.raw_estimate) for r in rows], "o", ms=3, color="tab:red", label="raw")
    ax.plot(seeds, [float(r.smoothed_estimate) for r in rows], "s", ms=3, color="tab:blue", label="smoothed")
    if rows:
        ax.axhline(rows[0].truth, color="k", lw=0.8, ls="--", label="truth")
    ax.set_xlabel("seed")
    ax.set_ylabel("estimate")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=7)
    fig.tight_layout()
    return fig


def save_svg(fig: Figure, path) -> None:
    # fixed salt and no date so repeated runs give identical files
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def raster(K, values, size: int = 128) -> np.ndarray:
    """Sample the PL field on a size×size pixel grid (NaN outside the triangulation)."""
    tri = _triangulation(K)
    interp = LinearTriInterpolator(tri, np.array([float(v) for v in values]))
    xs = np.linspace(tri.x.min(), tri.x.max(), size)
    ys = np.linspace(tri.y.max(), tri.y.min(), size)  # top row first
    gx, gy = np.meshgrid(xs, ys)
    return np.ma.filled(interp(gx, gy), np.nan)


def write_pgm(path, image: np.ndarray, maxval: int = 255) -> None:
    """Plain PGM: heights scaled so min(0, lo) is black and max(0, hi) white; NaN pixels black."""
    finite = image[np.isfinite(image)]
    lo = min(0.0, float(finite.min())) if finite.size else 0.0
    hi = max(0.0, float(finite.max())) if finite.size else 1.0
    span = (hi - lo) or 1.0
    gray = np.where(np.isfinite(image), np.rint((image - lo) / span * maxval), 0).astype(int)
    h, w = gray.shape
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"P2\n{w} {h}\n{maxval}\n")
        for row in gray:
            fh.write(" ".join(map(str, row)) + "\n")


def render_field(K, values, path, fmt: str = "svg", title: str = "") -> str:
    if fmt == "svg":
        save_svg(field_figure(K, values, title), path)
    elif fmt == "pgm":
        write_pgm(path, raster(K, values))
    else:
        raise ValueError(f"unknown image format {fmt!r}")
    return os.fspath(path)


def render_seed(network, result, outdir, fmt: str = "svg") -> list:
    """One image of the corrupted field and one of the smoothed field for a seed."""
    os.makedirs(outdir, exist_ok=True)
    rd = result.readings
    out = []
    for name, vals, est in (
        ("raw", rd.corrupted, result.raw_estimate),
        ("smoothed", rd.smoothed, result.smoothed_estimate),
    ):
        path = os.path.join(outdir, f"seed{result.seed:03d}_{name}.{fmt}")
        title = f"seed {result.seed} {name}: estimate {float(est):.2f}"
        out.append(render_field(network.complex, vals, path, fmt, title))
    return out
