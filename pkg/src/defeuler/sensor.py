"""Target counting on a sampled sensor field.

Pipeline: exact counts h = Σ 1_{U_α} at grid nodes, ±1 corruption of a
fraction of nodes, confidence-weighted neighbourhood averaging, and an
estimate of the number of targets as ∫h⌊dχ⌋ of the interpolated field.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import SimplicialComplex, as_fraction, grid_complex, subcomplex
from .defint import FLOOR, DefFun, Measure, integrate
from .errors import SupportOutsideWindow, ZeroConfidenceNeighborhood


@dataclass(frozen=True)
class Disk:
    cx: Fraction
    cy: Fraction
    r: Fraction

    def __post_init__(self):
        for name in ("cx", "cy", "r"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    def contains(self, p) -> bool:
        dx, dy = p[0] - self.cx, p[1] - self.cy
        return dx * dx + dy * dy <= self.r * self.r

    def bbox(self):
        return self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r


@dataclass(frozen=True)
class Rect:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    def contains(self, p) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    def bbox(self):
        return self.x0, self.y0, self.x1, self.y1


@dataclass(frozen=True)
class TargetScene:
    """Compact convex target supports; every support has χ = ``euler_char``."""

    supports: tuple
    euler_char: int = 1

    @property
    def truth(self) -> int:
        return len(self.supports)


@dataclass(frozen=True)
class SensorNetwork:
    complex: SimplicialComplex
    window: tuple  # (x0, x1, y0, y1)

    @classmethod
    def grid(cls, nx: int, ny: int, window=(0, 1, 0, 1), holes=()) -> "SensorNetwork":
        """Grid nodes over the window; nodes strictly inside any hole disk are dropped."""
        x0, x1, y0, y1 = (as_fraction(v) for v in window)
        K = grid_complex(nx, ny, (x0, x1), (y0, y1))
        if holes:
            keep = [
                v
                for v, p in enumerate(K.coords)
                if not any((p[0] - d.cx) ** 2 + (p[1] - d.cy) ** 2 < d.r * d.r for d in holes)
            ]
            K, _ = subcomplex(K, keep)
        return cls(K, (x0, x1, y0, y1))

    @property
    def nodes(self):
        return self.complex.coords

    def neighborhood(self, i: int) -> tuple:
        """N(i): the node itself and its triangulation-edge neighbours."""
        return (i,) + self.complex.vertex_neighbors[i]


def synthesize_counts(scene: TargetScene, network: SensorNetwork) -> tuple:
    """h(x_i) = number of supports containing node x_i (closed membership)."""
    x0, x1, y0, y1 = network.window
    for s in scene.supports:
        a, b, c, d = s.bbox()
        if not (x0 < a and c < x1 and y0 < b and d < y1):
            raise SupportOutsideWindow(f"support {s} is not inside the window interior")
    return tuple(sum(1 for s in scene.supports if s.contains(p)) for p in network.nodes)


def corrupt(raw, p, seed) -> tuple:
    """Add ±1 to floor(p·#nodes) uniformly chosen nodes.

    Corrupted nodes get confidence uniform on {0, 1/1000, ..., 1/2}; clean nodes 1.
    """
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    n = len(raw)
    k = math.floor(p * n)
    rng = np.random.default_rng(seed)
    out = list(raw)
    conf = [Fraction(1)] * n
    idx = rng.choice(n, size=k, replace=False) if k else []
    signs = rng.choice((-1, 1), size=k) if k else []
    levels = rng.integers(0, 501, size=k) if k else []
    for i, sg, lv in zip(idx, signs, levels):
        out[int(i)] += int(sg)
        conf[int(i)] = Fraction(int(lv), 1000)
    return tuple(out), tuple(conf)


def smooth(raw, confidence, network: SensorNetwork) -> tuple:
    """h̃(x_i) = Σ_{y∈N(i)} c(y)h(y) / Σ_{y∈N(i)} c(y), exactly."""
    out = []
    for i in range(len(raw)):
        nb = network.neighborhood(i)
        w = sum(confidence[j] for j in nb)
        if w == 0:
            raise ZeroConfidenceNeighborhood(f"node {i} has no confident neighbour")
        out.append(sum(confidence[j] * raw[j] for j in nb) / w)
    return tuple(out)


def field_function(values, network: SensorNetwork, mode: str = "pl") -> DefFun:
    """Interpolate node values: 'pl' affine, 'usc' cell max, 'lsc' cell min."""
    K = network.complex
    vals = [as_fraction(v) for v in values]
    if mode == "pl":
        return DefFun.from_vertex_values(K, vals)
    pick = {"usc": max, "lsc": min}.get(mode)
    if pick is None:
        raise ValueError(f"unknown mode {mode!r}")
    return DefFun.from_cell_values(K, [pick(vals[v] for v in c) for c in K.cells])


def estimate_count(values, network: SensorNetwork, m=FLOOR, mode: str = "pl", euler_char: int = 1) -> Fraction:
    return integrate(field_function(values, network, mode), m) / euler_char


@dataclass
class ExperimentConfig:
    scene: TargetScene
    nx: int = 30
    ny: int = 30
    window: tuple = (0, 12, 0, 12)
    p: Fraction = Fraction(1, 3)
    holes: tuple = ()
    seeds: tuple = tuple(range(30))
    measure: Measure = FLOOR
    mode: str = "pl"


@dataclass(frozen=True)
class Readings:
    """Node values along the pipeline: clean counts, corrupted counts, confidence, smoothed field."""

    raw: tuple
    corrupted: tuple
    confidence: tuple
    smoothed: tuple


@dataclass
class SeedResult:
    seed: int
    truth: int
    raw_estimate: Fraction
    smoothed_estimate: Fraction
    readings: Readings = field(repr=False, default=None)


@dataclass
class ExperimentReport:
    network: SensorNetwork
    rows: list

    @property
    def truth(self) -> int:
        return self.rows[0].truth if self.rows else 0

    def median_raw_error(self):
        return statistics.median(abs(r.raw_estimate - r.truth) for r in self.rows)

    def median_smoothed_error(self):
        return statistics.median(abs(r.smoothed_estimate - r.truth) for r in self.rows)

    def medians(self) -> dict:
        return {
            "raw_estimate": statistics.median(r.raw_estimate for r in self.rows),
            "smoothed_estimate": statistics.median(r.smoothed_estimate for r in self.rows),
            "raw_abs_error": self.median_raw_error(),
            "smoothed_abs_error": self.median_smoothed_error(),
        }


def run_seed(config: ExperimentConfig, network: SensorNetwork, raw, seed) -> SeedResult:
    noisy, conf = corrupt(raw, config.p, seed)
    smoothed = smooth(noisy, conf, network)
    chi = config.scene.euler_char
    return SeedResult(
        seed=seed,
        truth=config.scene.truth,
        raw_estimate=estimate_count(noisy, network, config.measure, config.mode, chi),
        smoothed_estimate=estimate_count(smoothed, network, config.measure, config.mode, chi),
        readings=Readings(raw, noisy, conf, smoothed),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    network = SensorNetwork.grid(config.nx, config.ny, config.window, config.holes)
    raw = synthesize_counts(config.scene, network)
    return ExperimentReport(network, [run_seed(config, network, raw, s) for s in config.seeds])


def nine_disks(spacing=4, radius=1, offset=2) -> TargetScene:
    """3×3 array of disjoint disks, the default experiment scene."""
    return TargetScene(
        tuple(Disk(offset + spacing * i, offset + spacing * j, radius) for j in range(3) for i in range(3))
    )
