"""Static SVG figures, written with ``xml.etree``.

* ``scatter_n<N>.svg``: roots (class ``root``) and critical points (class
  ``critical``) of trial 0 at the largest ``n``, with the unit circle.
* ``angles.svg``: histogram of critical-point angles against the density
  and atoms of the angular law.
* ``convergence.svg``: median ``circular_w1`` against ``n`` on log-log axes.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from ..circle_measure import CircleMeasure
from ..empirics import to_polar
from .report import median_w1_by_n
from .runner import ExperimentReport

SVG_NS = "http://www.w3.org/2000/svg"
W, H, PAD = 480, 360, 48
HIST_BINS = 64


def _svg(width, height, title):
    root = ET.Element("svg", xmlns=SVG_NS, width=str(width), height=str(height),
                      viewBox=f"0 0 {width} {height}")
    ET.SubElement(root, "title").text = title
    ET.SubElement(root, "rect", width=str(width), height=str(height), fill="white")
    return root


def _text(parent, x, y, s, **kw):
    t = ET.SubElement(parent, "text", x=f"{x:.1f}", y=f"{y:.1f}", **{"font-size": "11"}, **kw)
    t.text = s
    return t


def _save(root, path: Path) -> Path:
    ET.indent(root)
    try:
        ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def scatter_svg(roots, critical, title="roots and critical points") -> ET.Element:
    size = 420
    c, s = size / 2, size / 2 - 20
    root = _svg(size, size, title)
    ET.SubElement(root, "circle", {"class": "unit"}, cx=f"{c}", cy=f"{c}", r=f"{s}",
                  fill="none", stroke="black")
    for cls, pts, colour, rad in (("root", roots, "#1f77b4", "1.6"),
                                  ("critical", critical, "#d62728", "1.2")):
        g = ET.SubElement(root, "g", {"class": cls}, fill=colour)
        for z in np.asarray(pts, dtype=complex):
            ET.SubElement(g, "circle", {"class": cls}, cx=f"{c + s * z.real:.2f}",
                          cy=f"{c - s * z.imag:.2f}", r=rad)
    _text(root, 8, 14, f"{len(roots)} roots (blue), {len(critical)} critical points (red)")
    return root


def _continuous_density(m: CircleMeasure, t: np.ndarray) -> np.ndarray:
    if m.kind == "uniform":
        return np.ones_like(t)
    if m.kind == "arc":
        a, b = m.arc_bounds
        return np.where((t >= a) & (t < b), 1.0 / (b - a), 0.0)
    if m.kind == "mixture":
        return sum(w * _continuous_density(c, t) for w, c in zip(m.weights, m.components))
    return np.zeros_like(t)


def _atom_masses(m: CircleMeasure) -> list[tuple[float, float]]:
    if m.kind == "atomic":
        return list(zip(m.atoms, m.weights))
    if m.kind == "mixture":
        return [(a, w * v) for w, c in zip(m.weights, m.components) for a, v in _atom_masses(c)]
    return []


def histogram_svg(angles, m: CircleMeasure, bins: int = HIST_BINS) -> ET.Element:
    """Density histogram of ``angles``; atoms of ``m`` drawn as bin-mass markers."""
    counts, edges = np.histogram(np.asarray(angles, dtype=float), bins=bins, range=(0.0, 1.0))
    dens = counts / max(1, counts.sum()) * bins
    grid = np.linspace(0, 1, 401)
    ref = _continuous_density(m, grid[:-1])
    atoms = _atom_masses(m)
    top = max(1.0, dens.max(), ref.max(), *(w * bins for _, w in atoms)) * 1.05
    root = _svg(W, H, "angular histogram")
    pw, ph = W - 2 * PAD, H - 2 * PAD

    def x(t):
        return PAD + pw * t

    def y(v):
        return H - PAD - ph * v / top

    g = ET.SubElement(root, "g", {"class": "histogram"}, fill="#bbbbbb", stroke="white")
    for lo, hi, v in zip(edges[:-1], edges[1:], dens):
        ET.SubElement(g, "rect", x=f"{x(lo):.2f}", y=f"{y(v):.2f}", width=f"{x(hi) - x(lo):.2f}",
                      height=f"{y(0) - y(v):.2f}")
    if ref.any():
        pts = " ".join(f"{x(t):.2f},{y(v):.2f}" for t, v in zip(grid[:-1], ref))
        ET.SubElement(root, "polyline", {"class": "density"}, points=pts, fill="none",
                      stroke="#1f77b4")
    for a, w in atoms:
        # an atom of mass w fills one bin up to density w * bins
        ET.SubElement(root, "line", {"class": "atom"}, x1=f"{x(a):.2f}", x2=f"{x(a):.2f}",
                      y1=f"{y(0):.2f}", y2=f"{y(w * bins):.2f}", stroke="#d62728")
    ET.SubElement(root, "line", x1=f"{x(0)}", x2=f"{x(1)}", y1=f"{y(0)}", y2=f"{y(0)}", stroke="black")
    for t in (0, 0.25, 0.5, 0.75, 1):
        _text(root, x(t) - 8, H - PAD + 16, f"{t:g}")
    _text(root, 8, 16, f"critical-point angles (turns) vs {m.describe()}")
    return root


def convergence_svg(ns, medians) -> ET.Element:
    """Log-log plot of median ``circular_w1`` against ``n``."""
    ns = np.asarray(ns, dtype=float)
    med = np.asarray(medians, dtype=float)
    root = _svg(W, H, "convergence")
    ok = (ns > 0) & (med > 0) & np.isfinite(med)
    lx, ly = np.log10(ns[ok]), np.log10(med[ok])
    if lx.size == 0:
        return root
    x0, x1 = math.floor(lx.min()), math.ceil(lx.max()) or 1
    y0, y1 = math.floor(ly.min()), math.ceil(ly.max())
    x1 = max(x1, x0 + 1)
    y1 = max(y1, y0 + 1)
    pw, ph = W - 2 * PAD, H - 2 * PAD

    def px(v):
        return PAD + pw * (v - x0) / (x1 - x0)

    def py(v):
        return H - PAD - ph * (v - y0) / (y1 - y0)

    for e in range(x0, x1 + 1):
        _text(root, px(e) - 10, H - PAD + 16, f"1e{e}")
    for e in range(y0, y1 + 1):
        _text(root, 4, py(e) + 4, f"1e{e}")
    ET.SubElement(root, "polyline", {"class": "median-w1"}, fill="none", stroke="#1f77b4",
                  points=" ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(lx, ly)))
    for a, b in zip(lx, ly):
        ET.SubElement(root, "circle", {"class": "median-w1"}, cx=f"{px(a):.2f}", cy=f"{py(b):.2f}",
                      r="3", fill="#1f77b4")
    _text(root, 8, 16, "median circular W1 vs n (log-log)")
    return root


def emit_plots(rep: ExperimentReport, directory) -> list[Path]:
    """Write the three figures into ``directory``; returns their paths."""
    if not rep.trials:
        raise ValueError("cannot plot an empty report")
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    kept = [t for t in rep.trials if t.roots is not None]
    if not kept:
        raise ValueError("report carries no stored roots/critical points to plot")
    big = max(kept, key=lambda t: (t.n, -t.trial))
    paths = [
        _save(scatter_svg(big.roots, big.critical, f"n = {big.n}"), d / f"scatter_n{big.n}.svg"),
        _save(histogram_svg(to_polar(big.critical).angles, rep.config.measure), d / "angles.svg"),
        _save(convergence_svg(*median_w1_by_n(rep)), d / "convergence.svg"),
    ]
    return paths
