"""Deterministic SVG figures.

Rendering goes through matplotlib's SVG backend with a pinned hash salt
and no date stamp, so the same inputs always produce the same bytes.
Structural artists carry stable element ids (``data-points``,
``identity-line``, ``regression-line``), which keeps the output checkable
as text: markers can be counted inside their group, line geometry can be
extracted, labels can be grepped.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from .errors import InsufficientDataError, InvalidParamsError
from .estimate import LogIncomeSample, RegressionFit
from .model import MobilityReport

__all__ = ["render_figure", "render_sweep_figure"]

_SVG_RC = {"svg.hashsalt": "mobnorm", "svg.fonttype": "none"}


def _to_svg(fig: Figure) -> bytes:
    buf = io.BytesIO()
    with mpl.rc_context(_SVG_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def render_figure(sample: LogIncomeSample, fit: RegressionFit) -> bytes:
    """Scatter of child on parent log-income with the identity line and the
    fitted regression line, as SVG bytes."""
    if sample.n < 2:
        raise InsufficientDataError(f"a scatter figure needs at least 2 pairs, got {sample.n}")
    xp = sample.parent
    xc = sample.child
    lo = float(min(xp.min(), xc.min()))
    hi = float(max(xp.max(), xc.max()))
    if lo == hi:
        lo -= 0.5
        hi += 0.5
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad

    fig = Figure(figsize=(6.4, 4.8), dpi=100)
    ax = fig.add_subplot(111)
    ax.plot(
        xp,
        xc,
        linestyle="none",
        marker="o",
        markerfacecolor="none",
        markeredgecolor="black",
        markersize=5,
        gid="data-points",
    )
    ax.plot([lo, hi], [lo, hi], color="tab:blue", linewidth=1.5, gid="identity-line", label="child = parent")
    xs = np.array([lo, hi])
    ax.plot(
        xs,
        fit.alpha + fit.beta * xs,
        color="tab:red",
        linewidth=1.5,
        gid="regression-line",
        label=f"fit: slope {fit.beta:.3f}",
    )
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("Parent log-income")
    ax.set_ylabel("Child log-income")
    ax.legend(loc="upper left", frameon=False)
    return _to_svg(fig)


def render_sweep_figure(
    param_name: str,
    values: Sequence[float],
    reports: Sequence[MobilityReport],
) -> bytes:
    """Relative and absolute mobility against one swept parameter."""
    if len(values) != len(reports):
        raise InvalidParamsError(f"{len(values)} grid values but {len(reports)} reports")
    if len(values) < 1:
        raise InsufficientDataError("a sweep figure needs at least one grid point")
    xs = np.asarray(values, dtype=float)
    rel = np.array([r.relative_mobility for r in reports])
    absolute = np.array([r.absolute_mobility for r in reports])

    fig = Figure(figsize=(6.4, 4.8), dpi=100)
    ax = fig.add_subplot(111)
    ax.plot(xs, rel, color="tab:blue", marker="o", markersize=4, gid="relative-curve", label="relative mobility")
    ax.plot(xs, absolute, color="tab:red", marker="o", markersize=4, gid="absolute-curve", label="absolute mobility")
    ax.set_xlabel(param_name)
    ax.set_ylabel("mobility")
    ax.legend(frameon=False)
    return _to_svg(fig)
