"""Figures for experiment output: error vs degree and error vs node count."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_error_figures"]

_STYLES = {"tensor": dict(marker="s", color="#1f77b4"), "eliminated": dict(marker="o", color="#d62728")}


def _series(rows, family):
    picked = sorted((r for r in rows if r.family == family), key=lambda r: r.degree)
    return picked


def render_error_figures(rows, stem: str | os.PathLike, domain_label: str) -> list[str]:
    """Write ``<stem>_error_vs_degree.png`` and ``<stem>_error_vs_points.png``."""
    paths = []
    for xattr, xlabel, suffix in (
        ("degree", "degree", "error_vs_degree"),
        ("n_points", "number of nodes", "error_vs_points"),
    ):
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        for family in ("tensor", "eliminated"):
            series = _series(rows, family)
            if not series:
                continue
            ax.semilogy(
                [getattr(r, xattr) for r in series],
                [max(r.max_abs_error, 1e-300) for r in series],
                label=family,
                linewidth=1.2,
                markersize=4,
                **_STYLES[family],
            )
        ax.set_xlabel(xlabel)
        ax.set_ylabel("max abs. error")
        ax.set_title(f"{domain_label}: sampled exponential integrands")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = f"{stem}_{suffix}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
