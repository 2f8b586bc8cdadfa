"""Render multi-curve comparison figures from experiment CSVs."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spec import FigureSpec

__all__ = ["RenderResult", "render"]

# axis units for the known experiment CSV metric columns
AXIS_UNITS = {
    "mean_duration": "slots",
    "ci_duration": "slots",
    "mean_detected": "count",
    "outage": "probability",
}

_MARKERS = ("o", "s", "^", "D", "v", "x", "*", "P")


@dataclass(frozen=True)
class RenderResult:
    out_path: str
    n_series: int
    n_points: int


def _read_rows(spec: FigureSpec) -> list[dict[str, str]]:
    try:
        with open(spec.csv_path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            for column in (spec.x_column, spec.y_column, spec.group_by):
                if column not in header:
                    raise ValueError(f"column '{column}' not found in {spec.csv_path}")
            rows = list(reader)
    except OSError as exc:
        raise ValueError(f"cannot read CSV {spec.csv_path}: {exc}") from exc
    if not rows:
        raise ValueError(f"CSV {spec.csv_path} has no data rows")
    return rows


def _axis_label(column: str) -> str:
    unit = AXIS_UNITS.get(column)
    return f"{column} [{unit}]" if unit else column


def render(spec: FigureSpec) -> RenderResult:
    """Render one line per group value; deterministic for identical inputs."""
    rows = _read_rows(spec)
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        try:
            x = float(row[spec.x_column])
            y = float(row[spec.y_column])
        except (TypeError, ValueError) as exc:
            raise ValueError(
                f"non-numeric value in columns '{spec.x_column}'/'{spec.y_column}' "
                f"of {spec.csv_path}"
            ) from exc
        series.setdefault(row[spec.group_by], []).append((x, y))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for index, group in enumerate(sorted(series)):
            points = sorted(series[group])
            ax.plot(
                [p[0] for p in points],
                [p[1] for p in points],
                marker=_MARKERS[index % len(_MARKERS)],
                markersize=4,
                label=group,
            )
        if spec.log_x:
            ax.set_xscale("log", base=2)
        ax.set_xlabel(_axis_label(spec.x_column))
        ax.set_ylabel(_axis_label(spec.y_column))
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        spec.out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out_path, dpi=150)
    finally:
        plt.close(fig)
    n_points = sum(len(points) for points in series.values())
    return RenderResult(out_path=str(spec.out_path), n_series=len(series), n_points=n_points)
