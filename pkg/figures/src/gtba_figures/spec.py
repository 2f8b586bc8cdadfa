"""Figure specification: which CSV columns to plot, grouped how."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

__all__ = ["FigureSpec", "load_spec"]

_REQUIRED_KEYS = ("csv", "x", "y", "group_by", "out")


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    x_column: str
    y_column: str
    group_by: str
    out_path: Path
    log_x: bool = False
    title: str | None = None


def load_spec(path: str | Path) -> FigureSpec:
    """Load a figure spec JSON; relative paths resolve against the spec file."""
    spec_path = Path(path)
    try:
        raw = json.loads(spec_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read figure spec {spec_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"figure spec {spec_path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"figure spec {spec_path} must be a JSON object")
    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ValueError(f"figure spec {spec_path} is missing key '{key}'")
    base = spec_path.parent
    return FigureSpec(
        csv_path=base / raw["csv"],
        x_column=str(raw["x"]),
        y_column=str(raw["y"]),
        group_by=str(raw["group_by"]),
        out_path=base / raw["out"],
        log_x=bool(raw.get("log_x", False)),
        title=raw.get("title"),
    )
