"""Phase-diagram container and CSV/JSON serialization shared by all methods."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class PhaseDiagram:
    """Grid of per-cell stability records over two reduced-parameter axes.

    axes     : mapping axis name -> strictly monotone list of values
    columns  : names of the per-cell record entries
    cells    : row-major list of records (len = product of axis lengths),
               ordered with the second axis varying fastest
    method   : which classifier produced the cells
    manifest : configuration, seeds and tolerances for reproducibility
    """

    axes: dict[str, list[float]]
    columns: list[str]
    cells: list[tuple]
    method: str
    manifest: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, vals in self.axes.items():
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"axis {name!r} values must be strictly increasing")
        nx, ny = (len(v) for v in self.axes.values())
        if len(self.cells) != nx * ny:
            raise ValueError("cell count does not match axis lengths")

    def axis_names(self) -> tuple[str, str]:
        names = list(self.axes)
        return names[0], names[1]

    def to_csv(self, path) -> None:
        xname, yname = self.axis_names()
        xs, ys = self.axes[xname], self.axes[yname]
        with open(path, "w", newline="") as f:
            f.write(",".join([xname, yname] + list(self.columns)) + "\n")
            i = 0
            for x in xs:
                for y in ys:
                    rec = self.cells[i]
                    f.write(",".join([_fmt(x), _fmt(y)] + [_fmt(v) for v in rec]) + "\n")
                    i += 1

    def manifest_json(self) -> str:
        doc = {"method": self.method, "axes": self.axes,
               "columns": list(self.columns), "manifest": self.manifest}
        return json.dumps(doc, indent=2, sort_keys=True)

    def write(self, csv_path, manifest_path=None) -> None:
        self.to_csv(csv_path)
        if manifest_path is not None:
            with open(manifest_path, "w") as f:
                f.write(self.manifest_json() + "\n")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)
