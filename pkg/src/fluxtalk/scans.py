"""ScanMap: a 2D measurement grid with axis metadata, plus file round-trips.

CSV layout: first row is the x-axis values (with a blank corner cell),
first column is the y-axis values, body is the signal. JSON mirrors the
type field-by-field. File naming follows {kind}_{probe}[_{source}].{csv|json}.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError

SCAN_KINDS = ("spectroscopy", "mzlc", "ramsey", "cz_swap")


@dataclass(frozen=True)
class Axis:
    name: str
    unit: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise DomainError(f"axis {self.name!r} must be a non-empty 1D grid")

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class ScanMap:
    """One simulated or measured scan: signal[y_index, x_index]."""

    kind: str
    x_axis: Axis
    y_axis: Axis
    signal: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SCAN_KINDS:
            raise DomainError(f"unknown scan kind {self.kind!r}")
        signal = np.asarray(self.signal, dtype=float)
        signal.setflags(write=False)
        object.__setattr__(self, "signal", signal)
        expected = (len(self.y_axis), len(self.x_axis))
        if signal.shape != expected:
            raise DomainError(
                f"signal shape {signal.shape} != (len(y), len(x)) = {expected}")
        if not np.all(np.isfinite(signal)):
            raise DomainError("scan signal contains non-finite values")

    def file_stem(self) -> str:
        probe = self.meta.get("probe_label", "unknown")
        source = self.meta.get("source_label")
        return f"{self.kind}_{probe}_{source}" if source else f"{self.kind}_{probe}"

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "x_axis": {"name": self.x_axis.name, "unit": self.x_axis.unit,
                       "values": self.x_axis.values.tolist()},
            "y_axis": {"name": self.y_axis.name, "unit": self.y_axis.unit,
                       "values": self.y_axis.values.tolist()},
            "signal": self.signal.tolist(),
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ScanMap":
        return cls(
            kind=doc["kind"],
            x_axis=Axis(doc["x_axis"]["name"], doc["x_axis"]["unit"],
                        np.asarray(doc["x_axis"]["values"], dtype=float)),
            y_axis=Axis(doc["y_axis"]["name"], doc["y_axis"]["unit"],
                        np.asarray(doc["y_axis"]["values"], dtype=float)),
            signal=np.asarray(doc["signal"], dtype=float),
            meta=dict(doc.get("meta", {})),
        )


def write_scan_json(scan: ScanMap, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(scan.to_json_dict(), sort_keys=True) + "\n")
    return path


def read_scan_json(path: str | Path) -> ScanMap:
    return ScanMap.from_json_dict(json.loads(Path(path).read_text()))


def write_scan_csv(scan: ScanMap, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + [repr(x) for x in scan.x_axis.values.tolist()])
        for y, row in zip(scan.y_axis.values.tolist(), scan.signal.tolist()):
            writer.writerow([repr(y)] + [repr(v) for v in row])
    return path


def read_scan_csv(path: str | Path, kind: str = "spectroscopy",
                  meta: dict | None = None) -> ScanMap:
    """Rebuild a ScanMap from the CSV layout (axis names are not stored there)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    x = np.array([float(v) for v in rows[0][1:]])
    y = np.array([float(r[0]) for r in rows[1:]])
    signal = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return ScanMap(kind=kind, x_axis=Axis("x", "", x), y_axis=Axis("y", "", y),
                   signal=signal, meta=dict(meta or {}))


def save_scan(scan: ScanMap, directory: str | Path) -> tuple[Path, Path]:
    """Write both representations under the canonical file names."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = scan.file_stem()
    return (write_scan_csv(scan, directory / f"{stem}.csv"),
            write_scan_json(scan, directory / f"{stem}.json"))
