"""Tables of polynomial values and their CSV / JSON encodings.

CSV layout: ``#``-prefixed metadata lines (version, family, route, d, N,
rotation, notes), then one fixed header row, then one row per entry.
Numbers are written with 17 significant digits, which round-trips doubles
exactly and does not depend on the locale.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = ["Table", "TableRow", "format_float", "parse_float"]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def parse_float(s: str) -> float:
    return float(s)


@dataclass(frozen=True)
class TableRow:
    degree: tuple[int, ...] | None
    variable: tuple[int, ...]
    value: float
    route: str


@dataclass
class Table:
    family: str
    d: int
    N: int
    rotation: np.ndarray
    version: str
    rows: list[TableRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def has_degree(self) -> bool:
        return self.family != "W"

    def columns(self) -> list[str]:
        deg = [f"m{j + 1}" for j in range(self.d)] if self.has_degree else []
        var = [f"i{j + 1}" for j in range(self.d)]
        return deg + var + ["value", "route"]

    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    # -- CSV -----------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# krawpoly {self.version}\n")
        buf.write(f"# family={self.family} d={self.d} N={self.N}\n")
        rot = ";".join(",".join(format_float(x) for x in row) for row in self.rotation)
        buf.write(f"# rotation={rot}\n")
        for note in self.notes:
            buf.write(f"# note={note}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns())
        for r in self.rows:
            idx = (list(r.degree) if self.has_degree else []) + list(r.variable)
            w.writerow(idx + [format_float(r.value), r.route])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        meta, notes, body = {}, [], []
        for line in text.splitlines():
            if line.startswith("# krawpoly "):
                meta["version"] = line[len("# krawpoly ") :]
            elif line.startswith("# note="):
                notes.append(line[len("# note=") :])
            elif line.startswith("# rotation="):
                rows = line[len("# rotation=") :].split(";")
                meta["rotation"] = np.array([[parse_float(x) for x in r.split(",")] for r in rows])
            elif line.startswith("# "):
                for kv in line[2:].split():
                    k, v = kv.split("=", 1)
                    meta[k] = v
            elif line:
                body.append(line)
        try:
            d, N, family = int(meta["d"]), int(meta["N"]), meta["family"]
            table = cls(family, d, N, meta["rotation"], meta["version"], notes=notes)
        except KeyError as exc:
            raise InputError(f"CSV table is missing metadata {exc}") from None
        reader = csv.reader(body)
        header = next(reader)
        if header != table.columns():
            raise InputError(f"unexpected CSV header {header}")
        nd = d if table.has_degree else 0
        for rec in reader:
            ints = [int(x) for x in rec[: nd + d]]
            table.rows.append(
                TableRow(tuple(ints[:nd]) if nd else None, tuple(ints[nd:]), parse_float(rec[nd + d]), rec[nd + d + 1])
            )
        return table

    # -- JSON ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "family": self.family,
            "d": self.d,
            "N": self.N,
            "rotation": self.rotation.tolist(),
            "notes": list(self.notes),
            "columns": self.columns(),
            "rows": [
                {
                    "degree": list(r.degree) if r.degree is not None else None,
                    "variable": list(r.variable),
                    "value": _json_float(r.value),
                    "route": r.route,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Table":
        obj = json.loads(text)
        table = cls(obj["family"], obj["d"], obj["N"], np.array(obj["rotation"], dtype=float), obj["version"], notes=obj["notes"])
        for r in obj["rows"]:
            deg = tuple(r["degree"]) if r["degree"] is not None else None
            val = float("nan") if r["value"] is None else float(r["value"])
            table.rows.append(TableRow(deg, tuple(r["variable"]), val, r["route"]))
        return table


def _json_float(x: float):
    # JSON has no NaN; undefined entries are written as null
    return None if np.isnan(x) else float(x)
