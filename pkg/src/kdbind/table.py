"""Feature tables and their CSV/manifest exchange format."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np


class Descriptor(str, Enum):
    KMER = "KMER"
    KMER_G = "KMER_G"
    BLOSUM = "BLOSUM"
    PROPY = "PROPY"
    PSSM = "PSSM"
    PROTPARAM = "PROTPARAM"
    NIRP = "NIRP"
    BLOSUM_IFACE = "BLOSUM_IFACE"
    MOAL = "MOAL"
    DIAS = "DIAS"


#: Complex-level widths of the fixed-size descriptors (PROPY is ingested as-is).
DESCRIPTOR_DIMS = {
    Descriptor.KMER: 800,
    Descriptor.KMER_G: 2 * (7**2 + 7**3 + 7**4),
    Descriptor.BLOSUM: 40,
    Descriptor.PSSM: 40,
    Descriptor.PROTPARAM: 14,
    Descriptor.NIRP: 211,
    Descriptor.BLOSUM_IFACE: 40,
    Descriptor.MOAL: 200,
    Descriptor.DIAS: 26,
}


@dataclass(frozen=True)
class FeatureVector:
    complex_id: str
    descriptor: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("feature vector must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.complex_id}: non-finite {self.descriptor} value")
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


class FeatureTable:
    """Rows of descriptor values keyed by complex id, in insertion order."""

    def __init__(self, ids: Sequence[str], values, descriptor: str | None = None):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != len(ids):
            raise ValueError(
                f"values shape {values.shape} does not match {len(ids)} ids"
            )
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate complex ids in feature table")
        self.ids = list(ids)
        self.values = values
        self.descriptor = descriptor
        self._index = {cid: i for i, cid in enumerate(self.ids)}

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector]) -> "FeatureTable":
        if not vectors:
            raise ValueError("no feature vectors")
        tags = {v.descriptor for v in vectors}
        if len({v.dim for v in vectors}) != 1:
            raise ValueError("feature vectors have different dimensions")
        return cls([v.complex_id for v in vectors],
                   np.vstack([v.values for v in vectors]),
                   descriptor=tags.pop() if len(tags) == 1 else None)

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, cid) -> bool:
        return cid in self._index

    def row(self, cid: str) -> np.ndarray:
        return self.values[self._index[cid]]

    def select(self, ids: Sequence[str]) -> "FeatureTable":
        """Rows for ``ids`` in the given order; raises ``KeyError`` listing any missing."""
        missing = [cid for cid in ids if cid not in self._index]
        if missing:
            raise KeyError(f"complexes missing from {self.descriptor or 'table'}: "
                           + ", ".join(missing))
        idx = [self._index[cid] for cid in ids]
        return FeatureTable(list(ids), self.values[idx], self.descriptor)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["complex_id"] + [f"f{j}" for j in range(self.dim)])
        for cid, row in zip(self.ids, self.values):
            writer.writerow([cid] + [repr(float(v)) for v in row])
        return buf.getvalue()

    def manifest(self, **extra) -> dict:
        out = {"descriptor": self.descriptor, "dim": self.dim}
        out.update(extra)
        return out

    def write(self, path, **manifest_extra) -> None:
        """Write ``path`` plus a ``<path>.json`` sidecar manifest."""
        path = Path(path)
        atomic_write(path, self.to_csv_text())
        atomic_write(manifest_path(path),
                     json.dumps(self.manifest(**manifest_extra), indent=2) + "\n")


def manifest_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".json")


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the same directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
