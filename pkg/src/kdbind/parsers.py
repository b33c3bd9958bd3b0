"""Readers for FASTA, PDB, PSI-BLAST PSSM and CSV corpus files.

Every reader is a pure function of its input; nothing is cached between
calls.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .alphabet import UNKNOWN, normalize_sequence, three_to_one
from .table import FeatureTable


class ParseError(ValueError):
    """Input text does not follow the expected file layout."""


class ValidationError(ValueError):
    """Input parsed but violates a content contract."""


@dataclass(frozen=True)
class ProteinChain:
    chain_id: str
    sequence: str

    def __post_init__(self):
        if not self.sequence:
            raise ValidationError(f"chain {self.chain_id!r} has an empty sequence")
        object.__setattr__(self, "sequence", normalize_sequence(self.sequence))

    def __len__(self) -> int:
        return len(self.sequence)


class ResidueKey(NamedTuple):
    chain_id: str
    residue_seq: int
    insertion_code: str = ""


@dataclass(frozen=True)
class Atom:
    serial: int
    atom_name: str
    residue_name: str
    residue_seq: int
    chain_id: str
    position: tuple[float, float, float]
    insertion_code: str = ""

    @property
    def residue_key(self) -> ResidueKey:
        return ResidueKey(self.chain_id, self.residue_seq, self.insertion_code)

    @property
    def residue_type(self) -> str:
        """One-letter code, ``UNKNOWN`` for anything non-canonical."""
        return three_to_one(self.residue_name)


@dataclass
class ComplexStructure:
    complex_id: str
    receptor_chains: frozenset[str]
    ligand_chains: frozenset[str]
    atoms: list[Atom] = field(default_factory=list)

    def __post_init__(self):
        self.receptor_chains = frozenset(self.receptor_chains)
        self.ligand_chains = frozenset(self.ligand_chains)
        _check_sides(self.receptor_chains, self.ligand_chains)
        for atom in self.atoms:
            if atom.chain_id not in self.receptor_chains | self.ligand_chains:
                raise ValidationError(
                    f"atom {atom.serial} on undeclared chain {atom.chain_id!r}"
                )

    def side_atoms(self, side: str) -> list[Atom]:
        chains = self._chains(side)
        return [a for a in self.atoms if a.chain_id in chains]

    def _chains(self, side: str) -> frozenset[str]:
        if side == "receptor":
            return self.receptor_chains
        if side == "ligand":
            return self.ligand_chains
        raise ValueError(f"side must be 'receptor' or 'ligand', got {side!r}")

    def swapped(self) -> "ComplexStructure":
        """Same atoms with the receptor and ligand labels exchanged."""
        return ComplexStructure(
            self.complex_id, self.ligand_chains, self.receptor_chains, list(self.atoms)
        )


@dataclass(frozen=True)
class PssmProfile:
    """Log-odds block of a PSI-BLAST profile.

    ``columns`` gives the residue letter of each score column in file order
    (``ARNDCQEGHILKMFPSTWYV`` for PSI-BLAST).
    """

    scores: np.ndarray
    residues: str = ""
    columns: str = "ARNDCQEGHILKMFPSTWYV"

    def __post_init__(self):
        scores = np.asarray(self.scores)
        if scores.ndim != 2 or scores.shape[1] != 20:
            raise ValidationError(f"PSSM score block must be L x 20, got {scores.shape}")
        if scores.shape[0] < 1:
            raise ValidationError("PSSM has no positions")
        if self.residues and len(self.residues) != scores.shape[0]:
            raise ValidationError("PSSM residue string does not match row count")
        object.__setattr__(self, "scores", scores)

    @property
    def sequence_length(self) -> int:
        return int(self.scores.shape[0])


@dataclass(frozen=True)
class LabelRecord:
    complex_id: str
    delta_g: float
    ph: float | None = None
    temperature: float | None = None
    method: str | None = None


@dataclass
class LabeledCorpus:
    records: list[LabelRecord]

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if rec.complex_id in seen:
                raise ValidationError(f"duplicate complex_id {rec.complex_id!r} in labels")
            seen.add(rec.complex_id)
            if not math.isfinite(rec.delta_g):
                raise ValidationError(f"delta_g for {rec.complex_id!r} is not finite")

    @property
    def ids(self) -> list[str]:
        return [r.complex_id for r in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def values_for(self, ids: Iterable[str]) -> np.ndarray:
        lookup = {r.complex_id: r.delta_g for r in self.records}
        missing = [i for i in ids if i not in lookup]
        if missing:
            raise ValidationError(f"no label for complexes: {', '.join(missing)}")
        return np.array([lookup[i] for i in ids], dtype=np.float64)


def _check_sides(receptor: frozenset[str], ligand: frozenset[str]) -> None:
    if not receptor or not ligand:
        raise ValueError("receptor and ligand chain sets must both be non-empty")
    if receptor & ligand:
        shared = ", ".join(sorted(receptor & ligand))
        raise ValueError(f"chains declared on both sides: {shared}")


# FASTA ---------------------------------------------------------------------

def parse_fasta(text: str) -> list[ProteinChain]:
    if ">" not in text:
        raise ParseError("no FASTA header ('>') found")
    chains = []
    header = None
    parts: list[str] = []

    def flush():
        if header is None:
            return
        seq = "".join(parts)
        if not seq:
            raise ParseError(f"empty sequence under header {header!r}")
        chains.append(ProteinChain(header, seq))

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            tokens = line[1:].split()
            if not tokens:
                raise ParseError("FASTA header without identifier")
            header, parts = tokens[0], []
        elif header is None:
            raise ParseError("sequence data before the first FASTA header")
        else:
            parts.append("".join(line.split()))
    flush()
    return chains


def format_fasta(chains: Iterable[ProteinChain], width: int = 60) -> str:
    out = []
    for chain in chains:
        out.append(f">{chain.chain_id}")
        seq = chain.sequence
        out.extend(seq[i:i + width] for i in range(0, len(seq), width))
    return "\n".join(out) + "\n"


# PDB -----------------------------------------------------------------------

def parse_pdb(
    text: str,
    receptor_chains: Iterable[str],
    ligand_chains: Iterable[str],
    complex_id: str = "",
) -> ComplexStructure:
    """Read the ATOM records of the first model.

    Only atoms on declared chains with a blank or ``A`` alternate location
    are kept.
    """
    receptor = frozenset(receptor_chains)
    ligand = frozenset(ligand_chains)
    _check_sides(receptor, ligand)
    declared = receptor | ligand

    atoms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("ENDMDL"):
            break
        if not line.startswith("ATOM"):
            continue
        chain = line[21:22]
        if chain not in declared:
            continue
        if line[16:17] not in (" ", "A", ""):
            continue
        try:
            serial = int(line[6:11])
            resseq = int(line[22:26])
            pos = (float(line[30:38]), float(line[38:46]), float(line[46:54]))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: malformed ATOM record ({exc})") from None
        if not all(math.isfinite(c) for c in pos):
            raise ParseError(f"line {lineno}: non-finite coordinate")
        atoms.append(Atom(
            serial=serial,
            atom_name=line[12:16].strip(),
            residue_name=line[17:20].strip(),
            residue_seq=resseq,
            chain_id=chain,
            position=pos,
            insertion_code=line[26:27].strip(),
        ))

    present = {a.chain_id for a in atoms}
    empty = sorted(declared - present)
    if empty:
        raise ValidationError(f"declared chains with no ATOM records: {', '.join(empty)}")
    return ComplexStructure(complex_id, receptor, ligand, atoms)


# PSSM ----------------------------------------------------------------------

_PSSM_ROW = re.compile(r"^\s*(\d+)\s+(\S)\s+(.*)$")
_INT = re.compile(r"^-?\d+$")


def parse_pssm(text: str) -> PssmProfile:
    lines = text.splitlines()
    columns = None
    start = 0
    for i, line in enumerate(lines):
        letters = line.split()
        if len(letters) >= 20 and all(len(t) == 1 and t.isalpha() for t in letters[:20]):
            columns = "".join(letters[:20]).upper()
            start = i + 1
            break
    if columns is None:
        raise ParseError("PSSM column header not found")

    rows, residues = [], []
    for line in lines[start:]:
        if not line.strip():
            if rows:
                break
            continue
        m = _PSSM_ROW.match(line)
        if m is None:
            if rows:
                break
            continue
        position = int(m.group(1))
        tokens = m.group(3).split()
        n_int = 0
        for t in tokens:
            if not _INT.match(t):
                break
            n_int += 1
        if n_int != 40:
            raise ParseError(
                f"PSSM position {position}: expected 40 integer columns, found {n_int}"
            )
        rows.append([int(t) for t in tokens[:20]])
        residues.append(m.group(2).upper())
    if not rows:
        raise ParseError("PSSM contains no score rows")
    return PssmProfile(
        np.array(rows, dtype=np.int64),
        residues=normalize_sequence("".join(residues)),
        columns=columns,
    )


# CSV -----------------------------------------------------------------------

def _read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty CSV (header row required)") from None
        rows = [row for row in reader if row]
    return [h.strip() for h in header], rows


def load_descriptor_csv(path, expected_dim: int | None = None,
                        descriptor: str | None = None) -> FeatureTable:
    header, rows = _read_csv(path)
    if not header or header[0] != "complex_id":
        raise ParseError(f"{path}: first header column must be 'complex_id'")
    dim = len(header) - 1
    if dim < 1:
        raise ParseError(f"{path}: no feature columns")
    if expected_dim is not None and dim != expected_dim:
        raise ValidationError(f"{path}: expected {expected_dim} features, file has {dim}")

    ids, values, seen = [], [], set()
    for r, row in enumerate(rows, start=1):
        if len(row) != dim + 1:
            raise ParseError(f"{path}: row {r} has {len(row) - 1} features, expected {dim}")
        cid = row[0].strip()
        if cid in seen:
            raise ValidationError(f"{path}: duplicate complex_id {cid!r} at row {r}")
        seen.add(cid)
        vec = []
        for c, cell in enumerate(row[1:], start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric cell at row {r}, column {header[c]!r}: {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise ValidationError(
                    f"{path}: non-finite cell at row {r}, column {header[c]!r}"
                )
            vec.append(v)
        ids.append(cid)
        values.append(vec)
    arr = np.array(values, dtype=np.float64).reshape(len(ids), dim)
    return FeatureTable(ids, arr, descriptor=descriptor)


def load_labels_csv(path) -> LabeledCorpus:
    header, rows = _read_csv(path)
    lower = [h.lower() for h in header]
    if "complex_id" not in lower or "delta_g" not in lower:
        raise ParseError(f"{path}: labels header needs complex_id and delta_g")
    col = {name: lower.index(name) for name in
           ("complex_id", "delta_g", "ph", "temperature", "method") if name in lower}

    def cell(row, name):
        i = col.get(name)
        if i is None or i >= len(row):
            return None
        value = row[i].strip()
        return value or None

    records = []
    for r, row in enumerate(rows, start=1):
        cid = cell(row, "complex_id")
        raw = cell(row, "delta_g")
        if cid is None:
            raise ParseError(f"{path}: row {r} has no complex_id")
        if raw is None:
            raise ValidationError(f"{path}: row {r} ({cid}) is missing delta_g")
        try:
            dg = float(raw)
        except ValueError:
            raise ParseError(f"{path}: row {r} ({cid}) delta_g {raw!r} is not numeric") from None
        if not math.isfinite(dg):
            raise ValidationError(f"{path}: row {r} ({cid}) delta_g is not finite")
        ph, temp = cell(row, "ph"), cell(row, "temperature")
        try:
            records.append(LabelRecord(
                cid, dg,
                ph=float(ph) if ph is not None else None,
                temperature=float(temp) if temp is not None else None,
                method=cell(row, "method"),
            ))
        except ValueError:
            raise ParseError(f"{path}: row {r} ({cid}) has non-numeric metadata") from None
    return LabeledCorpus(records)


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


__all__ = [
    "Atom", "ComplexStructure", "LabelRecord", "LabeledCorpus", "ParseError",
    "ProteinChain", "PssmProfile", "ResidueKey", "UNKNOWN", "ValidationError",
    "format_fasta", "load_descriptor_csv", "load_labels_csv", "parse_fasta",
    "parse_pdb", "parse_pssm", "read_text",
]
