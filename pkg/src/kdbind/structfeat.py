"""Interface descriptors computed from bound receptor/ligand structures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .alphabet import ALPHABET, INDEX, UNKNOWN
from .parsers import ComplexStructure, ResidueKey
from .seqfeat import DescriptorError, blosum_mean

DEFAULT_CUTOFF = 8.0

#: 210 unordered canonical pairs in lexicographic order, then the Unknown bin.
NIRP_BINS: tuple[str, ...] = tuple(
    f"{a}{b}" for i, a in enumerate(ALPHABET) for b in ALPHABET[i:]
) + (UNKNOWN,)
_PAIR_BIN = {pair: i for i, pair in enumerate(NIRP_BINS[:-1])}
UNKNOWN_BIN = len(NIRP_BINS) - 1

# Atoms per receptor block in the distance sweep; bounds peak memory.
_CHUNK = 512


class InterfaceError(ValueError):
    pass


@dataclass
class Residue:
    key: ResidueKey
    residue_type: str
    coords: np.ndarray


@dataclass
class InterfaceMap:
    complex_id: str
    receptor_iface: set[ResidueKey] = field(default_factory=set)
    ligand_iface: set[ResidueKey] = field(default_factory=set)
    contact_pairs: list[tuple[ResidueKey, ResidueKey]] = field(default_factory=list)
    residue_types: dict[ResidueKey, str] = field(default_factory=dict)

    def pair_types(self) -> list[tuple[str, str]]:
        return [(self.residue_types[r], self.residue_types[l]) for r, l in self.contact_pairs]


def residues(structure: ComplexStructure, side: str) -> list[Residue]:
    """Residues of one side in first-seen order, with their atom coordinates."""
    groups: dict[ResidueKey, list] = {}
    types: dict[ResidueKey, str] = {}
    for atom in structure.side_atoms(side):
        key = atom.residue_key
        groups.setdefault(key, []).append(atom.position)
        types.setdefault(key, atom.residue_type)
    return [Residue(k, types[k], np.array(v, dtype=np.float64)) for k, v in groups.items()]


def residue_min_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).reshape(-1, 3)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 3)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("residue_min_distance needs non-empty atom lists")
    diff = a[:, None, :] - b[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).min())


def _side_arrays(res: list[Residue]) -> tuple[np.ndarray, np.ndarray]:
    coords = np.concatenate([r.coords for r in res])
    owner = np.repeat(np.arange(len(res)), [len(r.coords) for r in res])
    return coords, owner


def interface_map(structure: ComplexStructure, cutoff: float = DEFAULT_CUTOFF) -> InterfaceMap:
    rec = residues(structure, "receptor")
    lig = residues(structure, "ligand")
    if not rec or not lig:
        empty = "receptor" if not rec else "ligand"
        raise InterfaceError(f"{structure.complex_id}: {empty} side has no residues")

    rc, rown = _side_arrays(rec)
    lc, lown = _side_arrays(lig)
    # Only atoms inside the partner's bounding box grown by the cutoff can touch it.
    r_keep = np.all((rc >= lc.min(0) - cutoff) & (rc <= lc.max(0) + cutoff), axis=1)
    l_keep = np.all((lc >= rc.min(0) - cutoff) & (lc <= rc.max(0) + cutoff), axis=1)
    rc, rown = rc[r_keep], rown[r_keep]
    lc, lown = lc[l_keep], lown[l_keep]

    touching = np.zeros((len(rec), len(lig)), dtype=bool)
    for s in range(0, len(rc), _CHUNK):
        block = rc[s:s + _CHUNK]
        diff = block[:, None, :] - lc[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        ri, li = np.nonzero(dist <= cutoff)
        touching[rown[s:s + _CHUNK][ri], lown[li]] = True

    imap = InterfaceMap(structure.complex_id)
    imap.residue_types = {r.key: r.residue_type for r in rec + lig}
    for i, j in zip(*np.nonzero(touching)):
        imap.contact_pairs.append((rec[i].key, lig[j].key))
        imap.receptor_iface.add(rec[i].key)
        imap.ligand_iface.add(lig[j].key)
    return imap


def nirp_bin(a: str, b: str) -> int:
    if a not in INDEX or b not in INDEX:
        return UNKNOWN_BIN
    return _PAIR_BIN[a + b if a <= b else b + a]


def nirp_from_map(imap: InterfaceMap, normalize: bool = True) -> np.ndarray:
    counts = np.zeros(len(NIRP_BINS))
    for a, b in imap.pair_types():
        counts[nirp_bin(a, b)] += 1.0
    total = counts.sum()
    if normalize and total > 0:
        counts /= total
    return counts


def nirp(structure: ComplexStructure, cutoff: float = DEFAULT_CUTOFF,
         normalize: bool = True) -> np.ndarray:
    """Histogram of unordered residue-type pairs across the interface (211 bins).

    Each contacting (receptor, ligand) residue pair adds one count. With
    ``normalize`` the counts are divided by the number of contacts.
    """
    return nirp_from_map(interface_map(structure, cutoff), normalize=normalize)


def blosum_interface(structure: ComplexStructure, cutoff: float = DEFAULT_CUTOFF,
                     unique: bool = False) -> np.ndarray:
    """BLOSUM-62 means of ligand then receptor interface residues (40 values)."""
    imap = interface_map(structure, cutoff)
    if not imap.contact_pairs:
        raise InterfaceError(f"{structure.complex_id}: no interface at cutoff {cutoff} A")
    halves = []
    for side, keys in (("ligand", imap.ligand_iface), ("receptor", imap.receptor_iface)):
        types = [imap.residue_types[k] for k in sorted(keys)]
        try:
            halves.append(blosum_mean(types, unique=unique))
        except DescriptorError:
            raise InterfaceError(
                f"{structure.complex_id}: {side} interface has no canonical residues"
            ) from None
    return np.concatenate(halves)
