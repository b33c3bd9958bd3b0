"""Builders for small synthetic inputs shared by the tests."""

import numpy as np

from kdbind.alphabet import ALPHABET, THREE_TO_ONE
from kdbind.parsers import Atom, ComplexStructure

ONE_TO_THREE = {v: k for k, v in THREE_TO_ONE.items()}


def atom_line(serial, name, resname, chain, resseq, x, y, z, altloc=" ", record="ATOM",
              icode=" "):
    return ("%-6s%5d %-4s%1s%3s %1s%4d%1s   %8.3f%8.3f%8.3f  1.00  0.00"
            % (record, serial, name, altloc, resname, chain, resseq, icode, x, y, z))


def toy_complex(rng, max_atoms=30, n_res_max=8, spread=12.0, unknown_rate=0.0,
                complex_id="toy") -> ComplexStructure:
    """Random receptor (chain R) and ligand (chain L) with <= max_atoms atoms per side."""
    atoms, serial = [], 1
    for chain, shift in (("R", 0.0), ("L", spread * 0.6)):
        n_atoms = int(rng.integers(1, max_atoms + 1))
        n_res = int(rng.integers(1, min(n_res_max, n_atoms) + 1))
        owner = np.sort(np.concatenate([np.arange(n_res),
                                        rng.integers(0, n_res, n_atoms - n_res)]))
        types = [("UNK" if rng.random() < unknown_rate
                  else ONE_TO_THREE[ALPHABET[rng.integers(20)]]) for _ in range(n_res)]
        for r in owner:
            pos = tuple(float(v) for v in rng.uniform(0, spread, 3) + [shift, 0, 0])
            atoms.append(Atom(serial, "CA", types[r], int(r) + 1, chain, pos))
            serial += 1
    return ComplexStructure(complex_id, {"R"}, {"L"}, atoms)


def brute_contacts(structure: ComplexStructure, cutoff: float) -> set:
    rec = structure.side_atoms("receptor")
    lig = structure.side_atoms("ligand")
    out = set()
    for a in rec:
        for b in lig:
            d = sum((p - q) ** 2 for p, q in zip(a.position, b.position)) ** 0.5
            if d <= cutoff:
                out.add((a.residue_key, b.residue_key))
    return out


def brute_nirp(structure: ComplexStructure, cutoff: float) -> np.ndarray:
    from kdbind.structfeat import NIRP_BINS
    names = {a.residue_key: THREE_TO_ONE.get(a.residue_name, "X") for a in structure.atoms}
    counts = np.zeros(len(NIRP_BINS))
    for r, l in brute_contacts(structure, cutoff):
        pair = "".join(sorted(names[r] + names[l]))
        counts[NIRP_BINS.index(pair) if "X" not in pair else NIRP_BINS.index("X")] += 1
    return counts / counts.sum() if counts.sum() else counts
