"""Regenerate the toy corpus under ``tests/fixtures/toy``.

Ten two-sided complexes with short chains laid out as loose helices facing
each other across a gap wide enough that only some residues make contact.
Labels are a fixed function of composition plus noise so that training has
something to fit.
"""

import csv
from pathlib import Path

import numpy as np

from kdbind.alphabet import ALPHABET, THREE_TO_ONE

ONE_TO_THREE = {v: k for k, v in THREE_TO_ONE.items() if v in ALPHABET}
OUT = Path(__file__).with_name("toy")
PSSM_COLUMNS = "ARNDCQEGHILKMFPSTWYV"


def helix(n, origin, axis_shift, rng):
    t = np.arange(n)
    pts = np.stack([2.3 * np.cos(t * 1.745), 2.3 * np.sin(t * 1.745), 1.5 * t], axis=1)
    return pts + origin + axis_shift * np.array([1.0, 0.0, 0.0]) + rng.normal(0, 0.2, (n, 3))


def pdb_lines(chains):
    lines, serial = [], 1
    for chain_id, seq, ca in chains:
        for i, (aa, pos) in enumerate(zip(seq, ca), start=1):
            for name, off in ((" N  ", (-0.9, 0.6, -0.4)), (" CA ", (0, 0, 0)),
                              (" C  ", (0.8, 0.9, 0.5))):
                x, y, z = np.asarray(pos) + off
                lines.append("ATOM  %5d %-4s %3s %1s%4d    %8.3f%8.3f%8.3f  1.00  0.00           %s"
                             % (serial, name, ONE_TO_THREE[aa], chain_id, i, x, y, z, name.strip()[0]))
                serial += 1
        lines.append("TER")
    lines.append("END")
    return "\n".join(lines) + "\n"


def pssm_text(seq, rng):
    head = ("\nLast position-specific scoring matrix computed, weighted observed percentages "
            "rounded down, information per position, and relative weight of gapless real "
            "matches to pseudocounts\n")
    cols = "           " + "  ".join(PSSM_COLUMNS) + "   " + "   ".join(PSSM_COLUMNS) + "\n"
    rows = []
    for i, aa in enumerate(seq, start=1):
        scores = rng.integers(-4, 5, 20)
        scores[PSSM_COLUMNS.index(aa)] = 6
        pct = rng.integers(0, 30, 20)
        rows.append("%5d %s   " % (i, aa) + " ".join("%2d" % s for s in scores) + "   "
                    + " ".join("%3d" % p for p in pct) + "  0.75 0.12")
    tail = "\n\n                      K         Lambda\nStandard Ungapped    0.1340     0.3170\n"
    return head + cols + "\n".join(rows) + tail


def main():
    rng = np.random.default_rng(7)
    OUT.mkdir(exist_ok=True)
    (OUT / "pdb").mkdir(exist_ok=True)
    (OUT / "fasta").mkdir(exist_ok=True)
    (OUT / "pssm").mkdir(exist_ok=True)
    pairs, labels = [], []
    for c in range(10):
        cid = f"toy{c:02d}"
        receptor = ["B", "C"] if c % 4 == 3 else ["B"]
        chains = []
        seq_a = "".join(rng.choice(list(ALPHABET), int(rng.integers(12, 20))))
        chains.append(("A", seq_a, helix(len(seq_a), np.zeros(3), 0.0, rng)))
        for k, ch in enumerate(receptor):
            seq = "".join(rng.choice(list(ALPHABET), int(rng.integers(10, 18))))
            gap = 7.5 + rng.uniform(0, 2.0)
            chains.append((ch, seq, helix(len(seq), np.array([0.0, 6.0 * k, 1.0]), gap, rng)))
        (OUT / "pdb" / f"{cid}.pdb").write_text(pdb_lines(chains))
        (OUT / "fasta" / f"{cid}.fasta").write_text(
            "".join(f">{ch}\n{seq}\n" for ch, seq, _ in chains))
        for ch, seq, _ in chains:
            (OUT / "pssm" / f"{cid}_{ch}.pssm").write_text(pssm_text(seq, rng))
        pairs.append((cid, "A", ";".join(receptor)))
        hydrophobic = sum(seq.count(a) for _, seq, _ in chains for a in "AILMFVW")
        total = sum(len(seq) for _, seq, _ in chains)
        labels.append((cid, round(-6.0 - 8.0 * hydrophobic / total + rng.normal(0, 0.4), 3)))
    with open(OUT / "pairs.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["complex_id", "ligand_chains", "receptor_chains"])
        w.writerows(pairs)
    with open(OUT / "labels.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["complex_id", "delta_g"])
        w.writerows(labels)


if __name__ == "__main__":
    main()
