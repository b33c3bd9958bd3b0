"""Featurize the bundled toy corpus and run leave-one-complex-out CV.

Same steps as the ``kdbind featurize-* / loco`` commands, but through the
library so the intermediate tables can be inspected.

    python3 demos/toy_pipeline.py
"""

from pathlib import Path

import numpy as np

from kdbind.distill import KdConfig, Mode, loco_cv
from kdbind.parsers import load_labels_csv, parse_fasta, parse_pdb, read_text
from kdbind.seqfeat import complex_features, kmer_composition
from kdbind.structfeat import interface_map, nirp
from kdbind.table import FeatureTable

TOY = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "toy"

labels = load_labels_csv(TOY / "labels.csv")
pairs = [line.split(",") for line in read_text(TOY / "pairs.csv").splitlines()[1:]]

seq_rows, struct_rows = [], []
for cid, lig, rec in pairs:
    lig, rec = lig.split(";"), rec.split(";")
    chains = {c.chain_id: c for c in parse_fasta(read_text(TOY / "fasta" / f"{cid}.fasta"))}
    seq_rows.append(complex_features([chains[c] for c in lig], [chains[c] for c in rec],
                                     kmer_composition, cid, "KMER").values)
    structure = parse_pdb(read_text(TOY / "pdb" / f"{cid}.pdb"), rec, lig, cid)
    imap = interface_map(structure)
    struct_rows.append(nirp(structure))
    print(f"{cid}: {len(imap.contact_pairs):3d} contacting residue pairs, "
          f"{len(imap.ligand_iface)} ligand / {len(imap.receptor_iface)} receptor interface residues")

ids = [p[0] for p in pairs]
student = FeatureTable(ids, np.array(seq_rows), "KMER")
teacher = FeatureTable(ids, np.array(struct_rows), "NIRP")
print(f"\nstudent table {student.values.shape}, teacher table {teacher.values.shape}")

# Ten complexes is far too few to learn anything; this only exercises the protocol.
for mode in (Mode.BASELINE_STUDENT, Mode.DISTILL_OUT_FEAT):
    report = loco_cv(student, labels, KdConfig(mode=mode, epochs=20), teacher, n_runs=3)
    print(f"{mode.value:>17}: P_r {report.pearson_r:+.3f}  RMSE {report.rmse:.3f}  "
          f"MAE {report.mae:.3f}  (runs {report.runs_averaged})")
