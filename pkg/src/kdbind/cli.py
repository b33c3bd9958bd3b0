"""Command-line pipeline: featurize, train, cross-validate, predict, evaluate.

Exit codes: 0 on success, 1 for data or validation errors, 2 for usage
errors. Primary outputs are written atomically, so a failed command leaves
no partial files behind.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .distill import KdConfig, Mode, TrainingError, loco_cv, predict, train_baseline, train_distill
from .metrics import average_reports, evaluate
from .nn import load_model, save_model
from .parsers import (LabeledCorpus, ParseError, ValidationError, load_descriptor_csv,
                      load_labels_csv, parse_fasta, parse_pdb, parse_pssm, read_text)
from .seqfeat import (KMER_G_ORDERS, SEQUENCE_DESCRIPTORS, DescriptorError, complex_features,
                      grouped_kmer, pssm_descriptor)
from .structfeat import DEFAULT_CUTOFF, NIRP_BINS, InterfaceError, blosum_interface, nirp
from .table import Descriptor, FeatureTable, atomic_write

log = logging.getLogger("kdbind")

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2

MANIFEST_NAME = "manifest.json"
DATA_ERRORS = (ParseError, ValidationError, DescriptorError, InterfaceError, TrainingError,
               KeyError, FileNotFoundError)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# run manifest --------------------------------------------------------------

def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    arguments: dict
    config: dict | None
    inputs: dict
    tool_version: str
    started: float
    finished: float | None = None

    @classmethod
    def begin(cls, command: str, args: argparse.Namespace, inputs: Sequence,
              config: KdConfig | None = None) -> "RunManifest":
        digests = {}
        for p in inputs:
            p = Path(p)
            if p.is_dir():
                for f in sorted(q for q in p.iterdir() if q.is_file()):
                    digests[str(f)] = file_digest(f)
            elif p.is_file():
                digests[str(p)] = file_digest(p)
        arguments = {k: (str(v) if isinstance(v, Path) else v)
                     for k, v in sorted(vars(args).items()) if k != "handler"}
        return cls(command, arguments, config.to_dict() if config else None, digests,
                   __version__, time.time())

    def to_dict(self) -> dict:
        if self.finished is None:
            self.finished = time.time()
        return {
            "command": self.command,
            "arguments": self.arguments,
            "config": self.config,
            "inputs": self.inputs,
            "tool_version": self.tool_version,
            "started": self.started,
            "finished": self.finished,
        }

    def write(self, path) -> None:
        atomic_write(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


# corpus files --------------------------------------------------------------

@dataclass(frozen=True)
class ComplexPair:
    complex_id: str
    ligand: tuple[str, ...]
    receptor: tuple[str, ...]


def split_chains(field: str) -> tuple[str, ...]:
    """``"A;B"`` or ``"A B"`` -> ("A", "B"); a bare ``"AB"`` is read one chain per letter."""
    field = field.strip()
    for sep in (";", ",", " ", "+"):
        if sep in field:
            return tuple(c for c in (p.strip() for p in field.split(sep)) if c)
    return tuple(field)


def load_pairs(path) -> list[ComplexPair]:
    text = read_text(path)
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise UsageError(f"pairs file {path} is empty")
    header = [h.strip().lower() for h in rows[0]]
    want = ("complex_id", "ligand_chains", "receptor_chains")
    if tuple(header[:3]) != want:
        raise ParseError(f"{path}: header must start with {','.join(want)}")
    pairs, seen = [], set()
    for r, row in enumerate(rows[1:], start=1):
        if len(row) < 3:
            raise ParseError(f"{path}: row {r} needs three columns")
        cid = row[0].strip()
        if cid in seen:
            raise ValidationError(f"{path}: duplicate complex_id {cid!r}")
        seen.add(cid)
        pair = ComplexPair(cid, split_chains(row[1]), split_chains(row[2]))
        if not pair.ligand or not pair.receptor:
            raise ValidationError(f"{path}: {cid} needs ligand and receptor chains")
        pairs.append(pair)
    if not pairs:
        raise UsageError(f"pairs file {path} lists no complexes")
    return pairs


def _find(directory: Path, stem: str, suffixes: Sequence[str]) -> Path:
    for suffix in suffixes:
        p = directory / f"{stem}{suffix}"
        if p.is_file():
            return p
    raise FileNotFoundError(f"no {'/'.join(suffixes)} file for {stem} in {directory}")


def _collect(items, work) -> list:
    """Run ``work(item)`` on every item; raise one DataError listing all failures."""
    results, failures = [], []
    for item in items:
        try:
            results.append(work(item))
        except (*DATA_ERRORS, ValueError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
            failures.append(f"{item.complex_id}: {msg}")
    if failures:
        raise DataError("featurization failed for %d complex(es):\n  %s"
                        % (len(failures), "\n  ".join(failures)))
    return results


# commands ------------------------------------------------------------------

def cmd_featurize_seq(args) -> int:
    if args.descriptor == "pssm" and args.pssm_dir is None:
        raise UsageError("--descriptor pssm requires --pssm-dir")
    pairs = load_pairs(args.pairs)
    fasta_dir = Path(args.fasta_dir)
    manifest = RunManifest.begin("featurize-seq", args,
                                 [args.pairs, fasta_dir] + ([args.pssm_dir] if args.pssm_dir else []))

    if args.kmer_g_order is not None and args.descriptor != "kmer-g":
        raise UsageError("--kmer-g-order applies only to --descriptor kmer-g")
    describe = None
    if args.descriptor == "pssm":
        tag, chain_dim = Descriptor.PSSM, 20
    elif args.kmer_g_order is not None:
        k = args.kmer_g_order
        tag, chain_dim = Descriptor.KMER_G, 7**k
        describe = lambda chain: grouped_kmer(chain, k)
    else:
        tag, describe, chain_dim = SEQUENCE_DESCRIPTORS[args.descriptor]

    def work(pair: ComplexPair):
        chains = {c.chain_id: c for c in
                  parse_fasta(read_text(_find(fasta_dir, pair.complex_id, (".fasta", ".fa"))))}
        missing = [c for c in pair.ligand + pair.receptor if c not in chains]
        if missing:
            raise ValidationError(f"chain(s) {', '.join(missing)} missing from FASTA")
        fn = describe
        if args.descriptor == "pssm":
            profiles = {c: parse_pssm(read_text(_find(Path(args.pssm_dir),
                                                      f"{pair.complex_id}_{c}", (".pssm",))))
                        for c in pair.ligand + pair.receptor}
            fn = pssm_descriptor(profiles)
        return complex_features([chains[c] for c in pair.ligand],
                                [chains[c] for c in pair.receptor], fn, pair.complex_id,
                                tag.value)

    table = FeatureTable.from_vectors(_collect(pairs, work))
    table.write(args.out, chain_dim=chain_dim, run=manifest.to_dict())
    return EXIT_OK


def cmd_featurize_struct(args) -> int:
    if args.cutoff <= 0:
        raise UsageError("--cutoff must be positive")
    pairs = load_pairs(args.pairs)
    pdb_dir = Path(args.pdb_dir)
    manifest = RunManifest.begin("featurize-struct", args, [args.pairs, pdb_dir])
    tag = Descriptor.NIRP if args.descriptor == "nirp" else Descriptor.BLOSUM_IFACE

    def work(pair: ComplexPair):
        structure = parse_pdb(read_text(_find(pdb_dir, pair.complex_id, (".pdb", ".ent"))),
                              pair.receptor, pair.ligand, pair.complex_id)
        if tag is Descriptor.NIRP:
            values = nirp(structure, args.cutoff)
        else:
            values = blosum_interface(structure, args.cutoff)
        return pair.complex_id, values

    done = _collect(pairs, work)
    table = FeatureTable([cid for cid, _ in done], np.array([v for _, v in done]), tag.value)
    extra = {"cutoff": args.cutoff, "run": manifest.to_dict()}
    if tag is Descriptor.NIRP:
        extra["bins"] = list(NIRP_BINS)
    table.write(args.out, **extra)
    return EXIT_OK


def _load_config(args) -> KdConfig:
    cfg = KdConfig.load(args.config) if args.config else KdConfig()
    overrides = {"mode": args.mode}
    for name in ("seed", "epochs", "lambda_out", "lambda_feat"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return cfg.replace(**overrides)


def _training_inputs(args, cfg: KdConfig):
    mode = cfg.mode
    if mode.distills and args.teacher_features is None:
        raise UsageError(f"--mode {mode.value} requires --teacher-features")
    if mode is Mode.BASELINE_TEACHER and args.teacher_features is None:
        raise UsageError("--mode baseline-teacher requires --teacher-features")
    if mode is Mode.BASELINE_STUDENT and args.teacher_features is not None:
        raise UsageError("--mode baseline-student takes no --teacher-features")
    if mode is not Mode.BASELINE_TEACHER and args.student_features is None:
        raise UsageError(f"--mode {mode.value} requires --student-features")
    student = load_descriptor_csv(args.student_features, descriptor=_descriptor_of(
        args.student_features)) if args.student_features and mode is not Mode.BASELINE_TEACHER \
        else None
    teacher = load_descriptor_csv(args.teacher_features, descriptor=_descriptor_of(
        args.teacher_features)) if args.teacher_features else None
    labels = load_labels_csv(args.labels)
    return student, teacher, labels


def _descriptor_of(csv_path) -> str | None:
    side = Path(str(csv_path) + ".json")
    if side.is_file():
        try:
            return json.loads(side.read_text(encoding="utf-8")).get("descriptor")
        except (ValueError, AttributeError):
            return None
    return None


def cmd_train(args) -> int:
    cfg = _load_config(args)
    student, teacher, labels = _training_inputs(args, cfg)
    inputs = [p for p in (args.student_features, args.teacher_features, args.labels, args.config) if p]
    manifest = RunManifest.begin("train", args, inputs, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.mode.distills:
        t_model, s_model = train_distill(teacher, student, labels, cfg)
        save_model(s_model, out / "student.model.json")
        save_model(t_model, out / "teacher.model.json")
    elif cfg.mode is Mode.BASELINE_TEACHER:
        save_model(train_baseline(teacher, labels, cfg), out / "teacher.model.json")
    else:
        save_model(train_baseline(student, labels, cfg), out / "student.model.json")
    manifest.write(out / MANIFEST_NAME)
    return EXIT_OK


def predictions_csv(rows) -> str:
    """``rows`` of (complex_id, run, y_true, y_pred)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["complex_id", "run", "y_true", "y_pred", "abs_error"])
    for cid, run, t, p in rows:
        w.writerow([cid, run, repr(float(t)), repr(float(p)), repr(abs(float(t) - float(p)))])
    return buf.getvalue()


def metrics_json(report) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def cmd_loco(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    cfg = _load_config(args)
    student, teacher, labels = _training_inputs(args, cfg)
    inputs = [p for p in (args.student_features, args.teacher_features, args.labels, args.config) if p]
    manifest = RunManifest.begin("loco", args, inputs, cfg)
    report = loco_cv(student, labels, cfg, teacher, n_runs=args.runs, n_jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write(out / "predictions.csv", predictions_csv(report.per_complex_predictions))
    atomic_write(out / "metrics.json", metrics_json(report))
    manifest.write(out / MANIFEST_NAME)
    return EXIT_OK


def cmd_predict(args) -> int:
    model = load_model(args.model)
    table = load_descriptor_csv(args.features)
    if table.dim != model.input_dim:
        raise DataError(f"{args.features} has {table.dim} features but the model expects "
                        f"{model.input_dim}")
    manifest = RunManifest.begin("predict", args, [args.model, args.features])
    pred = predict(model, table.values)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["complex_id", "y_pred"])
    for cid, p in zip(table.ids, pred):
        w.writerow([cid, repr(float(p))])
    atomic_write(args.out, buf.getvalue())
    manifest.write(Path(str(args.out) + ".json"))
    return EXIT_OK


def _read_predictions(path) -> list[tuple[str, int, float]]:
    text = read_text(path)
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or "complex_id" not in rows[0] or "y_pred" not in rows[0]:
        raise ParseError(f"{path}: needs complex_id and y_pred columns")
    out = []
    for r, row in enumerate(rows, start=1):
        try:
            run = int(row["run"]) if row.get("run") not in (None, "") else 0
            out.append((row["complex_id"].strip(), run, float(row["y_pred"])))
        except ValueError:
            raise ParseError(f"{path}: row {r} has a non-numeric run or y_pred") from None
    return out


def cmd_eval(args) -> int:
    preds = _read_predictions(args.pred)
    truth: LabeledCorpus = load_labels_csv(args.truth)
    manifest = RunManifest.begin("eval", args, [args.pred, args.truth])
    reports = []
    for run in sorted({r for _, r, _ in preds}):
        rows = [(cid, p) for cid, r, p in preds if r == run]
        ids = [cid for cid, _ in rows]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"{args.pred}: duplicate complex_id within run {run}")
        y_true = truth.values_for(ids)
        reports.append(evaluate(y_true, [p for _, p in rows], ids, run=run))
    report = reports[0] if len(reports) == 1 else average_reports(reports)
    atomic_write(args.out, metrics_json(report))
    manifest.write(Path(str(args.out) + ".manifest.json"))
    return EXIT_OK


# argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _training_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--student-features", type=Path)
    p.add_argument("--teacher-features", type=Path)
    p.add_argument("--labels", type=Path, required=True)
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--config", type=Path, help="JSON object of KdConfig fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lambda-out", dest="lambda_out", type=float)
    p.add_argument("--lambda-feat", dest="lambda_feat", type=float)
    p.add_argument("--out-dir", type=Path, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kdbind", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kdbind {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("featurize-seq", help="sequence descriptors from FASTA/PSSM files")
    p.add_argument("--fasta-dir", type=Path, required=True)
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--descriptor", required=True,
                   choices=sorted(SEQUENCE_DESCRIPTORS) + ["pssm"])
    p.add_argument("--pssm-dir", type=Path)
    p.add_argument("--kmer-g-order", type=int, choices=KMER_G_ORDERS,
                   help="single grouped k-mer order instead of the 2+3+4 concatenation")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_featurize_seq)

    p = sub.add_parser("featurize-struct", help="interface descriptors from PDB files")
    p.add_argument("--pdb-dir", type=Path, required=True)
    p.add_argument("--pairs", type=Path, required=True)
    p.add_argument("--descriptor", required=True, choices=["nirp", "blosum-iface"])
    p.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_featurize_struct)

    p = sub.add_parser("train", help="fit a baseline or a teacher/student pair")
    _training_flags(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("loco", help="leave-one-complex-out evaluation")
    _training_flags(p)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_loco)

    p = sub.add_parser("predict", help="EVAL-mode inference with a saved model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--features", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("eval", help="metrics of a predictions CSV against labels")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--truth", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"kdbind: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"kdbind: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, *DATA_ERRORS, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"kdbind: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
