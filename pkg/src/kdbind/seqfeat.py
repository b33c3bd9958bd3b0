"""Sequence descriptors computed per chain and pooled per complex.

Chain vectors are averaged over the chains of each side and the two side
means are concatenated ligand first. Unknown residues never contribute to
a composition count or to a property average.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import _data
from .alphabet import ALPHABET, INDEX, UNKNOWN
from .parsers import ProteinChain, PssmProfile
from .table import Descriptor, FeatureVector


class DescriptorError(ValueError):
    """A chain does not meet a descriptor's preconditions."""


# Amino-acid classes of Shen et al. (2007), PNAS 104:4337.
AMINO_GROUPS = ("AGV", "ILFP", "YMTS", "HNQW", "RK", "DE", "C")
GROUP_INDEX = {aa: g for g, members in enumerate(AMINO_GROUPS) for aa in members}

# Denominators: "length" divides counts by L, "windows" by the number of
# windows free of Unknown residues.
KMER_DENOMINATOR = "length"
KMER_G_DENOMINATOR = "windows"
KMER_G_ORDERS = (2, 3, 4)

HELIX_RESIDUES = "VIYFWL"
TURN_RESIDUES = "NPGS"
SHEET_RESIDUES = "EMAL"
AROMATIC_RESIDUES = "FWY"

_BLOSUM = np.array([[_data.BLOSUM62[a][b] for b in ALPHABET] for a in ALPHABET],
                   dtype=np.float64)


def _codes(sequence: str, table: dict[str, int]) -> np.ndarray:
    return np.array([table.get(c, -1) for c in sequence], dtype=np.int64)


def _window_counts(codes: np.ndarray, k: int, base: int) -> tuple[np.ndarray, int]:
    n_windows = len(codes) - k + 1
    windows = np.lib.stride_tricks.sliding_window_view(codes, k)
    valid = windows[(windows >= 0).all(axis=1)]
    weights = base ** np.arange(k - 1, -1, -1)
    counts = np.bincount(valid @ weights, minlength=base**k).astype(np.float64)
    return counts, len(valid) if n_windows > 0 else 0


def _denominator(mode: str, length: int, n_valid: int) -> int:
    if mode == "length":
        return length
    if mode == "windows":
        return n_valid
    raise ValueError(f"unknown k-mer denominator {mode!r}")


def kmer_composition(chain: ProteinChain, k: int = 2,
                     denominator: str = KMER_DENOMINATOR) -> np.ndarray:
    """Ordered k-mer counts over the 20-letter alphabet (``20**k`` entries).

    Entry order is lexicographic in ``ALPHABET``: index of ``"AC"`` is
    ``0 * 20 + 1``.
    """
    if k < 1:
        raise DescriptorError("k must be positive")
    if len(chain.sequence) < k:
        raise DescriptorError(
            f"chain {chain.chain_id}: length {len(chain.sequence)} is shorter than k={k}"
        )
    counts, n_valid = _window_counts(_codes(chain.sequence, INDEX), k, 20)
    denom = _denominator(denominator, len(chain.sequence), n_valid)
    return counts / denom if denom else counts


def grouped_kmer(chain: ProteinChain, k: int,
                 denominator: str = KMER_G_DENOMINATOR) -> np.ndarray:
    """Frequencies of k-mers over the seven residue classes (``7**k`` entries)."""
    if not 2 <= k <= 4:
        raise DescriptorError(f"grouped k-mer order must be in 2..4, got {k}")
    if len(chain.sequence) < k:
        raise DescriptorError(
            f"chain {chain.chain_id}: length {len(chain.sequence)} is shorter than k={k}"
        )
    counts, n_valid = _window_counts(_codes(chain.sequence, GROUP_INDEX), k, 7)
    denom = _denominator(denominator, len(chain.sequence), n_valid)
    return counts / denom if denom else counts


def grouped_kmer_concat(chain: ProteinChain, orders: Sequence[int] = KMER_G_ORDERS) -> np.ndarray:
    return np.concatenate([grouped_kmer(chain, k) for k in orders])


def blosum_mean(residues, unique: bool = False) -> np.ndarray:
    """Mean BLOSUM-62 column over the canonical residues of ``residues``.

    With ``unique=True`` each residue type present counts once.
    """
    idx = [INDEX[r] for r in residues if r in INDEX]
    if not idx:
        raise DescriptorError("no canonical residues to average BLOSUM-62 columns over")
    if unique:
        idx = sorted(set(idx))
    return _BLOSUM[:, idx].mean(axis=1)


def blosum_chain(chain: ProteinChain, unique: bool = False) -> np.ndarray:
    try:
        return blosum_mean(chain.sequence, unique=unique)
    except DescriptorError as exc:
        raise DescriptorError(f"chain {chain.chain_id}: {exc}") from None


# ProtParam -------------------------------------------------------------------

def _canonical(sequence: str) -> str:
    return "".join(c for c in sequence if c in INDEX)


def molecular_weight(sequence: str) -> float:
    seq = _canonical(sequence)
    if not seq:
        raise DescriptorError("no canonical residues")
    return sum(_data.AVERAGE_MASS[c] for c in seq) - (len(seq) - 1) * _data.WATER_MASS


def aromaticity(sequence: str) -> float:
    seq = _canonical(sequence)
    if not seq:
        raise DescriptorError("no canonical residues")
    return sum(seq.count(c) for c in AROMATIC_RESIDUES) / len(seq)


def instability_index(sequence: str) -> float:
    """``10 / (L - 1)`` times the summed DIWV of adjacent canonical dipeptides."""
    n = len(_canonical(sequence))
    if n < 2:
        raise DescriptorError("instability index needs at least two canonical residues")
    total = sum(_data.DIWV[a][b] for a, b in zip(sequence, sequence[1:])
                if a != UNKNOWN and b != UNKNOWN)
    return 10.0 / (n - 1) * total


def net_charge(sequence: str, ph: float) -> float:
    seq = _canonical(sequence)
    positive = 1.0 / (1.0 + 10.0 ** (ph - _data.PKA_N_TERM))
    negative = 1.0 / (1.0 + 10.0 ** (_data.PKA_C_TERM - ph))
    for aa, pka in _data.PKA_POSITIVE.items():
        positive += seq.count(aa) / (1.0 + 10.0 ** (ph - pka))
    for aa, pka in _data.PKA_NEGATIVE.items():
        negative += seq.count(aa) / (1.0 + 10.0 ** (pka - ph))
    return positive - negative


def isoelectric_point(sequence: str, tol: float = 0.01) -> float:
    """pH of zero net charge, by bisection on [0, 14]."""
    lo, hi = 0.0, 14.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if net_charge(sequence, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def secondary_structure_fraction(sequence: str) -> tuple[float, float, float]:
    seq = _canonical(sequence)
    if not seq:
        raise DescriptorError("no canonical residues")
    n = len(seq)
    return tuple(sum(seq.count(c) for c in group) / n
                 for group in (HELIX_RESIDUES, TURN_RESIDUES, SHEET_RESIDUES))


def protparam(chain: ProteinChain) -> np.ndarray:
    """[weight, aromaticity, instability, pI, helix, turn, sheet]."""
    seq = chain.sequence
    if len(_canonical(seq)) < 2:
        raise DescriptorError(
            f"chain {chain.chain_id}: ProtParam needs at least two canonical residues"
        )
    return np.array([
        molecular_weight(seq),
        aromaticity(seq),
        instability_index(seq),
        isoelectric_point(seq),
        *secondary_structure_fraction(seq),
    ])


def pssm_mean(profile: PssmProfile) -> np.ndarray:
    return np.asarray(profile.scores, dtype=np.float64).mean(axis=0)


# Complex assembly ------------------------------------------------------------

ChainDescriptor = Callable[[ProteinChain], np.ndarray]

#: Chain-level descriptors selectable by name; PSSM needs per-chain profiles
#: and is built with :func:`pssm_descriptor`.
SEQUENCE_DESCRIPTORS: dict[str, tuple[Descriptor, ChainDescriptor, int]] = {
    "kmer": (Descriptor.KMER, kmer_composition, 400),
    "kmer-g": (Descriptor.KMER_G, grouped_kmer_concat, 7**2 + 7**3 + 7**4),
    "blosum": (Descriptor.BLOSUM, blosum_chain, 20),
    "protparam": (Descriptor.PROTPARAM, protparam, 7),
}


def pssm_descriptor(profiles: dict[str, PssmProfile]) -> ChainDescriptor:
    """Chain descriptor looking up each chain's profile by ``chain_id``."""
    def describe(chain: ProteinChain) -> np.ndarray:
        try:
            profile = profiles[chain.chain_id]
        except KeyError:
            raise DescriptorError(f"no PSSM profile for chain {chain.chain_id}") from None
        if profile.sequence_length != len(chain.sequence):
            raise DescriptorError(
                f"PSSM for chain {chain.chain_id} has {profile.sequence_length} "
                f"positions, sequence has {len(chain.sequence)}"
            )
        return pssm_mean(profile)
    return describe


def _side_mean(chains: Sequence[ProteinChain], descriptor: ChainDescriptor,
               side: str) -> np.ndarray:
    if not chains:
        raise DescriptorError(f"{side} side has no chains")
    vectors = []
    for chain in chains:
        try:
            vectors.append(np.asarray(descriptor(chain), dtype=np.float64))
        except DescriptorError as exc:
            msg = str(exc)
            if chain.chain_id not in msg:
                msg = f"chain {chain.chain_id}: {msg}"
            raise DescriptorError(f"{side} {msg}") from None
    return np.mean(vectors, axis=0)


def complex_features(
    ligand: Sequence[ProteinChain],
    receptor: Sequence[ProteinChain],
    descriptor: ChainDescriptor,
    complex_id: str = "",
    tag: str = "",
) -> FeatureVector:
    lig = _side_mean(ligand, descriptor, "ligand")
    rec = _side_mean(receptor, descriptor, "receptor")
    return FeatureVector(complex_id, tag, np.concatenate([lig, rec]))
