"""Residue alphabet shared by every descriptor."""

from __future__ import annotations

#: The 20 canonical amino acids, in the order used by all descriptor vectors.
ALPHABET = "ACDEFGHIKLMNPQRSTVWY"
#: Symbol standing in for any non-canonical residue.
UNKNOWN = "X"

INDEX = {aa: i for i, aa in enumerate(ALPHABET)}

THREE_TO_ONE = {
    "ALA": "A", "CYS": "C", "ASP": "D", "GLU": "E", "PHE": "F",
    "GLY": "G", "HIS": "H", "ILE": "I", "LYS": "K", "LEU": "L",
    "MET": "M", "ASN": "N", "PRO": "P", "GLN": "Q", "ARG": "R",
    "SER": "S", "THR": "T", "VAL": "V", "TRP": "W", "TYR": "Y",
}


def to_symbol(letter: str) -> str:
    """Map one input letter to a canonical residue or ``UNKNOWN``."""
    letter = letter.upper()
    return letter if letter in INDEX else UNKNOWN


def normalize_sequence(text: str) -> str:
    return "".join(to_symbol(c) for c in text)


def three_to_one(resname: str) -> str:
    return THREE_TO_ONE.get(resname.strip().upper(), UNKNOWN)
