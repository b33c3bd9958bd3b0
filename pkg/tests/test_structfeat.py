import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from _toys import brute_contacts, toy_complex
from kdbind.parsers import Atom, ComplexStructure, ResidueKey
from kdbind.seqfeat import blosum_mean
from kdbind.structfeat import (NIRP_BINS, UNKNOWN_BIN, InterfaceError, blosum_interface,
                               interface_map, nirp, nirp_bin, residue_min_distance)


def structure(rec, lig, cid="t"):
    """``rec``/``lig``: lists of (resname, resseq, [positions])."""
    atoms, serial = [], 1
    for chain, residues in (("R", rec), ("L", lig)):
        for name, seq, positions in residues:
            for pos in positions:
                atoms.append(Atom(serial, "CA", name, seq, chain, tuple(map(float, pos))))
                serial += 1
    return ComplexStructure(cid, {"R"}, {"L"}, atoms)


def test_min_distance_cases():
    assert residue_min_distance([(0, 0, 0)], [(3, 4, 0)]) == 5.0
    assert residue_min_distance([(1, 1, 1)], [(1, 1, 1)]) == 0.0
    assert residue_min_distance([(0, 0, 0), (10, 0, 0)], [(6, 0, 0)]) == 4.0
    with pytest.raises(ValueError):
        residue_min_distance([], [(0, 0, 0)])


def test_cutoff_edges():
    near = interface_map(structure([("ALA", 1, [(0, 0, 0)])], [("GLY", 1, [(7.9, 0, 0)])]))
    assert len(near.contact_pairs) == 1
    assert len(near.receptor_iface) == len(near.ligand_iface) == 1
    far = interface_map(structure([("ALA", 1, [(0, 0, 0)])], [("GLY", 1, [(9.0, 0, 0)])]))
    assert far.contact_pairs == [] and not far.receptor_iface and not far.ligand_iface


def test_hand_placed_three_by_two():
    s = structure(
        [("ALA", 1, [(0, 0, 0), (1, 0, 0)]), ("SER", 2, [(0, 20, 0)]), ("TRP", 3, [(0, 0, 15)])],
        [("GLY", 1, [(8.5, 0, 0)]), ("LYS", 2, [(0, 26, 0), (0, 20, 7)])],
    )
    imap = interface_map(s)
    got = set(imap.contact_pairs)
    assert got == brute_contacts(s, 8.0)
    assert got == {(ResidueKey("R", 1), ResidueKey("L", 1)),
                   (ResidueKey("R", 2), ResidueKey("L", 2))}


def test_nirp_single_contact():
    v = nirp(structure([("GLY", 1, [(0, 0, 0)])], [("ALA", 1, [(3, 0, 0)])]))
    assert v.shape == (211,)
    assert v[NIRP_BINS.index("AG")] == 1.0 and v.sum() == 1.0


def test_nirp_order_independent_bin():
    s = structure([("ALA", 1, [(0, 0, 0)]), ("GLY", 2, [(0, 30, 0)])],
                  [("GLY", 1, [(3, 0, 0)]), ("ALA", 2, [(0, 33, 0)])])
    v = nirp(s)
    assert v[NIRP_BINS.index("AG")] == 1.0
    assert nirp(s, normalize=False)[NIRP_BINS.index("AG")] == 2.0
    assert nirp_bin("G", "A") == nirp_bin("A", "G")


def test_nirp_unknown_bin_and_empty():
    v = nirp(structure([("MSE", 1, [(0, 0, 0)])], [("ALA", 1, [(3, 0, 0)])]))
    assert v[UNKNOWN_BIN] == 1.0
    far = nirp(structure([("ALA", 1, [(0, 0, 0)])], [("ALA", 1, [(30, 0, 0)])]))
    assert not far.any()


def test_bin_layout():
    assert len(NIRP_BINS) == 211 and len(set(NIRP_BINS)) == 211
    assert NIRP_BINS[:3] == ("AA", "AC", "AD") and NIRP_BINS[-1] == "X"


def test_blosum_interface_alanine():
    s = structure([("ALA", 1, [(0, 0, 0)]), ("ALA", 2, [(1, 0, 0)])],
                  [("ALA", 1, [(4, 0, 0)])])
    v = blosum_interface(s)
    col_a = blosum_mean("A")
    np.testing.assert_array_equal(v, np.concatenate([col_a, col_a]))


def test_blosum_interface_asymmetric_and_errors():
    s = structure([("TRP", 1, [(0, 0, 0)]), ("CYS", 2, [(2, 0, 0)]), ("HIS", 3, [(0, 40, 0)])],
                  [("LYS", 1, [(5, 0, 0)])])
    v = blosum_interface(s)
    np.testing.assert_allclose(v[:20], blosum_mean("K"))
    np.testing.assert_allclose(v[20:], blosum_mean("WC"))
    far = structure([("ALA", 1, [(0, 0, 0)])], [("ALA", 1, [(30, 0, 0)])])
    with pytest.raises(InterfaceError, match="no interface"):
        blosum_interface(far)


def test_oracle_fuzz():
    rng = np.random.default_rng(3)
    for i in range(50):
        s = toy_complex(rng, unknown_rate=0.1)
        imap = interface_map(s)
        oracle = brute_contacts(s, 8.0)
        assert set(imap.contact_pairs) == oracle
        assert len(imap.contact_pairs) == len(oracle)


def test_cutoff_monotone_and_invariants():
    rng = np.random.default_rng(11)
    for _ in range(30):
        s = toy_complex(rng)
        small = set(interface_map(s, 4.0).contact_pairs)
        big = set(interface_map(s, 8.0).contact_pairs)
        assert small <= big
        v = nirp(s)
        assert (v >= 0).all()
        if big:
            assert v.sum() == pytest.approx(1.0, abs=1e-12)


def test_rigid_motion_and_side_swap():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 30:
        s = toy_complex(rng)
        if not interface_map(s).contact_pairs:
            continue
        checked += 1
        rot = Rotation.random(random_state=rng.integers(1 << 31)).as_matrix()
        shift = rng.uniform(-50, 50, 3)
        moved = ComplexStructure(s.complex_id, s.receptor_chains, s.ligand_chains, [
            Atom(a.serial, a.atom_name, a.residue_name, a.residue_seq, a.chain_id,
                 tuple(rot @ np.array(a.position) + shift)) for a in s.atoms])
        np.testing.assert_allclose(nirp(moved), nirp(s), atol=1e-9)
        np.testing.assert_array_equal(nirp(s.swapped()), nirp(s))
        b, bs = blosum_interface(s), blosum_interface(s.swapped())
        np.testing.assert_array_equal(b[:20], bs[20:])
        np.testing.assert_array_equal(b[20:], bs[:20])
