"""Lattice generation, reconfiguration around faults and encodability."""

from __future__ import annotations

from fractions import Fraction

import pytest

from src.errors import ConfigError, InvalidParameterError
from src.lattice import (
    MergePolicy,
    apply_yield,
    encodability_check,
    generate_perfect,
    lattice_from_dict,
    lattice_to_dict,
    layout_from_dict,
    layout_to_dict,
    load_lattice,
    reconfigure,
    save_lattice,
    single_fault_lattice,
    stabilizer_graph,
)


@pytest.fixture
def center_d5():
    return reconfigure(single_fault_lattice(5, "center"))


class TestLattice:
    def test_site_roles(self):
        lat = generate_perfect(3)
        assert lat.size == 5 and lat.n_sites == 25
        assert len(lat.data_sites) == 13
        assert lat.plaquette_kind(lat.site(1, 0)) == "Z"
        assert lat.plaquette_kind(lat.site(0, 1)) == "X"

    @pytest.mark.parametrize("d", [1, 2, 4])
    def test_rejects_bad_distance(self, d: int):
        with pytest.raises(InvalidParameterError):
            generate_perfect(d)

    def test_yield_is_reproducible(self):
        lat = generate_perfect(5)
        assert apply_yield(lat, 0.9, 7).faulty == apply_yield(lat, 0.9, 7).faulty
        assert apply_yield(lat, 1.0, 7).faulty == frozenset()

    def test_yield_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            apply_yield(generate_perfect(3), 0.0)

    @pytest.mark.parametrize("where, site", [("center", (4, 4)), ("west", (4, 2)), ("northwest", (2, 2))])
    def test_single_fault_positions(self, where: str, site: tuple[int, int]):
        lat = single_fault_lattice(5, where)
        assert lat.faulty_data == [lat.site(*site)]


class TestReconfigure:
    def test_perfect_lattice_has_unit_stabilizers(self):
        layout = reconfigure(generate_perfect(3))
        assert len(layout.stabilizers) == 12
        assert len(layout.of_kind("Z")) == 6
        assert not any(s.is_superunit for s in layout.stabilizers)

    def test_center_fault_metrics(self, center_d5):
        zs = [center_d5.stabilizers[i] for i in center_d5.of_kind("Z")]
        assert len(center_d5.stabilizers) == 38
        assert len(zs) == 19
        assert max(len(s.data_members) for s in center_d5.stabilizers) == 6
        assert Fraction(sum(len(s.data_members) for s in zs), len(zs)) == Fraction(70, 19)
        assert encodability_check(center_d5).reduced_distance == 4

    def test_superunits_commute(self, center_d5):
        assert sum(s.is_superunit for s in center_d5.stabilizers) == 2
        assert center_d5.is_abelian()

    def test_corner_fault_removes_boundary_plaquettes(self):
        lat = generate_perfect(5).with_faults({0})
        layout = reconfigure(lat)
        assert lat.site(1, 0) in layout.removed_homes("Z")
        assert lat.site(0, 1) in layout.removed_homes("X")
        assert 0 in layout.dead

    def test_triangular_policy_stays_abelian(self):
        layout = reconfigure(single_fault_lattice(5, "center"), MergePolicy.TRIANGULAR_Z)
        assert layout.is_abelian()


class TestEncodability:
    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_perfect_reduced_distance(self, d: int):
        enc = encodability_check(reconfigure(generate_perfect(d)))
        assert enc.encodable
        assert enc.reduced_d_x == enc.reduced_d_z == d

    def test_logicals_anticommute_once(self):
        enc = encodability_check(reconfigure(generate_perfect(5)))
        assert len(set(enc.logical_x) & set(enc.logical_z)) % 2 == 1

    def test_dead_row_leaves_no_logical_z(self):
        lattice = generate_perfect(5)
        row = reconfigure(lattice.with_faults({lattice.site(4, c) for c in range(0, 9, 2)}))
        enc = encodability_check(row)
        assert not enc.encodable
        assert enc.reduced_d_z == 0 and enc.logical_z == ()
        assert enc.reduced_d_x > 0

    def test_dead_column_leaves_no_logical_x(self):
        lattice = generate_perfect(5)
        column = reconfigure(lattice.with_faults({lattice.site(r, 4) for r in range(0, 9, 2)}))
        enc = encodability_check(column)
        assert not enc.encodable
        assert enc.reduced_d_x == 0 and enc.logical_x == ()
        assert enc.reduced_d_z > 0

    def test_stabilizer_graph_boundaries(self):
        g = stabilizer_graph(reconfigure(generate_perfect(3)), "Z")
        assert g.graph["sides"] == ("N", "S")
        assert {"N", "S"} <= set(g.nodes)


class TestIO:
    def test_lattice_round_trip(self, tmp_path):
        lat = apply_yield(generate_perfect(5), 0.9, 3)
        assert lattice_from_dict(lattice_to_dict(lat)) == lat
        assert load_lattice(save_lattice(lat, tmp_path / "lattice.json")) == lat

    def test_layout_round_trip(self, center_d5):
        back = layout_from_dict(layout_to_dict(center_d5))
        assert back.stabilizers == center_d5.stabilizers
        assert back.dead == center_d5.dead

    def test_malformed_lattice(self):
        with pytest.raises(ConfigError):
            lattice_from_dict({"grid_rows": 5})

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_lattice(tmp_path / "nope.json")
