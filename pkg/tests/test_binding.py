import pytest

from polyhom.algebra import FinAbelianGroup, abelian_group, iso_check
from polyhom.binding import (
    ActionTable,
    ExtractionError,
    action_table_from_json_dict,
    extract,
    transport_classes,
    verify_action,
)
from polyhom.faults import drop_q_tuple, duplicate_horn, tamper_action
from polyhom.polygroupoid import scramble, standard, standard_with_coordinates

Z2 = abelian_group(2)
Z4 = abelian_group(4)
Z8 = abelian_group(8)
KLEIN = abelian_group(2, 2)
TRIVIAL = FinAbelianGroup()


def native_translation_action(group, h, coords):
    """Oracle: the translation action read off the standard model's own
    coordinates."""
    action = {}
    for config in h.top_configs:
        by_coords = {coords[w]: w for w in h.fiber(config)}
        action[config] = {
            w: {g.coords: by_coords[group.add(coords[w], g)] for g in group.elements()}
            for w in h.fiber(config)
        }
    return ActionTable(group, action)


class TestTransportClasses:
    def test_hand_partition_z2(self):
        h = standard(Z2, range(3), 2)
        tc = transport_classes(h, (0, 1))
        a, b = h.fiber((0, 1))
        expected = {frozenset({(a, a), (b, b)}), frozenset({(a, b), (b, a)})}
        assert set(tc.classes) == expected

    def test_diagonal_is_one_class(self):
        for group, size in [(Z4, 4), (KLEIN, 3), (Z2, 5)]:
            h = scramble(standard(group, range(size), 2), 13)
            z = h.top_configs[0]
            tc = transport_classes(h, z)
            diag = tc.classes[tc.diagonal_index]
            assert diag == frozenset((x, x) for x in tc.fiber)

    def test_class_count_matches_order(self):
        h = standard(Z4, range(4), 2)
        tc = transport_classes(h, (1, 2))
        assert len(tc.classes) == 4


class TestExtract:
    def test_standard_z2_translation(self):
        h, coords = standard_with_coordinates(Z2, range(3), 2)
        group, act = extract(h, (0, 1))
        assert iso_check(group, Z2)
        assert act.to_json() == native_translation_action(Z2, h, coords).to_json()

    def test_trivial_group(self):
        h = standard(TRIVIAL, range(4), 2)
        group, act = extract(h, (0, 1))
        assert group.is_trivial()
        for config, ws in act.action.items():
            for w, table in ws.items():
                assert table == {(): w}

    @pytest.mark.parametrize("seed", range(12))
    def test_blind_z4(self, seed):
        h = scramble(standard(Z4, range(4), 2), seed)
        for z in h.top_configs[:2]:
            group, _ = extract(h, z)
            assert iso_check(group, Z4)

    def test_blind_klein_vs_cyclic(self):
        # order alone cannot tell these apart; the class structure must
        hk = scramble(standard(KLEIN, range(3), 2), 5)
        hc = scramble(standard(Z4, range(3), 2), 5)
        gk, _ = extract(hk, (0, 1))
        gc, _ = extract(hc, (0, 1))
        assert gk == KLEIN
        assert gc == Z4
        assert not iso_check(gk, gc)

    def test_blind_arity3(self):
        h = scramble(standard(Z4, range(4), 3), 21)
        group, act = extract(h, (0, 1, 2))
        assert iso_check(group, Z4)
        assert verify_action(h, act).passed

    def test_relabeling_invariance(self):
        base = standard(Z8, range(4), 2)
        expected, _ = extract(base, (0, 1))
        for seed in range(8):
            group, _ = extract(scramble(base, seed), (0, 1))
            assert iso_check(group, expected)

    def test_extract_action_verifies(self):
        h = scramble(standard(Z4, range(5), 2), 3)
        group, act = extract(h, (2, 4))
        report = verify_action(h, act)
        assert report.passed, report.failures()

    def test_horn_fault_raises(self):
        h = duplicate_horn(standard(Z2, range(3), 2))
        with pytest.raises(ExtractionError):
            extract(h, (0, 1))

    def test_dropped_tuple_breaks_extraction(self):
        h = drop_q_tuple(standard(Z2, range(4), 2), union=(0, 1, 2))
        with pytest.raises(ExtractionError) as exc:
            extract(h, (0, 1))
        assert exc.value.stage in {"propagation", "regularity", "difference-law"}


class TestVerifyAction:
    def test_native_action_passes(self):
        for group, size, arity in [(Z4, 4, 2), (Z2, 4, 3), (KLEIN, 4, 2)]:
            h, coords = standard_with_coordinates(group, range(size), arity)
            act = native_translation_action(group, h, coords)
            report = verify_action(h, act)
            assert report.passed, report.failures()

    def test_tampered_action_fails_with_witness(self):
        h, coords = standard_with_coordinates(Z4, range(4), 2)
        act = tamper_action(native_translation_action(Z4, h, coords))
        report = verify_action(h, act)
        assert not report.passed
        fail = report.failures()[0]
        assert fail.witness is not None

    def test_witness_recheckable(self):
        h, coords = standard_with_coordinates(Z2, range(3), 2)
        act = tamper_action(native_translation_action(Z2, h, coords))
        report = verify_action(h, act)
        bad = next((c for c in report.failures() if c.axiom == "q-action-law"), None)
        if bad is not None:
            tup = tuple(bad.witness["tuple"])
            gammas = [Z2.element(tuple(g)) for g in bad.witness["gammas"]]
            image = tuple(
                act.apply(h.config_of[w], g, w) for w, g in zip(tup, gammas)
            )
            assert (image in h.q) != bad.witness["alternating_sum_zero"]


class TestActionJson:
    def test_roundtrip(self):
        h = scramble(standard(Z4, range(4), 2), 2)
        _, act = extract(h, (0, 1))
        d = act.to_json_dict()
        back = action_table_from_json_dict(d)
        assert back.to_json() == act.to_json()

    def test_trivial_roundtrip(self):
        h = standard(TRIVIAL, range(3), 2)
        _, act = extract(h, (0, 1))
        back = action_table_from_json_dict(act.to_json_dict())
        assert back.to_json() == act.to_json()
