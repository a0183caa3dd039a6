import pytest

from polyhom.algebra import GroupHom, abelian_group, iso_check
from polyhom.binding import extract
from polyhom.faults import tamper_rho
from polyhom.hurewicz import verdict
from polyhom.tower import (
    DirectedPoset,
    GroupTower,
    TowerError,
    check_thread_action,
    check_tower,
    cyclic_chain_tower,
    element_threads,
    group_threads,
    group_tower_from_poly,
    induced_hom,
    inverse_limit,
    poly_tower_from_json_dict,
    poly_tower_to_json,
    poly_tower_to_json_dict,
    standard_tower,
)

Z2 = abelian_group(2)
Z4 = abelian_group(4)
Z8 = abelian_group(8)

MOD_8_4 = GroupHom(Z8, Z4, ((1,),))
MOD_8_2 = GroupHom(Z8, Z2, ((1,),))
MOD_4_2 = GroupHom(Z4, Z2, ((1,),))


def chain_842():
    poset = DirectedPoset.chain(["c", "b", "a"])  # c <= b <= a; a is finest
    groups = {"a": Z8, "b": Z4, "c": Z2}
    homs = {("b", "a"): MOD_8_4, ("c", "a"): MOD_8_2, ("c", "b"): MOD_4_2}
    return GroupTower(poset, groups, homs)


def extract_all(pt):
    return {u: extract(pt.nodes[u], pt.nodes[u].top_configs[0])[1] for u in pt.poset.nodes}


class TestDirectedPoset:
    def test_chain(self):
        p = DirectedPoset.chain(["x", "y"])
        assert p.le("x", "y") and not p.le("y", "x")
        assert p.greatest() == "y"

    def test_diamond_greatest(self):
        nodes = ("bot", "l", "r", "top")
        leq = {(u, u) for u in nodes} | {
            ("bot", "l"),
            ("bot", "r"),
            ("bot", "top"),
            ("l", "top"),
            ("r", "top"),
        }
        p = DirectedPoset(nodes, frozenset(leq))
        assert p.greatest() == "top"

    def test_not_directed_rejected(self):
        nodes = ("a", "b")
        with pytest.raises(ValueError):
            DirectedPoset(nodes, frozenset({("a", "a"), ("b", "b")}))

    def test_not_transitive_rejected(self):
        nodes = ("a", "b", "c")
        leq = {(u, u) for u in nodes} | {("a", "b"), ("b", "c")}
        with pytest.raises(ValueError):
            DirectedPoset(nodes, frozenset(leq))


class TestGroupTower:
    def test_mod_chain_passes(self):
        report = check_tower(chain_842())
        assert report.passed, report.failures()

    def test_non_surjective_planted(self):
        t = chain_842()
        homs = dict(t.homs)
        homs[("c", "b")] = GroupHom(Z4, Z2, ((0,),))
        report = check_tower(GroupTower(t.poset, t.groups, homs))
        assert not report.passed
        fail = next(c for c in report.failures() if c.axiom in {"surjectivity", "functoriality"})
        assert fail.witness is not None

    def test_inverse_limit_chain(self):
        group, projections = inverse_limit(chain_842())
        assert iso_check(group, Z8)
        assert projections["c"](Z8.element((5,))) == Z2.element((1,))

    def test_inverse_limit_single_node(self):
        z6 = abelian_group(6)
        t = GroupTower(DirectedPoset.chain(["only"]), {"only": z6}, {})
        group, projections = inverse_limit(t)
        assert iso_check(group, z6)
        assert projections["only"].matrix == GroupHom.identity(z6).matrix

    def test_inverse_limit_diamond(self):
        nodes = ("bot", "l", "r", "top")
        leq = {(u, u) for u in nodes} | {
            ("bot", "l"),
            ("bot", "r"),
            ("bot", "top"),
            ("l", "top"),
            ("r", "top"),
        }
        poset = DirectedPoset(nodes, frozenset(leq))
        groups = {"top": Z4, "l": Z2, "r": Z4, "bot": Z2}
        homs = {
            ("l", "top"): MOD_4_2,
            ("r", "top"): GroupHom.identity(Z4),
            ("bot", "top"): MOD_4_2,
            ("bot", "l"): GroupHom.identity(Z2),
            ("bot", "r"): MOD_4_2,
        }
        t = GroupTower(poset, groups, homs)
        assert check_tower(t).passed
        group, _ = inverse_limit(t)
        assert iso_check(group, Z4)

    def test_group_threads_pinned_by_top(self):
        threads = group_threads(chain_842())
        assert len(threads) == 8
        sample = dict(threads[5].components)
        assert sample["a"] == Z8.element((5,))
        assert sample["b"] == Z4.element((1,))
        assert sample["c"] == Z2.element((1,))


class TestStandardTower:
    def test_checks_pass(self):
        pt, _, _ = cyclic_chain_tower([8, 4, 2], range(4), 2)
        report = check_tower(pt)
        assert report.passed, report.failures()

    def test_q_coherence_is_checked(self):
        pt, _, _ = cyclic_chain_tower([4, 2], range(4), 2)
        bad = tamper_rho(pt)
        report = check_tower(bad)
        assert not report.passed
        assert any(c.axiom == "q-coherence" for c in report.failures())

    def test_induced_equals_input_surjection(self):
        pt, groups, surjections = cyclic_chain_tower([4, 2], range(4), 2)
        acts = extract_all(pt)
        hom = induced_hom(pt, "t1", "t0", acts)
        # canonicalize through the native coordinates of each node
        from polyhom.polygroupoid import standard_with_coordinates

        natives = {}
        for name, g in zip(["t0", "t1"], groups):
            _, coords = standard_with_coordinates(g, range(4), 2)
            natives[name] = coords

        def to_native(name, group, gamma, act):
            cfg = sorted(act.action)[0]
            w0 = sorted(act.action[cfg])[0]
            moved = act.action[cfg][w0][gamma.coords]
            return group.sub(natives[name][moved], natives[name][w0])

        for gamma in acts["t0"].group.elements():
            native_in = to_native("t0", groups[0], gamma, acts["t0"])
            native_out = to_native("t1", groups[1], hom(gamma), acts["t1"])
            assert native_out == surjections[0](native_in)

    def test_identity_edge(self):
        pt, _, _ = cyclic_chain_tower([4, 2], range(4), 2)
        acts = extract_all(pt)
        hom = induced_hom(pt, "t0", "t0", acts)
        assert hom.matrix == GroupHom.identity(acts["t0"].group).matrix

    def test_induced_functorial(self):
        pt, _, _ = cyclic_chain_tower([8, 4, 2], range(4), 2)
        acts = extract_all(pt)
        h21 = induced_hom(pt, "t1", "t0", acts)
        h32 = induced_hom(pt, "t2", "t1", acts)
        h31 = induced_hom(pt, "t2", "t0", acts)
        assert h32.compose(h21) == h31

    def test_tampered_rho_breaks_induced_hom(self):
        pt, _, _ = cyclic_chain_tower([4, 2], range(4), 2)
        bad = tamper_rho(pt)
        acts = extract_all(bad)
        with pytest.raises(TowerError) as exc:
            induced_hom(bad, "t1", "t0", acts)
        assert exc.value.stage == "induced-hom"
        assert "witnesses" in exc.value.witness or "reason" in exc.value.witness

    def test_limit_of_induced_tower(self):
        pt, _, _ = cyclic_chain_tower([8, 4, 2], range(4), 2)
        acts = extract_all(pt)
        gt = group_tower_from_poly(pt, acts)
        assert check_tower(gt).passed
        group, _ = inverse_limit(gt)
        assert iso_check(group, Z8)

    def test_single_group_tower(self):
        pt, _, _ = cyclic_chain_tower([6], range(3), 2)
        assert check_tower(pt).passed
        assert len(pt.poset.nodes) == 1

    def test_verdict_per_node(self):
        pt, groups, _ = cyclic_chain_tower([4, 2], range(4), 2)
        for name, g in zip(["t0", "t1"], groups):
            report = verdict(pt.nodes[name])
            assert report.passed
            assert iso_check(report.pocket_group, g)


class TestThreads:
    def test_element_threads_counted(self):
        pt, _, _ = cyclic_chain_tower([8, 4, 2], range(4), 2)
        threads = element_threads(pt, (0, 1))
        assert len(threads) == 8

    def test_thread_action_regular_transitive(self):
        pt, _, _ = cyclic_chain_tower([8, 4, 2], range(4), 2)
        acts = extract_all(pt)
        report = check_thread_action(pt, acts, (0, 1))
        assert report.passed, report.failures()


class TestTowerJson:
    def test_roundtrip(self):
        pt, _, _ = cyclic_chain_tower([4, 2], range(4), 2)
        text = poly_tower_to_json(pt)
        back = poly_tower_from_json_dict(poly_tower_to_json_dict(pt))
        assert poly_tower_to_json(back) == text
        assert check_tower(back).passed
