from fractions import Fraction as F

import pytest

from eulercount.counting import count_vr
from eulercount.graph import ATRAIL, GENERAL, MapError
from eulercount.signature import Signature, glue_signature, permute_triple, signature_of
from conftest import interior_targets, targets_up_to
from eulercount.synthesis import (SynthesisTrace, ratio_program, ratio_search, sgg_ratio_program,
                                  synthesize_graph_gadget, synthesize_map_gadget, t1, t2)


class TestMapSynthesis:
    def test_smg_itself(self):
        g, tr = synthesize_map_gadget((F(1, 2), F(1, 2), 0))
        assert g.n_vertices == 1
        assert [s.op for s in tr.steps] == ["base"]

    def test_one_glue(self):
        g, tr = synthesize_map_gadget((F(2, 3), F(1, 3), 0))
        assert g.n_vertices == 2
        assert sum(1 for s in tr.steps if s.op == "glue") == 1

    def test_two_fifths(self):
        g, _ = synthesize_map_gadget((F(2, 5), F(2, 5), F(1, 5)))
        assert signature_of(count_vr(g, ATRAIL, engine="brute")) == Signature(F(2, 5), F(2, 5), F(1, 5))

    @pytest.mark.parametrize("target", targets_up_to(6))
    def test_denominators_up_to_six(self, target):
        g, tr = synthesize_map_gadget(target)
        assert g.n_vertices <= 12
        assert signature_of(count_vr(g, ATRAIL, engine="brute")).as_tuple() == target
        assert tr.replay_signature().as_tuple() == target

    def test_entry_one_rejected(self):
        with pytest.raises(MapError):
            synthesize_map_gadget((1, 0, 0))

    def test_ratio_program(self):
        for q in (F(1), F(3), F(2, 3), F(5, 4)):
            a, b, c = ratio_program(q).replay_counts()
            assert b == 0 and F(a, c) == q

    def test_running_signatures_follow_glue(self):
        _, tr = synthesize_map_gadget((F(1, 6), F(1, 3), F(1, 2)))
        sigs = tr.running_signatures()
        assert sigs[-1] == tr.replay_signature()


class TestGraphSynthesis:
    def test_ratio_maps(self):
        assert t1(1) == F(1, 2) and t2(1) == F(1, 2)
        q = 1
        for op in ratio_search(0.30, 0.31):
            q = t1(q) if op == "t1" else t2(q)
        assert 0.30 <= q <= 0.31

    def test_sgg_ratio_program(self):
        ops = ratio_search(0.7, 0.72)
        q = F(1)
        for op in ops:
            q = t1(q) if op == "t1" else t2(q)
        a, b, c = sgg_ratio_program(ops).replay_counts()
        assert a == b and F(a, c) == q

    def test_sgg_target(self):
        g, tr = synthesize_graph_gadget((F(1, 3),) * 3, 0.01)
        assert g.n_vertices == 1 and tr.replay_signature() == Signature(F(1, 3), F(1, 3), F(1, 3))

    def test_one_glue_target(self):
        target = (F(1, 2), F(1, 4), F(1, 4))
        _, tr = synthesize_graph_gadget(target, 1e-3, build=False)
        assert tr.replay_signature().l1(target) <= F(1, 1000)

    @pytest.mark.parametrize("eps", [0.05, 0.01])
    def test_interior_targets(self, eps):
        for target in interior_targets(10, seed=7):
            _, tr = synthesize_graph_gadget(target, eps, build=False)
            assert tr.replay_signature().l1(target) <= F(eps)

    def test_built_gadget_matches_replay(self):
        target = (F(9, 20), F(3, 10), F(1, 4))
        g, tr = synthesize_graph_gadget(target, 0.05)
        assert g.n_vertices == tr.n_vertices()
        assert signature_of(count_vr(g, GENERAL, engine="merge")) == tr.replay_signature()

    def test_size_cap_fails_fast(self):
        target = (F(9, 20), F(3, 10), F(1, 4))
        with pytest.raises(MapError, match="size cap"):
            synthesize_graph_gadget(target, 1e-3, build=False, size_cap=10_000)
        _, tr = synthesize_graph_gadget(target, 1e-3, build=False, size_cap=10 ** 7)
        assert tr.replay_signature().l1(target) <= F(1, 1000)

    def test_outside_rejected(self):
        with pytest.raises(MapError, match="outside"):
            synthesize_graph_gadget((F(45, 100), F(35, 100), F(20, 100)), 0.05)

    def test_size_cap(self):
        target = interior_targets(1, seed=3)[0]
        _, tr = synthesize_graph_gadget(target, 0.01, build=False)
        with pytest.raises(MapError, match="cap"):
            tr.build(size_cap=max(1, tr.n_vertices() - 1))

    def test_trace_serialises(self):
        _, tr = synthesize_graph_gadget((F(1, 2), F(1, 4), F(1, 4)), 0.01, build=False)
        d = tr.to_dict()
        assert d["steps"] and "distance" in d["info"]
