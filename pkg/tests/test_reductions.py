import math
from fractions import Fraction

import pytest

from eulercount import fixtures
from eulercount.counting import compose_vr, count_closed
from eulercount.gadgets import is_prime, vertex_factor
from eulercount.graph import ATRAIL, MapError
from eulercount.kotzig import trace_faces
from eulercount.reductions import (DEFAULT_THRESHOLD, TEST_THRESHOLD, DegreeProfile, ap_instance, ap_layers,
                                   ap_normalizer_d, contract_degree2, count_mod_p, count_planarized_mod_p,
                                   estimate_et, et_via_crt, expand_to_4regular, planarize, select_primes,
                                   to_atrail_instance, transition_system_bound, unscale_and_crt)


class TestPrimes:
    def test_product_exceeds_bound(self):
        ps = select_primes(10, 6, 15 ** 2)
        assert ps == [7, 11, 13]
        assert math.prod(ps) > 225 and math.prod(ps[:-1]) <= 225

    def test_all_above_lower(self):
        ps = select_primes(20, 50, 10 ** 20)
        assert all(is_prime(p) and p > 50 for p in ps)
        assert ps == sorted(set(ps))

    def test_count_cap(self):
        with pytest.raises(MapError):
            select_primes(1, 2, 10 ** 6)


class TestCrt:
    def test_unscale_round_trip(self):
        prof = DegreeProfile({6: 2})
        T = 120
        primes = [7, 11, 13]
        pairs = [(T * prof.factor() % p, p) for p in primes]
        assert unscale_and_crt(pairs, prof) == T

    def test_factor_not_invertible(self):
        with pytest.raises(MapError, match="invertible"):
            unscale_and_crt([(1, 3)], DegreeProfile({6: 1}))

    def test_profile_of_threshold(self, k5_plus):
        assert DegreeProfile.of(k5_plus, DEFAULT_THRESHOLD).counts == {6: 1}
        assert DegreeProfile.of(k5_plus, TEST_THRESHOLD).counts == {4: 4, 6: 1}
        assert DegreeProfile({6: 1}).factor() == vertex_factor(6)

    def test_bound_counts_transition_systems(self, dipole6):
        assert transition_system_bound(dipole6) == 15 ** 2

    def test_dipole6_pipeline(self, dipole6):
        rep = et_via_crt(dipole6)
        assert rep.count == count_closed(dipole6) == 120
        assert rep.primes == [7, 11, 13]
        assert all(p > 6 for p in rep.primes)

    def test_degree6_graph_pipeline(self, k5_plus):
        rep = et_via_crt(k5_plus)
        assert rep.count == count_closed(k5_plus) == 592

    def test_test_mode_on_4_regular(self, dipole4):
        rep = et_via_crt(dipole4, threshold=TEST_THRESHOLD)
        assert rep.count == 6


class TestExpansion:
    def test_realized_expansion_is_4_regular(self, dipole6):
        m = expand_to_4regular(dipole6, 7, realize=True).flatten()
        assert set(m.degrees().values()) == {4}

    def test_realized_and_table_networks_agree(self, dipole6):
        a = compose_vr(expand_to_4regular(dipole6, 7), modulus=7).closed_count
        b = compose_vr(expand_to_4regular(dipole6, 7, realize=True), modulus=7).closed_count
        assert a % 7 == b % 7 == 120 * DegreeProfile({6: 2}).factor() % 7

    def test_needs_large_p(self, dipole6):
        with pytest.raises(MapError, match="p > max degree"):
            expand_to_4regular(dipole6, 5)

    def test_contract_degree2(self):
        g = fixtures.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (0, 1)])
        h = contract_degree2(g)
        assert sorted(h.degrees().values()) == [4, 4]
        assert count_closed(h) == count_closed(g)

    def test_count_mod_p(self, dipole6):
        f = DegreeProfile.of(dipole6, DEFAULT_THRESHOLD).factor()
        assert count_mod_p(dipole6, 11) == 120 * f % 11


class TestPlanarize:
    def test_k5_is_plane_with_crossings(self, k5):
        m, rep = planarize(k5, 3)
        assert trace_faces(m).genus == 0
        assert len(rep.crossings) == 5
        assert set(m.degrees().values()) == {4}

    @pytest.mark.parametrize("p", [3, 5])
    def test_k5_congruence(self, k5, p):
        n, _ = count_planarized_mod_p(k5, p)
        assert n % p == 132 % p

    def test_positions_are_exact(self, k5):
        _, rep = planarize(k5, 3, seed=4)
        assert all(isinstance(x, Fraction) for pt in rep.positions.values() for x in pt)

    def test_rejects_non_4_regular(self, dipole6):
        with pytest.raises(MapError):
            planarize(dipole6, 7)


class TestAtrails:
    @pytest.mark.parametrize("name", ["4dipole", "doubled-c3", "k5"])
    def test_relation(self, name):
        g = fixtures.GRAPHS[name]()
        m = to_atrail_instance(g)
        assert count_closed(m, ATRAIL, engine="merge") == 2 ** g.n_vertices * count_closed(g)

    def test_needs_4_regular(self, dipole6):
        with pytest.raises(MapError):
            to_atrail_instance(dipole6)


class TestAp:
    def test_layers_at_least_one(self, dipole4):
        inst = ap_instance(dipole4, 1e6, C=1.0)
        assert all(t >= 1 for t in inst.T.values())
        assert set(inst.graph.degrees().values()) <= {2, 4}
        assert inst.graph.kind == "map"

    def test_normalizer_formula(self):
        D = 7
        assert ap_normalizer_d(4, D) == Fraction(2 ** D * 2 ** 2 * 2, 24)

    def test_layer_formula(self):
        assert ap_layers(4, 2, 0.5, 0.173) == math.ceil(0.173 * 16 * math.log(4) * math.log(4 * 24 * 2 / 0.5))

    @pytest.mark.parametrize("eps", [0.25, 0.5, 1.0])
    def test_sandwich(self, dipole4, doubled_c3, eps):
        for g, T in ((dipole4, 6), (doubled_c3, 16)):
            est = estimate_et(g, eps)
            assert abs(math.log(est / T)) <= eps

    def test_trivial_case(self, dipole4):
        assert estimate_et(dipole4, 10 * dipole4.n_vertices) == 3 ** dipole4.n_vertices
