"""Graph construction, the per-pair coefficient, and CSV round-trips."""

import random

import pytest

from helpers import brute_mcc, complete_graph, random_graph
from mcclink.errors import InputError
from mcclink.graph import (
    SocialGraph,
    clustering_coefficient,
    count_links_among,
    load_graph,
    mcc_all,
    mutual_clustering_coefficient,
    mutual_friends,
    save_edge_csv,
    save_node_csv,
)


class TestConstruction:
    def test_reversed_duplicates_collapse(self):
        g = SocialGraph("abc", [("a", "b"), ("b", "a"), ("a", "b")])
        assert g.edge_count == 1
        assert g.has_edge("a", "b") and g.has_edge("b", "a")

    def test_self_loop_rejected(self):
        with pytest.raises(InputError):
            SocialGraph("ab", [("a", "a")])

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(InputError):
            SocialGraph("ab", [("a", "z")])

    def test_duplicate_node_id_rejected(self):
        with pytest.raises(InputError):
            SocialGraph(["a", "b", "a"], [])

    def test_fake_flag_for_unknown_node_rejected(self):
        with pytest.raises(InputError):
            SocialGraph("ab", [], fake={"z"})

    def test_fake_flags(self):
        g = SocialGraph("abc", [("a", "b")], fake={"c"})
        assert g.is_fake("c") and not g.is_fake("a")
        assert g.fake_nodes == ("c",)

    def test_canonical_edge_order(self):
        g = SocialGraph(["n1", "n2", "n3"], [("n3", "n1"), ("n2", "n1")])
        assert g.edges == (("n1", "n2"), ("n1", "n3"))

    def test_degree_and_neighbors(self):
        g = SocialGraph("abcd", [("a", "b"), ("a", "c")])
        assert g.degree("a") == 2
        assert g.neighbors("a") == ("b", "c")
        assert g.degree("d") == 0


class TestMutualFriends:
    def test_triangle_plus_leaf(self):
        g = SocialGraph("abcd", [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d")])
        assert mutual_friends(g, "a", "b") == {"c"}
        assert mutual_friends(g, "a", "d") == {"b"}

    def test_endpoints_excluded_when_adjacent(self):
        g = complete_graph(4)
        mutual = mutual_friends(g, "k0", "k1")
        assert "k0" not in mutual and "k1" not in mutual
        assert len(mutual) == 2

    def test_same_node_rejected(self):
        g = SocialGraph("ab", [("a", "b")])
        with pytest.raises(InputError):
            mutual_friends(g, "a", "a")

    def test_count_links_among(self):
        g = SocialGraph("abcd", [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")])
        assert count_links_among(g, ["a", "b", "c"]) == 3
        assert count_links_among(g, ["a", "d"]) == 0
        assert count_links_among(g, []) == 0


class TestCoefficient:
    def test_requires_edge(self):
        g = SocialGraph("abc", [("a", "b")])
        with pytest.raises(InputError):
            mutual_clustering_coefficient(g, "a", "c")

    def test_no_mutual_friends_scores_zero(self):
        g = SocialGraph("ab", [("a", "b")])
        rec = mutual_clustering_coefficient(g, "a", "b")
        assert (rec.m_uv, rec.l_uv, rec.mcc) == (0, 0, 0.0)

    def test_single_mutual_friend_scores_zero(self):
        g = SocialGraph("abc", [("a", "b"), ("a", "c"), ("b", "c")])
        rec = mutual_clustering_coefficient(g, "a", "b")
        assert (rec.m_uv, rec.l_uv, rec.mcc) == (1, 0, 0.0)

    def test_two_linked_mutual_friends(self):
        edges = [("a", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d"), ("c", "d")]
        g = SocialGraph("abcd", edges)
        rec = mutual_clustering_coefficient(g, "a", "b")
        assert (rec.m_uv, rec.l_uv, rec.mcc) == (2, 1, 1.0)

    def test_two_unlinked_mutual_friends(self):
        edges = [("a", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")]
        g = SocialGraph("abcd", edges)
        rec = mutual_clustering_coefficient(g, "a", "b")
        assert (rec.m_uv, rec.l_uv, rec.mcc) == (2, 0, 0.0)

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_complete_graph_edges_score_one(self, n):
        g = complete_graph(n)
        for rec in mcc_all(g):
            assert rec.m_uv == n - 2
            assert rec.mcc == 1.0

    def test_mcc_all_matches_brute_force(self):
        rng = random.Random(17)
        for _ in range(60):
            g = random_graph(rng)
            oracle = brute_mcc(g.edges)
            records = mcc_all(g)
            assert len(records) == g.edge_count
            for rec in records:
                m, l, mcc = oracle[frozenset((rec.u, rec.v))]
                assert (rec.m_uv, rec.l_uv) == (m, l)
                assert abs(rec.mcc - mcc) <= 1e-12

    def test_mcc_all_follows_edge_order(self):
        rng = random.Random(3)
        g = random_graph(rng)
        assert [(r.u, r.v) for r in mcc_all(g)] == list(g.edges)

    def test_free_function_agrees_with_batch(self):
        rng = random.Random(5)
        g = random_graph(rng)
        for rec in mcc_all(g):
            single = mutual_clustering_coefficient(g, rec.u, rec.v)
            assert single == rec


class TestNodeClustering:
    def test_low_degree_is_zero(self):
        g = SocialGraph("abc", [("a", "b")])
        assert clustering_coefficient(g, "a") == 0.0
        assert clustering_coefficient(g, "c") == 0.0

    def test_triangle_node(self):
        g = SocialGraph("abc", [("a", "b"), ("b", "c"), ("c", "a")])
        assert clustering_coefficient(g, "a") == 1.0

    def test_open_wedge(self):
        g = SocialGraph("abc", [("a", "b"), ("a", "c")])
        assert clustering_coefficient(g, "a") == 0.0


class TestCsvRoundTrip:
    def test_graph_round_trip(self, tmp_path):
        g = SocialGraph(["u1", "u2", "u3", "f1"], [("u1", "u2"), ("u2", "f1")],
                        fake={"f1"})
        ep = tmp_path / "edges.csv"
        np_ = tmp_path / "nodes.csv"
        save_edge_csv(g, ep)
        save_node_csv(g, np_)
        g2 = load_graph(ep, np_)
        assert g2.nodes == g.nodes
        assert g2.edges == g.edges
        assert g2.fake_nodes == g.fake_nodes

    def test_bad_edge_header(self, tmp_path):
        p = tmp_path / "edges.csv"
        p.write_text("from,to\na,b\n")
        with pytest.raises(InputError):
            load_graph(p, p)

    def test_bad_fake_flag(self, tmp_path):
        ep = tmp_path / "edges.csv"
        ep.write_text("u,v\n")
        np_ = tmp_path / "nodes.csv"
        np_.write_text("id,is_fake\nu1,yes\n")
        with pytest.raises(InputError):
            load_graph(ep, np_)
