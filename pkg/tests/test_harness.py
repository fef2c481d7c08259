import csv
import io
import json
from fractions import Fraction

import pytest

from rdc.graph import EdgeListError, Graph, parse_edge_list
from rdc.harness import (
    ExperimentError,
    PartitionError,
    build_experiment,
    bundled_graph,
    community_costs,
    gen_partitions,
    run_experiment,
    voronoi_labels,
)
from rdc.oracle import check_consistency_aware, check_learning_objective, check_monotone, check_submodular
from rdc.randgen import ground_sample


def test_parse_edge_list_examples():
    g = parse_edge_list("# c\n1 2\n2 3\n")
    assert g.num_nodes == 3
    assert g.edges == {(0, 1), (1, 2)}
    assert g.labels == ("1", "2", "3")
    assert parse_edge_list("1 2\n2 1\n").edges == {(0, 1)}
    g = parse_edge_list("1 1\n1 2\n")
    assert g.edges == {(0, 1)}


def test_parse_edge_list_errors():
    with pytest.raises(EdgeListError, match="line 2"):
        parse_edge_list("1 2\n3\n")
    with pytest.raises(EdgeListError):
        parse_edge_list("# only comments\n")


def test_bfs_and_components():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    assert g.bfs_distances(0) == [0, 1, 2, -1, -1]
    assert not g.is_connected()
    big = g.largest_component()
    assert big.num_nodes == 3 and big.is_connected()


def test_voronoi_path_tie():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert voronoi_labels(g, [0, 2]) == [0, 0, 2]
    assert voronoi_labels(g, [2, 0]) == [0, 0, 2]


def test_partitions_every_node_own_community():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    cm = gen_partitions(g, 3, 1, seed=0)
    assert cm.hypotheses == ((0, 1, 2),)


def test_partitions_deterministic_and_distinct():
    g = bundled_graph()
    a = gen_partitions(g, 3, 100, seed=5)
    b = gen_partitions(g, 3, 100, seed=5)
    assert a == b
    assert len(set(a.hypotheses)) == 100
    assert all(set(h) == {0, 1, 2} for h in a.hypotheses)
    assert a != gen_partitions(g, 3, 100, seed=6)


def test_partition_errors():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(PartitionError):
        gen_partitions(g, 2, 1)
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(PartitionError):
        gen_partitions(path, 2, 50, max_tries=20)


def test_bundled_graph():
    g = bundled_graph()
    assert 30 <= g.num_nodes <= 50
    assert g.is_connected()


def test_community_costs():
    cm = community_costs(3, 3, [0, 2, 1], "preferred-zero:1,5")
    assert cm.table[0] == (0, 1, 5)
    assert cm.table[1] == (1, 5, 0)
    assert community_costs(2, 2, [0, 0], "uniform:3/2").table == ((Fraction(3, 2),) * 2,) * 2
    with pytest.raises(ExperimentError):
        community_costs(2, 2, [0, 0], "bogus:1")


def test_build_experiment_vs_reduction():
    g = bundled_graph()
    inst = build_experiment(g, gen_partitions(g, 3, 100, seed=1), "vs_reduction")
    assert (inst.objective.Q, inst.objective.eta) == (Fraction(99, 100), Fraction(1, 100))
    ground = ground_sample(inst, 8, seed=3)
    assert check_learning_objective(inst.objective, inst.hypotheses, ground).passed


def test_build_experiment_unreachable_q():
    g = bundled_graph()
    with pytest.raises(ExperimentError, match="unreachable"):
        build_experiment(g, gen_partitions(g, 3, 20, seed=1), "edge_users", 50)


def test_edge_users_experiment_structure():
    g = bundled_graph()
    inst = build_experiment(g, gen_partitions(g, 3, 30, seed=2), "edge_users", 10)
    f = inst.objective
    assert f.eta == Fraction(1, 30)
    for seed in range(3):
        ground = ground_sample(inst, 8, seed)
        assert check_monotone(f, ground).passed
        assert check_submodular(f, ground).passed
        assert check_consistency_aware(f, f.Q, inst.hypotheses, ground).passed


def test_run_experiment_two_communities():
    import networkx as nx

    nxg = nx.random_partition_graph([15, 15], 0.4, 0.05, seed=3)
    g = Graph.from_edges(30, nxg.edges()).largest_component()
    cm = gen_partitions(g, 2, 20, seed=0)
    inst = build_experiment(g, cm, "edge_users", 3)
    res = run_experiment(inst)
    assert [r.variant for r in res.rows] == ["uf", "u2", "u3"]
    assert all(r.reached_target and r.worst_cost >= 0 for r in res.rows)
    single = run_experiment(inst, ["uf"])
    assert len(single.rows) == 1
    assert len(list(csv.DictReader(io.StringIO(single.table("csv"))))) == 1


def test_run_experiment_deterministic_and_sampled():
    g = bundled_graph()
    inst = build_experiment(g, gen_partitions(g, 3, 40, seed=4), "vs_reduction")
    a = run_experiment(inst, ["uf", "u3"], sample_h=10, seed=1)
    b = run_experiment(inst, ["uf", "u3"], sample_h=10, seed=1)
    strip = lambda r: {k: v for k, v in r.row().items() if k != "wall_time_s"}
    assert [strip(r) for r in a.rows] == [strip(r) for r in b.rows]
    assert a.sampled and "lower bounds" in a.table()
    doc = json.loads(a.table("json"))
    assert doc["sampled_lower_bound"] is True
    assert all(r["hypotheses_evaluated"] == 10 for r in doc["rows"])
