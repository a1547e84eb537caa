import json
import math

import pytest

import popcent


def star(leaves):
    return popcent.Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def test_graph_basics():
    g = popcent.Graph.from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)])
    assert g.node_count == 3
    assert g.edge_count == 2
    assert g.neighbors(1) == [0, 2]
    assert g.edges() == [(0, 1), (1, 2)]


def test_spectrum_and_centrality():
    value, vector, converged = popcent.power_iteration(star(4))
    assert converged
    assert value == pytest.approx(2.0)
    assert vector[0] == pytest.approx(2 * vector[1])

    path = popcent.Graph.from_edges(3, [(0, 1), (1, 2)])
    values = [p[0] for p in popcent.top_k_spectrum(path, 3)]
    assert values == pytest.approx([math.sqrt(2), 0, -math.sqrt(2)], abs=1e-9)

    assert popcent.centrality(path, "closeness") == [1.0, 1.5, 1.0]
    pr = popcent.centrality(star(4), "pagerank")
    assert sum(pr) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(popcent.ArgumentError):
        popcent.centrality(path, "katz")


def test_statistics():
    assert popcent.degree_assortativity(star(5)) == pytest.approx(-1.0)
    cycle = popcent.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(popcent.UndefinedStatistic):
        popcent.degree_assortativity(cycle)


def test_sgc_sweep_and_report():
    cfg = popcent.SGCConfig()
    cfg.masses_count = 800
    cfg.seed = 2
    g, meta, warnings = popcent.generate_sgc(cfg)
    assert g.node_count == 820
    assert sorted(set(meta.groups)) == ["celebrity", "leader", "masses"]

    again, _, _ = popcent.generate_sgc(cfg)
    assert again == g

    sweep = popcent.threshold_sweep(g, meta, grid=list(range(0, 101, 10)),
                                    measures=["eigenvector", "pagerank"])
    assert sweep.thresholds() == list(range(0, 101, 10))
    leaders = sweep.series("leader", "mean_eigencentrality")
    assert len(leaders) == 11
    assert json.loads(sweep.to_json())["schema"] == "popcent.sweep"
    assert sweep.to_csv().startswith("# schema=popcent.sweep")

    report = popcent.transition_report(sweep)
    assert report["group_a"] == "leader"
    assert "transition_threshold" in report


def test_load_roundtrip(tmp_path):
    (tmp_path / "e.tsv").write_text("a\tb\nb\tc\n")
    (tmp_path / "m.csv").write_text("id,name,popularity,genres,group\na,A,10,rock,x\nb,B,50,,y\nc,C,90,,y\n")
    g, meta = popcent.load(str(tmp_path / "e.tsv"), str(tmp_path / "m.csv"))
    assert g.edge_count == 2
    assert meta.popularity == [10.0, 50.0, 90.0]
    (tmp_path / "bad.csv").write_text("id,name,popularity,genres,group\na,A,101,,\n")
    with pytest.raises(popcent.ValidationError):
        popcent.load(str(tmp_path / "e.tsv"), str(tmp_path / "bad.csv"))


def test_logistic_helpers():
    t = list(range(0, 101))
    y = [1 / (1 + math.exp(-0.5 * (x - 40))) for x in t]
    L, g, t0, converged = popcent.fit_logistic(t, y)
    assert converged
    assert g == pytest.approx(0.5, rel=1e-3)
    assert popcent.detect_transition([0, 1, 2, 3], [1, 1, 0, 0], [0, 0, 1, 1]) == 2
