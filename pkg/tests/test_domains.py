from pathlib import Path

import pytest

from memsearch import fingerprint, gbfs, validate_plan
from memsearch.domains import (
    DanglingVertex,
    GridDomain,
    NegativeH,
    ParseError,
    PlateauDomain,
    SlidingPuzzleDomain,
    UnsolvableParams,
    build_space,
    chain_graph,
    dump_explicit_graph,
    generate_instance,
    load_explicit_graph,
    parse_explicit_graph,
    random_graph,
)
from memsearch.domains.counters import CountersDomain
from memsearch.domains.puzzle import solvable
from oracles import bfs

DATA = Path(__file__).parent / "data"

TWO = """\
graph two
vertex a h=1
vertex b h=0 goal   # the goal
edge a go b
init a
"""


def test_two_vertex_graph(tmp_path):
    path = tmp_path / "two.graph"
    path.write_text(TWO)
    g, h = load_explicit_graph(path)
    assert g.name == "two" and h("a") == 1.0
    out = gbfs(g, h)
    assert list(out.plan) == ["go"]


def test_chain_file_loads_with_oracle_length():
    g, h = load_explicit_graph(DATA / "chain50.graph")
    actions, reachable = bfs(g, g.initial, g.is_goal)
    assert len(actions) == 49 and reachable == 50
    assert list(gbfs(g, h).plan) == actions


def test_successor_order_follows_file():
    g = parse_explicit_graph("vertex x h=0\nedge x z y\nedge x a y2\nvertex y h=0\n"
                             "vertex y2 h=0 goal\ninit x\n")
    assert [lbl for lbl, _ in g.successors("x")] == ["z", "a"]


@pytest.mark.parametrize("text,exc,attr", [
    ("vertex a h=0\nedge a e ghost\ninit a\n", DanglingVertex, ("name", "ghost")),
    ("vertex a h=0\ninit nowhere\n", DanglingVertex, ("name", "nowhere")),
    ("vertex a h=-1\ninit a\n", NegativeH, ("vertex", "a")),
    ("vertex a h=inf\ninit a\n", NegativeH, ("vertex", "a")),
    ("vertex a h=0\nfrobnicate a\ninit a\n", ParseError, ("line", 2)),
    ("vertex a h=zero\ninit a\n", ParseError, ("line", 1)),
    ("vertex a h=0\nvertex a h=1\ninit a\n", ParseError, ("line", 2)),
    ("vertex a h=0\nedge a x a\nedge a x a\ninit a\n", ParseError, ("line", 3)),
    ("vertex a h=0\n", ParseError, ("line", 0)),
])
def test_parse_errors(text, exc, attr):
    with pytest.raises(exc) as info:
        parse_explicit_graph(text)
    assert getattr(info.value, attr[0]) == attr[1]


def test_dump_round_trip():
    for seed in range(5):
        g = random_graph(60, seed)
        back = parse_explicit_graph(dump_explicit_graph(g))
        assert back.adjacency == g.adjacency
        assert back.h_values == g.h_values and back.goals == g.goals and back.initial == g.initial


def test_random_graph_heuristic_nonnegative_and_seeded():
    a, b = random_graph(100, 3), random_graph(100, 3)
    assert a.adjacency == b.adjacency and a.h_values == b.h_values
    assert all(v >= 0 for v in a.h_values.values())


def test_grid_4x4_shortest_plan():
    g, h = generate_instance("grid", {"width": 4, "height": 4}, 0)
    actions, reachable = bfs(g, g.initial, g.is_goal)
    assert len(actions) == 6 and reachable == 16


def test_grid_successors_stay_in_bounds_and_free():
    for seed in range(5):
        g = build_space("grid", {"width": 9, "obstacle_density": 0.3}, seed)
        assert g.free(g.initial) and g.free(g.goal)
        for x in range(9):
            for y in range(9):
                if g.free((x, y)):
                    assert all(g.free(c) for _, c in g.successors((x, y)))
        assert bfs(g, g.initial, g.is_goal)[0] is not None


def test_grid_unsolvable_params():
    with pytest.raises(UnsolvableParams):
        build_space("grid", {"width": 10, "obstacle_density": 0.95}, 0)


def test_plateau_reachable_states():
    dom, h = generate_instance("plateau", {"width": 500, "depth": 4}, 0)
    actions, reachable = bfs(dom, dom.initial, dom.is_goal)
    assert reachable == 2001 == dom.n_states()
    assert actions is not None
    # one heuristic value per layer
    assert {h((j, i)) for j in range(4) for i in (0, 7, 499)} == {4.0, 3.0, 2.0, 1.0}
    assert h((4, 0)) == 0.0 and dom.is_goal((4, 0))


def test_plateau_single_goal():
    dom = PlateauDomain(20, 3, seed=1)
    _, reachable = bfs(dom, dom.initial, lambda s: False)
    goals = [s for s in [(j, i) for j in range(4) for i in range(20)] if dom.is_goal(s)]
    assert goals == [(3, 0)] and reachable == 61


@pytest.mark.parametrize("seed", range(6))
def test_puzzle_parity(seed):
    p = build_space("puzzle", {"k": 3}, seed)
    assert solvable(p.initial, 3)


def test_puzzle_scramble_solvable_by_oracle():
    p = build_space("puzzle", {"k": 3, "scramble": 20}, 1)
    actions, _ = bfs(p, p.initial, p.is_goal)
    assert actions is not None and len(actions) <= 20
    assert validate_plan(p, p.initial, gbfs(p, p.manhattan).plan, warn=False).valid


def test_puzzle_goal_is_identity():
    p = SlidingPuzzleDomain(3, (1, 2, 3, 4, 5, 6, 7, 8, 0))
    assert p.is_goal(p.initial) and p.manhattan(p.initial) == 0


def test_counters_witness_and_bounds():
    c = build_space("counters", {"n": 4, "max_value": 6}, 2)
    assert c.is_goal(c.witness())
    for _, s in c.successors(c.initial):
        assert all(0 <= v <= 6 for v in s)
    assert bfs(c, c.initial, c.is_goal)[0] is not None


def test_counters_unsolvable_params():
    with pytest.raises(UnsolvableParams):
        build_space("counters", {"n": 5, "max_value": 3}, 0)


def test_counters_permuted_construction_encodes_identically():
    c = CountersDomain(3, 5, [0, 0, 0])
    a = c.make_state({0: 1, 1: 2, 2: 3})
    b = c.make_state({2: 3, 0: 1, 1: 2})
    assert c.encode(a) == c.encode(b)
    assert fingerprint(a) == fingerprint(b)


@pytest.mark.parametrize("domain,params", [
    ("grid", {"width": 10, "obstacle_density": 0.2}),
    ("counters", {"n": 4}),
    ("puzzle", {"k": 3}),
    ("plateau", {"width": 30, "depth": 3}),
    ("random-graph", {"n": 100}),
])
def test_instances_are_deterministic(domain, params):
    a, b = build_space(domain, params, 7), build_space(domain, params, 7)
    assert a.initial == b.initial
    assert a.successors(a.initial) == b.successors(b.initial)


def test_unknown_domain_and_heuristic():
    with pytest.raises(ValueError):
        build_space("sokoban", {}, 0)
    with pytest.raises(ValueError):
        generate_instance("grid", {}, 0, heuristic="euclid")


def test_chain_graph_h_is_distance():
    g = chain_graph(10)
    assert [g.h(f"v{i}") for i in range(10)] == [float(9 - i) for i in range(10)]
    assert isinstance(GridDomain(3, 3).manhattan((0, 0)), float)
