import numpy as np
import pytest
from hypothesis import given, strategies as st

from planarcc.instance import (EmbeddedPlanarGraph, InstanceError, InstanceFormatError,
                               MulticutLabeling, ProblemInstance, cycle_graph, generate_synthetic,
                               grid_graph, parse_instance, random_planar_graph, read_instance,
                               serialize_instance, split_theta, synthetic_instance, write_instance)

C4_TEXT = """\
# four-cycle
nodes 4 edges 4 faces 2 pairs 1
edge 0 0 1 1.0
edge 1 1 2 1.0
edge 2 2 3 1.0
edge 3 3 0 1.0
face 0 +0 +1 +2 +3
face 1 -3 -2 -1 -0
pair 0 2
"""


def test_parse_c4():
    inst = parse_instance(C4_TEXT)
    g = inst.graph
    assert (g.node_count, g.edge_count, g.face_count) == (4, 4, 2)
    assert g.node_count - g.edge_count + g.face_count == 2
    assert inst.pairs == ((0, 2),)


def test_missing_face_violates_euler():
    text = C4_TEXT.replace("faces 2", "faces 1").replace("face 1 -3 -2 -1 -0\n", "")
    with pytest.raises(InstanceError, match="Euler formula violated"):
        parse_instance(text)


def test_header_face_count_mismatch_reports_euler():
    text = C4_TEXT.replace("face 1 -3 -2 -1 -0\n", "")
    with pytest.raises(InstanceError, match="Euler formula violated"):
        parse_instance(text)


@pytest.mark.parametrize("bad, where", [
    ("edge 1 1 2 x", 4),
    ("edge 1 1 2", 4),
    ("vertex 1 1 2 1.0", 4),
])
def test_parse_errors_carry_line(bad, where):
    text = C4_TEXT.replace("edge 1 1 2 1.0", bad)
    with pytest.raises(InstanceFormatError) as info:
        parse_instance(text)
    assert info.value.line == where


def test_face_listing_each_dart_twice_rejected():
    text = C4_TEXT.replace("face 1 -3 -2 -1 -0", "face 1 +0 +1 +2 +3")
    with pytest.raises(InstanceError):
        parse_instance(text)


def test_grid_2x3_counts():
    g = grid_graph(2, 3)
    assert (g.node_count, g.edge_count, g.face_count) == (6, 7, 3)


def test_self_loop_and_disconnected_rejected():
    with pytest.raises(InstanceError):
        EmbeddedPlanarGraph(2, ((0, 0),), ((0,), (1,)))
    with pytest.raises(InstanceError):
        EmbeddedPlanarGraph.from_rotation(4, [(0, 1), (2, 3)], [[0], [1], [2], [3]])


def test_roundtrip_file(tmp_path):
    inst, _ = synthetic_instance(3, 4, 5, 0.4, 5)
    path = tmp_path / "x.inst"
    write_instance(inst, path)
    back = read_instance(path)
    assert serialize_instance(back) == serialize_instance(inst)
    assert np.array_equal(back.theta, inst.theta)
    assert back.graph.faces == inst.graph.faces


@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(2, 6), st.floats(0, 1))
def test_serialize_parse_identity(seed, rows, cols, noise):
    inst, _ = synthetic_instance(seed, rows, cols, noise, 0)
    text = serialize_instance(inst)
    assert serialize_instance(parse_instance(text)) == text


@pytest.mark.parametrize("theta, plus, minus", [
    ((1, -2, 0), (1, 0, 0), (0, -2, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
])
def test_split_theta_examples(theta, plus, minus):
    g = grid_graph(2, 2) if len(theta) == 4 else EmbeddedPlanarGraph.from_straight_line(
        np.array([[0, 0], [1, 0], [2, 0], [3, 0]]), [(0, 1), (1, 2), (2, 3)])
    tp, tm = split_theta(ProblemInstance(g, theta))
    assert np.array_equal(tp, plus) and np.array_equal(tm, minus)


def test_split_theta_all_negative(c4):
    tp, tm = split_theta(ProblemInstance(c4, [-1, -1, -1, -1]))
    assert not tp.any() and np.array_equal(tm, [-1, -1, -1, -1])


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=4, max_size=4))
def test_split_theta_properties(values):
    tp, tm = split_theta(ProblemInstance(cycle_graph(4), values))
    theta = np.array(values)
    assert np.array_equal(tp + tm, theta)
    assert np.all(tp * tm == 0) and np.all(tp >= 0) and np.all(tm <= 0)


def test_generator_zero_noise_signs_match_truth():
    inst, label = synthetic_instance(1, 2, 2, 0.0, 0)
    assert inst.graph.edge_count == 4
    e = inst.graph.edges_array
    across = label[e[:, 0]] != label[e[:, 1]]
    assert np.all((inst.theta < 0) == across)


def test_generator_deterministic():
    a = generate_synthetic(1, 4, 4, 0.3, 3)
    b = generate_synthetic(1, 4, 4, 0.3, 3)
    assert serialize_instance(a) == serialize_instance(b)


def test_generator_pairs_cross_regions_and_capacity():
    inst, label = synthetic_instance(7, 5, 5, 0.3, 6)
    assert len(inst.pairs) == 6
    assert all(label[a] != label[b] for a, b in inst.pairs)
    with pytest.raises(ValueError, match="exceeds the limit"):
        synthetic_instance(1, 2, 2, 0.0, 50)


@given(st.integers(0, 5000), st.integers(3, 30))
def test_random_faces_cover_each_edge_twice(seed, n):
    g = random_planar_graph(np.random.default_rng(seed), n, 0.5)
    darts = sorted(d for face in g.faces for d in face)
    assert darts == list(range(2 * g.edge_count))
    assert g.node_count - g.edge_count + g.face_count == 2


@given(st.integers(0, 5000), st.integers(2, 7), st.integers(2, 7))
def test_generated_faces_cover_each_edge_twice(seed, rows, cols):
    g, _ = synthetic_instance(seed, rows, cols, 0.5, 0)
    darts = sorted(d for face in g.graph.faces for d in face)
    assert darts == list(range(2 * g.graph.edge_count))


def test_labeling_consistency(c4):
    lab = MulticutLabeling.from_edge_cut(c4, [True, False, False, False])
    # a lone cut edge on a cycle is not a multicut; it gets dropped
    assert not lab.edge_cut.any() and lab.component_count == 1
    lab = MulticutLabeling.from_components(c4, [0, 0, 1, 1])
    assert lab.edge_cut.tolist() == [False, True, False, True]
    assert lab.is_consistent(c4)
    assert lab.separates([(0, 2)]) and not lab.separates([(0, 1)])
    assert lab.cost(np.array([1.0, 2.0, 3.0, 4.0])) == 6.0
