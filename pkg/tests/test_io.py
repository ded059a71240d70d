import io

import pytest
from hypothesis import given, strategies as st

from graphex.graph import graph_from_pairs
from graphex.io import ParseError, parse_edge_list, parse_trace, write_edge_list


def test_edge_list_examples():
    g = parse_edge_list(b"1 2\n2 1\n")
    assert (g.num_vertices, g.num_edges) == (2, 1)
    g = parse_edge_list(b"# c\n1 1\n")
    assert (g.num_vertices, g.num_edges) == (1, 1)
    assert int(g.self_loop_mask.sum()) == 1
    g = parse_edge_list(b"a b\nb c\n")
    assert (g.num_vertices, g.num_edges) == (3, 2)
    assert sorted(g.nonself_degrees) == [1, 1, 2]
    assert g.labels == ("a", "b", "c")


def test_edge_list_malformed_line():
    with pytest.raises(ParseError) as err:
        parse_edge_list(b"1 2\n3\n")
    assert err.value.lineno == 2


def test_edge_list_accepts_text_and_blank_lines():
    g = parse_edge_list("1\t2\n\n  \n2 3\n")
    assert g.num_edges == 2


def test_trace_examples():
    tr = parse_trace(b"1.0 a b\n0.5 b c\n")
    assert [(t, u, v) for t, u, v in tr.records()] == [(0.5, "b", "c"), (1.0, "a", "b")]
    tr = parse_trace(b"1 a b\n2 a b\n")
    assert len(tr) == 2
    assert tr.snapshot(2).num_edges == 1
    assert len(parse_trace(b"")) == 0


def test_trace_bad_timestamp():
    with pytest.raises(ParseError) as err:
        parse_trace(b"1 a b\nnoon a c\n")
    assert err.value.lineno == 2


def test_trace_sort_is_stable():
    tr = parse_trace(b"2 x y\n1 a b\n1 c d\n")
    assert [(u, v) for _, u, v in tr.records()] == [("a", "b"), ("c", "d"), ("x", "y")]


edge_lists = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=80)


@given(edge_lists)
def test_write_then_parse_roundtrip(pairs):
    g = graph_from_pairs(pairs)
    buf = io.StringIO()
    write_edge_list(g, buf)
    h = parse_edge_list(buf.getvalue())
    as_ints = {frozenset(int(h.labels[i]) for i in e) for e in h.edges}
    assert as_ints == g.edge_set()


@given(st.lists(st.tuples(st.floats(0, 100, allow_nan=False), st.integers(0, 9), st.integers(0, 9)),
                max_size=50),
       st.floats(0, 100), st.floats(0, 100))
def test_snapshots_monotone(rows, t1, t2):
    t1, t2 = sorted((t1, t2))
    text = "".join(f"{t!r} {u} {v}\n" for t, u, v in rows)
    tr = parse_trace(text)
    a, b = tr.snapshot(t1), tr.snapshot(t2)
    lab = lambda g: {frozenset(g.labels[i] for i in e) for e in g.edges}
    assert lab(a) <= lab(b)
