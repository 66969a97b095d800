import pytest

from pyfads.hbook import NTuple, SchemaMismatch, ntuple_append


def test_schema_checked():
    nt = NTuple([("i", "int64"), ("x", "float64"), ("s", "string")])
    nt.append(0, (1, 2, "a"))  # ints widen to float
    assert nt.rows == [(1, 2.0, "a")]
    for bad in [(1.5, 1.0, "a"), (1, "x", "a"), (1, 1.0, 3), (True, 1.0, "a"), (1, 1.0)]:
        with pytest.raises(SchemaMismatch):
            nt.append(0, bad)
    with pytest.raises(SchemaMismatch):
        NTuple([("a", "int64"), ("a", "int64")])
    with pytest.raises(SchemaMismatch):
        NTuple([("a", "complex")])
    with pytest.raises(SchemaMismatch):
        nt.append(0, (2**63, 1.0, "x"))


def test_rows_in_event_order():
    nt = NTuple([("v", "int64")])
    for ev in (5, 1, 3, 1):
        ntuple_append(nt, ev, (ev,))
    assert nt.rows == [(1,), (1,), (3,), (5,)]
    assert len(nt) == 4


def test_merge():
    a, b = NTuple([("v", "int64")]), NTuple([("v", "int64")])
    a.append(2, (20,))
    b.append(1, (10,))
    b.append(2, (21,))
    assert (a + b).rows == [(10,), (20,), (21,)]
    with pytest.raises(SchemaMismatch):
        a.merge(NTuple([("w", "int64")]))
