import threading

import pytest

from pyfads.fwk import DoubleWrite, EventContext, EventStore, Task, UndeclaredInput, UndeclaredOutput
from pyfads.fwk.services import HBookService
from pyfads.hbook import SchemaMismatch


def test_single_assignment():
    s = EventStore(3)
    s.put("a", 1)
    assert s.get("a") == 1 and "a" in s
    with pytest.raises(DoubleWrite) as ei:
        s.put("a", 2)
    assert ei.value.event_index == 3
    assert s.get("a") == 1


def test_declared_ports_enforced():
    t = Task("t", inputs={"in": "x"}, outputs={"out": "x"})
    s = EventStore(0)
    s.put("in", 5)
    s.put("other", 6)
    ctx = EventContext(s, t, 0)
    assert ctx.get("in") == 5
    with pytest.raises(UndeclaredInput):
        ctx.get("other")
    with pytest.raises(UndeclaredOutput):
        ctx.put("in", 1)
    ctx.put("out", 7)
    assert s.get("out") == 7


def test_concurrent_writers_only_one_wins():
    s = EventStore(0)
    errors, barrier = [], threading.Barrier(8)

    def writer(v):
        barrier.wait()
        try:
            s.put("k", v)
        except DoubleWrite:
            errors.append(v)

    threads = [threading.Thread(target=writer, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(errors) == 7
    assert s.get("k") not in errors


def test_context_rng_is_per_task_and_event():
    a, b = Task("a"), Task("b")
    draw = lambda t, ev: EventContext(EventStore(ev), t, 42).rng.random()
    assert draw(a, 0) == draw(a, 0)
    assert len({draw(a, 0), draw(a, 1), draw(b, 0), draw(b, 1)}) == 4


def test_fill_buffers_are_validated_early():
    hb = HBookService()
    hb.book_h1("h", 10, 0, 1)
    hb.book_ntuple("nt", [("a", "int64")])
    ctx = EventContext(EventStore(0), Task("t"), 0, hbook=hb)
    ctx.fill("h", 0.5)
    ctx.append("nt", (3,))
    with pytest.raises(KeyError):
        ctx.fill("missing", 1.0)
    with pytest.raises(KeyError):
        ctx.fill2d("h", 1.0, 1.0)
    with pytest.raises(SchemaMismatch):
        ctx.append("nt", ("x",))
    # nothing applied until the framework commits
    assert hb.objects["h"].total_entries() == 0
    hb.commit(0, ctx._ops)
    assert hb.objects["h"].total_entries() == 1 and hb.objects["nt"].rows == [(3,)]
