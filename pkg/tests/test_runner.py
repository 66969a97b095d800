import threading
import time

import pytest

from pyfads.fwk import (
    FrameworkError,
    FuncTask,
    MissingOutput,
    Services,
    Task,
    TaskError,
    build_graph,
    run,
)


class Recorder(Task):
    """Logs lifecycle calls and per-event (start, end) stamps."""

    def __init__(self, id, ins=(), outs=(), journal=None, work=0.0, fail_on=None):
        super().__init__(id, {k: "v" for k in ins}, {k: "v" for k in outs})
        self.journal = journal if journal is not None else []
        self.work = work
        self.fail_on = fail_on
        self.lock = threading.Lock()

    def _log(self, *entry):
        with self.lock:
            self.journal.append(entry)

    def configure(self, services):
        self._log(self.id, "configure")

    def start(self, services):
        self._log(self.id, "start")

    def stop(self, services):
        self._log(self.id, "stop")

    def process(self, ctx):
        t0 = time.perf_counter()
        self._log(self.id, "begin", ctx.event_index, t0)
        total = sum(ctx.get(k) for k in self.input_keys)
        if self.work:
            time.sleep(self.work)
        if self.fail_on == ctx.event_index:
            raise RuntimeError(f"boom in {self.id}")
        for k in self.output_keys:
            ctx.put(k, total + 1)
        self._log(self.id, "end", ctx.event_index, time.perf_counter())


def source(n):
    return ({"src": i} for i in range(n))


def diamond(journal, **kw):
    return build_graph(
        [
            Recorder("a", ["src"], ["x"], journal, **kw.get("a", {})),
            Recorder("b", ["x"], ["y"], journal, **kw.get("b", {})),
            Recorder("c", ["x"], ["z"], journal, **kw.get("c", {})),
            Recorder("d", ["y", "z"], ["out"], journal, **kw.get("d", {})),
        ],
        ["src"],
    )


@pytest.mark.parametrize("n_workers,sequential", [(1, True), (1, False), (3, False), (8, False)])
def test_lifecycle_order_and_dependencies(n_workers, sequential):
    journal = []
    g = diamond(journal)
    stats = run(g, source(25), n_workers, sequential=sequential)
    assert stats.events_processed == 25
    for tid in "abcd":
        stages = [e[1] for e in journal if e[0] == tid]
        assert stages[0] == "configure" and stages[1] == "start" and stages[-1] == "stop"
        assert stages.count("configure") == stages.count("start") == stages.count("stop") == 1
        assert stages.count("begin") == 25
    # no consumer begins an event before its producer ended it
    ends = {(e[0], e[2]): e[3] for e in journal if e[1] == "end"}
    begins = {(e[0], e[2]): e[3] for e in journal if e[1] == "begin"}
    for prod, cons in [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]:
        for ev in range(25):
            assert ends[(prod, ev)] <= begins[(cons, ev)]
    assert stats.max_in_flight <= n_workers


def test_event_level_parallelism():
    journal = []
    g = build_graph([Recorder("slow", ["src"], ["o"], journal, work=0.05)], ["src"])
    t0 = time.perf_counter()
    stats = run(g, source(8), n_workers=8)
    # sleeping releases the GIL: 8 events in flight take about one sleep
    assert time.perf_counter() - t0 < 0.3
    assert stats.max_in_flight == 8


def test_task_level_parallelism():
    """b and c of a single event run concurrently (they meet at a barrier)."""
    barrier = threading.Barrier(2, timeout=5)

    def meet(ctx):
        barrier.wait()
        ctx.put(ctx.task.id + "_out", 1)

    g = build_graph(
        [FuncTask("b", meet, {"src": "v"}, {"b_out": "v"}), FuncTask("c", meet, {"src": "v"}, {"c_out": "v"})],
        ["src"],
    )
    run(g, source(1), n_workers=2)


def test_failure_stops_everything_and_names_task():
    journal = []
    g = diamond(journal, c={"fail_on": 5})
    with pytest.raises(TaskError) as ei:
        run(g, source(50), n_workers=4)
    err = ei.value
    assert err.task_id == "c" and err.event_index == 5 and err.stage == "process"
    assert "boom in c" in str(err)
    stops = [e[0] for e in journal if e[1] == "stop"]
    assert sorted(stops) == ["a", "b", "c", "d"]
    # nothing runs after stop began
    first_stop = next(i for i, e in enumerate(journal) if e[1] == "stop")
    assert all(e[1] == "stop" for e in journal[first_stop:])


def test_start_failure_stops_started_tasks():
    journal = []

    class BadStart(Recorder):
        def start(self, services):
            raise ValueError("no start")

    g = build_graph(
        [Recorder("a", ["src"], ["x"], journal), BadStart("b", ["x"], [], journal)], ["src"]
    )
    with pytest.raises(TaskError) as ei:
        run(g, source(3))
    assert ei.value.stage == "start" and ei.value.task_id == "b"
    assert ("a", "stop") in journal and ("b", "stop") not in journal
    assert not any(e[1] == "begin" for e in journal)


def test_missing_output_detected():
    g = build_graph([FuncTask("lazy", lambda ctx: None, {"src": "v"}, {"o": "v"})], ["src"])
    with pytest.raises(TaskError) as ei:
        run(g, source(2), n_workers=2)
    assert isinstance(ei.value.cause, MissingOutput)


def test_skip_vetoes_downstream_and_aggregation():
    def gate(ctx):
        if ctx.get("src") % 3 == 0:
            ctx.skip()
            return
        ctx.put("x", ctx.get("src"))

    seen = []

    def sink(ctx):
        seen.append(ctx.event_index)
        ctx.fill("h", ctx.get("x"))

    class Sink(FuncTask):
        def configure(self, services):
            services.hbook.book_h1("h", 30, 0, 30)

    for workers in (1, 4):
        seen.clear()
        services = Services()
        g = build_graph([FuncTask("gate", gate, {"src": "v"}, {"x": "v"}), Sink("sink", sink, {"x": "v"})], ["src"])
        stats = run(g, source(30), workers, services=services)
        assert stats.events_skipped == 10 and stats.events_processed == 20
        assert sorted(seen) == [i for i in range(30) if i % 3]
        assert services.hbook.objects["h"].total_entries() == 20


def test_source_errors_propagate():
    def bad():
        yield {"src": 0}
        raise OSError("disk gone")

    g = build_graph([Recorder("a", ["src"], ["x"])], ["src"])
    with pytest.raises(OSError):
        run(g, bad(), n_workers=2)
    with pytest.raises(FrameworkError):
        run(g, iter([{"wrong": 1}]), n_workers=2)


def test_max_events_and_invalid_workers():
    g = build_graph([Recorder("a", ["src"], ["x"])], ["src"])
    assert run(g, source(100), 2, max_events=10).events_processed == 10
    with pytest.raises(ValueError):
        run(g, source(1), 0)


def _agg_pipeline():
    def produce(ctx):
        ctx.put("x", float(ctx.rng.normal()))

    class Sink(FuncTask):
        def configure(self, services):
            services.hbook.book_h1("x", 40, -4, 4)
            services.hbook.book_ntuple("nt", [("ev", "int64"), ("x", "float64")])

    def sink(ctx):
        x = ctx.get("x")
        ctx.fill("x", x, 0.5 + abs(x))
        ctx.append("nt", (ctx.event_index, x))

    return build_graph([FuncTask("gen", produce, {"src": "v"}, {"x": "v"}), Sink("sink", sink, {"x": "v"})], ["src"])


def test_aggregation_identical_across_worker_counts():
    results = []
    for workers, seq in [(1, True), (1, False), (2, False), (7, False)]:
        services = Services()
        run(_agg_pipeline(), source(200), workers, global_seed=9, services=services, sequential=seq)
        results.append(services.hbook.objects)
    for other in results[1:]:
        assert other["x"] == results[0]["x"]
        assert other["nt"].rows == results[0]["nt"].rows
    assert [r[0] for r in results[0]["nt"].rows] == list(range(200))


def test_seed_changes_output():
    a, b = Services(), Services()
    run(_agg_pipeline(), source(50), 2, global_seed=1, services=a)
    run(_agg_pipeline(), source(50), 2, global_seed=2, services=b)
    assert a.hbook.objects["x"] != b.hbook.objects["x"]
