"""Event loop with event-level and task-level parallelism.

Up to ``n_workers`` events are in flight; each (task, event) pair is a unit of
work dispatched to a thread pool as soon as all of the task's inputs for that
event exist. A single scheduler thread owns all bookkeeping, pulls events from
the source, and commits finished events in input order.
"""

from __future__ import annotations

import itertools
import queue
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import FrameworkError, MissingOutput, TaskError
from .graph import DataflowGraph, topo_schedule
from .services import Services
from .store import EventContext, EventStore


@dataclass
class RunStats:
    events_processed: int = 0
    events_skipped: int = 0
    wall_time: float = 0.0
    per_task_time: dict[str, float] = field(default_factory=dict)
    max_in_flight: int = 0
    n_workers: int = 1

    @property
    def events_per_second(self):
        return self.events_processed / self.wall_time if self.wall_time > 0 else 0.0


class _Plan:
    """Per-graph tables computed once per run."""

    def __init__(self, graph: DataflowGraph):
        self.graph = graph
        self.levels = topo_schedule(graph)
        self.order = [t for lvl in self.levels for t in lvl]
        self.rank = {t: i for i, t in enumerate(self.order)}
        preds = {t: set() for t in graph.tasks}
        succs = {t: set() for t in graph.tasks}
        for p, c, _ in graph.edges:
            preds[c].add(p)
            succs[p].add(c)
        self.n_preds = {t: len(v) for t, v in preds.items()}
        self.succs = {t: sorted(v) for t, v in succs.items()}
        self.roots = [t for t in self.order if not preds[t]]


class _Event:
    __slots__ = ("index", "store", "waiting", "active", "unfinished", "skipped", "ops")

    def __init__(self, index, plan):
        self.index = index
        self.store = EventStore(index)
        self.waiting = dict(plan.n_preds)
        self.active = 0
        self.unfinished = len(plan.order)
        self.skipped = False
        self.ops = {}

    @property
    def finished(self):
        return self.active == 0 and (self.unfinished == 0 or self.skipped)


def _load_source(ev, item, graph):
    if not isinstance(item, dict):
        raise FrameworkError(f"event {ev.index}: source must yield dicts, got {type(item).__name__}")
    missing = set(graph.sources) - item.keys()
    if missing:
        raise FrameworkError(f"event {ev.index}: source did not provide {sorted(missing)}")
    for key in graph.sources:
        ev.store.put(key, item[key])


def _invoke(task, ctx):
    t0 = time.perf_counter()
    try:
        task.process(ctx)
        exc = None
        if not ctx.skipped:
            for key in task.output_keys:
                if key not in ctx.store:
                    exc = MissingOutput(key, task.id, ctx.event_index)
                    break
    except Exception as e:  # noqa: BLE001 - reported to the scheduler
        exc = e
    return exc, time.perf_counter() - t0


def run(
    graph: DataflowGraph,
    source,
    n_workers=1,
    global_seed=0,
    *,
    services: Services | None = None,
    sequential=False,
    max_events=None,
) -> RunStats:
    """Process every event of ``source`` through ``graph``.

    ``source`` yields one dict per event mapping each source collection key to
    its value. ``sequential=True`` runs the plain single-context event loop.
    Aggregation results and persisted output are identical for any
    ``n_workers`` at a fixed ``global_seed``.
    """
    if n_workers < 1:
        raise ValueError("n_workers must be >= 1")
    services = services or Services(global_seed=global_seed)
    services.global_seed = global_seed
    plan = _Plan(graph)
    tasks = graph.tasks
    stats = RunStats(per_task_time=dict.fromkeys(plan.order, 0.0), n_workers=n_workers)
    if max_events:
        source = itertools.islice(source, max_events)

    for tid in plan.order:
        try:
            tasks[tid].configure(services)
        except Exception as exc:
            raise TaskError(tid, "configure", None, exc) from exc

    started = []
    failure = None
    t0 = time.perf_counter()
    try:
        for tid in plan.order:
            try:
                tasks[tid].start(services)
            except Exception as exc:
                raise TaskError(tid, "start", None, exc) from exc
            started.append(tid)
        if sequential:
            _loop_sequential(plan, source, services, global_seed, stats)
        else:
            _loop_concurrent(plan, source, services, global_seed, stats, n_workers)
    except BaseException as exc:
        failure = exc
    finally:
        for tid in reversed(started):
            try:
                tasks[tid].stop(services)
            except Exception as exc:
                if failure is None:
                    failure = TaskError(tid, "stop", None, exc)
        stats.wall_time = time.perf_counter() - t0
    if failure is not None:
        raise failure
    services.hbook.write()
    return stats


def _make_ctx(ev, task, services, global_seed):
    return EventContext(ev.store, task, global_seed, services.log, services.hbook)


def _commit(ev, plan, services, stats):
    if ev.skipped:
        stats.events_skipped += 1
        return
    ops = []
    for tid in plan.order:
        ops.extend(ev.ops.get(tid, ()))
    services.hbook.commit(ev.index, ops)
    stats.events_processed += 1


def _loop_sequential(plan, source, services, global_seed, stats):
    tasks = plan.graph.tasks
    for index, item in enumerate(source):
        ev = _Event(index, plan)
        stats.max_in_flight = 1
        _load_source(ev, item, plan.graph)
        for tid in plan.order:
            ctx = _make_ctx(ev, tasks[tid], services, global_seed)
            exc, dt = _invoke(tasks[tid], ctx)
            stats.per_task_time[tid] += dt
            if exc is not None:
                raise TaskError(tid, "process", index, exc) from exc
            ev.ops[tid] = ctx._ops
            if ctx.skipped:
                ev.skipped = True
                break
        _commit(ev, plan, services, stats)


def _loop_concurrent(plan, source, services, global_seed, stats, n_workers):
    tasks = plan.graph.tasks
    done: queue.SimpleQueue = queue.SimpleQueue()
    in_flight: dict[int, _Event] = {}
    finished: dict[int, _Event] = {}
    next_commit = 0
    next_index = 0
    running = 0
    exhausted = False
    failure = None
    src = iter(source)

    def work(ev, tid, ctx):
        exc, dt = _invoke(tasks[tid], ctx)
        done.put((ev, tid, ctx, exc, dt))

    with ThreadPoolExecutor(max_workers=n_workers, thread_name_prefix="fwk") as pool:

        def dispatch(ev, tid):
            nonlocal running
            ev.active += 1
            running += 1
            pool.submit(work, ev, tid, _make_ctx(ev, tasks[tid], services, global_seed))

        def settle(ev):
            nonlocal next_commit
            if not ev.finished:
                return
            finished[ev.index] = ev
            while next_commit in finished:
                done_ev = finished.pop(next_commit)
                _commit(done_ev, plan, services, stats)
                del in_flight[next_commit]
                next_commit += 1

        while True:
            while failure is None and not exhausted and len(in_flight) < n_workers:
                try:
                    item = next(src)
                except StopIteration:
                    exhausted = True
                    break
                except Exception as exc:
                    failure = exc
                    break
                ev = _Event(next_index, plan)
                next_index += 1
                in_flight[ev.index] = ev
                stats.max_in_flight = max(stats.max_in_flight, len(in_flight))
                try:
                    _load_source(ev, item, plan.graph)
                except Exception as exc:
                    failure = exc
                    break
                for tid in plan.roots:
                    dispatch(ev, tid)
                settle(ev)

            if running == 0:
                if failure is not None or (exhausted and not in_flight):
                    break
                if exhausted:
                    raise FrameworkError("scheduler stalled with events in flight")
                continue

            ev, tid, ctx, exc, dt = done.get()
            running -= 1
            ev.active -= 1
            ev.unfinished -= 1
            stats.per_task_time[tid] += dt
            if exc is not None:
                if failure is None:
                    failure = TaskError(tid, "process", ev.index, exc)
                continue
            ev.ops[tid] = ctx._ops
            if ctx.skipped:
                ev.skipped = True
            if failure is None and not ev.skipped:
                for succ in plan.succs[tid]:
                    ev.waiting[succ] -= 1
                    if ev.waiting[succ] == 0:
                        dispatch(ev, succ)
            settle(ev)

    if failure is not None:
        raise failure
