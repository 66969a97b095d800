"""Turn a pipeline configuration into a graph, a source and a run."""

from __future__ import annotations

from .fwk import HBookService, LogService, Services, build_graph, build_tasks, run
from .sim import tasks as _sim_tasks  # noqa: F401 - registers the simulation task kinds
from .sources import make_source


def build(cfg):
    return build_graph(build_tasks(cfg), list(cfg.sources))


def run_config(cfg, *, input_path=None, n_events=0, n_workers=1, output=None, seed=None,
               log_level="info", sequential=False, log_stream=None):
    """Run ``cfg`` end to end. Returns ``(RunStats, services)``."""
    graph = build(cfg)
    source = make_source(cfg.input, cfg.sources, input_path)
    log = LogService(log_level, stream=log_stream)
    services = Services(HBookService(output), log)
    try:
        stats = run(
            graph, source, n_workers,
            cfg.global_seed if seed is None else seed,
            services=services, sequential=sequential, max_events=n_events or None,
        )
    finally:
        log.close()
    return stats, services
