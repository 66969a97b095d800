"""Task-graph event-processing framework."""

from .config import PipelineConfig, build_tasks, load_config, parse_config, register
from .errors import (
    ConfigError,
    CycleError,
    DoubleWrite,
    DuplicateProducer,
    DuplicateTaskId,
    FrameworkError,
    MissingOutput,
    MissingProducer,
    TaskError,
    TypeMismatch,
    UndeclaredInput,
    UndeclaredOutput,
)
from .graph import DataflowGraph, build_graph, topo_schedule
from .log import LogService
from .runner import RunStats, run
from .seeding import make_rng, task_event_seed
from .services import HBookService, Services
from .store import EventContext, EventStore
from .task import FuncTask, PortDecl, Task

__all__ = [
    "ConfigError",
    "CycleError",
    "DataflowGraph",
    "DoubleWrite",
    "DuplicateProducer",
    "DuplicateTaskId",
    "EventContext",
    "EventStore",
    "FrameworkError",
    "FuncTask",
    "HBookService",
    "LogService",
    "MissingOutput",
    "MissingProducer",
    "PipelineConfig",
    "PortDecl",
    "RunStats",
    "Services",
    "Task",
    "TaskError",
    "TypeMismatch",
    "UndeclaredInput",
    "UndeclaredOutput",
    "build_graph",
    "build_tasks",
    "load_config",
    "make_rng",
    "parse_config",
    "register",
    "run",
    "topo_schedule",
    "task_event_seed",
]
