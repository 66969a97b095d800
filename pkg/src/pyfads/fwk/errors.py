"""Exceptions raised by the framework."""


class FrameworkError(Exception):
    """Base class for framework errors."""


class ConfigError(FrameworkError):
    pass


class GraphError(FrameworkError):
    pass


class CycleError(GraphError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("dependency cycle: " + " -> ".join(self.cycle))


class MissingProducer(GraphError):
    def __init__(self, key, consumer):
        self.key = key
        self.consumer = consumer
        super().__init__(f"no producer for collection {key!r} needed by task {consumer!r}")


class DuplicateProducer(GraphError):
    def __init__(self, key, first, second):
        self.key = key
        self.producers = (first, second)
        super().__init__(f"collection {key!r} produced by both {first!r} and {second!r}")


class TypeMismatch(GraphError):
    def __init__(self, key, produced, consumed, consumer):
        self.key = key
        super().__init__(
            f"collection {key!r} is {produced!r} but task {consumer!r} expects {consumed!r}"
        )


class DuplicateTaskId(GraphError):
    def __init__(self, task_id):
        self.task_id = task_id
        super().__init__(f"duplicate task id {task_id!r}")


class StoreError(FrameworkError):
    pass


class DoubleWrite(StoreError):
    def __init__(self, key, event_index):
        self.key = key
        self.event_index = event_index
        super().__init__(f"collection {key!r} written twice in event {event_index}")


class UndeclaredOutput(StoreError):
    def __init__(self, key, task_id):
        self.key = key
        self.task_id = task_id
        super().__init__(f"task {task_id!r} did not declare output {key!r}")


class UndeclaredInput(StoreError):
    def __init__(self, key, task_id):
        self.key = key
        self.task_id = task_id
        super().__init__(f"task {task_id!r} did not declare input {key!r}")


class MissingOutput(StoreError):
    def __init__(self, key, task_id, event_index):
        self.key = key
        self.task_id = task_id
        super().__init__(f"task {task_id!r} never wrote {key!r} in event {event_index}")


class TaskError(FrameworkError):
    """A task hook raised; wraps the original exception."""

    def __init__(self, task_id, stage, event_index, cause):
        self.task_id = task_id
        self.stage = stage
        self.event_index = event_index
        self.cause = cause
        where = f" (event {event_index})" if event_index is not None else ""
        super().__init__(f"task {task_id!r} failed in {stage}{where}: {cause!r}")
