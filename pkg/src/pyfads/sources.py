"""Event sources selectable from a pipeline configuration."""

from __future__ import annotations

from .fwk.errors import ConfigError
from .hepmc import HepMCReader


def hepmc_source(path, key="gen_event"):
    with HepMCReader(path) as reader:
        for ev in reader:
            yield {key: ev}


def synthetic_source(n_events, key="tick"):
    for i in range(n_events):
        yield {key: i}


def make_source(spec, sources, path_override=None):
    """Build the event iterator described by a config ``input`` section.

    ``{"kind": "hepmc", "path": ...}`` reads a HepMC2 file and
    ``{"kind": "synthetic", "n_events": N}`` yields bare indices. A path
    override (the command-line input file) forces a HepMC source.
    """
    spec = dict(spec or {})
    kind = spec.get("kind", "hepmc")
    if len(sources) != 1:
        raise ConfigError(f"exactly one source collection is supported, got {sources}")
    key = sources[0]
    if path_override is not None:
        return hepmc_source(path_override, key)
    if kind == "hepmc":
        if "path" not in spec:
            raise ConfigError("input: no HepMC path configured (use -input)")
        return hepmc_source(spec["path"], key)
    if kind == "synthetic":
        return synthetic_source(int(spec.get("n_events", 100)), key)
    raise ConfigError(f"input: unknown kind {kind!r}")
