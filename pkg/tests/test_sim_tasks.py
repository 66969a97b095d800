import copy
import json

import pytest

from conftest import ROOT
from pyfads import rio
from pyfads.fwk import ConfigError, parse_config
from pyfads.fwk.graph import topo_schedule
from pyfads.pipeline import build, run_config

EXAMPLE = json.loads((ROOT / "configs" / "fads_example.json").read_text())


def example(**overrides):
    doc = copy.deepcopy(EXAMPLE)
    doc.update(overrides)
    return parse_config(doc)


def test_example_graph_builds():
    levels = topo_schedule(build(example()))
    level = {tid: k for k, ids in enumerate(levels) for tid in ids}
    assert level["truth"] < level["propagator"] < level["calo"] < level["jet_finder"] < level["jet_scale"]
    assert level["btag"] < level["tautag"] < level["analysis"]


def test_example_runs_and_is_deterministic(toy_hepmc, tmp_path):
    digests = set()
    for n in (1, 3):
        out = tmp_path / f"o{n}.rio"
        stats, services = run_config(example(), input_path=toy_hepmc, n_workers=n, output=out)
        services.hbook.write()
        assert stats.events_processed == 100
        digests.add(out.read_bytes())
    assert len(digests) == 1
    objs = rio.load(out)
    assert objs["n_jets"].total_entries() == 100
    assert objs["jet_pt"].total_entries() > 0
    assert len(objs["events"]) == 100
    assert "mu_jet_pt" in objs and "gamma_n_jets" in objs


def test_seed_changes_output(toy_hepmc, tmp_path):
    a, b = tmp_path / "a.rio", tmp_path / "b.rio"
    for seed, out in ((1, a), (2, b)):
        _, s = run_config(example(), input_path=toy_hepmc, output=out, seed=seed)
        s.hbook.write()
    assert a.read_bytes() != b.read_bytes()


def test_sequential_matches_concurrent(toy_hepmc, tmp_path):
    a, b = tmp_path / "a.rio", tmp_path / "b.rio"
    _, s = run_config(example(), input_path=toy_hepmc, output=a, n_workers=2)
    s.hbook.write()
    _, s = run_config(example(), input_path=toy_hepmc, output=b, sequential=True)
    s.hbook.write()
    assert a.read_bytes() == b.read_bytes()


def test_min_jets_skips(toy_hepmc):
    doc = copy.deepcopy(EXAMPLE)
    for t in doc["tasks"]:
        if t["id"] == "analysis":
            t["params"] = {"min_jets": 99}
    stats, services = run_config(parse_config(doc), input_path=toy_hepmc)
    assert stats.events_skipped == 100
    assert services.hbook.objects["n_jets"].total_entries() == 0


@pytest.mark.parametrize("mutate, needle", [
    (lambda d: d["tasks"][0].update(kind="nope"), "unknown kind"),
    (lambda d: d["tasks"][3]["params"].update(bogus=1), "bogus"),
    (lambda d: d["tasks"][3]["params"].update(efficiency="missing_table"), "missing_table"),
    (lambda d: d["tasks"][1].update(outputs={}), "propagator"),
])
def test_bad_task_configs(mutate, needle):
    doc = copy.deepcopy(EXAMPLE)
    mutate(doc)
    with pytest.raises(ConfigError, match=needle):
        build(parse_config(doc))


def test_busy_loop_counter():
    doc = json.loads((ROOT / "configs" / "busy_loop.json").read_text())
    doc["tasks"][0]["params"]["n_iter"] = 1000
    doc["input"]["n_events"] = 20
    stats, services = run_config(parse_config(doc), n_workers=2)
    h = services.hbook.objects["spin_value"]
    assert stats.events_processed == 20 and h.total_entries() == 20
    stats2, services2 = run_config(parse_config(doc), n_workers=1)
    assert rio.dumps(services2.hbook.objects) == rio.dumps(services.hbook.objects)
