"""Sequential-recombination jet finding on top of the clustering kernel."""

from __future__ import annotations

from dataclasses import dataclass

from .. import kernels
from .kinematics import Candidate, FourMomentum


@dataclass(frozen=True)
class JetDefinition:
    p: float = -1.0
    R: float = 0.4

    def __post_init__(self):
        if not self.R > 0.0:
            raise ValueError("R must be positive")

    @classmethod
    def anti_kt(cls, R):
        return cls(-1.0, R)

    @classmethod
    def kt(cls, R):
        return cls(1.0, R)

    @classmethod
    def cambridge_aachen(cls, R):
        return cls(0.0, R)


@dataclass(frozen=True)
class PseudoJet:
    momentum: FourMomentum
    constituents: tuple[int, ...]
    history_id: int

    @property
    def pt(self):
        return self.momentum.pt


def cluster(momenta, jetdef: JetDefinition, backend=None):
    """All final jets of ``momenta`` (a sequence of FourMomentum), in the
    order the algorithm promoted them. Constituents are input indices in
    ascending order."""
    impl = kernels.get_backend(backend)
    px = [m.px for m in momenta]
    py = [m.py for m in momenta]
    pz = [m.pz for m in momenta]
    e = [m.E for m in momenta]
    raw, labels = impl.cluster(px, py, pz, e, float(jetdef.p), float(jetdef.R))
    members = [[] for _ in raw]
    for k, j in enumerate(labels):
        members[j].append(k)
    return [
        PseudoJet(FourMomentum(a, b, c, d), tuple(members[i]), hid)
        for i, (a, b, c, d, hid) in enumerate(raw)
    ]


def cluster_jets(inputs, jetdef: JetDefinition, pt_min=0.0, backend=None):
    """Cluster candidates (or four-momenta) and keep jets with pt >= pt_min,
    hardest first."""
    moms = [x.momentum if isinstance(x, (Candidate, PseudoJet)) else x for x in inputs]
    jets = [j for j in cluster(moms, jetdef, backend) if j.pt >= pt_min]
    # stable sort keeps promotion order among equal-pt jets
    jets.sort(key=lambda j: -j.pt)
    return jets


def as_candidate(jet: PseudoJet):
    return Candidate(jet.momentum, constituents=jet.constituents)
