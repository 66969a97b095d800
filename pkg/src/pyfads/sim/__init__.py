"""Parametric fast detector simulation."""

from .calorimeter import calorimeter
from .detector import DetectorConfig, Resolution, Table, TowerGrid
from .isolation import ZeroPt, isolation, isolation_ratio
from .jets import JetDefinition, PseudoJet, cluster, cluster_jets
from .kinematics import Candidate, FourMomentum, charge_of, delta_r, wrap_phi
from .propagate import VertexOutsideDetector, gyroradius, propagate
from .response import apply_efficiency, energy_rescale, smear_momentum
from .tagging import flavor_tag, tau_tag

__all__ = [
    "Candidate", "DetectorConfig", "FourMomentum", "JetDefinition", "PseudoJet", "Resolution",
    "Table", "TowerGrid", "VertexOutsideDetector", "ZeroPt", "apply_efficiency", "calorimeter",
    "charge_of", "cluster", "cluster_jets", "delta_r", "energy_rescale", "flavor_tag", "gyroradius",
    "isolation", "isolation_ratio", "propagate", "smear_momentum", "tau_tag", "wrap_phi",
]
