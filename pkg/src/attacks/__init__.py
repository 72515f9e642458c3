from .distribution import distribution_attack
from .fig2 import GuessReport, fig2_attack, oracle_filtered_attack
from .histogram import ObservationHistogram
from .residues import delta_residue, detect_condition
from .table1 import (
    ModulusClass,
    ModulusKind,
    classify_modulus,
    estimate_joint_probability,
    theoretical_probability,
)

__all__ = [
    'distribution_attack',
    'GuessReport',
    'fig2_attack',
    'oracle_filtered_attack',
    'ObservationHistogram',
    'delta_residue',
    'detect_condition',
    'ModulusClass',
    'ModulusKind',
    'classify_modulus',
    'estimate_joint_probability',
    'theoretical_probability',
]
