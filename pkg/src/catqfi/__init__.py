"""catqfi: phase-estimation precision of multi-component cat-state probes.

Subpackages cover the truncated-Fock oracle (``fock``), closed-form cat
quantities (``cats``), two-arm probes (``probes``), photon-loss models
(``loss``), Fisher-information engines (``qfi``), reference probes
(``baselines``), energy-constrained sweeps (``sweep``), the generation
protocol (``genscheme``), and the batch CLI (``cli``).
"""

__version__ = "0.1.0"
