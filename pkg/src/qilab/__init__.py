"""Simulation and theory laboratory for quantum-information lifetime.

Two circuit engines (stabilizer and dense), closed-form theory curves with
transfer-matrix cross-checks, channel-spectrum analysis, and a harness that
wires them together behind a CLI and a small HTTP service.
"""

from .shapes import SystemShape

__version__ = "0.1.0"

__all__ = ["SystemShape", "__version__"]
