"""Simulation of coherent interaction-free detection on a three-level transmon.

The package is organised around the stages of the detection protocol:

- :mod:`ifdsim.su3` - exact qutrit operator algebra (beam splitters, probe
  pulses, subspace rotations) and the state containers.
- :mod:`ifdsim.pulses` - super-Gaussian drive envelopes and amplitude
  calibration.
- :mod:`ifdsim.dynamics` - time-dependent Hamiltonians, Schroedinger and
  Lindblad propagation, thermal states and the depolarizing channel.
- :mod:`ifdsim.protocol` - the coherent detection protocol, the projective
  quantum-Zeno baseline, amplitude recursions and coefficient expansions.
- :mod:`ifdsim.quantized` - fully quantum treatment of the probe field
  (Fock states, two modes, two-level probe).
- :mod:`ifdsim.majorana` - stellar representation of qutrit states.
- :mod:`ifdsim.metrics` - figures of merit and shot statistics.
- :mod:`ifdsim.scenarios` / :mod:`ifdsim.cli` - reproducible experiment
  runner with CSV/JSON emission.
"""

__version__ = "0.1.0"


class IfdSimError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(IfdSimError):
    """Invalid experiment configuration (unknown key, bad value, missing field)."""


class NumericToleranceError(IfdSimError):
    """A numerical guarantee (unitarity, trace preservation) was violated."""


class UndefinedRatioError(IfdSimError):
    """A ratio of probabilities was requested with a zero denominator."""
