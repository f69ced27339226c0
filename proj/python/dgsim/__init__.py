"""Displaced fermionic Gaussian states: covariance simulator and dense checks."""

import json

from . import _dgsim
from ._dgsim import (
    Error,
    dense,
    displaced_state_test,
    displaced_unitary_test,
    embed,
    embed_dense,
    evolve,
    expectation,
    extended_covariance,
    from_diagonal,
    gaussian_state_test,
    gaussian_unitary_test,
    pfaffian,
    rotation,
    sample,
    sequence_rotation,
    wick_moment,
)

__version__ = "0.1.0"


def run(circuit):
    """Simulate a dgsim.circuit/1 document given as a dict or JSON text."""
    text = circuit if isinstance(circuit, str) else json.dumps(circuit)
    return json.loads(_dgsim._run(text))


def compile(rotation):
    """Gate sequence (dgsim.gates/1 dict) realizing an SO(2n+1) rotation."""
    return json.loads(_dgsim._compile(rotation))

