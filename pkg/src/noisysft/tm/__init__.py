"""Turing machines, the Toeplitz channel and the simulation compiler."""

from .compiler import (CompiledTileset, ScaleBehaviour, SimulationMacroTile, build_simulation_macrotile,
                       compile_tm, horizon, projection, verify_scale_behaviour)
from .machine import (TuringMachine, bounded_trace, dumps_machine, loads_machine, sample_machines,
                      simulate_tm)
from .toeplitz import readonly_tape_view, toeplitz_prefix, wrapper_machine

__all__ = ["CompiledTileset", "ScaleBehaviour", "SimulationMacroTile", "TuringMachine",
           "bounded_trace", "build_simulation_macrotile", "compile_tm", "dumps_machine", "horizon",
           "loads_machine", "projection", "readonly_tape_view", "sample_machines", "simulate_tm",
           "toeplitz_prefix", "verify_scale_behaviour", "wrapper_machine"]
