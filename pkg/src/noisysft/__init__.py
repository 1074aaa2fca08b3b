"""Noisy subshifts of finite type: Robinson tilings, noise, measures and
the Turing-machine reductions."""

__version__ = "0.1.0"
