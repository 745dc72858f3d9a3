"""Exact single-qubit spin-bath decoherence and Loschmidt echo toolkit."""

from ._spinbath import *  # noqa: F401,F403
