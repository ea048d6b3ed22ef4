"""Steady-state ideals of mass-action reaction networks with intermediate species.

Build the steady-state ideal of a network, remove intermediates to obtain the
core network, lift Groebner bases of the core ideal to the extended network,
and decide binomiality, invariants and the algebraic-independence condition.
"""

__version__ = "0.1.0"
