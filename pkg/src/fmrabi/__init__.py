"""fmrabi: frequency-modulated quantum Rabi model simulator.

Library + CLI covering Hamiltonian construction, spectrum/avoided-crossing
analysis, closed- and open-system dynamics, effective-coupling analytics and
superconducting-circuit parameter extraction for a two- or three-level
artificial atom whose transition frequency is sinusoidally modulated while
coupled to a single bosonic mode.
"""

__version__ = "0.1.0"
