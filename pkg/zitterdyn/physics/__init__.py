"""
Physics of the two-charge electron.
Contains the retardation geometry, the self-force and the self-energy.
"""
