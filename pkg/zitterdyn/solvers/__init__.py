"""
Solvers for zitterdyn.
Contains trajectory propagation of the delayed equation of motion and the
root finder for its characteristic equation.
"""
