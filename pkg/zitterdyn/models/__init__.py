"""
Models for zitterdyn.
Contains physical constants, model parameters, unit conversion and kinematic state.
"""
