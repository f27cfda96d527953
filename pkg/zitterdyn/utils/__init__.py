"""
Utilities for zitterdyn.
Contains the exception hierarchy, run configuration and the worker pool helper.
"""
