"""
Views for zitterdyn.
Contains the domain-coloring renderer and the CSV / JSON writers.
"""
