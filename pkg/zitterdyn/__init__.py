"""zitterdyn: two-point-charge electron model lab."""

__version__ = "0.1.0"
