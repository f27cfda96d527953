"""
Controllers for zitterdyn.
Contains the run controller behind the CLI subcommands and the invariant suite.
"""
