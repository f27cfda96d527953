#!/usr/bin/env python3
"""
Runner script for zitterdyn.
This is a convenience wrapper to run the command line from the root directory.
"""

import importlib.util
import sys


def check_installation():
    """Check if required packages are installed."""
    required_packages = [
        "numpy",
        "scipy",
        "PIL",
    ]

    missing = [package for package in required_packages if importlib.util.find_spec(package) is None]

    if missing:
        print("Missing required packages:", ", ".join(missing))
        print("Please install them with: pip install -r requirements.txt")
        return False

    return True


def main():
    """Main entry point with error handling."""
    # Check if required packages are installed
    if not check_installation():
        return 1

    from zitterdyn.main import cli_main
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
