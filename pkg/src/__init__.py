"""Package initialization for pinvtool modules.

The importable packages are ``core`` and ``harness`` (``src`` is on the path).
"""

__version__ = "0.1.0"
