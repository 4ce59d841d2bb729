"""Legendrian contact homology at desk scale."""

from importlib.resources import files

__version__ = "0.1.0"


def data_path(name: str = ""):
    """Path of a bundled corpus file (or of the corpus directory)."""
    p = files("legdga") / "data"
    return p / name if name else p
