try:
    from importlib.metadata import metadata, version  # type: ignore
except ModuleNotFoundError:
    from importlib_metadata import metadata, version  # type: ignore

__version__ = version('delaunaylab')
__doc__ = metadata('delaunaylab')['Summary']
__author__ = metadata('delaunaylab')['Author']

from .lab import *
