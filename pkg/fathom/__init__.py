import importlib_metadata

try:
    __version__ = importlib_metadata.version('fathom')
except importlib_metadata.PackageNotFoundError:
    __version__ = '0.1.0'

from .fatgraph import AbstractGraph, Fatgraph, FatgraphError, CapExceeded, from_document  # noqa
from .laurent import LaurentPoly  # noqa
from .homology import HomologyGroup, HomologyTable, homology_of  # noqa
