"""Linear-optics permanent estimation toolkit for graph problems."""

from photonperm.numkernel import HAVE_NATIVE_KERNEL

__all__ = ["HAVE_NATIVE_KERNEL"]
__version__ = "0.1.0"
