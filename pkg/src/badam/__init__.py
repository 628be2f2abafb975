"""badam: baseline detection, rectification and evaluation for handwritten
manuscript pages."""

from badam._backend import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
