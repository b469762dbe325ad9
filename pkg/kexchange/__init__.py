__all__ = ["Instance", "run", "version", "__version__"]

from kexchange.instance import Instance
from kexchange.search import run
from kexchange.version import version, __version__
