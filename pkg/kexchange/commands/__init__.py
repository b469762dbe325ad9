__all__ = ["app"]

from kexchange.commands.app import app
