from typing import NamedTuple


class Version(NamedTuple):
    major: int
    minor: int
    build: int

    def __str__(self):
        return f"{self.major}.{self.minor}.{self.build}"


version = Version(0, 1, 0)
__version__ = str(version)
