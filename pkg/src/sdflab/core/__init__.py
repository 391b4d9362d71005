"""Pure computational core for sdflab.

Nothing in this package touches the filesystem; see ``sdflab.shell`` for I/O.
"""

__all__ = []
