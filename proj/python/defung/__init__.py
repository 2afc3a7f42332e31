"""Step-indexed partial function workbench.

Parses def::ung / def::total programs, synthesizes their step-indexed
artifacts, and exposes evaluation, domain queries and the property checks.
"""

try:
    from ._defung_core import *  # noqa: F401,F403  (installed package layout)
    from ._defung_core import Workspace, DEFAULT_BIG  # noqa: F401
except ImportError:  # build-tree layout: module next to the build dir
    from _defung_core import *  # noqa: F401,F403
    from _defung_core import Workspace, DEFAULT_BIG  # noqa: F401

__all__ = ["Workspace", "DEFAULT_BIG", "load", "load_file"]


def load(text):
    """Parse program text and return a transformed workspace."""
    return Workspace(text)


def load_file(path):
    """Parse the program file at ``path`` and return a workspace."""
    return Workspace.from_file(str(path))
