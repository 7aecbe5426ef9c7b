"""Kinetic-theory toolkit for a tracer particle in an ideal gas."""

try:
    from ._qlb import *  # noqa: F401,F403  (installed layout)
except ImportError:  # in-tree build: extension sits next to the package on sys.path
    from _qlb import *  # noqa: F401,F403
