"""Quadratic inf/sup envelope operators on sampled grids."""

try:
    from ._core import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _core import *  # noqa: F401,F403  (in-tree build: _core on PYTHONPATH)
