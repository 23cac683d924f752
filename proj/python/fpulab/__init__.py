"""FPU lattice simulation laboratory."""

try:
    from ._fpulab import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _fpulab import *  # noqa: F401,F403  (in-tree build layout)
