"""Runtime switches.

Debug mode turns on redundant cross-checks (dual-route clique vectors,
incremental-cache verification in the sampler, member-choice independence of
remainder dagoids).  It is read at call time, so it can be flipped by tests.
"""
import os

DEBUG = os.environ.get("GRAPHLAWS_DEBUG", "") not in ("", "0")

# Largest vertex count a VertexSet may address (one machine word).
MAX_VERTICES = 64
# Exhaustive enumeration of decomposable graphs.
MAX_ENUMERATE = 7
# Dense transforms over the 2^n subset lattice.
MAX_DENSE = 16


def set_debug(flag: bool) -> None:
    global DEBUG
    DEBUG = bool(flag)
