"""Named example plants."""

import numpy as np

from .statespace import StateSpace

__all__ = ["boeing_lateral"]


def boeing_lateral() -> StateSpace:
    """Boeing 747-100 lateral dynamics, transposed into a fat plant.

    Four states, three inputs, two outputs; minimal, with a single
    stable transmission zero near -0.051. The classic case where plain
    zero placement stalls: the pseudo-pair it produces is uncontrollable
    exactly at that zero.
    """
    A = np.array(
        [
            [-0.0605, -0.0015, 0.0011, 0.0],
            [0.0, -0.4603, -0.0208, -1.0],
            [-871.0, 0.28, -0.141, 0.0],
            [-32.3, 0.0, 0.0, 0.0],
        ]
    )
    B = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    C = np.array(
        [
            [0.0, -0.1860, 0.0061, 0.0],
            [4.0380, 0.1, -0.4419, 0.0],
        ]
    )
    return StateSpace(A, B, C)
