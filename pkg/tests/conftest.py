import io
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from squareup import DEFAULT_TOL, boeing_lateral
from squareup.cli import main

# Coordinate change used in the published worked example: states (2, 3, 4)
# first, then the negated first state as the complement of range(B).
PAPER_BASIS = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

# Transmission zero of the transcribed fixture, frozen from two independent
# routes: the sigma_min sweep oracle and the hand-evaluated block formula
# eig(A22 - A21 C11^+ C12) on the pinned basis. The published rounded value
# is -0.0511.
BOEING_ZERO = -0.0508261313


@pytest.fixture
def tol():
    return DEFAULT_TOL


@pytest.fixture
def boeing():
    return boeing_lateral()


def run_cli(*argv):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()
