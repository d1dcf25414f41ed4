# Copyright 2026 The robustlimit Authors
# SPDX-License-Identifier: Apache-2.0
"""Fidelity limits for robust quantum gates."""

import json as _json

from ._robustlimit import (
    PHYSICAL_RANGE_RAD,
    Error,
    __version__,
    average_lower_bound,
    bound_curve,
    fidelity_lower_bound,
    infidelity_bound,
    invert_bound,
    nuclear_fidelity,
    op_norm,
    optimize_hadamard,
    t_omega_for_infidelity,
    worst_case_exact,
    worst_case_lower_bound,
)
from ._robustlimit import run_command as _run_command


def run(command, out_dir, seed=1, threads=1, **args):
    """Run a CLI pipeline in-process; returns (exit_code, summary dict)."""
    code, summary = _run_command(command, _json.dumps(args), str(out_dir), seed, threads)
    return code, _json.loads(summary)


__all__ = [
    "PHYSICAL_RANGE_RAD",
    "Error",
    "__version__",
    "average_lower_bound",
    "bound_curve",
    "fidelity_lower_bound",
    "infidelity_bound",
    "invert_bound",
    "nuclear_fidelity",
    "op_norm",
    "optimize_hadamard",
    "run",
    "t_omega_for_infidelity",
    "worst_case_exact",
    "worst_case_lower_bound",
]
