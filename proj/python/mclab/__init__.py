"""Low-rank matrix completion, cut norms and graphon tools."""

import json as _json

from ._mclab import (
    avg_frobenius,
    complete_modified,
    complete_plain,
    cut_distance,
    cut_norm_bounds,
    cut_norm_exact,
    discretize_step,
    gen_diagonal_blocks,
    gen_half_rows,
    gen_parity,
    gen_quasirandom,
    nuclear_norm,
    parity_block_perm,
    probe,
    recovery_verdict_step,
    svd,
)


def refinement_sequence(a, j_max):
    """Per-level partition summaries as a list of dicts."""
    from ._mclab import refinement_sequence_json

    return _json.loads(refinement_sequence_json(a, j_max))["levels"]


__all__ = [
    "avg_frobenius",
    "complete_modified",
    "complete_plain",
    "cut_distance",
    "cut_norm_bounds",
    "cut_norm_exact",
    "discretize_step",
    "gen_diagonal_blocks",
    "gen_half_rows",
    "gen_parity",
    "gen_quasirandom",
    "nuclear_norm",
    "parity_block_perm",
    "probe",
    "recovery_verdict_step",
    "refinement_sequence",
    "svd",
]
