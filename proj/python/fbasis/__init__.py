"""Filter bases in sequence spaces: admissibility verdicts, basis construction
and separation certificates. Structured results come back as plain dicts."""

from ._fbasis import (
    DomainError,
    Error,
    ParseError,
    build_basis,
    check_admissible,
    classify_set,
    cluster_witness,
    convergence_demo,
    dominates,
    enumerate_prefix,
    lemma1_profile,
    member,
    natural_density,
    op_norm,
    parse_filter,
    parse_seq,
    parse_set,
    plank_separator,
    remainder_norm,
    run,
    solve_b_next,
    weight_sum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
