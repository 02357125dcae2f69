"""Exact enumeration, singularity analysis and uniform random generation
for restricted classes of closed lambda-terms and Motzkin trees."""

from .counting import (
    CountTable,
    count_family,
    count_lambda_all,
    export_csv,
    load_table,
    pq_polynomial,
    save_table,
)
from .radicals import (
    RadicalChain,
    SingularityReport,
    asym_constant,
    asym_estimate,
    classify,
    eval_chain,
    find_rho,
    limit_diagnostics,
    local_expansion,
    rho_approx,
    sequence,
)
from .sampling import (
    SamplerSpec,
    aggregate_profiles,
    boltzmann_probabilities,
    sample_boltzmann,
    sample_recursive,
    unary_height_histogram,
)
from .terms import Binary, Family, Leaf, Term, TermStats, Unary, parse, render, stats, validate

__version__ = "0.1.0"

__all__ = [
    "Binary",
    "CountTable",
    "Family",
    "Leaf",
    "RadicalChain",
    "SamplerSpec",
    "SingularityReport",
    "Term",
    "TermStats",
    "Unary",
    "aggregate_profiles",
    "asym_constant",
    "asym_estimate",
    "boltzmann_probabilities",
    "classify",
    "count_family",
    "count_lambda_all",
    "eval_chain",
    "export_csv",
    "find_rho",
    "limit_diagnostics",
    "load_table",
    "local_expansion",
    "parse",
    "pq_polynomial",
    "render",
    "rho_approx",
    "sample_boltzmann",
    "sample_recursive",
    "save_table",
    "sequence",
    "stats",
    "validate",
]
