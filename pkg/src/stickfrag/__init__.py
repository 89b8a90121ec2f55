"""Benford analysis of the fixed multi-proportion stick fragmentation model.

A stick of length 1 is cut at fixed proportions p1..pm at every stage; after
N stages the m^N leaf lengths are p1^k1 * ... * pm^km over the weak
compositions k of N.  The package classifies a model as Benford-convergent
or not from the rationality of the exponents log_base(p_i/p_{i+1}), computes
the exact weighted distribution of log-length residues mod 1, quantifies
equidistribution (Kolmogorov-Smirnov, star discrepancy, leading-digit
frequencies), and validates everything against brute-force and
integer-arithmetic oracles plus seeded Monte Carlo sampling.
"""

__version__ = "0.1.0"

from .benford import (
    BenfordReport,
    benford_expected,
    benford_report,
    cdf_mod1,
    chi2_vs_benford,
    empirical_verdict,
    ks_distance,
    ks_to_uniform,
    leading_digit_histogram,
    significand,
    star_discrepancy,
)
from .enumeration import (
    MEASURE_LENGTH,
    MEASURE_UNIFORM,
    Composition,
    WeightedMod1Distribution,
    atom_for,
    composition_count,
    compositions,
    distribution_from_residues,
    exact_distribution,
    log_multinomial,
    rotate_distribution,
    write_distribution_csv,
)
from .errors import ConfigError, ResourceLimitError
from .model import (
    BENFORD,
    NON_BENFORD,
    ExponentClassification,
    ExponentSpec,
    ExponentVerdict,
    ProportionVector,
    classify_rationality,
    exponents_from_proportions,
    load_config,
    make_model,
    parse_config,
    predict_benford,
    proportions_from_exponents,
)
from .montecarlo import (
    FixedProportions,
    RandomProportions,
    SamplerConfig,
    sample_leaf_residues,
)
from .oracle import (
    CrossCheckReport,
    ExactResidueSet,
    LeafList,
    brute_force_leaves,
    cross_check,
    distribution_from_leaves,
    exact_residue_distribution,
    exact_residues_rational,
)

__all__ = [name for name in dir() if not name.startswith("_")]
