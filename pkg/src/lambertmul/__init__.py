"""Star-product multiplier algebra on finite measure spaces.

A small numpy library for the multiplier algebra generated by the bilinear
product ``star(u, v) = u E(v) + v E(u) - E(u) E(v)`` over a finite atomic
measure space, where ``E`` is the conditional expectation of a partition.
Includes the rescaled Banach-algebra multiplication and its norms, the
star-multiplication operators as explicit matrices, and a randomized
property verifier with counterexample reporting.
"""

from .measure import (
    INF,
    MeasureSpace,
    Partition,
    as_function,
    check_exponent,
    coarse_partition,
    ess_sup,
    fine_partition,
    indicator,
    lp_norm,
    make_partition,
    make_space,
    pos_neg_parts,
)
from .expectation import (
    CondExpectation,
    always_defined,
    cond_exp,
    exceptional_set,
    is_conditionable,
    is_measurable_wrt,
)
from .algebra import (
    ALGEBRA_IDENTITY,
    MultiplierContext,
    NormEstimate,
    algebra_mul,
    conditional_power_mean,
    induced_norm,
    involution,
    multiplier_norm,
    split_decomposition,
    star,
)
from .operators import (
    LambertOperatorMatrix,
    MultOperatorReport,
    NotInvertibleError,
    OperatorNormResult,
    apply_multiplier,
    compose,
    invert_operator,
    is_injective,
    mult_operator,
    operator_matrix,
    operator_norm,
)
from .instances import (
    GeneratorConfig,
    Instance,
    InstanceFormatError,
    random_instance,
    read_instance,
    write_instance,
)
from .properties import (
    ALL_PROPERTY_IDS,
    REGISTRY,
    PropertyDef,
    UnknownPropertyError,
    get_property,
)
from .suite import (
    DEFAULT_SEED,
    PropertyReport,
    SuiteConfig,
    SuiteReport,
    adversarial_submult_instances,
    replay,
    run_suite,
    singular_symbol_instances,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "MeasureSpace",
    "Partition",
    "as_function",
    "check_exponent",
    "coarse_partition",
    "ess_sup",
    "fine_partition",
    "indicator",
    "lp_norm",
    "make_partition",
    "make_space",
    "pos_neg_parts",
    "CondExpectation",
    "always_defined",
    "cond_exp",
    "exceptional_set",
    "is_conditionable",
    "is_measurable_wrt",
    "ALGEBRA_IDENTITY",
    "MultiplierContext",
    "NormEstimate",
    "algebra_mul",
    "conditional_power_mean",
    "induced_norm",
    "involution",
    "multiplier_norm",
    "split_decomposition",
    "star",
    "LambertOperatorMatrix",
    "MultOperatorReport",
    "NotInvertibleError",
    "OperatorNormResult",
    "apply_multiplier",
    "compose",
    "invert_operator",
    "is_injective",
    "mult_operator",
    "operator_matrix",
    "operator_norm",
    "GeneratorConfig",
    "Instance",
    "InstanceFormatError",
    "random_instance",
    "read_instance",
    "write_instance",
    "ALL_PROPERTY_IDS",
    "REGISTRY",
    "PropertyDef",
    "UnknownPropertyError",
    "get_property",
    "DEFAULT_SEED",
    "PropertyReport",
    "SuiteConfig",
    "SuiteReport",
    "adversarial_submult_instances",
    "replay",
    "run_suite",
    "singular_symbol_instances",
    "verify",
    "__version__",
]
