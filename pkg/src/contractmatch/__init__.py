"""Many-to-many matching with contracts under revealed preferences.

The package turns one idea into runnable machinery: when every agent's
choice behaviour satisfies three consistency axioms (contraction,
rejection consistency, substitutability), two-sided agreement problems
gain a complete theory — an offer/rejection iteration that terminates at
an extreme stable agreement, a lattice structure over all stable
agreements, and, once prices enter, a law restricting how many distinct
prices a stable agreement can carry.

Layers:

- :mod:`contractmatch.choice` — choice-function representations
- :mod:`contractmatch.coherence` — axiom checkers with counterexamples
- :mod:`contractmatch.preference` — revealed comparisons and closure
- :mod:`contractmatch.aggregation` — gluing per-agent choices into sides
- :mod:`contractmatch.engine` — the iteration, stability, meet/join
- :mod:`contractmatch.oracle` — independent brute-force enumeration
- :mod:`contractmatch.market` — priced contracts and the two-price law
- :mod:`contractmatch.instancefile` — the JSON file format
- :mod:`contractmatch.cli` — the ``contractmatch`` command
"""

from .aggregation import (
    AggregateChoice,
    AggregatePart,
    aggregate_side,
    build_marriage_instance,
)
from .choice import (
    ChoiceFunction,
    Identity,
    PerturbationScheme,
    ResponsiveQuota,
    TableChoice,
    TopOfOrder,
    UnionOfOrders,
    ValuationArgmax,
    convolve_valuations,
    tabulate,
    union_of_orders_choice,
    valuation_choice,
)
from .coherence import (
    AXIOM_CONTRACTION,
    AXIOM_IRC,
    AXIOM_PATH,
    AXIOM_SUBSTITUTES,
    CoherenceReport,
    ViolationReport,
    check_coherent,
    check_contraction,
    check_irc,
    check_path_independence,
    check_substitutes,
)
from .engine import (
    MODE_FULL,
    MODE_SINGLETON,
    AgreementVerdict,
    ContractLabel,
    Instance,
    SolveResult,
    StabilityVerdict,
    StableAgreementVerdict,
    Trace,
    auto_names,
    is_agreement,
    is_stable_agreement,
    is_stable_set,
    join,
    meet,
    run,
)
from .errors import (
    DomainError,
    ParseError,
    PreconditionError,
    SizeBoundError,
    SpecError,
)
from .instancefile import LoadedFile, load, parse_document, save, to_document
from .market import (
    LinearProducerChoice,
    MarketContract,
    MoneyEconomy,
    MoneyMonotoneReport,
    NoShortageReport,
    TwoPriceReport,
    UnitDemandConsumerChoice,
    build_linear_producer,
    build_money_economy,
    build_unit_demand_consumer,
    check_money_monotone,
    check_no_shortage,
    check_two_prices,
)
from .oracle import (
    StableSetCatalog,
    brute_glb,
    brute_lub,
    classical_gale_shapley,
    enumerate_stable_agreements,
)
from .preference import (
    COHERENCE_ASSERTED,
    COHERENCE_CHECKED,
    COHERENCE_UNKNOWN,
    PreferenceVerdict,
    closure,
    indifferent,
    prefers,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateChoice",
    "AggregatePart",
    "AgreementVerdict",
    "AXIOM_CONTRACTION",
    "AXIOM_IRC",
    "AXIOM_PATH",
    "AXIOM_SUBSTITUTES",
    "COHERENCE_ASSERTED",
    "COHERENCE_CHECKED",
    "COHERENCE_UNKNOWN",
    "ChoiceFunction",
    "CoherenceReport",
    "ContractLabel",
    "DomainError",
    "Identity",
    "Instance",
    "LinearProducerChoice",
    "LoadedFile",
    "MarketContract",
    "MODE_FULL",
    "MODE_SINGLETON",
    "MoneyEconomy",
    "MoneyMonotoneReport",
    "NoShortageReport",
    "ParseError",
    "PerturbationScheme",
    "PreconditionError",
    "PreferenceVerdict",
    "ResponsiveQuota",
    "SizeBoundError",
    "SolveResult",
    "SpecError",
    "StabilityVerdict",
    "StableAgreementVerdict",
    "StableSetCatalog",
    "TableChoice",
    "TopOfOrder",
    "Trace",
    "TwoPriceReport",
    "UnionOfOrders",
    "UnitDemandConsumerChoice",
    "ValuationArgmax",
    "ViolationReport",
    "aggregate_side",
    "auto_names",
    "brute_glb",
    "brute_lub",
    "build_linear_producer",
    "build_marriage_instance",
    "build_money_economy",
    "build_unit_demand_consumer",
    "check_coherent",
    "check_contraction",
    "check_irc",
    "check_money_monotone",
    "check_no_shortage",
    "check_path_independence",
    "check_substitutes",
    "check_two_prices",
    "classical_gale_shapley",
    "closure",
    "convolve_valuations",
    "enumerate_stable_agreements",
    "indifferent",
    "is_agreement",
    "is_stable_agreement",
    "is_stable_set",
    "join",
    "load",
    "meet",
    "parse_document",
    "prefers",
    "run",
    "save",
    "tabulate",
    "to_document",
    "union_of_orders_choice",
    "valuation_choice",
]
