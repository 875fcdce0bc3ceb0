"""persinet: Petri net persistence and permutation-equivalence analysis.

The package is organised around the questions it answers:

- net:        firing rule, structural classes, net constructions
- lts:        reachability graphs, boundedness, persistence, isomorphism
- sequences:  Parikh vectors, permutation equivalence, bounded SPE checks,
              diamond completion and sequence unification
- patterns:   embeddings of diagnostic patterns into transition systems
- fairness:   lassos, the fairness spectrum, equivalents of infinite runs
- theorems:   seeded random nets, empirical theorem checking, oracles
- textio:     text formats and DOT export
- corpus:     the embedded example nets and their expectation manifests
"""

from .errors import (
    InputError,
    InvariantError,
    NotEnabledError,
    ParseError,
    PersinetError,
    PreconditionError,
    ResourceExceededError,
    UnknownIdError,
    UnsupportedClassError,
)
from .net import (
    ClassReport,
    Marking,
    Net,
    classify_structure,
    concurrently_enables,
    disjoint_sum,
    enabled,
    enabled_transitions,
    fire,
    fire_sequence,
    firable,
    project_sequence,
    restrict_to_component,
    reverse_dual,
)
from .lts import (
    BoundReport,
    IsoVerdict,
    Lts,
    LtsReport,
    PersistenceVerdict,
    build_rg,
    isomorphic,
    lts_properties,
    persistence_check,
)
from .sequences import (
    SPE,
    SPE_PARIKH,
    SeqPersistenceVerdict,
    SpeVerdict,
    complete_diamond,
    equivalence_class,
    parikh,
    perm_equivalent,
    persistent_parikh_equivalent,
    persistent_perm_equivalent,
    sequence_persistence,
    spe_check,
    unify_parikh_equivalent,
)
from .patterns import (
    Embedding,
    Pattern,
    RecognizeVerdict,
    builtin_pattern,
    derive_nonDC_embedding,
    find_embedding,
    recognize,
    validate_embedding,
)
from .fairness import (
    AnalysisBounds,
    FairnessReport,
    Lasso,
    fairness_classify,
    lasso_equiv_at_depth,
    lasso_persistence,
    pe_probe_matrix,
    search_persistent_equivalent_lasso,
    validate_lasso,
)
from .theorems import (
    GenConfig,
    TheoremReport,
    check_theorem,
    gen_random_net,
    implication_matrix,
    oracle_spe_check,
    run_theorem_suite,
)
from .corpus import CorpusEntry, corpus_load, corpus_names, verify_corpus
from .textio import (
    emit_dot,
    parse_lasso,
    parse_lts,
    parse_net,
    parse_pattern,
    parse_sequence,
    print_lasso,
    print_lts,
    print_net,
    print_pattern,
)

__version__ = "0.1.0"
