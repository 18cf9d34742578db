"""Dictionary-driven word sense disambiguation and dependency-index enrichment."""

from ._core import (  # noqa: F401
    DependencyIndex,
    EvalReport,
    GoldAnnotation,
    Lexicon,
    LexenrichError,
    Rational,
    RuleDb,
    SenseAssignment,
    SenseCandidate,
    ambiguity_class,
    compile_rules,
    contract_mwe_to_word,
    converse_enrich,
    deps_involving,
    disambiguate,
    enrich,
    enrich_lexical,
    enrichment_sanity,
    expand_word_to_mwe,
    format_report,
    jaccard,
    match_query,
    parse_assignments,
    parse_documents,
    parse_documents_text,
    parse_gold,
    parse_index,
    parse_lexicon,
    parse_lexicon_text,
    parse_query,
    parse_rules,
    polysemy,
    report_to_tsv,
    score_run,
    serialize_assignments,
    serialize_gold,
    serialize_index,
    serialize_indexes,
    serialize_lexicon,
    serialize_rules,
)

__version__ = "0.1.0"
