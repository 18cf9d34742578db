#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexenrich/deps.hpp"
#include "lexenrich/lexicon.hpp"
#include "lexenrich/rulegen.hpp"
#include "lexenrich/wsd.hpp"

namespace lexenrich {

enum class EnrichLevel { Lexical, Mwe, Converse };

std::string to_string(EnrichLevel level);
EnrichLevel enrich_level_from_string(const std::string& s);

struct EnrichmentPlan {
    std::set<EnrichLevel> levels = {EnrichLevel::Lexical, EnrichLevel::Mwe,
                                    EnrichLevel::Converse};
    /// Cap on added records per assigned token; 0 means unlimited.
    int max_additions_per_token = 0;
};

struct EnrichmentReport {
    struct TokenCounts {
        std::string doc_id, sentence_id;
        int token_id = 0;
        std::string lemma;
        int lexical = 0, mwe = 0, converse = 0;
    };
    struct Skip {
        std::string doc_id, sentence_id;
        int token_id = 0;
        std::string lemma;
        std::string what;   // e.g. the MWE text or a class code
        std::string reason; // unbound-placeholder | no-converse-target | max-additions
    };

    std::vector<TokenCounts> tokens;
    std::vector<Skip> skipped;

    std::string to_text() const;
};

/// Copies every dependency containing an assigned token once per single-word
/// synonym of the selected sense(s), replacing the token with a synthetic one
/// for the synonym. Original records are untouched; duplicates suppressed.
DependencyIndex enrich_lexical(const DependencyIndex& index,
                               const std::vector<SenseAssignment>& assignments,
                               const Lexicon& lexicon, EnrichmentReport* report = nullptr);

/// Adds the dependencies of one multi-word-expression template, binding its
/// placeholders from the text arguments of the replaced word. All-or-nothing:
/// an unbindable placeholder skips the whole template.
DependencyIndex expand_word_to_mwe(const DependencyIndex& index,
                                   const SenseAssignment& assignment, const SynonymSpec& mwe,
                                   const Lexicon& lexicon, EnrichmentReport* report = nullptr);

/// Replaces an identified multi-word-expression occurrence by a single-word
/// synonym: among records with exactly one argument inside the occurrence,
/// those whose inside token has the synonym's POS are copied with that token
/// swapped for the synonym.
DependencyIndex contract_mwe_to_word(const DependencyIndex& index,
                                     const std::string& sentence_id,
                                     const std::set<int>& mwe_occurrence,
                                     const std::string& synonym, Pos pos,
                                     const Lexicon& lexicon);

/// Maps the dependencies of an assigned verb onto its converse verb(s) through
/// the class-correspondence table, remapping roles and demoting the agent to a
/// prepositional oblique.
DependencyIndex converse_enrich(const DependencyIndex& index,
                                const SenseAssignment& assignment, const Lexicon& lexicon,
                                EnrichmentReport* report = nullptr);

/// Applies the enabled levels in fixed order Lexical -> Mwe -> Converse.
DependencyIndex enrich_document(const DependencyIndex& index,
                                const std::vector<SenseAssignment>& assignments,
                                const Lexicon& lexicon, const EnrichmentPlan& plan,
                                EnrichmentReport* report = nullptr);

struct QueryMatch {
    size_t pattern_index = 0;
    std::string doc_id, sentence_id;
    IndexRecord record;
    bool class_fallback = false;
};

/// Dependency patterns with `?` placeholders: `D LABEL lemma lemma` or
/// `D LABEL lemma prep lemma`.
std::vector<Dependency> parse_query(const std::string& text);

/// Exact matching against all records first; when the whole query has no
/// match and its head verb carries a class code, retries accepting any index
/// verb sharing that code (class-fallback).
std::vector<QueryMatch> match_query(const std::vector<DependencyIndex>& indexes,
                                    const std::vector<Dependency>& query,
                                    const Lexicon& lexicon, const RuleDb& db);

} // namespace lexenrich
