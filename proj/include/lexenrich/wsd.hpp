#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lexenrich/deps.hpp"
#include "lexenrich/lexicon.hpp"
#include "lexenrich/rational.hpp"
#include "lexenrich/rulegen.hpp"

namespace lexenrich {

/// Ratio of intersection to union; 0 when both sets are empty.
Rational jaccard(const DomainSet& a, const DomainSet& b);

struct MatchConfig {
    /// Score contribution of a satisfied Unconstrained constraint. Below 1 so
    /// a fully lexical match always outranks a degenerate one.
    Rational unconstrained_contribution = Rational(1, 2);
};

struct MatchResult {
    const Rule* rule = nullptr;
    int sense_no = 0;
    int satisfied = 0;
    Rational score;
};

/// Matches one rule against the Original dependencies of a sentence.
/// A constraint is satisfied by a dependency with the rule's label, the
/// target lemma in the target slot, an equal preposition when both sides
/// carry one, and an other-slot token passing the constraint's test.
/// Present iff at least one constraint is satisfied; the score is the mean
/// contribution over all constraints.
std::optional<MatchResult> match_rule(const Rule& rule, const Sentence& sentence,
                                      const Lexicon& lexicon,
                                      const MatchConfig& config = {});

struct TiePolicy {
    enum class Kind { All, First, Random };
    Kind kind = Kind::All;
    uint64_t seed = 0;

    static TiePolicy all() { return {Kind::All, 0}; }
    static TiePolicy first() { return {Kind::First, 0}; }
    static TiePolicy random(uint64_t seed) { return {Kind::Random, seed}; }
};

std::string to_string(const TiePolicy& policy);
TiePolicy tie_policy_from_string(const std::string& s);

struct SenseCandidate {
    int sense_no = 0;
    std::string level; // word | domain | subcat | mono
    int satisfied = 0;
    Rational score;
};

struct SenseAssignment {
    std::string doc_id;
    std::string sentence_id;
    int token_id = 0;
    std::string lemma;
    /// Post-policy candidates, ordered by (satisfied desc, score desc, sense asc).
    std::vector<SenseCandidate> candidates;
    TiePolicy policy;
};

/// Applies the preference strategy to one polysemous token: Word rules first,
/// then Domain, then Subcat; absent when no level matches.
std::optional<SenseAssignment> disambiguate_token(const RuleDb& db, const Lexicon& lexicon,
                                                  const DependencyIndex& index,
                                                  const Sentence& sentence, const Token& token,
                                                  const TiePolicy& policy,
                                                  const MatchConfig& config = {});

/// One optional assignment per token occurrence with a lexicon entry;
/// monosemous tokens get their unique sense with level "mono".
std::vector<SenseAssignment> disambiguate_document(const RuleDb& db, const Lexicon& lexicon,
                                                   const DependencyIndex& index,
                                                   const TiePolicy& policy,
                                                   const MatchConfig& config = {});

/// Assignment TSV: doc, sent, token, lemma, senses, level, score, policy.
std::string serialize_assignments(const std::vector<SenseAssignment>& assignments);
std::vector<SenseAssignment> parse_assignments(const std::string& text);

} // namespace lexenrich
