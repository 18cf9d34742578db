#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexenrich/lexicon.hpp"

namespace lexenrich {

enum class RuleLevel { Word, Domain, Subcat };

std::string to_string(RuleLevel level);
RuleLevel rule_level_from_string(const std::string& s);

/// One test on a single dependency of the sentence: the ambiguous lemma must
/// occupy target_slot and the token at other_slot must pass the test.
struct Constraint {
    struct Test {
        enum class Kind { LemmaEquals, DomainIn, AnimacyIs, Unconstrained };
        Kind kind = Kind::Unconstrained;
        std::string lemma;   // LemmaEquals
        DomainSet domains;   // DomainIn
        Animacy animacy = Animacy::Any; // AnimacyIs
    };

    std::string label;
    int target_slot = 1;
    int other_slot = 2;
    std::optional<std::string> prep;
    Test test;
};

struct Rule {
    RuleLevel level = RuleLevel::Word;
    std::string target_lemma;
    int sense_no = 0;
    std::vector<Constraint> constraints;
};

/// Canonical serialized form of one rule (also the duplicate-detection key
/// once constraints are order-normalized).
std::string serialize_rule(const Rule& rule);

struct CompileReport {
    int word_rules = 0;
    int domain_rules = 0;
    int subcat_rules = 0;
    int senses_without_examples = 0;
    int degenerate_domain_rules_dropped = 0;

    std::string to_text() const;
};

/// Rule database, canonically ordered, duplicate-free.
class RuleDb {
public:
    RuleDb() = default;
    /// Sorts canonically; throws DuplicateRuleError on duplicates.
    explicit RuleDb(std::vector<Rule> rules);

    const std::vector<Rule>& rules() const { return rules_; }
    std::vector<const Rule*> rules_for(const std::string& lemma, RuleLevel level) const;
    size_t size() const { return rules_.size(); }

private:
    std::vector<Rule> rules_;
};

/// One Word rule per sense with at least one example dependency; each example
/// becomes a LemmaEquals constraint on the co-argument.
std::vector<Rule> compile_word_rules(const Lexicon& lexicon, CompileReport* report = nullptr);

/// Word rules generalized by replacing each co-argument lemma with its
/// ambiguity class; empty classes degrade to Unconstrained, and rules with
/// nothing left but Unconstrained are dropped.
std::vector<Rule> generalize_domain_rules(const Lexicon& lexicon,
                                          const std::vector<Rule>& word_rules,
                                          CompileReport* report = nullptr);

/// One Subcat rule per verb sense with a subcategorization pattern.
std::vector<Rule> compile_subcat_rules(const Lexicon& lexicon, CompileReport* report = nullptr);

/// All three levels in one database.
RuleDb compile_rules(const Lexicon& lexicon, CompileReport* report = nullptr);

std::string serialize_rules(const RuleDb& db);
RuleDb parse_rules(const std::string& text);

} // namespace lexenrich
