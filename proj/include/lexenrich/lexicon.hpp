#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexenrich/core.hpp"
#include "lexenrich/deps.hpp"
#include "lexenrich/rational.hpp"

namespace lexenrich {

struct SynonymSpec {
    enum class Kind { SingleWord, MultiWord };

    Kind kind = Kind::SingleWord;
    std::string text;
    /// MultiWord only: pre-parsed dependency template with `?` placeholders.
    std::vector<Dependency> mwe_template;
};

struct SubcatPattern {
    enum class Transitivity { Intransitive, Transitive, TransitiveOblique };

    Transitivity transitivity = Transitivity::Intransitive;
    std::map<Role, Animacy> slot_constraints;
    std::optional<std::string> oblique_prep;

    bool takes_object() const {
        return transitivity != Transitivity::Intransitive;
    }
};

struct Sense {
    int sense_no = 0;
    DomainSet domains;
    std::vector<Dependency> example_deps;
    std::vector<SynonymSpec> synonyms;
    std::optional<SubcatPattern> subcat;
    std::optional<std::string> class_code;
    std::optional<int> freq;
};

struct LexEntry {
    std::string lemma;
    Pos pos = Pos::V;
    std::vector<Sense> senses;
    /// Per-lemma animacy declaration (noun entries), consumed by subcat rules.
    std::optional<Animacy> animacy;

    const Sense* find_sense(int sense_no) const;
};

/// Declared link between two syntactico-semantic classes, with the role
/// remapping that carries dependencies from one verb to its converse.
struct ClassCorrespondence {
    std::string from_class;
    std::string to_class;
    std::map<Role, Role> role_map;
    std::optional<std::string> prep_for_demoted;
};

/// Immutable after parse; safe for unrestricted concurrent reads.
struct Lexicon {
    std::vector<LexEntry> entries;
    DomainSet domain_inventory;
    std::vector<ClassCorrespondence> correspondences;

    bool empty() const { return entries.empty(); }
    std::vector<const LexEntry*> entries_for(const std::string& lemma) const;
    const LexEntry* find(const std::string& lemma, Pos pos) const;
    /// Animacy declared for the lemma on any of its entries.
    std::optional<Animacy> animacy_of(const std::string& lemma) const;
    /// Verb senses carrying the given class code, ordered by lemma.
    std::vector<std::pair<const LexEntry*, const Sense*>>
    senses_with_class(const std::string& class_code) const;
    /// All class codes over all senses of all entries for the lemma.
    std::set<std::string> class_codes_of(const std::string& lemma) const;

private:
    mutable std::map<std::string, std::vector<size_t>> by_lemma_;
    void build_lookup() const;
};

/// Parses the line-record lexicon format and validates every invariant,
/// collecting all violations into one ValidationError.
Lexicon parse_lexicon(std::istream& in);
Lexicon parse_lexicon_file(const std::string& path);
Lexicon parse_lexicon_text(const std::string& text);

/// Validates a programmatically built lexicon (same checks as the parser) and
/// computes the domain inventory. Returns the list of violations, empty when
/// the lexicon is well-formed.
std::vector<std::string> validate_lexicon(Lexicon& lexicon);

/// Canonical text form: entries sorted by (lemma, pos), senses by number.
/// serialize(parse(serialize(x))) == serialize(x).
std::string serialize_lexicon(const Lexicon& lexicon);

/// Union of domain tags across all senses of all entries for the lemma;
/// empty for unknown lemmas.
DomainSet ambiguity_class(const Lexicon& lexicon, const std::string& lemma);

/// Total sense count over entry count. Throws EmptyLexicon.
Rational polysemy(const Lexicon& lexicon);

} // namespace lexenrich
