#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexenrich/errors.hpp"

namespace lexenrich {

enum class Pos { V, N, A, ADV };

enum class Animacy { Human, Animal, Inanimate, Any };

/// Grammatical roles named by subcategorization patterns and class correspondences.
enum class Role { Subject, Object, Oblique };

/// Domain tags are short uppercase codes (MTO, AER, LOC, ...); kept as strings
/// since the inventory is flat and lexicon-defined.
using DomainSet = std::set<std::string>;

std::string to_string(Pos p);
Pos pos_from_string(const std::string& s);
std::string to_string(Animacy a);
Animacy animacy_from_string(const std::string& s);
std::string to_string(Role r);
Role role_from_string(const std::string& s);
std::string role_label(Role r); // SUBJECT / OBJECT / OBLIQUE

bool is_valid_domain_code(const std::string& code);
bool is_valid_label(const std::string& label);

/// Labels whose dependencies carry a preposition in the middle slot.
bool is_prepositional_label(const std::string& label);

/// One argument position of a dependency: a token reference inside a parsed
/// sentence, a bare lemma (dictionary examples, templates, queries), or the
/// placeholder `?` used by templates and query patterns.
struct Slot {
    enum class Kind { TokenRef, Lemma, Placeholder };

    static Slot token(int id) { return {Kind::TokenRef, id, {}}; }
    static Slot lemma(std::string l) { return {Kind::Lemma, -1, std::move(l)}; }
    static Slot placeholder() { return {Kind::Placeholder, -1, {}}; }

    bool is_token() const { return kind == Kind::TokenRef; }
    bool is_lemma() const { return kind == Kind::Lemma; }
    bool is_placeholder() const { return kind == Kind::Placeholder; }

    bool operator==(const Slot& o) const {
        return kind == o.kind && token_id == o.token_id && lemma_text == o.lemma_text;
    }

    Kind kind = Kind::Placeholder;
    int token_id = -1;
    std::string lemma_text;
};

/// A labeled relation over two argument slots, optionally carrying a
/// preposition as the middle slot of the three-argument form, e.g.
/// SUBJECT(grimper,température) or VMODOBJ(drift,towards,recession).
struct Dependency {
    std::string label;
    Slot arg1;
    Slot arg2;
    std::optional<std::string> prep;

    int arity() const { return prep ? 3 : 2; }

    /// Token-slot positions are 1 and arity(); position 2 of a 3-argument
    /// dependency is the preposition, not an argument slot.
    bool is_arg_position(int pos) const { return pos == 1 || pos == arity(); }
    const Slot& slot_at(int pos) const { return pos == 1 ? arg1 : arg2; }
    Slot& slot_at(int pos) { return pos == 1 ? arg1 : arg2; }

    bool operator==(const Dependency& o) const {
        return label == o.label && arg1 == o.arg1 && arg2 == o.arg2 && prep == o.prep;
    }
};

} // namespace lexenrich
