#include "lexenrich/core.hpp"

namespace lexenrich {

std::string to_string(Pos p) {
    switch (p) {
        case Pos::V: return "V";
        case Pos::N: return "N";
        case Pos::A: return "A";
        case Pos::ADV: return "ADV";
    }
    return "?";
}

Pos pos_from_string(const std::string& s) {
    if (s == "V") return Pos::V;
    if (s == "N") return Pos::N;
    if (s == "A") return Pos::A;
    if (s == "ADV") return Pos::ADV;
    throw Error("unknown POS: " + s);
}

std::string to_string(Animacy a) {
    switch (a) {
        case Animacy::Human: return "human";
        case Animacy::Animal: return "animal";
        case Animacy::Inanimate: return "inanimate";
        case Animacy::Any: return "any";
    }
    return "?";
}

Animacy animacy_from_string(const std::string& s) {
    if (s == "human") return Animacy::Human;
    if (s == "animal") return Animacy::Animal;
    if (s == "inanimate") return Animacy::Inanimate;
    throw Error("unknown animacy: " + s);
}

std::string to_string(Role r) {
    switch (r) {
        case Role::Subject: return "SUBJECT";
        case Role::Object: return "OBJECT";
        case Role::Oblique: return "OBLIQUE";
    }
    return "?";
}

std::string role_label(Role r) { return to_string(r); }

Role role_from_string(const std::string& s) {
    if (s == "SUBJECT") return Role::Subject;
    if (s == "OBJECT") return Role::Object;
    if (s == "OBLIQUE") return Role::Oblique;
    throw Error("unknown grammatical role: " + s);
}

bool is_valid_domain_code(const std::string& code) {
    if (code.empty() || code.size() > 8) return false;
    if (code.front() < 'A' || code.front() > 'Z') return false;
    for (char c : code)
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
    return true;
}

bool is_valid_label(const std::string& label) {
    if (label.empty()) return false;
    if (label.front() < 'A' || label.front() > 'Z') return false;
    for (char c : label)
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-'))
            return false;
    return true;
}

bool is_prepositional_label(const std::string& label) {
    return label == "PP" || label == "VMODOBJ" || label == "OBLIQUE-DE";
}

} // namespace lexenrich
