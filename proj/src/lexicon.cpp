#include "lexenrich/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace lexenrich {

using detail::join;
using detail::parse_int;
using detail::split_char;
using detail::split_ws;
using detail::starts_with;
using detail::trim;

const Sense* LexEntry::find_sense(int sense_no) const {
    for (const auto& s : senses)
        if (s.sense_no == sense_no) return &s;
    return nullptr;
}

void Lexicon::build_lookup() const {
    if (!by_lemma_.empty() || entries.empty()) return;
    for (size_t i = 0; i < entries.size(); ++i) by_lemma_[entries[i].lemma].push_back(i);
}

std::vector<const LexEntry*> Lexicon::entries_for(const std::string& lemma) const {
    build_lookup();
    std::vector<const LexEntry*> out;
    auto it = by_lemma_.find(lemma);
    if (it == by_lemma_.end()) return out;
    for (size_t i : it->second) out.push_back(&entries[i]);
    return out;
}

const LexEntry* Lexicon::find(const std::string& lemma, Pos pos) const {
    for (const auto* e : entries_for(lemma))
        if (e->pos == pos) return e;
    return nullptr;
}

std::optional<Animacy> Lexicon::animacy_of(const std::string& lemma) const {
    for (const auto* e : entries_for(lemma))
        if (e->animacy) return e->animacy;
    return std::nullopt;
}

std::vector<std::pair<const LexEntry*, const Sense*>>
Lexicon::senses_with_class(const std::string& class_code) const {
    std::vector<std::pair<const LexEntry*, const Sense*>> out;
    for (const auto& e : entries) {
        if (e.pos != Pos::V) continue;
        for (const auto& s : e.senses)
            if (s.class_code == class_code) out.emplace_back(&e, &s);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first->lemma != b.first->lemma) return a.first->lemma < b.first->lemma;
        return a.second->sense_no < b.second->sense_no;
    });
    return out;
}

std::set<std::string> Lexicon::class_codes_of(const std::string& lemma) const {
    std::set<std::string> out;
    for (const auto* e : entries_for(lemma))
        for (const auto& s : e->senses)
            if (s.class_code) out.insert(*s.class_code);
    return out;
}

DomainSet ambiguity_class(const Lexicon& lexicon, const std::string& lemma) {
    DomainSet out;
    for (const auto* e : lexicon.entries_for(lemma))
        for (const auto& s : e->senses) out.insert(s.domains.begin(), s.domains.end());
    return out;
}

Rational polysemy(const Lexicon& lexicon) {
    if (lexicon.empty()) throw EmptyLexicon();
    long long senses = 0;
    for (const auto& e : lexicon.entries) senses += static_cast<long long>(e.senses.size());
    return Rational(senses, static_cast<long long>(lexicon.entries.size()));
}

// ------------------------------------------------------------------ parsing

namespace {

bool is_class_code(const std::string& s) {
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    return s.size() == 3 && alpha(s[0]) && s[1] >= '0' && s[1] <= '9' && alpha(s[2]);
}

// `LABEL(a,b)` or `LABEL(a,p,b)`; slots are lemmas or `?` when allowed.
Dependency parse_dep_spec(const std::string& spec, int line, bool allow_placeholder) {
    auto open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
        throw SyntaxError(line, "expected LABEL(arg,arg): " + spec);
    Dependency d;
    d.label = trim(spec.substr(0, open));
    if (!is_valid_label(d.label)) throw SyntaxError(line, "bad label: " + d.label);
    auto inner = spec.substr(open + 1, spec.size() - open - 2);
    auto parts = split_char(inner, ',');
    for (auto& p : parts) p = trim(p);
    auto to_slot = [&](const std::string& s) {
        if (s == "?") {
            if (!allow_placeholder) throw SyntaxError(line, "placeholder not allowed here");
            return Slot::placeholder();
        }
        if (s.empty()) throw SyntaxError(line, "empty argument in " + spec);
        return Slot::lemma(s);
    };
    if (parts.size() == 2) {
        d.arg1 = to_slot(parts[0]);
        d.arg2 = to_slot(parts[1]);
    } else if (parts.size() == 3) {
        if (!is_prepositional_label(d.label))
            throw SyntaxError(line, "label " + d.label + " does not take a preposition");
        d.arg1 = to_slot(parts[0]);
        if (parts[1].empty() || parts[1] == "?")
            throw SyntaxError(line, "bad preposition in " + spec);
        d.prep = parts[1];
        d.arg2 = to_slot(parts[2]);
    } else {
        throw SyntaxError(line, "expected 2 or 3 arguments: " + spec);
    }
    return d;
}

SubcatPattern parse_subcat_spec(const std::vector<std::string>& fields, int line) {
    SubcatPattern pat;
    const std::string& head = fields[1];
    std::string trans = head;
    if (auto colon = head.find(':'); colon != std::string::npos) {
        trans = head.substr(0, colon);
        pat.oblique_prep = head.substr(colon + 1);
        if (pat.oblique_prep->empty()) throw SyntaxError(line, "empty oblique preposition");
    }
    if (trans == "intrans") pat.transitivity = SubcatPattern::Transitivity::Intransitive;
    else if (trans == "trans") pat.transitivity = SubcatPattern::Transitivity::Transitive;
    else if (trans == "trans-obl")
        pat.transitivity = SubcatPattern::Transitivity::TransitiveOblique;
    else throw SyntaxError(line, "bad transitivity: " + trans);
    if (pat.oblique_prep && pat.transitivity != SubcatPattern::Transitivity::TransitiveOblique)
        throw SyntaxError(line, "preposition only allowed on trans-obl");

    for (size_t i = 2; i < fields.size(); ++i) {
        auto eq = fields[i].find('=');
        if (eq == std::string::npos) throw SyntaxError(line, "expected key=value: " + fields[i]);
        std::string key = fields[i].substr(0, eq);
        std::string val = fields[i].substr(eq + 1);
        Role role;
        if (key == "subj") role = Role::Subject;
        else if (key == "obj") role = Role::Object;
        else if (key == "obl") role = Role::Oblique;
        else throw SyntaxError(line, "bad subcat slot: " + key);
        Animacy an;
        try {
            an = animacy_from_string(val);
        } catch (const Error&) {
            throw SyntaxError(line, "bad animacy: " + val);
        }
        if (pat.slot_constraints.count(role))
            throw SyntaxError(line, "duplicate subcat slot: " + key);
        pat.slot_constraints[role] = an;
    }
    return pat;
}

ClassCorrespondence parse_corr(const std::vector<std::string>& fields, int line) {
    if (fields.size() < 4)
        throw SyntaxError(line, "expected `CORR <class> <class> <role>=<role>[,...] [prep=<p>]`");
    ClassCorrespondence corr;
    corr.from_class = fields[1];
    corr.to_class = fields[2];
    for (const auto& pair : split_char(fields[3], ',')) {
        auto eq = pair.find('=');
        if (eq == std::string::npos) throw SyntaxError(line, "expected ROLE=ROLE: " + pair);
        Role from, to;
        try {
            from = role_from_string(pair.substr(0, eq));
            to = role_from_string(pair.substr(eq + 1));
        } catch (const Error& e) {
            throw SyntaxError(line, e.what());
        }
        if (corr.role_map.count(from)) throw SyntaxError(line, "duplicate role: " + pair);
        corr.role_map[from] = to;
    }
    for (size_t i = 4; i < fields.size(); ++i) {
        if (starts_with(fields[i], "prep=")) corr.prep_for_demoted = fields[i].substr(5);
        else throw SyntaxError(line, "unexpected field: " + fields[i]);
    }
    return corr;
}

std::string entry_name(const LexEntry& e) { return e.lemma + "/" + to_string(e.pos); }

} // namespace

std::vector<std::string> validate_lexicon(Lexicon& lexicon) {
    std::vector<std::string> bad;
    std::set<std::pair<std::string, std::string>> seen;
    lexicon.domain_inventory.clear();

    for (const auto& e : lexicon.entries) {
        const std::string name = entry_name(e);
        if (e.lemma.empty()) bad.push_back("entry with empty lemma");
        if (!seen.insert({e.lemma, to_string(e.pos)}).second)
            bad.push_back("duplicate entry " + name);
        if (e.senses.empty()) bad.push_back(name + ": no senses");

        std::vector<int> numbers;
        for (const auto& s : e.senses) numbers.push_back(s.sense_no);
        std::sort(numbers.begin(), numbers.end());
        for (size_t i = 0; i < numbers.size(); ++i) {
            if (numbers[i] != static_cast<int>(i) + 1) {
                bad.push_back(name + ": sense numbers must be unique and contiguous from 1");
                break;
            }
        }

        for (const auto& s : e.senses) {
            const std::string sname = name + " sense " + std::to_string(s.sense_no);
            for (const auto& code : s.domains) {
                if (!is_valid_domain_code(code))
                    bad.push_back(sname + ": bad domain code " + code);
                lexicon.domain_inventory.insert(code);
            }
            if (s.class_code && !is_class_code(*s.class_code))
                bad.push_back(sname + ": class code must be letter+digit+letter, got " +
                              *s.class_code);
            if (s.freq && *s.freq <= 0) bad.push_back(sname + ": freq must be positive");
            for (const auto& d : s.example_deps) {
                bool mentions = (d.arg1.is_lemma() && d.arg1.lemma_text == e.lemma) ||
                                (d.arg2.is_lemma() && d.arg2.lemma_text == e.lemma);
                if (!mentions)
                    bad.push_back(sname + ": example " + d.label +
                                  " does not mention the entry lemma");
                if (d.arg1.is_placeholder() || d.arg2.is_placeholder())
                    bad.push_back(sname + ": example dependency contains a placeholder");
            }
            for (const auto& syn : s.synonyms) {
                if (syn.kind == SynonymSpec::Kind::SingleWord) {
                    if (syn.text.empty() ||
                        syn.text.find_first_of(" \t") != std::string::npos)
                        bad.push_back(sname + ": single-word synonym contains whitespace: '" +
                                      syn.text + "'");
                } else {
                    if (syn.mwe_template.empty())
                        bad.push_back(sname + ": multi-word synonym '" + syn.text +
                                      "' has an empty template");
                    bool has_content = false;
                    for (const auto& d : syn.mwe_template)
                        if (d.arg1.is_placeholder() || d.arg2.is_placeholder() ||
                            d.arg1.is_lemma() || d.arg2.is_lemma())
                            has_content = true;
                    if (!syn.mwe_template.empty() && !has_content)
                        bad.push_back(sname + ": multi-word template has no slots");
                }
            }
            if (s.subcat) {
                if (e.pos != Pos::V)
                    bad.push_back(sname + ": subcategorization on a non-verb entry");
                const auto& pat = *s.subcat;
                bool trans = pat.transitivity != SubcatPattern::Transitivity::Intransitive;
                bool obl = pat.transitivity == SubcatPattern::Transitivity::TransitiveOblique;
                if (pat.slot_constraints.count(Role::Object) && !trans)
                    bad.push_back(sname + ": obj constraint on an intransitive pattern");
                if (pat.slot_constraints.count(Role::Oblique) && !obl)
                    bad.push_back(sname + ": obl constraint without trans-obl");
            }
        }
    }

    for (const auto& c : lexicon.correspondences) {
        if (!is_class_code(c.from_class) || !is_class_code(c.to_class))
            bad.push_back("correspondence " + c.from_class + "->" + c.to_class +
                          ": bad class code");
        std::set<Role> targets;
        for (const auto& [from, to] : c.role_map)
            if (!targets.insert(to).second)
                bad.push_back("correspondence " + c.from_class + "->" + c.to_class +
                              ": role map is not injective");
    }
    return bad;
}

Lexicon parse_lexicon(std::istream& in) {
    Lexicon lex;
    LexEntry* entry = nullptr;
    Sense* sense = nullptr;
    std::set<std::pair<std::string, Pos>> seen;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_ws(line);
        const std::string& kw = fields[0];

        if (kw == "ENTRY") {
            if (fields.size() != 3 || !starts_with(fields[2], "POS="))
                throw SyntaxError(line_no, "expected `ENTRY <lemma> POS=<pos>`");
            LexEntry e;
            e.lemma = fields[1];
            try {
                e.pos = pos_from_string(fields[2].substr(4));
            } catch (const Error&) {
                throw SyntaxError(line_no, "bad POS: " + fields[2]);
            }
            if (!seen.insert({e.lemma, e.pos}).second)
                throw DuplicateEntryError(line_no, e.lemma, to_string(e.pos));
            lex.entries.push_back(std::move(e));
            entry = &lex.entries.back();
            sense = nullptr;
        } else if (kw == "ANIM") {
            if (!entry) throw SyntaxError(line_no, "ANIM outside of an entry");
            if (fields.size() != 2) throw SyntaxError(line_no, "expected `ANIM <animacy>`");
            if (entry->animacy) throw SyntaxError(line_no, "duplicate ANIM");
            try {
                entry->animacy = animacy_from_string(fields[1]);
            } catch (const Error&) {
                throw SyntaxError(line_no, "bad animacy: " + fields[1]);
            }
        } else if (kw == "SENSE") {
            if (!entry) throw SyntaxError(line_no, "SENSE outside of an entry");
            if (fields.size() < 2) throw SyntaxError(line_no, "expected `SENSE <n> ...`");
            Sense s;
            if (!parse_int(fields[1], s.sense_no) || s.sense_no <= 0)
                throw SyntaxError(line_no, "bad sense number: " + fields[1]);
            for (size_t i = 2; i < fields.size(); ++i) {
                if (starts_with(fields[i], "DOMAIN=")) {
                    for (const auto& code : split_char(fields[i].substr(7), ','))
                        s.domains.insert(code);
                } else if (starts_with(fields[i], "CLASS=")) {
                    s.class_code = fields[i].substr(6);
                } else if (starts_with(fields[i], "FREQ=")) {
                    int f = 0;
                    if (!parse_int(fields[i].substr(5), f))
                        throw SyntaxError(line_no, "bad FREQ: " + fields[i]);
                    s.freq = f;
                } else {
                    throw SyntaxError(line_no, "unexpected field: " + fields[i]);
                }
            }
            entry->senses.push_back(std::move(s));
            sense = &entry->senses.back();
        } else if (kw == "DEP") {
            if (!sense) throw SyntaxError(line_no, "DEP outside of a sense");
            std::string spec = trim(line.substr(3));
            sense->example_deps.push_back(parse_dep_spec(spec, line_no, false));
        } else if (kw == "SYN") {
            if (!sense) throw SyntaxError(line_no, "SYN outside of a sense");
            SynonymSpec syn;
            syn.kind = SynonymSpec::Kind::SingleWord;
            syn.text = trim(line.substr(3));
            sense->synonyms.push_back(std::move(syn));
        } else if (kw == "MWE") {
            if (!sense) throw SyntaxError(line_no, "MWE outside of a sense");
            auto sep = line.find(" :: ");
            if (sep == std::string::npos)
                throw SyntaxError(line_no, "expected `MWE <text> :: <deps>`");
            SynonymSpec syn;
            syn.kind = SynonymSpec::Kind::MultiWord;
            syn.text = trim(line.substr(3, sep - 3));
            if (syn.text.empty()) throw SyntaxError(line_no, "empty MWE text");
            for (const auto& spec : split_char(line.substr(sep + 4), ';')) {
                std::string t = trim(spec);
                if (t.empty()) continue;
                syn.mwe_template.push_back(parse_dep_spec(t, line_no, true));
            }
            sense->synonyms.push_back(std::move(syn));
        } else if (kw == "SUBCAT") {
            if (!sense) throw SyntaxError(line_no, "SUBCAT outside of a sense");
            if (fields.size() < 2) throw SyntaxError(line_no, "expected `SUBCAT <pattern>`");
            if (sense->subcat) throw SyntaxError(line_no, "duplicate SUBCAT");
            sense->subcat = parse_subcat_spec(fields, line_no);
        } else if (kw == "CORR") {
            lex.correspondences.push_back(parse_corr(fields, line_no));
        } else {
            throw SyntaxError(line_no, "unrecognized line: " + line);
        }
    }

    auto violations = validate_lexicon(lex);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return lex;
}

Lexicon parse_lexicon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);
    return parse_lexicon(in);
}

Lexicon parse_lexicon_text(const std::string& text) {
    std::istringstream in(text);
    return parse_lexicon(in);
}

// -------------------------------------------------------------- serializing

namespace {

std::string dep_spec(const Dependency& d) {
    auto slot = [](const Slot& s) { return s.is_placeholder() ? std::string("?") : s.lemma_text; };
    std::string out = d.label + "(" + slot(d.arg1);
    if (d.prep) out += "," + *d.prep;
    out += "," + slot(d.arg2) + ")";
    return out;
}

} // namespace

std::string serialize_lexicon(const Lexicon& lexicon) {
    std::vector<const LexEntry*> entries;
    for (const auto& e : lexicon.entries) entries.push_back(&e);
    std::stable_sort(entries.begin(), entries.end(), [](const LexEntry* a, const LexEntry* b) {
        if (a->lemma != b->lemma) return a->lemma < b->lemma;
        return static_cast<int>(a->pos) < static_cast<int>(b->pos);
    });

    std::string out;
    bool first = true;
    for (const auto* e : entries) {
        if (!first) out += "\n";
        first = false;
        out += "ENTRY " + e->lemma + " POS=" + to_string(e->pos) + "\n";
        if (e->animacy) out += "ANIM " + to_string(*e->animacy) + "\n";
        std::vector<const Sense*> senses;
        for (const auto& s : e->senses) senses.push_back(&s);
        std::stable_sort(senses.begin(), senses.end(),
                         [](const Sense* a, const Sense* b) { return a->sense_no < b->sense_no; });
        for (const auto* s : senses) {
            out += "SENSE " + std::to_string(s->sense_no);
            if (!s->domains.empty())
                out += " DOMAIN=" + join(s->domains.begin(), s->domains.end(), ",",
                                         [](const std::string& x) { return x; });
            if (s->class_code) out += " CLASS=" + *s->class_code;
            if (s->freq) out += " FREQ=" + std::to_string(*s->freq);
            out += "\n";
            for (const auto& d : s->example_deps) out += "  DEP " + dep_spec(d) + "\n";
            for (const auto& syn : s->synonyms) {
                if (syn.kind == SynonymSpec::Kind::SingleWord) {
                    out += "  SYN " + syn.text + "\n";
                } else {
                    out += "  MWE " + syn.text + " :: " +
                           join(syn.mwe_template.begin(), syn.mwe_template.end(), "; ",
                                [](const Dependency& d) { return dep_spec(d); }) +
                           "\n";
                }
            }
            if (s->subcat) {
                const auto& pat = *s->subcat;
                out += "  SUBCAT ";
                switch (pat.transitivity) {
                    case SubcatPattern::Transitivity::Intransitive: out += "intrans"; break;
                    case SubcatPattern::Transitivity::Transitive: out += "trans"; break;
                    case SubcatPattern::Transitivity::TransitiveOblique: out += "trans-obl"; break;
                }
                if (pat.oblique_prep) out += ":" + *pat.oblique_prep;
                for (const auto& [role, an] : pat.slot_constraints) {
                    const char* key = role == Role::Subject ? "subj"
                                      : role == Role::Object ? "obj"
                                                             : "obl";
                    out += std::string(" ") + key + "=" + to_string(an);
                }
                out += "\n";
            }
        }
    }

    std::vector<const ClassCorrespondence*> corrs;
    for (const auto& c : lexicon.correspondences) corrs.push_back(&c);
    std::stable_sort(corrs.begin(), corrs.end(), [](const auto* a, const auto* b) {
        return std::tie(a->from_class, a->to_class) < std::tie(b->from_class, b->to_class);
    });
    if (!corrs.empty() && !first) out += "\n";
    for (const auto* c : corrs) {
        out += "CORR " + c->from_class + " " + c->to_class + " ";
        out += join(c->role_map.begin(), c->role_map.end(), ",", [](const auto& kv) {
            return role_label(kv.first) + "=" + role_label(kv.second);
        });
        if (c->prep_for_demoted) out += " prep=" + *c->prep_for_demoted;
        out += "\n";
    }
    return out;
}

} // namespace lexenrich
