#include "lexenrich/rulegen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace lexenrich {

using detail::join;
using detail::parse_int;
using detail::split_char;
using detail::split_lines;
using detail::starts_with;
using detail::trim;

std::string to_string(RuleLevel level) {
    switch (level) {
        case RuleLevel::Word: return "word";
        case RuleLevel::Domain: return "domain";
        case RuleLevel::Subcat: return "subcat";
    }
    return "?";
}

RuleLevel rule_level_from_string(const std::string& s) {
    if (s == "word") return RuleLevel::Word;
    if (s == "domain") return RuleLevel::Domain;
    if (s == "subcat") return RuleLevel::Subcat;
    throw Error("unknown rule level: " + s);
}

namespace {

constexpr const char* kRulesHeader = "#RULES 1";

std::string serialize_constraint(const Constraint& c) {
    std::string out = c.label + "[" + std::to_string(c.target_slot) + "," +
                      std::to_string(c.other_slot) + "]";
    if (c.prep) out += "[prep=" + *c.prep + "]";
    out += "{";
    switch (c.test.kind) {
        case Constraint::Test::Kind::LemmaEquals: out += "lemma=" + c.test.lemma; break;
        case Constraint::Test::Kind::DomainIn:
            out += "dom=" + join(c.test.domains.begin(), c.test.domains.end(), ",",
                                 [](const std::string& s) { return s; });
            break;
        case Constraint::Test::Kind::AnimacyIs: out += "anim=" + to_string(c.test.animacy); break;
        case Constraint::Test::Kind::Unconstrained: out += "*"; break;
    }
    out += "}";
    return out;
}

// Duplicate-detection key: constraint order must not matter.
std::string rule_key(const Rule& r) {
    std::vector<std::string> cs;
    for (const auto& c : r.constraints) cs.push_back(serialize_constraint(c));
    std::sort(cs.begin(), cs.end());
    return to_string(r.level) + "|" + r.target_lemma + "|" + std::to_string(r.sense_no) + "|" +
           join(cs.begin(), cs.end(), ";", [](const std::string& s) { return s; });
}

bool rule_less(const Rule& a, const Rule& b) {
    if (a.target_lemma != b.target_lemma) return a.target_lemma < b.target_lemma;
    if (a.level != b.level) return static_cast<int>(a.level) < static_cast<int>(b.level);
    if (a.sense_no != b.sense_no) return a.sense_no < b.sense_no;
    return serialize_rule(a) < serialize_rule(b);
}

} // namespace

std::string serialize_rule(const Rule& rule) {
    return "RULE " + to_string(rule.level) + " " + rule.target_lemma + " " +
           std::to_string(rule.sense_no) + " :: " +
           join(rule.constraints.begin(), rule.constraints.end(), " ; ",
                [](const Constraint& c) { return serialize_constraint(c); });
}

std::string CompileReport::to_text() const {
    std::ostringstream out;
    out << "word rules:   " << word_rules << "\n";
    out << "domain rules: " << domain_rules << "\n";
    out << "subcat rules: " << subcat_rules << "\n";
    out << "senses without examples: " << senses_without_examples << "\n";
    out << "degenerate domain rules dropped: " << degenerate_domain_rules_dropped << "\n";
    return out.str();
}

RuleDb::RuleDb(std::vector<Rule> rules) : rules_(std::move(rules)) {
    std::stable_sort(rules_.begin(), rules_.end(), rule_less);
    std::set<std::string> keys;
    for (const auto& r : rules_)
        if (!keys.insert(rule_key(r)).second)
            throw DuplicateRuleError(0, serialize_rule(r));
}

std::vector<const Rule*> RuleDb::rules_for(const std::string& lemma, RuleLevel level) const {
    std::vector<const Rule*> out;
    for (const auto& r : rules_)
        if (r.target_lemma == lemma && r.level == level) out.push_back(&r);
    return out;
}

std::vector<Rule> compile_word_rules(const Lexicon& lexicon, CompileReport* report) {
    std::vector<Rule> rules;
    for (const auto& e : lexicon.entries) {
        for (const auto& s : e.senses) {
            if (s.example_deps.empty()) {
                if (report) ++report->senses_without_examples;
                continue;
            }
            Rule rule;
            rule.level = RuleLevel::Word;
            rule.target_lemma = e.lemma;
            rule.sense_no = s.sense_no;
            std::set<std::string> seen;
            for (const auto& d : s.example_deps) {
                Constraint c;
                c.label = d.label;
                // The entry lemma occupies the target slot; the co-argument
                // is the other token slot.
                int target = (d.arg1.is_lemma() && d.arg1.lemma_text == e.lemma) ? 1 : d.arity();
                c.target_slot = target;
                c.other_slot = target == 1 ? d.arity() : 1;
                c.prep = d.prep;
                c.test.kind = Constraint::Test::Kind::LemmaEquals;
                c.test.lemma = d.slot_at(c.other_slot).lemma_text;
                if (seen.insert(serialize_constraint(c)).second)
                    rule.constraints.push_back(std::move(c));
            }
            rules.push_back(std::move(rule));
        }
    }
    if (report) report->word_rules = static_cast<int>(rules.size());
    return rules;
}

std::vector<Rule> generalize_domain_rules(const Lexicon& lexicon,
                                          const std::vector<Rule>& word_rules,
                                          CompileReport* report) {
    std::vector<Rule> rules;
    for (const auto& wr : word_rules) {
        Rule rule = wr;
        rule.level = RuleLevel::Domain;
        bool any_constrained = false;
        for (auto& c : rule.constraints) {
            if (c.test.kind != Constraint::Test::Kind::LemmaEquals) continue;
            DomainSet cls = ambiguity_class(lexicon, c.test.lemma);
            if (cls.empty()) {
                c.test = Constraint::Test{};
            } else {
                c.test.kind = Constraint::Test::Kind::DomainIn;
                c.test.domains = std::move(cls);
                c.test.lemma.clear();
                any_constrained = true;
            }
        }
        if (!any_constrained) {
            if (report) ++report->degenerate_domain_rules_dropped;
            continue;
        }
        rules.push_back(std::move(rule));
    }
    if (report) report->domain_rules = static_cast<int>(rules.size());
    return rules;
}

std::vector<Rule> compile_subcat_rules(const Lexicon& lexicon, CompileReport* report) {
    std::vector<Rule> rules;
    for (const auto& e : lexicon.entries) {
        if (e.pos != Pos::V) continue;
        for (const auto& s : e.senses) {
            if (!s.subcat) continue;
            const auto& pat = *s.subcat;
            Rule rule;
            rule.level = RuleLevel::Subcat;
            rule.target_lemma = e.lemma;
            rule.sense_no = s.sense_no;

            auto add = [&](Role role, std::optional<std::string> prep) {
                Constraint c;
                c.label = role_label(role);
                c.target_slot = 1;
                c.other_slot = 2;
                c.prep = std::move(prep);
                auto it = pat.slot_constraints.find(role);
                if (it != pat.slot_constraints.end() && it->second != Animacy::Any) {
                    c.test.kind = Constraint::Test::Kind::AnimacyIs;
                    c.test.animacy = it->second;
                }
                rule.constraints.push_back(std::move(c));
            };

            add(Role::Subject, std::nullopt);
            if (pat.takes_object()) add(Role::Object, std::nullopt);
            if (pat.transitivity == SubcatPattern::Transitivity::TransitiveOblique)
                add(Role::Oblique, pat.oblique_prep);
            rules.push_back(std::move(rule));
        }
    }
    if (report) report->subcat_rules = static_cast<int>(rules.size());
    return rules;
}

RuleDb compile_rules(const Lexicon& lexicon, CompileReport* report) {
    std::vector<Rule> all = compile_word_rules(lexicon, report);
    std::vector<Rule> domain = generalize_domain_rules(lexicon, all, report);
    std::vector<Rule> subcat = compile_subcat_rules(lexicon, report);
    all.insert(all.end(), domain.begin(), domain.end());
    all.insert(all.end(), subcat.begin(), subcat.end());
    return RuleDb(std::move(all));
}

std::string serialize_rules(const RuleDb& db) {
    std::string out = kRulesHeader;
    out += "\n";
    for (const auto& r : db.rules()) out += serialize_rule(r) + "\n";
    return out;
}

namespace {

Constraint parse_constraint(const std::string& text, int line) {
    Constraint c;
    auto lb = text.find('[');
    if (lb == std::string::npos) throw SyntaxError(line, "expected [slots] in: " + text);
    c.label = trim(text.substr(0, lb));
    if (!is_valid_label(c.label)) throw SyntaxError(line, "bad label: " + c.label);
    auto rb = text.find(']', lb);
    if (rb == std::string::npos) throw SyntaxError(line, "unterminated [slots]");
    auto slots = split_char(text.substr(lb + 1, rb - lb - 1), ',');
    if (slots.size() != 2 || !parse_int(trim(slots[0]), c.target_slot) ||
        !parse_int(trim(slots[1]), c.other_slot))
        throw SyntaxError(line, "bad slot positions in: " + text);
    size_t pos = rb + 1;
    if (pos < text.size() && text[pos] == '[') {
        auto rb2 = text.find(']', pos);
        if (rb2 == std::string::npos) throw SyntaxError(line, "unterminated [prep=...]");
        std::string inner = text.substr(pos + 1, rb2 - pos - 1);
        if (!starts_with(inner, "prep=")) throw SyntaxError(line, "expected prep= in: " + inner);
        c.prep = inner.substr(5);
        pos = rb2 + 1;
    }
    if (pos >= text.size() || text[pos] != '{' || text.back() != '}')
        throw SyntaxError(line, "expected {test} in: " + text);
    std::string body = text.substr(pos + 1, text.size() - pos - 2);
    if (body == "*") {
        c.test.kind = Constraint::Test::Kind::Unconstrained;
    } else if (starts_with(body, "lemma=")) {
        c.test.kind = Constraint::Test::Kind::LemmaEquals;
        c.test.lemma = body.substr(6);
        if (c.test.lemma.empty()) throw SyntaxError(line, "empty lemma test");
    } else if (starts_with(body, "dom=")) {
        c.test.kind = Constraint::Test::Kind::DomainIn;
        for (const auto& d : split_char(body.substr(4), ',')) {
            if (!is_valid_domain_code(d)) throw SyntaxError(line, "bad domain code: " + d);
            c.test.domains.insert(d);
        }
    } else if (starts_with(body, "anim=")) {
        c.test.kind = Constraint::Test::Kind::AnimacyIs;
        try {
            c.test.animacy = animacy_from_string(body.substr(5));
        } catch (const Error&) {
            throw SyntaxError(line, "bad animacy: " + body);
        }
    } else {
        throw SyntaxError(line, "bad constraint test: {" + body + "}");
    }

    // Slot positions follow the label's arity; a prep on a 2-argument label
    // is metadata (obliques drop their preposition in parsed documents).
    int arity = is_prepositional_label(c.label) ? 3 : 2;
    auto ok_slot = [&](int s) { return s == 1 || s == arity; };
    if (!ok_slot(c.target_slot) || !ok_slot(c.other_slot) || c.target_slot == c.other_slot)
        throw SyntaxError(line, "bad slot positions in: " + text);
    return c;
}

bool level_allows(RuleLevel level, Constraint::Test::Kind kind) {
    using K = Constraint::Test::Kind;
    if (kind == K::Unconstrained) return true;
    switch (level) {
        case RuleLevel::Word: return kind == K::LemmaEquals;
        case RuleLevel::Domain: return kind == K::DomainIn;
        case RuleLevel::Subcat: return kind == K::AnimacyIs;
    }
    return false;
}

} // namespace

RuleDb parse_rules(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kRulesHeader)
        throw SyntaxError(1, "missing rules header");
    std::vector<Rule> rules;
    std::set<std::string> keys;
    for (size_t i = 1; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i + 1);
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        auto sep = line.find(" :: ");
        if (!starts_with(line, "RULE ") || sep == std::string::npos)
            throw SyntaxError(line_no, "expected `RULE <level> <lemma> <sense> :: ...`");
        auto head = detail::split_ws(line.substr(0, sep));
        if (head.size() != 4) throw SyntaxError(line_no, "bad rule head");
        Rule rule;
        try {
            rule.level = rule_level_from_string(head[1]);
        } catch (const Error& e) {
            throw SyntaxError(line_no, e.what());
        }
        rule.target_lemma = head[2];
        if (!parse_int(head[3], rule.sense_no) || rule.sense_no <= 0)
            throw SyntaxError(line_no, "bad sense number: " + head[3]);
        for (const auto& part : split_char(line.substr(sep + 4), ';')) {
            std::string t = trim(part);
            if (t.empty()) continue;
            Constraint c = parse_constraint(t, line_no);
            if (!level_allows(rule.level, c.test.kind))
                throw SyntaxError(line_no, "test not allowed at " + to_string(rule.level) +
                                               " level: " + serialize_constraint(c));
            rule.constraints.push_back(std::move(c));
        }
        if (rule.constraints.empty()) throw SyntaxError(line_no, "rule with no constraints");
        if (!keys.insert(rule_key(rule)).second)
            throw DuplicateRuleError(line_no, serialize_rule(rule));
        rules.push_back(std::move(rule));
    }
    return RuleDb(std::move(rules));
}

} // namespace lexenrich
