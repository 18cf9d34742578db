#include "lexenrich/wsd.hpp"

#include <algorithm>
#include <map>

#include "text_util.hpp"

namespace lexenrich {

using detail::parse_int;
using detail::split_char;
using detail::split_lines;
using detail::starts_with;
using detail::trim;

Rational jaccard(const DomainSet& a, const DomainSet& b) {
    if (a.empty() && b.empty()) return Rational(0);
    long long inter = 0;
    for (const auto& x : a) inter += b.count(x);
    long long uni = static_cast<long long>(a.size() + b.size()) - inter;
    return Rational(inter, uni);
}

std::string to_string(const TiePolicy& policy) {
    switch (policy.kind) {
        case TiePolicy::Kind::All: return "all";
        case TiePolicy::Kind::First: return "first";
        case TiePolicy::Kind::Random: return "random:" + std::to_string(policy.seed);
    }
    return "?";
}

TiePolicy tie_policy_from_string(const std::string& s) {
    if (s == "all") return TiePolicy::all();
    if (s == "first") return TiePolicy::first();
    if (s == "random") return TiePolicy::random(0);
    if (starts_with(s, "random:")) {
        int seed = 0;
        if (!parse_int(s.substr(7), seed) || seed < 0) throw Error("bad random seed: " + s);
        return TiePolicy::random(static_cast<uint64_t>(seed));
    }
    throw Error("unknown tie policy: " + s);
}

// ----------------------------------------------------------------- matching

namespace {

// Prep equality is enforced only when the sentence dependency itself carries a
// preposition slot; plain 2-argument obliques leave the rule's prep untested.
bool prep_compatible(const Constraint& c, const Dependency& d) {
    if (!c.prep || !d.prep) return true;
    return *c.prep == *d.prep;
}

std::optional<Rational> constraint_contribution(const Constraint& c, const IndexRecord& rec,
                                                const std::string& target_lemma,
                                                const Sentence& sent, const Lexicon& lexicon,
                                                const MatchConfig& config) {
    const Dependency& d = rec.dep;
    if (d.label != c.label) return std::nullopt;
    if (!d.is_arg_position(c.target_slot) || !d.is_arg_position(c.other_slot))
        return std::nullopt;
    if (slot_lemma(d.slot_at(c.target_slot), sent) != target_lemma) return std::nullopt;
    if (!prep_compatible(c, d)) return std::nullopt;

    std::string other = slot_lemma(d.slot_at(c.other_slot), sent);
    switch (c.test.kind) {
        case Constraint::Test::Kind::LemmaEquals:
            if (other == c.test.lemma) return Rational(1);
            return std::nullopt;
        case Constraint::Test::Kind::DomainIn: {
            Rational j = jaccard(c.test.domains, ambiguity_class(lexicon, other));
            if (j > Rational(0)) return j;
            return std::nullopt;
        }
        case Constraint::Test::Kind::AnimacyIs: {
            auto an = lexicon.animacy_of(other);
            if (an && (*an == c.test.animacy || c.test.animacy == Animacy::Any))
                return Rational(1);
            return std::nullopt;
        }
        case Constraint::Test::Kind::Unconstrained:
            return config.unconstrained_contribution;
    }
    return std::nullopt;
}

} // namespace

std::optional<MatchResult> match_rule(const Rule& rule, const Sentence& sentence,
                                      const Lexicon& lexicon, const MatchConfig& config) {
    MatchResult result;
    result.rule = &rule;
    result.sense_no = rule.sense_no;
    Rational total(0);
    for (const auto& c : rule.constraints) {
        std::optional<Rational> best;
        for (const auto& rec : sentence.records) {
            if (rec.provenance != Provenance::Original) continue;
            auto contrib =
                constraint_contribution(c, rec, rule.target_lemma, sentence, lexicon, config);
            if (contrib && (!best || *contrib > *best)) best = contrib;
        }
        if (best) {
            ++result.satisfied;
            total = total + *best;
        }
    }
    if (result.satisfied == 0) return std::nullopt;
    result.score = total / Rational(static_cast<long long>(rule.constraints.size()));
    return result;
}

// ------------------------------------------------------------ disambiguation

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string& s, uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable per-token draw: independent of iteration order and thread count.
size_t random_pick(const TiePolicy& policy, const std::string& doc, const std::string& sent,
                   int token_id, size_t n) {
    uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(doc, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(sent, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(std::to_string(token_id), h);
    return static_cast<size_t>(splitmix64(h ^ policy.seed) % n);
}

std::vector<SenseCandidate> rank_level(const std::vector<const Rule*>& rules,
                                       const LexEntry& entry, const Sentence& sentence,
                                       const Lexicon& lexicon, const MatchConfig& config,
                                       const std::string& level_name) {
    // Best (satisfied, score) pair per sense across the level's rules.
    std::map<int, SenseCandidate> per_sense;
    for (const Rule* rule : rules) {
        if (!entry.find_sense(rule->sense_no)) continue;
        auto m = match_rule(*rule, sentence, lexicon, config);
        if (!m) continue;
        auto it = per_sense.find(m->sense_no);
        bool better = it == per_sense.end() || m->satisfied > it->second.satisfied ||
                      (m->satisfied == it->second.satisfied && m->score > it->second.score);
        if (better)
            per_sense[m->sense_no] = SenseCandidate{m->sense_no, level_name, m->satisfied,
                                                    m->score};
    }
    std::vector<SenseCandidate> out;
    for (auto& [sense, cand] : per_sense) out.push_back(cand);
    std::stable_sort(out.begin(), out.end(), [](const SenseCandidate& a, const SenseCandidate& b) {
        if (a.satisfied != b.satisfied) return a.satisfied > b.satisfied;
        if (a.score != b.score) return a.score > b.score;
        return a.sense_no < b.sense_no;
    });
    return out;
}

void apply_policy(SenseAssignment& a) {
    if (a.candidates.size() <= 1) return;
    switch (a.policy.kind) {
        case TiePolicy::Kind::All: return;
        case TiePolicy::Kind::First:
            a.candidates.resize(1);
            return;
        case TiePolicy::Kind::Random: {
            size_t pick = random_pick(a.policy, a.doc_id, a.sentence_id, a.token_id,
                                      a.candidates.size());
            SenseCandidate kept = a.candidates[pick];
            a.candidates = {kept};
            return;
        }
    }
}

} // namespace

std::optional<SenseAssignment> disambiguate_token(const RuleDb& db, const Lexicon& lexicon,
                                                  const DependencyIndex& index,
                                                  const Sentence& sentence, const Token& token,
                                                  const TiePolicy& policy,
                                                  const MatchConfig& config) {
    const LexEntry* entry = lexicon.find(token.lemma, token.pos);
    if (!entry) return std::nullopt;

    SenseAssignment a;
    a.doc_id = index.doc_id;
    a.sentence_id = sentence.id;
    a.token_id = token.id;
    a.lemma = token.lemma;
    a.policy = policy;

    if (entry->senses.size() == 1) {
        a.candidates = {SenseCandidate{entry->senses.front().sense_no, "mono", 0, Rational(1)}};
        return a;
    }

    // Lexical rules first, then domain, then subcategorization.
    static const std::pair<RuleLevel, const char*> kLevels[] = {
        {RuleLevel::Word, "word"}, {RuleLevel::Domain, "domain"}, {RuleLevel::Subcat, "subcat"}};
    for (const auto& [level, name] : kLevels) {
        auto ranked =
            rank_level(db.rules_for(token.lemma, level), *entry, sentence, lexicon, config, name);
        if (!ranked.empty()) {
            a.candidates = std::move(ranked);
            apply_policy(a);
            return a;
        }
    }
    return std::nullopt;
}

std::vector<SenseAssignment> disambiguate_document(const RuleDb& db, const Lexicon& lexicon,
                                                   const DependencyIndex& index,
                                                   const TiePolicy& policy,
                                                   const MatchConfig& config) {
    std::vector<SenseAssignment> out;
    for (const auto& sentence : index.sentences) {
        for (const auto& token : sentence.tokens) {
            auto a = disambiguate_token(db, lexicon, index, sentence, token, policy, config);
            if (a) out.push_back(std::move(*a));
        }
    }
    return out;
}

// --------------------------------------------------------------- TSV format

namespace {
constexpr const char* kAssignHeader = "doc\tsent\ttoken\tlemma\tsenses\tlevel\tscore\tpolicy";
}

std::string serialize_assignments(const std::vector<SenseAssignment>& assignments) {
    std::vector<const SenseAssignment*> sorted;
    for (const auto& a : assignments) sorted.push_back(&a);
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto* x, const auto* y) {
        return std::tie(x->doc_id, x->sentence_id, x->token_id) <
               std::tie(y->doc_id, y->sentence_id, y->token_id);
    });
    std::string out = kAssignHeader;
    out += "\n";
    for (const auto* a : sorted) {
        std::string senses;
        for (size_t i = 0; i < a->candidates.size(); ++i) {
            if (i) senses += ",";
            senses += std::to_string(a->candidates[i].sense_no);
        }
        out += a->doc_id + "\t" + a->sentence_id + "\t" + std::to_string(a->token_id) + "\t" +
               a->lemma + "\t" + senses + "\t" + a->candidates.front().level + "\t" +
               a->candidates.front().score.to_fixed(4) + "\t" + to_string(a->policy) + "\n";
    }
    return out;
}

std::vector<SenseAssignment> parse_assignments(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kAssignHeader)
        throw SyntaxError(1, "missing assignments header");
    std::vector<SenseAssignment> out;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto f = split_char(lines[i], '\t');
        if (f.size() != 8)
            throw SyntaxError(static_cast<int>(i + 1), "expected 8 tab-separated columns");
        SenseAssignment a;
        a.doc_id = f[0];
        a.sentence_id = f[1];
        if (!parse_int(f[2], a.token_id))
            throw SyntaxError(static_cast<int>(i + 1), "bad token id: " + f[2]);
        a.lemma = f[3];
        Rational score;
        try {
            score = Rational::from_decimal(f[6]);
        } catch (const std::exception&) {
            throw SyntaxError(static_cast<int>(i + 1), "bad score: " + f[6]);
        }
        for (const auto& s : split_char(f[4], ',')) {
            int n = 0;
            if (!parse_int(s, n)) throw SyntaxError(static_cast<int>(i + 1), "bad sense: " + s);
            a.candidates.push_back(SenseCandidate{n, f[5], 0, Rational(0)});
        }
        if (a.candidates.empty())
            throw SyntaxError(static_cast<int>(i + 1), "assignment with no senses");
        a.candidates.front().score = score;
        try {
            a.policy = tie_policy_from_string(f[7]);
        } catch (const Error& e) {
            throw SyntaxError(static_cast<int>(i + 1), e.what());
        }
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace lexenrich
