#include "lexenrich/evalharness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "text_util.hpp"

namespace lexenrich {

using detail::parse_int;
using detail::split_char;
using detail::split_lines;
using detail::trim;

namespace {

constexpr const char* kGoldHeader = "doc\tsent\ttoken\tsense\tcategory";

std::string category_code(const std::optional<ErrorCategory>& c) {
    if (!c) return "-";
    switch (*c) {
        case ErrorCategory::Tokenization: return "tok";
        case ErrorCategory::Tagging: return "tag";
        case ErrorCategory::Parsing: return "parse";
        case ErrorCategory::Wsd: return "-";
    }
    return "-";
}

std::optional<ErrorCategory> category_from_code(const std::string& s, int line) {
    if (s == "-") return std::nullopt;
    if (s == "tok") return ErrorCategory::Tokenization;
    if (s == "tag") return ErrorCategory::Tagging;
    if (s == "parse") return ErrorCategory::Parsing;
    throw SyntaxError(line, "bad error category: " + s);
}

} // namespace

std::vector<GoldAnnotation> parse_gold(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kGoldHeader)
        throw SyntaxError(1, "missing gold header");
    std::vector<GoldAnnotation> out;
    std::set<std::tuple<std::string, std::string, int>> seen;
    for (size_t i = 1; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i + 1);
        if (trim(lines[i]).empty()) continue;
        auto f = split_char(lines[i], '\t');
        if (f.size() != 5) throw SyntaxError(line_no, "expected 5 tab-separated columns");
        GoldAnnotation g;
        g.doc_id = f[0];
        g.sentence_id = f[1];
        if (!parse_int(f[2], g.token_id)) throw SyntaxError(line_no, "bad token id: " + f[2]);
        if (!parse_int(f[3], g.sense_no) || g.sense_no <= 0)
            throw SyntaxError(line_no, "bad sense number: " + f[3]);
        g.category_override = category_from_code(f[4], line_no);
        if (!seen.insert({g.doc_id, g.sentence_id, g.token_id}).second)
            throw SyntaxError(line_no, "duplicate gold annotation for token");
        out.push_back(std::move(g));
    }
    return out;
}

std::string serialize_gold(const std::vector<GoldAnnotation>& gold) {
    std::string out = kGoldHeader;
    out += "\n";
    for (const auto& g : gold)
        out += g.doc_id + "\t" + g.sentence_id + "\t" + std::to_string(g.token_id) + "\t" +
               std::to_string(g.sense_no) + "\t" + category_code(g.category_override) + "\n";
    return out;
}

std::optional<Rational> EvalReport::precision() const {
    if (performed == 0) return std::nullopt;
    return Rational(correct, performed);
}

std::optional<Rational> EvalReport::recall() const {
    if (possible == 0) return std::nullopt;
    return Rational(correct, possible);
}

std::optional<Rational> EvalReport::noise() const {
    auto p = precision();
    if (!p) return std::nullopt;
    return Rational(1) - *p;
}

EvalReport score_run(const std::vector<SenseAssignment>& assignments,
                     const std::vector<GoldAnnotation>& gold) {
    std::map<std::tuple<std::string, std::string, int>, const GoldAnnotation*> by_token;
    for (const auto& g : gold) by_token[{g.doc_id, g.sentence_id, g.token_id}] = &g;

    EvalReport report;
    report.possible = static_cast<long>(gold.size());
    bool any_all_policy = false;
    long upper = 0;

    for (const auto& a : assignments) {
        auto it = by_token.find({a.doc_id, a.sentence_id, a.token_id});
        if (it == by_token.end()) {
            report.warnings.push_back("no gold annotation for " + a.doc_id + "/" +
                                      a.sentence_id + "/" + std::to_string(a.token_id) + " (" +
                                      a.lemma + "); excluded");
            continue;
        }
        const GoldAnnotation& g = *it->second;
        if (a.policy.kind == TiePolicy::Kind::All) any_all_policy = true;
        ++report.performed;

        bool gold_among = std::any_of(a.candidates.begin(), a.candidates.end(),
                                      [&](const SenseCandidate& c) {
                                          return c.sense_no == g.sense_no;
                                      });
        if (gold_among) ++upper;

        bool strict = a.candidates.size() == 1 && a.candidates.front().sense_no == g.sense_no;
        if (strict) {
            ++report.correct;
            continue;
        }
        ErrorCategory cat = g.category_override.value_or(ErrorCategory::Wsd);
        switch (cat) {
            case ErrorCategory::Tokenization: ++report.mistakes_tokenization; break;
            case ErrorCategory::Tagging: ++report.mistakes_tagging; break;
            case ErrorCategory::Parsing: ++report.mistakes_parsing; break;
            case ErrorCategory::Wsd: ++report.mistakes_wsd; break;
        }
    }
    if (any_all_policy) report.upper_bound_correct = upper;
    return report;
}

namespace {

std::string pct_of(long count, long denom) {
    if (denom == 0) return "n/a";
    return Rational(count, denom).to_percent() + "%";
}

std::string row(const std::string& label, const std::string& count, const std::string& pct) {
    std::string out = label;
    out.resize(24, ' ');
    std::string c = count;
    while (c.size() < 6) c.insert(c.begin(), ' ');
    std::string p = pct;
    while (p.size() < 9) p.insert(p.begin(), ' ');
    return out + c + p + "\n";
}

} // namespace

std::string format_report(const EvalReport& r) {
    std::string out;
    out += row("Tokenization mistakes", std::to_string(r.mistakes_tokenization),
               pct_of(r.mistakes_tokenization, r.performed));
    out += row("Tagging mistakes", std::to_string(r.mistakes_tagging),
               pct_of(r.mistakes_tagging, r.performed));
    out += row("Parsing mistakes", std::to_string(r.mistakes_parsing),
               pct_of(r.mistakes_parsing, r.performed));
    out += row("WSD mistakes", std::to_string(r.mistakes_wsd),
               pct_of(r.mistakes_wsd, r.performed));
    out += row("Precision", std::to_string(r.correct), pct_of(r.correct, r.performed));
    out += row("Recall", "", r.possible == 0 ? "n/a" : pct_of(r.correct, r.possible));
    if (r.upper_bound_correct)
        out += row("Upper-bound precision", std::to_string(*r.upper_bound_correct),
                   pct_of(*r.upper_bound_correct, r.performed));
    return out;
}

std::string report_to_tsv(const EvalReport& r) {
    std::ostringstream out;
    out << "metric\tvalue\n";
    out << "performed\t" << r.performed << "\n";
    out << "correct\t" << r.correct << "\n";
    out << "possible\t" << r.possible << "\n";
    out << "mistakes_tokenization\t" << r.mistakes_tokenization << "\n";
    out << "mistakes_tagging\t" << r.mistakes_tagging << "\n";
    out << "mistakes_parsing\t" << r.mistakes_parsing << "\n";
    out << "mistakes_wsd\t" << r.mistakes_wsd << "\n";
    auto ratio = [](const std::optional<Rational>& x) {
        return x ? x->to_percent() : std::string("n/a");
    };
    out << "precision\t" << ratio(r.precision()) << "\n";
    out << "recall\t" << ratio(r.recall()) << "\n";
    out << "noise\t" << ratio(r.noise()) << "\n";
    if (r.upper_bound_correct) out << "upper_bound_correct\t" << *r.upper_bound_correct << "\n";
    return out.str();
}

EvalReport parse_report_tsv(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "metric\tvalue")
        throw SyntaxError(1, "missing report header");
    EvalReport r;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto f = split_char(lines[i], '\t');
        if (f.size() != 2) throw SyntaxError(static_cast<int>(i + 1), "expected 2 columns");
        const std::string& key = f[0];
        if (key == "precision" || key == "recall" || key == "noise") continue;
        int v = 0;
        if (!parse_int(f[1], v))
            throw SyntaxError(static_cast<int>(i + 1), "bad count: " + f[1]);
        if (key == "performed") r.performed = v;
        else if (key == "correct") r.correct = v;
        else if (key == "possible") r.possible = v;
        else if (key == "mistakes_tokenization") r.mistakes_tokenization = v;
        else if (key == "mistakes_tagging") r.mistakes_tagging = v;
        else if (key == "mistakes_parsing") r.mistakes_parsing = v;
        else if (key == "mistakes_wsd") r.mistakes_wsd = v;
        else if (key == "upper_bound_correct") r.upper_bound_correct = v;
        else throw SyntaxError(static_cast<int>(i + 1), "unknown metric: " + key);
    }
    return r;
}

SanityResult enrichment_sanity(const std::vector<SenseAssignment>& assignments,
                               const std::vector<DependencyIndex>& enriched,
                               const Lexicon& lexicon,
                               const std::vector<GoldAnnotation>& gold) {
    (void)lexicon;
    std::map<std::tuple<std::string, std::string, int>, const GoldAnnotation*> by_token;
    for (const auto& g : gold) by_token[{g.doc_id, g.sentence_id, g.token_id}] = &g;
    std::map<std::string, const DependencyIndex*> by_doc;
    for (const auto& ix : enriched) by_doc[ix.doc_id] = &ix;

    SanityResult result{Rational(1), {}};
    long correct = 0, clean = 0;
    for (const auto& a : assignments) {
        auto git = by_token.find({a.doc_id, a.sentence_id, a.token_id});
        if (git == by_token.end()) continue;
        const GoldAnnotation& g = *git->second;
        bool strict = a.candidates.size() == 1 && a.candidates.front().sense_no == g.sense_no;
        if (!strict) continue;
        ++correct;

        bool ok = true;
        auto dit = by_doc.find(a.doc_id);
        if (dit != by_doc.end()) {
            const Sentence* sent = dit->second->find_sentence(a.sentence_id);
            if (sent) {
                for (const auto& rec : sent->records) {
                    if (!rec.source || rec.source->lemma != a.lemma) continue;
                    if (rec.source->sense_no != g.sense_no) {
                        ok = false;
                        result.violations.push_back(
                            "doc " + a.doc_id + " sent " + a.sentence_id + ": record " +
                            rec.dep.label + " sourced from " + rec.source->lemma + "#" +
                            std::to_string(rec.source->sense_no) + " but gold sense is " +
                            std::to_string(g.sense_no));
                    }
                }
            }
        }
        if (ok) ++clean;
    }
    result.value = correct == 0 ? Rational(1) : Rational(clean, correct);
    return result;
}

} // namespace lexenrich
