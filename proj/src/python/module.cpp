#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lexenrich/enrich.hpp"
#include "lexenrich/evalharness.hpp"
#include "lexenrich/lexicon.hpp"
#include "lexenrich/rulegen.hpp"
#include "lexenrich/wsd.hpp"

namespace py = pybind11;
using namespace lexenrich;

namespace {

TiePolicy make_policy(const std::string& name, uint64_t seed) {
    if (name == "all") return TiePolicy::all();
    if (name == "first") return TiePolicy::first();
    if (name == "random") return TiePolicy::random(seed);
    throw Error("unknown policy: " + name);
}

EnrichmentPlan make_plan(const std::vector<std::string>& levels, int max_per_token) {
    EnrichmentPlan plan;
    plan.levels.clear();
    for (const auto& name : levels) plan.levels.insert(enrich_level_from_string(name));
    plan.max_additions_per_token = max_per_token;
    return plan;
}

// (sent, label, arg1, prep, arg2, provenance, source) rows of one index.
py::list record_rows(const DependencyIndex& index) {
    py::list rows;
    for (const auto& sent : index.sentences) {
        for (const auto& rec : sent.records) {
            rows.append(py::make_tuple(
                sent.id, rec.dep.label, slot_lemma(rec.dep.arg1, sent),
                rec.dep.prep ? py::object(py::cast(*rec.dep.prep)) : py::none(),
                slot_lemma(rec.dep.arg2, sent), to_string(rec.provenance),
                rec.source ? py::object(py::cast(rec.source->lemma + "#" +
                                                 std::to_string(rec.source->sense_no)))
                           : py::none()));
        }
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dictionary-driven word sense disambiguation and dependency-index enrichment";

    py::register_exception<Error>(m, "LexenrichError");

    py::class_<Rational>(m, "Rational")
        .def(py::init<long long, long long>(), py::arg("num"), py::arg("den") = 1)
        .def_property_readonly("num", &Rational::num)
        .def_property_readonly("den", &Rational::den)
        .def("to_fixed", &Rational::to_fixed, py::arg("decimals"))
        .def("to_percent", &Rational::to_percent)
        .def("__float__", &Rational::to_double)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__repr__", [](const Rational& r) {
            return "Rational(" + std::to_string(r.num()) + ", " + std::to_string(r.den()) + ")";
        });

    py::class_<Lexicon>(m, "Lexicon")
        .def_property_readonly("entry_count",
                               [](const Lexicon& l) { return l.entries.size(); })
        .def_property_readonly("domain_inventory",
                               [](const Lexicon& l) { return l.domain_inventory; })
        .def("ambiguity_class",
             [](const Lexicon& l, const std::string& lemma) {
                 return ambiguity_class(l, lemma);
             })
        .def("polysemy", [](const Lexicon& l) { return polysemy(l); })
        .def("serialize", [](const Lexicon& l) { return serialize_lexicon(l); });

    py::class_<DependencyIndex>(m, "DependencyIndex")
        .def_readonly("doc_id", &DependencyIndex::doc_id)
        .def("records", &record_rows)
        .def("serialize", [](const DependencyIndex& ix) { return serialize_index(ix); })
        .def("__eq__", [](const DependencyIndex& a, const DependencyIndex& b) { return a == b; });

    py::class_<RuleDb>(m, "RuleDb")
        .def_property_readonly("size", &RuleDb::size)
        .def("serialize", [](const RuleDb& db) { return serialize_rules(db); });

    py::class_<SenseCandidate>(m, "SenseCandidate")
        .def_readonly("sense_no", &SenseCandidate::sense_no)
        .def_readonly("level", &SenseCandidate::level)
        .def_readonly("score", &SenseCandidate::score);

    py::class_<SenseAssignment>(m, "SenseAssignment")
        .def_readonly("doc_id", &SenseAssignment::doc_id)
        .def_readonly("sentence_id", &SenseAssignment::sentence_id)
        .def_readonly("token_id", &SenseAssignment::token_id)
        .def_readonly("lemma", &SenseAssignment::lemma)
        .def_readonly("candidates", &SenseAssignment::candidates)
        .def_property_readonly("senses", [](const SenseAssignment& a) {
            std::vector<int> out;
            for (const auto& c : a.candidates) out.push_back(c.sense_no);
            return out;
        });

    py::class_<GoldAnnotation>(m, "GoldAnnotation")
        .def_readonly("doc_id", &GoldAnnotation::doc_id)
        .def_readonly("sentence_id", &GoldAnnotation::sentence_id)
        .def_readonly("token_id", &GoldAnnotation::token_id)
        .def_readonly("sense_no", &GoldAnnotation::sense_no);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("performed", &EvalReport::performed)
        .def_readonly("correct", &EvalReport::correct)
        .def_readonly("possible", &EvalReport::possible)
        .def_readonly("mistakes_tokenization", &EvalReport::mistakes_tokenization)
        .def_readonly("mistakes_tagging", &EvalReport::mistakes_tagging)
        .def_readonly("mistakes_parsing", &EvalReport::mistakes_parsing)
        .def_readonly("mistakes_wsd", &EvalReport::mistakes_wsd)
        .def_readonly("warnings", &EvalReport::warnings)
        .def("precision", [](const EvalReport& r) { return r.precision(); })
        .def("recall", [](const EvalReport& r) { return r.recall(); })
        .def("noise", [](const EvalReport& r) { return r.noise(); });

    // lexicon
    m.def("parse_lexicon", &parse_lexicon_file, py::arg("path"));
    m.def("parse_lexicon_text", &parse_lexicon_text, py::arg("text"));
    m.def("serialize_lexicon", &serialize_lexicon);
    m.def("ambiguity_class", &ambiguity_class, py::arg("lexicon"), py::arg("lemma"));
    m.def("polysemy", &polysemy);

    // documents and indexes
    m.def("parse_documents", &parse_deps_file, py::arg("path"));
    m.def("parse_documents_text", &parse_deps_text, py::arg("text"));
    m.def("serialize_index", &serialize_index);
    m.def("serialize_indexes", &serialize_indexes);
    m.def("parse_index", &parse_index, py::arg("text"));
    m.def("deps_involving",
          [](const DependencyIndex& ix, const std::string& sent, int token) {
              py::list out;
              const Sentence* s = ix.find_sentence(sent);
              if (!s) throw UnknownSentence(sent);
              for (const auto& rec : deps_involving(ix, sent, token))
                  out.append(py::make_tuple(rec.dep.label, slot_lemma(rec.dep.arg1, *s),
                                            slot_lemma(rec.dep.arg2, *s)));
              return out;
          });

    // rules
    m.def(
        "compile_rules", [](const Lexicon& lex) { return compile_rules(lex); },
        py::arg("lexicon"));
    m.def("serialize_rules", &serialize_rules);
    m.def("parse_rules", &parse_rules, py::arg("text"));

    // disambiguation
    m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));
    m.def(
        "disambiguate",
        [](const RuleDb& db, const Lexicon& lex, const DependencyIndex& ix,
           const std::string& policy, uint64_t seed, const std::string& unconstrained) {
            MatchConfig config;
            config.unconstrained_contribution = Rational::from_decimal(unconstrained);
            return disambiguate_document(db, lex, ix, make_policy(policy, seed), config);
        },
        py::arg("rules"), py::arg("lexicon"), py::arg("index"), py::arg("policy") = "all",
        py::arg("seed") = 0, py::arg("unconstrained") = "0.5");
    m.def("serialize_assignments", &serialize_assignments);
    m.def("parse_assignments", &parse_assignments);

    // enrichment
    m.def(
        "enrich",
        [](const DependencyIndex& ix, const std::vector<SenseAssignment>& assignments,
           const Lexicon& lex, const std::vector<std::string>& levels, int max_per_token) {
            EnrichmentReport report;
            DependencyIndex out =
                enrich_document(ix, assignments, lex, make_plan(levels, max_per_token), &report);
            return py::make_tuple(out, report.to_text());
        },
        py::arg("index"), py::arg("assignments"), py::arg("lexicon"),
        py::arg("levels") = std::vector<std::string>{"lex", "mwe", "conv"},
        py::arg("max_per_token") = 0);
    m.def(
        "enrich_lexical",
        [](const DependencyIndex& ix, const std::vector<SenseAssignment>& assignments,
           const Lexicon& lex) { return enrich_lexical(ix, assignments, lex); },
        py::arg("index"), py::arg("assignments"), py::arg("lexicon"));
    m.def(
        "expand_word_to_mwe",
        [](const DependencyIndex& ix, const SenseAssignment& a, const std::string& mwe_text,
           const Lexicon& lex) {
            const Sentence* sent = ix.find_sentence(a.sentence_id);
            if (!sent) throw UnknownSentence(a.sentence_id);
            const LexEntry* entry = lex.find(a.lemma, sent->token(a.token_id).pos);
            if (!entry) throw Error("no lexicon entry for " + a.lemma);
            for (const auto& sense : entry->senses)
                for (const auto& syn : sense.synonyms)
                    if (syn.kind == SynonymSpec::Kind::MultiWord && syn.text == mwe_text)
                        return expand_word_to_mwe(ix, a, syn, lex);
            throw Error("no multi-word synonym '" + mwe_text + "' on " + a.lemma);
        },
        py::arg("index"), py::arg("assignment"), py::arg("mwe_text"), py::arg("lexicon"));
    m.def(
        "contract_mwe_to_word",
        [](const DependencyIndex& ix, const std::string& sent_id, const std::set<int>& occurrence,
           const std::string& synonym, const std::string& pos, const Lexicon& lex) {
            return contract_mwe_to_word(ix, sent_id, occurrence, synonym, pos_from_string(pos),
                                        lex);
        },
        py::arg("index"), py::arg("sentence_id"), py::arg("occurrence"), py::arg("synonym"),
        py::arg("pos"), py::arg("lexicon"));
    m.def(
        "converse_enrich",
        [](const DependencyIndex& ix, const SenseAssignment& a, const Lexicon& lex) {
            return converse_enrich(ix, a, lex);
        },
        py::arg("index"), py::arg("assignment"), py::arg("lexicon"));

    // queries
    m.def("parse_query", &parse_query, py::arg("text"));
    m.def(
        "match_query",
        [](const std::vector<DependencyIndex>& indexes, const std::string& query_text,
           const Lexicon& lex, const RuleDb& db) {
            py::list out;
            auto query = parse_query(query_text);
            for (const auto& match : match_query(indexes, query, lex, db)) {
                const Sentence* sent = nullptr;
                for (const auto& ix : indexes)
                    if (ix.doc_id == match.doc_id) sent = ix.find_sentence(match.sentence_id);
                out.append(py::make_tuple(match.pattern_index, match.doc_id, match.sentence_id,
                                          match.record.dep.label,
                                          slot_lemma(match.record.dep.arg1, *sent),
                                          slot_lemma(match.record.dep.arg2, *sent),
                                          to_string(match.record.provenance),
                                          match.class_fallback));
            }
            return out;
        },
        py::arg("indexes"), py::arg("query"), py::arg("lexicon"), py::arg("rules"));

    // evaluation
    m.def("parse_gold", &parse_gold, py::arg("text"));
    m.def("serialize_gold", &serialize_gold);
    m.def("score_run", &score_run, py::arg("assignments"), py::arg("gold"));
    m.def("format_report", &format_report);
    m.def("report_to_tsv", &report_to_tsv);
    m.def(
        "enrichment_sanity",
        [](const std::vector<SenseAssignment>& assignments,
           const std::vector<DependencyIndex>& enriched, const Lexicon& lex,
           const std::vector<GoldAnnotation>& gold) {
            SanityResult r = enrichment_sanity(assignments, enriched, lex, gold);
            return py::make_tuple(r.value, r.violations);
        },
        py::arg("assignments"), py::arg("enriched"), py::arg("lexicon"), py::arg("gold"));
}
