#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "lexenrich/deps.hpp"
#include "lexenrich/enrich.hpp"
#include "lexenrich/evalharness.hpp"
#include "lexenrich/lexicon.hpp"
#include "lexenrich/rulegen.hpp"
#include "lexenrich/wsd.hpp"

using namespace lexenrich;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

std::vector<DependencyIndex> load_docs(const std::vector<std::string>& paths) {
    std::vector<DependencyIndex> docs;
    for (const auto& path : paths) {
        auto part = parse_deps_file(path);
        docs.insert(docs.end(), part.begin(), part.end());
    }
    return docs;
}

TiePolicy make_policy(const std::string& name, std::optional<uint64_t> seed) {
    if (name == "all") return TiePolicy::all();
    if (name == "first") return TiePolicy::first();
    if (name == "random") {
        if (!seed) throw Error("--policy random requires --seed");
        return TiePolicy::random(*seed);
    }
    throw Error("unknown policy: " + name);
}

// Runs f over [0, n) on up to `jobs` threads; results land in slot order so
// output is canonical regardless of the thread count.
template <typename F>
void parallel_for(size_t n, int jobs, F f) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(jobs, static_cast<int>(n));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct DisambiguateArgs {
    std::string lexicon_path, rules_path, out_path;
    std::string policy = "all";
    std::optional<uint64_t> seed;
    std::string unconstrained = "0.5";
    int jobs = 1;
    std::vector<std::string> docs;
};

std::vector<SenseAssignment> run_disambiguation(const RuleDb& db, const Lexicon& lexicon,
                                                const std::vector<DependencyIndex>& docs,
                                                const TiePolicy& policy,
                                                const MatchConfig& config, int jobs) {
    std::vector<std::vector<SenseAssignment>> per_doc(docs.size());
    parallel_for(docs.size(), jobs, [&](size_t i) {
        per_doc[i] = disambiguate_document(db, lexicon, docs[i], policy, config);
    });
    std::vector<SenseAssignment> all;
    for (auto& v : per_doc) all.insert(all.end(), v.begin(), v.end());
    return all;
}

void check_assignments_match(const std::vector<DependencyIndex>& docs,
                             const std::vector<SenseAssignment>& assignments) {
    for (const auto& a : assignments) {
        const DependencyIndex* doc = nullptr;
        for (const auto& d : docs)
            if (d.doc_id == a.doc_id) doc = &d;
        if (!doc)
            throw ConsistencyError("assignment references unknown document " + a.doc_id);
        const Sentence* sent = doc->find_sentence(a.sentence_id);
        if (!sent)
            throw ConsistencyError("assignment references unknown sentence " + a.sentence_id +
                                   " of document " + a.doc_id);
        if (sent->token(a.token_id).lemma != a.lemma)
            throw ConsistencyError("assignment lemma mismatch for token " +
                                   std::to_string(a.token_id) + " in " + a.doc_id + "/" +
                                   a.sentence_id);
    }
}

int cmd_compile(const std::string& lexicon_path, const std::string& out_path) {
    Lexicon lexicon = parse_lexicon_file(lexicon_path);
    CompileReport report;
    RuleDb db = compile_rules(lexicon, &report);
    write_file(out_path, serialize_rules(db));
    std::cout << report.to_text();
    return 0;
}

int cmd_disambiguate(const DisambiguateArgs& args) {
    Lexicon lexicon = parse_lexicon_file(args.lexicon_path);
    RuleDb db = parse_rules(read_file(args.rules_path));
    auto docs = load_docs(args.docs);
    MatchConfig config;
    config.unconstrained_contribution = Rational::from_decimal(args.unconstrained);
    auto assignments = run_disambiguation(db, lexicon, docs,
                                          make_policy(args.policy, args.seed), config, args.jobs);
    write_file(args.out_path, serialize_assignments(assignments));
    return 0;
}

int cmd_enrich(const std::string& lexicon_path, const std::string& assignments_path,
               const std::vector<std::string>& level_names, const std::string& out_path,
               const std::string& report_path, int max_per_token, int jobs,
               const std::vector<std::string>& doc_paths) {
    Lexicon lexicon = parse_lexicon_file(lexicon_path);
    auto docs = load_docs(doc_paths);
    auto assignments = parse_assignments(read_file(assignments_path));
    check_assignments_match(docs, assignments);

    EnrichmentPlan plan;
    plan.levels.clear();
    for (const auto& name : level_names) plan.levels.insert(enrich_level_from_string(name));
    if (plan.levels.empty()) throw Error("--levels must enable at least one level");
    plan.max_additions_per_token = max_per_token;

    std::vector<EnrichmentReport> reports(docs.size());
    std::vector<DependencyIndex> enriched(docs.size());
    parallel_for(docs.size(), jobs, [&](size_t i) {
        enriched[i] = enrich_document(docs[i], assignments, lexicon, plan, &reports[i]);
    });

    write_file(out_path, serialize_indexes(enriched));
    EnrichmentReport merged;
    std::vector<size_t> order(docs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return docs[a].doc_id < docs[b].doc_id; });
    for (size_t i : order) {
        auto& r = reports[i];
        merged.tokens.insert(merged.tokens.end(), r.tokens.begin(), r.tokens.end());
        merged.skipped.insert(merged.skipped.end(), r.skipped.begin(), r.skipped.end());
    }
    if (report_path.empty()) std::cout << merged.to_text();
    else write_file(report_path, merged.to_text());
    return 0;
}

int cmd_evaluate(const std::string& assignments_path, const std::string& gold_path,
                 const std::string& tsv_out) {
    auto assignments = parse_assignments(read_file(assignments_path));
    auto gold = parse_gold(read_file(gold_path));
    if (gold.empty()) throw Error("gold file has no annotations");
    EvalReport report = score_run(assignments, gold);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << format_report(report);
    if (!tsv_out.empty()) write_file(tsv_out, report_to_tsv(report));
    return 0;
}

int cmd_query(const std::string& index_path, const std::string& lexicon_path,
              const std::string& rules_path, const std::string& query_path) {
    Lexicon lexicon = parse_lexicon_file(lexicon_path);
    RuleDb db = rules_path.empty() ? RuleDb() : parse_rules(read_file(rules_path));
    auto indexes = parse_index(read_file(index_path));
    auto query = parse_query(read_file(query_path));
    auto matches = match_query(indexes, query, lexicon, db);
    for (const auto& m : matches) {
        const Sentence* sent = nullptr;
        for (const auto& ix : indexes)
            if (ix.doc_id == m.doc_id) sent = ix.find_sentence(m.sentence_id);
        std::cout << "match\t" << (m.pattern_index + 1) << "\t" << m.doc_id << "\t"
                  << m.sentence_id << "\t" << m.record.dep.label << "\t"
                  << slot_lemma(m.record.dep.arg1, *sent) << "\t"
                  << (m.record.dep.prep ? *m.record.dep.prep : "-") << "\t"
                  << slot_lemma(m.record.dep.arg2, *sent) << "\t"
                  << to_string(m.record.provenance) << "\t"
                  << (m.record.source ? m.record.source->lemma + "#" +
                                            std::to_string(m.record.source->sense_no)
                                      : "-")
                  << "\t" << (m.class_fallback ? "class-fallback" : "exact") << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dictionary-driven word sense disambiguation and index enrichment"};
    app.set_version_flag("--version", "lexenrich 0.1.0");
    app.require_subcommand(1);

    // compile-rules
    auto* compile = app.add_subcommand("compile-rules", "Compile the disambiguation rule "
                                                        "database from a lexicon");
    std::string lexicon_path, out_path;
    compile->add_option("--lexicon", lexicon_path, "Lexicon file")->required();
    compile->add_option("--out", out_path, "Output rule file")->required();

    // disambiguate
    auto* dis = app.add_subcommand("disambiguate", "Assign senses to the tokens of parsed "
                                                   "documents");
    DisambiguateArgs dargs;
    uint64_t dis_seed = 0;
    bool dis_seed_set = false;
    dis->add_option("--lexicon", dargs.lexicon_path, "Lexicon file")->required();
    dis->add_option("--rules", dargs.rules_path, "Compiled rule file")->required();
    dis->add_option("--policy", dargs.policy, "Tie policy: all|first|random");
    dis->add_option("--seed", dis_seed, "Seed for --policy random")
        ->each([&](const std::string&) { dis_seed_set = true; });
    dis->add_option("--unconstrained", dargs.unconstrained,
                    "Score contribution of an unconstrained test (default 0.5)");
    dis->add_option("--jobs", dargs.jobs, "Documents processed in parallel");
    dis->add_option("--out", dargs.out_path, "Output assignments TSV")->required();
    dis->add_option("docs", dargs.docs, "Document files")->required();

    // enrich
    auto* enr = app.add_subcommand("enrich", "Add contextual synonyms, expressions and "
                                             "converse dependencies to the index");
    std::string enr_lexicon, enr_assignments, enr_out, enr_report;
    std::vector<std::string> enr_levels = {"lex", "mwe", "conv"};
    std::vector<std::string> enr_docs;
    int enr_max = 0, enr_jobs = 1;
    enr->add_option("--lexicon", enr_lexicon, "Lexicon file")->required();
    enr->add_option("--assignments", enr_assignments, "Assignments TSV")->required();
    enr->add_option("--levels", enr_levels, "Enrichment levels: lex,mwe,conv")
        ->delimiter(',')
        ->expected(0, 3);
    enr->add_option("--max-per-token", enr_max, "Cap on additions per token (0 = unlimited)");
    enr->add_option("--jobs", enr_jobs, "Documents processed in parallel");
    enr->add_option("--out", enr_out, "Output enriched index TSV")->required();
    enr->add_option("--report", enr_report, "Enrichment report path (default: stdout)");
    enr->add_option("docs", enr_docs, "Document files")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Score assignments against gold annotations");
    std::string eval_assignments, eval_gold, eval_tsv;
    eval->add_option("--gold", eval_gold, "Gold TSV")->required();
    eval->add_option("--out", eval_tsv, "Machine-readable report TSV");
    eval->add_option("assignments", eval_assignments, "Assignments TSV")->required();

    // query
    auto* query = app.add_subcommand("query", "Match dependency patterns against an "
                                              "enriched index");
    std::string q_index, q_lexicon, q_rules, q_file;
    query->add_option("--index", q_index, "Enriched index TSV")->required();
    query->add_option("--lexicon", q_lexicon, "Lexicon file")->required();
    query->add_option("--rules", q_rules, "Compiled rule file");
    query->add_option("queryfile", q_file, "Query pattern file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compile->parsed()) return cmd_compile(lexicon_path, out_path);
        if (dis->parsed()) {
            if (dis_seed_set) dargs.seed = dis_seed;
            if (dargs.policy == "random" && !dis_seed_set) throw Error("--policy random requires --seed");
            return cmd_disambiguate(dargs);
        }
        if (enr->parsed())
            return cmd_enrich(enr_lexicon, enr_assignments, enr_levels, enr_out, enr_report,
                              enr_max, enr_jobs, enr_docs);
        if (eval->parsed()) return cmd_evaluate(eval_assignments, eval_gold, eval_tsv);
        if (query->parsed()) return cmd_query(q_index, q_lexicon, q_rules, q_file);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
