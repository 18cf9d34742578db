#include <doctest.h>

#include "support.hpp"

using testsupport::CommandResult;
using testsupport::TempDir;
using testsupport::cli_path;
using testsupport::fixture_path;
using testsupport::read_file;
using testsupport::run_command;

namespace {

std::string q(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST_CASE("compile-rules writes the database and prints per-level counts") {
    TempDir tmp;
    auto r = run_command(cli_path() + " compile-rules --lexicon " + q(fixture_path("minilex.lex")) +
                         " --out " + q(tmp.file("rules.txt")));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("word rules:   11") != std::string::npos);
    CHECK(r.output.find("domain rules: 11") != std::string::npos);
    CHECK(r.output.find("subcat rules: 6") != std::string::npos);
    CHECK(read_file(tmp.file("rules.txt")) ==
          read_file(fixture_path("golden/rules.golden")));
}

TEST_CASE("compile-rules on an empty lexicon writes an empty database") {
    TempDir tmp;
    tmp.write("empty.lex", "");
    auto r = run_command(cli_path() + " compile-rules --lexicon " + q(tmp.file("empty.lex")) +
                         " --out " + q(tmp.file("rules.txt")));
    CHECK(r.exit_code == 0);
    CHECK(read_file(tmp.file("rules.txt")) == "#RULES 1\n");
}

TEST_CASE("malformed lexicon exits 1 with a line diagnostic") {
    TempDir tmp;
    tmp.write("bad.lex", "ENTRY a POS=V\nSENSE 1\nWHAT IS this\n");
    auto r = run_command(cli_path() + " compile-rules --lexicon " + q(tmp.file("bad.lex")) +
                         " --out " + q(tmp.file("rules.txt")));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("line 3") != std::string::npos);
}

TEST_CASE("disambiguate is deterministic under a fixed seed") {
    TempDir tmp;
    std::string compile = cli_path() + " compile-rules --lexicon " +
                          q(fixture_path("minilex.lex")) + " --out " + q(tmp.file("rules.txt"));
    REQUIRE(run_command(compile).exit_code == 0);
    std::string base = cli_path() + " disambiguate --lexicon " + q(fixture_path("minilex.lex")) +
                       " --rules " + q(tmp.file("rules.txt")) +
                       " --policy random --seed 7 " + q(fixture_path("docs/subcat.deps"));
    REQUIRE(run_command(base + " --out " + q(tmp.file("a1.tsv"))).exit_code == 0);
    REQUIRE(run_command(base + " --out " + q(tmp.file("a2.tsv"))).exit_code == 0);
    CHECK(read_file(tmp.file("a1.tsv")) == read_file(tmp.file("a2.tsv")));

    // random policy without a seed is a usage error
    auto r = run_command(cli_path() + " disambiguate --lexicon " +
                         q(fixture_path("minilex.lex")) + " --rules " + q(tmp.file("rules.txt")) +
                         " --policy random --out " + q(tmp.file("a3.tsv")) + " " +
                         q(fixture_path("docs/subcat.deps")));
    CHECK(r.exit_code == 1);
}

TEST_CASE("empty document produces a header-only assignments file") {
    TempDir tmp;
    tmp.write("empty.deps", "#DOC vide\n");
    REQUIRE(run_command(cli_path() + " compile-rules --lexicon " + q(fixture_path("minilex.lex")) +
                        " --out " + q(tmp.file("rules.txt")))
                .exit_code == 0);
    auto r = run_command(cli_path() + " disambiguate --lexicon " + q(fixture_path("minilex.lex")) +
                         " --rules " + q(tmp.file("rules.txt")) + " --out " +
                         q(tmp.file("a.tsv")) + " " + q(tmp.file("empty.deps")));
    CHECK(r.exit_code == 0);
    CHECK(read_file(tmp.file("a.tsv")) ==
          "doc\tsent\ttoken\tlemma\tsenses\tlevel\tscore\tpolicy\n");
}

TEST_CASE("the full pipeline composes on the shipped fixtures") {
    TempDir tmp;
    std::string lex = q(fixture_path("minilex.lex"));
    REQUIRE(run_command(cli_path() + " compile-rules --lexicon " + lex + " --out " +
                        q(tmp.file("rules.txt")))
                .exit_code == 0);
    REQUIRE(run_command(cli_path() + " disambiguate --lexicon " + lex + " --rules " +
                        q(tmp.file("rules.txt")) + " --out " + q(tmp.file("a.tsv")) + " " +
                        q(fixture_path("docs/temperature.deps")))
                .exit_code == 0);
    REQUIRE(run_command(cli_path() + " enrich --lexicon " + lex + " --assignments " +
                        q(tmp.file("a.tsv")) + " --levels lex --out " + q(tmp.file("ix.tsv")) +
                        " --report " + q(tmp.file("report.txt")) + " " +
                        q(fixture_path("docs/temperature.deps")))
                .exit_code == 0);
    CHECK(read_file(tmp.file("ix.tsv")) ==
          read_file(fixture_path("golden/temperature_index.golden")));
    CHECK(read_file(tmp.file("report.txt")).find("grimper\t2\t0\t0") != std::string::npos);

    auto r = run_command(cli_path() + " query --index " + q(tmp.file("ix.tsv")) +
                         " --lexicon " + lex + " --rules " + q(tmp.file("rules.txt")) + " " +
                         q(fixture_path("queries/temperature.q")));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("augmenter") != std::string::npos);
    CHECK(r.output.find("exact") != std::string::npos);

    // idempotent outputs: rerunning enrich writes identical bytes
    REQUIRE(run_command(cli_path() + " enrich --lexicon " + lex + " --assignments " +
                        q(tmp.file("a.tsv")) + " --levels lex --out " + q(tmp.file("ix2.tsv")) +
                        " --report /dev/null " + q(fixture_path("docs/temperature.deps")))
                .exit_code == 0);
    CHECK(read_file(tmp.file("ix.tsv")) == read_file(tmp.file("ix2.tsv")));
}

TEST_CASE("enrich validates levels and cross-file consistency") {
    TempDir tmp;
    std::string lex = q(fixture_path("minilex.lex"));
    REQUIRE(run_command(cli_path() + " compile-rules --lexicon " + lex + " --out " +
                        q(tmp.file("rules.txt")))
                .exit_code == 0);
    REQUIRE(run_command(cli_path() + " disambiguate --lexicon " + lex + " --rules " +
                        q(tmp.file("rules.txt")) + " --out " + q(tmp.file("a.tsv")) + " " +
                        q(fixture_path("docs/temperature.deps")))
                .exit_code == 0);

    auto bad_levels = run_command(cli_path() + " enrich --lexicon " + lex + " --assignments " +
                                  q(tmp.file("a.tsv")) + " --levels --out " +
                                  q(tmp.file("ix.tsv")) + " " +
                                  q(fixture_path("docs/temperature.deps")));
    CHECK(bad_levels.exit_code != 0);

    // assignments from the temperature document against the manuscript one
    auto mismatch = run_command(cli_path() + " enrich --lexicon " + lex + " --assignments " +
                                q(tmp.file("a.tsv")) + " --levels lex --out " +
                                q(tmp.file("ix.tsv")) + " " +
                                q(fixture_path("docs/manuscrit.deps")));
    CHECK(mismatch.exit_code == 1);
}

TEST_CASE("evaluate prints the table and writes the TSV twin") {
    TempDir tmp;
    tmp.write("gold.tsv", "doc\tsent\ttoken\tsense\tcategory\n"
                          "d\t1\t1\t1\t-\n"
                          "d\t1\t2\t1\t-\n");
    tmp.write("a.tsv", "doc\tsent\ttoken\tlemma\tsenses\tlevel\tscore\tpolicy\n"
                       "d\t1\t1\tx\t1\tword\t1.0000\tfirst\n"
                       "d\t1\t2\ty\t2\tword\t1.0000\tfirst\n");
    auto r = run_command(cli_path() + " evaluate --gold " + q(tmp.file("gold.tsv")) + " --out " +
                         q(tmp.file("twin.tsv")) + " " + q(tmp.file("a.tsv")));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Precision                    1   50.00%") != std::string::npos);
    CHECK(read_file(tmp.file("twin.tsv")).find("precision\t50.00") != std::string::npos);

    tmp.write("empty_gold.tsv", "doc\tsent\ttoken\tsense\tcategory\n");
    auto empty = run_command(cli_path() + " evaluate --gold " + q(tmp.file("empty_gold.tsv")) +
                             " " + q(tmp.file("a.tsv")));
    CHECK(empty.exit_code == 1);
}

TEST_CASE("query falls back to the class and exits 0 on no match") {
    TempDir tmp;
    std::string lex = q(fixture_path("minilex.lex"));
    REQUIRE(run_command(cli_path() + " compile-rules --lexicon " + lex + " --out " +
                        q(tmp.file("rules.txt")))
                .exit_code == 0);
    REQUIRE(run_command(cli_path() + " disambiguate --lexicon " + lex + " --rules " +
                        q(tmp.file("rules.txt")) + " --out " + q(tmp.file("a8.tsv")) + " " +
                        q(fixture_path("docs/cadeau.deps")))
                .exit_code == 0);
    REQUIRE(run_command(cli_path() + " enrich --lexicon " + lex + " --assignments " +
                        q(tmp.file("a8.tsv")) + " --levels conv --out " + q(tmp.file("ix8.tsv")) +
                        " --report /dev/null " + q(fixture_path("docs/cadeau.deps")))
                .exit_code == 0);

    auto fallback = run_command(cli_path() + " query --index " + q(tmp.file("ix8.tsv")) +
                                " --lexicon " + lex + " --rules " + q(tmp.file("rules.txt")) +
                                " " + q(fixture_path("queries/fallback.q")));
    CHECK(fallback.exit_code == 0);
    CHECK(fallback.output.find("class-fallback") != std::string::npos);
    CHECK(fallback.output.find("offrir") != std::string::npos);

    tmp.write("nomatch.q", "D SUBJECT manuscrit papa\n");
    auto none = run_command(cli_path() + " query --index " + q(tmp.file("ix8.tsv")) +
                            " --lexicon " + lex + " --rules " + q(tmp.file("rules.txt")) + " " +
                            q(tmp.file("nomatch.q")));
    CHECK(none.exit_code == 0);
    CHECK(none.output.empty());
}

TEST_CASE("--jobs does not change the output bytes") {
    TempDir tmp;
    std::string lex = q(fixture_path("minilex.lex"));
    REQUIRE(run_command(cli_path() + " compile-rules --lexicon " + lex + " --out " +
                        q(tmp.file("rules.txt")))
                .exit_code == 0);
    std::string docs;
    for (const char* name : {"temperature.deps", "alpiniste.deps", "manuscrit.deps", "cadeau.deps",
                             "escadrille.deps", "drift.deps", "subcat.deps"})
        docs += " " + q(fixture_path(std::string("docs/") + name));
    std::string base = cli_path() + " disambiguate --lexicon " + lex + " --rules " +
                       q(tmp.file("rules.txt")) + docs;
    REQUIRE(run_command(base + " --jobs 1 --out " + q(tmp.file("j1.tsv"))).exit_code == 0);
    REQUIRE(run_command(base + " --jobs 4 --out " + q(tmp.file("j4.tsv"))).exit_code == 0);
    CHECK(read_file(tmp.file("j1.tsv")) == read_file(tmp.file("j4.tsv")));

    std::string enrich_base = cli_path() + " enrich --lexicon " + lex + " --assignments " +
                              q(tmp.file("j1.tsv")) + " --levels lex,mwe,conv --report /dev/null" +
                              docs;
    REQUIRE(run_command(enrich_base + " --jobs 1 --out " + q(tmp.file("e1.tsv"))).exit_code == 0);
    REQUIRE(run_command(enrich_base + " --jobs 4 --out " + q(tmp.file("e4.tsv"))).exit_code == 0);
    CHECK(read_file(tmp.file("e1.tsv")) == read_file(tmp.file("e4.tsv")));
}
