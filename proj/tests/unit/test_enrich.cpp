#include <doctest.h>

#include <algorithm>

#include "lexenrich/enrich.hpp"
#include "support.hpp"

using namespace lexenrich;

namespace {

Lexicon fixture_lexicon() {
    return parse_lexicon_file(testsupport::fixture_path("minilex.lex"));
}

DependencyIndex fixture_doc(const std::string& name) {
    return parse_deps_file(testsupport::fixture_path("docs/" + name))[0];
}

std::vector<SenseAssignment> assign(const Lexicon& lex, const RuleDb& db,
                                    const DependencyIndex& doc,
                                    TiePolicy policy = TiePolicy::all()) {
    return disambiguate_document(db, lex, doc, policy);
}

int count_with(const DependencyIndex& ix, Provenance prov) {
    int n = 0;
    for (const auto& s : ix.sentences)
        for (const auto& r : s.records)
            if (r.provenance == prov) ++n;
    return n;
}

bool has_record(const DependencyIndex& ix, const std::string& label, const std::string& a1,
                const std::string& a2, Provenance prov) {
    for (const auto& s : ix.sentences)
        for (const auto& r : s.records) {
            if (r.provenance != prov || r.dep.label != label) continue;
            if (slot_lemma(r.dep.arg1, s) == a1 && slot_lemma(r.dep.arg2, s) == a2) return true;
        }
    return false;
}

} // namespace

TEST_CASE("lexical enrichment adds one copy per synonym") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex temp_doc = fixture_doc("temperature.deps");
    auto assignments = assign(lex, db, temp_doc);
    EnrichmentReport report;
    DependencyIndex out = enrich_lexical(temp_doc, assignments, lex, &report);

    CHECK(count_with(out, Provenance::EnrichedLexical) == 2);
    CHECK(has_record(out, "SUBJECT", "monter", "température", Provenance::EnrichedLexical));
    CHECK(has_record(out, "SUBJECT", "augmenter", "température", Provenance::EnrichedLexical));
    CHECK(original_records(out) == original_records(temp_doc));

    // synthetic tokens sit above the original id range
    for (const auto& s : out.sentences)
        for (const auto& r : s.records)
            if (r.provenance == Provenance::EnrichedLexical)
                CHECK(r.dep.arg1.token_id > 2);
}

TEST_CASE("a sense with no synonyms leaves the index unchanged") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    // température is monosemous with zero synonyms
    auto docs = parse_deps_text("#DOC d\n#SENT 1\nT 1 température N\n");
    auto assignments = assign(lex, db, docs[0]);
    REQUIRE(assignments.size() == 1);
    DependencyIndex out = enrich_lexical(docs[0], assignments, lex);
    CHECK(out == docs[0]);
}

TEST_CASE("lexical additions = dependencies x synonyms") {
    // one token in 2 dependencies with 1 synonym -> exactly 2 additions
    Lexicon lex = parse_lexicon_text("ENTRY courir POS=V\nSENSE 1\n"
                                     "  DEP SUBJECT(courir,chien)\n  SYN trotter\n"
                                     "ENTRY chien POS=N\nANIM animal\nSENSE 1 DOMAIN=ZOO\n");
    RuleDb db = compile_rules(lex);
    auto docs = parse_deps_text("#DOC d\n#SENT 1\nT 1 chien N\nT 2 courir V\nT 3 vite ADV\n"
                                "D SUBJECT 2 1\nD VMOD 2 3\n");
    auto assignments = assign(lex, db, docs[0]);
    DependencyIndex out = enrich_lexical(docs[0], assignments, lex);
    int involved = static_cast<int>(deps_involving(docs[0], "1", 2).size());
    CHECK(involved == 2);
    CHECK(count_with(out, Provenance::EnrichedLexical) == involved * 1);
    CHECK(has_record(out, "VMOD", "trotter", "vite", Provenance::EnrichedLexical));
}

TEST_CASE("expansion instantiates the manuscript template") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex ms_doc = fixture_doc("manuscrit.deps");
    auto assignments = assign(lex, db, ms_doc);

    const SenseAssignment* editer = nullptr;
    for (const auto& a : assignments)
        if (a.lemma == "éditer") editer = &a;
    REQUIRE(editer != nullptr);
    const SynonymSpec* mwe = nullptr;
    for (const auto& syn : lex.find("éditer", Pos::V)->senses[0].synonyms)
        if (syn.kind == SynonymSpec::Kind::MultiWord) mwe = &syn;
    REQUIRE(mwe != nullptr);

    EnrichmentReport report;
    DependencyIndex out = expand_word_to_mwe(ms_doc, *editer, *mwe, lex, &report);
    CHECK(count_with(out, Provenance::EnrichedMwe) == 4);
    CHECK(has_record(out, "SUBJECT", "établir", "spécialiste", Provenance::EnrichedMwe));
    CHECK(has_record(out, "OBJECT", "établir", "édition", Provenance::EnrichedMwe));
    CHECK(has_record(out, "EPITHET", "édition", "critique", Provenance::EnrichedMwe));
    CHECK(has_record(out, "PP", "édition", "manuscrit", Provenance::EnrichedMwe));
    CHECK(report.skipped.empty());

    // the PP record keeps the original manuscrit token and the template prep
    for (const auto& r : out.sentences[0].records)
        if (r.dep.label == "PP") {
            CHECK(r.dep.prep == "de");
            CHECK(r.dep.arg2.token_id == 3);
        }
}

TEST_CASE("expansion is all-or-nothing when a placeholder cannot bind") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    // same sentence without the OBJECT dependency: PP(édition,de,?) cannot bind
    auto docs = parse_deps_text("#DOC manuscrit\n#SENT 1\nT 1 spécialiste N\nT 2 éditer V\n"
                                "T 3 manuscrit N\nD SUBJECT 2 1\n");
    auto assignments = assign(lex, db, docs[0]);
    const SenseAssignment* editer = nullptr;
    for (const auto& a : assignments)
        if (a.lemma == "éditer") editer = &a;
    REQUIRE(editer != nullptr);
    REQUIRE(editer->candidates[0].sense_no == 1); // still selected via SUBJECT

    const SynonymSpec* mwe = nullptr;
    for (const auto& syn : lex.find("éditer", Pos::V)->senses[0].synonyms)
        if (syn.kind == SynonymSpec::Kind::MultiWord) mwe = &syn;

    EnrichmentReport report;
    DependencyIndex out = expand_word_to_mwe(docs[0], *editer, *mwe, lex, &report);
    CHECK(count_with(out, Provenance::EnrichedMwe) == 0);
    CHECK(out == docs[0]);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0].reason == "unbound-placeholder");
}

TEST_CASE("a template without placeholders is added verbatim") {
    Lexicon lex = parse_lexicon_text(
        "ENTRY échouer POS=V\nSENSE 1\n  DEP SUBJECT(échouer,projet)\n"
        "  MWE faire long feu :: OBJECT(faire,feu); EPITHET(feu,long)\n"
        "ENTRY projet POS=N\nANIM inanimate\nSENSE 1 DOMAIN=SOC\n");
    RuleDb db = compile_rules(lex);
    auto docs = parse_deps_text("#DOC d\n#SENT 1\nT 1 projet N\nT 2 échouer V\nD SUBJECT 2 1\n");
    auto assignments = assign(lex, db, docs[0]);
    const auto& mwe = lex.find("échouer", Pos::V)->senses[0].synonyms[0];
    DependencyIndex out = expand_word_to_mwe(docs[0], assignments[1], mwe, lex);
    CHECK(count_with(out, Provenance::EnrichedMwe) == 2);
    CHECK(has_record(out, "OBJECT", "faire", "feu", Provenance::EnrichedMwe));
    CHECK(has_record(out, "EPITHET", "feu", "long", Provenance::EnrichedMwe));
}

TEST_CASE("contraction replaces the expression by the synonym") {
    Lexicon lex = fixture_lexicon();
    // Le spécialiste établit l'édition critique du manuscrit.
    auto docs = parse_deps_text("#DOC d\n#SENT 1\n"
                                "T 1 spécialiste N\nT 2 établir V\nT 3 édition N\n"
                                "T 4 critique A\nT 5 manuscrit N\n"
                                "D SUBJECT 2 1\nD OBJECT 2 3\nD EPITHET 3 4\nD PP 3 de 5\n");
    DependencyIndex out =
        contract_mwe_to_word(docs[0], "1", {2, 3, 4}, "éditer", Pos::V, lex);

    // SUBJECT(établir,spécialiste): one inside token with POS V -> copied.
    CHECK(has_record(out, "SUBJECT", "éditer", "spécialiste", Provenance::EnrichedMwe));
    // EPITHET(édition,critique): both arguments inside -> never copied.
    CHECK(!has_record(out, "EPITHET", "éditer", "critique", Provenance::EnrichedMwe));
    CHECK(!has_record(out, "EPITHET", "édition", "éditer", Provenance::EnrichedMwe));
    // OBJECT(établir,édition) has both arguments inside as well.
    // PP(édition,de,manuscrit): inside token édition has POS N != V -> eliminated.
    CHECK(count_with(out, Provenance::EnrichedMwe) == 1);

    // the licensing sense is resolved from the covering template
    for (const auto& r : out.sentences[0].records)
        if (r.provenance == Provenance::EnrichedMwe) {
            REQUIRE(r.source.has_value());
            CHECK(r.source->lemma == "éditer");
            CHECK(r.source->sense_no == 1);
        }
}

TEST_CASE("contraction inverts the expansion it mirrors") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex ms_doc = fixture_doc("manuscrit.deps");
    auto assignments = assign(lex, db, ms_doc);
    EnrichmentPlan plan;
    plan.levels = {EnrichLevel::Mwe};
    DependencyIndex expanded = enrich_document(ms_doc, assignments, lex, plan);

    // locate the synthetic établir/édition/critique tokens
    std::set<int> occurrence;
    for (const auto& t : expanded.sentences[0].tokens)
        if (t.lemma == "établir" || t.lemma == "édition" || t.lemma == "critique")
            occurrence.insert(t.id);
    REQUIRE(occurrence.size() == 3);

    DependencyIndex back =
        contract_mwe_to_word(expanded, "1", occurrence, "éditer", Pos::V, lex);
    // Only SUBJECT(établir,spécialiste) has exactly one occurrence token with
    // the verb POS; its copy restores the original subject dependency.
    CHECK(has_record(back, "SUBJECT", "éditer", "spécialiste", Provenance::EnrichedMwe));
    CHECK(count_with(back, Provenance::EnrichedMwe) == 4 + 1);
}

TEST_CASE("converse enrichment remaps the roles onto recevoir") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex gift_doc = fixture_doc("cadeau.deps");
    auto assignments = assign(lex, db, gift_doc);
    const SenseAssignment* offrir = nullptr;
    for (const auto& a : assignments)
        if (a.lemma == "offrir") offrir = &a;
    REQUIRE(offrir != nullptr);

    DependencyIndex out = converse_enrich(gift_doc, *offrir, lex);
    CHECK(count_with(out, Provenance::EnrichedConverse) == 3);
    CHECK(has_record(out, "SUBJECT", "recevoir", "fille", Provenance::EnrichedConverse));
    CHECK(has_record(out, "OBJECT", "recevoir", "cadeau", Provenance::EnrichedConverse));
    CHECK(has_record(out, "OBLIQUE-DE", "recevoir", "papa", Provenance::EnrichedConverse));
    for (const auto& r : out.sentences[0].records)
        if (r.dep.label == "OBLIQUE-DE") {
            CHECK(r.dep.prep == "de");
            CHECK(r.dep.arg2.token_id == 1); // original papa token
        }
}

TEST_CASE("converse enrichment needs a class code and a target") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    // éditer sense 1 has no class code -> unchanged
    DependencyIndex ms_doc = fixture_doc("manuscrit.deps");
    auto assignments = assign(lex, db, ms_doc);
    for (const auto& a : assignments) {
        DependencyIndex out = converse_enrich(ms_doc, a, lex);
        CHECK(out == ms_doc);
    }

    // correspondence without any verb of the target class -> unchanged + report
    Lexicon small = parse_lexicon_text("ENTRY vendre POS=V\nSENSE 1 CLASS=D2a\n"
                                       "  DEP OBJECT(vendre,produit)\n"
                                       "ENTRY produit POS=N\nSENSE 1 DOMAIN=ECO\n"
                                       "CORR D2a D2c OBJECT=OBJECT,SUBJECT=OBLIQUE prep=à\n");
    RuleDb small_db = compile_rules(small);
    auto docs = parse_deps_text("#DOC d\n#SENT 1\nT 1 marchand N\nT 2 vendre V\nT 3 produit N\n"
                                "D SUBJECT 2 1\nD OBJECT 2 3\n");
    auto small_assign = disambiguate_document(small_db, small, docs[0], TiePolicy::all());
    EnrichmentReport report;
    const SenseAssignment* vendre = nullptr;
    for (const auto& a : small_assign)
        if (a.lemma == "vendre") vendre = &a;
    REQUIRE(vendre != nullptr);
    DependencyIndex out = converse_enrich(docs[0], *vendre, small, &report);
    CHECK(out == docs[0]);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0].reason == "no-converse-target");
}

TEST_CASE("query matching: exact, empty, and class fallback") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);

    DependencyIndex temp_doc = fixture_doc("temperature.deps");
    auto a6 = assign(lex, db, temp_doc);
    EnrichmentPlan lex_only;
    lex_only.levels = {EnrichLevel::Lexical};
    DependencyIndex enriched6 = enrich_document(temp_doc, a6, lex, lex_only);

    auto query = parse_query("D SUBJECT augmenter température\n");
    auto matches = match_query({enriched6}, query, lex, db);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].record.provenance == Provenance::EnrichedLexical);
    CHECK(!matches[0].class_fallback);

    // empty index
    DependencyIndex empty;
    empty.doc_id = "e";
    CHECK(match_query({empty}, query, lex, db).empty());

    // class fallback: no donner record, but offrir shares D2a
    DependencyIndex gift_doc = fixture_doc("cadeau.deps");
    auto fallback = match_query({gift_doc}, parse_query("D SUBJECT donner papa\n"), lex, db);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback[0].class_fallback);
    CHECK(slot_lemma(fallback[0].record.dep.arg1,
                     *gift_doc.find_sentence(fallback[0].sentence_id)) == "offrir");

    // no match and no class code on the head -> empty result, not an error
    auto none = match_query({gift_doc}, parse_query("D SUBJECT éditer papa\n"), lex, db);
    CHECK(none.empty());
}

TEST_CASE("placeholders in query patterns match anything") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex gift_doc = fixture_doc("cadeau.deps");
    auto matches = match_query({gift_doc}, parse_query("D SUBJECT offrir ?\n"), lex, db);
    REQUIRE(matches.size() == 1);
    CHECK(slot_lemma(matches[0].record.dep.arg2, *gift_doc.find_sentence("1")) == "papa");
}

TEST_CASE("enrich_document applies the levels in fixed order and rejects empty plans") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex gift_doc = fixture_doc("cadeau.deps");
    auto assignments = assign(lex, db, gift_doc);

    EnrichmentPlan empty;
    empty.levels.clear();
    CHECK_THROWS_AS(enrich_document(gift_doc, assignments, lex, empty), Error);

    DependencyIndex out = enrich_document(gift_doc, assignments, lex, EnrichmentPlan{});
    // lexical: offrir sense 1 has SYN donner -> 3 copies; converse: 3 records
    CHECK(count_with(out, Provenance::EnrichedLexical) == 3);
    CHECK(count_with(out, Provenance::EnrichedConverse) == 3);
    CHECK(original_records(out) == original_records(gift_doc));
}

TEST_CASE("every enriched record is licensed by its source sense") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    for (const char* name : {"temperature.deps", "alpiniste.deps", "manuscrit.deps",
                             "cadeau.deps", "escadrille.deps", "drift.deps", "subcat.deps"}) {
        DependencyIndex doc = fixture_doc(name);
        auto assignments = assign(lex, db, doc, TiePolicy::first());
        DependencyIndex out = enrich_document(doc, assignments, lex, EnrichmentPlan{});
        for (const auto& sent : out.sentences) {
            for (const auto& rec : sent.records) {
                if (rec.provenance == Provenance::Original) {
                    CHECK(!rec.source.has_value());
                    continue;
                }
                REQUIRE(rec.source.has_value());
                const Sense* sense = nullptr;
                for (const auto* e : lex.entries_for(rec.source->lemma))
                    if (const Sense* s = e->find_sense(rec.source->sense_no)) sense = s;
                REQUIRE(sense != nullptr);

                std::string a1 = slot_lemma(rec.dep.arg1, sent);
                std::string a2 = slot_lemma(rec.dep.arg2, sent);
                bool licensed = false;
                switch (rec.provenance) {
                    case Provenance::EnrichedLexical:
                        for (const auto& syn : sense->synonyms)
                            if (syn.kind == SynonymSpec::Kind::SingleWord &&
                                (syn.text == a1 || syn.text == a2))
                                licensed = true;
                        break;
                    case Provenance::EnrichedMwe:
                        for (const auto& syn : sense->synonyms)
                            if (syn.kind == SynonymSpec::Kind::MultiWord)
                                for (const auto& td : syn.mwe_template)
                                    if (td.label == rec.dep.label) licensed = true;
                        // contraction introduces the source lemma itself
                        if (a1 == rec.source->lemma || a2 == rec.source->lemma)
                            licensed = true;
                        break;
                    case Provenance::EnrichedConverse:
                        if (sense->class_code)
                            for (const auto& corr : lex.correspondences)
                                if (corr.from_class == *sense->class_code)
                                    for (const auto& [e, s] :
                                         lex.senses_with_class(corr.to_class))
                                        if (e->lemma == a1) licensed = true;
                        break;
                    case Provenance::Original: break;
                }
                CHECK(licensed);
            }
        }
    }
}

TEST_CASE("the per-token addition cap trims additions, not originals") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex temp_doc = fixture_doc("temperature.deps");
    auto assignments = assign(lex, db, temp_doc);

    EnrichmentPlan plan;
    plan.levels = {EnrichLevel::Lexical};
    plan.max_additions_per_token = 1;
    EnrichmentReport report;
    DependencyIndex out = enrich_document(temp_doc, assignments, lex, plan, &report);
    CHECK(count_with(out, Provenance::EnrichedLexical) == 1);
    CHECK(original_records(out) == original_records(temp_doc));
    // the first synonym in lexicon order survives
    CHECK(has_record(out, "SUBJECT", "monter", "température", Provenance::EnrichedLexical));
    bool capped = false;
    for (const auto& s : report.skipped)
        if (s.reason == "max-additions") capped = true;
    CHECK(capped);
    // trimmed synonym tokens do not linger in the token table
    for (const auto& t : out.sentences[0].tokens) CHECK(t.lemma != "augmenter");
}

TEST_CASE("the addition cap never splits a template") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex ms_doc = fixture_doc("manuscrit.deps");
    auto assignments = assign(lex, db, ms_doc);

    EnrichmentPlan plan;
    plan.levels = {EnrichLevel::Mwe};
    plan.max_additions_per_token = 3; // template needs 4
    EnrichmentReport report;
    DependencyIndex out = enrich_document(ms_doc, assignments, lex, plan, &report);
    CHECK(count_with(out, Provenance::EnrichedMwe) == 0);
    bool capped = false;
    for (const auto& s : report.skipped)
        if (s.reason == "max-additions") capped = true;
    CHECK(capped);

    plan.max_additions_per_token = 4;
    DependencyIndex full = enrich_document(ms_doc, assignments, lex, plan);
    CHECK(count_with(full, Provenance::EnrichedMwe) == 4);
}

TEST_CASE("assignments from another index are rejected") {
    Lexicon lex = fixture_lexicon();
    RuleDb db = compile_rules(lex);
    DependencyIndex temp_doc = fixture_doc("temperature.deps");
    auto assignments = assign(lex, db, temp_doc);
    REQUIRE(!assignments.empty());
    SenseAssignment broken = assignments.back();
    broken.token_id = 99;
    CHECK_THROWS_AS(enrich_lexical(temp_doc, {broken}, lex), Error);
    broken = assignments.back();
    broken.lemma = "autre";
    CHECK_THROWS_AS(enrich_lexical(temp_doc, {broken}, lex), ConsistencyError);
}
