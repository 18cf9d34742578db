#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lexenrich/deps.hpp"
#include "lexenrich/lexicon.hpp"
#include "lexenrich/rational.hpp"
#include "lexenrich/wsd.hpp"

namespace lexenrich {

enum class ErrorCategory { Tokenization, Tagging, Parsing, Wsd };

struct GoldAnnotation {
    std::string doc_id, sentence_id;
    int token_id = 0;
    int sense_no = 0;
    /// Marks tokens whose failure is attributable to upstream tools.
    std::optional<ErrorCategory> category_override;
};

/// Gold TSV: doc, sent, token_id, sense_no, category(- | tok | tag | parse).
std::vector<GoldAnnotation> parse_gold(const std::string& text);
std::string serialize_gold(const std::vector<GoldAnnotation>& gold);

struct EvalReport {
    long performed = 0;
    long correct = 0;
    long possible = 0;
    long mistakes_tokenization = 0;
    long mistakes_tagging = 0;
    long mistakes_parsing = 0;
    long mistakes_wsd = 0;

    /// Upper-bound correctness (gold sense among candidates), reported for
    /// policy-All runs alongside the strict count.
    std::optional<long> upper_bound_correct;

    std::vector<std::string> warnings; // missing-gold tokens, excluded

    std::optional<Rational> precision() const; // absent when performed == 0
    std::optional<Rational> recall() const;    // absent when possible == 0
    std::optional<Rational> noise() const;     // 1 - precision
};

/// Scores assignments against gold. Strict correctness: exactly one candidate
/// and it equals gold. Assignments without a gold row are excluded with a
/// warning; `possible` is the gold row count.
EvalReport score_run(const std::vector<SenseAssignment>& assignments,
                     const std::vector<GoldAnnotation>& gold);

/// Fixed-width table mirroring the mistake/precision/recall layout.
std::string format_report(const EvalReport& report);

/// Machine-readable twin; parse_report_tsv reconstructs the counts.
std::string report_to_tsv(const EvalReport& report);
EvalReport parse_report_tsv(const std::string& text);

struct SanityResult {
    Rational value;
    std::vector<std::string> violations;
};

/// Fraction of strictly correct assignments whose every enriched record with
/// the same source lemma stems from the gold sense. Targeted enrichment makes
/// this exactly 1; the operation exists to assert it.
SanityResult enrichment_sanity(const std::vector<SenseAssignment>& assignments,
                               const std::vector<DependencyIndex>& enriched,
                               const Lexicon& lexicon,
                               const std::vector<GoldAnnotation>& gold);

} // namespace lexenrich
