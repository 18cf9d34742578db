#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexenrich/core.hpp"

namespace lexenrich {

struct Token {
    int id = 0;
    std::string lemma;
    Pos pos = Pos::N;

    bool operator==(const Token& o) const {
        return id == o.id && lemma == o.lemma && pos == o.pos;
    }
};

enum class Provenance { Original, EnrichedLexical, EnrichedMwe, EnrichedConverse };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// (lemma, sense number) of the lexicon sense that licensed an enrichment.
struct SenseRef {
    std::string lemma;
    int sense_no = 0;

    bool operator==(const SenseRef& o) const {
        return lemma == o.lemma && sense_no == o.sense_no;
    }
};

struct IndexRecord {
    Dependency dep;
    Provenance provenance = Provenance::Original;
    std::optional<SenseRef> source;

    bool operator==(const IndexRecord& o) const {
        return dep == o.dep && provenance == o.provenance && source == o.source;
    }
};

struct Sentence {
    std::string id;
    std::vector<Token> tokens;
    std::vector<IndexRecord> records;

    const Token* find_token(int id) const;
    const Token& token(int id) const; // throws DanglingTokenRef
    int max_token_id() const;

    bool operator==(const Sentence& o) const {
        return id == o.id && tokens == o.tokens && records == o.records;
    }
};

/// Per-document store of original and enrichment-added dependencies.
/// Values are immutable by convention: enrichment returns a new index.
struct DependencyIndex {
    std::string doc_id;
    std::vector<Sentence> sentences;

    const Sentence* find_sentence(const std::string& id) const;

    bool operator==(const DependencyIndex& o) const {
        return doc_id == o.doc_id && sentences == o.sentences;
    }
};

/// Reads the document format: `#DOC id` / `#SENT id` headers, `T id lemma pos`
/// token lines, `D LABEL id id` or `D LABEL id prep id` dependency lines.
/// All records come out with Original provenance.
std::vector<DependencyIndex> parse_deps(std::istream& in);
std::vector<DependencyIndex> parse_deps_file(const std::string& path);
std::vector<DependencyIndex> parse_deps_text(const std::string& text);

/// Canonical TSV projection of one index (lemma level). Records are sorted by
/// (sent, label, arg lemmas, provenance); the header line is always present.
std::string serialize_index(const DependencyIndex& index);
/// Multi-document variant: one header, documents ordered by id.
std::string serialize_indexes(const std::vector<DependencyIndex>& indexes);

/// Parses the TSV form back into normalized indexes (canonical record order,
/// token ids assigned by first appearance, originals first). POS is not part
/// of the TSV and defaults to N.
std::vector<DependencyIndex> parse_index(const std::string& text);

/// Records of the sentence that reference the given token in any argument
/// slot, in sentence order. Throws UnknownSentence.
std::vector<IndexRecord> deps_involving(const DependencyIndex& index,
                                        const std::string& sentence_id, int token_id);

/// Lemma of an argument slot resolved against its sentence ("?" for
/// placeholders in template/query dependencies).
std::string slot_lemma(const Slot& slot, const Sentence& sent);

/// The multiset of Original records, used to assert the append-only
/// discipline of enrichment.
std::vector<IndexRecord> original_records(const DependencyIndex& index);

} // namespace lexenrich
