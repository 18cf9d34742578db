#include "lexenrich/deps.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "text_util.hpp"

namespace lexenrich {

using detail::parse_int;
using detail::split_char;
using detail::split_lines;
using detail::split_ws;
using detail::starts_with;
using detail::trim;

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Original: return "orig";
        case Provenance::EnrichedLexical: return "enr:lex";
        case Provenance::EnrichedMwe: return "enr:mwe";
        case Provenance::EnrichedConverse: return "enr:conv";
    }
    return "?";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "orig") return Provenance::Original;
    if (s == "enr:lex") return Provenance::EnrichedLexical;
    if (s == "enr:mwe") return Provenance::EnrichedMwe;
    if (s == "enr:conv") return Provenance::EnrichedConverse;
    throw Error("unknown provenance: " + s);
}

const Token* Sentence::find_token(int id) const {
    for (const auto& t : tokens)
        if (t.id == id) return &t;
    return nullptr;
}

const Token& Sentence::token(int token_id) const {
    const Token* t = find_token(token_id);
    if (!t) throw DanglingTokenRef(id, token_id);
    return *t;
}

int Sentence::max_token_id() const {
    int m = -1;
    for (const auto& t : tokens) m = std::max(m, t.id);
    return m;
}

const Sentence* DependencyIndex::find_sentence(const std::string& id) const {
    for (const auto& s : sentences)
        if (s.id == id) return &s;
    return nullptr;
}

std::string slot_lemma(const Slot& slot, const Sentence& sent) {
    switch (slot.kind) {
        case Slot::Kind::TokenRef: return sent.token(slot.token_id).lemma;
        case Slot::Kind::Lemma: return slot.lemma_text;
        case Slot::Kind::Placeholder: return "?";
    }
    return "?";
}

std::vector<IndexRecord> original_records(const DependencyIndex& index) {
    std::vector<IndexRecord> out;
    for (const auto& s : index.sentences)
        for (const auto& r : s.records)
            if (r.provenance == Provenance::Original) out.push_back(r);
    return out;
}

// ---------------------------------------------------------------- documents

namespace {

Slot parse_token_slot(const std::string& field, int line) {
    int id = 0;
    if (!parse_int(field, id) || id < 0)
        throw SyntaxError(line, "bad token reference: " + field);
    return Slot::token(id);
}

void check_sentence(const Sentence& sent) {
    for (const auto& r : sent.records) {
        if (r.dep.arg1.is_token()) sent.token(r.dep.arg1.token_id);
        if (r.dep.arg2.is_token()) sent.token(r.dep.arg2.token_id);
    }
}

} // namespace

std::vector<DependencyIndex> parse_deps(std::istream& in) {
    std::vector<DependencyIndex> docs;
    DependencyIndex* doc = nullptr;
    Sentence* sent = nullptr;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (starts_with(line, "#DOC")) {
            auto fields = split_ws(line);
            if (fields.size() != 2) throw SyntaxError(line_no, "expected `#DOC <id>`");
            if (sent) check_sentence(*sent);
            for (const auto& d : docs)
                if (d.doc_id == fields[1])
                    throw SyntaxError(line_no, "duplicate document id " + fields[1]);
            docs.push_back(DependencyIndex{fields[1], {}});
            doc = &docs.back();
            sent = nullptr;
            continue;
        }
        if (starts_with(line, "#SENT")) {
            auto fields = split_ws(line);
            if (fields.size() != 2) throw SyntaxError(line_no, "expected `#SENT <id>`");
            if (!doc) throw SyntaxError(line_no, "#SENT outside of a #DOC block");
            if (sent) check_sentence(*sent);
            for (const auto& s : doc->sentences)
                if (s.id == fields[1])
                    throw SyntaxError(line_no, "duplicate sentence id " + fields[1]);
            doc->sentences.push_back(Sentence{fields[1], {}, {}});
            sent = &doc->sentences.back();
            continue;
        }
        if (line[0] == '#') continue;

        auto fields = split_ws(line);
        if (fields[0] == "T") {
            if (!sent) throw SyntaxError(line_no, "token line outside of a sentence");
            if (fields.size() != 4) throw SyntaxError(line_no, "expected `T <id> <lemma> <pos>`");
            Token t;
            if (!parse_int(fields[1], t.id) || t.id < 0)
                throw SyntaxError(line_no, "bad token id: " + fields[1]);
            t.lemma = fields[2];
            if (t.lemma.empty()) throw SyntaxError(line_no, "empty lemma");
            try {
                t.pos = pos_from_string(fields[3]);
            } catch (const Error&) {
                throw SyntaxError(line_no, "bad POS: " + fields[3]);
            }
            if (sent->find_token(t.id))
                throw SyntaxError(line_no, "duplicate token id " + fields[1]);
            sent->tokens.push_back(std::move(t));
        } else if (fields[0] == "D") {
            if (!sent) throw SyntaxError(line_no, "dependency line outside of a sentence");
            if (fields.size() != 4 && fields.size() != 5)
                throw SyntaxError(line_no, "expected `D <LABEL> <id> [<prep>] <id>`");
            Dependency d;
            d.label = fields[1];
            if (!is_valid_label(d.label)) throw SyntaxError(line_no, "bad label: " + d.label);
            d.arg1 = parse_token_slot(fields[2], line_no);
            if (fields.size() == 5) {
                if (!is_prepositional_label(d.label))
                    throw SyntaxError(line_no,
                                      "label " + d.label + " does not take a preposition");
                d.prep = fields[3];
                d.arg2 = parse_token_slot(fields[4], line_no);
            } else {
                d.arg2 = parse_token_slot(fields[3], line_no);
            }
            sent->records.push_back(IndexRecord{std::move(d), Provenance::Original, {}});
        } else {
            throw SyntaxError(line_no, "unrecognized line: " + line);
        }
    }
    if (sent) check_sentence(*sent);
    return docs;
}

std::vector<DependencyIndex> parse_deps_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open document file: " + path);
    return parse_deps(in);
}

std::vector<DependencyIndex> parse_deps_text(const std::string& text) {
    std::istringstream in(text);
    return parse_deps(in);
}

// -------------------------------------------------------------------- index

namespace {

constexpr const char* kIndexHeader = "doc\tsent\tlabel\targ1\tprep\targ2\tprovenance\tsource";

struct Row {
    std::string doc, sent, label, arg1, prep, arg2, source;
    Provenance provenance = Provenance::Original;

    std::tuple<const std::string&, const std::string&, const std::string&, const std::string&,
               const std::string&, int, const std::string&>
    key() const {
        return {sent, label, arg1, prep, arg2, static_cast<int>(provenance), source};
    }

    std::string tsv(void) const {
        return doc + "\t" + sent + "\t" + label + "\t" + arg1 + "\t" + prep + "\t" + arg2 +
               "\t" + to_string(provenance) + "\t" + source;
    }
};

std::vector<Row> rows_of(const DependencyIndex& index) {
    std::vector<Row> rows;
    for (const auto& s : index.sentences) {
        for (const auto& r : s.records) {
            Row row;
            row.doc = index.doc_id;
            row.sent = s.id;
            row.label = r.dep.label;
            row.arg1 = slot_lemma(r.dep.arg1, s);
            row.prep = r.dep.prep ? *r.dep.prep : "-";
            row.arg2 = slot_lemma(r.dep.arg2, s);
            row.provenance = r.provenance;
            row.source = r.source ? r.source->lemma + "#" + std::to_string(r.source->sense_no)
                                  : "-";
            rows.push_back(std::move(row));
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.key() < b.key(); });
    return rows;
}

} // namespace

std::string serialize_index(const DependencyIndex& index) {
    std::string out = kIndexHeader;
    out += "\n";
    for (const auto& row : rows_of(index)) out += row.tsv() + "\n";
    return out;
}

std::string serialize_indexes(const std::vector<DependencyIndex>& indexes) {
    std::vector<const DependencyIndex*> sorted;
    for (const auto& ix : indexes) sorted.push_back(&ix);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
    std::string out = kIndexHeader;
    out += "\n";
    for (const auto* ix : sorted)
        for (const auto& row : rows_of(*ix)) out += row.tsv() + "\n";
    return out;
}

std::vector<DependencyIndex> parse_index(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kIndexHeader)
        throw SyntaxError(1, "missing index header");

    std::vector<Row> rows;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto fields = split_char(lines[i], '\t');
        if (fields.size() != 8)
            throw SyntaxError(static_cast<int>(i + 1), "expected 8 tab-separated columns");
        Row row;
        row.doc = fields[0];
        row.sent = fields[1];
        row.label = fields[2];
        row.arg1 = fields[3];
        row.prep = fields[4];
        row.arg2 = fields[5];
        try {
            row.provenance = provenance_from_string(fields[6]);
        } catch (const Error& e) {
            throw SyntaxError(static_cast<int>(i + 1), e.what());
        }
        row.source = fields[7];
        bool enriched = row.provenance != Provenance::Original;
        if (enriched == (row.source == "-"))
            throw SyntaxError(static_cast<int>(i + 1),
                              "source must be set exactly for enriched records");
        if ((row.prep != "-") && !is_prepositional_label(row.label))
            throw SyntaxError(static_cast<int>(i + 1),
                              "label " + row.label + " does not take a preposition");
        rows.push_back(std::move(row));
    }

    // Group rows per document (by id order), sort canonically within, and
    // synthesize tokens: original-record lemmas first, enriched above them.
    std::map<std::string, std::vector<Row>> by_doc;
    for (auto& row : rows) by_doc[row.doc].push_back(std::move(row));

    std::vector<DependencyIndex> out;
    for (auto& [doc_id, doc_rows] : by_doc) {
        std::stable_sort(doc_rows.begin(), doc_rows.end(),
                         [](const Row& a, const Row& b) { return a.key() < b.key(); });
        DependencyIndex ix;
        ix.doc_id = doc_id;
        std::map<std::string, std::vector<size_t>> by_sent;
        for (size_t i = 0; i < doc_rows.size(); ++i) {
            const std::string& sid = doc_rows[i].sent;
            if (by_sent.find(sid) == by_sent.end()) {
                ix.sentences.push_back(Sentence{sid, {}, {}});
            }
            by_sent[sid].push_back(i);
        }
        std::stable_sort(ix.sentences.begin(), ix.sentences.end(),
                         [](const Sentence& a, const Sentence& b) { return a.id < b.id; });
        for (auto& sent : ix.sentences) {
            std::map<std::string, int> ids;
            int next_id = 1;
            auto intern = [&](const std::string& lemma) {
                auto it = ids.find(lemma);
                if (it != ids.end()) return it->second;
                ids[lemma] = next_id;
                sent.tokens.push_back(Token{next_id, lemma, Pos::N});
                return next_id++;
            };
            for (int pass = 0; pass < 2; ++pass) {
                for (size_t i : by_sent[sent.id]) {
                    const Row& row = doc_rows[i];
                    bool orig = row.provenance == Provenance::Original;
                    if (orig != (pass == 0)) continue;
                    intern(row.arg1);
                    intern(row.arg2);
                }
            }
            for (size_t i : by_sent[sent.id]) {
                const Row& row = doc_rows[i];
                IndexRecord rec;
                rec.dep.label = row.label;
                rec.dep.arg1 = Slot::token(ids[row.arg1]);
                rec.dep.arg2 = Slot::token(ids[row.arg2]);
                if (row.prep != "-") rec.dep.prep = row.prep;
                rec.provenance = row.provenance;
                if (row.source != "-") {
                    auto hash = row.source.rfind('#');
                    int sense = 0;
                    if (hash == std::string::npos ||
                        !parse_int(row.source.substr(hash + 1), sense))
                        throw Error("bad source reference: " + row.source);
                    rec.source = SenseRef{row.source.substr(0, hash), sense};
                }
                sent.records.push_back(std::move(rec));
            }
        }
        out.push_back(std::move(ix));
    }
    return out;
}

std::vector<IndexRecord> deps_involving(const DependencyIndex& index,
                                        const std::string& sentence_id, int token_id) {
    const Sentence* sent = index.find_sentence(sentence_id);
    if (!sent) throw UnknownSentence(sentence_id);
    std::vector<IndexRecord> out;
    for (const auto& r : sent->records) {
        bool hit = (r.dep.arg1.is_token() && r.dep.arg1.token_id == token_id) ||
                   (r.dep.arg2.is_token() && r.dep.arg2.token_id == token_id);
        if (hit) out.push_back(r);
    }
    return out;
}

} // namespace lexenrich
