#include "lexenrich/enrich.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace lexenrich {

using detail::split_lines;
using detail::split_ws;
using detail::starts_with;
using detail::trim;

std::string to_string(EnrichLevel level) {
    switch (level) {
        case EnrichLevel::Lexical: return "lex";
        case EnrichLevel::Mwe: return "mwe";
        case EnrichLevel::Converse: return "conv";
    }
    return "?";
}

EnrichLevel enrich_level_from_string(const std::string& s) {
    if (s == "lex") return EnrichLevel::Lexical;
    if (s == "mwe") return EnrichLevel::Mwe;
    if (s == "conv") return EnrichLevel::Converse;
    throw Error("unknown enrichment level: " + s);
}

std::string EnrichmentReport::to_text() const {
    std::ostringstream out;
    out << "#ENRICHMENT 1\n";
    out << "doc\tsent\ttoken\tlemma\tlex\tmwe\tconv\n";
    for (const auto& t : tokens)
        out << t.doc_id << "\t" << t.sentence_id << "\t" << t.token_id << "\t" << t.lemma
            << "\t" << t.lexical << "\t" << t.mwe << "\t" << t.converse << "\n";
    if (!skipped.empty()) {
        out << "#SKIPPED\n";
        for (const auto& s : skipped)
            out << s.doc_id << "\t" << s.sentence_id << "\t" << s.token_id << "\t" << s.lemma
                << "\t" << s.what << "\t" << s.reason << "\n";
    }
    return out.str();
}

// ------------------------------------------------------------------ helpers

namespace {

struct RecordKey {
    std::string label, arg1, prep, arg2;
    Provenance provenance;

    bool operator<(const RecordKey& o) const {
        return std::tie(label, arg1, prep, arg2, provenance) <
               std::tie(o.label, o.arg1, o.prep, o.arg2, o.provenance);
    }
};

RecordKey key_of(const IndexRecord& rec, const Sentence& sent) {
    return RecordKey{rec.dep.label, slot_lemma(rec.dep.arg1, sent),
                     rec.dep.prep ? *rec.dep.prep : "-", slot_lemma(rec.dep.arg2, sent),
                     rec.provenance};
}

// Appends enrichment records to one sentence: synthetic tokens above the
// original id range, duplicate additions (same label, lemmas, provenance)
// suppressed before any token is created.
class SentenceEditor {
public:
    explicit SentenceEditor(Sentence& sent) : sent_(sent), next_id_(sent.max_token_id() + 1) {
        for (const auto& r : sent_.records) existing_.insert(key_of(r, sent_));
    }

    bool would_be_new(const RecordKey& key) const { return !existing_.count(key); }

    int synthetic_token(const std::string& lemma, Pos pos) {
        auto it = cache_.find(lemma);
        if (it != cache_.end()) return it->second;
        int id = next_id_++;
        sent_.tokens.push_back(Token{id, lemma, pos});
        cache_[lemma] = id;
        return id;
    }

    bool add(IndexRecord rec) {
        RecordKey key = key_of(rec, sent_);
        if (!existing_.insert(key).second) return false;
        sent_.records.push_back(std::move(rec));
        return true;
    }

private:
    Sentence& sent_;
    int next_id_;
    std::set<RecordKey> existing_;
    std::map<std::string, int> cache_;
};

// POS for a synthetic token: the lemma's unique lexicon entry when there is
// exactly one, otherwise noun.
Pos infer_pos(const Lexicon& lexicon, const std::string& lemma) {
    auto entries = lexicon.entries_for(lemma);
    return entries.size() == 1 ? entries[0]->pos : Pos::N;
}

Sentence& resolve_assignment(DependencyIndex& index, const SenseAssignment& a) {
    if (a.doc_id != index.doc_id)
        throw ConsistencyError("assignment for document " + a.doc_id +
                               " applied to document " + index.doc_id);
    for (auto& s : index.sentences) {
        if (s.id != a.sentence_id) continue;
        const Token& t = s.token(a.token_id);
        if (t.lemma != a.lemma)
            throw ConsistencyError("assignment lemma " + a.lemma + " does not match token " +
                                   std::to_string(a.token_id) + " (" + t.lemma + ") in sentence " +
                                   s.id);
        return s;
    }
    throw ConsistencyError("assignment references unknown sentence " + a.sentence_id +
                           " of document " + a.doc_id);
}

const Sense& resolve_sense(const Lexicon& lexicon, const Sentence& sent,
                           const SenseAssignment& a, int sense_no) {
    const Token& t = sent.token(a.token_id);
    const LexEntry* entry = lexicon.find(a.lemma, t.pos);
    if (!entry)
        throw ConsistencyError("no lexicon entry for " + a.lemma + "/" + to_string(t.pos));
    const Sense* sense = entry->find_sense(sense_no);
    if (!sense)
        throw ConsistencyError("sense " + std::to_string(sense_no) + " not found for " + a.lemma);
    return *sense;
}

EnrichmentReport::TokenCounts& report_row(EnrichmentReport& report, const SenseAssignment& a) {
    for (auto& t : report.tokens)
        if (t.doc_id == a.doc_id && t.sentence_id == a.sentence_id && t.token_id == a.token_id)
            return t;
    report.tokens.push_back({a.doc_id, a.sentence_id, a.token_id, a.lemma, 0, 0, 0});
    return report.tokens.back();
}

// By value: additions reallocate the record vector while these are iterated.
std::vector<IndexRecord> original_deps_on(const Sentence& sent, int token_id) {
    std::vector<IndexRecord> out;
    for (const auto& r : sent.records) {
        if (r.provenance != Provenance::Original) continue;
        bool hit = (r.dep.arg1.is_token() && r.dep.arg1.token_id == token_id) ||
                   (r.dep.arg2.is_token() && r.dep.arg2.token_id == token_id);
        if (hit) out.push_back(r);
    }
    return out;
}

// SUBJECT before OBJECT before everything else (alphabetical).
int label_priority(const std::string& label) {
    if (label == "SUBJECT") return 0;
    if (label == "OBJECT") return 1;
    return 2;
}

bool label_preferred(const std::string& a, const std::string& b) {
    int pa = label_priority(a), pb = label_priority(b);
    if (pa != pb) return pa < pb;
    return a < b;
}

} // namespace

// ------------------------------------------------------------- lexical level

DependencyIndex enrich_lexical(const DependencyIndex& index,
                               const std::vector<SenseAssignment>& assignments,
                               const Lexicon& lexicon, EnrichmentReport* report) {
    DependencyIndex out = index;
    for (const auto& a : assignments) {
        if (a.doc_id != index.doc_id) continue;
        Sentence& sent = resolve_assignment(out, a);
        SentenceEditor editor(sent);
        auto involved = original_deps_on(sent, a.token_id);
        int added = 0;
        for (const auto& cand : a.candidates) {
            const Sense& sense = resolve_sense(lexicon, sent, a, cand.sense_no);
            for (const auto& syn : sense.synonyms) {
                if (syn.kind != SynonymSpec::Kind::SingleWord) continue;
                for (const IndexRecord& src : involved) {
                    RecordKey key = key_of(src, sent);
                    if (src.dep.arg1.is_token() && src.dep.arg1.token_id == a.token_id)
                        key.arg1 = syn.text;
                    if (src.dep.arg2.is_token() && src.dep.arg2.token_id == a.token_id)
                        key.arg2 = syn.text;
                    key.provenance = Provenance::EnrichedLexical;
                    if (!editor.would_be_new(key)) continue;

                    Pos pos = sent.token(a.token_id).pos;
                    IndexRecord rec = src;
                    int syn_id = editor.synthetic_token(syn.text, pos);
                    if (rec.dep.arg1.is_token() && rec.dep.arg1.token_id == a.token_id)
                        rec.dep.arg1 = Slot::token(syn_id);
                    if (rec.dep.arg2.is_token() && rec.dep.arg2.token_id == a.token_id)
                        rec.dep.arg2 = Slot::token(syn_id);
                    rec.provenance = Provenance::EnrichedLexical;
                    rec.source = SenseRef{a.lemma, cand.sense_no};
                    if (editor.add(std::move(rec))) ++added;
                }
            }
        }
        if (report) report_row(*report, a).lexical += added;
    }
    return out;
}

// ----------------------------------------------------------------- MWE level

namespace {

struct TextArg {
    std::string label;
    Slot arg;           // the argument that is not the replaced word
    size_t order = 0;   // sentence order, for stable sorting
    bool consumed = false;
};

} // namespace

DependencyIndex expand_word_to_mwe(const DependencyIndex& index,
                                   const SenseAssignment& assignment, const SynonymSpec& mwe,
                                   const Lexicon& lexicon, EnrichmentReport* report) {
    if (mwe.kind != SynonymSpec::Kind::MultiWord || mwe.mwe_template.empty())
        throw ConsistencyError("expand_word_to_mwe needs a multi-word synonym with a template");

    DependencyIndex out = index;
    Sentence& sent = resolve_assignment(out, assignment);

    // The sense this template belongs to.
    int sense_no = 0;
    for (const auto& cand : assignment.candidates) {
        const Sense& sense = resolve_sense(lexicon, sent, assignment, cand.sense_no);
        for (const auto& syn : sense.synonyms)
            if (syn.kind == SynonymSpec::Kind::MultiWord && syn.text == mwe.text)
                sense_no = cand.sense_no;
        if (sense_no) break;
    }
    if (!sense_no)
        throw ConsistencyError("multi-word synonym '" + mwe.text +
                               "' does not belong to a selected sense of " + assignment.lemma);

    auto skip = [&](const std::string& reason) {
        if (report)
            report->skipped.push_back({assignment.doc_id, assignment.sentence_id,
                                       assignment.token_id, assignment.lemma, mwe.text, reason});
        return index;
    };

    // Text arguments of the replaced word, in role-priority order.
    std::vector<TextArg> args;
    {
        size_t order = 0;
        for (const IndexRecord& r : original_deps_on(sent, assignment.token_id)) {
            const Dependency& d = r.dep;
            bool t1 = d.arg1.is_token() && d.arg1.token_id == assignment.token_id;
            args.push_back(TextArg{d.label, t1 ? d.arg2 : d.arg1, order++, false});
        }
        std::stable_sort(args.begin(), args.end(), [](const TextArg& a, const TextArg& b) {
            if (a.label != b.label) return label_preferred(a.label, b.label);
            return a.order < b.order;
        });
    }

    // Anchor: the template dependency sharing a label with a text dependency
    // on the replaced word, preferring SUBJECT, then OBJECT, then alphabetical.
    const Dependency* anchor = nullptr;
    TextArg* anchor_arg = nullptr;
    for (auto& arg : args) {
        for (const auto& td : mwe.mwe_template) {
            if (td.label == arg.label) {
                anchor = &td;
                anchor_arg = &arg;
                break;
            }
        }
        if (anchor) break;
    }

    // Bind placeholders: the anchor takes the matching text argument, the
    // rest consume the remaining arguments in role order.
    std::map<const Slot*, Slot> bindings;
    for (const auto& td : mwe.mwe_template) {
        for (int pos : {1, td.arity()}) {
            const Slot& slot = td.slot_at(pos);
            if (!slot.is_placeholder() || bindings.count(&slot)) continue;
            if (anchor && &td == anchor && anchor_arg && !anchor_arg->consumed) {
                bindings[&slot] = anchor_arg->arg;
                anchor_arg->consumed = true;
                continue;
            }
            TextArg* next = nullptr;
            for (auto& arg : args)
                if (!arg.consumed) {
                    next = &arg;
                    break;
                }
            if (!next) return skip("unbound-placeholder");
            bindings[&slot] = next->arg;
            next->consumed = true;
        }
    }

    SentenceEditor editor(sent);

    // The template lemma standing in for the replaced word keeps its POS;
    // other template-internal lemmas fall back to lexicon lookup.
    std::string head_lemma;
    if (anchor) {
        for (const auto& r : original_deps_on(sent, assignment.token_id)) {
            if (r.dep.label != anchor->label) continue;
            bool first = r.dep.arg1.is_token() && r.dep.arg1.token_id == assignment.token_id;
            const Slot& head_slot = first ? anchor->arg1 : anchor->arg2;
            if (head_slot.is_lemma()) head_lemma = head_slot.lemma_text;
            break;
        }
    }
    Pos replaced_pos = sent.token(assignment.token_id).pos;

    // Lemma-level preview for duplicate suppression and the addition cap.
    auto slot_text = [&](const Slot& s) {
        if (s.is_placeholder()) return slot_lemma(bindings.at(&s), sent);
        return s.lemma_text;
    };
    int to_add = 0;
    for (const auto& td : mwe.mwe_template) {
        RecordKey key{td.label, slot_text(td.arg1), td.prep ? *td.prep : "-",
                      slot_text(td.arg2), Provenance::EnrichedMwe};
        if (editor.would_be_new(key)) ++to_add;
    }
    if (to_add == 0) return out; // everything already present

    int added = 0;
    for (const auto& td : mwe.mwe_template) {
        IndexRecord rec;
        rec.dep.label = td.label;
        rec.dep.prep = td.prep;
        auto realize = [&](const Slot& s) {
            if (s.is_placeholder()) return bindings.at(&s);
            Pos pos = s.lemma_text == head_lemma ? replaced_pos
                                                 : infer_pos(lexicon, s.lemma_text);
            return Slot::token(editor.synthetic_token(s.lemma_text, pos));
        };
        rec.dep.arg1 = realize(td.arg1);
        rec.dep.arg2 = realize(td.arg2);
        rec.provenance = Provenance::EnrichedMwe;
        rec.source = SenseRef{assignment.lemma, sense_no};
        if (editor.add(std::move(rec))) ++added;
    }
    if (report) report_row(*report, assignment).mwe += added;
    return out;
}

DependencyIndex contract_mwe_to_word(const DependencyIndex& index,
                                     const std::string& sentence_id,
                                     const std::set<int>& mwe_occurrence,
                                     const std::string& synonym, Pos pos,
                                     const Lexicon& lexicon) {
    DependencyIndex out = index;
    Sentence* sent = nullptr;
    for (auto& s : out.sentences)
        if (s.id == sentence_id) sent = &s;
    if (!sent) throw UnknownSentence(sentence_id);
    for (int id : mwe_occurrence) sent->token(id);

    const LexEntry* entry = lexicon.find(synonym, pos);
    if (!entry)
        throw ConsistencyError("no lexicon entry for " + synonym + "/" + to_string(pos));
    // Licensing sense: the one whose multi-word template is covered by the
    // occurrence, or the first sense as a fallback.
    int sense_no = entry->senses.front().sense_no;
    {
        std::set<std::string> occurrence_lemmas;
        for (int id : mwe_occurrence) occurrence_lemmas.insert(sent->token(id).lemma);
        bool found = false;
        for (const auto& s : entry->senses) {
            for (const auto& syn : s.synonyms) {
                if (syn.kind != SynonymSpec::Kind::MultiWord) continue;
                bool covered = true;
                for (const auto& td : syn.mwe_template)
                    for (int p : {1, td.arity()}) {
                        const Slot& slot = td.slot_at(p);
                        if (slot.is_lemma() && !occurrence_lemmas.count(slot.lemma_text))
                            covered = false;
                    }
                if (covered) {
                    sense_no = s.sense_no;
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
    }

    // All records qualify, whatever their provenance: the occurrence may
    // itself stem from an expansion (the round-trip case).
    SentenceEditor editor(*sent);
    std::vector<IndexRecord> sources;
    for (const auto& r : sent->records) {
        int inside = 0;
        for (int p : {1, r.dep.arity()}) {
            const Slot& slot = r.dep.slot_at(p);
            if (slot.is_token() && mwe_occurrence.count(slot.token_id)) ++inside;
        }
        if (inside != 1) continue;
        // The inside token must already have the POS of the replacement word.
        int inside_id = (r.dep.arg1.is_token() && mwe_occurrence.count(r.dep.arg1.token_id))
                            ? r.dep.arg1.token_id
                            : r.dep.arg2.token_id;
        if (sent->token(inside_id).pos != pos) continue;
        sources.push_back(r);
    }
    for (const IndexRecord& src : sources) {
        IndexRecord rec = src;
        int syn_id = editor.synthetic_token(synonym, pos);
        if (rec.dep.arg1.is_token() && mwe_occurrence.count(rec.dep.arg1.token_id))
            rec.dep.arg1 = Slot::token(syn_id);
        else
            rec.dep.arg2 = Slot::token(syn_id);
        rec.provenance = Provenance::EnrichedMwe;
        rec.source = SenseRef{synonym, sense_no};
        editor.add(std::move(rec));
    }
    return out;
}

// ------------------------------------------------------------ converse level

DependencyIndex converse_enrich(const DependencyIndex& index,
                                const SenseAssignment& assignment, const Lexicon& lexicon,
                                EnrichmentReport* report) {
    DependencyIndex out = index;
    Sentence& sent = resolve_assignment(out, assignment);
    SentenceEditor editor(sent);
    int added = 0;

    for (const auto& cand : assignment.candidates) {
        const Sense& sense = resolve_sense(lexicon, sent, assignment, cand.sense_no);
        if (!sense.class_code) continue;
        for (const auto& corr : lexicon.correspondences) {
            if (corr.from_class != *sense.class_code) continue;
            auto targets = lexicon.senses_with_class(corr.to_class);
            targets.erase(std::remove_if(targets.begin(), targets.end(),
                                         [&](const auto& t) {
                                             return t.first->lemma == assignment.lemma;
                                         }),
                          targets.end());
            if (targets.empty()) {
                if (report)
                    report->skipped.push_back({assignment.doc_id, assignment.sentence_id,
                                               assignment.token_id, assignment.lemma,
                                               corr.from_class + "->" + corr.to_class,
                                               "no-converse-target"});
                continue;
            }
            for (const auto& [target_entry, target_sense] : targets) {
                (void)target_sense;
                for (const IndexRecord& src : original_deps_on(sent, assignment.token_id)) {
                    Role from_role;
                    try {
                        from_role = role_from_string(src.dep.label);
                    } catch (const Error&) {
                        continue; // labels outside the correspondence's role set
                    }
                    auto it = corr.role_map.find(from_role);
                    if (it == corr.role_map.end()) continue;
                    Role to_role = it->second;

                    bool verb_first = src.dep.arg1.is_token() &&
                                      src.dep.arg1.token_id == assignment.token_id;
                    const Slot& co_arg = verb_first ? src.dep.arg2 : src.dep.arg1;

                    IndexRecord rec;
                    if (to_role == Role::Oblique && corr.prep_for_demoted) {
                        // The demoted agent surfaces as a prepositional oblique.
                        rec.dep.label = "OBLIQUE-DE";
                        rec.dep.prep = corr.prep_for_demoted;
                    } else {
                        rec.dep.label = role_label(to_role);
                    }
                    int verb_id = editor.synthetic_token(target_entry->lemma, Pos::V);
                    rec.dep.arg1 = Slot::token(verb_id);
                    rec.dep.arg2 = co_arg;
                    rec.provenance = Provenance::EnrichedConverse;
                    rec.source = SenseRef{assignment.lemma, cand.sense_no};
                    if (editor.add(std::move(rec))) ++added;
                }
            }
        }
    }
    if (report) report_row(*report, assignment).converse += added;
    return out;
}

// -------------------------------------------------------------- orchestration

namespace {

long record_count(const DependencyIndex& ix) {
    long n = 0;
    for (const auto& s : ix.sentences) n += static_cast<long>(s.records.size());
    return n;
}

int sentence_max_id(const DependencyIndex& ix, const std::string& sent_id) {
    const Sentence* sent = ix.find_sentence(sent_id);
    return sent ? sent->max_token_id() : -1;
}

// Drops the last `n` records of the assignment's sentence (additions always
// append there) and any token the trimmed operation introduced (id above the
// pre-operation maximum) that no record references any more.
void trim_tail(DependencyIndex& ix, const SenseAssignment& a, long n, int pre_op_max_id) {
    for (auto& sent : ix.sentences) {
        if (sent.id != a.sentence_id) continue;
        sent.records.resize(sent.records.size() - static_cast<size_t>(n));
        std::set<int> referenced;
        for (const auto& r : sent.records)
            for (int p : {1, r.dep.arity()}) {
                const Slot& s = r.dep.slot_at(p);
                if (s.is_token()) referenced.insert(s.token_id);
            }
        sent.tokens.erase(std::remove_if(sent.tokens.begin(), sent.tokens.end(),
                                         [&](const Token& t) {
                                             return t.id > pre_op_max_id &&
                                                    !referenced.count(t.id);
                                         }),
                          sent.tokens.end());
    }
}

} // namespace

DependencyIndex enrich_document(const DependencyIndex& index,
                                const std::vector<SenseAssignment>& assignments,
                                const Lexicon& lexicon, const EnrichmentPlan& plan,
                                EnrichmentReport* report) {
    if (plan.levels.empty()) throw Error("enrichment plan has an empty level set");

    std::vector<SenseAssignment> local;
    for (const auto& a : assignments)
        if (a.doc_id == index.doc_id) local.push_back(a);

    DependencyIndex out = index;
    std::map<std::pair<std::string, int>, long> used;
    auto remaining = [&](const SenseAssignment& a) -> long {
        if (plan.max_additions_per_token <= 0) return -1; // unlimited
        return plan.max_additions_per_token - used[{a.sentence_id, a.token_id}];
    };
    auto note_skip = [&](const SenseAssignment& a, const std::string& what) {
        if (report)
            report->skipped.push_back({a.doc_id, a.sentence_id, a.token_id, a.lemma, what,
                                       "max-additions"});
    };

    if (plan.levels.count(EnrichLevel::Lexical)) {
        for (const auto& a : local) {
            int pre_max = sentence_max_id(out, a.sentence_id);
            DependencyIndex next = enrich_lexical(out, {a}, lexicon, report);
            long added = record_count(next) - record_count(out);
            long allow = remaining(a);
            if (allow >= 0 && added > allow) {
                trim_tail(next, a, added - allow, pre_max);
                if (report) report_row(*report, a).lexical -= static_cast<int>(added - allow);
                note_skip(a, "lex");
                added = allow;
            }
            used[{a.sentence_id, a.token_id}] += added;
            out = std::move(next);
        }
    }
    if (plan.levels.count(EnrichLevel::Mwe)) {
        // Templates resolved against the input index; originals never change.
        for (const auto& a : local) {
            const Sentence& sent = resolve_assignment(out, a);
            std::vector<const SynonymSpec*> templates;
            for (const auto& cand : a.candidates) {
                const Sense& sense = resolve_sense(lexicon, sent, a, cand.sense_no);
                for (const auto& syn : sense.synonyms)
                    if (syn.kind == SynonymSpec::Kind::MultiWord) templates.push_back(&syn);
            }
            for (const SynonymSpec* syn : templates) {
                DependencyIndex next = expand_word_to_mwe(out, a, *syn, lexicon, report);
                long added = record_count(next) - record_count(out);
                long allow = remaining(a);
                if (allow >= 0 && added > allow) {
                    // all-or-nothing: a template never fits partially
                    if (report) report_row(*report, a).mwe -= static_cast<int>(added);
                    note_skip(a, syn->text);
                    continue;
                }
                used[{a.sentence_id, a.token_id}] += added;
                out = std::move(next);
            }
        }
    }
    if (plan.levels.count(EnrichLevel::Converse)) {
        for (const auto& a : local) {
            int pre_max = sentence_max_id(out, a.sentence_id);
            DependencyIndex next = converse_enrich(out, a, lexicon, report);
            long added = record_count(next) - record_count(out);
            long allow = remaining(a);
            if (allow >= 0 && added > allow) {
                trim_tail(next, a, added - allow, pre_max);
                if (report) report_row(*report, a).converse -= static_cast<int>(added - allow);
                note_skip(a, "conv");
                added = allow;
            }
            used[{a.sentence_id, a.token_id}] += added;
            out = std::move(next);
        }
    }
    return out;
}

// ------------------------------------------------------------------- queries

std::vector<Dependency> parse_query(const std::string& text) {
    std::vector<Dependency> out;
    int line_no = 0;
    for (const auto& raw : split_lines(text)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_ws(line);
        if (fields[0] != "D" || (fields.size() != 4 && fields.size() != 5))
            throw SyntaxError(line_no, "expected `D <LABEL> <arg> [<prep>] <arg>`");
        Dependency d;
        d.label = fields[1];
        if (!is_valid_label(d.label)) throw SyntaxError(line_no, "bad label: " + d.label);
        auto to_slot = [](const std::string& s) {
            return s == "?" ? Slot::placeholder() : Slot::lemma(s);
        };
        d.arg1 = to_slot(fields[2]);
        if (fields.size() == 5) {
            if (!is_prepositional_label(d.label))
                throw SyntaxError(line_no, "label " + d.label + " does not take a preposition");
            if (fields[3] != "?") d.prep = fields[3];
            d.arg2 = to_slot(fields[4]);
        } else {
            d.arg2 = to_slot(fields[3]);
        }
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

bool verb_has_class(const Lexicon& lexicon, const std::string& lemma,
                    const std::set<std::string>& classes) {
    const LexEntry* e = lexicon.find(lemma, Pos::V);
    if (!e) return false;
    for (const auto& s : e->senses)
        if (s.class_code && classes.count(*s.class_code)) return true;
    return false;
}

bool pattern_matches(const Dependency& pat, const IndexRecord& rec, const Sentence& sent,
                     const Lexicon& lexicon, const std::string& relaxed_lemma,
                     const std::set<std::string>& classes) {
    const Dependency& d = rec.dep;
    if (pat.label != d.label) return false;
    if (pat.arity() == 3 || d.arity() == 3) {
        if (pat.arity() != d.arity() && pat.prep) return false;
        if (pat.prep && d.prep && *pat.prep != *d.prep) return false;
    }
    for (int p : {1, 2}) {
        const Slot& ps = p == 1 ? pat.arg1 : pat.arg2;
        const Slot& ds = p == 1 ? d.arg1 : d.arg2;
        if (ps.is_placeholder()) continue;
        std::string lemma = slot_lemma(ds, sent);
        if (ps.lemma_text == lemma) continue;
        if (!relaxed_lemma.empty() && ps.lemma_text == relaxed_lemma &&
            verb_has_class(lexicon, lemma, classes))
            continue;
        return false;
    }
    return true;
}

// The first concrete lemma in a verb-capable slot of the query.
std::string query_head_verb(const std::vector<Dependency>& query, const Lexicon& lexicon) {
    for (const auto& pat : query)
        for (const Slot* s : {&pat.arg1, &pat.arg2})
            if (s->is_lemma() && lexicon.find(s->lemma_text, Pos::V)) return s->lemma_text;
    return "";
}

// Narrows the head verb's class codes by disambiguating it against the query
// patterns themselves; falls back to all its class codes when rules are silent.
std::set<std::string> head_verb_classes(const std::vector<Dependency>& query,
                                        const std::string& head, const Lexicon& lexicon,
                                        const RuleDb& db) {
    const LexEntry* entry = lexicon.find(head, Pos::V);
    if (!entry) return {};

    DependencyIndex pseudo;
    pseudo.doc_id = "query";
    Sentence sent;
    sent.id = "q";
    std::map<std::string, int> ids;
    int next = 1;
    auto intern = [&](const Slot& s) -> Slot {
        if (!s.is_lemma()) return s;
        auto it = ids.find(s.lemma_text);
        int id = it != ids.end() ? it->second : (ids[s.lemma_text] = next++);
        if (it == ids.end())
            sent.tokens.push_back(Token{id, s.lemma_text, infer_pos(lexicon, s.lemma_text)});
        return Slot::token(id);
    };
    for (const auto& pat : query) {
        Dependency d = pat;
        d.arg1 = intern(pat.arg1);
        d.arg2 = intern(pat.arg2);
        sent.records.push_back(IndexRecord{std::move(d), Provenance::Original, {}});
    }
    pseudo.sentences.push_back(std::move(sent));

    std::set<std::string> out;
    auto head_token = ids.find(head);
    if (head_token != ids.end() && entry->senses.size() > 1) {
        auto a = disambiguate_token(db, lexicon, pseudo, pseudo.sentences[0],
                                    pseudo.sentences[0].token(head_token->second),
                                    TiePolicy::all());
        if (a)
            for (const auto& cand : a->candidates) {
                const Sense* s = entry->find_sense(cand.sense_no);
                if (s && s->class_code) out.insert(*s->class_code);
            }
    }
    if (out.empty())
        for (const auto& s : entry->senses)
            if (s.class_code) out.insert(*s.class_code);
    return out;
}

} // namespace

std::vector<QueryMatch> match_query(const std::vector<DependencyIndex>& indexes,
                                    const std::vector<Dependency>& query,
                                    const Lexicon& lexicon, const RuleDb& db) {
    std::vector<QueryMatch> matches;
    auto scan = [&](const std::string& relaxed, const std::set<std::string>& classes,
                    bool fallback) {
        for (size_t i = 0; i < query.size(); ++i)
            for (const auto& ix : indexes)
                for (const auto& sent : ix.sentences)
                    for (const auto& rec : sent.records)
                        if (pattern_matches(query[i], rec, sent, lexicon, relaxed, classes))
                            matches.push_back(
                                QueryMatch{i, ix.doc_id, sent.id, rec, fallback});
    };
    scan("", {}, false);
    if (!matches.empty()) return matches;

    std::string head = query_head_verb(query, lexicon);
    if (head.empty()) return matches;
    std::set<std::string> classes = head_verb_classes(query, head, lexicon, db);
    if (classes.empty()) return matches;
    scan(head, classes, true);
    return matches;
}

} // namespace lexenrich
