#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lexenrich {

/// Base class for all input-data errors. The CLI maps these to exit code 1;
/// anything else escaping to main is an internal fault (exit code 2).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed record in one of the line-oriented file formats.
class SyntaxError : public Error {
public:
    SyntaxError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// One or more semantic invariant violations, collected across the whole input.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "validation failed (" + std::to_string(v.size()) + " violation(s)):";
        for (const auto& x : v) s += "\n  " + x;
        return s;
    }
    std::vector<std::string> violations_;
};

class DuplicateEntryError : public Error {
public:
    DuplicateEntryError(int line, const std::string& lemma, const std::string& pos)
        : Error("line " + std::to_string(line) + ": duplicate entry " + lemma + "/" + pos) {}
};

class DuplicateRuleError : public Error {
public:
    DuplicateRuleError(int line, const std::string& rule)
        : Error("line " + std::to_string(line) + ": duplicate rule: " + rule) {}
};

class DanglingTokenRef : public Error {
public:
    DanglingTokenRef(const std::string& sent, int token_id)
        : Error("sentence " + sent + ": dependency references unknown token " +
                std::to_string(token_id)) {}
};

class UnknownSentence : public Error {
public:
    explicit UnknownSentence(const std::string& sent)
        : Error("unknown sentence: " + sent) {}
};

class EmptyLexicon : public Error {
public:
    EmptyLexicon() : Error("lexicon has no entries") {}
};

/// Assignments fed to an operation that were not produced from the given index.
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& msg) : Error(msg) {}
};

} // namespace lexenrich
