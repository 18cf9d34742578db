#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lexenrich/deps.hpp"
#include "lexenrich/lexicon.hpp"

namespace testsupport {

inline std::filesystem::path fixtures_dir() {
    if (const char* env = std::getenv("LEXENRICH_FIXTURES")) return env;
    for (const char* candidate : {"fixtures", "../fixtures", "../../fixtures"})
        if (std::filesystem::exists(std::filesystem::path(candidate) / "minilex.lex"))
            return candidate;
    return "fixtures";
}

inline std::string fixture_path(const std::string& name) {
    return (fixtures_dir() / name).string();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string cli_path() {
    if (const char* env = std::getenv("LEXENRICH_CLI")) return env;
    return "./lexenrich";
}

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    std::string full = command + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("lexenrich-test-" + std::to_string(::getpid()) + "-" +
                                     std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    void write(const std::string& name, const std::string& content) const {
        std::ofstream out(file(name), std::ios::binary);
        out << content;
    }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

// ------------------------------------------------------- random generators

inline std::string random_lemma(std::mt19937& rng) {
    static const char* pool[] = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta",
                                 "eta",   "theta", "iota",  "kappa", "lambda",  "mu"};
    return pool[rng() % (sizeof(pool) / sizeof(pool[0]))];
}

inline std::string random_domain(std::mt19937& rng) {
    static const char* pool[] = {"MTO", "AER", "LOC", "GEO", "POL", "ECO", "SOC", "MIL"};
    return pool[rng() % (sizeof(pool) / sizeof(pool[0]))];
}

inline lexenrich::DomainSet random_domain_set(std::mt19937& rng, int max_size = 4) {
    lexenrich::DomainSet out;
    int n = static_cast<int>(rng() % (max_size + 1));
    for (int i = 0; i < n; ++i) out.insert(random_domain(rng));
    return out;
}

inline std::string random_label(std::mt19937& rng) {
    static const char* pool[] = {"SUBJECT", "OBJECT", "OBLIQUE", "EPITHET", "NN"};
    return pool[rng() % (sizeof(pool) / sizeof(pool[0]))];
}

// A small random document index with original records only.
inline lexenrich::DependencyIndex random_index(std::mt19937& rng, int max_records = 10) {
    using namespace lexenrich;
    DependencyIndex ix;
    ix.doc_id = "doc" + std::to_string(rng() % 3);
    int sentences = 1 + static_cast<int>(rng() % 2);
    for (int s = 0; s < sentences; ++s) {
        Sentence sent;
        sent.id = std::to_string(s + 1);
        int tokens = 2 + static_cast<int>(rng() % 4);
        for (int t = 0; t < tokens; ++t) {
            Pos pos = static_cast<Pos>(rng() % 2); // V or N
            sent.tokens.push_back(Token{t + 1, random_lemma(rng), pos});
        }
        int records = static_cast<int>(rng() % (max_records + 1));
        for (int r = 0; r < records; ++r) {
            Dependency d;
            bool prepositional = rng() % 5 == 0;
            d.label = prepositional ? "PP" : random_label(rng);
            if (prepositional) d.prep = rng() % 2 ? "de" : "sur";
            d.arg1 = Slot::token(1 + static_cast<int>(rng() % tokens));
            d.arg2 = Slot::token(1 + static_cast<int>(rng() % tokens));
            sent.records.push_back(IndexRecord{std::move(d), Provenance::Original, {}});
        }
        ix.sentences.push_back(std::move(sent));
    }
    return ix;
}

} // namespace testsupport
