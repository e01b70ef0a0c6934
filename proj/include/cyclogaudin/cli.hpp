// Command-line layer: model configs, the run store, the commands behind the
// `cyclogaudin` executable and the exact identity suite used by `selftest`.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclogaudin/bethe.hpp"
#include "cyclogaudin/weight_function.hpp"

namespace cg::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kParse = 3, kNoSolution = 4, kVerificationFailure = 5 };

// Malformed JSON, schema violations and unreadable inputs (exit 3).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BetheConfig {
    int m = 0;
    // 0-based nodes; empty with m > 0 means every nondecreasing coloring.
    std::vector<int> colors;
};

struct Config {
    ModelSpec model;
    BetheConfig bethe;
    SolverOptions solver;
    // Parsed document with sorted keys; the hash is taken over its compact dump.
    nlohmann::json document;
    std::string hash;
};

// Throws ParseError on schema violations and ValidationError on out-of-range nodes.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);
// 16 hex digits of the 64-bit FNV-1a hash of the compact sorted-key dump.
std::string config_hash(const nlohmann::json& doc);

// The (sl3, flip, T = 2) example with L_{omega_1} at z1, z2 and the given Bethe data, as a config document.
nlohmann::json sl3_example_config(const Rational& z1, const Rational& z2, int m);

// runs/<hash>/ with config.json written on creation and an append-only log of invocations.
class RunStore {
public:
    RunStore(std::filesystem::path root, const Config& cfg);
    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file(const std::string& name) const { return dir_ / name; }
    bool has(const std::string& name) const;
    std::string read(const std::string& name) const;
    void write(const std::string& name, const std::string& content) const;
    void log(const std::string& command, const std::vector<std::string>& outputs, const nlohmann::json& certificates) const;

private:
    std::filesystem::path dir_;
    std::string hash_;
};

struct SelftestOptions {
    // Flip one structure-constant sign before the double-pole identity.
    bool corrupt = false;
    // Restrict every check to T = 1.
    bool classical_only = false;
    std::uint64_t seed = 1;
};

// Exact identity suite: cyclotomic sums, circle lemma, residue theorem, splitting
// round trip, lambda_0 invariance, double-pole identity, commutativity, resummation.
std::vector<Certificate> selftest_suite(const SelftestOptions& opt);

struct ReproLine {
    std::string quantity;
    std::string computed;
    std::string expected;
    bool match = false;
};

// Spectrum, Bethe roots for m = 1, 2, weight-function vectors, eigenpairs, lambda_0 and
// the double-pole identity of the sl3 example, against the closed forms at (z1, z2).
// Throws ValidationError when z1, z2 have colliding orbits.
std::vector<ReproLine> repro_sl3(const Rational& z1, const Rational& z2, int threads = 0);

// Entry point of the executable; returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cg::cli
