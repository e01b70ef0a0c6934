#include "cyclogaudin/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace cg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) schema(where, "missing field '" + key + "'");
    return obj.at(key);
}

int get_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) schema(where, "expected an integer");
    return v.get<int>();
}

Rational get_rational(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            schema(where, e.what());
        }
    }
    schema(where, "expected an integer or a \"p/q\" string");
}

std::vector<int> get_int_array(const json& v, const std::string& where) {
    if (!v.is_array()) schema(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(get_int(v[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

SiteSpec parse_site(const json& s, int index) {
    std::string where = "sites[" + std::to_string(index) + "]";
    if (!s.is_object()) schema(where, "expected an object");
    const json& w = require(s, "weight", where);
    if (!w.is_array()) schema(where + ".weight", "expected an array");
    WeightVec weight;
    for (std::size_t k = 0; k < w.size(); ++k) weight.push_back(get_rational(w[k], where + ".weight[" + std::to_string(k) + "]"));
    ModuleKind kind = ModuleKind::Irrep;
    if (s.contains("module")) {
        const json& m = s.at("module");
        if (m == "irrep")
            kind = ModuleKind::Irrep;
        else if (m == "verma")
            kind = ModuleKind::Verma;
        else
            schema(where + ".module", "expected \"irrep\" or \"verma\"");
    }
    const json& z = require(s, "z", where);
    if (z.is_array()) {
        if (z.size() != 2 || !z[0].is_number() || !z[1].is_number()) schema(where + ".z", "expected [re, im]");
        return SiteSpec::complex(Complex(z[0].get<double>(), z[1].get<double>()), weight, kind);
    }
    return SiteSpec::rational(get_rational(z, where + ".z"), weight, kind);
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::string fmt(double x, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

std::string fmt(Complex z, int digits = 12) {
    if (std::abs(z.imag()) <= 1e-14 * (1 + std::abs(z.real()))) return fmt(z.real(), digits);
    return fmt(z.real(), digits) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag()), digits) + "i";
}

std::string weight_string(const WeightVec& w) {
    std::string s = "(";
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? ", " : "") + to_string(w[k]);
    return s + ")";
}

std::string join(const std::vector<int>& v, int offset) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k] + offset);
    return s + ")";
}

std::string spectrum_csv(std::vector<Eigencluster> sp) {
    std::sort(sp.begin(), sp.end(), [](const Eigencluster& a, const Eigencluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    std::ostringstream os;
    os << "re,im,multiplicity\n" << std::setprecision(17);
    for (const auto& c : sp) os << c.value.real() << ',' << c.value.imag() << ',' << c.multiplicity << '\n';
    return os.str();
}

void check_colors(const Config& cfg, const Model& M) {
    for (int c : cfg.bethe.colors)
        if (c < 0 || c >= M.g->rank())
            throw ValidationError("bethe.colors: node " + std::to_string(c + 1) + " is outside the Dynkin diagram");
}

struct Common {
    std::string config;
    std::string runs = "runs";
    bool force = false;
    int threads = 0;
};

SolverOptions solver_options(const Config& cfg, const Common& c) {
    SolverOptions o = cfg.solver;
    o.threads = c.threads;
    return o;
}

void emit(const std::string& content, const std::string& out_path) {
    if (!out_path.empty()) write_file(out_path, content);
}

int cmd_validate(const Common& c, std::ostream& out) {
    Config cfg = load_config(c.config);
    auto M = validate_model(cfg.model);
    check_colors(cfg, *M);
    const LieAlgebra& g = *M->g;
    const AutoTable& A = *M->A;
    out << "config hash      " << cfg.hash << "\n";
    out << "algebra          " << series_name(cfg.model.series) << cfg.model.rank << " (dim " << g.dim() << ")\n";
    out << "automorphism     T = " << M->T() << ", permutation " << join(A.spec().permutation, 1) << ", phases "
        << join(A.spec().phases, 0) << (A.is_inner() ? ", inner" : ", diagram part nontrivial") << "\n";
    out << "lambda_0         " << weight_string(lambda0(A)) << "\n";
    for (int i = 0; i < M->N(); ++i) {
        const auto& s = cfg.model.sites[i];
        out << "site " << i + 1 << "           z = " << (s.z_exact ? to_string(*s.z_exact) : fmt(s.z)) << ", weight "
            << weight_string(s.weight) << ", " << (M->irreps[i] ? "irrep of dim " + std::to_string(M->irreps[i]->dim()) : "verma")
            << "\n";
    }
    out << "bethe            m = " << cfg.bethe.m;
    if (!cfg.bethe.colors.empty()) out << ", colors " << join(cfg.bethe.colors, 1);
    out << "\nvalid\n";
    return kOk;
}

int cmd_spectrum(const Common& c, int site, const std::string& out_path, double tol, int cap, std::ostream& out) {
    Config cfg = load_config(c.config);
    auto M = validate_model(cfg.model);
    if (site < 1 || site > M->N()) throw ValidationError("--site must lie in 1.." + std::to_string(M->N()));
    if (!M->all_irrep()) throw ValidationError("spectrum needs irreducible modules at every site");
    if (M->dense_dim() > cap)
        throw ValidationError("tensor product dimension " + std::to_string(M->dense_dim()) + " exceeds the cap " + std::to_string(cap));
    RunStore store(c.runs, cfg);
    std::string name = site == 1 ? "spectrum.csv" : "spectrum_site" + std::to_string(site) + ".csv";
    std::string csv;
    if (store.has(name) && !c.force) {
        csv = store.read(name);
    } else {
        csv = spectrum_csv(spectrum(*M, site - 1, tol, cap));
        store.write(name, csv);
    }
    emit(csv, out_path);
    store.log("spectrum --site " + std::to_string(site), {name}, json::array());
    out << "H_" << site << " on a space of dimension " << M->dense_dim() << "\n" << csv;
    return kOk;
}

int cmd_bethe(const Common& c, const std::string& out_path, std::ostream& out) {
    Config cfg = load_config(c.config);
    auto M = validate_model(cfg.model);
    check_colors(cfg, *M);
    RunStore store(c.runs, cfg);
    std::string text;
    if (store.has("solutions.json") && !c.force) {
        text = store.read("solutions.json");
    } else {
        auto opt = solver_options(cfg, c);
        SolutionSet s = cfg.bethe.colors.empty() && cfg.bethe.m > 0 ? solve_all_colorings(M, cfg.bethe.m, opt)
                                                                    : solve(BetheProblem{M, cfg.bethe.colors}, opt);
        text = to_json(s).dump(2) + "\n";
        store.write("solutions.json", text);
    }
    emit(text, out_path);
    SolutionSet s = solutions_from_json(json::parse(text));
    store.log("bethe", {"solutions.json"}, json::array());
    out << "m = " << cfg.bethe.m << ": " << s.solutions.size() << " canonical solution(s) from " << s.starts << " starts ("
        << s.failed << " failed, " << s.merged << " merged)\n";
    if (!s.note.empty()) out << "note: " << s.note << "\n";
    for (std::size_t k = 0; k < s.solutions.size(); ++k) {
        const auto& sol = s.solutions[k];
        out << "  #" << k + 1 << " colors " << join(sol.colors, 1) << " roots";
        for (const auto& w : sol.roots) out << "  " << fmt(w);
        out << "  (residual " << fmt(sol.residual, 3) << ")\n";
    }
    if (cfg.bethe.m == 0 || !s.solutions.empty()) return kOk;
    return kNoSolution;
}

int cmd_verify(const Common& c, const std::string& solutions_path, const std::string& out_path, std::ostream& out) {
    Config cfg = load_config(c.config);
    auto M = validate_model(cfg.model);
    RunStore store(c.runs, cfg);
    fs::path src = solutions_path.empty() ? store.file("solutions.json") : fs::path(solutions_path);
    if (!fs::exists(src)) throw ParseError("solutions file " + src.string() + " does not exist (run `bethe` first)");
    SolutionSet s;
    try {
        s = solutions_from_json(json::parse(read_file(src)));
    } catch (const json::exception& e) {
        throw ParseError(src.string() + ": " + e.what());
    }
    ComplexField F(M->T());
    json certs = json::array();
    bool all = true;
    for (std::size_t k = 0; k < s.solutions.size(); ++k) {
        const auto& sol = s.solutions[k];
        for (int c0 : sol.colors)
            if (c0 < 0 || c0 >= M->g->rank()) throw ValidationError("solution colors outside the Dynkin diagram");
        for (int i = 0; i < M->N(); ++i) {
            json cert = {{"solution", k + 1}, {"site", i + 1}, {"colors", json::array()}};
            for (int c0 : sol.colors) cert["colors"].push_back(c0 + 1);
            try {
                auto rep = verify_eigenpair(F, *M, sol.colors, sol.roots, i);
                auto psi = to_model_modules(*M, build_psi(F, *M, sol.colors, sol.roots));
                cert["eigenpair"] = to_json(rep);
                cert["singular"] = to_json(singular_diagnostic(F, *M, model_modules(*M), psi));
                cert["pass"] = rep.residual_H < 1e-8;
            } catch (const std::domain_error& e) {
                cert["pass"] = false;
                cert["error"] = e.what();
            }
            all = all && cert["pass"].get<bool>();
            out << (cert["pass"].get<bool>() ? "PASS" : "FAIL") << "  solution " << k + 1 << " site " << i + 1;
            if (cert.contains("eigenpair"))
                out << "  E = " << fmt(Complex(cert["eigenpair"]["eigenvalue"][0], cert["eigenpair"]["eigenvalue"][1]))
                    << "  residual(H) = " << fmt(cert["eigenpair"]["residual_H"].get<double>(), 3)
                    << "  residual(iota H) = " << fmt(cert["eigenpair"]["residual_iota_H"].get<double>(), 3);
            else
                out << "  " << cert["error"].get<std::string>();
            out << "\n";
            certs.push_back(cert);
        }
    }
    std::string text = json({{"threshold", 1e-8}, {"certificates", certs}}).dump(2) + "\n";
    store.write("certificates.json", text);
    emit(text, out_path);
    store.log("verify", {"certificates.json"}, certs);
    if (s.solutions.empty()) {
        out << "no solutions to verify\n";
        return kNoSolution;
    }
    return all ? kOk : kVerificationFailure;
}

int cmd_repro(const std::string& z1s, const std::string& z2s, int threads, std::ostream& out) {
    Rational z1, z2;
    try {
        z1 = parse_rational(z1s);
        z2 = parse_rational(z2s);
    } catch (const std::exception& e) {
        throw ParseError(std::string("--z1/--z2: ") + e.what());
    }
    auto lines = repro_sl3(z1, z2, threads);
    std::size_t w0 = 8, w1 = 8;
    for (const auto& l : lines) {
        w0 = std::max(w0, l.quantity.size());
        w1 = std::max(w1, l.computed.size());
    }
    out << std::left << std::setw(static_cast<int>(w0)) << "quantity" << "  " << std::setw(static_cast<int>(w1)) << "computed"
        << "  expected\n";
    bool all = true;
    for (const auto& l : lines) {
        out << std::setw(static_cast<int>(w0)) << l.quantity << "  " << std::setw(static_cast<int>(w1)) << l.computed << "  "
            << l.expected << "  " << (l.match ? "MATCH" : "MISMATCH") << "\n";
        all = all && l.match;
    }
    return all ? kOk : kVerificationFailure;
}

int cmd_selftest(bool corrupt, bool classical, std::ostream& out) {
    SelftestOptions opt;
    opt.corrupt = corrupt;
    opt.classical_only = classical;
    bool all = true;
    for (const auto& c : selftest_suite(opt)) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "\n";
        if (!c.pass) out << "      " << c.data.dump() << "\n";
        all = all && c.pass;
    }
    return all ? kOk : kVerificationFailure;
}

}  // namespace

std::string config_hash(const json& doc) {
    std::string s = doc.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config parse_config(const json& doc) {
    if (!doc.is_object()) schema("config", "expected a JSON object");
    Config cfg;
    cfg.document = doc;
    cfg.hash = config_hash(doc);
    const json& alg = require(doc, "algebra", "config");
    const json& series = require(alg, "series", "algebra");
    if (!series.is_string()) schema("algebra.series", "expected a string");
    try {
        cfg.model.series = parse_series(series.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("algebra.series: ") + e.what());
    }
    cfg.model.rank = get_int(require(alg, "rank", "algebra"), "algebra.rank");
    int rank = cfg.model.rank;
    if (rank < 1) throw ValidationError("algebra.rank must be positive");
    AutoSpec& a = cfg.model.automorphism;
    a.T = get_int(require(doc, "T", "config"), "T");
    a.permutation.resize(rank);
    for (int i = 0; i < rank; ++i) a.permutation[i] = i;
    a.phases.assign(rank, 0);
    if (doc.contains("automorphism")) {
        const json& au = doc.at("automorphism");
        if (!au.is_object()) schema("automorphism", "expected an object");
        if (au.contains("permutation")) {
            auto p = get_int_array(au.at("permutation"), "automorphism.permutation");
            for (auto& x : p) --x;
            a.permutation = p;
        }
        if (au.contains("phases")) a.phases = get_int_array(au.at("phases"), "automorphism.phases");
    }
    const json& sites = require(doc, "sites", "config");
    if (!sites.is_array()) schema("sites", "expected an array");
    for (std::size_t i = 0; i < sites.size(); ++i) cfg.model.sites.push_back(parse_site(sites[i], static_cast<int>(i)));
    if (doc.contains("bethe")) {
        const json& b = doc.at("bethe");
        if (!b.is_object()) schema("bethe", "expected an object");
        cfg.bethe.m = b.contains("m") ? get_int(b.at("m"), "bethe.m") : 0;
        if (cfg.bethe.m < 0) throw ValidationError("bethe.m must be nonnegative");
        if (b.contains("colors")) {
            auto cs = get_int_array(b.at("colors"), "bethe.colors");
            if (!b.contains("m")) cfg.bethe.m = static_cast<int>(cs.size());
            if (static_cast<int>(cs.size()) != cfg.bethe.m) throw ValidationError("bethe.colors must have m entries");
            for (int x : cs) {
                if (x < 1 || x > rank)
                    throw ValidationError("bethe.colors: node " + std::to_string(x) + " is outside 1.." + std::to_string(rank));
                cfg.bethe.colors.push_back(x - 1);
            }
        }
    }
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        if (!s.is_object()) schema("solver", "expected an object");
        if (s.contains("starts")) cfg.solver.starts = get_int(s.at("starts"), "solver.starts");
        if (s.contains("seed")) {
            if (!s.at("seed").is_number_unsigned() && !s.at("seed").is_number_integer()) schema("solver.seed", "expected an integer");
            cfg.solver.seed = s.at("seed").get<std::uint64_t>();
        }
        if (s.contains("max_iter")) cfg.solver.max_iter = get_int(s.at("max_iter"), "solver.max_iter");
        if (s.contains("tol")) {
            if (!s.at("tol").is_number()) schema("solver.tol", "expected a number");
            cfg.solver.tol = s.at("tol").get<double>();
        }
    }
    return cfg;
}

Config load_config(const fs::path& path) {
    std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json sl3_example_config(const Rational& z1, const Rational& z2, int m) {
    json doc = {{"algebra", {{"series", "A"}, {"rank", 2}}},
                {"T", 2},
                {"automorphism", {{"permutation", {2, 1}}, {"phases", {0, 0}}}},
                {"sites",
                 {{{"z", to_string(z1)}, {"weight", {1, 0}}, {"module", "irrep"}},
                  {{"z", to_string(z2)}, {"weight", {1, 0}}, {"module", "irrep"}}}},
                {"bethe", {{"m", m}}}};
    if (m == 1) doc["bethe"]["colors"] = {1};
    if (m == 2) doc["bethe"]["colors"] = {1, 2};
    return doc;
}

RunStore::RunStore(fs::path root, const Config& cfg) : dir_(std::move(root) / cfg.hash), hash_(cfg.hash) {
    fs::create_directories(dir_);
    if (!has("config.json")) write("config.json", cfg.document.dump(2) + "\n");
}

bool RunStore::has(const std::string& name) const { return fs::exists(dir_ / name); }

std::string RunStore::read(const std::string& name) const { return read_file(dir_ / name); }

void RunStore::write(const std::string& name, const std::string& content) const { write_file(dir_ / name, content); }

void RunStore::log(const std::string& command, const std::vector<std::string>& outputs, const json& certificates) const {
    json summary = json::array();
    for (const auto& c : certificates)
        if (c.contains("pass")) summary.push_back({{"solution", c.value("solution", 0)}, {"site", c.value("site", 0)}, {"pass", c["pass"]}});
    json rec = {{"config_hash", hash_}, {"command", command}, {"timestamp", timestamp()}, {"outputs", outputs}, {"certificates", summary}};
    std::ofstream out(dir_ / "runs.jsonl", std::ios::app);
    out << rec.dump() << "\n";
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cyclotomic Gaudin models: spectra, Bethe roots and Bethe vectors"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub, bool store) {
        sub->add_option("config", common.config, "model config (JSON)")->required();
        if (store) {
            sub->add_option("--runs", common.runs, "run store root")->capture_default_str();
            sub->add_flag("--force", common.force, "recompute even if the run store has a result");
        }
    };
    auto* validate = app.add_subcommand("validate", "check a model config");
    add_common(validate, false);

    int site = 1, cap = 4096;
    double tol = 1e-8;
    std::string out_path, solutions_path;
    auto* spec = app.add_subcommand("spectrum", "eigenvalues of H_i with multiplicities, as CSV");
    add_common(spec, true);
    spec->add_option("--site", site, "site index i (1-based)")->capture_default_str();
    spec->add_option("--out", out_path, "also write the CSV here");
    spec->add_option("--tol", tol, "clustering tolerance")->capture_default_str();
    spec->add_option("--cap", cap, "maximal total dimension")->capture_default_str();

    auto* bethe = app.add_subcommand("bethe", "solve the Bethe equations");
    add_common(bethe, true);
    bethe->add_option("--out", out_path, "also write the solutions JSON here");
    bethe->add_option("--threads", common.threads, "worker threads (default: CYCLOGAUDIN_THREADS or all cores)");

    auto* verify = app.add_subcommand("verify", "check that Bethe vectors are eigenvectors");
    add_common(verify, true);
    verify->add_option("--solutions", solutions_path, "solutions JSON (default: the run store's)");
    verify->add_option("--out", out_path, "also write the certificates JSON here");

    std::string z1 = "1", z2 = "2";
    auto* repro = app.add_subcommand("repro-sl3", "the sl3 diagram-flip example against its closed forms");
    repro->add_option("--z1", z1, "rational site z1")->capture_default_str();
    repro->add_option("--z2", z2, "rational site z2")->capture_default_str();
    repro->add_option("--threads", common.threads, "worker threads");

    bool corrupt = false, classical = false;
    auto* self = app.add_subcommand("selftest", "exact identity suite");
    self->add_flag("--corrupt", corrupt, "flip one structure-constant sign (the suite must then fail)");
    self->add_flag("--classical", classical, "T = 1 subset only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kParse;
    }
    try {
        if (*validate) return cmd_validate(common, out);
        if (*spec) return cmd_spectrum(common, site, out_path, tol, cap, out);
        if (*bethe) return cmd_bethe(common, out_path, out);
        if (*verify) return cmd_verify(common, solutions_path, out_path, out);
        if (*repro) return cmd_repro(z1, z2, common.threads, out);
        if (*self) return cmd_selftest(corrupt, classical, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const json::exception& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kParse;
}

}  // namespace cg::cli
