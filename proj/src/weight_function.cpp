#include "cyclogaudin/weight_function.hpp"

#include <algorithm>

namespace cg {

namespace {

void distribute(const std::vector<int>& perm, int N, int pos, std::vector<int>& cuts, std::vector<OrderedPartition>& out) {
    int m = static_cast<int>(perm.size());
    if (static_cast<int>(cuts.size()) == N - 1) {
        OrderedPartition p;
        int start = 0;
        for (int b = 0; b < N; ++b) {
            int end = b + 1 < N ? cuts[b] : m;
            p.blocks.emplace_back(perm.begin() + start, perm.begin() + end);
            start = end;
        }
        out.push_back(std::move(p));
        return;
    }
    for (int c = pos; c <= m; ++c) {
        cuts.push_back(c);
        distribute(perm, N, c, cuts, out);
        cuts.pop_back();
    }
}

}  // namespace

std::vector<OrderedPartition> enumerate_partitions(int m, int N) {
    if (m < 0 || N < 1) throw std::invalid_argument("partitions need m >= 0 and N >= 1");
    std::vector<int> perm(m);
    for (int j = 0; j < m; ++j) perm[j] = j;
    std::vector<OrderedPartition> out;
    do {
        std::vector<int> cuts;
        distribute(perm, N, 0, cuts, out);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

long partition_count(int m, int N) {
    long fact = 1;
    for (int j = 2; j <= m; ++j) fact *= j;
    long binom = 1;
    for (int k = 1; k <= N - 1; ++k) binom = binom * (m + k) / k;
    return fact * binom;
}

std::vector<ModulePtr> verma_modules(const Model& M) { return M.vermas; }

std::vector<ModulePtr> model_modules(const Model& M) { return M.modules; }

namespace {

std::vector<std::string> labels(const std::vector<ModulePtr>& mods, const std::vector<Key>& keys) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < keys.size(); ++i) out.push_back(mods[i]->key_label(keys[i]));
    return out;
}

}  // namespace

nlohmann::json psi_to_json(const std::vector<ModulePtr>& mods, const TensorState<CycloNum>& s) {
    auto arr = nlohmann::json::array();
    for (const auto& [keys, c] : s) {
        Complex z = c.to_complex();
        arr.push_back({{"basis", labels(mods, keys)}, {"coefficient", c.to_string()}, {"value", {z.real(), z.imag()}}});
    }
    return arr;
}

nlohmann::json psi_to_json(const std::vector<ModulePtr>& mods, const TensorState<Complex>& s) {
    auto arr = nlohmann::json::array();
    for (const auto& [keys, c] : s) arr.push_back({{"basis", labels(mods, keys)}, {"value", {c.real(), c.imag()}}});
    return arr;
}

nlohmann::json to_json(const EigenpairReport& r) {
    nlohmann::json j = {{"site", r.site + 1},
                        {"eigenvalue", {r.eigenvalue.real(), r.eigenvalue.imag()}},
                        {"psi_norm", r.psi_norm},
                        {"residual_H", r.residual_H},
                        {"residual_iota_H", r.residual_iota_H}};
    if (r.exact) {
        j["exact_H_zero"] = r.exact_H_zero;
        j["exact_iota_H_zero"] = r.exact_iota_H_zero;
    }
    return j;
}

nlohmann::json to_json(const SingularReport& r) {
    auto arr = nlohmann::json::array();
    for (const auto& [root, v] : r.norms) arr.push_back({{"positive_root", root}, {"relative_norm", v}});
    return {{"raising", arr}, {"max_relative_norm", r.max_norm}};
}

}  // namespace cg
