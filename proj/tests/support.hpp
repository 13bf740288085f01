#pragma once

#include "localgcl/autodiff.hpp"
#include "localgcl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

using localgcl::Edge;
using localgcl::Graph;
using localgcl::Matrix;
using localgcl::Rng;

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

/// Erdos-Renyi style graph with random real features.
inline Graph random_graph(Rng& rng, int min_nodes = 1, int max_nodes = 20, int d = 4, double p = -1.0) {
    std::uniform_int_distribution<int> nd(min_nodes, max_nodes);
    const int n = nd(rng);
    const double prob = p >= 0.0 ? p : std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    std::bernoulli_distribution coin(prob);
    std::vector<Edge> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng)) edges.push_back({a, b});
    return Graph::from_edges(n, edges, random_matrix(n, d, rng), std::nullopt);
}

/// Connected graph: random spanning tree plus extra edges.
inline Graph random_connected_graph(Rng& rng, int min_nodes, int max_nodes, int d = 4) {
    std::uniform_int_distribution<int> nd(min_nodes, max_nodes);
    const int n = nd(rng);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) edges.push_back(Edge::canonical(v, std::uniform_int_distribution<int>(0, v - 1)(rng)));
    std::bernoulli_distribution coin(0.15);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng)) edges.push_back({a, b});
    return Graph::from_edges(n, edges, random_matrix(n, d, rng), std::nullopt);
}

/// Relabels nodes: new index of old node v is perm[v].
inline Graph permute(const Graph& g, const std::vector<int>& perm) {
    Matrix x(g.features.rows(), g.features.cols());
    for (int v = 0; v < g.num_nodes; ++v) x.row(perm[static_cast<std::size_t>(v)]) = g.features.row(v);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges)
        edges.push_back(Edge::canonical(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]));
    return Graph::from_edges(g.num_nodes, edges, x, g.label);
}

inline std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Max over entries of |analytic - numeric| / max(1, |analytic|, |numeric|),
/// using central differences of `f` around each input.
inline double gradient_error(const std::function<localgcl::ad::DiffArray(localgcl::ad::GradContext&,
                                                                          const std::vector<localgcl::ad::DiffArray>&)>& f,
                             std::vector<Matrix> inputs, double h = 1e-5) {
    using namespace localgcl::ad;
    std::vector<Matrix> analytic;
    {
        GradContext ctx;
        std::vector<DiffArray> leaves;
        for (const auto& m : inputs) leaves.push_back(ctx.leaf(m));
        const Gradients g = ctx.backward(f(ctx, leaves));
        for (const auto& l : leaves) analytic.push_back(g.of(l));
    }
    auto eval = [&](const std::vector<Matrix>& at) {
        GradContext ctx;
        std::vector<DiffArray> leaves;
        for (const auto& m : at) leaves.push_back(ctx.leaf(m));
        return f(ctx, leaves).scalar();
    };
    double worst = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k)
        for (Eigen::Index i = 0; i < inputs[k].size(); ++i) {
            const double orig = inputs[k].data()[i];
            inputs[k].data()[i] = orig + h;
            const double up = eval(inputs);
            inputs[k].data()[i] = orig - h;
            const double down = eval(inputs);
            inputs[k].data()[i] = orig;
            const double numeric = (up - down) / (2 * h);
            const double a = analytic[k].data()[i];
            worst = std::max(worst, std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)}));
        }
    return worst;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("localgcl_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// The two-graph TUDataset fixture with 1-based arcs in both directions.
inline void write_fixture(const std::filesystem::path& dir, const std::string& name = "FIX") {
    std::filesystem::create_directories(dir);
    write_file(dir / (name + "_A.txt"), "1, 2\n2, 1\n3, 4\n4, 3\n");
    write_file(dir / (name + "_graph_indicator.txt"), "1\n1\n2\n2\n");
    write_file(dir / (name + "_graph_labels.txt"), "1\n-1\n");
    write_file(dir / (name + "_node_labels.txt"), "0\n1\n0\n0\n");
}

}  // namespace testsupport
