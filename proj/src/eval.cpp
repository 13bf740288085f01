#include "localgcl/eval.hpp"

#include "localgcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace localgcl {

std::string to_string(Representation r) {
    return r == Representation::Projected ? "projected" : "encoder";
}

Representation parse_representation(const std::string& s) {
    if (s == "projected") return Representation::Projected;
    if (s == "encoder") return Representation::Encoder;
    throw ConfigError("unknown representation '" + s + "' (expected projected or encoder)");
}

Matrix embed_dataset(const ModelParams& params, const GraphDataset& ds, Representation rep) {
    if (ds.feature_dim != params.dims.input_dim)
        throw ShapeError("embed_dataset: dataset feature dim " + std::to_string(ds.feature_dim) +
                         " != model input dim " + std::to_string(params.dims.input_dim));
    constexpr std::size_t kChunk = 64;
    const bool projected = rep == Representation::Projected;
    Matrix out(static_cast<Eigen::Index>(ds.graphs.size()), projected ? params.dims.proj_dim : params.dims.hidden_dim);
    for (std::size_t start = 0; start < ds.graphs.size(); start += kChunk) {
        const std::size_t count = std::min(kChunk, ds.graphs.size() - start);
        const GraphBatch b = batch(std::span<const Graph>(ds.graphs).subspan(start, count));
        out.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(count)) =
            projected ? graph_embeddings(params, b) : pooled_encoder_embeddings(params, b);
    }
    return out;
}

std::pair<double, double> mean_std(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

// ---------------------------------------------------------------------------
// Linear probe

namespace {

Matrix rows_of(const Matrix& m, const std::vector<int>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
    return out;
}

/// Softmax regression trained by full-batch gradient descent; returns test predictions.
std::vector<int> fit_predict(const Matrix& train_x, const std::vector<int>& train_y, const Matrix& test_x,
                             int num_classes, const ProbeConfig& cfg) {
    const Eigen::Index n = train_x.rows();
    const Eigen::Index d = train_x.cols();

    const RowVector mu = train_x.colwise().mean();
    RowVector sigma = ((train_x.rowwise() - mu).array().square().colwise().sum() / static_cast<double>(n)).sqrt();
    sigma = sigma.cwiseMax(cfg.std_floor);
    const Matrix xs = (train_x.rowwise() - mu).array().rowwise() / sigma.array();
    const Matrix ts = (test_x.rowwise() - mu).array().rowwise() / sigma.array();

    Matrix onehot = Matrix::Zero(n, num_classes);
    for (Eigen::Index i = 0; i < n; ++i) onehot(i, train_y[static_cast<std::size_t>(i)]) = 1.0;

    Matrix w = Matrix::Zero(d, num_classes);
    RowVector b = RowVector::Zero(num_classes);
    for (int step = 0; step < cfg.steps; ++step) {
        Matrix logits = xs * w;
        logits.rowwise() += b;
        const Vector row_max = logits.rowwise().maxCoeff();
        Matrix p = (logits.colwise() - row_max).array().exp();
        p.array().colwise() /= p.rowwise().sum().array();
        const Matrix err = (p - onehot) / static_cast<double>(n);
        w -= cfg.lr * (xs.transpose() * err + cfg.l2 * w);
        b -= cfg.lr * err.colwise().sum();
    }

    Matrix logits = ts * w;
    logits.rowwise() += b;
    std::vector<int> pred(static_cast<std::size_t>(ts.rows()));
    for (Eigen::Index i = 0; i < ts.rows(); ++i) {
        Eigen::Index arg = 0;
        logits.row(i).maxCoeff(&arg);
        pred[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
    return pred;
}

}  // namespace

EvalReport linear_probe(const Matrix& embeddings, std::span<const int> labels, int k, std::uint64_t seed,
                        const ProbeConfig& cfg) {
    const int n = static_cast<int>(labels.size());
    if (embeddings.rows() != n) throw ShapeError("linear_probe: embeddings/labels length mismatch");
    for (int y : labels)
        if (y < 0) throw ConfigError("linear_probe: every graph needs a non-negative label");
    const int num_classes = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    if (std::set<int>(labels.begin(), labels.end()).size() < 2)
        throw ConfigError("linear_probe: at least two classes are required");

    // Folds are assigned over a content-defined order (label, then embedding
    // row), so jointly permuting embeddings and labels changes nothing.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (labels[static_cast<std::size_t>(a)] != labels[static_cast<std::size_t>(b)])
            return labels[static_cast<std::size_t>(a)] < labels[static_cast<std::size_t>(b)];
        const auto ra = embeddings.row(a), rb = embeddings.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    const FoldSplit split = kfold_split(n, k, seed);
    EvalReport report;
    report.k = k;
    report.seed = seed;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<int> train_idx, test_idx;
        for (int pos = 0; pos < n; ++pos)
            (split.assignments[static_cast<std::size_t>(pos)] == fold ? test_idx : train_idx)
                .push_back(order[static_cast<std::size_t>(pos)]);
        std::vector<int> train_y, test_y;
        for (int i : train_idx) train_y.push_back(labels[static_cast<std::size_t>(i)]);
        for (int i : test_idx) test_y.push_back(labels[static_cast<std::size_t>(i)]);
        if (std::set<int>(train_y.begin(), train_y.end()).size() < 2) {
            report.skipped_folds.push_back(fold);
            continue;
        }
        const auto pred = fit_predict(rows_of(embeddings, train_idx), train_y, rows_of(embeddings, test_idx),
                                      num_classes, cfg);
        int correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == test_y[i];
        report.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test_y.size()));
    }
    std::tie(report.mean, report.std) = mean_std(report.fold_accuracies);
    return report;
}

// ---------------------------------------------------------------------------
// Embedding-shift probe

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 0.0 : 1.0;
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): identical inputs give exactly 1.
    return std::clamp(1.0 - dot / std::sqrt(na * nb), 0.0, 2.0);
}

Graph local_perturbation(const Graph& g, double fraction, Rng& rng) {
    const int k = std::min(g.num_nodes, static_cast<int>(std::ceil(fraction * g.num_nodes - 1e-9)));
    Graph out = g;
    if (k <= 0) return out;
    std::vector<int> nodes(static_cast<std::size_t>(g.num_nodes));
    for (int i = 0; i < g.num_nodes; ++i) nodes[static_cast<std::size_t>(i)] = i;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    for (int i = 0; i < k; ++i) out.features.row(nodes[static_cast<std::size_t>(i)]).setZero();
    return out;
}

bool global_perturbation(const Graph& g, double fraction, Rng& rng, Graph& out) {
    out = g;
    const std::size_t m = g.edges.size();
    const int target = static_cast<int>(std::ceil(fraction * static_cast<double>(m) - 1e-9));
    if (target <= 0) return true;

    bool has_disjoint_pair = false;
    for (std::size_t i = 0; i < m && !has_disjoint_pair; ++i)
        for (std::size_t j = i + 1; j < m && !has_disjoint_pair; ++j) {
            const Edge& a = g.edges[i];
            const Edge& b = g.edges[j];
            has_disjoint_pair = a.u != b.u && a.u != b.v && a.v != b.u && a.v != b.v;
        }
    if (!has_disjoint_pair) return false;

    std::vector<Edge> edges = g.edges;
    std::set<Edge> present(edges.begin(), edges.end());
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::bernoulli_distribution flip(0.5);
    int rewired = 0;
    const long budget = 100L * static_cast<long>(m);
    for (long attempt = 0; attempt < budget && rewired < target; ++attempt) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const Edge e1 = edges[i], e2 = edges[j];
        int a = e1.u, b = e1.v, c = e2.u, d = e2.v;
        if (a == c || a == d || b == c || b == d) continue;
        if (flip(rng)) std::swap(c, d);
        // (a,b),(c,d) -> (a,d),(c,b)
        const Edge n1 = Edge::canonical(a, d), n2 = Edge::canonical(c, b);
        if (present.count(n1) || present.count(n2)) continue;
        present.erase(e1);
        present.erase(e2);
        present.insert(n1);
        present.insert(n2);
        edges[i] = n1;
        edges[j] = n2;
        rewired += 2;
    }
    out = Graph::from_edges(g.num_nodes, edges, g.features, g.label);
    return true;
}

ProbeReport probe_embedding_shift(const ModelParams& params, const GraphDataset& ds, const PerturbationSpec& spec,
                                  std::uint64_t seed) {
    if (ds.feature_dim != params.dims.input_dim)
        throw ShapeError("probe: dataset feature dim does not match the model");
    auto embed_one = [&params](const Graph& g) {
        const GraphBatch b = batch(std::span<const Graph>(&g, 1));
        const Matrix z = graph_embeddings(params, b);
        return std::vector<double>(z.data(), z.data() + z.size());
    };

    ProbeReport report;
    for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
        const Graph& g = ds.graphs[gi];
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(gi), 3}));
        const auto base = embed_one(g);
        report.local_shift.push_back(cosine_distance(base, embed_one(local_perturbation(g, spec.local_fraction, rng))));
        Graph rewired;
        if (global_perturbation(g, spec.global_fraction, rng, rewired))
            report.global_shift.push_back(cosine_distance(base, embed_one(rewired)));
        else
            ++report.skipped_global;
    }
    report.mean_local = mean_std(report.local_shift).first;
    report.mean_global = mean_std(report.global_shift).first;
    return report;
}

}  // namespace localgcl
