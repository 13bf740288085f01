#include "localgcl/config.hpp"
#include "localgcl/errors.hpp"
#include "localgcl/eval.hpp"
#include "localgcl/objective.hpp"
#include "localgcl/trainer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace localgcl;

namespace {

Config make_config(const std::map<std::string, std::string>& overrides) {
    Config cfg = Config::defaults();
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    return cfg;
}

py::dict metrics_dict(const MetricsRecord& m) {
    py::dict d;
    d["epoch"] = m.epoch;
    d["lambda"] = m.lambda;
    d["l_cl"] = m.l_cl;
    d["l_mm"] = m.l_mm;
    d["l_total"] = m.l_total;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph contrastive learning with masked feature reconstruction";

    static py::exception<Error> base(m, "LocalGCLError", PyExc_RuntimeError);
    static py::exception<Error> config_error(m, "ConfigError", base.ptr());
    static py::exception<Error> data_error(m, "DataError", base.ptr());
    static py::exception<Error> numeric_error(m, "DivergedError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.category()) {
                case ErrorCategory::Config: py::set_error(config_error, e.what()); return;
                case ErrorCategory::Data: py::set_error(data_error, e.what()); return;
                case ErrorCategory::Numeric: py::set_error(numeric_error, e.what()); return;
                case ErrorCategory::Internal: py::set_error(base, e.what()); return;
            }
        }
    });

    py::class_<Graph>(m, "Graph")
        .def_readonly("num_nodes", &Graph::num_nodes)
        .def_property_readonly("edges",
                               [](const Graph& g) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const Edge& e : g.edges) out.emplace_back(e.u, e.v);
                                   return out;
                               })
        .def_readonly("features", &Graph::features)
        .def_readonly("label", &Graph::label);

    py::class_<GraphDataset>(m, "Dataset")
        .def_readonly("name", &GraphDataset::name)
        .def_readonly("graphs", &GraphDataset::graphs)
        .def_readonly("num_classes", &GraphDataset::num_classes)
        .def_readonly("feature_dim", &GraphDataset::feature_dim)
        .def_property_readonly("labels", &GraphDataset::labels)
        .def("__len__", [](const GraphDataset& d) { return d.graphs.size(); });

    m.def("parse_tudataset", &parse_tudataset, py::arg("directory"), py::arg("name"));
    m.def("synthesize_degree_features", &synthesize_degree_features, py::arg("dataset"), py::arg("max_degree") = 10);

    py::class_<ModelParams>(m, "ModelParams")
        .def_property_readonly("arrays", [](const ModelParams& p) {
            py::dict d;
            for (const auto& [name, arr] : p.named()) d[py::str(name)] = *arr;
            return d;
        });

    m.def(
        "default_config", [] { return Config::defaults().entries(); },
        "All configuration keys with their default values.");

    m.def(
        "load_dataset",
        [](const std::map<std::string, std::string>& overrides) {
            return load_dataset(make_config(overrides).train_config());
        },
        py::arg("config") = std::map<std::string, std::string>{});

    m.def(
        "train",
        [](const std::map<std::string, std::string>& overrides, const std::optional<GraphDataset>& dataset) {
            const TrainConfig tc = make_config(overrides).train_config();
            const GraphDataset ds = dataset ? *dataset : load_dataset(tc);
            TrainResult r;
            {
                py::gil_scoped_release release;
                r = train(tc, ds);
            }
            py::list metrics;
            for (const auto& rec : r.metrics) metrics.append(metrics_dict(rec));
            return py::make_tuple(r.params, metrics);
        },
        py::arg("config") = std::map<std::string, std::string>{}, py::arg("dataset") = py::none(),
        "Trains on the configured dataset; returns (params, per-epoch metrics).");

    m.def(
        "embed",
        [](const ModelParams& p, const GraphDataset& ds, const std::string& rep) {
            return embed_dataset(p, ds, parse_representation(rep));
        },
        py::arg("params"), py::arg("dataset"), py::arg("representation") = "encoder");

    m.def(
        "linear_probe",
        [](const Matrix& emb, const std::vector<int>& labels, int k, std::uint64_t seed) {
            const EvalReport r = linear_probe(emb, labels, k, seed);
            py::dict d;
            d["fold_accuracies"] = r.fold_accuracies;
            d["skipped_folds"] = r.skipped_folds;
            d["mean"] = r.mean;
            d["std"] = r.std;
            return d;
        },
        py::arg("embeddings"), py::arg("labels"), py::arg("k") = 10, py::arg("seed") = 0);

    m.def(
        "nt_xent",
        [](const Matrix& z, const Matrix& z_hat, double tau) {
            ad::GradContext ctx;
            ContrastiveConfig c;
            c.tau = tau;
            return nt_xent(ctx.constant(z), ctx.constant(z_hat), c).scalar();
        },
        py::arg("z"), py::arg("z_hat"), py::arg("tau") = 0.5);

    m.def("save_checkpoint", &save_checkpoint, py::arg("params"), py::arg("path"));
    m.def(
        "load_checkpoint", [](const std::filesystem::path& path) { return load_checkpoint(path); }, py::arg("path"));
}
