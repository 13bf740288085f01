#include "localgcl/config.hpp"

#include "localgcl/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace localgcl {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

Config Config::defaults() {
    Config c;
    c.values_ = {
        {"data.root", ""},
        {"data.name", "MUTAG"},
        {"data.degree_features", "false"},
        {"data.max_degree", "10"},
        {"model.backbone", "gin"},
        {"model.hidden_dim", "32"},
        {"model.proj_dim", "32"},
        {"model.layers", "3"},
        {"augment.kinds", "node_dropout,edge_perturbation,attribute_masking,subgraph"},
        {"augment.node_dropout", "0.2"},
        {"augment.edge_perturbation", "0.2"},
        {"augment.attribute_masking", "0.2"},
        {"augment.subgraph", "0.2"},
        {"mask.rate", "0.5"},
        {"tau", "0.5"},
        {"ntxent.literal_denominator", "false"},
        {"lambda.kind", "incremental"},
        {"lambda.start", "0.1"},
        {"lambda.end", "0.9"},
        {"lambda.static", "0.5"},
        {"recon.masked_only", "false"},
        {"train.epochs", "100"},
        {"train.batch_size", "32"},
        {"train.lr", "0.001"},
        {"train.log_wall_time", "false"},
        {"seed", "0"},
        {"output.dir", "runs/latest"},
        {"eval.k", "10"},
        {"eval.seeds", "5"},
        {"eval.representation", "encoder"},
        {"probe.local_fraction", "0.05"},
        {"probe.global_fraction", "0.3"},
    };
    return c;
}

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    Config c = defaults();
    std::string line;
    long number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected 'key = value'");
        try {
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    // Bare training keys ("epochs", "lr") are accepted as shorthand.
    if (it == values_.end()) it = values_.find("train." + key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
}

void Config::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

int Config::get_int(const std::string& key) const {
    const std::string& s = get(key);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(key + " = '" + s + "' is not an integer");
    return v;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(key + " = '" + s + "' is not a non-negative integer");
    return v;
}

double Config::get_double(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(key + " = '" + s + "' is not a number");
    return v;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key + " = '" + s + "' is not a boolean");
}

std::filesystem::path Config::data_root() const {
    if (const std::string& root = get("data.root"); !root.empty()) return root;
    if (const char* env = std::getenv("LOCALGCL_DATA_DIR"); env && *env) return env;
    return "data";
}

TrainConfig Config::train_config() const {
    TrainConfig t;
    t.data_root = data_root();
    t.dataset = get("data.name");
    t.degree_features = get_bool("data.degree_features");
    t.max_degree = get_int("data.max_degree");

    t.dims.backbone = parse_backbone(get("model.backbone"));
    t.dims.hidden_dim = get_int("model.hidden_dim");
    t.dims.proj_dim = get_int("model.proj_dim");
    t.dims.layers = get_int("model.layers");

    t.augment.kinds.clear();
    for (const auto& name : split_commas(get("augment.kinds"))) {
        const auto type = parse_augmentation(name);
        t.augment.kinds.push_back({type, get_double("augment." + name)});
    }
    t.mask_rate = get_double("mask.rate");

    t.contrastive.tau = get_double("tau");
    t.contrastive.include_positive_in_denominator = !get_bool("ntxent.literal_denominator");
    t.schedule.kind = parse_lambda_kind(get("lambda.kind"));
    if (t.schedule.kind == LambdaSchedule::Kind::Static) {
        t.schedule.start = t.schedule.end = get_double("lambda.static");
    } else {
        t.schedule.start = get_double("lambda.start");
        t.schedule.end = get_double("lambda.end");
    }
    t.recon_masked_only = get_bool("recon.masked_only");

    t.epochs = get_int("train.epochs");
    t.batch_size = get_int("train.batch_size");
    t.lr = get_double("train.lr");
    t.log_wall_time = get_bool("train.log_wall_time");
    t.seed = get_u64("seed");
    t.output_dir = get("output.dir");
    t.validate();
    return t;
}

PerturbationSpec Config::perturbation() const {
    PerturbationSpec p{get_double("probe.local_fraction"), get_double("probe.global_fraction")};
    if (!(p.local_fraction >= 0.0 && p.local_fraction <= 1.0) || !(p.global_fraction >= 0.0 && p.global_fraction <= 1.0))
        throw ConfigError("probe fractions must lie in [0,1]");
    return p;
}

std::string Config::to_text() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace localgcl
