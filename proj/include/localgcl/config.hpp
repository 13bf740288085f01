#pragma once

#include "localgcl/eval.hpp"
#include "localgcl/trainer.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace localgcl {

/// Flat `section.key = value` configuration.
///
/// Every key has a default; setting an unknown key is a ConfigError so typos
/// never pass silently. Values are kept as text and converted on use.
class Config {
public:
    /// All known keys with their default values.
    static Config defaults();
    /// Defaults overlaid with the file's `key = value` lines ('#' starts a comment).
    static Config from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    /// Applies a `key=value` override.
    void apply_override(const std::string& assignment);

    const std::string& get(const std::string& key) const;
    int get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

    /// data.root, falling back to $LOCALGCL_DATA_DIR and then "data".
    std::filesystem::path data_root() const;

    TrainConfig train_config() const;
    PerturbationSpec perturbation() const;

    /// Canonical text form, one `key = value` per line in key order.
    std::string to_text() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace localgcl
