#pragma once

#include <stdexcept>
#include <string>

namespace localgcl {

/// Broad failure class; drives the CLI exit code.
enum class ErrorCategory { Config, Data, Numeric, Internal };

/// Base of every error thrown by the library. `kind()` is the stable name
/// (e.g. "MalformedDataset") used in messages and tests.
class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorCategory category, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string kind_;
    ErrorCategory category_;
};

#define LOCALGCL_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& message)                               \
            : Error(#Name, ErrorCategory::Category, message) {}                 \
    };

// graph-data
LOCALGCL_DEFINE_ERROR(MissingFile, Data)
LOCALGCL_DEFINE_ERROR(EmptyBatch, Data)
LOCALGCL_DEFINE_ERROR(DimensionMismatch, Data)
LOCALGCL_DEFINE_ERROR(InvalidFoldCount, Config)

// diff-engine / model / objective
LOCALGCL_DEFINE_ERROR(ShapeError, Internal)
LOCALGCL_DEFINE_ERROR(NotScalar, Internal)
LOCALGCL_DEFINE_ERROR(NeedsNegatives, Config)
LOCALGCL_DEFINE_ERROR(InvalidLambda, Config)

// trainer / cli
LOCALGCL_DEFINE_ERROR(ConfigError, Config)
LOCALGCL_DEFINE_ERROR(UnsupportedVersion, Data)
LOCALGCL_DEFINE_ERROR(CorruptCheckpoint, Data)

#undef LOCALGCL_DEFINE_ERROR

/// Malformed TUDataset input; carries the offending file and 1-based line.
class MalformedDataset : public Error {
public:
    MalformedDataset(const std::string& file, long line, const std::string& message)
        : Error("MalformedDataset", ErrorCategory::Data,
                file + ":" + std::to_string(line) + ": " + message),
          file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    long line() const noexcept { return line_; }

private:
    std::string file_;
    long line_;
};

/// Non-finite loss during training.
class DivergedError : public Error {
public:
    DivergedError(int epoch, const std::string& message)
        : Error("DivergedError", ErrorCategory::Numeric,
                "epoch " + std::to_string(epoch) + ": " + message),
          epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

}  // namespace localgcl
