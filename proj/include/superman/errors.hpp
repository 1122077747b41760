#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace superman {

// Error categories map to CLI exit codes: 2 config, 3 data, 4 numerical.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg, int exit_code)
        : std::runtime_error(kind + ": " + msg),
          kind_(std::move(kind)),
          exit_code_(exit_code) {}

    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string kind_;
    int exit_code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, std::string kind = "ConfigError")
        : Error(std::move(kind), msg, 2) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg, std::string kind = "DataError")
        : Error(std::move(kind), msg, 3) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg)
        : Error("NumericalError", msg, 4) {}
};

struct InvalidConfig : ConfigError {
    explicit InvalidConfig(const std::string& m) : ConfigError(m, "InvalidConfig") {}
};
struct InvalidShape : ConfigError {
    explicit InvalidShape(const std::string& m) : ConfigError(m, "InvalidShape") {}
};
struct PartitionError : ConfigError {
    explicit PartitionError(const std::string& m) : ConfigError(m, "PartitionError") {}
};

struct ParseError : DataError {
    explicit ParseError(const std::string& m) : DataError(m, "ParseError") {}
};
struct SchemaError : DataError {
    explicit SchemaError(const std::string& m) : DataError(m, "SchemaError") {}
};
struct EmptySignal : DataError {
    explicit EmptySignal(const std::string& m) : DataError(m, "EmptySignal") {}
};
struct InvalidNode : DataError {
    explicit InvalidNode(const std::string& m) : DataError(m, "InvalidNode") {}
};
struct NotNodeAttributable : DataError {
    explicit NotNodeAttributable(const std::string& m) : DataError(m, "NotNodeAttributable") {}
};
struct DegenerateDirection : DataError {
    explicit DegenerateDirection(const std::string& m) : DataError(m, "DegenerateDirection") {}
};
struct InvalidMetric : DataError {
    explicit InvalidMetric(const std::string& m) : DataError(m, "InvalidMetric") {}
};
struct NotAPathMetric : DataError {
    explicit NotAPathMetric(const std::string& m) : DataError(m, "NotAPathMetric") {}
};
struct DegenerateWeights : DataError {
    explicit DegenerateWeights(const std::string& m) : DataError(m, "DegenerateWeights") {}
};
struct MetricUndefined : DataError {
    explicit MetricUndefined(const std::string& m) : DataError(m, "MetricUndefined") {}
};

} // namespace superman
