#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmfdfa {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorCategory { usage = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct MissingWindow : Error {
    explicit MissingWindow(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct WindowTooSmall : Error {
    explicit WindowTooSmall(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct QNotOnGrid : Error {
    explicit QNotOnGrid(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct MissingH2 : Error {
    explicit MissingH2(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct NegativeVarianceInput : Error {
    explicit NegativeVarianceInput(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorCategory::usage, m) {}
};

struct SeriesTooShort : Error {
    explicit SeriesTooShort(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct NonPositiveValue : Error {
    explicit NonPositiveValue(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct NonFiniteValue : Error {
    explicit NonFiniteValue(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct EmptySeries : Error {
    explicit EmptySeries(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string& m) : Error(ErrorCategory::data, m) {}
};

struct IOError : Error {
    explicit IOError(const std::string& m) : Error(ErrorCategory::data, m) {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& column, const std::string& message)
        : Error(ErrorCategory::data,
                "row " + std::to_string(row) + ", column " + column + ": " + message),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

struct AllZeroVariances : Error {
    explicit AllZeroVariances(const std::string& m) : Error(ErrorCategory::numerical, m) {}
};

class InsufficientFitPoints : public Error {
public:
    InsufficientFitPoints(double q, const std::string& message)
        : Error(ErrorCategory::numerical, message), q_(q) {}

    double q() const noexcept { return q_; }

private:
    double q_;
};

struct MissingVarianceColumn : Error {
    explicit MissingVarianceColumn(const std::string& m) : Error(ErrorCategory::numerical, m) {}
};

struct InvalidEdgeColumn : Error {
    explicit InvalidEdgeColumn(const std::string& m) : Error(ErrorCategory::numerical, m) {}
};

struct RibbonEstimationError : Error {
    explicit RibbonEstimationError(const std::string& m) : Error(ErrorCategory::numerical, m) {}
};

}
