#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qpii {

/// Base of every error raised by the library.  `name()` is the module-level
/// error name surfaced in CLI reports; `location()` names the operation.
class Error : public std::runtime_error {
public:
    Error(std::string name, std::string location, const std::string& message,
          nlohmann::ordered_json details = nullptr)
        : std::runtime_error(message),
          name_(std::move(name)),
          location_(std::move(location)),
          details_(std::move(details)) {}

    const std::string& name() const noexcept { return name_; }
    const std::string& location() const noexcept { return location_; }
    const nlohmann::ordered_json& details() const noexcept { return details_; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name_;
        j["location"] = location_;
        j["message"] = what();
        if (!details_.is_null()) j["details"] = details_;
        return j;
    }

private:
    std::string name_;
    std::string location_;
    nlohmann::ordered_json details_;
};

#define QPII_DEFINE_ERROR(Type)                                                          \
    class Type : public Error {                                                          \
    public:                                                                              \
        Type(std::string location, const std::string& message,                           \
             nlohmann::ordered_json details = nullptr)                                   \
            : Error(#Type, std::move(location), message, std::move(details)) {}          \
    };

QPII_DEFINE_ERROR(ConfigurationError)
QPII_DEFINE_ERROR(ParseError)
QPII_DEFINE_ERROR(RewriteOrderError)
QPII_DEFINE_ERROR(DerivationError)
QPII_DEFINE_ERROR(DomainError)
QPII_DEFINE_ERROR(NonVanishingRemainder)
QPII_DEFINE_ERROR(NonInvertibleMatrix)
QPII_DEFINE_ERROR(NonInvertibleEntry)
QPII_DEFINE_ERROR(DivergenceError)
QPII_DEFINE_ERROR(LevelOrderViolation)

#undef QPII_DEFINE_ERROR

/// A required inversion failed while expanding a quasideterminant.
class NonInvertibleMinor : public Error {
public:
    NonInvertibleMinor(std::string location, std::size_t row, std::size_t col,
                       nlohmann::ordered_json details = nullptr)
        : Error("NonInvertibleMinor", std::move(location),
                "minor for position (" + std::to_string(row + 1) + ", " +
                    std::to_string(col + 1) + ") is not invertible",
                std::move(details)),
          row_(row),
          col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// An eigenfunction sample failed the inversion tolerance at a grid index.
class SingularEigenfunction : public Error {
public:
    SingularEigenfunction(std::string location, std::size_t index)
        : Error("SingularEigenfunction", std::move(location),
                "eigenfunction is singular at grid index " + std::to_string(index),
                nlohmann::ordered_json{{"index", index}}),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace qpii
