#pragma once

#include <stdexcept>
#include <string>

namespace ugf {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or state outside an operation's domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Field evaluation requested at (or too close to) a singular point.
class SingularityError : public DomainError {
public:
    explicit SingularityError(const std::string& msg) : DomainError(msg) {}
};

/// Measurement set does not determine the unknowns uniquely.
class RankDeficiencyError : public Error {
public:
    explicit RankDeficiencyError(const std::string& msg) : Error(msg) {}
};

/// Scenario document could not be parsed.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Scenario document parsed but violates the schema; collects every violation.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace ugf
