#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace backhaul {

// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorClass { config, data, invariant };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

// Malformed input text (header keys, CSV fields, JSON).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorClass::data, what) {}
};

// Input is well-formed but has the wrong shape (counts, columns).
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::size_t cell)
        : Error(ErrorClass::data, what), cell_(cell) {}
    std::size_t cell_index() const noexcept { return cell_; }

private:
    std::size_t cell_;
};

class OutOfBoundsError : public Error {
public:
    explicit OutOfBoundsError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class MissingDataError : public Error {
public:
    explicit MissingDataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::data, what) {}
};

// A requested link exceeds the distance its mode allows.
class InfeasibleLinkError : public Error {
public:
    explicit InfeasibleLinkError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class LookupError : public Error {
public:
    explicit LookupError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

// A caller broke an operation's precondition, or an internal invariant failed.
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error(ErrorClass::invariant, what) {}
};

}  // namespace backhaul
