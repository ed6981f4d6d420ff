#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geodeq {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Malformed user input: bad JSON, bad expression, bad parameters.
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

class SyntaxError : public InputError {
public:
    SyntaxError(const std::string& what, std::size_t offset);
    std::size_t offset() const noexcept { return offset_; }
    const char* kind() const noexcept override { return "syntax"; }

private:
    std::size_t offset_;
};

// Evaluation outside the domain of an elementary function.
class DomainError : public InputError {
public:
    using InputError::InputError;
    const char* kind() const noexcept override { return "domain"; }
};

class DegenerateMetric : public InputError {
public:
    using InputError::InputError;
    const char* kind() const noexcept override { return "degenerate_metric"; }
};

// A numeric decision (rank, eigenvalue clustering) that the data does not settle.
class IndecisionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "indecision"; }
};

// A claimed identity failed its residual check.
class VerificationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "verification"; }
};

}  // namespace geodeq
