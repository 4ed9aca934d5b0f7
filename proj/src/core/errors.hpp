#pragma once

#include <stdexcept>
#include <string>

namespace boojum {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected input: violated precondition or physical-parameter constraint.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

// Config file problems; message carries the line number.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Tangential projection shorter than the degeneracy threshold.
class DegenerateProjection : public Error {
public:
    explicit DegenerateProjection(const std::string& msg) : Error(msg) {}
};

// Non-finite energies, failed cross-checks, unrepairable solver states.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace boojum
