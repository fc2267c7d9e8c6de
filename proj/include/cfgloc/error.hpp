#pragma once

#include <stdexcept>
#include <string>

namespace cfgloc {

// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::string file, int line, int column, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          file_(std::move(file)), line_(line), column_(column) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string file_;
    int line_;
    int column_;
};

class SemanticError : public Error {
public:
    using Error::Error;
};

class UnsupportedFeature : public Error {
public:
    using Error::Error;
};

class SolverTimeout : public Error {
public:
    using Error::Error;
};

// Raised when an internal invariant does not hold, e.g. a pinned violating
// scenario turns out to be satisfiable.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace cfgloc
