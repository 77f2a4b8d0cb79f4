#pragma once
#include <stdexcept>
#include <string>

namespace lifepre {

// Base for every error the library throws on bad input or failed I/O.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Solver process missing, crashed, or produced unreadable output.
// Distinct from an UNSAT verdict.
class BackendError : public Error {
public:
    using Error::Error;
};

}  // namespace lifepre
