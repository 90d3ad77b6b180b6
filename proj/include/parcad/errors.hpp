#ifndef PARCAD_ERRORS_HPP
#define PARCAD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parcad {

struct ZeroPolynomial : std::runtime_error {
  ZeroPolynomial() : std::runtime_error("zero polynomial") {}
};

struct DegreeZero : std::runtime_error {
  DegreeZero() : std::runtime_error("input constant in the main variable") {}
};

struct DegreeTooLow : std::runtime_error {
  DegreeTooLow() : std::runtime_error("degree too low for discriminant") {}
};

struct SyntaxError : std::runtime_error {
  std::size_t position;
  std::string expected;
  SyntaxError(std::size_t pos, std::string what_expected)
      : std::runtime_error("syntax error at position " + std::to_string(pos) +
                           ": expected " + what_expected),
        position(pos),
        expected(std::move(what_expected)) {}
};

struct UndeclaredVariable : std::runtime_error {
  std::string name;
  explicit UndeclaredVariable(std::string var_name)
      : std::runtime_error("undeclared variable: " + var_name),
        name(std::move(var_name)) {}
};

struct ClauseExplosion : std::runtime_error {
  std::size_t budget;
  explicit ClauseExplosion(std::size_t clause_budget)
      : std::runtime_error("CNF distribution exceeds clause budget " +
                           std::to_string(clause_budget)),
        budget(clause_budget) {}
};

struct InvalidK : std::runtime_error {
  explicit InvalidK(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParams : std::runtime_error {
  explicit InvalidParams(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResourceLimit : std::runtime_error {
  std::size_t cells;
  explicit ResourceLimit(std::size_t cell_count)
      : std::runtime_error("cell cap exceeded: " + std::to_string(cell_count)),
        cells(cell_count) {}
};

struct NotSignDefinable : std::runtime_error {
  explicit NotSignDefinable(const std::string& msg)
      : std::runtime_error(msg) {}
};

struct BackendError : std::runtime_error {
  int exit_code;
  std::string output;
  BackendError(int code, std::string captured)
      : std::runtime_error("external backend exited with code " +
                           std::to_string(code)),
        exit_code(code),
        output(std::move(captured)) {}
};

struct ParseBackError : std::runtime_error {
  explicit ParseBackError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BackendTimeout : std::runtime_error {
  BackendTimeout() : std::runtime_error("external backend timed out") {}
};

struct TimeoutExceeded : std::runtime_error {
  TimeoutExceeded() : std::runtime_error("per-clause timeout exceeded") {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace parcad

#endif
