#ifndef FASTMI_ERRORS_HPP
#define FASTMI_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fastmi {

// Error categories, kept coarse so the CLI can map them onto exit codes.
enum class ErrorKind {
  invalid_input,      // non-finite data, malformed values
  insufficient_data,  // sample too small for estimation
  domain,             // argument outside the mathematical domain
  grid_overflow,      // point falls outside the configured grid extent
  asymmetry,          // Fourier input lost Hermitian symmetry (upstream bug)
  non_convergence,    // iterative solver exhausted its budget
  numerical,          // quadrature or downstream numerical failure
  config,             // bad run configuration
  parse,              // file ingestion failure
  io,                 // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string &w) : Error(ErrorKind::invalid_input, w) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string &w) : Error(ErrorKind::insufficient_data, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string &w) : Error(ErrorKind::domain, w) {}
};
struct GridOverflow : Error {
  explicit GridOverflow(const std::string &w) : Error(ErrorKind::grid_overflow, w) {}
};
struct AsymmetrySignal : Error {
  explicit AsymmetrySignal(const std::string &w) : Error(ErrorKind::asymmetry, w) {}
};
struct NonConvergence : Error {
  NonConvergence(const std::string &w, std::size_t failed_count)
      : Error(ErrorKind::non_convergence, w), failed_count(failed_count) {}
  std::size_t failed_count;  // number of entries that failed to converge
};
struct NumericalError : Error {
  NumericalError(const std::string &w, double achieved_error)
      : Error(ErrorKind::numerical, w), achieved_error(achieved_error) {}
  double achieved_error;
};
struct NonFinite : Error {
  explicit NonFinite(const std::string &w) : Error(ErrorKind::numerical, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string &w) : Error(ErrorKind::config, w) {}
};
struct ParseError : Error {
  ParseError(const std::string &w, std::size_t line, std::size_t column)
      : Error(ErrorKind::parse, w), line(line), column(column) {}
  std::size_t line;    // 1-based
  std::size_t column;  // 1-based field index, 0 if not applicable
};
struct IoError : Error {
  explicit IoError(const std::string &w) : Error(ErrorKind::io, w) {}
};

}  // namespace fastmi

#endif  // FASTMI_ERRORS_HPP
