#pragma once

#include <stdexcept>
#include <string>

namespace gb {

// Error categories, mapped to process exit codes by the CLI.
enum class ErrorKind {
    Validation,     // bad parameters, degenerate inputs, unbuildable configurations
    Admissibility,  // a constructed field failed an admissibility check
    Io              // file system / parsing problems
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline Error validation_error(const std::string& what) { return Error(ErrorKind::Validation, what); }
inline Error admissibility_error(const std::string& what) { return Error(ErrorKind::Admissibility, what); }
inline Error io_error(const std::string& what) { return Error(ErrorKind::Io, what); }

}  // namespace gb
