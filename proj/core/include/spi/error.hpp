#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spi {

enum class ErrorKind {
  Config,     // invalid parameters or configuration text
  Dimension,  // shapes of inputs disagree
  Io,         // file could not be opened, read or written
  Format,     // file is not of the expected format
  Truncated,  // file ended before the declared content
  Version,    // unsupported format version
  Checksum,   // stored checksum does not match content
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace spi
