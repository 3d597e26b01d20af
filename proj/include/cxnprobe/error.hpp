#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cxnprobe {

// Error categories. The CLI maps these onto exit codes, containers map
// distinct file failures onto distinct codes.
enum class Errc {
  argument,
  validation,
  io,
  manifest,
  length_mismatch,
  checksum_mismatch,
  non_finite,
  degenerate_item,
  missing_item,
  missing_prototype,
  internal,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::argument: return "argument";
    case Errc::validation: return "validation";
    case Errc::io: return "io";
    case Errc::manifest: return "manifest";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::checksum_mismatch: return "checksum_mismatch";
    case Errc::non_finite: return "non_finite";
    case Errc::degenerate_item: return "degenerate_item";
    case Errc::missing_item: return "missing_item";
    case Errc::missing_prototype: return "missing_prototype";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cxnprobe
