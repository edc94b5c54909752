#pragma once

#include <stdexcept>
#include <string>

namespace etcjpeg {

// Stable error codes. The CLI prints them verbatim on stderr so scripts can
// match on the prefix.
enum class ErrorCode {
  channel,      // wrong channel count
  dimension,    // mismatched image/plane dimensions
  layout,       // image inconsistent with pack layout or key file
  empty_grid,   // block size exceeds image size
  shape,        // operation requires a square block
  empty_domain, // generator asked for zero elements
  config,       // invalid parameter combination
  decode,       // malformed JPEG stream
  resolution,   // input exceeds an SNS profile's maximum resolution
  grid,         // piece count does not match the declared grid
  key,          // unreadable or inconsistent key file
  io,           // file system failure
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::channel: return "E_CHANNEL";
    case ErrorCode::dimension: return "E_DIMENSION";
    case ErrorCode::layout: return "E_LAYOUT";
    case ErrorCode::empty_grid: return "E_EMPTY_GRID";
    case ErrorCode::shape: return "E_SHAPE";
    case ErrorCode::empty_domain: return "E_EMPTY_DOMAIN";
    case ErrorCode::config: return "E_CONFIG";
    case ErrorCode::decode: return "E_DECODE";
    case ErrorCode::resolution: return "E_RESOLUTION";
    case ErrorCode::grid: return "E_GRID";
    case ErrorCode::key: return "E_KEY";
    case ErrorCode::io: return "E_IO";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace etcjpeg
