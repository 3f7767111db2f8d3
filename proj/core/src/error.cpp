#include "gnm/error.hpp"

namespace gnm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::kBadLevels: return "BadLevels";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kGroupCapExceeded: return "GroupCapExceeded";
    case ErrorCode::kBadArgs: return "BadArgs";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace gnm
