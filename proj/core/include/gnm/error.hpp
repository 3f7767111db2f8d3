#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gnm {

enum class ErrorCode {
  kEntryOutOfRange,
  kBadLevels,
  kOverflow,
  kCapExceeded,
  kIndexOutOfRange,
  kGroupCapExceeded,
  kBadArgs,
  kBadConfig,
  kIoError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI) can branch on the category instead of the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gnm
