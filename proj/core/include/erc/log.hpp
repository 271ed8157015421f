// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace erc::log {

using Sink = std::function<void(std::string_view)>;

/// Reports a non-fatal condition. The default sink writes to stderr.
void warn(std::string_view message);

/// Replaces the warning sink and returns the previous one. Passing an empty
/// function restores the stderr sink.
Sink set_warning_sink(Sink sink);

/// Routes warnings into a caller-owned buffer for the lifetime of the object.
class ScopedCapture {
public:
  ScopedCapture();
  ~ScopedCapture();
  ScopedCapture(const ScopedCapture&) = delete;
  ScopedCapture& operator=(const ScopedCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

private:
  std::vector<std::string> messages_;
  Sink previous_;
};

}  // namespace erc::log
