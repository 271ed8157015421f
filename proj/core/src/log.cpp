// SPDX-License-Identifier: Apache-2.0
#include "erc/log.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace erc::log {
namespace {

std::mutex g_mutex;
Sink g_sink;

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

Sink set_warning_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  auto previous = std::move(g_sink);
  g_sink = std::move(sink);
  return previous;
}

ScopedCapture::ScopedCapture() {
  previous_ = set_warning_sink([this](std::string_view m) { messages_.emplace_back(m); });
}

ScopedCapture::~ScopedCapture() { set_warning_sink(std::move(previous_)); }

bool ScopedCapture::contains(std::string_view needle) const {
  return std::any_of(messages_.begin(), messages_.end(),
                     [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace erc::log
