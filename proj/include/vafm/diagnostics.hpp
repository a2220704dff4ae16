#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace vafm::diagnostics {

using Sink = std::function<void(const std::string&)>;

namespace detail {

struct State {
  std::mutex mutex;
  Sink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
};

inline State& state() {
  static State s;
  return s;
}

}  // namespace detail

/// Replaces the warning sink and returns the previous one. A null sink
/// silences warnings.
inline Sink set_sink(Sink sink) {
  auto& s = detail::state();
  std::lock_guard lock(s.mutex);
  return std::exchange(s.sink, std::move(sink));
}

inline void warn(const std::string& message) {
  auto& s = detail::state();
  std::lock_guard lock(s.mutex);
  if (s.sink) s.sink(message);
}

/// Installs a sink for the lifetime of the guard.
class ScopedSink {
 public:
  explicit ScopedSink(Sink sink) : previous_(set_sink(std::move(sink))) {}
  ~ScopedSink() { set_sink(std::move(previous_)); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  Sink previous_;
};

}  // namespace vafm::diagnostics
