#include "ktt/error.hpp"

#include <iostream>
#include <mutex>

#include "ktt/log.hpp"

namespace ktt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InfeasibleMoments: return "infeasible-moments";
    case ErrorCode::UndefinedVariance: return "undefined-variance";
    case ErrorCode::NumericFailure: return "numeric-failure";
    case ErrorCode::FitFailure: return "fit-failure";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::ExtractionFailure: return "extraction-failure";
    case ErrorCode::GenerationFailure: return "generation-failure";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::UnsupportedVersion: return "unsupported-version";
    case ErrorCode::UnsupportedKind: return "unsupported-kind";
    case ErrorCode::DegenerateSample: return "degenerate-sample";
  }
  return "unknown";
}

namespace log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& sink_slot() {
  static Sink sink = [](const std::string& msg) { std::cerr << "ktt: warning: " << msg << '\n'; };
  return sink;
}

}  // namespace

Sink set_warning_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return previous;
}

void warn(const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (sink_slot()) sink_slot()(message);
}

}  // namespace log
}  // namespace ktt
