#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ktt/ktt.hpp"

namespace ktt::test {

#define EXPECT_KTT_ERROR(stmt, expected_code)                                      \
  do {                                                                             \
    try {                                                                          \
      stmt;                                                                        \
      ADD_FAILURE() << "expected ktt::Error(" << ::ktt::to_string(expected_code) << ")"; \
    } catch (const ::ktt::Error& e_) {                                             \
      EXPECT_EQ(e_.code(), expected_code) << e_.what();                            \
    }                                                                              \
  } while (0)

/// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture()
      : previous_(log::set_warning_sink([this](const std::string& m) { messages.push_back(m); })) {}
  ~WarningCapture() { log::set_warning_sink(previous_); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages;

 private:
  log::Sink previous_;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Valid, unimodal kernel parameters of the given kind.
inline KernelParams random_kernel(KernelKind kind, std::mt19937_64& rng) {
  const double D = uniform(rng, 0.1, 5.0);
  const double t0 = uniform(rng, -0.5, 0.5);
  switch (kind) {
    case KernelKind::Gaussian: return KernelParams::gaussian(D, uniform(rng, -1, 1), uniform(rng, 1e-3, 0.1));
    case KernelKind::Lognormal:
      return KernelParams::lognormal(D, t0, uniform(rng, -2.5, 0.0), uniform(rng, 0.01, 0.5));
    case KernelKind::Gamma: return KernelParams::gamma(D, t0, uniform(rng, 1.5, 10.0), uniform(rng, 5.0, 50.0));
    case KernelKind::Beta:
      return KernelParams::beta(D, t0, uniform(rng, 1.5, 8.0), uniform(rng, 1.5, 8.0), uniform(rng, 0.2, 1.0));
    case KernelKind::DoubleBoundedLognormal:
      return KernelParams::dbl(D, t0, uniform(rng, -1, 1), uniform(rng, 0.05, 0.8), t0 + uniform(rng, 0.2, 1.0));
    case KernelKind::GEV:
      return KernelParams::gev(D, t0, uniform(rng, -0.4, 0.4), uniform(rng, 0.0, 0.5), uniform(rng, 0.02, 0.2));
  }
  return KernelParams::gaussian(D, 0.0, 0.01);
}

inline Trajectory make_trajectory(const std::vector<double>& t, const std::vector<double>& x,
                                  const std::vector<double>& y) {
  std::vector<Sample> s;
  for (std::size_t i = 0; i < t.size(); ++i) s.push_back({t[i], x[i], y[i]});
  return Trajectory(std::move(s));
}

}  // namespace ktt::test
