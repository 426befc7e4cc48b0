#include "bracketflow/partition.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bracketflow/bracket.h"

namespace bracketflow {

std::string ToString(StepPolicy p) {
  switch (p) {
    case StepPolicy::kMin:
      return "min";
    case StepPolicy::kMid:
      return "mid";
    case StepPolicy::kMax:
      return "max";
    case StepPolicy::kRandom:
      return "random";
    case StepPolicy::kDefault:
      return "default";
  }
  return "unknown";
}

StepPolicy StepPolicyFromString(const std::string& s) {
  if (s == "min") return StepPolicy::kMin;
  if (s == "mid") return StepPolicy::kMid;
  if (s == "max") return StepPolicy::kMax;
  if (s == "random") return StepPolicy::kRandom;
  if (s == "default") return StepPolicy::kDefault;
  throw ValidationError("unknown step policy \"" + s + "\"");
}

double StepChooser::Choose(double lo, double hi,
                           std::optional<double> preferred) {
  if (!(hi > 0.0) || !(lo >= 0.0) || lo > hi) {
    throw std::invalid_argument("empty step band");
  }
  switch (policy_) {
    case StepPolicy::kMin:
      return lo > 0.0 ? lo : min_fraction_ * hi;
    case StepPolicy::kMax:
      return hi;
    case StepPolicy::kRandom: {
      const double a = lo > 0.0 ? lo : min_fraction_ * hi;
      return std::uniform_real_distribution<double>(a, hi)(rng_);
    }
    case StepPolicy::kDefault:
      if (preferred) return std::clamp(*preferred, lo > 0.0 ? lo : 0.0, hi);
      [[fallthrough]];
    case StepPolicy::kMid:
      return 0.5 * (lo + hi);
  }
  return hi;
}

double Partition::Time(std::int64_t j) const {
  if (j < 0) throw std::out_of_range("negative partition index");
  while (static_cast<std::int64_t>(times_.size()) <= j) {
    const auto next = static_cast<std::int64_t>(times_.size());
    const double step = step_(next);
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw std::domain_error("partition step " + std::to_string(next) +
                              " is not positive");
    }
    steps_.push_back(step);
    times_.push_back(times_.back() + step);
  }
  return times_[static_cast<std::size_t>(j)];
}

double Partition::Step(std::int64_t j) const {
  if (j < 1) throw std::out_of_range("partition steps start at 1");
  Time(j);
  return steps_[static_cast<std::size_t>(j - 1)];
}

Partition Partition::Uniform(double h) {
  if (!(h > 0.0)) throw ValidationError("uniform partition step must be positive");
  return Partition([h](std::int64_t) { return h; });
}

Partition Partition::FromSteps(StepFn step) { return Partition(std::move(step)); }

Partition Partition::Explicit(std::vector<double> times) {
  if (times.size() < 2 || times.front() != 0.0) {
    throw ValidationError("explicit partition needs times starting at 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ValidationError("explicit partition times must increase");
    }
  }
  auto shared = std::make_shared<const std::vector<double>>(std::move(times));
  return Partition([shared](std::int64_t j) {
    const auto& t = *shared;
    const auto last = static_cast<std::int64_t>(t.size()) - 1;
    if (j <= last) return t[static_cast<std::size_t>(j)] - t[static_cast<std::size_t>(j - 1)];
    return t.back() - t[t.size() - 2];
  });
}

std::pair<double, double> RankBand(double delta, int k, std::int64_t j) {
  const double lo = (k - 1.0) / (2.0 * k) * delta /
                    std::pow(static_cast<double>(j), 1.0 / k);
  return {lo, delta};
}

Partition Partition::Rank(double delta, int k, StepPolicy policy,
                          std::uint64_t seed) {
  if (!(delta > 0.0)) throw ValidationError("rank must be positive");
  if (k < 1) throw ValidationError("degree must be at least 1");
  auto chooser = std::make_shared<StepChooser>(policy, seed);
  return Partition([delta, k, chooser](std::int64_t j) {
    const auto [lo, hi] = RankBand(delta, k, j);
    return chooser->Choose(lo, hi, delta / std::pow(static_cast<double>(j), 1.0 / k));
  });
}

std::int64_t AuditRankPartition(const std::vector<double>& steps, double delta,
                                int k) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto j = static_cast<std::int64_t>(i + 1);
    const auto [lo, hi] = RankBand(delta, k, j);
    if (!(steps[i] > 0.0) || steps[i] < lo || steps[i] > hi) return j;
  }
  return 0;
}

}  // namespace bracketflow
