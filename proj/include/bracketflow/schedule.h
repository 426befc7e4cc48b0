#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "bracketflow/control_label.h"

namespace bracketflow {

/// Non-negative rational with 64-bit parts, always reduced.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// A constancy piece of an oriented control: value sign·e_index on
/// [start·t, end·t). Positions are exact fractions of the total duration.
struct Segment {
  Rational start;
  Rational end;
  int index = 1;  // 1-based basis vector e_index
  Sign sign = Sign::kPlus;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-constant bang-bang control on [0,t]. Segments are half-open on
/// the right except the last one, which is closed at t.
class Schedule {
 public:
  Schedule(double duration, std::vector<Segment> raw_segments);

  double duration() const { return duration_; }

  /// Maximal constancy segments (adjacent equal values merged).
  const std::vector<Segment>& segments() const { return segments_; }
  /// One entry per recursive slot; exactly switch_number entries for an
  /// oriented control.
  const std::vector<Segment>& raw_segments() const { return raw_; }

  /// Breakpoint times, computed as (num·t)/den.
  double TimeAt(const Rational& frac) const;
  double StartTime(const Segment& s) const { return TimeAt(s.start); }
  double EndTime(const Segment& s) const { return TimeAt(s.end); }

  /// Segment active at min(time, t), right-continuous at breakpoints.
  const Segment& SegmentAt(double time) const;

  /// Control vector in R^m at `time` (clamped at t).
  Eigen::VectorXd Sample(double time, int m) const;

  /// Rows "start,end,i,sign" for the merged segments.
  void WriteCsv(std::ostream& os) const;

 private:
  double duration_;
  std::vector<Segment> raw_;
  std::vector<Segment> segments_;
};

/// Oriented control of a control label over [0,t].
Schedule BuildSchedule(const ControlLabel& label, double t);

}  // namespace bracketflow
