#include "bracketflow/schedule.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace bracketflow {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::operator+(const Rational& o) const {
  const std::int64_t l = std::lcm(den_, o.den_);
  return Rational(num_ * (l / den_) + o.num_ * (l / o.den_), l);
}

Rational Rational::operator-(const Rational& o) const {
  const std::int64_t l = std::lcm(den_, o.den_);
  return Rational(num_ * (l / den_) - o.num_ * (l / o.den_), l);
}

Rational Rational::operator*(const Rational& o) const {
  const std::int64_t g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
  const std::int64_t g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
  const std::int64_t a = g1 ? num_ / g1 : 0;
  const std::int64_t d = g1 ? o.den_ / g1 : o.den_;
  const std::int64_t b = g2 ? o.num_ / g2 : 0;
  const std::int64_t c = g2 ? den_ / g2 : den_;
  return Rational(a * b, c * d);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ <
         static_cast<__int128>(b.num_) * a.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.num() << "/" << r.den();
}

Schedule::Schedule(double duration, std::vector<Segment> raw_segments)
    : duration_(duration), raw_(std::move(raw_segments)) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw std::invalid_argument("schedule duration must be positive and finite");
  }
  if (raw_.empty()) throw std::invalid_argument("schedule has no segments");
  if (!(raw_.front().start == Rational(0))) {
    throw std::invalid_argument("schedule must start at 0");
  }
  if (!(raw_.back().end == Rational(1))) {
    throw std::invalid_argument("schedule must end at t");
  }
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    if (!(raw_[i].start < raw_[i].end)) {
      throw std::invalid_argument("schedule segment with non-positive length");
    }
    if (i > 0 && !(raw_[i - 1].end == raw_[i].start)) {
      throw std::invalid_argument("schedule segments do not tile [0,t]");
    }
  }
  for (const Segment& s : raw_) {
    if (!segments_.empty() && segments_.back().index == s.index &&
        segments_.back().sign == s.sign) {
      segments_.back().end = s.end;
    } else {
      segments_.push_back(s);
    }
  }
}

double Schedule::TimeAt(const Rational& frac) const {
  if (frac == Rational(1)) return duration_;
  return static_cast<double>(frac.num()) * duration_ /
         static_cast<double>(frac.den());
}

const Segment& Schedule::SegmentAt(double time) const {
  const double clamped = std::clamp(time, 0.0, duration_);
  // First segment whose end lies strictly beyond the time; the last one
  // absorbs t.
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), clamped,
      [this](double s, const Segment& seg) { return s < EndTime(seg); });
  if (it == segments_.end()) return segments_.back();
  return *it;
}

Eigen::VectorXd Schedule::Sample(double time, int m) const {
  const Segment& s = SegmentAt(time);
  if (s.index < 1 || s.index > m) {
    throw std::out_of_range("schedule uses e_" + std::to_string(s.index) +
                            " outside R^" + std::to_string(m));
  }
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  a[s.index - 1] = ToInt(s.sign);
  return a;
}

void Schedule::WriteCsv(std::ostream& os) const {
  os << "start,end,i,sign\n";
  const auto old_precision = os.precision(17);
  for (const Segment& s : segments_) {
    os << StartTime(s) << "," << EndTime(s) << "," << s.index << ","
       << ToChar(s.sign) << "\n";
  }
  os.precision(old_precision);
}

namespace {

// Appends the plus-oriented control of `b` on [start, start+length).
void AppendPlus(const FormalBracket& b, const ControlLabel& label,
                const Rational& start, const Rational& length,
                std::vector<Segment>& out);

// Minus orientation: value(s) = -plus(length - s), i.e. the plus pieces in
// reverse order with negated values.
void AppendMinus(const FormalBracket& b, const ControlLabel& label,
                 const Rational& start, const Rational& length,
                 std::vector<Segment>& out) {
  std::vector<Segment> plus;
  AppendPlus(b, label, Rational(0), length, plus);
  for (auto it = plus.rbegin(); it != plus.rend(); ++it) {
    out.push_back(Segment{start + (length - it->end),
                          start + (length - it->start), it->index,
                          Flip(it->sign)});
  }
}

void AppendPlus(const FormalBracket& b, const ControlLabel& label,
                const Rational& start, const Rational& length,
                std::vector<Segment>& out) {
  if (b.is_letter()) {
    out.push_back(Segment{start, start + length,
                          label.FieldForLetter(b.letter_index()), Sign::kPlus});
    return;
  }
  const FormalBracket& b1 = b.left();
  const FormalBracket& b2 = b.right();
  const std::int64_t s = b.switch_number();
  const Rational len1 = length * Rational(b1.switch_number(), s);
  const Rational len2 = length * Rational(b2.switch_number(), s);
  Rational at = start;
  AppendPlus(b1, label, at, len1, out);
  at = at + len1;
  AppendPlus(b2, label, at, len2, out);
  at = at + len2;
  AppendMinus(b1, label, at, len1, out);
  at = at + len1;
  AppendMinus(b2, label, at, len2, out);
}

}  // namespace

Schedule BuildSchedule(const ControlLabel& label, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ValidationError("oriented control needs a positive duration");
  }
  if (label.bracket.max_letter() > static_cast<int>(label.fields.size())) {
    throw ValidationError("label " + label.ToString() +
                          " uses a letter beyond its field string");
  }
  for (int i : label.fields) {
    if (i < 1) throw ValidationError("field indices are 1-based");
  }
  std::vector<Segment> raw;
  raw.reserve(static_cast<std::size_t>(label.switch_number()));
  if (label.sign == Sign::kPlus) {
    AppendPlus(label.bracket, label, Rational(0), Rational(1), raw);
  } else {
    AppendMinus(label.bracket, label, Rational(0), Rational(1), raw);
  }
  return Schedule(t, std::move(raw));
}

}  // namespace bracketflow
