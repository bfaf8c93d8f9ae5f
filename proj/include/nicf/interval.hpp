#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace nicf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool empty() const { return hi <= lo; }
};

// Finite union of closed intervals, kept sorted and disjoint. Overlapping or
// touching parts passed to the constructor are merged; degenerate parts are
// dropped.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(double lo, double hi) { parts_.push_back({lo, hi}); normalize(); }
  explicit IntervalUnion(const Interval& iv) : IntervalUnion(iv.lo, iv.hi) {}
  IntervalUnion(std::initializer_list<Interval> parts) : parts_(parts) { normalize(); }
  explicit IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  double total_length() const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.length();
    return s;
  }

  bool contains(double x) const {
    for (const auto& p : parts_) {
      if (p.contains(x)) return true;
    }
    return false;
  }

  // Bounding interval; throws on an empty union.
  Interval hull() const {
    if (parts_.empty()) throw std::invalid_argument("hull of empty interval union");
    return {parts_.front().lo, parts_.back().hi};
  }

  IntervalUnion intersect(const Interval& iv) const {
    std::vector<Interval> out;
    for (const auto& p : parts_) {
      double lo = p.lo > iv.lo ? p.lo : iv.lo;
      double hi = p.hi < iv.hi ? p.hi : iv.hi;
      if (hi > lo) out.push_back({lo, hi});
    }
    return IntervalUnion(std::move(out));
  }

  IntervalUnion intersect(const IntervalUnion& other) const {
    std::vector<Interval> out;
    for (const auto& q : other.parts_) {
      for (const auto& p : intersect(q).parts_) out.push_back(p);
    }
    return IntervalUnion(std::move(out));
  }

  IntervalUnion unite(const IntervalUnion& other) const {
    std::vector<Interval> out = parts_;
    out.insert(out.end(), other.parts_.begin(), other.parts_.end());
    return IntervalUnion(std::move(out));
  }

  // Mirror image {-x : x in this}.
  IntervalUnion negate() const {
    std::vector<Interval> out;
    for (const auto& p : parts_) out.push_back({-p.hi, -p.lo});
    return IntervalUnion(std::move(out));
  }

 private:
  void normalize() {
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& p : parts_) {
      if (p.empty()) continue;
      if (!merged.empty() && p.lo <= merged.back().hi) {
        if (p.hi > merged.back().hi) merged.back().hi = p.hi;
      } else {
        merged.push_back(p);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

}  // namespace nicf
