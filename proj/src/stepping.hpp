// Output-time bookkeeping for the time loops. Internal header.

#pragma once

#include <algorithm>

namespace rdns::detail {

/// Output times t0 + k cadence (k >= 1), the last one clipped to t_end.
/// Steps are shortened so that they land exactly on each output time.
class OutputClock {
 public:
  OutputClock(double t0, double t_end, double cadence)
      : t0_(t0), t_end_(t_end), cadence_(cadence) {
    next_ = std::min(t0_ + cadence_, t_end_);
  }

  bool done(double t) const { return t >= t_end_; }

  double clip(double t, double dt, bool& hit) const {
    const double remaining = next_ - t;
    hit = dt >= remaining;
    return hit ? remaining : dt;
  }

  double landed() const { return next_; }

  void advance() {
    ++k_;
    next_ = std::min(t0_ + static_cast<double>(k_) * cadence_, t_end_);
  }

 private:
  double t0_, t_end_, cadence_;
  long k_ = 1;
  double next_;
};

}  // namespace rdns::detail
