#pragma once

// Interval arithmetic over the extended-precision scalar without directed
// rounding: every operation widens its result outward by a slack that
// dominates the platform's worst-case rounding (a few ulps at 50 digits, the
// slack is ~10^4 ulps). Enclosures stay rigorous at ~45 correct digits, which
// is what sign certification of badly cancelling determinants needs; tight
// enclosures are a non-goal.

#include <algorithm>

#include "caustic/errors.hpp"
#include "caustic/rational.hpp"
#include "caustic/real.hpp"

namespace caustic {

class Interval {
  public:
    Interval() : lo_(0), hi_(0) {}

    static Interval point(const xreal& v) { return Interval(v, v); }

    static Interval bounds(const xreal& lo, const xreal& hi) {
        if (lo > hi) throw domain_error("interval bounds out of order");
        return Interval(lo, hi);
    }

    // Encloses a value already rounded once from an exact source.
    static Interval rounded(const xreal& v) {
        const xreal pad = slack() * abs(v);
        return Interval(v - pad, v + pad);
    }

    // Exact rational: numerator and denominator each round once, then one
    // widened division.
    static Interval of_rational(const Rat& r) {
        const Interval num = rounded(xreal(numerator(r)));
        const Interval den = rounded(xreal(denominator(r)));
        return num / den;
    }

    // cos(w pi) for rational w in [0, 1], where cos is monotone decreasing;
    // the phase interval is thin, so the endpoint images bracket the range.
    static Interval cos_pi(const Rat& w) {
        if (w < 0 || w > 1) throw domain_error("cos_pi expects w in [0, 1]");
        const Interval phase = of_rational(w) * rounded(pi_v<xreal>());
        using std::cos;
        const xreal lo = cos(phase.hi_) - slack();
        const xreal hi = cos(phase.lo_) + slack();
        return Interval(lo, hi);
    }

    const xreal& lo() const { return lo_; }
    const xreal& hi() const { return hi_; }
    xreal mid() const { return (lo_ + hi_) / 2; }
    xreal width() const { return hi_ - lo_; }
    xreal mag() const { return std::max(abs(lo_), abs(hi_)); }

    bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }
    bool contains(const xreal& v) const { return lo_ <= v && v <= hi_; }
    // +1 / -1 when the enclosure excludes zero, 0 when undecided.
    int certified_sign() const { return lo_ > 0 ? 1 : (hi_ < 0 ? -1 : 0); }

    friend Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }

    friend Interval operator+(const Interval& a, const Interval& b) {
        const xreal pad = slack() * (a.mag() + b.mag());
        return Interval(a.lo_ + b.lo_ - pad, a.hi_ + b.hi_ + pad);
    }

    friend Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

    friend Interval operator*(const Interval& a, const Interval& b) {
        const xreal p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
        const xreal p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        xreal lo = std::min(std::min(p1, p2), std::min(p3, p4));
        xreal hi = std::max(std::max(p1, p2), std::max(p3, p4));
        const xreal pad = slack() * std::max(abs(lo), abs(hi));
        return Interval(lo - pad, hi + pad);
    }

    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.certified_sign() == 0)
            throw numeric_error("interval division through zero", to_double(b.width()));
        const xreal q1 = a.lo_ / b.lo_, q2 = a.lo_ / b.hi_;
        const xreal q3 = a.hi_ / b.lo_, q4 = a.hi_ / b.hi_;
        xreal lo = std::min(std::min(q1, q2), std::min(q3, q4));
        xreal hi = std::max(std::max(q1, q2), std::max(q3, q4));
        const xreal pad = slack() * std::max(abs(lo), abs(hi));
        return Interval(lo - pad, hi + pad);
    }

    Interval pow_int(int n) const {
        if (n < 0) throw domain_error("interval power expects n >= 0");
        Interval r = point(xreal(1));
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

  private:
    Interval(const xreal& lo, const xreal& hi) : lo_(lo), hi_(hi) {}

    // ~10^4 ulps of the 50-digit scalar; also used as an absolute pad after
    // cos, whose arguments and values here are of order one.
    static const xreal& slack() {
        static const xreal s("1e-45");
        return s;
    }

    xreal lo_, hi_;
};

}  // namespace caustic
