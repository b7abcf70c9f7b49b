#pragma once

// Real trigonometric series mu(phi) = mean + sum_k a_k cos(k phi) + b_k sin(k phi)
// with spectral differentiation and a weighted Sobolev-style norm. Coefficient
// lists always span k = 1..K_max exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "caustic/errors.hpp"
#include "caustic/fft.hpp"

namespace caustic {

class FourierSeries {
  public:
    FourierSeries() = default;
    FourierSeries(double mean, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
        : mean_(mean), a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
        if (a_.size() != b_.size()) throw domain_error("coefficient lists must have equal length");
    }

    static FourierSeries zero(int K_max) {
        return FourierSeries(0.0, std::vector<double>(K_max, 0.0), std::vector<double>(K_max, 0.0));
    }
    static FourierSeries from_spectrum(const RealSpectrum& s) {
        return FourierSeries(s.mean, s.a, s.b);
    }

    int K_max() const { return static_cast<int>(a_.size()); }
    double mean() const { return mean_; }
    const std::vector<double>& cos_coeffs() const { return a_; }
    const std::vector<double>& sin_coeffs() const { return b_; }

    double cos_coeff(int k) const { return valid(k) ? a_[k - 1] : 0.0; }
    double sin_coeff(int k) const { return valid(k) ? b_[k - 1] : 0.0; }

    void set_cos(int k, double v) { a_.at(static_cast<std::size_t>(k) - 1) = v; }
    void set_sin(int k, double v) { b_.at(static_cast<std::size_t>(k) - 1) = v; }
    void set_mean(double v) { mean_ = v; }

    double eval(double phi) const {
        double acc = mean_;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            acc += a_[i] * std::cos(k * phi) + b_[i] * std::sin(k * phi);
        }
        return acc;
    }
    double deriv(double phi) const {
        double acc = 0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            acc += k * (-a_[i] * std::sin(k * phi) + b_[i] * std::cos(k * phi));
        }
        return acc;
    }
    double deriv2(double phi) const {
        double acc = 0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            acc -= k * k * (a_[i] * std::cos(k * phi) + b_[i] * std::sin(k * phi));
        }
        return acc;
    }

    FourierSeries& operator+=(const FourierSeries& o) {
        if (o.a_.size() > a_.size()) {
            a_.resize(o.a_.size(), 0.0);
            b_.resize(o.a_.size(), 0.0);
        }
        mean_ += o.mean_;
        for (std::size_t i = 0; i < o.a_.size(); ++i) {
            a_[i] += o.a_[i];
            b_[i] += o.b_[i];
        }
        return *this;
    }
    FourierSeries scaled(double s) const {
        FourierSeries r = *this;
        r.mean_ *= s;
        for (auto& v : r.a_) v *= s;
        for (auto& v : r.b_) v *= s;
        return r;
    }
    friend FourierSeries operator-(FourierSeries u, const FourierSeries& v) {
        u += v.scaled(-1.0);
        return u;
    }

    // sum over modes of (1 v k^{2n}) (a_k^2 + b_k^2), mean included at weight 1;
    // proxy for the squared C^n norm used by the fitting searches.
    double weighted_norm_sq(int n) const {
        double acc = mean_ * mean_;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            const double w = std::max(1.0, std::pow(k, 2 * n));
            acc += w * (a_[i] * a_[i] + b_[i] * b_[i]);
        }
        return acc;
    }

    double max_abs_coeff_above(int k_min) const {
        double m = 0;
        for (std::size_t i = static_cast<std::size_t>(std::max(1, k_min)) - 1; i < a_.size(); ++i)
            m = std::max({m, std::fabs(a_[i]), std::fabs(b_[i])});
        return m;
    }

  private:
    bool valid(int k) const { return k >= 1 && static_cast<std::size_t>(k) <= a_.size(); }
    double mean_ = 0;
    std::vector<double> a_;
    std::vector<double> b_;
};

// Project a periodic sampled function (uniform grid over [0, 2pi)) onto K_max
// modes; the sample count is rounded up to a power of two >= oversample*K_max.
template <class F>
FourierSeries fourier_from_function(F&& f, int K_max, int oversample = 8) {
    const std::size_t n = next_pow2(static_cast<std::size_t>(std::max(oversample * K_max, 16)));
    std::vector<double> samples(n);
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t i = 0; i < n; ++i)
        samples[i] = f(2 * pi * static_cast<double>(i) / static_cast<double>(n));
    return FourierSeries::from_spectrum(analyze_real(samples, K_max));
}

}  // namespace caustic
