#pragma once

// Lazutkin parametrization x of a strictly convex boundary: dx/ds is
// proportional to rho^{-2/3}, normalized so one loop spans 2 pi. Built
// spectrally from the Fourier representation of the boundary, together with
// the arclength map and the q-adapted straightening x = X_q(theta).

#include <cmath>
#include <vector>

#include "caustic/billiard.hpp"
#include "caustic/ellipse.hpp"

namespace caustic {

namespace detail {

// antiderivative of a trigonometric polynomial, F(0) = 0: the mean
// integrates to a linear term, oscillatory modes stay periodic
class SpectralAntiderivative {
  public:
    SpectralAntiderivative() = default;
    explicit SpectralAntiderivative(const FourierSeries& f) : f_(f) {}

    double eval(double phi) const {
        double s = f_.mean() * phi;
        for (int k = 1; k <= f_.K_max(); ++k) {
            s += f_.cos_coeff(k) * std::sin(k * phi) / k +
                 f_.sin_coeff(k) * (1 - std::cos(k * phi)) / k;
        }
        return s;
    }
    double slope(double phi) const { return f_.eval(phi); }
    double mean() const { return f_.mean(); }

    // inverse of the strictly increasing eval; Newton with bisection fallback
    double invert(double target) const {
        const double period_gain = 2 * kPi * f_.mean();
        const double loops = std::floor(target / period_gain);
        const double red = target - loops * period_gain;
        double lo = 0, hi = 2 * kPi;
        double x = red / f_.mean();
        for (int i = 0; i < 60; ++i) {
            const double val = eval(x) - red;
            if (val > 0) hi = std::min(hi, x);
            else lo = std::max(lo, x);
            const double der = slope(x);
            double nx = x - val / der;
            if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);
            if (std::fabs(nx - x) < 1e-15 * (1 + std::fabs(x))) {
                x = nx;
                break;
            }
            x = nx;
        }
        return x + loops * 2 * kPi;
    }

  private:
    FourierSeries f_;
};

}  // namespace detail

class LazutkinMap {
  public:
    explicit LazutkinMap(const PerturbedDomain& domain, int grid_K = 0) {
        const int K = grid_K > 0 ? grid_K : std::max(2 * domain.mu().K_max(), 64);
        auto g = [&](double phi) {
            Vec2 P, dP, ddP;
            domain.boundary_jet(phi, P, dP, ddP);
            const double speed = dP.norm();
            const double rho = speed * speed * speed / dP.cross(ddP);
            if (!(rho > 0)) throw geometry_error("curvature sign change along the boundary");
            return std::pow(rho, -2.0 / 3.0) * speed;
        };
        auto sp = [&](double phi) {
            Vec2 P, dP, ddP;
            domain.boundary_jet(phi, P, dP, ddP);
            return dP.norm();
        };
        density_ = detail::SpectralAntiderivative(fourier_from_function(g, K));
        arclen_ = detail::SpectralAntiderivative(fourier_from_function(sp, K));
        C_Omega_ = 1.0 / density_.mean();
    }

    double C_Omega() const { return C_Omega_; }
    double total_length() const { return 2 * kPi * arclen_.mean(); }

    double x_of_phi(double phi) const { return C_Omega_ * density_.eval(phi); }
    double x_prime_of_phi(double phi) const { return C_Omega_ * density_.slope(phi); }
    double phi_of_x(double x) const { return density_.invert(x / C_Omega_); }

    double s_of_phi(double phi) const { return arclen_.eval(phi); }
    double phi_of_s(double s) const { return arclen_.invert(s); }
    double x_of_s(double s) const { return x_of_phi(phi_of_s(s)); }

  private:
    detail::SpectralAntiderivative density_;
    detail::SpectralAntiderivative arclen_;
    double C_Omega_ = 1;
};

// Straightening of the action-angle parametrization adapted to the 1/q
// caustic: x = X_q(theta) with X_q close to the identity for large q.
class XqMap {
  public:
    XqMap(const Ellipse& frame, std::int64_t q, int grid_K = 0)
        : circular_(frame.circular()),
          lz_(unperturbed(frame, 8), grid_K),
          aa_(make_action_angle(frame, q)) {
        if (q < 3) throw domain_error("need q > 2");
    }

    double x(double theta) const {
        if (circular_) return theta;
        return lz_.x_of_phi(aa_->phi(theta));
    }
    double x_prime(double theta) const {
        if (circular_) return 1.0;
        return lz_.x_prime_of_phi(aa_->phi(theta)) * aa_->phi_prime(theta);
    }
    // inverse map theta(x); Newton from theta = x
    double theta(double x_val) const {
        if (circular_) return x_val;
        double t = x_val;
        for (int i = 0; i < 80; ++i) {
            const double val = x(t) - x_val;
            const double der = x_prime(t);
            const double nt = t - val / der;
            if (std::fabs(nt - t) < 1e-14 * (1 + std::fabs(t))) return nt;
            t = nt;
        }
        return t;
    }

  private:
    static std::optional<ActionAngle> make_action_angle(const Ellipse& frame, std::int64_t q) {
        if (frame.circular()) return std::nullopt;
        const double lam = lambda_from_rotation(frame, RotationNumber::fraction(1, q));
        return ActionAngle(frame, lam);
    }

    bool circular_;
    LazutkinMap lz_;
    std::optional<ActionAngle> aa_;
};

}  // namespace caustic
