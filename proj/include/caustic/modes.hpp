#pragma once
// Caustic-adapted Fourier modes on the boundary, the unnormalized periodic
// H^r inner product, the basis-perturbation defect, and the pairing test of
// a boundary perturbation against the adapted antiderivative modes.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "caustic/ellipse.hpp"
#include "caustic/errors.hpp"
#include "caustic/fourier.hpp"
#include "caustic/lazutkin.hpp"

namespace caustic {

// Retained harmonics for tabulated modes; the sampling grid is 8x this.
inline constexpr int kModeHarmonics = 512;

// k > 0 cosine type, k < 0 sine type, 0 the constant.
struct ModeIndex {
    int k = 0;
};

struct SobolevOrder {
    int r = 1;
};

// v_0 = 1, v_k = cos(kx)/sqrt(pi), v_{-k} = sin(kx)/sqrt(pi).
inline FourierSeries standard_mode(ModeIndex idx) {
    if (std::abs(idx.k) > kModeHarmonics)
        throw domain_error("mode index exceeds the harmonic cap");
    FourierSeries f = FourierSeries::zero(kModeHarmonics);
    const double amp = 1.0 / std::sqrt(kPi);
    if (idx.k == 0)
        f.set_mean(1.0);
    else if (idx.k > 0)
        f.set_cos(idx.k, amp);
    else
        f.set_sin(-idx.k, amp);
    return f;
}

// Spectral derivative and zero-average antiderivative, applied r times.
inline FourierSeries spectral_derivative(const FourierSeries& u, int r) {
    if (r < 0) throw domain_error("derivative order must be nonnegative");
    FourierSeries g = u;
    for (int j = 0; j < r; ++j) {
        FourierSeries next = FourierSeries::zero(g.K_max());
        for (int n = 1; n <= g.K_max(); ++n) {
            next.set_cos(n, n * g.sin_coeff(n));
            next.set_sin(n, -n * g.cos_coeff(n));
        }
        g = next;
    }
    return g;
}

inline FourierSeries spectral_antiderivative(const FourierSeries& u, int r) {
    if (r < 0) throw domain_error("antiderivative order must be nonnegative");
    if (std::fabs(u.mean()) > 1e-10)
        throw domain_error("periodic antiderivative requires zero average");
    FourierSeries g = u;
    g.set_mean(0.0);
    for (int j = 0; j < r; ++j) {
        FourierSeries next = FourierSeries::zero(g.K_max());
        for (int n = 1; n <= g.K_max(); ++n) {
            next.set_cos(n, -g.sin_coeff(n) / n);
            next.set_sin(n, g.cos_coeff(n) / n);
        }
        g = next;
    }
    return g;
}

namespace detail {

// Both adapted numerators share one pass of X_k inversions over the grid.
struct DeformedPair {
    FourierSeries cosine, sine;
};

inline DeformedPair deformed_mode_pair(const Ellipse& frame, int k) {
    const XqMap X(frame, k);
    const int n = 8 * kModeHarmonics;
    std::vector<double> fc(static_cast<std::size_t>(n)), fs(static_cast<std::size_t>(n));
    const double rt_pi = std::sqrt(kPi);
    for (int i = 0; i < n; ++i) {
        const double x = 2 * kPi * i / n;
        const double th = X.theta(x);
        const double w = rt_pi * X.x_prime(th);
        fc[static_cast<std::size_t>(i)] = std::cos(k * th) / w;
        fs[static_cast<std::size_t>(i)] = std::sin(k * th) / w;
    }
    return {FourierSeries::from_spectrum(analyze_real(fc, kModeHarmonics)),
            FourierSeries::from_spectrum(analyze_real(fs, kModeHarmonics))};
}

}  // namespace detail

// c_k: the standard mode for |k| <= q0; for |k| > q0 the standard mode
// transported through X_k, weighted by 1/X_k' so the average stays zero:
// c_k(x) = cos(k X_k^{-1}(x)) / (sqrt(pi) X_k'(X_k^{-1}(x))), sine for k < 0.
inline FourierSeries deformed_mode(const Ellipse& frame, ModeIndex idx, int q0) {
    if (idx.k == 0) throw domain_error("deformed modes are indexed by nonzero k");
    if (std::abs(idx.k) > kModeHarmonics)
        throw domain_error("mode index exceeds the harmonic cap");
    if (q0 < 2) throw domain_error("exact-mode cutoff must be at least 2");
    if (std::abs(idx.k) <= q0) return standard_mode(idx);
    const detail::DeformedPair pair = detail::deformed_mode_pair(frame, std::abs(idx.k));
    return idx.k > 0 ? pair.cosine : pair.sine;
}

// <u,v>_r = (int u)(int v) + int u^(r) v^(r) over [0, 2pi), unnormalized.
// The resolved flag reports whether both spectra decayed below 1e-12 before
// their last retained harmonics.
struct SobolevProduct {
    double value = 0;
    bool resolved = true;
};

inline bool spectrum_resolved(const FourierSeries& u, double tol = 1e-12) {
    const int K = u.K_max();
    const int window = std::max(1, K / 8);
    return u.max_abs_coeff_above(std::max(1, K - window)) <= tol;
}

inline SobolevProduct sobolev_inner(const FourierSeries& u, const FourierSeries& v,
                                    SobolevOrder order) {
    if (order.r < 1) throw domain_error("Sobolev order must be at least 1");
    double acc = (2 * kPi * u.mean()) * (2 * kPi * v.mean());
    const int K = std::min(u.K_max(), v.K_max());
    for (int n = 1; n <= K; ++n) {
        double w = kPi;
        for (int j = 0; j < order.r; ++j) w *= static_cast<double>(n) * n;
        acc += w * (u.cos_coeff(n) * v.cos_coeff(n) + u.sin_coeff(n) * v.sin_coeff(n));
    }
    return {acc, spectrum_resolved(u) && spectrum_resolved(v)};
}

inline SobolevProduct sobolev_norm_sq(const FourierSeries& u, SobolevOrder order) {
    return sobolev_inner(u, u, order);
}

// Zero-average r-th antiderivatives of the standard and adapted modes. The
// constant mode is normalized to 1/(2pi) so the family stays orthonormal in
// the product above, whose mean term carries the full 4 pi^2 weight.
inline FourierSeries capital_V_mode(ModeIndex idx, SobolevOrder order) {
    if (order.r < 1) throw domain_error("Sobolev order must be at least 1");
    if (idx.k == 0) {
        FourierSeries f = FourierSeries::zero(kModeHarmonics);
        f.set_mean(1.0 / (2 * kPi));
        return f;
    }
    return spectral_antiderivative(standard_mode(idx), order.r);
}

inline FourierSeries capital_C_mode(const Ellipse& frame, ModeIndex idx, SobolevOrder order,
                                    int q0) {
    if (order.r < 1) throw domain_error("Sobolev order must be at least 1");
    return spectral_antiderivative(deformed_mode(frame, idx, q0), order.r);
}

// Basis-perturbation defect: the H^r distance of the adapted antiderivative
// family from the orthonormal one, [sum_{q0<|k|<=K} |C_k - V_k|_r^2]^{1/2}
// plus a tail bound from the measured envelope sup_k k |C_k - V_k|_r. Since
// both families are zero-average r-th antiderivatives, each H^r distance
// equals the plain L^2 distance of the underlying modes, independent of r.
struct ModeDeviation {
    int k = 0;
    double cos_dev = 0, sin_dev = 0;  // |C_{+k} - V_{+k}|_r, |C_{-k} - V_{-k}|_r
};

struct BasisDefect {
    double defect = 0;
    bool threshold_ok = true;
    double envelope = 0;
    std::vector<ModeDeviation> per_k;
};

inline BasisDefect basis_defect(const Ellipse& frame, int q0, SobolevOrder order, int K) {
    if (order.r < 1) throw domain_error("Sobolev order must be at least 1");
    if (q0 < 2) throw domain_error("exact-mode cutoff must be at least 2");
    if (K < 4 * q0) throw domain_error("truncation must reach at least 4 q0");
    if (K > kModeHarmonics / 2)
        throw domain_error("truncation beyond half the harmonic cap is unresolved");
    const double amp = 1.0 / std::sqrt(kPi);
    BasisDefect out;
    double sum = 0;
    for (int k = q0 + 1; k <= K; ++k) {
        const detail::DeformedPair pair = detail::deformed_mode_pair(frame, k);
        auto l2_dist = [&](const FourierSeries& c, bool cosine) {
            double s = 0;
            for (int n = 1; n <= c.K_max(); ++n) {
                const double da = c.cos_coeff(n) - (cosine && n == k ? amp : 0.0);
                const double db = c.sin_coeff(n) - (!cosine && n == k ? amp : 0.0);
                s += da * da + db * db;
            }
            return std::sqrt(kPi * s);
        };
        ModeDeviation dev{k, l2_dist(pair.cosine, true), l2_dist(pair.sine, false)};
        sum += dev.cos_dev * dev.cos_dev + dev.sin_dev * dev.sin_dev;
        out.envelope = std::max({out.envelope, k * dev.cos_dev, k * dev.sin_dev});
        out.per_k.push_back(dev);
    }
    // sum_{|k|>K} (envelope/|k|)^2 < 2 envelope^2 / K
    const double tail = 2 * out.envelope * out.envelope / K;
    out.defect = std::sqrt(sum + tail);
    out.threshold_ok = out.defect < 1.0;
    return out;
}

// Pairing of a perturbation against the adapted antiderivative modes of the
// frame: f(x) = mu(phi_L(x)) and the result is (<f, C_{+q}>_r, <f, C_{-q}>_r).
// When the perturbed domain retains the 1/q caustic these vanish to first
// order in the perturbation size.
struct AnnihilationPair {
    double plus = 0, minus = 0;
    bool resolved = true;
};

inline AnnihilationPair annihilation_test(const PerturbedDomain& domain, int q,
                                          SobolevOrder order) {
    if (q < 3) throw domain_error("pairing needs q > 2");
    if (order.r < 1) throw domain_error("Sobolev order must be at least 1");
    const LazutkinMap lz(unperturbed(domain.frame(), 8));
    const FourierSeries f = fourier_from_function(
        [&](double x) { return domain.mu().eval(lz.phi_of_x(x)); }, kModeHarmonics);
    const detail::DeformedPair pair = detail::deformed_mode_pair(domain.frame(), q);
    const SobolevProduct plus =
        sobolev_inner(f, spectral_antiderivative(pair.cosine, order.r), order);
    const SobolevProduct minus =
        sobolev_inner(f, spectral_antiderivative(pair.sine, order.r), order);
    return {plus.value, minus.value, plus.resolved && minus.resolved};
}

}  // namespace caustic
