#pragma once

// Legendre elliptic integrals of the first kind and Jacobi amplitude/sn/cn,
// evaluated by AGM/Landen transformations. Templated on the real type; the
// same code serves double and the 50-digit extended scalar.

#include <cmath>
#include <cstddef>

#include "caustic/errors.hpp"
#include "caustic/real.hpp"

namespace caustic {

// Modulus k with 0 <= k < 1.
template <class Real>
struct Modulus {
    Real k;
    explicit Modulus(Real k_) : k(std::move(k_)) {
        if (!is_finite(k) || k < Real(0) || k >= Real(1))
            throw domain_error("modulus k must satisfy 0 <= k < 1");
    }
};

// Amplitude angle, unbounded; reduction handled by quasi-periodicity.
template <class Real>
struct AmplitudeAngle {
    Real phi;
    explicit AmplitudeAngle(Real phi_) : phi(std::move(phi_)) {
        if (!is_finite(phi)) throw domain_error("amplitude must be finite");
    }
};

namespace detail {

constexpr std::size_t kAgmMax = 128;

// AGM sequence a_n, b_n, c_n down to c_n ~ 0; returns count and fills arrays.
template <class Real>
std::size_t agm_scale(const Real& k, Real* a, Real* b, Real* c) {
    using std::fabs;
    using std::sqrt;
    a[0] = Real(1);
    b[0] = sqrt(Real((Real(1) - k) * (Real(1) + k)));  // k' without cancellation at small k
    c[0] = k;
    std::size_t n = 0;
    const Real tol = eps_v<Real>();
    while (fabs(c[n]) > tol * a[n]) {
        if (n + 1 >= kAgmMax)
            throw numeric_error("AGM failed to converge", to_double(fabs(c[n])));
        a[n + 1] = (a[n] + b[n]) / 2;
        b[n + 1] = sqrt(Real(a[n] * b[n]));
        c[n + 1] = (a[n] - b[n]) / 2;
        ++n;
    }
    return n;
}

// F on the reduced range |phi| <= pi/2: ascending-amplitude Landen.
// tan(phi_{m+1} - phi_m) = (b_m/a_m) tan(phi_m) with the branch nearest phi_m,
// so phi_{m+1} ~ 2 phi_m; then F = phi_N / (2^N a_N).
template <class Real>
Real incomplete_F_reduced(const Real& phi, const Real& k) {
    using std::atan2;
    using std::cos;
    using std::fabs;
    using std::sin;
    if (k == Real(0)) return phi;
    Real a[kAgmMax], b[kAgmMax], c[kAgmMax];
    const std::size_t n = agm_scale(k, a, b, c);
    Real ph = phi;
    Real scale(1);
    const Real pi = pi_v<Real>();
    for (std::size_t m = 0; m < n; ++m) {
        Real d = atan2(Real(b[m] * sin(ph)), Real(a[m] * cos(ph)));
        long branch = std::lround(to_double(Real((ph - d) / pi)));
        Real adj = d + pi * Real(branch);
        ph = ph + adj;
        scale *= 2;
    }
    return ph / (scale * a[n]);
}

// am on the reduced range |u| <= K: backward recurrence
// psi_N = 2^N a_N u, psi_{m-1} = (psi_m + asin((c_m/a_m) sin psi_m)) / 2.
template <class Real>
Real jacobi_am_reduced(const Real& u, const Real& k) {
    using std::asin;
    using std::sin;
    if (k == Real(0)) return u;
    Real a[kAgmMax], b[kAgmMax], c[kAgmMax];
    const std::size_t n = agm_scale(k, a, b, c);
    Real scale(1);
    for (std::size_t m = 0; m < n; ++m) scale *= 2;
    Real psi = scale * a[n] * u;
    for (std::size_t m = n; m >= 1; --m) {
        Real s = Real(c[m] / a[m]) * sin(psi);
        psi = (psi + asin(s)) / 2;
    }
    return psi;
}

}  // namespace detail

// Complete integral K(k) = pi / (2 agm(1, k')).
template <class Real>
Real complete_K(const Modulus<Real>& k) {
    Real a[detail::kAgmMax], b[detail::kAgmMax], c[detail::kAgmMax];
    const std::size_t n = detail::agm_scale(k.k, a, b, c);
    return pi_v<Real>() / (2 * a[n]);
}

// Incomplete integral F(phi; k); odd in phi, F(phi + pi) = F(phi) + 2K.
template <class Real>
Real incomplete_F(const AmplitudeAngle<Real>& phi, const Modulus<Real>& k) {
    using std::floor;
    const Real pi = pi_v<Real>();
    // phi = phi_r + n pi with phi_r in [-pi/2, pi/2]
    Real n = floor(Real(phi.phi / pi + Real(1) / 2));
    Real phi_r = phi.phi - n * pi;
    Real F = detail::incomplete_F_reduced(phi_r, k.k);
    if (n != Real(0)) F += 2 * n * complete_K(k);
    return F;
}

template <class Real>
struct AmSnCn {
    Real am, sn, cn;
};

// Jacobi amplitude with sn = sin am, cn = cos am; satisfies F(am; k) = u.
template <class Real>
AmSnCn<Real> jacobi_am_sn_cn(const Real& u, const Modulus<Real>& k) {
    using std::cos;
    using std::floor;
    using std::sin;
    if (!is_finite(u)) throw domain_error("u must be finite");
    const Real pi = pi_v<Real>();
    const Real K = complete_K(k);
    // u = u_r + 2nK with u_r in [-K, K]; am(u) = am(u_r) + n pi
    Real n = floor(Real(u / (2 * K) + Real(1) / 2));
    Real u_r = u - 2 * n * K;
    Real am = detail::jacobi_am_reduced(u_r, k.k) + n * pi;
    return {am, sin(am), cos(am)};
}

// Raw-scalar conveniences (validate and forward).
template <class Real>
Real incomplete_F(const Real& phi, const Real& k) {
    return incomplete_F(AmplitudeAngle<Real>(phi), Modulus<Real>(k));
}

template <class Real>
Real complete_K(const Real& k) {
    return complete_K(Modulus<Real>(k));
}

template <class Real>
AmSnCn<Real> jacobi_am_sn_cn(const Real& u, const Real& k) {
    return jacobi_am_sn_cn(u, Modulus<Real>(k));
}

}  // namespace caustic
