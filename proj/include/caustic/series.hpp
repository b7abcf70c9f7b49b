#pragma once

// Exact expansion of the boundary parametrization adapted to a confocal
// caustic: the angle correction Delta(theta) with
//   phi = theta + Delta(theta),  Delta = sum_{j>=1} phi_j(theta) kappa^{2j},
// obtained as the fixed point of Delta = -A^{-1} Osc(theta + Delta), where
// A(kappa) kappa-series of (2/pi) K(kappa) and Osc the oscillatory part of the
// incomplete integral. Every coefficient is an exact rational trig polynomial.

#include <cstddef>
#include <vector>

#include "caustic/errors.hpp"
#include "caustic/trigpoly.hpp"

namespace caustic {

using TrigSeries = std::vector<RationalTrigPoly>;  // index = power of kappa^2
using ScalarSeries = std::vector<Rat>;

namespace detail {

inline TrigSeries series_mul(const TrigSeries& a, const TrigSeries& b, int N) {
    TrigSeries c(N + 1);
    for (int i = 0; i <= N && i < static_cast<int>(a.size()); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; i + j <= N && j < static_cast<int>(b.size()); ++j) {
            if (b[j].is_zero()) continue;
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

// reciprocal of a scalar series with unit constant term
inline ScalarSeries scalar_series_inverse(const ScalarSeries& a, int N) {
    ScalarSeries inv(N + 1, Rat(0));
    inv[0] = 1;
    for (int n = 1; n <= N; ++n) {
        Rat s(0);
        for (int j = 1; j <= n; ++j)
            if (j < static_cast<int>(a.size())) s += a[j] * inv[n - j];
        inv[n] = -s;
    }
    return inv;
}

// central binomial ratio c_n = C(2n, n) / 4^n
inline Rat central_coeff(int n) {
    return Rat(binomial(2 * n, n)) / rat_pow(Rat(4), n);
}

// Full-depth computation of Delta[0..N]; Delta[0] is identically zero.
inline TrigSeries action_angle_delta(int N) {
    std::vector<Rat> c(N + 1);
    ScalarSeries A(N + 1);
    for (int n = 0; n <= N; ++n) {
        c[n] = central_coeff(n);
        A[n] = c[n] * c[n];
    }
    const ScalarSeries invA = scalar_series_inverse(A, N);

    // osc_n(phi) = (c_n / 4^n) sum_{l=1}^{n} (-1)^l C(2n, n-l) sin(2 l phi) / l
    std::vector<RationalTrigPoly> osc(N + 1);
    for (int n = 1; n <= N; ++n) {
        const Rat scale = c[n] / rat_pow(Rat(4), n);
        for (int l = 1; l <= n; ++l) {
            Rat coeff = scale * Rat(binomial(2 * n, n - l)) / l;
            if (l % 2) coeff = -coeff;
            osc[n].add_term(2 * l, TrigFn::sin, coeff);
        }
    }

    TrigSeries Delta(N + 1);
    for (int sweep = 0; sweep <= N; ++sweep) {
        // T = Osc(theta + Delta) as a series; osc_n contributes from order n
        TrigSeries T(N + 1);
        for (int n = 1; n <= N; ++n) {
            const int M = N - n;  // available Taylor depth
            TrigSeries acc(M + 1);
            acc[0] = osc[n];
            RationalTrigPoly d = osc[n];
            TrigSeries Dpow(M + 1);
            Dpow[0] = RationalTrigPoly::constant(Rat(1));
            Rat factorial(1);
            for (int r = 1; r <= M; ++r) {
                d = d.derivative();
                Dpow = series_mul(Dpow, Delta, M);
                factorial *= r;
                const Rat inv_fact = Rat(1) / factorial;
                for (int i = 0; i <= M; ++i) {
                    if (Dpow[i].is_zero()) continue;
                    acc[i] += (Dpow[i] * d).scaled(inv_fact);
                }
            }
            for (int i = 0; i <= M; ++i) T[n + i] += acc[i];
        }
        // Delta = -invA * T
        TrigSeries next(N + 1);
        for (int i = 0; i <= N; ++i) {
            if (invA[i] == 0) continue;
            for (int j = 0; i + j <= N; ++j) next[i + j] += T[j].scaled(-invA[i]);
        }
        Delta = std::move(next);
    }
    return Delta;
}

}  // namespace detail

// Angle-correction coefficients phi_1..phi_N; phi(j) is the coefficient of
// kappa^{2j}. Structural guarantees: pure sine polynomials in even harmonics
// not exceeding 2j.
class ExpansionSeries {
  public:
    explicit ExpansionSeries(int N) : N_(N), delta_(detail::action_angle_delta(N)) {
        for (int j = 1; j <= N_; ++j) {
            const auto& p = delta_[j];
            if (!p.pure_sin() || p.max_harmonic() > 2 * j)
                throw structural_error("angle-correction coefficient violates sine/harmonic bound");
            for (const auto& [key, coeff] : p.terms())
                if (key.first % 2 != 0)
                    throw structural_error("angle-correction coefficient has odd harmonic");
        }
    }

    int order() const { return N_; }
    const RationalTrigPoly& phi(int j) const {
        if (j < 1 || j > N_) throw domain_error("phi_j index out of range");
        return delta_[j];
    }
    const TrigSeries& delta() const { return delta_; }

    // Numeric partial sum theta + sum_{j<=N} phi_j(theta) x^j at x = kappa^2.
    template <class Real>
    Real eval_phi_of_theta(const Real& theta, const Real& kappa_sq) const {
        Real acc = theta;
        Real xp(1);
        for (int j = 1; j <= N_; ++j) {
            xp *= kappa_sq;
            acc += delta_[j].eval(theta) * xp;
        }
        return acc;
    }

  private:
    int N_;
    TrigSeries delta_;
};

// Public entry point; the cost grows combinatorially, so the contract caps N.
inline ExpansionSeries expand_action_angle(int N) {
    if (N < 1 || N > 16) throw domain_error("expansion order must be in [1, 16]");
    return ExpansionSeries(N);
}

}  // namespace caustic
