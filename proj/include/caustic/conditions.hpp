#pragma once

// Linear condition a rational caustic of rotation number p/q imposes on the
// Fourier modes of a boundary perturbation, truncated at expansion order N.
// The caustic survives only if the functional annihilates the perturbation
// up to the stated remainder scale, so the row is the building block of the
// mode-recovery systems assembled in nondeg.hpp.

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "caustic/billiard.hpp"
#include "caustic/modal.hpp"

namespace caustic {

// Weights on modes a_{q-2l}, l = -N..N, stored at index l+N. `exact` carries
// the modulus factor kappa^{2n} of the chosen caustic; `leading` replaces it
// by e^{2n}/cos^{2n}(p pi / q), the two agreeing to relative O(e^2). The
// dropped tail is O(remainder_scale) times the perturbation size.
struct ConditionRow {
    int p = 0;
    int q = 0;
    int N = 0;
    double kappa_sq = 0;
    std::vector<double> exact;
    std::vector<double> leading;
    double remainder_scale = 0;

    double weight_on(int mode) const {
        const int l2 = q - mode;
        if (l2 % 2 != 0 || std::abs(l2) > 2 * N) return 0.0;
        return exact[static_cast<std::size_t>(l2 / 2 + N)];
    }
};

inline ConditionRow fourier_condition_row(int p, int q, int N, const Ellipse& frame) {
    if (p <= 0 || q <= 0 || std::gcd(p, q) != 1)
        throw domain_error("rotation number must be a positive fraction in lowest terms");
    if (N < 0 || q <= 2 * N) throw domain_error("expansion order requires q > 2N");

    ConditionRow row;
    row.p = p;
    row.q = q;
    row.N = N;
    row.exact.assign(static_cast<std::size_t>(2 * N + 1), 0.0);
    row.leading.assign(static_cast<std::size_t>(2 * N + 1), 0.0);
    row.exact[static_cast<std::size_t>(N)] = 1.0;
    row.leading[static_cast<std::size_t>(N)] = 1.0;

    const double lambda = lambda_from_rotation(frame, RotationNumber::fraction(p, q));
    row.kappa_sq = caustic_modulus_sq(frame, lambda);
    const double e2 = frame.e() * frame.e();
    const double cos2 = std::pow(std::cos(kPi * p / q), 2);

    const XiTable table = xi_polynomials(N);
    double kap_n = 1.0, lead_n = 1.0;
    for (int n = 1; n <= N; ++n) {
        kap_n *= row.kappa_sq;
        lead_n *= e2 / cos2;
        for (int l = -n; l <= n; ++l) {
            const IndexPoly& xi = table.xi(n, l);
            if (xi.is_zero()) continue;
            const double value = to_double(to_real<xreal>(xi.eval(Rat(q - 2 * l))));
            row.exact[static_cast<std::size_t>(l + N)] += value * kap_n;
            row.leading[static_cast<std::size_t>(l + N)] += value * lead_n;
        }
    }
    row.remainder_scale = kap_n * row.kappa_sq;
    return row;
}

}  // namespace caustic
