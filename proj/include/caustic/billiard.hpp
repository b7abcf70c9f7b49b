#pragma once

// Billiard dynamics in strictly convex perturbed domains: the reflection map,
// exact caustic orbits of the ellipse via Jacobi functions, rotation numbers
// and their inverse, the action-angle boundary parametrization, maximal
// (p,q)-gons, and the rational-caustic obstruction functional.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "caustic/ellipse.hpp"
#include "caustic/special_functions.hpp"

namespace caustic {

struct BoundaryState {
    double phi;
    double theta_in;  // angle from the positive tangent, in (0, pi)
    BoundaryState(double phi_, double theta_) : phi(phi_), theta_in(theta_) {
        if (!(theta_in > 0) || !(theta_in < kPi))
            throw domain_error("boundary state needs theta in (0, pi)");
    }
};

struct CausticOrbitSpec {
    double lambda;
    double t0 = 0;
    int count = 0;
};

struct RotationNumber {
    double value;
    std::optional<std::pair<std::int64_t, std::int64_t>> as_fraction;

    static RotationNumber of(double v) {
        check(v);
        return {v, std::nullopt};
    }
    static RotationNumber fraction(std::int64_t p, std::int64_t q) {
        if (q <= 0 || p <= 0 || std::gcd(p, q) != 1)
            throw domain_error("rotation fraction needs coprime p, q > 0");
        const double v = static_cast<double>(p) / static_cast<double>(q);
        check(v);
        return {v, std::make_pair(p, q)};
    }

  private:
    static void check(double v) {
        if (!(v > 0) || !(v < 0.5)) throw domain_error("rotation number must lie in (0, 1/2)");
    }
};

// ---------------------------------------------------------------------------
// Rotation number of the confocal caustic C_lambda and its inverse.

inline double caustic_rotation_value(const Ellipse& frame, double lambda) {
    if (!(lambda > 0) || !(lambda < frame.b()))
        throw domain_error("caustic parameter must lie strictly between 0 and b");
    const double k = std::sqrt(caustic_modulus_sq(frame, lambda));
    const double amp = std::asin(lambda / frame.b());
    return incomplete_F(amp, k) / (2 * complete_K(k));
}

inline RotationNumber caustic_rotation_number(const Ellipse& frame, double lambda) {
    return RotationNumber::of(caustic_rotation_value(frame, lambda));
}

// Monotone bisection on (0, b); the rotation value is strictly increasing.
inline double lambda_from_rotation(const Ellipse& frame, const RotationNumber& omega) {
    double lo = 0.0, hi = frame.b();
    for (int i = 0; i < 110; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        (caustic_rotation_value(frame, mid) < omega.value ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Action-angle parametrization of the boundary adapted to C_lambda:
// phi(theta) = pi/2 + am((2K/pi)(theta - pi/2); k_lambda), continuous and
// unbounded, with phi(theta + 2 pi) = phi(theta) + 2 pi. The quarter-phase
// offset makes the parametrization equivariant for the true tangent orbit
// (a shift by 2 pi omega advances one reflection, tangency preserved), fixes
// phi(0) = 0, phi(pi/2) = pi/2, and degenerates to phi = theta at e = 0.
// The amplitude function without the offset parametrizes the mirror image of
// the orbit and does not satisfy the advance property.

class ActionAngle {
  public:
    ActionAngle(const Ellipse& frame, double lambda)
        : k_(std::sqrt(caustic_modulus_sq(frame, lambda))),
          K_(complete_K(k_)),
          scale_(2 * K_ / kPi) {
        if (!(lambda > 0) || !(lambda < frame.b()))
            throw domain_error("caustic parameter must lie strictly between 0 and b");
    }

    double modulus() const { return k_; }
    double quarter_period() const { return K_; }
    double jacobi_parameter(double theta) const { return scale_ * (theta - kPi / 2); }

    double phi(double theta) const {
        return kPi / 2 + jacobi_am_sn_cn(jacobi_parameter(theta), k_).am;
    }
    double phi_prime(double theta) const {
        const double sn = jacobi_am_sn_cn(jacobi_parameter(theta), k_).sn;
        return scale_ * std::sqrt(1 - k_ * k_ * sn * sn);  // dn
    }
    double theta_of_phi(double phi) const {
        return kPi / 2 + incomplete_F(phi - kPi / 2, k_) / scale_;
    }

  private:
    double k_, K_, scale_;
};

inline double action_angle_phi(double theta, double lambda, const Ellipse& frame) {
    return ActionAngle(frame, lambda).phi(theta);
}

// ---------------------------------------------------------------------------
// Exact caustic orbits on the unperturbed ellipse. The vertex at Jacobi
// parameter t is (-a sn(t; k), b cn(t; k)): a symmetric chord t -> t + delta
// with delta = 2 F(asin(lambda / b); k) then sits at height b cn(delta / 2),
// which is the tangent height to C_lambda, so every step is tangent. The
// sign on the first component orients the orbit counterclockwise, matching
// ActionAngle: the vertex equals the boundary point at angle
// pi/2 + am(t; k).

inline std::vector<Vec2> ellipse_caustic_orbit(const Ellipse& frame, const CausticOrbitSpec& spec) {
    if (!(spec.lambda > 0) || !(spec.lambda < frame.b()))
        throw domain_error("caustic parameter must lie strictly between 0 and b");
    if (spec.count < 0) throw domain_error("orbit length must be nonnegative");
    const double k = std::sqrt(caustic_modulus_sq(frame, spec.lambda));
    const double delta = 2 * incomplete_F(std::asin(spec.lambda / frame.b()), k);
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(spec.count) + 1);
    for (int j = 0; j <= spec.count; ++j) {
        const AmSnCn<double> v = jacobi_am_sn_cn(spec.t0 + j * delta, k);
        pts.push_back({-frame.a() * v.sn, frame.b() * v.cn});
    }
    return pts;
}

// Distance from the chord line p1->p2 to tangency with a centered caustic
// ellipse, via its support function. Zero iff the line is tangent.
inline double tangency_defect(const Ellipse& caustic, const Vec2& p1, const Vec2& p2) {
    const Vec2 u = p2 - p1;
    const double len = u.norm();
    if (!(len > 0)) throw domain_error("degenerate chord");
    const Vec2 n{-u.y / len, u.x / len};
    const double support = std::hypot(caustic.a() * n.x, caustic.b() * n.y);
    return std::fabs(std::fabs(n.dot(p1)) - support);
}

// ---------------------------------------------------------------------------
// The billiard reflection map.

inline BoundaryState boundary_state_from_chord(const PerturbedDomain& domain, double phi_from,
                                               const Vec2& target) {
    Vec2 P, dP, ddP;
    domain.boundary_jet(phi_from, P, dP, ddP);
    const Vec2 u = target - P;
    const double theta = std::atan2(dP.cross(u), dP.dot(u));
    return BoundaryState(phi_from, theta);
}

inline BoundaryState billiard_step(const PerturbedDomain& domain, const BoundaryState& state) {
    Vec2 P, dP, ddP;
    domain.boundary_jet(state.phi, P, dP, ddP);
    const double speed = dP.norm();
    const Vec2 T{dP.x / speed, dP.y / speed};
    const Vec2 N{-T.y, T.x};  // inward for the counterclockwise boundary
    const Vec2 d{std::cos(state.theta_in) * T.x + std::sin(state.theta_in) * N.x,
                 std::cos(state.theta_in) * T.y + std::sin(state.theta_in) * N.y};

    // crossing function along the boundary: h < 0 strictly between the two
    // intersections of the chord line, h > 0 on the complementary arc
    auto h = [&](double t) { return d.cross(domain.boundary_point(t) - P); };
    double lo = state.phi + 1e-9, hi = state.phi + 2 * kPi - 1e-9;
    double h_lo = h(lo), h_hi = h(hi);
    if (!(h_lo < 0) || !(h_hi > 0))
        throw numeric_error("chord crossing not bracketed", std::min(-h_lo, h_hi));
    for (int i = 0; i < 58; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {  // Newton polish on the analytic derivative
        Vec2 Q, dQ, ddQ;
        domain.boundary_jet(t, Q, dQ, ddQ);
        const double val = d.cross(Q - P);
        const double der = d.cross(dQ);
        if (der == 0) break;
        const double t_next = t - val / der;
        if (t_next > lo - 1e-6 && t_next < hi + 1e-6) t = t_next;
    }

    Vec2 Q, dQ, ddQ;
    domain.boundary_jet(t, Q, dQ, ddQ);
    const double sp2 = dQ.norm();
    const Vec2 T2{dQ.x / sp2, dQ.y / sp2};
    const Vec2 N2{-T2.y, T2.x};
    const double dn = d.dot(N2);
    const Vec2 dout{d.x - 2 * dn * N2.x, d.y - 2 * dn * N2.y};
    const double theta_out = std::atan2(T2.cross(dout), T2.dot(dout));
    return BoundaryState(wrap_angle(t), theta_out);
}

// ---------------------------------------------------------------------------
// Maximal (p,q)-gons by coordinate ascent on the perimeter functional.

namespace detail {

struct VertexDerivs {
    double grad;  // d/d phi_k of l(k-1,k) + l(k,k+1)
    double hess;
};

inline VertexDerivs pqgon_vertex_derivs(const PerturbedDomain& domain, double phi_prev,
                                        double phi_k, double phi_next) {
    Vec2 P, dP, ddP, Pm, d1, d2, Pp;
    domain.boundary_jet(phi_k, P, dP, ddP);
    domain.boundary_jet(phi_prev, Pm, d1, d2);
    domain.boundary_jet(phi_next, Pp, d1, d2);
    const Vec2 in = P - Pm, out = Pp - P;
    const double li = in.norm(), lo = out.norm();
    const Vec2 u{in.x / li, in.y / li}, v{out.x / lo, out.y / lo};
    const double grad = dP.dot(u) - dP.dot(v);
    const double pu = dP.dot(u), pv = dP.dot(v), pp = dP.dot(dP);
    const double hess = ddP.dot(u - v) + (pp - pu * pu) / li + (pp - pv * pv) / lo;
    return {grad, hess};
}

}  // namespace detail

struct PqGonResult {
    std::vector<double> phis;  // strictly increasing, phis[0] = start (if fixed)
    double residual;           // max |cos(theta_in) - cos(theta_out)| over free vertices
    double perimeter;
};

inline PqGonResult max_pq_gon(const PerturbedDomain& domain, std::int64_t p, std::int64_t q,
                              double start_phi, bool fix_start = true) {
    if (q < 3 || p < 1 || std::gcd(p, q) != 1 || !(2 * p < q))
        throw domain_error("need coprime p, q with 0 < p/q < 1/2");
    const Ellipse& frame = domain.frame();

    // initialize from the exact-ellipse caustic orbit of the frame
    std::vector<double> phi(static_cast<std::size_t>(q));
    const double omega = static_cast<double>(p) / static_cast<double>(q);
    if (frame.circular()) {
        for (std::int64_t k = 0; k < q; ++k)
            phi[static_cast<std::size_t>(k)] = start_phi + 2 * kPi * omega * static_cast<double>(k);
    } else {
        const double lam = lambda_from_rotation(frame, RotationNumber::fraction(p, q));
        const ActionAngle aa(frame, lam);
        const double theta0 = aa.theta_of_phi(start_phi);
        for (std::int64_t k = 0; k < q; ++k)
            phi[static_cast<std::size_t>(k)] =
                aa.phi(theta0 + 2 * kPi * omega * static_cast<double>(k));
    }

    const double span = 2 * kPi * static_cast<double>(p);
    auto neighbor = [&](std::size_t k, int step) {
        const std::int64_t j = static_cast<std::int64_t>(k) + step;
        if (j < 0) return phi[static_cast<std::size_t>(j + q)] - span;
        if (j >= q) return phi[static_cast<std::size_t>(j - q)] + span;
        return phi[static_cast<std::size_t>(j)];
    };

    const std::size_t first_free = fix_start ? 1 : 0;
    double residual = 0;
    for (int sweep = 0; sweep < 400; ++sweep) {
        residual = 0;
        for (std::size_t k = first_free; k < phi.size(); ++k) {
            const double left = neighbor(k, -1), right = neighbor(k, +1);
            if (!(right - left > 2e-8))
                throw search_error("degenerate polygon vertex collapse; try another start");
            const detail::VertexDerivs d =
                detail::pqgon_vertex_derivs(domain, left, phi[k], right);
            double step;
            if (d.hess < 0) {
                step = -d.grad / d.hess;
            } else {
                step = (d.grad > 0 ? 1.0 : -1.0) * 0.1 * std::min(phi[k] - left, right - phi[k]);
            }
            const double cap = 0.45;
            step = std::max(-cap * (phi[k] - left), std::min(cap * (right - phi[k]), step));
            phi[k] += step;
        }
        for (std::size_t k = first_free; k < phi.size(); ++k) {
            Vec2 P, dP, ddP;
            domain.boundary_jet(phi[k], P, dP, ddP);
            const detail::VertexDerivs d =
                detail::pqgon_vertex_derivs(domain, neighbor(k, -1), phi[k], neighbor(k, +1));
            residual = std::max(residual, std::fabs(d.grad) / dP.norm());
        }
        if (residual < 1e-12) break;
    }

    double perim = 0;
    for (std::size_t k = 0; k < phi.size(); ++k)
        perim += (domain.boundary_point(neighbor(k, +1)) - domain.boundary_point(phi[k])).norm();
    return {std::move(phi), residual, perim};
}

// ---------------------------------------------------------------------------
// Rational-caustic obstruction: the summed offset along the action-angle
// orbit must be constant in theta for an integrable p/q caustic; we return
// its oscillation and profile.

struct IntegrabilityResidual {
    double oscillation;
    std::vector<double> profile;
};

inline IntegrabilityResidual integrability_residual(const PerturbedDomain& domain, std::int64_t p,
                                                    std::int64_t q, int grid = 256) {
    if (q < 3 || p < 1 || std::gcd(p, q) != 1 || !(2 * p < q))
        throw domain_error("need coprime p, q with 0 < p/q < 1/2");
    if (grid < 2) throw domain_error("grid must have at least 2 points");
    const Ellipse& frame = domain.frame();
    const double omega = static_cast<double>(p) / static_cast<double>(q);
    std::vector<double> profile(static_cast<std::size_t>(grid));
    if (frame.circular()) {
        // lambda(omega) = b sin(pi omega), phi = theta
        const double lam = frame.b() * std::sin(kPi * omega);
        for (int i = 0; i < grid; ++i) {
            const double theta = 2 * kPi * i / grid;
            double s = 0;
            for (std::int64_t k = 1; k <= q; ++k)
                s += domain.mu().eval(theta + 2 * kPi * omega * static_cast<double>(k));
            profile[static_cast<std::size_t>(i)] = lam * s;
        }
    } else {
        const double lam = lambda_from_rotation(frame, RotationNumber::fraction(p, q));
        const ActionAngle aa(frame, lam);
        for (int i = 0; i < grid; ++i) {
            const double theta = 2 * kPi * i / grid;
            double s = 0;
            for (std::int64_t k = 1; k <= q; ++k)
                s += domain.mu().eval(aa.phi(theta + 2 * kPi * omega * static_cast<double>(k)));
            profile[static_cast<std::size_t>(i)] = lam * s;
        }
    }
    double mn = profile[0], mx = profile[0];
    for (double v : profile) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return {mx - mn, std::move(profile)};
}

}  // namespace caustic
