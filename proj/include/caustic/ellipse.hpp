#pragma once

// Ellipses, elliptic-polar coordinates, confocal caustics, perturbed domains
// written as a radial offset mu(phi) in the elliptic chart, and the small
// rigid/linear motions of an ellipse expressed in that chart.
//
// The boundary offset chart used everywhere is
//   x = (a cosh m + b sinh m) cos phi,  y = (a sinh m + b cosh m) sin phi,
// where m is the elliptic radial coordinate measured from the boundary
// (m = mu - mu0). It equals the classical c cosh/sinh chart for e > 0 and
// degenerates smoothly to polar form r = a exp(m) at e = 0.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "caustic/errors.hpp"
#include "caustic/fourier.hpp"

namespace caustic {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

struct Mat2 {
    // row-major: [m00 m01; m10 m11]
    double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    Vec2 apply(const Vec2& v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
    double det() const { return m00 * m11 - m01 * m10; }
    Mat2 inverse() const {
        const double d = det();
        if (std::fabs(d) < 1e-300) throw geometry_error("singular 2x2 matrix");
        return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }
    Mat2 mul(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
};

class Ellipse {
  public:
    Ellipse(double a, double b) : a_(a), b_(b) {
        if (!(b > 0) || !(a >= b) || !std::isfinite(a))
            throw domain_error("ellipse needs semi-axes a >= b > 0");
    }
    double a() const { return a_; }
    double b() const { return b_; }
    double e() const { return std::sqrt(std::max(0.0, 1.0 - (b_ * b_) / (a_ * a_))); }
    double c() const { return std::sqrt(std::max(0.0, a_ * a_ - b_ * b_)); }
    bool circular() const { return a_ == b_; }
    // elliptic radial coordinate of the boundary, finite only for e > 0
    double mu0() const {
        if (circular()) throw domain_error("mu0 undefined for a circle (e = 0)");
        return std::acosh(a_ / c());
    }

  private:
    double a_, b_;
};

struct EllipticPoint {
    double mu;
    double phi;
    EllipticPoint(double mu_, double phi_) : mu(mu_), phi(phi_) {
        if (!(mu >= 0) || !std::isfinite(mu) || !std::isfinite(phi))
            throw domain_error("elliptic point needs finite mu >= 0");
    }
};

inline double wrap_angle(double phi) {
    double w = std::fmod(phi, 2 * kPi);
    if (w < 0) w += 2 * kPi;
    return w;
}

// Offset chart: radial coordinate m measured from the boundary (m = mu - mu0).
inline Vec2 offset_chart(const Ellipse& E, double m, double phi) {
    const double A = E.a() * std::cosh(m) + E.b() * std::sinh(m);
    const double B = E.a() * std::sinh(m) + E.b() * std::cosh(m);
    return {A * std::cos(phi), B * std::sin(phi)};
}

struct OffsetCoords {
    double m;
    double phi;
};

// Inverse of the offset chart. Monotone Newton/bisection on
// f(m) = x^2/A(m)^2 + y^2/B(m)^2 - 1, which is strictly decreasing.
// A finite m_hint switches to a warm-started Newton iteration with a cold
// fallback; useful when inverting along a slowly varying curve.
inline OffsetCoords offset_coords(const Ellipse& E, const Vec2& p,
                                  double m_hint = std::numeric_limits<double>::quiet_NaN()) {
    const double a = E.a(), b = E.b();
    if (p.y == 0.0) {
        const double ax = std::fabs(p.x);
        const double disc = ax * ax - (a * a - b * b);
        if (!(disc > 0))
            throw geometry_error("point on the focal segment: elliptic angle is ambiguous");
        const double t = (ax + std::sqrt(disc)) / (a + b);  // exp(m)
        const double m = std::log(t);
        return {m, p.x > 0 ? 0.0 : kPi};
    }
    const double m_min =
        (b < a) ? -std::atanh(b / a) : -std::numeric_limits<double>::infinity();
    auto f = [&](double m) {
        const double A = a * std::cosh(m) + b * std::sinh(m);
        const double B = a * std::sinh(m) + b * std::cosh(m);
        return (p.x * p.x) / (A * A) + (p.y * p.y) / (B * B) - 1.0;
    };
    auto finish = [&](double m) -> OffsetCoords {
        const double A = a * std::cosh(m) + b * std::sinh(m);
        const double B = a * std::sinh(m) + b * std::cosh(m);
        return {m, wrap_angle(std::atan2(p.y / B, p.x / A))};
    };
    if (std::isfinite(m_hint) && m_hint > m_min) {
        double m = m_hint;
        for (int i = 0; i < 30; ++i) {
            const double A = a * std::cosh(m) + b * std::sinh(m);
            const double B = a * std::sinh(m) + b * std::cosh(m);
            if (!(B > 0)) break;
            const double val = (p.x * p.x) / (A * A) + (p.y * p.y) / (B * B) - 1.0;
            const double der =
                -2 * (p.x * p.x) * B / (A * A * A) - 2 * (p.y * p.y) * A / (B * B * B);
            const double step = val / der;
            const double m_next = m - step;
            if (!(m_next > m_min) || !std::isfinite(m_next)) break;
            m = m_next;
            if (std::fabs(step) < 1e-13 * (1 + std::fabs(m))) return finish(m);
        }
        // fall through to the cold bracketed path
    }
    double hi = 0.5;
    while (f(hi) > 0) {
        hi *= 2;
        if (hi > 1e8) throw geometry_error("offset-chart inversion failed to bracket above");
    }
    double lo = std::isfinite(m_min) ? m_min + 0.75 * (std::min(hi, 0.0) - m_min) : -0.5;
    for (int i = 0; f(lo) < 0; ++i) {
        lo = std::isfinite(m_min) ? m_min + 0.5 * (lo - m_min) : lo * 2;
        if (i > 200) throw geometry_error("offset-chart inversion failed to bracket below");
    }
    for (int i = 0; i < 90; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    double m = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {  // Newton polish
        const double A = a * std::cosh(m) + b * std::sinh(m);
        const double B = a * std::sinh(m) + b * std::cosh(m);
        const double val = (p.x * p.x) / (A * A) + (p.y * p.y) / (B * B) - 1.0;
        const double der = -2 * (p.x * p.x) * B / (A * A * A) - 2 * (p.y * p.y) * A / (B * B * B);
        if (der == 0) break;
        m -= val / der;
    }
    return finish(m);
}

// Absolute elliptic-polar chart. For e = 0 the chart is the usual polar one
// and mu plays the role of the radius.
inline Vec2 to_cartesian(const EllipticPoint& p, const Ellipse& frame) {
    if (frame.circular()) return {p.mu * std::cos(p.phi), p.mu * std::sin(p.phi)};
    const double c = frame.c();
    return {c * std::cosh(p.mu) * std::cos(p.phi), c * std::sinh(p.mu) * std::sin(p.phi)};
}

inline EllipticPoint from_cartesian(const Vec2& p, const Ellipse& frame) {
    if (frame.circular())
        throw domain_error("chart degenerates at e = 0: use polar coordinates");
    const OffsetCoords oc = offset_coords(frame, p);
    // points within roundoff of the focal segment may give mu = -epsilon
    return EllipticPoint(std::max(0.0, frame.mu0() + oc.m), oc.phi);
}

inline Ellipse confocal_caustic(const Ellipse& frame, double lambda) {
    if (!(lambda > 0) || !(lambda < frame.b()))
        throw domain_error("caustic parameter must lie strictly between 0 and b");
    const double a2 = frame.a() * frame.a() - lambda * lambda;
    const double b2 = frame.b() * frame.b() - lambda * lambda;
    return Ellipse(std::sqrt(a2), std::sqrt(b2));
}

// squared elliptic modulus of the caustic C_lambda
inline double caustic_modulus_sq(const Ellipse& frame, double lambda) {
    if (!(lambda >= 0) || !(lambda < frame.b())) throw domain_error("lambda outside [0, b)");
    const double a2 = frame.a() * frame.a();
    const double b2 = frame.b() * frame.b();
    return (a2 - b2) / (a2 - lambda * lambda);
}

// ---------------------------------------------------------------------------
// Elliptic motions: exp-scaling homothety, translation, hyperbolic rotation.

enum class MotionKind { homothety, translation, hyperbolic_rotation };

struct EllipticMotion {
    MotionKind kind;
    double p1 = 0, p2 = 0;

    static EllipticMotion homothety(double lambda) {
        return {MotionKind::homothety, lambda, 0.0};
    }
    static EllipticMotion translation(double a1, double a2) {
        return {MotionKind::translation, a1, a2};
    }
    static EllipticMotion hyperbolic(double b1, double b2) {
        return {MotionKind::hyperbolic_rotation, b1, b2};
    }

    // dimensionless size relative to the frame scale
    double size(const Ellipse& frame) const {
        switch (kind) {
            case MotionKind::homothety: return std::fabs(p1);
            case MotionKind::translation: return std::hypot(p1, p2) / frame.a();
            case MotionKind::hyperbolic_rotation: return std::hypot(p1, p2);
        }
        return 0;
    }
};

struct AffineMap {
    Mat2 L;
    Vec2 t;
};

inline AffineMap motion_map(const EllipticMotion& mo) {
    switch (mo.kind) {
        case MotionKind::homothety: {
            const double s = std::exp(mo.p1);
            return {{s, 0, 0, s}, {0, 0}};
        }
        case MotionKind::translation:
            return {{1, 0, 0, 1}, {mo.p1, mo.p2}};
        case MotionKind::hyperbolic_rotation: {
            const double n = std::hypot(mo.p1, mo.p2);
            const double ch = std::cosh(n);
            const double sh = (n == 0) ? 1.0 : std::sinh(n) / n;
            return {{ch + sh * mo.p1, sh * mo.p2, sh * mo.p2, ch - sh * mo.p1}, {0, 0}};
        }
    }
    throw domain_error("unknown motion kind");
}

// ---------------------------------------------------------------------------
// Perturbed domains: boundary point at angle phi sits at offset mu(phi).

class PerturbedDomain {
  public:
    PerturbedDomain(Ellipse frame, FourierSeries mu) : frame_(frame), mu_(std::move(mu)) {
        validate();
    }
    const Ellipse& frame() const { return frame_; }
    const FourierSeries& mu() const { return mu_; }

    Vec2 boundary_point(double phi) const { return offset_chart(frame_, mu_.eval(phi), phi); }

    // position and derivatives with respect to phi
    void boundary_jet(double phi, Vec2& P, Vec2& dP, Vec2& ddP) const {
        const double m = mu_.eval(phi);
        const double m1 = mu_.deriv(phi);
        const double m2 = mu_.deriv2(phi);
        const double A = frame_.a() * std::cosh(m) + frame_.b() * std::sinh(m);
        const double B = frame_.a() * std::sinh(m) + frame_.b() * std::cosh(m);
        const double cp = std::cos(phi), sp = std::sin(phi);
        P = {A * cp, B * sp};
        dP = {B * m1 * cp - A * sp, A * m1 * sp + B * cp};
        ddP = {(A * m1 * m1 + B * m2 - A) * cp - 2 * B * m1 * sp,
               (B * m1 * m1 + A * m2 - B) * sp + 2 * A * m1 * cp};
    }

    // radius of curvature; positive for the counterclockwise convex boundary
    double curvature_radius(double phi) const {
        Vec2 P, dP, ddP;
        boundary_jet(phi, P, dP, ddP);
        const double speed = dP.norm();
        const double num = speed * speed * speed;
        const double den = dP.cross(ddP);
        if (!(den > 0)) throw geometry_error("boundary is not strictly convex at sampled angle");
        return num / den;
    }

    bool is_ellipse_itself() const { return mu_.mean() == 0 && mu_.max_abs_coeff_above(1) == 0; }

  private:
    void validate() const {
        const int samples = 1024;
        double prev_angle = 0;
        bool first = true;
        double total_turn = 0;
        for (int i = 0; i < samples; ++i) {
            const double phi = 2 * kPi * i / samples;
            const double m = mu_.eval(phi);
            if (!std::isfinite(m)) throw geometry_error("offset function not finite");
            if (!frame_.circular() && frame_.mu0() + m <= 0)
                throw geometry_error("boundary leaves the elliptic chart (mu0 + mu <= 0)");
            const Vec2 p = boundary_point(phi);
            const double ang = std::atan2(p.y, p.x);
            if (!first) {
                double d = ang - prev_angle;
                while (d <= -kPi) d += 2 * kPi;
                while (d > kPi) d -= 2 * kPi;
                if (d <= 0)
                    throw geometry_error("boundary polar angle not strictly increasing");
                total_turn += d;
            }
            prev_angle = ang;
            first = false;
        }
        if (std::fabs(total_turn - 2 * kPi * (samples - 1) / samples) > 0.5)
            throw geometry_error("boundary does not wind once around the origin");
    }

    Ellipse frame_;
    FourierSeries mu_;
};

inline PerturbedDomain unperturbed(const Ellipse& frame, int K_max = 128) {
    return PerturbedDomain(frame, FourierSeries::zero(K_max));
}

// ---------------------------------------------------------------------------
// Exact chart representation of a moved ellipse and of a general domain.

namespace detail {

// Strictly decreasing crossing function along the coordinate line phi = const:
// g(m) = Q(offset_chart(m, phi)) - 1 where Q is the implicit form of the
// image ellipse map.L(E) + map.t.
inline double image_ellipse_crossing(const Ellipse& E, const AffineMap& map, const Mat2& Linv,
                                     double m, double phi) {
    const Vec2 p = offset_chart(E, m, phi);
    const Vec2 u = Linv.apply(p - map.t);
    const double xa = u.x / E.a();
    const double yb = u.y / E.b();
    return xa * xa + yb * yb - 1.0;
}

}  // namespace detail

// Offset function of the affinely moved ellipse map.L(E) + map.t, written as
// an offset graph in the frame of the original one: solves the chart crossing
// per angle and projects on K_max Fourier modes. The crossing g(m) increases
// through zero: small m is inside the image, large m outside.
inline FourierSeries moved_ellipse_offset(const Ellipse& frame, const AffineMap& map,
                                          double guess_scale, int K_max = 128) {
    const Mat2 Linv = map.L.inverse();
    const double m_floor = (frame.b() < frame.a())
                               ? -std::atanh(frame.b() / frame.a())
                               : -std::numeric_limits<double>::infinity();
    auto solve_m = [&](double phi) {
        double lo = -guess_scale, hi = guess_scale;
        if (std::isfinite(m_floor)) lo = std::max(lo, m_floor + 1e-12);
        int grow = 0;
        while (detail::image_ellipse_crossing(frame, map, Linv, lo, phi) > 0) {
            lo = std::isfinite(m_floor) ? 0.5 * (lo + m_floor) : lo * 2;
            if (++grow > 60) throw geometry_error("motion too large: no chart bracket");
        }
        grow = 0;
        while (detail::image_ellipse_crossing(frame, map, Linv, hi, phi) < 0) {
            hi *= 2;
            if (++grow > 60) throw geometry_error("motion too large: no chart bracket");
        }
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (detail::image_ellipse_crossing(frame, map, Linv, mid, phi) < 0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return fourier_from_function(solve_m, K_max);
}

inline FourierSeries moved_ellipse_offset(const Ellipse& frame, const EllipticMotion& mo,
                                          int K_max = 128) {
    return moved_ellipse_offset(frame, motion_map(mo),
                                std::max(mo.size(frame) * 4 + 1e-9, 1e-6), K_max);
}

// composition: first apply inner, then outer
inline AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    return {outer.L.mul(inner.L), outer.L.apply(inner.t) + outer.t};
}

// First-order offset of a motion; closed forms in the motion parameters.
inline FourierSeries elliptic_motion_mu_leading(const Ellipse& frame, const EllipticMotion& mo,
                                                int K_max = 128) {
    FourierSeries s = FourierSeries::zero(K_max);
    switch (mo.kind) {
        case MotionKind::homothety:
            s.set_mean(mo.p1);
            break;
        case MotionKind::translation:
            s.set_cos(1, mo.p1 / frame.a());
            s.set_sin(1, mo.p2 / frame.a());
            break;
        case MotionKind::hyperbolic_rotation:
            s.set_cos(2, mo.p1);
            s.set_sin(2, mo.p2);
            break;
    }
    return s;
}

enum class MotionOrder { leading, exact };

inline FourierSeries elliptic_motion_mu(const Ellipse& frame, const EllipticMotion& mo,
                                        MotionOrder order, int K_max = 128,
                                        double validity_bound = 1e-2) {
    if (mo.size(frame) > validity_bound)
        throw domain_error("motion parameters exceed the first-order validity bound");
    return order == MotionOrder::leading ? elliptic_motion_mu_leading(frame, mo, K_max)
                                         : moved_ellipse_offset(frame, mo, K_max);
}

// ---------------------------------------------------------------------------
// Reframing: express a closed convex curve as an offset graph over an ellipse.

namespace detail {

// point_fn: curve parameter t -> point in the new frame's own coordinates.
// Requires the curve to wind once around the new frame's center with the
// new-frame elliptic angle increasing in t near the graph.
template <typename PointFn>
FourierSeries reframe_curve(PointFn&& point_fn, const Ellipse& new_frame, int K_max) {
    const std::size_t n = next_pow2(static_cast<std::size_t>(std::max(8 * K_max, 16)));
    std::vector<double> m_samples(n);
    double m_warm = 0.0;
    auto coords_of = [&](double t) {
        const OffsetCoords oc = offset_coords(new_frame, point_fn(t), m_warm);
        m_warm = oc.m;
        return oc;
    };

    double t_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = 2 * kPi * static_cast<double>(i) / static_cast<double>(n);
        // solve: new-frame angle of point_fn(t) == target (monotone in t)
        auto defect = [&](double t) {
            double d = coords_of(t).phi - target;
            while (d <= -kPi) d += 2 * kPi;
            while (d > kPi) d -= 2 * kPi;
            return d;
        };
        double lo = (i == 0) ? target - 0.7 : t_prev - 1e-12;
        double hi = lo + 0.2;
        int grow = 0;
        while (defect(lo) > 0) {
            lo -= 0.2;
            if (++grow > 40) throw geometry_error("reframing bracket failure (below)");
        }
        grow = 0;
        while (defect(hi) < 0) {
            hi += 0.2;
            if (++grow > 40) throw geometry_error("reframing bracket failure (above)");
        }
        for (int it = 0; it < 54; ++it) {
            const double mid = 0.5 * (lo + hi);
            (defect(mid) < 0 ? lo : hi) = mid;
        }
        const double t = 0.5 * (lo + hi);
        t_prev = t;
        m_samples[i] = coords_of(t).m;
    }
    return FourierSeries::from_spectrum(analyze_real(m_samples, K_max));
}

}  // namespace detail

inline FourierSeries reframe_perturbation(const PerturbedDomain& domain, const Ellipse& new_frame,
                                          int K_max = 128) {
    return detail::reframe_curve([&](double t) { return domain.boundary_point(t); }, new_frame,
                                 K_max);
}

}  // namespace caustic
