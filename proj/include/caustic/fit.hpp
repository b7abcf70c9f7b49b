#pragma once

// Best approximating ellipse of a perturbed domain over the 5-parameter
// family (center, semi-axes, orientation), with the search constrained to a
// Hausdorff ball around the domain's own frame.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "caustic/ellipse.hpp"

namespace caustic {

struct PlacedEllipse {
    Ellipse shape;
    Vec2 center{0, 0};
    double angle = 0;  // rotation of the major axis, in [0, pi)

    // map a point into the ellipse's own axis-aligned coordinates
    Vec2 to_local(const Vec2& p) const {
        const double cp = std::cos(angle), sp = std::sin(angle);
        const Vec2 d = p - center;
        return {cp * d.x + sp * d.y, -sp * d.x + cp * d.y};
    }
    // support function h(u) = sup over the ellipse of <q, u>, |u| = 1
    double support(const Vec2& u) const {
        const double cp = std::cos(angle), sp = std::sin(angle);
        const double u1 = cp * u.x + sp * u.y;
        const double u2 = -sp * u.x + cp * u.y;
        const double A = shape.a(), B = shape.b();
        return center.dot(u) + std::sqrt(A * A * u1 * u1 + B * B * u2 * u2);
    }
};

// C0 distance between two ellipses via their support functions on a grid;
// exact for convex bodies up to grid resolution.
inline double hausdorff_distance(const PlacedEllipse& e1, const PlacedEllipse& e2,
                                 int grid = 256) {
    double best = 0;
    for (int i = 0; i < grid; ++i) {
        const double t = 2 * kPi * i / grid;
        const Vec2 u{std::cos(t), std::sin(t)};
        best = std::max(best, std::fabs(e1.support(u) - e2.support(u)));
    }
    return best;
}

// Offset graph of the domain boundary over a placed candidate ellipse.
inline FourierSeries residual_over(const PerturbedDomain& domain, const PlacedEllipse& cand,
                                   int K_max) {
    return detail::reframe_curve([&](double t) { return cand.to_local(domain.boundary_point(t)); },
                                 cand.shape, K_max);
}

struct BestFit {
    PlacedEllipse ellipse;
    FourierSeries residual;     // domain boundary as offset over the fit
    double residual_norm = 0;   // sqrt of the weighted norm that was minimized
    bool boundary_hit = false;  // optimizer stopped at the Hausdorff ball edge
};

namespace detail {

// x = (cx, cy, log a, log b, angle); axes are swapped into canonical a >= b.
inline PlacedEllipse decode_candidate(const std::array<double, 5>& x) {
    double A = std::exp(x[2]), B = std::exp(x[3]);
    double ang = x[4];
    if (A < B) {
        std::swap(A, B);
        ang += kPi / 2;
    }
    ang = std::fmod(ang, kPi);
    if (ang < 0) ang += kPi;
    if (A == B) ang = 0;  // orientation of a circle is immaterial: pick 0
    return {Ellipse(A, B), {x[0], x[1]}, ang};
}

template <typename F>
double nelder_mead(F&& f, std::array<double, 5>& x, const std::array<double, 5>& step,
                   int max_iter) {
    constexpr int n = 5;
    std::array<std::array<double, 5>, 6> pts;
    std::array<double, 6> val;
    pts[0] = x;
    val[0] = f(x);
    for (int i = 0; i < n; ++i) {
        pts[i + 1] = x;
        pts[i + 1][i] += step[i];
        val[i + 1] = f(pts[i + 1]);
    }
    auto order = [&] {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n - i; ++j)
                if (val[j + 1] < val[j]) {
                    std::swap(val[j], val[j + 1]);
                    std::swap(pts[j], pts[j + 1]);
                }
    };
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (val[n] - val[0] < 1e-18 * (1 + std::fabs(val[0]))) break;
        std::array<double, 5> centroid{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
        auto blend = [&](double t) {
            std::array<double, 5> p;
            for (int j = 0; j < n; ++j) p[j] = centroid[j] + t * (pts[n][j] - centroid[j]);
            return p;
        };
        const auto refl = blend(-1.0);
        const double f_refl = f(refl);
        if (f_refl < val[0]) {
            const auto expa = blend(-2.0);
            const double f_expa = f(expa);
            if (f_expa < f_refl) {
                pts[n] = expa;
                val[n] = f_expa;
            } else {
                pts[n] = refl;
                val[n] = f_refl;
            }
        } else if (f_refl < val[n - 1]) {
            pts[n] = refl;
            val[n] = f_refl;
        } else {
            const auto ctr = blend(f_refl < val[n] ? -0.5 : 0.5);
            const double f_ctr = f(ctr);
            if (f_ctr < std::min(f_refl, val[n])) {
                pts[n] = ctr;
                val[n] = f_ctr;
            } else {
                for (int i = 1; i <= n; ++i) {  // shrink
                    for (int j = 0; j < n; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    x = pts[0];
    return val[0];
}

}  // namespace detail

// Minimizes the weighted Fourier norm of the domain's offset over candidate
// ellipses whose Hausdorff distance to the domain frame is at most 2*radius.
// A cheap implicit-equation misfit with the same zero set drives the simplex
// search; the reframed-residual norm itself is polished coordinate-wise.
inline BestFit best_fit_ellipse(const PerturbedDomain& domain, int norm_order = 0,
                                double radius = 0.125, int K_max = 128) {
    const Ellipse frame = domain.frame();
    const PlacedEllipse home{frame, {0, 0}, 0};
    const double ball = 2 * radius;

    const int M = 256;
    std::vector<Vec2> pts(M);
    for (int j = 0; j < M; ++j) pts[j] = domain.boundary_point(2 * kPi * j / M);

    auto ball_excess = [&](const PlacedEllipse& cand) {
        return std::max(0.0, hausdorff_distance(cand, home) - ball);
    };
    auto cheap = [&](const std::array<double, 5>& x) {
        PlacedEllipse cand = detail::decode_candidate(x);
        double s = 0;
        for (const Vec2& p : pts) {
            const Vec2 q = cand.to_local(p);
            const double xa = q.x / cand.shape.a(), yb = q.y / cand.shape.b();
            const double r = xa * xa + yb * yb - 1.0;
            s += r * r;
        }
        const double ex = ball_excess(cand);
        return s / M + 1e4 * ex * ex;
    };
    const int K_obj = std::min(K_max, 32);
    auto true_obj = [&](const std::array<double, 5>& x) {
        PlacedEllipse cand = detail::decode_candidate(x);
        double v;
        try {
            v = residual_over(domain, cand, K_obj).weighted_norm_sq(norm_order);
        } catch (const geometry_error&) {
            return 1e100;
        }
        const double ex = ball_excess(cand);
        return v + 1e4 * ex * ex;
    };

    std::array<double, 5> x{0, 0, std::log(frame.a()), std::log(frame.b()), 0};
    const std::array<double, 5> x_home = x;
    const double f_home = true_obj(x_home);

    const double s0 = 0.03 * frame.a();
    std::array<double, 5> step{s0, s0, 0.03, 0.03, 0.05};
    detail::nelder_mead(cheap, x, step, 500);
    for (int r = 0; r < 3; ++r) {  // restarts with a shrinking simplex
        for (double& s : step) s *= 0.25;
        detail::nelder_mead(cheap, x, step, 300);
    }

    // coordinate Newton polish on the reframed-residual norm
    double f_cur = true_obj(x);
    const std::array<double, 5> h{1e-6 * frame.a(), 1e-6 * frame.a(), 1e-6, 1e-6, 1e-6};
    for (int round = 0; round < 4; ++round) {
        for (int i = 0; i < 5; ++i) {
            std::array<double, 5> xp = x, xm = x;
            xp[i] += h[i];
            xm[i] -= h[i];
            const double fp = true_obj(xp), fm = true_obj(xm);
            const double g = (fp - fm) / (2 * h[i]);
            const double H = (fp - 2 * f_cur + fm) / (h[i] * h[i]);
            if (!(H > 0)) continue;
            double delta = -g / H;
            const double cap = 100 * h[i];
            if (std::fabs(delta) > cap) delta = (delta > 0 ? cap : -cap);
            std::array<double, 5> xn = x;
            xn[i] += delta;
            const double fn = true_obj(xn);
            if (fn < f_cur) {
                x = xn;
                f_cur = fn;
            }
        }
    }

    if (f_home < f_cur) {  // never return worse than the domain's own frame
        x = x_home;
        f_cur = f_home;
    }

    BestFit out{detail::decode_candidate(x), FourierSeries::zero(K_max), 0.0, false};
    out.residual = residual_over(domain, out.ellipse, K_max);
    out.residual_norm = std::sqrt(out.residual.weighted_norm_sq(norm_order));
    out.boundary_hit = hausdorff_distance(out.ellipse, home) >= ball * (1 - 1e-9);
    return out;
}

}  // namespace caustic
