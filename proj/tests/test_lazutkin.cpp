#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "caustic/lazutkin.hpp"

using namespace caustic;

TEST_CASE("circle: the parametrization is arclength rescaled") {
    const double R = 1.7;
    const LazutkinMap lz(unperturbed(Ellipse(R, R), 4));
    CHECK(std::fabs(lz.total_length() - 2 * kPi * R) < 1e-12);
    CHECK(std::fabs(lz.C_Omega() - 1.0 / (std::pow(R, -2.0 / 3.0) * R)) < 1e-13);
    for (double phi : {0.3, 1.9, 5.5}) {
        CHECK(std::fabs(lz.x_of_phi(phi) - phi) < 1e-12);
        CHECK(std::fabs(lz.x_of_s(phi * R) - phi) < 1e-12);
    }
}

TEST_CASE("normalization, monotonicity, and inversion") {
    const Ellipse E(1.0, 0.8);
    FourierSeries mu = FourierSeries::zero(8);
    mu.set_cos(3, 1e-3);
    const PerturbedDomain dom(E, mu);
    const LazutkinMap lz(dom);

    CHECK(std::fabs(lz.x_of_phi(2 * kPi) - 2 * kPi) < 1e-12);
    CHECK(std::fabs(lz.x_of_phi(0.0)) < 1e-14);

    double prev = -1;
    for (int i = 0; i <= 64; ++i) {
        const double x = lz.x_of_phi(2 * kPi * i / 64);
        CHECK(x > prev);
        prev = x;
    }
    for (double phi : {0.1, 2.3, 4.0, 6.1}) {
        CHECK(std::fabs(lz.phi_of_x(lz.x_of_phi(phi)) - phi) < 1e-12);
        const double s = lz.s_of_phi(phi);
        CHECK(std::fabs(lz.phi_of_s(s) - phi) < 1e-12);
    }

    // grid refinement changes nothing beyond roundoff
    const LazutkinMap fine(dom, 256);
    for (double phi : {0.7, 3.1, 5.2})
        CHECK(std::fabs(fine.x_of_phi(phi) - lz.x_of_phi(phi)) < 1e-11);
}

TEST_CASE("deviation of the boundary change from the identity is order e^2") {
    auto dev = [](double e) {
        const Ellipse E(1.0, std::sqrt(1 - e * e));
        const LazutkinMap lz(unperturbed(E, 8));
        double worst = 0;
        for (int i = 0; i < 64; ++i) {
            const double x = 2 * kPi * i / 64;
            worst = std::max(worst, std::fabs(lz.phi_of_x(x) - x));
        }
        return worst;
    };
    const double r = dev(0.2) / dev(0.1);
    CHECK(r == Catch::Approx(4.0).margin(0.8));
}

TEST_CASE("q-adapted straightening is near the identity with rate q^{-2}") {
    // exact identity for the circle
    const XqMap id(Ellipse(1, 1), 8);
    CHECK(id.x(0.77) == 0.77);
    CHECK(id.x_prime(0.77) == 1.0);

    const Ellipse E(1.0, std::sqrt(1 - 0.01));  // e = 0.1
    std::vector<double> qs{8, 16, 32, 64}, devs;
    for (double qd : qs) {
        const XqMap xq(E, static_cast<std::int64_t>(qd));
        CHECK(std::fabs(xq.x(0.0)) < 1e-13);
        double worst = 0;
        for (int i = 0; i < 48; ++i) {
            const double th = 2 * kPi * i / 48;
            worst = std::max(worst, std::fabs(xq.x(th) - th));
            worst = std::max(worst, std::fabs(xq.x_prime(th) - 1.0));
        }
        devs.push_back(worst);
    }
    // log-log slope of the C1 deviation in q
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double lx = std::log(qs[i]), ly = std::log(devs[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(qs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Catch::Approx(-2.0).margin(0.1));

    // inverse map round trip
    const XqMap xq(E, 16);
    for (double x : {0.3, 2.0, 5.9}) CHECK(std::fabs(xq.x(xq.theta(x)) - x) < 1e-12);
}
