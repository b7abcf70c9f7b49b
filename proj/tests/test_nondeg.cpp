#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "caustic/conditions.hpp"
#include "caustic/interval.hpp"
#include "caustic/nondeg.hpp"
#include "caustic/real.hpp"

using namespace caustic;

namespace {

bool same_entry(const SymbolicEntry& x, const SymbolicEntry& y) {
    return x.kind == y.kind && x.xi_value == y.xi_value && x.j == y.j && x.w == y.w;
}

bool same_matrix(const NondegMatrix& A, const NondegMatrix& B) {
    if (A.size() != B.size()) return false;
    if (!(A.row_labels == B.row_labels)) return false;
    if (!(A.skipped_labels == B.skipped_labels)) return false;
    for (std::size_t r = 0; r < A.rows.size(); ++r)
        for (std::size_t c = 0; c < A.rows[r].size(); ++c)
            if (!same_entry(A.rows[r][c], B.rows[r][c])) return false;
    return true;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Frozen 50-digit cross-evaluations of the six fixed systems.
struct Golden {
    ConcreteSystem id;
    int order;
    double coeff;
};

const Golden kGoldens[] = {
    {ConcreteSystem::q3_odd, 4, -4.81621695614e-4},
    {ConcreteSystem::q4_odd, 6, -4.02159268016e-6},
    {ConcreteSystem::q4_even, 10, 8.57579000053e-8},
    {ConcreteSystem::q5_odd4, 6, -1.44847389352e-5},
    {ConcreteSystem::q5_odd6, 16, 6.86498187562e-15},
    {ConcreteSystem::q5_even7, 12, 1.95718012862e-9},
};

Ellipse frame_with_e(double e) { return Ellipse(1.0, std::sqrt(1.0 - e * e)); }

}  // namespace

TEST_CASE("interval arithmetic encloses exact values and certifies signs") {
    const Interval third = Interval::of_rational(Rat(1, 3));
    CHECK(third.contains(xreal(1) / 3));
    CHECK(third.width() < xreal("1e-44"));
    CHECK(third.certified_sign() == 1);

    // cos(pi/3) = 1/2 lands strictly inside its enclosure.
    const Interval half = Interval::cos_pi(Rat(1, 3));
    CHECK(half.contains(xreal("0.5")));
    CHECK(half.width() < xreal("1e-43"));

    CHECK(Interval::cos_pi(Rat(1, 2)).contains_zero());
    CHECK(Interval::cos_pi(Rat(1, 2)).certified_sign() == 0);

    const Interval a = Interval::bounds(xreal(2), xreal(3));
    CHECK((a * a).contains(xreal(4)));
    CHECK((a * a).contains(xreal(9)));
    CHECK((-a).certified_sign() == -1);
    CHECK((a - a).contains_zero());
    CHECK(a.pow_int(3).contains(xreal(8)));
    CHECK((Interval::point(xreal(6)) / Interval::point(xreal(3))).contains(xreal(2)));

    CHECK_THROWS_AS(Interval::bounds(xreal(1), xreal(0)), domain_error);
    CHECK_THROWS_AS(a / (a - a), numeric_error);
    CHECK_THROWS_AS(Interval::cos_pi(Rat(3, 2)), domain_error);
}

TEST_CASE("fixed low-order systems reproduce the printed entries") {
    const NondegMatrix M = build_concrete_system(ConcreteSystem::q3_odd);
    REQUIRE(M.size() == 3);
    CHECK(M.row_labels == std::vector<RotationLabel>{{1, 5}, {1, 7}, {2, 7}});
    CHECK(M.unit_column(0) == 1);
    CHECK(M.unit_column(1) == 2);
    CHECK(M.unit_column(2) == 2);

    CHECK(M.rows[0][0].kind == EntryKind::scaled);
    CHECK(M.rows[0][0].xi_value == Rat(3, 16));
    CHECK(M.rows[0][0].j == 1);
    CHECK(M.rows[0][0].w == Rat(1, 5));
    CHECK(M.rows[0][2].kind == EntryKind::zero);

    CHECK(M.rows[1][0].xi_value == Rat(12, 512));
    CHECK(M.rows[1][0].j == 2);
    CHECK(M.rows[1][1].xi_value == Rat(5, 16));
    CHECK(M.rows[1][1].w == Rat(1, 7));

    CHECK(M.rows[2][0].xi_value == Rat(12, 512));
    CHECK(M.rows[2][1].xi_value == Rat(5, 16));
    CHECK(M.rows[2][1].w == Rat(2, 7));

    const NondegMatrix E7 = build_concrete_system(ConcreteSystem::q5_even7);
    REQUIRE(E7.size() == 7);
    CHECK(E7.row_labels == std::vector<RotationLabel>{
                               {1, 6}, {1, 8}, {1, 10}, {1, 12}, {1, 14}, {1, 16}, {3, 16}});
    // Deepest corner entries: xi_{6,6}(4) on both denominator-16 rows.
    CHECK(E7.rows[5][0].j == 6);
    CHECK(E7.rows[5][0].xi_value == Rat(21, 4194304));
    CHECK(E7.rows[6][0].xi_value == Rat(21, 4194304));
    CHECK(E7.rows[6][0].w == Rat(3, 16));

    const NondegMatrix E4 = build_concrete_system(ConcreteSystem::q4_even);
    REQUIRE(E4.size() == 6);
    CHECK(E4.row_labels == std::vector<RotationLabel>{{1, 6}, {1, 8}, {1, 10}, {1, 12}, {1, 14}, {3, 14}});
    CHECK(E4.rows[5][5].kind == EntryKind::one);
    CHECK(E4.rows[5][4].kind == EntryKind::scaled);
    CHECK(E4.rows[5][4].xi_value == Rat(12, 16));
    CHECK(E4.rows[5][3].w == Rat(3, 14));

    CHECK(build_concrete_system(ConcreteSystem::q5_odd6).row_labels ==
          std::vector<RotationLabel>{{1, 7}, {1, 9}, {1, 11}, {2, 11}, {1, 13}, {2, 13}});
    CHECK(build_concrete_system(ConcreteSystem::q5_odd4).row_labels ==
          std::vector<RotationLabel>{{1, 7}, {1, 9}, {1, 11}, {2, 11}});

    CHECK(concrete_system_from_name("q5_odd4") == ConcreteSystem::q5_odd4);
    CHECK_THROWS_AS(concrete_system_from_name("q9_odd"), domain_error);
}

TEST_CASE("general builders at q0 = 4 reproduce the fixed systems entry for entry") {
    CHECK(same_matrix(build_odd_matrix(4, 2), build_concrete_system(ConcreteSystem::q4_odd)));
    CHECK(same_matrix(build_even_matrix(4, 2), build_concrete_system(ConcreteSystem::q4_even)));
}

TEST_CASE("odd builder follows the row plan") {
    const NondegMatrix M = build_odd_matrix(6, 3);
    REQUIRE(M.size() == 5);
    CHECK(M.row_labels == std::vector<RotationLabel>{{1, 7}, {1, 9}, {1, 11}, {1, 13}, {2, 13}});
    CHECK(M.name == "odd-q6-m3");
    CHECK(M.skipped_labels.empty());

    // First superdiagonal below the unit is always the linear-weight entry.
    for (int r = 0; r < M.size(); ++r) {
        const int u = M.unit_column(r);
        const int base = M.row_labels[static_cast<std::size_t>(r)].q;
        REQUIRE(u >= 1);
        CHECK(M.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(u - 1)].xi_value ==
              Rat(base - 2, 16));
    }

    CHECK(build_odd_matrix(6, 2).size() == 7);
}

TEST_CASE("even builder balances equations and records reducible rows") {
    const NondegMatrix M3 = build_even_matrix(6, 3);
    CHECK(M3.size() == 8);
    CHECK(M3.row_labels == std::vector<RotationLabel>{
                               {1, 8}, {1, 10}, {1, 12}, {1, 14}, {1, 16}, {1, 18}, {1, 20}, {3, 20}});
    CHECK(M3.skipped_labels.empty());

    CHECK(build_even_matrix(6, 2).size() == 10);

    const NondegMatrix M1 = build_even_matrix(6, 1);
    CHECK(M1.size() == 13);
    CHECK(M1.skipped_labels == std::vector<RotationLabel>{{3, 24}});

    const NondegMatrix M8 = build_even_matrix(8, 2);
    CHECK(M8.size() == 15);
    CHECK(M8.skipped_labels == std::vector<RotationLabel>{{3, 30}});
}

TEST_CASE("builders reject out-of-range parameters") {
    CHECK_THROWS_AS(build_odd_matrix(5, 2), domain_error);
    CHECK_THROWS_AS(build_odd_matrix(4, 1), domain_error);
    CHECK_THROWS_AS(build_odd_matrix(4, 3), domain_error);
    CHECK_THROWS_AS(build_odd_matrix(2, 2), domain_error);
    CHECK_THROWS_AS(build_even_matrix(6, 0), domain_error);
    CHECK_THROWS_AS(build_even_matrix(7, 1), domain_error);
    // Needs xi polynomials past the supported table depth.
    CHECK_THROWS_AS(build_even_matrix(10, 2), domain_error);
}

TEST_CASE("determinant leading coefficients match the frozen cross-evaluations") {
    for (const Golden& g : kGoldens) {
        const NondegMatrix M = build_concrete_system(g.id);
        const DetLeading d = det_leading(M);
        INFO(M.name);
        CHECK(d.order == g.order);
        CHECK(rel_err(to_double(d.value), g.coeff) < 1e-9);
        CHECK(d.certified);
        CHECK(d.enclosure.certified_sign() == (g.coeff > 0 ? 1 : -1));
        CHECK(d.enclosure.width() < abs(d.value) * xreal("1e-20"));
    }
}

TEST_CASE("determinant respects the grading and antisymmetry") {
    NondegMatrix M = build_concrete_system(ConcreteSystem::q3_odd);
    const DetLeading d = det_leading(M);

    std::swap(M.rows[0], M.rows[1]);
    std::swap(M.row_labels[0], M.row_labels[1]);
    const DetLeading ds = det_leading(M);
    CHECK(ds.order == d.order);
    CHECK(to_double(ds.value) == Catch::Approx(-to_double(d.value)).epsilon(1e-30));

    // Paired rows differ only through their cos factors, so the e = 0 limit
    // has two identical 0/1 rows and the determinant vanishes there; the
    // positive order says exactly that.
    const NondegMatrix P = build_concrete_system(ConcreteSystem::q4_odd);
    const auto A0 = evaluate_matrix(P, xreal(0));
    CHECK(A0[2] == A0[3]);
    CHECK(det_leading(P).order > 0);
}

TEST_CASE("determinant separates nearby deep-entry values") {
    // The 7x7 system's corner holds xi_{6,6}(4) = 21/4194304; replacing it by
    // the variant whose cubic term has weight 11 instead of 15 shifts the
    // leading coefficient by three orders of magnitude and flips its sign.
    NondegMatrix M = build_concrete_system(ConcreteSystem::q5_even7);
    const Rat variant = Rat(4, 100663296) + Rat(137 * 16, 6039797760LL) +
                        Rat(11 * 64 + 1024, 805306368) + Rat(17 * 256, 2415919104LL) +
                        Rat(4096, 12079595520LL);
    M.rows[5][0].xi_value = variant;
    M.rows[6][0].xi_value = variant;
    const DetLeading d = det_leading(M);
    CHECK(d.order == 12);
    CHECK(rel_err(to_double(d.value), -2.508351103e-6) < 1e-8);
    CHECK(d.certified);
}

TEST_CASE("the mode-2 system is annihilated by the family direction") {
    // With m = 1 the unknowns start at the mode-2 coefficient, and the
    // one-parameter family of ellipses itself deforms along a_{2(c+1)} with
    // leading weights (-1/4)^c e^{2c}. That direction lies in the kernel of
    // the leading coefficient matrix, so the determinant coefficient is
    // exactly zero and certification honestly fails; m >= 2 drops the mode-2
    // column and the degeneracy with it.
    for (int q0 : {4, 6}) {
        const NondegMatrix M = build_even_matrix(q0, 1);
        const int n = M.size();
        const auto C = evaluate_matrix(M, xreal(1));
        xreal worst(0);
        for (int r = 0; r < n; ++r) {
            xreal acc(0), weight(1);
            for (int c = 0; c < n; ++c) {
                acc += C[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * weight;
                weight /= -4;
            }
            worst = std::max(worst, abs(acc));
        }
        INFO("q0 = " << q0);
        CHECK(worst < xreal("1e-40"));

        const DetLeading d = det_leading(M);
        CHECK_FALSE(d.certified);
        CHECK(d.enclosure.contains_zero());
        CHECK(abs(d.value) < xreal("1e-45"));
    }
}

TEST_CASE("corrupted grading is rejected") {
    NondegMatrix M = build_concrete_system(ConcreteSystem::q3_odd);
    M.rows[1][0].j = 1;
    CHECK_THROWS_AS(det_leading(M), structural_error);

    NondegMatrix Z = build_concrete_system(ConcreteSystem::q3_odd);
    Z.rows[0][1].kind = EntryKind::zero;
    CHECK_THROWS_AS(det_leading(Z), structural_error);

    NondegMatrix W = build_concrete_system(ConcreteSystem::q3_odd);
    W.rows[0][0].w = Rat(3, 5);
    CHECK_THROWS_AS(det_leading(W), structural_error);
}

TEST_CASE("inverse rows follow the grading orders") {
    using Grid = std::vector<std::vector<int>>;
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q3_odd), {0}) ==
          Grid{{-2, -4, -4}});
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q4_odd), {0}) ==
          Grid{{-2, -4, -6, -6}});
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q4_even), {0}) ==
          Grid{{-2, -4, -6, -8, -10, -10}});
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q5_odd4), {0}) ==
          Grid{{-2, -4, -6, -6}});
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q5_odd6), {0, 1}) ==
          Grid{{-4, -6, -8, -8, -10, -10}, {-2, -4, -6, -6, -8, -8}});
    CHECK(inverse_row_orders(build_concrete_system(ConcreteSystem::q5_even7), {0}) ==
          Grid{{-2, -4, -6, -8, -10, -12, -12}});
    CHECK(inverse_row_orders(build_odd_matrix(6, 3), {0}) == Grid{{-2, -4, -6, -8, -8}});

    CHECK_THROWS_AS(inverse_row_orders(build_concrete_system(ConcreteSystem::q3_odd), {3}),
                    domain_error);
}

TEST_CASE("family certification counts systems and certifies them") {
    const CertificationReport r3 = verify_all(3);
    CHECK(r3.core_expected == 1);
    CHECK(r3.core_count == 1);
    CHECK(r3.total_count == 1);
    CHECK(r3.all_pass);
    CHECK(r3.matrices[0].name == "q3_odd");

    const CertificationReport r4 = verify_all(4);
    CHECK(r4.core_count == 2);
    CHECK(r4.all_pass);

    const CertificationReport r4x = verify_all(4, true);
    CHECK(r4x.core_count == 2);
    CHECK(r4x.total_count == 3);
    CHECK(r4x.all_pass);
    CHECK(r4x.matrices.back().name == "even-q4-m1");
    CHECK_FALSE(r4x.matrices.back().core);
    CHECK_FALSE(r4x.matrices.back().pass);
    CHECK(r4x.matrices.back().note == "enclosure straddles zero");

    const CertificationReport r5 = verify_all(5);
    CHECK(r5.core_count == 3);
    CHECK(r5.all_pass);
    CHECK(r5.matrices[0].name == "q5_odd6");
    CHECK(r5.matrices[1].name == "q5_odd4");
    CHECK(r5.matrices[2].name == "q5_even7");

    const CertificationReport r6 = verify_all(6);
    REQUIRE(r6.total_count == 4);
    CHECK(r6.core_expected == 4);
    CHECK(r6.core_count == 4);
    CHECK(r6.all_pass);
    CHECK(r6.matrices[0].name == "odd-q6-m2");
    CHECK(r6.matrices[1].name == "odd-q6-m3");
    CHECK(r6.matrices[2].name == "even-q6-m2");
    CHECK(r6.matrices[3].name == "even-q6-m3");
    CHECK(r6.matrices[0].size == 7);
    CHECK(r6.matrices[1].size == 5);
    CHECK(r6.matrices[2].size == 10);
    CHECK(r6.matrices[3].size == 8);
    CHECK(r6.matrices[0].det_order == 20);
    CHECK(r6.matrices[1].det_order == 8);
    CHECK(r6.matrices[2].det_order == 32);
    CHECK(r6.matrices[3].det_order == 14);
    CHECK(rel_err(r6.matrices[0].det_value, 2.73307139599297154e-18) < 1e-12);
    CHECK(rel_err(r6.matrices[1].det_value, -2.97677445657560411e-07) < 1e-12);
    CHECK(rel_err(r6.matrices[2].det_value, 6.73716194781276879e-25) < 1e-12);
    CHECK(rel_err(r6.matrices[3].det_value, 1.34467197908558570e-10) < 1e-12);

    CHECK_THROWS_AS(verify_all(7), domain_error);
    CHECK_THROWS_AS(verify_all(2), domain_error);
}

TEST_CASE("family certification extends to the next even family") {
    const CertificationReport r8 = verify_all(8);
    REQUIRE(r8.total_count == 6);
    CHECK(r8.core_expected == 6);
    CHECK(r8.core_count == 6);
    CHECK(r8.all_pass);

    const struct {
        const char* name;
        int size;
        int order;
        double value;
    } expected[] = {
        {"odd-q8-m2", 10, 42, -2.16842583942572387e-37},
        {"odd-q8-m3", 8, 24, 1.74916141857001518e-20},
        {"odd-q8-m4", 6, 10, -1.64327069936213868e-08},
        {"even-q8-m2", 15, 68, 8.22343104132645590e-53},
        {"even-q8-m3", 12, 40, 4.29025803016203438e-30},
        {"even-q8-m4", 10, 18, 3.03367069637083981e-13},
    };
    for (std::size_t i = 0; i < 6; ++i) {
        INFO(expected[i].name);
        CHECK(r8.matrices[i].name == expected[i].name);
        CHECK(r8.matrices[i].size == expected[i].size);
        CHECK(r8.matrices[i].det_order == expected[i].order);
        CHECK(rel_err(r8.matrices[i].det_value, expected[i].value) < 1e-12);
        CHECK(r8.matrices[i].pass);
    }
}

TEST_CASE("caustic condition rows weigh neighboring modes") {
    const Ellipse frame = frame_with_e(0.2);

    const ConditionRow r5 = fourier_condition_row(1, 5, 1, frame);
    REQUIRE(r5.exact.size() == 3);
    CHECK(r5.exact[1] == 1.0);
    CHECK(r5.leading[1] == 1.0);
    // Weight on a_3 is xi_{1,1}(3) = 3/16 times the modulus factor.
    CHECK(r5.exact[2] == Catch::Approx((3.0 / 16) * r5.kappa_sq).epsilon(1e-13));
    CHECK(r5.exact[0] == Catch::Approx(-(7.0 / 16) * r5.kappa_sq).epsilon(1e-13));
    const double e2 = frame.e() * frame.e();
    const double lead5 = (3.0 / 16) * e2 / std::pow(std::cos(kPi / 5), 2);
    CHECK(r5.leading[2] == Catch::Approx(lead5).epsilon(1e-13));
    CHECK(r5.remainder_scale == Catch::Approx(r5.kappa_sq * r5.kappa_sq).epsilon(1e-13));

    // The two weight conventions agree to relative O(e^2).
    const double drift2 = r5.exact[2] / r5.leading[2] - 1;
    CHECK(std::abs(drift2) < 3 * e2);
    const Ellipse small = frame_with_e(0.1);
    const ConditionRow r5s = fourier_condition_row(1, 5, 1, small);
    const double drift1 = r5s.exact[2] / r5s.leading[2] - 1;
    CHECK(std::abs(drift1) < std::abs(drift2));
    CHECK(std::abs(drift1) < 3 * 0.01);

    const ConditionRow r7 = fourier_condition_row(1, 7, 2, frame);
    REQUIRE(r7.exact.size() == 5);
    const double X = e2 / std::pow(std::cos(kPi / 7), 2);
    CHECK(std::abs(r7.leading[3] - (5.0 / 16) * X) < 0.2 * X * X);
    CHECK(r7.leading[4] == Catch::Approx((12.0 / 512) * X * X).epsilon(1e-13));
    CHECK(r7.exact[2] ==
          Catch::Approx(1.0 - (2.0 * 49 / 512) * r7.kappa_sq * r7.kappa_sq).epsilon(1e-13));
    CHECK(r7.weight_on(7) == r7.exact[2]);
    CHECK(r7.weight_on(5) == r7.exact[3]);
    CHECK(r7.weight_on(9) == r7.exact[1]);
    CHECK(r7.weight_on(6) == 0.0);
    CHECK(r7.weight_on(1) == 0.0);

    const ConditionRow unit = fourier_condition_row(3, 7, 0, frame);
    CHECK(unit.exact == std::vector<double>{1.0});
    CHECK(unit.remainder_scale == Catch::Approx(unit.kappa_sq).epsilon(1e-13));

    const ConditionRow circ = fourier_condition_row(1, 5, 1, Ellipse(1.0, 1.0));
    CHECK(circ.kappa_sq == 0.0);
    CHECK(circ.exact == std::vector<double>({0.0, 1.0, 0.0}));

    CHECK_THROWS_AS(fourier_condition_row(2, 4, 1, frame), domain_error);
    CHECK_THROWS_AS(fourier_condition_row(1, 5, 3, frame), domain_error);
    CHECK_THROWS_AS(fourier_condition_row(0, 5, 1, frame), domain_error);
    CHECK_THROWS_AS(fourier_condition_row(1, 5, -1, frame), domain_error);
}
