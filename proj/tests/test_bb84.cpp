#include <cmath>

#include "doctest.h"

#include "covclone/bb84.hpp"

using namespace covclone;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("quadruple state geometry") {
    const Ensemble mer = quadruple_states(QuadrupleKind::meridian_pi4);
    REQUIRE(mer.members.size() == 4);
    mer.validate();

    // pairwise overlap pattern of the xi = pi/4 meridian quadruple:
    // |<i|j>|^2 takes values {cos^4(pi/8)+..} - enumerate directly
    auto overlap2 = [](const PureQubit& a, const PureQubit& b) {
        const auto ka = a.ket(), kb = b.ket();
        return std::norm(std::conj(ka[0]) * kb[0] + std::conj(ka[1]) * kb[1]);
    };
    // state list: (pi/4, 0), (pi/4, pi), (3pi/4, 0), (3pi/4, pi)
    // cos(pi/8)|0> +- sin(pi/8)|1> and cos(pi/8)|1> +- sin(pi/8)|0>
    const double half = 0.5;
    CHECK(overlap2(mer.members[0].first, mer.members[1].first) ==
          doctest::Approx(half).epsilon(1e-12));  // same basis pair: cos^2(pi/4) = 1/2
    CHECK(overlap2(mer.members[2].first, mer.members[3].first) ==
          doctest::Approx(half).epsilon(1e-12));
    CHECK(overlap2(mer.members[0].first, mer.members[3].first) <= 1e-12);  // orthogonal partners
    CHECK(overlap2(mer.members[1].first, mer.members[2].first) <= 1e-12);
    CHECK(overlap2(mer.members[0].first, mer.members[2].first) ==
          doctest::Approx(half).epsilon(1e-12));

    const Ensemble mub = quadruple_states(QuadrupleKind::mub);
    REQUIRE(mub.members.size() == 4);
    mub.validate();
    double sum = 0;
    for (const auto& [q, w] : mub.members) {
        (void)q;
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("meridian singleton and quadruple share the objective form") {
    const Ensemble quad = quadruple_states(QuadrupleKind::meridian_pi4);
    const Ensemble single = meridian_singleton();
    for (int vi = 1; vi <= 2; ++vi)
        for (int clone = 1; clone <= 2; ++clone) {
            const auto gq = objective_coefficients(quad, variant_from_int(vi), clone);
            const auto gs = objective_coefficients(single, variant_from_int(vi), clone);
            for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(gq[k] - gs[k]) <= 1e-12);
        }
}

TEST_CASE("eavesdropper fidelities reproduce the reference values") {
    CHECK(std::abs(eavesdropper_fidelity(QuadrupleKind::meridian_pi4, Variant::v1) -
                   (5.0 + std::sqrt(3.0)) / 8.0) <= 1e-6);
    CHECK(std::abs(eavesdropper_fidelity(QuadrupleKind::meridian_pi4, Variant::v2) - 0.75) <= 1e-6);
    CHECK(std::abs(eavesdropper_fidelity(QuadrupleKind::mub, Variant::v1) - 5.0 / 6.0) <= 1e-6);
    // the variant-2 guaranteed fidelity over the mub quadruple drops to the
    // curve minimum
    CHECK(std::abs(eavesdropper_fidelity(QuadrupleKind::mub, Variant::v2) - 2.0 / 3.0) <= 1e-6);
}

TEST_CASE("singleton and quadruple meridian representations give equal optima") {
    for (int vi = 1; vi <= 2; ++vi) {
        const double via_quad = eavesdropper_fidelity(QuadrupleKind::meridian_pi4,
                                                      variant_from_int(vi));
        const double via_single =
            optimize_fidelity(meridian_singleton(), variant_from_int(vi)).optimum;
        CHECK(std::abs(via_quad - via_single) <= 1e-9);
    }
}

TEST_CASE("report values, bounds and ordering") {
    const Bb84Report rep = bb84_report();
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        CHECK(row.fidelity >= 0.5 - 1e-9);
        CHECK(row.fidelity <= 1.0 + 1e-9);
        CHECK(row.tolerance == 1e-6);
        CHECK((row.variant == 1 || row.variant == 2));
    }
    CHECK(rep.ordering_check);

    double f1_mer = 0, f2_mer = 0, f_mub = 0;
    for (const auto& row : rep.rows) {
        if (row.quadruple == "meridian_pi4" && row.variant == 1) f1_mer = row.fidelity;
        if (row.quadruple == "meridian_pi4" && row.variant == 2) f2_mer = row.fidelity;
        if (row.quadruple == "mub" && row.variant == 1) f_mub = row.fidelity;
    }
    CHECK(f2_mer + 1e-6 < f_mub);
    CHECK(f_mub + 1e-6 < f1_mer);
}

TEST_CASE("report is deterministic and round-trips through JSON byte-identically") {
    const Bb84Report a = bb84_report();
    const Bb84Report b = bb84_report();
    const std::string ja = bb84_report_to_json(a);
    const std::string jb = bb84_report_to_json(b);
    CHECK(ja == jb);

    const Bb84Report parsed = bb84_report_from_json(ja);
    CHECK(bb84_report_to_json(parsed) == ja);
}
