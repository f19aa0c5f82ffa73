#ifndef COVCLONE_BB84_HPP
#define COVCLONE_BB84_HPP

#include <string>
#include <vector>

#include "covclone/optimizer.hpp"

namespace covclone {

enum class QuadrupleKind { meridian_pi4, mub };

std::string quadruple_name(QuadrupleKind k);

/// The four protocol states with equal weights. meridian_pi4 holds the
/// xi = pi/4 meridian quadruple; mub holds the poles plus the |+->-type pair.
Ensemble quadruple_states(QuadrupleKind k);

/// Equivalent singleton representation of the meridian quadruple (all four
/// states lie on one covariance orbit).
Ensemble meridian_singleton();

/// Best cloning fidelity an eavesdropper can guarantee on every state of the
/// quadruple under the variant's covariant family. For a single covariance
/// orbit this equals the ensemble-average optimum; for the mub quadruple the
/// two orbits (poles, equator) are equalized via the dual weight search.
double eavesdropper_fidelity(QuadrupleKind k, Variant v);

struct Bb84Row {
    std::string quadruple;
    int variant = 0;
    double fidelity = 0;
    double tolerance = 0;
};

struct Bb84Report {
    std::vector<Bb84Row> rows;
    bool ordering_check = false;  // F2(meridian) < F(mub, v1) < F1(meridian), strict
};

Bb84Report bb84_report();

std::string bb84_report_to_json(const Bb84Report& report);
Bb84Report bb84_report_from_json(const std::string& text);

}  // namespace covclone

#endif
