#include "covclone/bb84.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace covclone {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kReportTolerance = 1e-6;

// Members with the same min(xi, pi - xi) share one phase/bit-flip covariance
// orbit and hence one fidelity linear form.
std::vector<Ensemble> orbit_classes(const Ensemble& e) {
    std::map<long long, Ensemble> classes;
    for (const auto& [q, w] : e.members) {
        const double key = std::min(q.xi, kPi - q.xi);
        classes[std::llround(key * 1e9)].members.emplace_back(q, w);
    }
    std::vector<Ensemble> out;
    for (auto& [key, cls] : classes) {
        (void)key;
        double sum = 0;
        for (auto& [q, w] : cls.members) {
            (void)q;
            sum += w;
        }
        for (auto& [q, w] : cls.members) {
            (void)q;
            w /= sum;
        }
        out.push_back(std::move(cls));
    }
    return out;
}

Ensemble reweighted(const std::vector<Ensemble>& classes, double w_first) {
    Ensemble mix;
    const double weights[2] = {w_first, 1.0 - w_first};
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const auto& [q, w] : classes[c].members)
            mix.members.emplace_back(q, weights[c] * w);
    return mix;
}

}  // namespace

std::string quadruple_name(QuadrupleKind k) {
    return k == QuadrupleKind::meridian_pi4 ? "meridian_pi4" : "mub";
}

Ensemble quadruple_states(QuadrupleKind k) {
    Ensemble e;
    if (k == QuadrupleKind::meridian_pi4) {
        e.members.emplace_back(PureQubit(kPi / 4, 0.0), 0.25);
        e.members.emplace_back(PureQubit(kPi / 4, kPi), 0.25);
        e.members.emplace_back(PureQubit(3 * kPi / 4, 0.0), 0.25);
        e.members.emplace_back(PureQubit(3 * kPi / 4, kPi), 0.25);
    } else {
        e.members.emplace_back(PureQubit(0.0, 0.0), 0.25);
        e.members.emplace_back(PureQubit(kPi, 0.0), 0.25);
        e.members.emplace_back(PureQubit(kPi / 2, 0.0), 0.25);
        e.members.emplace_back(PureQubit(kPi / 2, kPi), 0.25);
    }
    return e;
}

Ensemble meridian_singleton() { return Ensemble::single(PureQubit(kPi / 4, 0.0)); }

double eavesdropper_fidelity(QuadrupleKind k, Variant v) {
    const std::vector<Ensemble> classes = orbit_classes(quadruple_states(k));
    if (classes.size() == 1) return optimize_fidelity(classes.front(), v).optimum;
    if (classes.size() != 2)
        throw std::runtime_error("eavesdropper_fidelity: unsupported orbit structure");

    // maximin over the two orbits = min over class weights of the averaged
    // optimum (the weighted value V(w) is convex in w)
    const auto value = [&](double w) { return optimize_fidelity(reweighted(classes, w), v).optimum; };
    const double w_star = golden_section_minimize(value, 1e-9, 1.0 - 1e-9, 1e-9);
    return value(w_star);
}

Bb84Report bb84_report() {
    Bb84Report rep;
    double table[2][2];
    for (QuadrupleKind k : {QuadrupleKind::meridian_pi4, QuadrupleKind::mub})
        for (Variant v : {Variant::v1, Variant::v2}) {
            const double f = eavesdropper_fidelity(k, v);
            table[k == QuadrupleKind::mub ? 1 : 0][v == Variant::v2 ? 1 : 0] = f;
            rep.rows.push_back({quadruple_name(k), v == Variant::v1 ? 1 : 2, f, kReportTolerance});
        }
    const double f1_meridian = table[0][0], f2_meridian = table[0][1], f_mub = table[1][0];
    rep.ordering_check = (f2_meridian + kReportTolerance < f_mub) &&
                         (f_mub + kReportTolerance < f1_meridian);
    return rep;
}

std::string bb84_report_to_json(const Bb84Report& report) {
    nlohmann::json j;
    j["results"] = nlohmann::json::array();
    for (const auto& row : report.rows)
        j["results"].push_back({{"quadruple", row.quadruple},
                                {"variant", row.variant},
                                {"fidelity", row.fidelity},
                                {"tolerance", row.tolerance}});
    j["ordering_check"] = report.ordering_check;
    return j.dump(2) + "\n";
}

Bb84Report bb84_report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Bb84Report rep;
    for (const auto& row : j.at("results"))
        rep.rows.push_back({row.at("quadruple").get<std::string>(), row.at("variant").get<int>(),
                            row.at("fidelity").get<double>(), row.at("tolerance").get<double>()});
    rep.ordering_check = j.at("ordering_check").get<bool>();
    return rep;
}

}  // namespace covclone
