#include "covclone/relativity.hpp"

#include <cmath>
#include <stdexcept>

namespace covclone {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_two_pi(double angle) {
    double a = std::fmod(angle, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

double FourVector::spatial_norm() const { return std::sqrt(x * x + y * y + z * z); }

bool FourVector::is_lightlike_future(double rel_tol) const {
    return t > 0 && std::abs(minkowski_dot(*this)) <= rel_tol * t * t;
}

FourVector operator*(double s, const FourVector& p) { return {s * p.t, s * p.x, s * p.y, s * p.z}; }

LorentzTransform::LorentzTransform() {
    for (int i = 0; i < 4; ++i) (*this)(i, i) = 1.0;
}

LorentzTransform LorentzTransform::operator*(const LorentzTransform& o) const {
    LorentzTransform r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

FourVector LorentzTransform::operator*(const FourVector& p) const {
    const double in[4] = {p.t, p.x, p.y, p.z};
    double out[4];
    for (int i = 0; i < 4; ++i) {
        out[i] = 0;
        for (int k = 0; k < 4; ++k) out[i] += (*this)(i, k) * in[k];
    }
    return {out[0], out[1], out[2], out[3]};
}

LorentzTransform LorentzTransform::inverse() const {
    // eta L^T eta with eta = diag(+,-,-,-)
    LorentzTransform r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double sign = ((i == 0) == (j == 0)) ? 1.0 : -1.0;
            r(i, j) = sign * (*this)(j, i);
        }
    return r;
}

double LorentzTransform::determinant() const {
    const auto& a = *this;
    double det = 0;
    for (int c = 0; c < 4; ++c) {
        // 3x3 minor of row 0, column c
        int cols[3], n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != c) cols[n++] = j;
        const double m =
            a(1, cols[0]) * (a(2, cols[1]) * a(3, cols[2]) - a(2, cols[2]) * a(3, cols[1])) -
            a(1, cols[1]) * (a(2, cols[0]) * a(3, cols[2]) - a(2, cols[2]) * a(3, cols[0])) +
            a(1, cols[2]) * (a(2, cols[0]) * a(3, cols[1]) - a(2, cols[1]) * a(3, cols[0]));
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a(0, c) * m;
    }
    return det;
}

double LorentzTransform::metric_residual() const {
    const double eta[4] = {1, -1, -1, -1};
    double worst = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += (*this)(k, i) * eta[k] * (*this)(k, j);
            const double target = (i == j) ? eta[i] : 0.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

bool LorentzTransform::is_proper_orthochronous(double metric_tol, double det_tol) const {
    return metric_residual() <= metric_tol && std::abs(determinant() - 1.0) <= det_tol &&
           (*this)(0, 0) >= 1.0 - 1e-9;
}

LorentzTransform rotation_x(double angle) {
    LorentzTransform r;
    const double c = std::cos(angle), s = std::sin(angle);
    r(2, 2) = c; r(2, 3) = -s;
    r(3, 2) = s; r(3, 3) = c;
    return r;
}

LorentzTransform rotation_y(double angle) {
    LorentzTransform r;
    const double c = std::cos(angle), s = std::sin(angle);
    r(1, 1) = c; r(1, 3) = s;
    r(3, 1) = -s; r(3, 3) = c;
    return r;
}

LorentzTransform rotation_z(double angle) {
    LorentzTransform r;
    const double c = std::cos(angle), s = std::sin(angle);
    r(1, 1) = c; r(1, 2) = -s;
    r(2, 1) = s; r(2, 2) = c;
    return r;
}

LorentzTransform direction_rotation(double theta, double phi) {
    return rotation_z(phi) * rotation_y(theta) * rotation_z(-phi);
}

LorentzTransform boost_z(double chi) {
    if (!std::isfinite(chi)) throw std::invalid_argument("boost_z: non-finite rapidity");
    LorentzTransform b;
    const double ch = std::cosh(chi), sh = std::sinh(chi);
    b(0, 0) = ch; b(0, 3) = sh;
    b(3, 0) = sh; b(3, 3) = ch;
    return b;
}

LorentzTransform boost_velocity(double vx, double vy, double vz) {
    const double v = std::sqrt(vx * vx + vy * vy + vz * vz);
    if (v >= 1.0) throw std::invalid_argument("boost_velocity: speed must be < 1");
    if (v == 0.0) return {};
    const double chi = std::atanh(v);
    const double theta = std::atan2(std::hypot(vx, vy), vz);
    const double phi = (std::hypot(vx, vy) > 0) ? std::atan2(vy, vx) : 0.0;
    const LorentzTransform r = direction_rotation(theta, phi);
    return r * boost_z(chi) * r.inverse();
}

LorentzTransform standard_transform(const FourVector& p, double omega0) {
    if (omega0 <= 0) throw std::invalid_argument("standard_transform: omega0 must be positive");
    if (!(p.t > 0)) throw std::invalid_argument("standard_transform: momentum not future-pointing");
    if (!p.is_lightlike_future())
        throw std::invalid_argument("standard_transform: momentum not light-like");
    const double rho = std::hypot(p.x, p.y);
    const double theta = std::atan2(rho, p.z);
    const double phi = (rho > 0) ? std::atan2(p.y, p.x) : 0.0;  // azimuth immaterial on the axis
    return direction_rotation(theta, phi) * boost_z(std::log(p.t / omega0));
}

LorentzTransform little_group_element(const LorentzTransform& lambda, const FourVector& p,
                                      double omega0) {
    const FourVector q = lambda * p;
    return standard_transform(q, omega0).inverse() * lambda * standard_transform(p, omega0);
}

WignerAngle::WignerAngle(double raw_radians) {
    if (!std::isfinite(raw_radians)) throw std::invalid_argument("WignerAngle: non-finite angle");
    theta = wrap_two_pi(raw_radians);
}

WignerAngle wigner_phase(const LorentzTransform& lambda, const FourVector& p, double omega0) {
    const LorentzTransform w = little_group_element(lambda, p, omega0);
    // W = S(alpha,beta) R(rot) in ISO(2); the x-row of W is (.., cos rot, -sin rot, ..)
    // independent of the translation part. Sign fixed so that a rotation by
    // gamma about the packet axis yields -gamma, matching the helicity phase
    // e^{i sigma theta_W} picked up under U(Lambda).
    return WignerAngle(std::atan2(w(1, 2), w(1, 1)));
}

double WavePacket::norm_sum() const {
    double s = 0;
    for (const auto& smp : samples) s += smp.weight * (std::norm(smp.f_plus) + std::norm(smp.f_minus));
    return s;
}

void WavePacket::validate(double tol) const {
    if (samples.empty()) throw std::invalid_argument("WavePacket: no samples");
    const double d = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                               direction[2] * direction[2]);
    if (std::abs(d - 1.0) > 1e-10) throw std::invalid_argument("WavePacket: direction not unit");
    for (const auto& s : samples) {
        if (!(s.omega > 0)) throw std::invalid_argument("WavePacket: non-positive frequency");
        if (!(s.weight > 0)) throw std::invalid_argument("WavePacket: non-positive weight");
    }
    if (std::abs(norm_sum() - 1.0) > tol)
        throw std::invalid_argument("WavePacket: amplitudes not normalized");
}

FourVector WavePacket::sample_momentum(std::size_t i) const {
    const auto& s = samples.at(i);
    return {s.omega, s.omega * direction[0], s.omega * direction[1], s.omega * direction[2]};
}

WavePacket transform_wavepacket(const LorentzTransform& lambda, const WavePacket& wp,
                                double omega0) {
    wp.validate();
    const WignerAngle phase = wigner_phase(lambda, wp.sample_momentum(0), omega0);
    const complexd ei = std::polar(1.0, phase.theta);

    const FourVector q = lambda * FourVector{1.0, wp.direction[0], wp.direction[1], wp.direction[2]};
    const double qs = q.spatial_norm();
    WavePacket out;
    out.direction = {q.x / qs, q.y / qs, q.z / qs};
    out.samples.reserve(wp.samples.size());
    for (std::size_t i = 0; i < wp.samples.size(); ++i) {
        const FourVector tp = lambda * wp.sample_momentum(i);
        if (!(tp.t > 0)) throw std::logic_error("transform_wavepacket: non-positive frequency");
        PacketSample s = wp.samples[i];
        s.omega = tp.t;
        s.f_plus *= ei;
        s.f_minus *= std::conj(ei);
        out.samples.push_back(s);
    }
    out.validate();
    return out;
}

PolarizationState::PolarizationState(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != 2 || rho_.cols() != 2)
        throw std::invalid_argument("PolarizationState: matrix must be 2x2");
    if (!rho_.is_hermitian()) throw std::invalid_argument("PolarizationState: not Hermitian");
    if (std::abs(rho_.trace() - complexd{1.0}) > 1e-12)
        throw std::invalid_argument("PolarizationState: trace must be 1");
    if (!is_psd(rho_, 1e-10)) throw std::invalid_argument("PolarizationState: not positive");
    const double cs = std::norm(rho_(0, 1)) - rho_(0, 0).real() * rho_(1, 1).real();
    if (cs > 1e-12) throw std::invalid_argument("PolarizationState: coherence exceeds populations");
}

double PolarizationState::purity() const { return (rho_ * rho_).trace().real(); }

PolarizationState polarization_density(const WavePacket& wp) {
    wp.validate();
    ComplexMatrix rho(2, 2);
    for (const auto& s : wp.samples) {
        rho(0, 0) += s.weight * std::norm(s.f_plus);
        rho(1, 1) += s.weight * std::norm(s.f_minus);
        rho(0, 1) += s.weight * s.f_plus * std::conj(s.f_minus);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return PolarizationState(rho);
}

PolarizationState apply_wigner_phase(const PolarizationState& rho, const WignerAngle& theta) {
    ComplexMatrix out = rho.rho();
    const complexd ph = std::polar(1.0, 2.0 * theta.theta);
    out(0, 1) *= ph;
    out(1, 0) = std::conj(out(0, 1));
    return PolarizationState(out);
}

}  // namespace covclone
