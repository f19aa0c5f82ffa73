#ifndef COVCLONE_RELATIVITY_HPP
#define COVCLONE_RELATIVITY_HPP

#include <array>
#include <vector>

#include "covclone/matrix.hpp"

namespace covclone {

/// Metric signature (+,-,-,-); units with c = 1, components in units of frequency.
struct FourVector {
    double t = 0, x = 0, y = 0, z = 0;

    double minkowski_dot(const FourVector& o) const { return t * o.t - x * o.x - y * o.y - z * o.z; }
    double spatial_norm() const;
    /// |p.p| <= rel_tol * t^2 and t > 0
    bool is_lightlike_future(double rel_tol = 1e-9) const;
};

FourVector operator*(double s, const FourVector& p);

/// 4x4 real Lorentz matrix, rows/cols ordered (t, x, y, z).
class LorentzTransform {
public:
    LorentzTransform();  // identity

    double& operator()(int r, int c) { return m_[4 * r + c]; }
    const double& operator()(int r, int c) const { return m_[4 * r + c]; }

    LorentzTransform operator*(const LorentzTransform& o) const;
    FourVector operator*(const FourVector& p) const;

    /// eta * transpose * eta; exact inverse for Lorentz matrices.
    LorentzTransform inverse() const;

    double determinant() const;
    /// max entry of |L^T eta L - eta|
    double metric_residual() const;
    bool is_proper_orthochronous(double metric_tol = 1e-10, double det_tol = 1e-9) const;

private:
    std::array<double, 16> m_{};
};

LorentzTransform rotation_x(double angle);
LorentzTransform rotation_y(double angle);
LorentzTransform rotation_z(double angle);

/// R_z(phi) R_y(theta) R_z(-phi); maps the z axis to (sin t cos p, sin t sin p, cos t).
LorentzTransform direction_rotation(double theta, double phi);

LorentzTransform boost_z(double chi);

/// Boost with velocity vector (vx,vy,vz), |v| < 1.
LorentzTransform boost_velocity(double vx, double vy, double vz);

/// Standard transform L(p) with L(p) k = p for k = omega0 (1,0,0,1).
/// Throws if p is not light-like future-pointing.
LorentzTransform standard_transform(const FourVector& p, double omega0 = 1.0);

/// W(Lambda, p) = L(Lambda p)^-1 Lambda L(p); stabilizes k.
LorentzTransform little_group_element(const LorentzTransform& lambda, const FourVector& p,
                                      double omega0 = 1.0);

struct WignerAngle {
    explicit WignerAngle(double raw_radians);  // normalizes to [0, 2pi), rejects non-finite
    double theta;
};

/// Rotation angle of W(Lambda, p) in ISO(2). Convention pinned by
/// wigner_phase(rotation_z(gamma), k) = -gamma mod 2pi and the cocycle law.
WignerAngle wigner_phase(const LorentzTransform& lambda, const FourVector& p, double omega0 = 1.0);

struct PacketSample {
    double omega = 0;       // frequency, > 0
    double weight = 0;      // invariant-measure quadrature weight, > 0
    complexd f_plus;        // helicity +1 amplitude (logical |0>)
    complexd f_minus;       // helicity -1 amplitude (logical |1>)
};

/// Single-direction wave packet; sum w (|f+|^2 + |f-|^2) = 1.
struct WavePacket {
    std::array<double, 3> direction{{0, 0, 1}};
    std::vector<PacketSample> samples;

    double norm_sum() const;
    void validate(double tol = 1e-10) const;
    FourVector sample_momentum(std::size_t i) const;
};

/// Frequencies mapped through Lambda per sample, direction updated, helicity
/// amplitudes picked up e^{+-i theta_W}; weights unchanged.
WavePacket transform_wavepacket(const LorentzTransform& lambda, const WavePacket& wp,
                                double omega0 = 1.0);

/// Reduced 2x2 polarization density matrix, helicity logical basis {+1, -1}.
class PolarizationState {
public:
    explicit PolarizationState(ComplexMatrix rho);  // validates
    const ComplexMatrix& rho() const { return rho_; }
    double purity() const;

private:
    ComplexMatrix rho_;
};

PolarizationState polarization_density(const WavePacket& wp);

/// Off-diagonal picks up e^{2 i theta}; diagonal and purity unchanged.
PolarizationState apply_wigner_phase(const PolarizationState& rho, const WignerAngle& theta);

double wrap_two_pi(double angle);

}  // namespace covclone

#endif
