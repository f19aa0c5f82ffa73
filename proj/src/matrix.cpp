#include "covclone/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace covclone {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix add: dimension mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix subtract: dimension mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix multiply: dimension mismatch");
    ComplexMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const complexd aik = (*this)(i, k);
            if (aik == complexd{}) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(complexd s) const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

ComplexMatrix ComplexMatrix::operator-() const { return (*this) * complexd{-1.0}; }

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
    return r;
}

ComplexMatrix ComplexMatrix::dagger() const { return transpose().conjugate(); }

complexd ComplexMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace: matrix not square");
    complexd t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double s = 0;
    for (const auto& v : a_) s = std::max(s, std::abs(v));
    return s;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
    if (rows_ != cols_) return false;
    double worst = 0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst <= rel_tol * std::max(1.0, max_abs());
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const complexd v = a(ia, ja);
            if (v == complexd{}) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
        }
    return r;
}

namespace {

// decode flat index into per-subsystem digits, most significant first
void decode(std::size_t idx, const std::vector<std::size_t>& dims, std::vector<std::size_t>& out) {
    out.resize(dims.size());
    for (std::size_t s = dims.size(); s-- > 0;) {
        out[s] = idx % dims[s];
        idx /= dims[s];
    }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    if (m.rows() != m.cols()) throw std::invalid_argument("partial_trace: matrix not square");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw std::invalid_argument("partial_trace: zero subsystem dimension");
        total *= d;
    }
    if (total != m.rows()) throw std::invalid_argument("partial_trace: dims do not match matrix size");

    std::vector<std::size_t> kept(keep);
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
        throw std::invalid_argument("partial_trace: duplicate keep index");
    for (auto k : kept)
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<std::size_t> traced;
    for (std::size_t s = 0; s < dims.size(); ++s)
        if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);

    std::size_t kdim = 1, tdim = 1;
    for (auto s : kept) kdim *= dims[s];
    for (auto s : traced) tdim *= dims[s];

    std::vector<std::size_t> kdims, tdims;
    for (auto s : kept) kdims.push_back(dims[s]);
    for (auto s : traced) tdims.push_back(dims[s]);

    ComplexMatrix out(kdim, kdim);
    std::vector<std::size_t> kr, kc, td, full(dims.size());
    for (std::size_t r = 0; r < kdim; ++r) {
        decode(r, kdims, kr);
        for (std::size_t c = 0; c < kdim; ++c) {
            decode(c, kdims, kc);
            complexd acc{};
            for (std::size_t t = 0; t < tdim; ++t) {
                decode(t, tdims, td);
                std::size_t row = 0, col = 0;
                std::size_t ik = 0, it = 0;
                for (std::size_t s = 0; s < dims.size(); ++s) {
                    const bool is_kept = std::binary_search(kept.begin(), kept.end(), s);
                    const std::size_t dr = is_kept ? kr[ik] : td[it];
                    const std::size_t dc = is_kept ? kc[ik] : td[it];
                    if (is_kept) ++ik; else ++it;
                    row = row * dims[s] + dr;
                    col = col * dims[s] + dc;
                }
                acc += m(row, col);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigensystem: matrix not square");
    if (!m.is_hermitian())
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");

    const std::size_t n = m.rows();
    ComplexMatrix a = (m + m.dagger()) * complexd{0.5};  // kill rounding skew
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, a.frobenius_norm());
    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const complexd apq = a(p, q);
                const double absb = std::abs(apq);
                if (absb <= stop / (10.0 * static_cast<double>(n) * static_cast<double>(n)))
                    continue;
                const double phi = std::arg(apq);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * absb);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const complexd eip = std::polar(1.0, phi);

                // A <- G^dag A G with G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p,q)
                for (std::size_t k = 0; k < n; ++k) {
                    const complexd akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(eip) * akq;
                    a(k, q) = s * eip * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complexd apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * eip * aqk;
                    a(q, k) = s * std::conj(eip) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complexd vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(eip) * vkq;
                    v(k, q) = s * eip * vkp + c * vkq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        es.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, j) = v(i, order[j]);
    }
    return es;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    return hermitian_eigensystem(m).values;
}

bool is_psd(const ComplexMatrix& m, double tol) {
    const auto ev = hermitian_eigenvalues(m);
    return ev.empty() || ev.front() >= -tol;
}

ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() {
    return ComplexMatrix{{0.0, complexd{0.0, -1.0}}, {complexd{0.0, 1.0}, 0.0}};
}
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace covclone
