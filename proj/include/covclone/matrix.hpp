#ifndef COVCLONE_MATRIX_HPP
#define COVCLONE_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace covclone {

using complexd = std::complex<double>;

/// Dense complex matrix, row-major. Operations return new values; nothing
/// mutates its arguments. Sized for this project's needs (dim <= 16).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<complexd>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    complexd& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const complexd& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(complexd s) const;
    ComplexMatrix operator-() const;

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix dagger() const;

    complexd trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    /// max|M - M^dag| <= tol * max(1, max|M|)
    bool is_hermitian(double rel_tol = 1e-12) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<complexd> a_;
};

inline ComplexMatrix operator*(complexd s, const ComplexMatrix& m) { return m * s; }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; dims multiply, index convention (i_a, i_b) -> i_a * cols_b + i_b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduce a square matrix on a tensor product of subsystems of sizes `dims`
/// to the subsystems listed in `keep` (ascending output order). Empty `keep`
/// yields the 1x1 total trace. Trace is preserved.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns, same order
};

/// Cyclic complex Jacobi for Hermitian matrices. Throws on non-Hermitian input.
EigenSystem hermitian_eigensystem(const ComplexMatrix& m);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// True iff min eigenvalue >= -tol. Hermitian input required.
bool is_psd(const ComplexMatrix& m, double tol);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace covclone

#endif
