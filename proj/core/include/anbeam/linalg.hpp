// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "anbeam/errors.hpp"

namespace anbeam {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

/// Dense real matrix, row-major storage.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : r_(rows), c_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    static Mat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * c_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * c_ + j]; }
    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }

    Mat transpose() const;
    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s);

private:
    int r_ = 0, c_ = 0;
    Vec d_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);

/// Dense complex matrix, row-major storage.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols, cplx fill = cplx(0, 0))
        : r_(rows), c_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    static CMat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    cplx& operator()(int i, int j) { return d_[static_cast<size_t>(i) * c_ + j]; }
    cplx operator()(int i, int j) const { return d_[static_cast<size_t>(i) * c_ + j]; }

    CMat adjoint() const;
    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cplx s);

private:
    int r_ = 0, c_ = 0;
    CVec d_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(cplx s, CMat a);
CMat operator*(const CMat& a, const CMat& b);
CVec operator*(const CMat& a, const CVec& x);

// ---------------------------------------------------------------------------
// vector helpers

double norm(const Vec& v);
double norm(const CVec& v);
double dot(const Vec& a, const Vec& b);
/// Conjugate-linear in the first argument: sum conj(a_i) * b_i.
cplx cdot(const CVec& a, const CVec& b);
CVec cscale(cplx s, CVec v);

/// a * b^H
CMat outer(const CVec& a, const CVec& b);
/// Re(h^H A h); exactly real when A is Hermitian.
double quad_form(const CVec& h, const CMat& A);

double trace(const Mat& a);
double trace_re(const CMat& a);
double frob(const Mat& a);
double frob(const CMat& a);

Mat sym_part(const Mat& a);
CMat hermitian_part(const CMat& a);
/// Frobenius-relative deviation from (conjugate) symmetry.
double hermitian_residual(const CMat& a);
double symmetry_residual(const Mat& a);

// ---------------------------------------------------------------------------
// complex-to-real PSD embedding

/// [[Re(H), -Im(H)], [Im(H), Re(H)]].  H is symmetrized first; inputs whose
/// Hermitian residual exceeds `tol` (relative, Frobenius) are rejected.
/// The embedded matrix is PSD iff H is; eigenvalues double in multiplicity
/// and the trace doubles.
Mat hermitian_embed(const CMat& h, double tol = 1e-12);

/// Orthogonal projection of a real symmetric 2n x 2n matrix onto the image
/// of hermitian_embed, read back as the complex n x n Hermitian matrix.
CMat herm_from_embedded(const Mat& s);

/// True iff [[a, b], [b, c]] is PSD, i.e. a >= 0, c >= 0, a*c >= b^2.
bool schur_2x2_psd(double a, double b, double c);

// ---------------------------------------------------------------------------
// symmetric / Hermitian eigendecomposition
// (Householder tridiagonalization followed by implicit-shift QL; deterministic)

struct SymEig {
    Vec values;   // ascending
    Mat vectors;  // columns, orthonormal
};

struct HermEig {
    Vec values;    // ascending
    CMat vectors;  // columns, unitary
};

SymEig sym_eig(const Mat& a);
HermEig herm_eig(const CMat& a);

double min_eigenvalue(const CMat& h);
double min_eigenvalue(const Mat& s);
double max_eigenvalue(const Mat& s);

/// Count of eigenvalues above tol * lambda_max; zero when lambda_max <= 0.
int rank_eps(const CMat& h, double tol);

/// PSD square root via eigendecomposition.  Eigenvalues in
/// [-1e-12 * scale, 0) are clipped to zero; anything more negative is
/// rejected as non-PSD.
CMat matrix_sqrt_psd(const CMat& h);

// ---------------------------------------------------------------------------
// factorizations (dense, small sizes)

/// Lower Cholesky factor; false if the matrix is not positive definite.
bool try_chol(const Mat& a, Mat& l);
Mat chol(const Mat& a);
Vec chol_solve(const Mat& l, Vec b);

/// Solve a x = b by Gaussian elimination with partial pivoting.
Vec lu_solve(Mat a, Vec b);

/// One-sided Jacobi SVD, a = U diag(sigma) V^T.  Deterministic sweep order;
/// intended for the small square matrices of the NT scaling computation.
struct Svd {
    Mat u;
    Vec sigma;
    Mat v;
};
Svd svd_jacobi(const Mat& a);

// ---------------------------------------------------------------------------
// svec packing for symmetric matrices (column-major upper triangle,
// off-diagonals scaled by sqrt(2) so that <svec a, svec b> = <A, B>_F)

constexpr int svec_len(int d) { return d * (d + 1) / 2; }
Vec svec(const Mat& s);
Mat smat(const double* v, int d);
Mat smat(const Vec& v, int d);

}  // namespace anbeam
