// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace anbeam {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat& Mat::operator+=(const Mat& o) {
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
}
Mat& Mat::operator-=(const Mat& o) {
    for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
}
Mat& Mat::operator*=(double s) {
    for (double& x : d_) x *= s;
    return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vec operator*(const Mat& a, const Vec& x) {
    Vec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::adjoint() const {
    CMat t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

CMat& CMat::operator+=(const CMat& o) {
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
    return *this;
}
CMat& CMat::operator-=(const CMat& o) {
    for (size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
    return *this;
}
CMat& CMat::operator*=(cplx s) {
    for (cplx& x : d_) x *= s;
    return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }
CMat operator*(cplx s, CMat a) { return a *= s; }

CMat operator*(const CMat& a, const CMat& b) {
    CMat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0, 0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

CVec operator*(const CMat& a, const CVec& x) {
    CVec y(a.rows(), cplx(0, 0));
    for (int i = 0; i < a.rows(); ++i) {
        cplx s(0, 0);
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// ---------------------------------------------------------------------------

double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm(const CVec& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

cplx cdot(const CVec& a, const CVec& b) {
    cplx s(0, 0);
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

CVec cscale(cplx s, CVec v) {
    for (cplx& x : v) x *= s;
    return v;
}

CMat outer(const CVec& a, const CVec& b) {
    CMat m(static_cast<int>(a.size()), static_cast<int>(b.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
    return m;
}

double quad_form(const CVec& h, const CMat& a) {
    cplx s(0, 0);
    const int n = a.rows();
    for (int i = 0; i < n; ++i) {
        cplx row(0, 0);
        for (int j = 0; j < n; ++j) row += a(i, j) * h[j];
        s += std::conj(h[i]) * row;
    }
    return s.real();
}

double trace(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

double trace_re(const CMat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, i).real();
    return s;
}

double frob(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double frob(const CMat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

Mat sym_part(const Mat& a) {
    Mat s(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

CMat hermitian_part(const CMat& a) {
    CMat s(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return s;
}

double hermitian_residual(const CMat& a) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            num += std::norm(a(i, j) - std::conj(a(j, i)));
            den += std::norm(a(i, j));
        }
    return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double symmetry_residual(const Mat& a) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - a(j, i);
            num += d * d;
            den += a(i, j) * a(i, j);
        }
    return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

// ---------------------------------------------------------------------------

Mat hermitian_embed(const CMat& h, double tol) {
    require(h.rows() == h.cols(), "hermitian_embed: matrix must be square");
    require(hermitian_residual(h) <= tol, "hermitian_embed: input is not Hermitian");
    const CMat hs = hermitian_part(h);
    const int n = h.rows();
    Mat s(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = hs(i, j).real(), im = hs(i, j).imag();
            s(i, j) = re;
            s(n + i, n + j) = re;
            s(i, n + j) = -im;
            s(n + i, j) = im;
        }
    return s;
}

CMat herm_from_embedded(const Mat& s) {
    require(s.rows() == s.cols() && s.rows() % 2 == 0, "herm_from_embedded: need even square matrix");
    const int n = s.rows() / 2;
    CMat h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = 0.5 * (s(i, j) + s(n + i, n + j));
            const double im = 0.5 * (s(n + i, j) - s(i, n + j));
            h(i, j) = cplx(re, im);
        }
    return hermitian_part(h);
}

bool schur_2x2_psd(double a, double b, double c) { return a >= 0.0 && c >= 0.0 && a * c >= b * b; }

// ---------------------------------------------------------------------------
// eigensolver internals

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in q (a = q T q^T).
void tridiagonalize_sym(const Mat& a, Vec& d, Vec& e, Mat& q) {
    const int n = a.rows();
    Mat t = sym_part(a);
    q = Mat::identity(n);
    Vec v(n), w(n), qv(n);
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm2 += t(i, k) * t(i, k);
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;
        const double alpha = t(k + 1, k) >= 0.0 ? -xnorm : xnorm;
        std::fill(v.begin(), v.end(), 0.0);
        for (int i = k + 1; i < n; ++i) v[i] = t(i, k);
        v[k + 1] -= alpha;
        double vn2 = 0.0;
        for (int i = k + 1; i < n; ++i) vn2 += v[i] * v[i];
        if (vn2 == 0.0) continue;
        const double beta = 2.0 / vn2;
        // T <- P T P with P = I - beta v v^T
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += t(i, j) * v[j];
            w[i] = beta * s;
        }
        double vw = 0.0;
        for (int i = k + 1; i < n; ++i) vw += v[i] * w[i];
        const double kc = 0.5 * beta * vw;
        for (int i = k + 1; i < n; ++i) w[i] -= kc * v[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t(i, j) -= v[i] * w[j] + w[i] * v[j];
        // Q <- Q P
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += q(i, j) * v[j];
            qv[i] = s;
        }
        for (int i = 0; i < n; ++i)
            for (int j = k + 1; j < n; ++j) q(i, j) -= beta * qv[i] * v[j];
    }
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = t(i, i);
    for (int i = 0; i + 1 < n; ++i) e[i] = t(i + 1, i);
}

// Same reduction for a Hermitian matrix with a unitary transform; the
// complex subdiagonal is then rotated real by a diagonal phase matrix.
void tridiagonalize_herm(const CMat& a, Vec& d, Vec& e, CMat& u) {
    const int n = a.rows();
    CMat t = hermitian_part(a);
    u = CMat::identity(n);
    CVec v(n), w(n), uv(n);
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(t(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;
        const cplx x0 = t(k + 1, k);
        const cplx alpha = (std::abs(x0) == 0.0) ? cplx(-xnorm, 0.0) : -(x0 / std::abs(x0)) * xnorm;
        std::fill(v.begin(), v.end(), cplx(0, 0));
        for (int i = k + 1; i < n; ++i) v[i] = t(i, k);
        v[k + 1] -= alpha;
        double vn2 = 0.0;
        for (int i = k + 1; i < n; ++i) vn2 += std::norm(v[i]);
        if (vn2 == 0.0) continue;
        const double beta = 2.0 / vn2;
        for (int i = 0; i < n; ++i) {
            cplx s(0, 0);
            for (int j = k + 1; j < n; ++j) s += t(i, j) * v[j];
            w[i] = beta * s;
        }
        cplx vw(0, 0);
        for (int i = k + 1; i < n; ++i) vw += std::conj(v[i]) * w[i];
        const cplx kc = 0.5 * beta * vw;
        for (int i = k + 1; i < n; ++i) w[i] -= kc * v[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
        for (int i = 0; i < n; ++i) {
            cplx s(0, 0);
            for (int j = k + 1; j < n; ++j) s += u(i, j) * v[j];
            uv[i] = s;
        }
        for (int i = 0; i < n; ++i)
            for (int j = k + 1; j < n; ++j) u(i, j) -= beta * uv[i] * std::conj(v[j]);
    }
    // phase-rotate the subdiagonal onto the real axis:
    // (D^H T D)(j+1,j) = conj(phase[j+1]) * t(j+1,j) * phase[j] = |t(j+1,j)|
    CVec phase(n, cplx(1, 0));
    for (int j = 0; j + 1 < n; ++j) {
        const cplx scaled = t(j + 1, j) * phase[j];
        phase[j + 1] = (std::abs(scaled) == 0.0) ? phase[j] : scaled / std::abs(scaled);
    }
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = t(i, i).real();
    for (int i = 0; i + 1 < n; ++i) e[i] = std::abs(t(i + 1, i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u(i, j) *= phase[j];
}

// Implicit-shift QL on a tridiagonal matrix; d = diagonal, e = subdiagonal
// (e[i] couples d[i] and d[i+1]).  Rotations are accumulated into the
// columns of zr/zc when present.
void ql_implicit(Vec& d, Vec& e, Mat* zr, CMat* zc) {
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    const double eps = DBL_EPSILON;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        for (;;) {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ == 80) fail("sym_eig: QL iteration failed to converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (zr) {
                    for (int k = 0; k < zr->rows(); ++k) {
                        const double fk = (*zr)(k, i + 1);
                        (*zr)(k, i + 1) = s * (*zr)(k, i) + c * fk;
                        (*zr)(k, i) = c * (*zr)(k, i) - s * fk;
                    }
                }
                if (zc) {
                    for (int k = 0; k < zc->rows(); ++k) {
                        const cplx fk = (*zc)(k, i + 1);
                        (*zc)(k, i + 1) = s * (*zc)(k, i) + c * fk;
                        (*zc)(k, i) = c * (*zc)(k, i) - s * fk;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

std::vector<int> ascending_order(const Vec& values) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    return idx;
}

}  // namespace

SymEig sym_eig(const Mat& a) {
    require(a.rows() == a.cols(), "sym_eig: matrix must be square");
    const int n = a.rows();
    Vec d, e;
    Mat q;
    tridiagonalize_sym(a, d, e, q);
    ql_implicit(d, e, &q, nullptr);
    const auto idx = ascending_order(d);
    SymEig out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = q(i, idx[j]);
    }
    return out;
}

HermEig herm_eig(const CMat& a) {
    require(a.rows() == a.cols(), "herm_eig: matrix must be square");
    const int n = a.rows();
    Vec d, e;
    CMat u;
    tridiagonalize_herm(a, d, e, u);
    ql_implicit(d, e, nullptr, &u);
    const auto idx = ascending_order(d);
    HermEig out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = u(i, idx[j]);
    }
    return out;
}

double min_eigenvalue(const CMat& h) { return herm_eig(h).values.front(); }
double min_eigenvalue(const Mat& s) { return sym_eig(s).values.front(); }
double max_eigenvalue(const Mat& s) { return sym_eig(s).values.back(); }

int rank_eps(const CMat& h, double tol) {
    const HermEig eig = herm_eig(h);
    const double lmax = eig.values.back();
    if (lmax <= 0.0) return 0;
    int r = 0;
    for (double lam : eig.values)
        if (lam > tol * lmax) ++r;
    return r;
}

CMat matrix_sqrt_psd(const CMat& h) {
    const HermEig eig = herm_eig(h);
    const int n = h.rows();
    const double lmax = eig.values.empty() ? 0.0 : std::max(eig.values.back(), 0.0);
    const double clip = 1e-12 * std::max(1.0, lmax);
    CMat root(n, n);
    for (int k = 0; k < n; ++k) {
        double lam = eig.values[k];
        if (lam < -clip) fail("matrix_sqrt_psd: matrix is not PSD");
        lam = std::max(lam, 0.0);
        const double s = std::sqrt(lam);
        if (s == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) root(i, j) += s * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return hermitian_part(root);
}

// ---------------------------------------------------------------------------

bool try_chol(const Mat& a, Mat& l) {
    const int n = a.rows();
    l = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (diag <= 0.0 || !std::isfinite(diag)) return false;
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

Mat chol(const Mat& a) {
    Mat l;
    require(try_chol(a, l), "chol: matrix is not positive definite");
    return l;
}

Vec chol_solve(const Mat& l, Vec b) {
    const int n = l.rows();
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
    return b;
}

Vec lu_solve(Mat a, Vec b) {
    const int n = a.rows();
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) fail("lu_solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            a(i, k) = m;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
        b[i] = s / a(i, i);
    }
    return b;
}

Svd svd_jacobi(const Mat& a) {
    const int m = a.rows(), n = a.cols();
    Mat u = a;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += u(i, p) * u(i, p);
                    aqq += u(i, q) * u(i, q);
                    apq += u(i, p) * u(i, q);
                }
                const double scale = std::sqrt(app * aqq);
                if (scale > 0.0) off = std::max(off, std::abs(apq) / scale);
                if (scale == 0.0 || std::abs(apq) <= 1e-16 * scale) continue;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off < 1e-15) break;
    }
    Svd out;
    out.sigma.resize(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += u(i, j) * u(i, j);
        out.sigma[j] = std::sqrt(s);
    }
    // descending singular values
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
        if (out.sigma[x] != out.sigma[y]) return out.sigma[x] > out.sigma[y];
        return x < y;
    });
    Svd sorted;
    sorted.sigma.resize(n);
    sorted.u = Mat(m, n);
    sorted.v = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        const int k = idx[j];
        sorted.sigma[j] = out.sigma[k];
        const double inv = out.sigma[k] > 0.0 ? 1.0 / out.sigma[k] : 0.0;
        for (int i = 0; i < m; ++i) sorted.u(i, j) = u(i, k) * inv;
        for (int i = 0; i < n; ++i) sorted.v(i, j) = v(i, k);
    }
    return sorted;
}

// ---------------------------------------------------------------------------

Vec svec(const Mat& s) {
    const int d = s.rows();
    Vec v(svec_len(d));
    const double rt2 = std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) v[k++] = (i == j) ? s(i, j) : rt2 * s(i, j);
    return v;
}

Mat smat(const double* v, int d) {
    Mat s(d, d);
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            const double x = v[k++];
            if (i == j) {
                s(i, j) = x;
            } else {
                s(i, j) = x * inv_rt2;
                s(j, i) = x * inv_rt2;
            }
        }
    return s;
}

Mat smat(const Vec& v, int d) { return smat(v.data(), d); }

}  // namespace anbeam
