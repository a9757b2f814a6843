// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace anbeam {

void SolverConfig::validate() const {
    require(feas_tol > 0.0 && gap_tol > 0.0, "SolverConfig: tolerances must be positive");
    require(max_iters > 0, "SolverConfig: max_iters must be positive");
    require(step_frac > 0.0 && step_frac < 1.0, "SolverConfig: step fraction must lie in (0, 1)");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::PrimalInfeasible: return "primal_infeasible";
        case SolveStatus::DualInfeasible: return "dual_infeasible";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// --------------------------------------------------------------------------
// internal lowering: minimization over NonNeg x SOC x PSD cones only
// (free scalars are split into differences of two non-negative scalars)

enum class IKind { NonNeg, Soc, Psd };

struct ICone {
    IKind kind;
    int dim;  // NonNeg: count; Soc: cone dim; Psd: matrix side
    int off;
    int size;
};

struct Work {
    int n = 0;  // internal variable count
    int m = 0;  // rows
    std::vector<double> c;  // minimization objective
    std::vector<double> b;
    std::vector<std::vector<std::pair<int, double>>> rows;  // internal coords
    std::vector<ICone> cones;

    // program-coordinate mapping: primary internal coord, optional negated twin
    std::vector<int> map_primary;
    std::vector<int> map_twin;  // -1 when absent

    // per-cone row support, for the normal-equations assembly
    struct BlockRows {
        std::vector<int> row_ids;
        std::vector<std::vector<std::pair<int, double>>> local;  // block-local coords
    };
    std::vector<BlockRows> support;

    // static part of the SOC Schur contribution: a_i^T J a_j per block
    std::vector<Mat> soc_static;

    double nu = 0.0;  // barrier degree

    // presolve equilibration: rows of [A b] scaled to unit norm, objective
    // scaled to unit norm; undone when mapping back to program coordinates
    std::vector<double> row_scale;
    double obj_scale = 1.0;
};

Work lower(const ConicProgram& prog) {
    Work w;
    const auto& blocks = prog.blocks();
    w.map_primary.assign(prog.num_vars(), -1);
    w.map_twin.assign(prog.num_vars(), -1);

    // nonneg scalars (and free splits) first, then SOC, then PSD
    int off = 0;
    int n_nonneg = 0;
    for (const Block& b : blocks) {
        if (b.kind == ConeClass::NonNeg) {
            w.map_primary[b.offset] = off++;
            ++n_nonneg;
        } else if (b.kind == ConeClass::Free) {
            w.map_primary[b.offset] = off++;
            w.map_twin[b.offset] = off++;
            n_nonneg += 2;
        }
    }
    if (n_nonneg > 0) w.cones.push_back({IKind::NonNeg, n_nonneg, 0, n_nonneg});
    for (const Block& b : blocks) {
        if (b.kind == ConeClass::Soc) {
            w.cones.push_back({IKind::Soc, b.dim, off, b.dim});
            for (int k = 0; k < b.size; ++k) w.map_primary[b.offset + k] = off + k;
            off += b.size;
        }
    }
    for (const Block& b : blocks) {
        if (b.kind == ConeClass::PsdReal || b.kind == ConeClass::PsdComplex) {
            const int side = b.psd_side();
            w.cones.push_back({IKind::Psd, side, off, svec_len(side)});
            for (int k = 0; k < b.size; ++k) w.map_primary[b.offset + k] = off + k;
            off += b.size;
        }
    }
    w.n = off;
    w.m = prog.num_rows();
    w.b = prog.rhs();

    const double sense = prog.maximize() ? -1.0 : 1.0;
    w.c.assign(w.n, 0.0);
    for (int p = 0; p < prog.num_vars(); ++p) {
        const double v = prog.objective()[p];
        if (v == 0.0) continue;
        w.c[w.map_primary[p]] += sense * v;
        if (w.map_twin[p] >= 0) w.c[w.map_twin[p]] -= sense * v;
    }
    w.rows.resize(w.m);
    for (int r = 0; r < w.m; ++r) {
        for (const auto& [p, v] : prog.row(r)) {
            w.rows[r].emplace_back(w.map_primary[p], v);
            if (w.map_twin[p] >= 0) w.rows[r].emplace_back(w.map_twin[p], -v);
        }
        std::sort(w.rows[r].begin(), w.rows[r].end());
    }

    // equilibration
    w.row_scale.assign(w.m, 1.0);
    for (int r = 0; r < w.m; ++r) {
        double nrm = w.b[r] * w.b[r];
        for (const auto& [cidx, v] : w.rows[r]) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm > 1e-300) {
            const double s = 1.0 / nrm;
            w.row_scale[r] = s;
            w.b[r] *= s;
            for (auto& [cidx, v] : w.rows[r]) v *= s;
        }
    }
    const double cn = norm(w.c);
    if (cn > 1e-300) {
        w.obj_scale = 1.0 / std::max(1.0, cn);
        for (double& v : w.c) v *= w.obj_scale;
    }

    // row support per cone block
    w.support.resize(w.cones.size());
    for (size_t bi = 0; bi < w.cones.size(); ++bi) {
        const ICone& ic = w.cones[bi];
        for (int r = 0; r < w.m; ++r) {
            std::vector<std::pair<int, double>> local;
            for (const auto& [cidx, v] : w.rows[r])
                if (cidx >= ic.off && cidx < ic.off + ic.size) local.emplace_back(cidx - ic.off, v);
            if (!local.empty()) {
                w.support[bi].row_ids.push_back(r);
                w.support[bi].local.push_back(std::move(local));
            }
        }
    }

    // static SOC terms a_i^T J a_j
    w.soc_static.resize(w.cones.size());
    for (size_t bi = 0; bi < w.cones.size(); ++bi) {
        if (w.cones[bi].kind != IKind::Soc) continue;
        const auto& sup = w.support[bi];
        const int nr = static_cast<int>(sup.row_ids.size());
        Mat pj(nr, nr);
        for (int i = 0; i < nr; ++i) {
            Vec ai(w.cones[bi].dim, 0.0);
            for (const auto& [k, v] : sup.local[i]) ai[k] = v;
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (const auto& [k, v] : sup.local[j]) s += v * (k == 0 ? ai[k] : -ai[k]);
                pj(i, j) = s;
                pj(j, i) = s;
            }
        }
        w.soc_static[bi] = std::move(pj);
    }

    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) w.nu += ic.dim;
        else if (ic.kind == IKind::Soc) w.nu += 1.0;
        else w.nu += ic.dim;
    }
    return w;
}

// --------------------------------------------------------------------------
// cone-wise operations on internal vectors

void set_unit(const Work& w, Vec& x) {
    x.assign(w.n, 0.0);
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            for (int k = 0; k < ic.dim; ++k) x[ic.off + k] = 1.0;
        } else if (ic.kind == IKind::Soc) {
            x[ic.off] = 1.0;
        } else {
            int k = 0;
            for (int j = 0; j < ic.dim; ++j)
                for (int i = 0; i <= j; ++i, ++k) x[ic.off + k] = (i == j) ? 1.0 : 0.0;
        }
    }
}

struct Scaling {
    Vec w_nn;  // sqrt(x/z) per nonneg coordinate
    struct SocS {
        double eta = 1.0;
        Vec w;  // unit hyperbolic scaling point
    };
    std::vector<SocS> soc;
    struct PsdS {
        Mat r, rti, sigma;  // scaling factor, its inverse transpose, sigma = r r^T
        Vec lam;
    };
    std::vector<PsdS> psd;
    Vec lambda;  // scaled point, full internal layout
};

// T_w u for a unit hyperbolic w.
void soc_tw_apply(const Vec& w, const double* u, double* out, int d) {
    double wu = 0.0;
    for (int k = 1; k < d; ++k) wu += w[k] * u[k];
    out[0] = w[0] * u[0] + wu;
    const double coef = u[0] + wu / (1.0 + w[0]);
    for (int k = 1; k < d; ++k) out[k] = u[k] + coef * w[k];
}

// T_w^{-1} u = J T_w J u.
void soc_tw_inv_apply(const Vec& w, const double* u, double* out, int d) {
    Vec ju(u, u + d);
    for (int k = 1; k < d; ++k) ju[k] = -ju[k];
    soc_tw_apply(w, ju.data(), out, d);
    for (int k = 1; k < d; ++k) out[k] = -out[k];
}

bool compute_scaling(const Work& w, const Vec& x, const Vec& z, Scaling& sc) {
    sc.soc.clear();
    sc.psd.clear();
    sc.lambda.assign(w.n, 0.0);
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            sc.w_nn.assign(ic.dim, 0.0);
            for (int k = 0; k < ic.dim; ++k) {
                const double xi = x[ic.off + k], zi = z[ic.off + k];
                if (xi <= 0.0 || zi <= 0.0) return false;
                sc.w_nn[k] = std::sqrt(xi / zi);
                sc.lambda[ic.off + k] = std::sqrt(xi * zi);
            }
        } else if (ic.kind == IKind::Soc) {
            const int d = ic.dim;
            const double* xp = x.data() + ic.off;
            const double* zp = z.data() + ic.off;
            double xq = xp[0] * xp[0], zq = zp[0] * zp[0], xz = 0.0;
            for (int k = 1; k < d; ++k) {
                xq -= xp[k] * xp[k];
                zq -= zp[k] * zp[k];
            }
            for (int k = 0; k < d; ++k) xz += xp[k] * zp[k];
            if (xq <= 0.0 || zq <= 0.0 || xp[0] <= 0.0 || zp[0] <= 0.0) return false;
            const double gx = std::sqrt(xq), gz = std::sqrt(zq);
            Scaling::SocS s;
            s.eta = std::sqrt(gx / gz);
            const double gbar = std::sqrt((1.0 + xz / (gx * gz)) / 2.0);
            if (!(gbar > 0.0)) return false;
            s.w.assign(d, 0.0);
            s.w[0] = (xp[0] / gx + zp[0] / gz) / (2.0 * gbar);
            for (int k = 1; k < d; ++k) s.w[k] = (xp[k] / gx - zp[k] / gz) / (2.0 * gbar);
            // lambda = W^{-1} x
            Vec lam(d);
            soc_tw_inv_apply(s.w, xp, lam.data(), d);
            for (int k = 0; k < d; ++k) sc.lambda[ic.off + k] = lam[k] / s.eta;
            sc.soc.push_back(std::move(s));
        } else {
            const int d = ic.dim;
            const Mat xm = smat(x.data() + ic.off, d);
            const Mat zm = smat(z.data() + ic.off, d);
            Mat lx, lz;
            if (!try_chol(xm, lx) || !try_chol(zm, lz)) return false;
            const Mat prod = lz.transpose() * lx;
            const Svd svd = svd_jacobi(prod);
            Scaling::PsdS p;
            p.lam = svd.sigma;
            for (double s : p.lam)
                if (!(s > 0.0)) return false;
            Mat vs = svd.v;  // columns scaled by sigma^{-1/2}
            Mat us = svd.u;
            for (int j = 0; j < d; ++j) {
                const double s = 1.0 / std::sqrt(svd.sigma[j]);
                for (int i = 0; i < d; ++i) {
                    vs(i, j) *= s;
                    us(i, j) *= s;
                }
            }
            p.r = lx * vs;
            p.rti = lz * us;
            p.sigma = p.r * p.r.transpose();
            int k = 0;
            for (int j = 0; j < d; ++j)
                for (int i = 0; i <= j; ++i, ++k)
                    sc.lambda[ic.off + k] = (i == j) ? p.lam[j] : 0.0;
            sc.psd.push_back(std::move(p));
        }
    }
    return true;
}

enum class Op { W, Wt, Winv, Sigma };

void apply_scaling(const Work& w, const Scaling& sc, Op op, const Vec& u, Vec& out) {
    out.assign(w.n, 0.0);
    size_t soc_i = 0, psd_i = 0;
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            for (int k = 0; k < ic.dim; ++k) {
                const double wi = sc.w_nn[k];
                double f = wi;
                if (op == Op::Winv) f = 1.0 / wi;
                else if (op == Op::Sigma) f = wi * wi;
                out[ic.off + k] = f * u[ic.off + k];
            }
        } else if (ic.kind == IKind::Soc) {
            const auto& s = sc.soc[soc_i++];
            const int d = ic.dim;
            Vec tmp(d);
            if (op == Op::W || op == Op::Wt) {
                soc_tw_apply(s.w, u.data() + ic.off, tmp.data(), d);
                for (int k = 0; k < d; ++k) out[ic.off + k] = s.eta * tmp[k];
            } else if (op == Op::Winv) {
                soc_tw_inv_apply(s.w, u.data() + ic.off, tmp.data(), d);
                for (int k = 0; k < d; ++k) out[ic.off + k] = tmp[k] / s.eta;
            } else {
                Vec tmp2(d);
                soc_tw_apply(s.w, u.data() + ic.off, tmp.data(), d);
                soc_tw_apply(s.w, tmp.data(), tmp2.data(), d);
                for (int k = 0; k < d; ++k) out[ic.off + k] = s.eta * s.eta * tmp2[k];
            }
        } else {
            const auto& p = sc.psd[psd_i++];
            const int d = ic.dim;
            const Mat um = smat(u.data() + ic.off, d);
            Mat res;
            switch (op) {
                case Op::W: res = p.r * um * p.r.transpose(); break;
                case Op::Wt: res = p.r.transpose() * um * p.r; break;
                case Op::Winv: res = p.rti.transpose() * um * p.rti; break;
                case Op::Sigma: res = p.sigma * um * p.sigma; break;
            }
            const Vec rv = svec(sym_part(res));
            for (int k = 0; k < ic.size; ++k) out[ic.off + k] = rv[k];
        }
    }
}

// Jordan product a o b, block-wise.
void jprod(const Work& w, const Vec& a, const Vec& b, Vec& out) {
    out.assign(w.n, 0.0);
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            for (int k = 0; k < ic.dim; ++k) out[ic.off + k] = a[ic.off + k] * b[ic.off + k];
        } else if (ic.kind == IKind::Soc) {
            const int d = ic.dim;
            const double* ap = a.data() + ic.off;
            const double* bp = b.data() + ic.off;
            double dotab = 0.0;
            for (int k = 0; k < d; ++k) dotab += ap[k] * bp[k];
            out[ic.off] = dotab;
            for (int k = 1; k < d; ++k) out[ic.off + k] = ap[0] * bp[k] + bp[0] * ap[k];
        } else {
            const int d = ic.dim;
            const Mat am = smat(a.data() + ic.off, d);
            const Mat bm = smat(b.data() + ic.off, d);
            const Mat prod = am * bm;
            Mat s(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s(i, j) = 0.5 * (prod(i, j) + prod(j, i));
            const Vec rv = svec(s);
            for (int k = 0; k < ic.size; ++k) out[ic.off + k] = rv[k];
        }
    }
}

// Solve lambda o v = d for v, where lambda is the scaled point (PSD blocks
// diagonal).
void jsolve_lambda(const Work& w, const Scaling& sc, const Vec& d, Vec& out) {
    out.assign(w.n, 0.0);
    size_t psd_i = 0;
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            for (int k = 0; k < ic.dim; ++k) out[ic.off + k] = d[ic.off + k] / sc.lambda[ic.off + k];
        } else if (ic.kind == IKind::Soc) {
            const int dd = ic.dim;
            const double* lp = sc.lambda.data() + ic.off;
            const double* dp = d.data() + ic.off;
            double lq = lp[0] * lp[0], ld = 0.0;
            for (int k = 1; k < dd; ++k) {
                lq -= lp[k] * lp[k];
                ld += lp[k] * dp[k];
            }
            const double v0 = (lp[0] * dp[0] - ld) / lq;
            out[ic.off] = v0;
            for (int k = 1; k < dd; ++k) out[ic.off + k] = (dp[k] - v0 * lp[k]) / lp[0];
        } else {
            const auto& p = sc.psd[psd_i++];
            const int dd = ic.dim;
            const Mat dm = smat(d.data() + ic.off, dd);
            Mat v(dd, dd);
            for (int i = 0; i < dd; ++i)
                for (int j = 0; j < dd; ++j) v(i, j) = 2.0 * dm(i, j) / (p.lam[i] + p.lam[j]);
            const Vec rv = svec(sym_part(v));
            for (int k = 0; k < ic.size; ++k) out[ic.off + k] = rv[k];
        }
    }
}

// Largest step alpha with lambda + alpha * dir in the cone (scaled space).
double max_step(const Work& w, const Scaling& sc, const Vec& dir) {
    double alpha = kInf;
    size_t psd_i = 0;
    for (const ICone& ic : w.cones) {
        if (ic.kind == IKind::NonNeg) {
            for (int k = 0; k < ic.dim; ++k) {
                const double d = dir[ic.off + k];
                if (d < 0.0) alpha = std::min(alpha, -sc.lambda[ic.off + k] / d);
            }
        } else if (ic.kind == IKind::Soc) {
            const int dd = ic.dim;
            const double* lp = sc.lambda.data() + ic.off;
            const double* dp = dir.data() + ic.off;
            double a = dp[0] * dp[0], b = lp[0] * dp[0], c = lp[0] * lp[0];
            for (int k = 1; k < dd; ++k) {
                a -= dp[k] * dp[k];
                b -= lp[k] * dp[k];
                c -= lp[k] * lp[k];
            }
            // head positivity
            if (dp[0] < 0.0) alpha = std::min(alpha, -lp[0] / dp[0]);
            // first positive root of a t^2 + 2 b t + c with c > 0
            double root = kInf;
            if (a < 0.0) {
                root = (-b - std::sqrt(b * b - a * c)) / a;
            } else if (a == 0.0) {
                if (b < 0.0) root = -c / (2.0 * b);
            } else if (b < 0.0) {
                const double disc = b * b - a * c;
                if (disc >= 0.0) root = c / (-b + std::sqrt(disc));
            }
            if (root > 0.0) alpha = std::min(alpha, root);
        } else {
            const auto& p = sc.psd[psd_i++];
            const int dd = ic.dim;
            const Mat dm = smat(dir.data() + ic.off, dd);
            Mat bmat(dd, dd);
            for (int i = 0; i < dd; ++i)
                for (int j = 0; j < dd; ++j)
                    bmat(i, j) = dm(i, j) / std::sqrt(p.lam[i] * p.lam[j]);
            const double lmin = min_eigenvalue(bmat);
            if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
        }
    }
    return alpha;
}

// --------------------------------------------------------------------------
// matrix-vector helpers

Vec a_mul(const Work& w, const Vec& x) {
    Vec y(w.m, 0.0);
    for (int r = 0; r < w.m; ++r) {
        double s = 0.0;
        for (const auto& [cidx, v] : w.rows[r]) s += v * x[cidx];
        y[r] = s;
    }
    return y;
}

Vec at_mul(const Work& w, const Vec& y) {
    Vec x(w.n, 0.0);
    for (int r = 0; r < w.m; ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (const auto& [cidx, v] : w.rows[r]) x[cidx] += v * yr;
    }
    return x;
}

// G = A Sigma A^T, assembled block-wise.
void assemble_schur(const Work& w, const Scaling& sc, Mat& g) {
    g = Mat(w.m, w.m);
    size_t soc_i = 0, psd_i = 0;
    for (size_t bi = 0; bi < w.cones.size(); ++bi) {
        const ICone& ic = w.cones[bi];
        const auto& sup = w.support[bi];
        const int nr = static_cast<int>(sup.row_ids.size());
        if (nr == 0) {
            if (ic.kind == IKind::Soc) ++soc_i;
            if (ic.kind == IKind::Psd) ++psd_i;
            continue;
        }
        if (ic.kind == IKind::NonNeg) {
            // rows touching each coordinate are few; accumulate per coordinate
            for (int i = 0; i < nr; ++i) {
                const int ri = sup.row_ids[i];
                for (int j = 0; j <= i; ++j) {
                    const int rj = sup.row_ids[j];
                    // sparse dot with weights w^2
                    double s = 0.0;
                    const auto& a = sup.local[i];
                    const auto& bvec = sup.local[j];
                    size_t ia = 0, ib = 0;
                    while (ia < a.size() && ib < bvec.size()) {
                        if (a[ia].first < bvec[ib].first) ++ia;
                        else if (a[ia].first > bvec[ib].first) ++ib;
                        else {
                            const double wk = sc.w_nn[a[ia].first];
                            s += a[ia].second * bvec[ib].second * wk * wk;
                            ++ia;
                            ++ib;
                        }
                    }
                    g(ri, rj) += s;
                    if (ri != rj) g(rj, ri) += s;
                }
            }
        } else if (ic.kind == IKind::Soc) {
            const auto& s = sc.soc[soc_i++];
            const double eta2 = s.eta * s.eta;
            Vec dw(nr, 0.0);
            for (int i = 0; i < nr; ++i) {
                double acc = 0.0;
                for (const auto& [k, v] : sup.local[i]) acc += v * s.w[k];
                dw[i] = acc;
            }
            const Mat& pj = w.soc_static[bi];
            for (int i = 0; i < nr; ++i) {
                const int ri = sup.row_ids[i];
                for (int j = 0; j <= i; ++j) {
                    const int rj = sup.row_ids[j];
                    const double val = eta2 * (2.0 * dw[i] * dw[j] - pj(i, j));
                    g(ri, rj) += val;
                    if (ri != rj) g(rj, ri) += val;
                }
            }
        } else {
            const auto& p = sc.psd[psd_i++];
            const int d = ic.dim;
            Vec coef(ic.size);
            for (int i = 0; i < nr; ++i) {
                std::fill(coef.begin(), coef.end(), 0.0);
                for (const auto& [k, v] : sup.local[i]) coef[k] = v;
                const Mat mi = smat(coef, d);
                const Mat ti = p.sigma * mi * p.sigma;
                const Vec ts = svec(sym_part(ti));
                const int ri = sup.row_ids[i];
                for (int j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (const auto& [k, v] : sup.local[j]) s += v * ts[k];
                    const int rj = sup.row_ids[j];
                    g(ri, rj) += s;
                    if (ri != rj) g(rj, ri) += s;
                }
            }
        }
    }
}

struct Factor {
    Mat l;
    Mat greg;  // the factored (regularized) matrix, for refinement residuals
    bool ok = false;
    double reg = 0.0;
};

// Diagonal regularization is applied only when the factorization fails;
// refinement below targets whichever matrix was factored.
Factor factor_schur(const Mat& g) {
    Factor f;
    double maxdiag = 0.0;
    for (int i = 0; i < g.rows(); ++i) maxdiag = std::max(maxdiag, g(i, i));
    if (maxdiag <= 0.0) maxdiag = 1.0;
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        f.greg = g;
        if (reg > 0.0)
            for (int i = 0; i < f.greg.rows(); ++i) f.greg(i, i) += reg;
        if (try_chol(f.greg, f.l)) {
            f.ok = true;
            f.reg = reg;
            return f;
        }
        reg = (reg == 0.0) ? 1e-14 * maxdiag : reg * 100.0;
        if (reg > 1e-5 * maxdiag) break;
    }
    return f;
}

Vec solve_refined(const Mat& /*g*/, const Factor& f, const Vec& rhs) {
    Vec sol = chol_solve(f.l, rhs);
    for (int round = 0; round < 2; ++round) {
        Vec resid = rhs;
        for (int i = 0; i < f.greg.rows(); ++i) {
            double s = 0.0;
            for (int j = 0; j < f.greg.cols(); ++j) s += f.greg(i, j) * sol[j];
            resid[i] -= s;
        }
        const Vec corr = chol_solve(f.l, resid);
        for (size_t i = 0; i < sol.size(); ++i) sol[i] += corr[i];
    }
    return sol;
}

double vdot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const Vec& x, Vec& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

// --------------------------------------------------------------------------

SolveResult solve(const ConicProgram& prog0, const SolverConfig& cfg) {
    cfg.validate();
    ConicProgram prog = prog0;
    prog.canonicalize();
    require(prog.num_vars() > 0, "solve: program has no variables");
    const Work w = lower(prog);
    for (const ICone& ic : w.cones)
        require(ic.size > 0, "solve: empty cone block");

    SolveResult res;
    res.x.assign(prog.num_vars(), 0.0);
    res.y.assign(w.m, 0.0);
    res.z.assign(prog.num_vars(), 0.0);

    const double bnorm = std::max(1.0, norm(w.b));
    const double cnorm = std::max(1.0, norm(w.c));

    Vec x, z;
    set_unit(w, x);
    set_unit(w, z);
    Vec y(w.m, 0.0);
    double tau = 1.0, kappa = 1.0;

    auto finalize_point = [&](SolveStatus status) {
        res.status = status;
        const double inv_tau = tau > 0.0 ? 1.0 / tau : 1.0;
        // map internal -> program coordinates, undoing the equilibration
        for (int p = 0; p < prog.num_vars(); ++p) {
            const int i1 = w.map_primary[p];
            const int i2 = w.map_twin[p];
            res.x[p] = (x[i1] - (i2 >= 0 ? x[i2] : 0.0)) * inv_tau;
            const double zp = i2 >= 0 ? 0.5 * (z[i1] - z[i2]) : z[i1];
            res.z[p] = zp * inv_tau / w.obj_scale;
        }
        for (int r = 0; r < w.m; ++r) res.y[r] = y[r] * w.row_scale[r] * inv_tau / w.obj_scale;
        res.tau = tau;
        res.kappa = kappa;
        if (status == SolveStatus::Optimal || status == SolveStatus::MaxIterations)
            res.objective = prog.eval_obj(res.x);
        else
            res.objective = std::numeric_limits<double>::quiet_NaN();
    };

    // best-iterate snapshot, restored when late-stage arithmetic stalls
    struct Snapshot {
        Vec x, y, z;
        double tau = 1.0, kappa = 1.0;
        double pres = kInf, dres = kInf, gap = kInf, relgap = kInf;
        int iter = 0;
        double metric = kInf;
    } best;

    Scaling sc;
    Mat g;
    Vec sigma_c(w.n), a_sigma_c, g1_rhs(w.m), dy_c;
    Vec rp(w.m), rd(w.n), dtil(w.n), dc(w.n), corr(w.n);
    Vec lam2(w.n);
    Vec dx_aff(w.n), dz_aff(w.n), dy_aff(w.m);
    Vec dx(w.n), dz(w.n), dy(w.m);
    Vec sdx(w.n), sdz(w.n), tmp(w.n), wdtil(w.n), sig_u2(w.n);

    for (int iter = 0; iter <= cfg.max_iters; ++iter) {
        // residuals of the homogeneous system
        const Vec ax = a_mul(w, x);
        const Vec aty = at_mul(w, y);
        for (int r = 0; r < w.m; ++r) rp[r] = ax[r] - w.b[r] * tau;
        for (int i = 0; i < w.n; ++i) rd[i] = -aty[i] + w.c[i] * tau - z[i];
        const double rg = vdot(w.b, y) - vdot(w.c, x) - kappa;
        const double xz = vdot(x, z);
        const double mu = (xz + tau * kappa) / (w.nu + 1.0);

        const double pres = norm(rp) / (tau * bnorm);
        double dres = 0.0;
        for (int i = 0; i < w.n; ++i) {
            const double v = aty[i] + z[i] - w.c[i] * tau;
            dres += v * v;
        }
        dres = std::sqrt(dres) / (tau * cnorm);
        const double pcost = vdot(w.c, x) / tau;
        const double dcost = vdot(w.b, y) / tau;
        const double gap = xz / (tau * tau);
        const double relgap = gap / std::max(1.0, std::abs(pcost));

        if (cfg.log) {
            char line[256];
            std::snprintf(line, sizeof(line), "%d\t%.6e\t%.6e\t%.6e\t%.10e\t%.10e\t%.6e\t%.6e\n",
                          iter, mu, pres, dres, pcost, dcost, gap, tau / kappa);
            (*cfg.log) << line;
        }

        if (pres <= cfg.feas_tol && dres <= cfg.feas_tol && relgap <= cfg.gap_tol) {
            finalize_point(SolveStatus::Optimal);
            res.primal_res = pres;
            res.dual_res = dres;
            res.gap_abs = gap;
            res.gap_rel = relgap;
            res.iterations = iter;
            return res;
        }

        const double metric = std::max(std::max(pres, dres), relgap);
        if (metric < best.metric) {
            best = Snapshot{x, y, z, tau, kappa, pres, dres, gap, relgap, iter, metric};
        }

        auto finish_with_best = [&](SolveStatus fallback) -> SolveResult& {
            if (best.metric < kInf) {
                x = best.x;
                y = best.y;
                z = best.z;
                tau = best.tau;
                kappa = best.kappa;
                finalize_point(fallback);
                res.primal_res = best.pres;
                res.dual_res = best.dres;
                res.gap_abs = best.gap;
                res.gap_rel = best.relgap;
                res.iterations = best.iter;
            } else {
                finalize_point(fallback);
                res.iterations = iter;
            }
            return res;
        };

        // infeasibility detection via the embedding's tau/kappa ratio
        if (kappa > 0.0 && tau / kappa < cfg.infeas_ratio) {
            const double by = vdot(w.b, y);
            const double cx = vdot(w.c, x);
            if (by > 0.0) {
                Vec yh = y, zh = z;
                for (double& v : yh) v /= by;
                for (double& v : zh) v /= by;
                Vec atyh = at_mul(w, yh);
                double cert = 0.0;
                for (int i = 0; i < w.n; ++i) {
                    const double v = atyh[i] + zh[i];
                    cert += v * v;
                }
                cert = std::sqrt(cert) / std::max(1.0, norm(yh));
                if (cert <= cfg.cert_tol) {
                    y = yh;
                    z = zh;
                    tau = 1.0;
                    x.assign(w.n, 0.0);
                    finalize_point(SolveStatus::PrimalInfeasible);
                    res.cert_residual = cert;
                    res.iterations = iter;
                    return res;
                }
            }
            if (cx < 0.0) {
                Vec xh = x;
                for (double& v : xh) v /= -cx;
                const Vec axh = a_mul(w, xh);
                const double cert = norm(axh) / std::max(1.0, norm(xh));
                if (cert <= cfg.cert_tol) {
                    x = xh;
                    tau = 1.0;
                    y.assign(w.m, 0.0);
                    z.assign(w.n, 0.0);
                    finalize_point(SolveStatus::DualInfeasible);
                    res.cert_residual = cert;
                    res.iterations = iter;
                    return res;
                }
            }
        }

        if (iter == cfg.max_iters) return finish_with_best(SolveStatus::MaxIterations);

        // double precision is exhausted; report the best iterate seen
        if (mu < 1e-16) return finish_with_best(SolveStatus::NumericalFailure);

        if (!compute_scaling(w, x, z, sc)) return finish_with_best(SolveStatus::NumericalFailure);

        assemble_schur(w, sc, g);
        const Factor fac = factor_schur(g);
        if (!fac.ok) return finish_with_best(SolveStatus::NumericalFailure);

        apply_scaling(w, sc, Op::Sigma, w.c, sigma_c);
        a_sigma_c = a_mul(w, sigma_c);
        for (int r = 0; r < w.m; ++r) g1_rhs[r] = a_sigma_c[r] + w.b[r];
        dy_c = w.m > 0 ? solve_refined(g, fac, g1_rhs) : Vec();
        const double c_sigma_c = vdot(w.c, sigma_c);

        // b - A Sigma c, reused in the tau elimination
        Vec b_asc(w.m);
        for (int r = 0; r < w.m; ++r) b_asc[r] = w.b[r] - a_sigma_c[r];

        auto newton = [&](const Vec& u1, const Vec& u2, double u3, const Vec& dtil_in,
                          double dkappa_rhs, Vec& odx, Vec& ody, Vec& odz, double& odtau,
                          double& odkappa) -> bool {
            apply_scaling(w, sc, Op::W, dtil_in, wdtil);
            apply_scaling(w, sc, Op::Sigma, u2, sig_u2);
            Vec rhs_r(w.m);
            const Vec a_wdtil = a_mul(w, wdtil);
            const Vec a_sigu2 = a_mul(w, sig_u2);
            for (int r = 0; r < w.m; ++r) rhs_r[r] = u1[r] - a_wdtil[r] - a_sigu2[r];
            const Vec dy_r = w.m > 0 ? solve_refined(g, fac, rhs_r) : Vec();
            const double denom = vdot(b_asc, dy_c) + c_sigma_c + kappa / tau;
            if (!(std::abs(denom) > 1e-300)) return false;
            const double num = u3 + dkappa_rhs / tau + vdot(w.c, wdtil) + vdot(w.c, sig_u2) -
                               vdot(b_asc, dy_r);
            odtau = num / denom;
            ody.assign(w.m, 0.0);
            for (int r = 0; r < w.m; ++r) ody[r] = dy_r[r] + odtau * dy_c[r];
            const Vec at_dy = at_mul(w, ody);
            odz.assign(w.n, 0.0);
            for (int i = 0; i < w.n; ++i) odz[i] = -at_dy[i] + w.c[i] * odtau - u2[i];
            apply_scaling(w, sc, Op::Sigma, odz, tmp);
            odx.assign(w.n, 0.0);
            for (int i = 0; i < w.n; ++i) odx[i] = wdtil[i] - tmp[i];
            odkappa = (dkappa_rhs - kappa * odtau) / tau;
            return true;
        };

        // ---- affine (predictor) direction
        Vec u1(w.m), u2(w.n);
        for (int r = 0; r < w.m; ++r) u1[r] = -rp[r];
        for (int i = 0; i < w.n; ++i) u2[i] = -rd[i];
        for (int i = 0; i < w.n; ++i) dtil[i] = -sc.lambda[i];
        double dtau_aff = 0.0, dkappa_aff = 0.0;
        if (!newton(u1, u2, -rg, dtil, -tau * kappa, dx_aff, dy_aff, dz_aff, dtau_aff, dkappa_aff))
            return finish_with_best(SolveStatus::NumericalFailure);

        apply_scaling(w, sc, Op::Winv, dx_aff, sdx);
        apply_scaling(w, sc, Op::Wt, dz_aff, sdz);
        double alpha_aff = std::min(max_step(w, sc, sdx), max_step(w, sc, sdz));
        if (dtau_aff < 0.0) alpha_aff = std::min(alpha_aff, -tau / dtau_aff);
        if (dkappa_aff < 0.0) alpha_aff = std::min(alpha_aff, -kappa / dkappa_aff);
        alpha_aff = std::min(alpha_aff, 1.0);

        double sigma = std::pow(1.0 - alpha_aff, 3.0);
        sigma = std::min(1.0, std::max(0.0, sigma));

        // ---- combined (corrector) direction
        jprod(w, sc.lambda, sc.lambda, lam2);
        jprod(w, sdx, sdz, corr);
        for (int i = 0; i < w.n; ++i) dc[i] = -lam2[i] - corr[i];
        // + sigma mu e
        for (const ICone& ic : w.cones) {
            if (ic.kind == IKind::NonNeg) {
                for (int k = 0; k < ic.dim; ++k) dc[ic.off + k] += sigma * mu;
            } else if (ic.kind == IKind::Soc) {
                dc[ic.off] += sigma * mu;
            } else {
                int k = 0;
                for (int j = 0; j < ic.dim; ++j)
                    for (int i2 = 0; i2 <= j; ++i2, ++k)
                        if (i2 == j) dc[ic.off + k] += sigma * mu;
            }
        }
        jsolve_lambda(w, sc, dc, dtil);
        const double scale_r = 1.0 - sigma;
        for (int r = 0; r < w.m; ++r) u1[r] = -scale_r * rp[r];
        for (int i = 0; i < w.n; ++i) u2[i] = -scale_r * rd[i];
        const double dkappa_rhs = sigma * mu - tau * kappa - dtau_aff * dkappa_aff;
        double dtau = 0.0, dkappa = 0.0;
        if (!newton(u1, u2, -scale_r * rg, dtil, dkappa_rhs, dx, dy, dz, dtau, dkappa))
            return finish_with_best(SolveStatus::NumericalFailure);

        apply_scaling(w, sc, Op::Winv, dx, sdx);
        apply_scaling(w, sc, Op::Wt, dz, sdz);
        double alpha = std::min(max_step(w, sc, sdx), max_step(w, sc, sdz));
        if (dtau < 0.0) alpha = std::min(alpha, -tau / dtau);
        if (dkappa < 0.0) alpha = std::min(alpha, -kappa / dkappa);
        alpha = std::min(cfg.step_frac * alpha, 1.0);
        if (!(alpha > 1e-10) || !std::isfinite(alpha))
            return finish_with_best(SolveStatus::NumericalFailure);

        axpy(alpha, dx, x);
        axpy(alpha, dz, z);
        for (int r = 0; r < w.m; ++r) y[r] += alpha * dy[r];
        tau += alpha * dtau;
        kappa += alpha * dkappa;
    }

    finalize_point(SolveStatus::MaxIterations);
    return res;
}

// --------------------------------------------------------------------------

ResidualReport residuals(const ConicProgram& prog0, const std::vector<double>& x,
                         const std::vector<double>& y, const std::vector<double>& z) {
    ConicProgram prog = prog0;
    prog.canonicalize();
    require(static_cast<int>(x.size()) == prog.num_vars(), "residuals: x dimension mismatch");
    require(y.empty() || static_cast<int>(y.size()) == prog.num_rows(),
            "residuals: y dimension mismatch");
    require(z.empty() || static_cast<int>(z.size()) == prog.num_vars(),
            "residuals: z dimension mismatch");

    ResidualReport rep;
    rep.row_residual.resize(prog.num_rows());
    double pr = 0.0;
    for (int r = 0; r < prog.num_rows(); ++r) {
        const double v = prog.eval_row(r, x) - prog.rhs()[r];
        rep.row_residual[r] = v;
        pr += v * v;
    }
    rep.primal_res = std::sqrt(pr);

    if (!y.empty() && !z.empty()) {
        const double sense = prog.maximize() ? -1.0 : 1.0;
        Vec aty(prog.num_vars(), 0.0);
        for (int r = 0; r < prog.num_rows(); ++r)
            for (const auto& [cidx, v] : prog.row(r)) aty[cidx] += v * y[r];
        double dr = 0.0;
        for (int i = 0; i < prog.num_vars(); ++i) {
            const double v = aty[i] + z[i] - sense * prog.objective()[i];
            dr += v * v;
        }
        rep.dual_res = std::sqrt(dr);
        double by = 0.0;
        for (int r = 0; r < prog.num_rows(); ++r) by += prog.rhs()[r] * y[r];
        rep.gap = std::abs(sense * prog.eval_obj(x) - by);
    }

    double margin = kInf;
    for (size_t bi = 0; bi < prog.blocks().size(); ++bi) {
        const Block& b = prog.blocks()[bi];
        switch (b.kind) {
            case ConeClass::Free: break;
            case ConeClass::NonNeg:
                margin = std::min(margin, x[b.offset]);
                break;
            case ConeClass::Soc: {
                double nrm = 0.0;
                for (int k = 1; k < b.dim; ++k) nrm += x[b.offset + k] * x[b.offset + k];
                margin = std::min(margin, x[b.offset] - std::sqrt(nrm));
                break;
            }
            case ConeClass::PsdReal:
            case ConeClass::PsdComplex:
                margin = std::min(margin,
                                  min_eigenvalue(smat(x.data() + b.offset, b.psd_side())));
                break;
        }
    }
    rep.min_cone_margin = margin;
    return rep;
}

ResidualReport residuals(const ConicProgram& prog, const std::vector<double>& x) {
    return residuals(prog, x, {}, {});
}

}  // namespace anbeam
