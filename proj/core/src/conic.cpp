// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#include "anbeam/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace anbeam {

namespace {
const char* kind_name(ConeClass k) {
    switch (k) {
        case ConeClass::Free: return "free";
        case ConeClass::NonNeg: return "nonneg";
        case ConeClass::Soc: return "soc";
        case ConeClass::PsdReal: return "psd";
        case ConeClass::PsdComplex: return "psdc";
    }
    return "?";
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

int ConicProgram::add_block(ConeClass kind, const std::string& name, int dim, int size) {
    require(!name.empty(), "ConicProgram: block name must be non-empty");
    require(by_name_.find(name) == by_name_.end(), "ConicProgram: duplicate block name " + name);
    Block b;
    b.kind = kind;
    b.dim = dim;
    b.offset = nvars_;
    b.size = size;
    b.name = name;
    nvars_ += size;
    obj_.resize(nvars_, 0.0);
    by_name_[name] = static_cast<int>(blocks_.size());
    blocks_.push_back(std::move(b));
    return static_cast<int>(blocks_.size()) - 1;
}

int ConicProgram::add_free(const std::string& name) { return add_block(ConeClass::Free, name, 1, 1); }
int ConicProgram::add_nonneg(const std::string& name) { return add_block(ConeClass::NonNeg, name, 1, 1); }

int ConicProgram::add_soc(const std::string& name, int dim) {
    require(dim >= 2, "ConicProgram: SOC dimension must be at least 2");
    return add_block(ConeClass::Soc, name, dim, dim);
}

int ConicProgram::add_psd_real(const std::string& name, int side) {
    require(side >= 1, "ConicProgram: PSD side must be positive");
    return add_block(ConeClass::PsdReal, name, side, svec_len(side));
}

int ConicProgram::add_psd_complex(const std::string& name, int side) {
    require(side >= 1, "ConicProgram: PSD side must be positive");
    return add_block(ConeClass::PsdComplex, name, side, svec_len(2 * side));
}

int ConicProgram::add_row(double rhs) {
    rows_.emplace_back();
    rhs_.push_back(rhs);
    return static_cast<int>(rows_.size()) - 1;
}

void ConicProgram::add_coef(int row, int coord, double value) {
    if (value == 0.0) return;
    rows_[row].emplace_back(coord, value);
}

void ConicProgram::add_scalar_coef(int row, int block, double value) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::Free || b.kind == ConeClass::NonNeg,
            "ConicProgram: block is not a scalar");
    add_coef(row, b.offset, value);
}

void ConicProgram::add_soc_coef(int row, int block, int index, double value) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::Soc && index >= 0 && index < b.dim,
            "ConicProgram: bad SOC coordinate");
    add_coef(row, b.offset + index, value);
}

namespace {
// svec(C) entries of a symmetric coefficient matrix, appended via `emit`.
template <class F>
void emit_sym_coords(const Mat& c, double scale, F&& emit) {
    const int d = c.rows();
    const double rt2 = std::sqrt(2.0);
    int k = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            const double v = (i == j ? c(i, j) : rt2 * 0.5 * (c(i, j) + c(j, i))) * scale;
            if (v != 0.0) emit(k, v);
            ++k;
        }
}
}  // namespace

void ConicProgram::add_real_sym_coef(int row, int block, const Mat& c, double scale) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdReal && c.rows() == b.dim && c.cols() == b.dim,
            "ConicProgram: bad real PSD coefficient");
    emit_sym_coords(c, scale, [&](int k, double v) { add_coef(row, b.offset + k, v); });
}

void ConicProgram::add_herm_coef(int row, int block, const CMat& c, double scale) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdComplex && c.rows() == b.dim && c.cols() == b.dim,
            "ConicProgram: bad Hermitian coefficient");
    // <C, H> = <embed(C)/2, S> on the embedded block
    const Mat e = hermitian_embed(hermitian_part(c), 1.0);
    emit_sym_coords(e, 0.5 * scale, [&](int k, double v) { add_coef(row, b.offset + k, v); });
}

void ConicProgram::obj_coef(int coord, double value) { obj_[coord] += value; }

void ConicProgram::obj_scalar(int block, double value) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::Free || b.kind == ConeClass::NonNeg,
            "ConicProgram: block is not a scalar");
    obj_[b.offset] += value;
}

void ConicProgram::obj_real_sym(int block, const Mat& c, double scale) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdReal, "ConicProgram: block is not a real PSD block");
    emit_sym_coords(c, scale, [&](int k, double v) { obj_[b.offset + k] += v; });
}

void ConicProgram::obj_herm(int block, const CMat& c, double scale) {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdComplex, "ConicProgram: block is not complex-embedded");
    const Mat e = hermitian_embed(hermitian_part(c), 1.0);
    emit_sym_coords(e, 0.5 * scale, [&](int k, double v) { obj_[b.offset + k] += v; });
}

int ConicProgram::block_id(const std::string& name) const {
    auto it = by_name_.find(name);
    require(it != by_name_.end(), "ConicProgram: unknown block " + name);
    return it->second;
}

bool ConicProgram::has_block(const std::string& name) const { return by_name_.count(name) != 0; }

void ConicProgram::canonicalize() {
    for (auto& row : rows_) {
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<int, double>> merged;
        for (const auto& [c, v] : row) {
            if (!merged.empty() && merged.back().first == c)
                merged.back().second += v;
            else
                merged.emplace_back(c, v);
        }
        std::erase_if(merged, [](const auto& p) { return p.second == 0.0; });
        row = std::move(merged);
    }
}

double ConicProgram::eval_row(int r, const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& [c, v] : rows_[r]) s += v * x[c];
    return s;
}

double ConicProgram::eval_obj(const std::vector<double>& x) const {
    double s = 0.0;
    for (int i = 0; i < nvars_; ++i) s += obj_[i] * x[i];
    return s;
}

double ConicProgram::get_scalar(const std::vector<double>& x, int block) const {
    return x[blocks_[block].offset];
}

Vec ConicProgram::get_soc(const std::vector<double>& x, int block) const {
    const Block& b = blocks_[block];
    return Vec(x.begin() + b.offset, x.begin() + b.offset + b.dim);
}

Mat ConicProgram::get_psd_real(const std::vector<double>& x, int block) const {
    const Block& b = blocks_[block];
    return smat(x.data() + b.offset, b.psd_side());
}

CMat ConicProgram::get_psd_complex(const std::vector<double>& x, int block) const {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdComplex, "ConicProgram: block is not complex-embedded");
    return herm_from_embedded(smat(x.data() + b.offset, b.psd_side()));
}

CMat ConicProgram::get_dual_herm(const std::vector<double>& z, int block) const {
    CMat m = get_psd_complex(z, block);
    return 2.0 * m;
}

void ConicProgram::set_scalar(std::vector<double>& x, int block, double v) const {
    x[blocks_[block].offset] = v;
}

void ConicProgram::set_soc(std::vector<double>& x, int block, const Vec& u) const {
    const Block& b = blocks_[block];
    require(static_cast<int>(u.size()) == b.dim, "ConicProgram: SOC size mismatch");
    std::copy(u.begin(), u.end(), x.begin() + b.offset);
}

void ConicProgram::set_psd_real(std::vector<double>& x, int block, const Mat& s) const {
    const Block& b = blocks_[block];
    const Vec v = svec(s);
    require(static_cast<int>(v.size()) == b.size, "ConicProgram: PSD size mismatch");
    std::copy(v.begin(), v.end(), x.begin() + b.offset);
}

void ConicProgram::set_psd_complex(std::vector<double>& x, int block, const CMat& h) const {
    const Block& b = blocks_[block];
    require(b.kind == ConeClass::PsdComplex, "ConicProgram: block is not complex-embedded");
    const Vec v = svec(hermitian_embed(hermitian_part(h), 1.0));
    std::copy(v.begin(), v.end(), x.begin() + b.offset);
}

ProgramStats ConicProgram::stats() const {
    ProgramStats s;
    for (const Block& b : blocks_) {
        switch (b.kind) {
            case ConeClass::Free: s.n_free += b.dim; break;
            case ConeClass::NonNeg: s.n_nonneg += b.dim; break;
            case ConeClass::Soc: s.soc_dims.push_back(b.dim); break;
            case ConeClass::PsdReal:
            case ConeClass::PsdComplex: s.psd_sides.push_back(b.psd_side()); break;
        }
    }
    s.rows = num_rows();
    s.vars = num_vars();
    for (const auto& row : rows_) s.nnz += static_cast<long long>(row.size());
    return s;
}

std::string ProgramStats::summary() const {
    std::ostringstream os;
    os << "vars=" << vars << " rows=" << rows << " nnz=" << nnz << " free=" << n_free
       << " nonneg=" << n_nonneg << " soc=[";
    for (size_t i = 0; i < soc_dims.size(); ++i) os << (i ? "," : "") << soc_dims[i];
    os << "] psd=[";
    for (size_t i = 0; i < psd_sides.size(); ++i) os << (i ? "," : "") << psd_sides[i];
    os << "]";
    return os.str();
}

std::string ConicProgram::serialize() const {
    std::ostringstream os;
    os << "anbeam-conic v1\n";
    os << "sense " << (maximize_ ? "maximize" : "minimize") << "\n";
    os << "vars " << nvars_ << " rows " << num_rows() << " blocks " << blocks_.size() << "\n";
    os << "rhs";
    for (double v : rhs_) os << " " << fmt_g17(v);
    os << "\n";
    // per block: declaration plus its coefficient triplets (row, local, value);
    // row -1 carries the objective.
    for (const Block& b : blocks_) {
        std::vector<std::tuple<int, int, double>> triplets;
        for (int k = 0; k < b.size; ++k) {
            const double ov = obj_[b.offset + k];
            if (ov != 0.0) triplets.emplace_back(-1, k, ov);
        }
        for (int r = 0; r < num_rows(); ++r) {
            for (const auto& [c, v] : rows_[r]) {
                if (c >= b.offset && c < b.offset + b.size) triplets.emplace_back(r, c - b.offset, v);
            }
        }
        os << "block " << kind_name(b.kind) << " " << b.dim << " " << b.name << " ncoef "
           << triplets.size();
        for (const auto& [r, k, v] : triplets) os << " " << r << ":" << k << ":" << fmt_g17(v);
        os << "\n";
    }
    return os.str();
}

}  // namespace anbeam
