// Copyright (c) 2026 the anbeam authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "anbeam/linalg.hpp"

namespace anbeam {

// Standard-form cone program
//
//     max/min  c^T x   s.t.  A x = b,  x in K,
//
// where K is a product of free scalars, non-negative scalars, second-order
// cones and PSD cones.  PSD blocks are real symmetric and stored in svec
// form (column-major upper triangle, off-diagonals scaled by sqrt(2)).
//
// Complex Hermitian matrix variables are carried as real PSD blocks of
// doubled side through the [[Re, -Im], [Im, Re]] embedding.  Rows and the
// objective touch such blocks only through Hermitian coefficient matrices
// (add_herm_coef), whose embedded representation spans exactly the
// structured subspace; the complex value of a block is therefore read back
// by orthogonal projection (get_psd_complex).

enum class ConeClass { Free, NonNeg, Soc, PsdReal, PsdComplex };

struct Block {
    ConeClass kind = ConeClass::Free;
    int dim = 0;     // Free/NonNeg: 1; Soc: cone dimension; Psd: matrix side
                     // (complex side for PsdComplex)
    int offset = 0;  // first coordinate in x
    int size = 0;    // number of x coordinates
    std::string name;

    /// Real matrix side (2*dim for complex-embedded blocks).
    int psd_side() const { return kind == ConeClass::PsdComplex ? 2 * dim : dim; }
};

struct ProgramStats {
    int n_free = 0;
    int n_nonneg = 0;
    std::vector<int> soc_dims;
    std::vector<int> psd_sides;  // real sides, declaration order
    int rows = 0;
    int vars = 0;
    long long nnz = 0;

    std::string summary() const;
};

class ConicProgram {
public:
    // --- variable declarations -------------------------------------------
    int add_free(const std::string& name);
    int add_nonneg(const std::string& name);
    int add_soc(const std::string& name, int dim);
    int add_psd_real(const std::string& name, int side);
    int add_psd_complex(const std::string& name, int side);

    // --- rows (A x = b) ---------------------------------------------------
    int add_row(double rhs);
    void set_rhs(int row, double rhs) { rhs_[row] = rhs; }
    void add_coef(int row, int coord, double value);
    void add_scalar_coef(int row, int block, double value);
    void add_soc_coef(int row, int block, int index, double value);
    void add_real_sym_coef(int row, int block, const Mat& c, double scale = 1.0);
    /// Coefficient <C, H> on a complex-embedded block (C Hermitian).
    void add_herm_coef(int row, int block, const CMat& c, double scale = 1.0);

    // --- objective ---------------------------------------------------------
    void set_maximize(bool maximize) { maximize_ = maximize; }
    bool maximize() const { return maximize_; }
    void obj_coef(int coord, double value);
    void obj_scalar(int block, double value);
    void obj_real_sym(int block, const Mat& c, double scale = 1.0);
    void obj_herm(int block, const CMat& c, double scale = 1.0);

    // --- access -------------------------------------------------------------
    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& block(int id) const { return blocks_[id]; }
    int block_id(const std::string& name) const;
    bool has_block(const std::string& name) const;
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_vars() const { return nvars_; }
    const std::vector<double>& rhs() const { return rhs_; }
    const std::vector<double>& objective() const { return obj_; }
    const std::vector<std::pair<int, double>>& row(int r) const { return rows_[r]; }

    /// Sorts row coefficients by coordinate and merges duplicates.
    void canonicalize();

    // --- evaluation / extraction --------------------------------------------
    double eval_row(int r, const std::vector<double>& x) const;
    double eval_obj(const std::vector<double>& x) const;

    double get_scalar(const std::vector<double>& x, int block) const;
    Vec get_soc(const std::vector<double>& x, int block) const;
    Mat get_psd_real(const std::vector<double>& x, int block) const;
    /// Structured projection of an embedded block, as the complex matrix.
    CMat get_psd_complex(const std::vector<double>& x, int block) const;
    /// Reads a dual slack on an embedded block as the complex multiplier
    /// matrix M (dual vectors carry svec(embed(M)/2)).
    CMat get_dual_herm(const std::vector<double>& z, int block) const;

    void set_scalar(std::vector<double>& x, int block, double v) const;
    void set_soc(std::vector<double>& x, int block, const Vec& u) const;
    void set_psd_real(std::vector<double>& x, int block, const Mat& s) const;
    void set_psd_complex(std::vector<double>& x, int block, const CMat& h) const;

    ProgramStats stats() const;

    /// Text form for golden-file tests: header, rhs, then one line per
    /// block carrying cone type, dimension, name and this block's
    /// (row, local coordinate, value) coefficient triplets (row -1 holds
    /// the objective).
    std::string serialize() const;

private:
    int add_block(ConeClass kind, const std::string& name, int dim, int size);

    std::vector<Block> blocks_;
    std::map<std::string, int> by_name_;
    int nvars_ = 0;
    std::vector<std::vector<std::pair<int, double>>> rows_;
    std::vector<double> rhs_;
    std::vector<double> obj_;
    bool maximize_ = true;
};

}  // namespace anbeam
