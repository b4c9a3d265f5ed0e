// Exact linear algebra kernels: bit-packed GF(2) elimination, integer Smith
// normal form, Bareiss determinants, and exact symmetric signature by
// congruence diagonalization over the rationals.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tbl {

using BigInt = boost::multiprecision::cpp_int;

// Rows are packed into 64-bit words. Intended for matrices up to a few
// tens of thousands on a side; the Khovanov engine has its own sparse path
// for larger slices.
class SparseGF2Matrix {
  public:
    SparseGF2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, bool v = true) {
        auto& w = data_[r * words_ + c / 64];
        std::uint64_t bit = std::uint64_t(1) << (c % 64);
        if (v) w |= bit;
        else w &= ~bit;
    }
    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * words_ + c / 64] >> (c % 64)) & 1;
    }
    void flip(std::size_t r, std::size_t c) {
        data_[r * words_ + c / 64] ^= std::uint64_t(1) << (c % 64);
    }

    void xor_row(std::size_t dst, std::size_t src) {
        std::uint64_t* d = &data_[dst * words_];
        const std::uint64_t* s = &data_[src * words_];
        for (std::size_t i = 0; i < words_; i++) d[i] ^= s[i];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < words_; i++)
            std::swap(data_[a * words_ + i], data_[b * words_ + i]);
    }
    bool row_empty(std::size_t r) const {
        for (std::size_t i = 0; i < words_; i++)
            if (data_[r * words_ + i]) return false;
        return true;
    }

  private:
    std::size_t rows_, cols_, words_;
    std::vector<std::uint64_t> data_;
};

inline std::size_t gf2_rank(SparseGF2Matrix m) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); c++) {
        std::size_t piv = rank;
        while (piv < m.rows() && !m.get(piv, c)) piv++;
        if (piv == m.rows()) continue;
        m.swap_rows(rank, piv);
        for (std::size_t r = piv + 1; r < m.rows(); r++)
            if (m.get(r, c)) m.xor_row(r, rank);
        rank++;
    }
    return rank;
}

// Solves M x = v over GF(2). M maps GF(2)^cols -> GF(2)^rows, v has length
// rows. Returns a witness x with M x = v (verified before return) or
// nullopt when v is outside the column space.
inline std::optional<std::vector<bool>> gf2_in_image(const SparseGF2Matrix& m,
                                                     const std::vector<bool>& v) {
    if (v.size() != m.rows()) throw std::invalid_argument("gf2_in_image: length mismatch");
    // Eliminate [M^T | I] so each row of M^T (a column of M) carries its
    // combination record; then reduce v against the echelon rows.
    std::size_t n = m.cols();
    SparseGF2Matrix t(n, m.rows() + n);
    for (std::size_t r = 0; r < m.rows(); r++)
        for (std::size_t c = 0; c < n; c++)
            if (m.get(r, c)) t.set(c, r);
    for (std::size_t c = 0; c < n; c++) t.set(c, m.rows() + c);

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.rows() && rank < n; c++) {
        std::size_t piv = rank;
        while (piv < n && !t.get(piv, c)) piv++;
        if (piv == n) continue;
        t.swap_rows(rank, piv);
        for (std::size_t r = 0; r < n; r++)
            if (r != rank && t.get(r, c)) t.xor_row(r, rank);
        pivot_col.push_back(c);
        rank++;
    }
    // Reduce v; accumulate the combination.
    std::vector<bool> rem = v;
    std::vector<bool> combo(n, false);
    for (std::size_t i = 0; i < rank; i++) {
        if (rem[pivot_col[i]]) {
            for (std::size_t c = 0; c < m.rows(); c++)
                if (t.get(i, c)) rem[c] = !rem[c];
            for (std::size_t c = 0; c < n; c++)
                if (t.get(i, m.rows() + c)) combo[c] = !combo[c];
        }
    }
    for (bool b : rem)
        if (b) return std::nullopt;
    // verify the witness
    std::vector<bool> check(m.rows(), false);
    for (std::size_t c = 0; c < n; c++)
        if (combo[c])
            for (std::size_t r = 0; r < m.rows(); r++)
                if (m.get(r, c)) check[r] = !check[r];
    if (check != v) throw std::logic_error("gf2_in_image: witness failed verification");
    return combo;
}

// --- integer matrices ------------------------------------------------------

using IntMatrix = std::vector<std::vector<BigInt>>;

struct IntSymMatrix {
    int n = 0;
    std::vector<long long> a;  // row-major n*n
    long long& at(int i, int j) { return a[std::size_t(i) * n + j]; }
    long long at(int i, int j) const { return a[std::size_t(i) * n + j]; }
    static IntSymMatrix zero(int n) { return IntSymMatrix{n, std::vector<long long>(std::size_t(n) * n, 0)}; }
};

inline IntMatrix to_big(const IntSymMatrix& m) {
    IntMatrix out(m.n, std::vector<BigInt>(m.n));
    for (int i = 0; i < m.n; i++)
        for (int j = 0; j < m.n; j++) out[i][j] = m.at(i, j);
    return out;
}

// Fraction-free Bareiss elimination; exact for arbitrary integer matrices.
inline BigInt det_bareiss(IntMatrix m) {
    int n = int(m.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; k++) {
        if (m[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; i++)
                if (m[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; i++)
            for (int j = k + 1; j < n; j++)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Diagonal of the Smith normal form, d1 | d2 | ... (nonnegative; zeros last).
inline std::vector<BigInt> smith_normal_form(IntMatrix a) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a[0].size() : 0;
    std::vector<BigInt> diag;
    std::size_t r = 0;
    while (r < rows && r < cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        std::size_t pi = r, pj = r;
        BigInt best = 0;
        for (std::size_t i = r; i < rows; i++)
            for (std::size_t j = r; j < cols; j++)
                if (a[i][j] != 0 && (best == 0 || abs(a[i][j]) < abs(best))) {
                    best = a[i][j];
                    pi = i; pj = j;
                }
        if (best == 0) break;
        std::swap(a[r], a[pi]);
        for (std::size_t i = 0; i < rows; i++) std::swap(a[i][r], a[i][pj]);
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = r + 1; i < rows; i++) {
                if (a[i][r] == 0) continue;
                BigInt q = a[i][r] / a[r][r];
                for (std::size_t j = r; j < cols; j++) a[i][j] -= q * a[r][j];
                if (a[i][r] != 0) { std::swap(a[r], a[i]); again = true; }
            }
            for (std::size_t j = r + 1; j < cols; j++) {
                if (a[r][j] == 0) continue;
                BigInt q = a[r][j] / a[r][r];
                for (std::size_t i = r; i < rows; i++) a[i][j] -= q * a[i][r];
                if (a[r][j] != 0) {
                    for (std::size_t i = 0; i < rows; i++) std::swap(a[i][r], a[i][j]);
                    again = true;
                }
            }
        }
        diag.push_back(abs(a[r][r]));
        r++;
    }
    // enforce the divisibility chain
    for (std::size_t i = 0; i < diag.size(); i++)
        for (std::size_t j = i + 1; j < diag.size(); j++) {
            BigInt g = gcd(diag[i], diag[j]);
            if (g == 0) continue;
            BigInt l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    std::size_t zeros = std::min(rows, cols) - diag.size();
    diag.insert(diag.end(), zeros, 0);
    return diag;
}

// Minimal exact fraction over cpp_int. Entries during rational elimination
// are quotients of minors, so their bit size stays polynomial.
struct BigRat {
    BigInt num = 0, den = 1;
    BigRat() = default;
    BigRat(BigInt n) : num(std::move(n)) {}
    BigRat(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }
    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        BigInt g = gcd(num < 0 ? BigInt(-num) : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    int sign() const { return num == 0 ? 0 : (num < 0 ? -1 : 1); }
    bool is_zero() const { return num == 0; }
    friend BigRat operator+(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend BigRat operator-(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend BigRat operator*(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.num, a.den * b.den);
    }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.den, a.den * b.num);
    }
};

// Signature of a symmetric integer matrix: exact Lagrange congruence
// diagonalization over the rationals, symmetric swaps for zero diagonal
// entries, a row/column addition when the whole remaining diagonal is zero.
// Null directions contribute nothing.
inline int symmetric_signature(const IntSymMatrix& m) {
    int n = m.n;
    std::vector<std::vector<BigRat>> a(n, std::vector<BigRat>(n));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (m.at(i, j) != m.at(j, i)) throw std::invalid_argument("matrix not symmetric");
            a[i][j] = BigRat(BigInt(m.at(i, j)));
        }
    int pos = 0, neg = 0;
    for (int i = 0; i < n; i++) {
        if (a[i][i].is_zero()) {
            int piv = -1;
            for (int j = i + 1; j < n; j++)
                if (!a[j][j].is_zero()) { piv = j; break; }
            if (piv >= 0) {
                for (int r = 0; r < n; r++) std::swap(a[r][i], a[r][piv]);
                std::swap(a[i], a[piv]);
            } else {
                int off = -1;
                for (int j = i + 1; j < n; j++)
                    if (!a[i][j].is_zero()) { off = j; break; }
                if (off < 0) continue;  // zero row in the remaining block
                for (int r = 0; r < n; r++) a[r][i] = a[r][i] + a[r][off];
                for (int c = 0; c < n; c++) a[i][c] = a[i][c] + a[off][c];
            }
        }
        BigRat d = a[i][i];
        (d.sign() > 0 ? pos : neg)++;
        for (int j = i + 1; j < n; j++) {
            if (a[i][j].is_zero()) continue;
            BigRat f = a[i][j] / d;
            for (int c = 0; c < n; c++) a[j][c] = a[j][c] - f * a[i][c];
            for (int r = 0; r < n; r++) a[r][j] = a[r][j] - f * a[r][i];
        }
    }
    return pos - neg;
}

}  // namespace tbl
