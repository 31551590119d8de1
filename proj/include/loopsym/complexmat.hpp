#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace loopsym {

using cd = std::complex<double>;

/// Dense row-major complex matrix. Sized for the small frames this library
/// works with (n <= m+k+2), but nothing in the implementation assumes that.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

    static CMat identity(int n);
    static CMat zero(int rows, int cols) { return CMat(rows, cols); }
    /// Diagonal matrix from real entries.
    static CMat diag(const std::vector<double>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cd& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    cd* data() { return a_.data(); }
    const cd* data() const { return a_.data(); }
    std::size_t size() const { return a_.size(); }

    CMat& operator+=(const CMat& rhs);
    CMat& operator-=(const CMat& rhs);
    CMat& operator*=(cd s);

    CMat transpose() const;

    /// Largest entrywise modulus.
    double max_abs() const;
    /// Maximum absolute column sum (the norm used for exp scaling).
    double norm1() const;
    bool is_finite() const;

    friend CMat operator+(CMat lhs, const CMat& rhs) { lhs += rhs; return lhs; }
    friend CMat operator-(CMat lhs, const CMat& rhs) { lhs -= rhs; return lhs; }
    friend CMat operator*(cd s, CMat m) { m *= s; return m; }
    friend CMat operator*(CMat m, cd s) { m *= s; return m; }
    friend CMat operator*(const CMat& lhs, const CMat& rhs);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cd> a_;
};

/// Solve A X = B by LU with partial pivoting. Throws on singular A.
CMat solve(CMat a, CMat b);

}  // namespace loopsym
