#include "loopsym/complexmat.hpp"

#include <cmath>
#include <stdexcept>

namespace loopsym {

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::diag(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

CMat& CMat::operator+=(const CMat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("CMat +=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("CMat -=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

CMat& CMat::operator*=(cd s) {
    for (auto& x : a_) x *= s;
    return *this;
}

CMat operator*(const CMat& lhs, const CMat& rhs) {
    if (lhs.cols_ != rhs.rows_) throw std::invalid_argument("CMat *: shape mismatch");
    CMat out(lhs.rows_, rhs.cols_);
    for (int i = 0; i < lhs.rows_; ++i) {
        for (int k = 0; k < lhs.cols_; ++k) {
            const cd v = lhs(i, k);
            if (v == cd(0.0, 0.0)) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
        }
    }
    return out;
}

CMat CMat::transpose() const {
    CMat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

double CMat::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double CMat::norm1() const {
    double m = 0.0;
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

bool CMat::is_finite() const {
    for (const auto& x : a_)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

CMat solve(CMat a, CMat b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
    const int n = a.rows();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double v = std::abs(a(i, col));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) throw std::runtime_error("solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
        }
        const cd d = a(col, col);
        for (int i = col + 1; i < n; ++i) {
            const cd f = a(i, col) / d;
            if (f == cd(0.0, 0.0)) continue;
            a(i, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
            for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const cd d = a(col, col);
        for (int j = 0; j < b.cols(); ++j) {
            cd s = b(col, j);
            for (int k = col + 1; k < n; ++k) s -= a(col, k) * b(k, j);
            b(col, j) = s / d;
        }
    }
    return b;
}

}  // namespace loopsym
