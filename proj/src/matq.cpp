#include "g1/matq.hpp"

namespace g1 {

MatQ MatQ::identity(int n) {
    MatQ m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

MatQ MatQ::diag(const std::vector<Rat>& d) {
    MatQ m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
        m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

MatQ MatQ::operator*(const MatQ& o) const {
    MatQ m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Rat& v = (*this)(i, k);
            if (v == 0)
                continue;
            for (int j = 0; j < o.c_; ++j)
                m(i, j) += v * o(k, j);
        }
    return m;
}

MatQ MatQ::operator+(const MatQ& o) const {
    MatQ m(r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        m.a_[i] = a_[i] + o.a_[i];
    return m;
}

MatQ MatQ::operator-(const MatQ& o) const {
    MatQ m(r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        m.a_[i] = a_[i] - o.a_[i];
    return m;
}

MatQ MatQ::scaled(const Rat& s) const {
    MatQ m(r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        m.a_[i] = a_[i] * s;
    return m;
}

MatQ MatQ::transpose() const {
    MatQ m(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

Rat MatQ::det() const {
    if (r_ != c_)
        throw argument_error("det: non-square");
    MatQ m = *this;
    Rat d = 1;
    for (int k = 0; k < r_; ++k) {
        int piv = -1;
        for (int i = k; i < r_; ++i)
            if (m(i, k) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            return Rat(0);
        if (piv != k) {
            for (int j = 0; j < c_; ++j)
                std::swap(m(piv, j), m(k, j));
            d = -d;
        }
        d *= m(k, k);
        Rat inv = Rat(1) / m(k, k);
        for (int i = k + 1; i < r_; ++i) {
            if (m(i, k) == 0)
                continue;
            Rat f = m(i, k) * inv;
            for (int j = k; j < c_; ++j)
                m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

MatQ MatQ::inverse() const {
    if (r_ != c_)
        throw argument_error("inverse: non-square");
    int n = r_;
    MatQ m = *this, inv = identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (m(i, k) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            throw argument_error("inverse: singular matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(k, j));
                std::swap(inv(piv, j), inv(k, j));
            }
        Rat f = Rat(1) / m(k, k);
        for (int j = 0; j < n; ++j) {
            m(k, j) *= f;
            inv(k, j) *= f;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0)
                continue;
            Rat g = m(i, k);
            for (int j = 0; j < n; ++j) {
                m(i, j) -= g * m(k, j);
                inv(i, j) -= g * inv(k, j);
            }
        }
    }
    return inv;
}

MatZ MatZ::identity(int n) {
    MatZ m(n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

MatZ MatZ::operator*(const MatZ& o) const {
    MatZ m(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            if ((*this)(i, k) == 0)
                continue;
            for (int j = 0; j < n_; ++j)
                m(i, j) += (*this)(i, k) * o(k, j);
        }
    return m;
}

MatZ MatZ::transpose() const {
    MatZ m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

Int MatZ::det() const {
    return num(to_q().det());
}

MatQ MatZ::to_q() const {
    MatQ m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            m(i, j) = Rat((*this)(i, j));
    return m;
}

} // namespace g1
