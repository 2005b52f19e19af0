#pragma once
#include <vector>

#include "g1/arith.hpp"

namespace g1 {

// Dense exact matrix over Q, row-major.  Sizes here never exceed 4.
class MatQ {
  public:
    MatQ() : r_(0), c_(0) {}
    MatQ(int r, int c) : r_(r), c_(c), a_(static_cast<std::size_t>(r) * c, Rat(0)) {}
    static MatQ identity(int n);
    static MatQ diag(const std::vector<Rat>& d);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rat& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const Rat& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

    MatQ operator*(const MatQ& o) const;
    MatQ operator+(const MatQ& o) const;
    MatQ operator-(const MatQ& o) const;
    MatQ scaled(const Rat& s) const;
    MatQ transpose() const;
    Rat det() const;
    MatQ inverse() const; // throws argument_error if singular
    bool operator==(const MatQ& o) const = default;

  private:
    int r_, c_;
    std::vector<Rat> a_;
};

// Integer matrix; used for unimodular transformations.
class MatZ {
  public:
    MatZ() : n_(0) {}
    explicit MatZ(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Int(0)) {}
    static MatZ identity(int n);

    int n() const { return n_; }
    Int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Int& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    MatZ operator*(const MatZ& o) const;
    MatZ transpose() const;
    Int det() const;
    MatQ to_q() const;
    bool operator==(const MatZ& o) const = default;

  private:
    int n_;
    std::vector<Int> a_;
};

} // namespace g1
