#pragma once
#include <vector>

#include "g1/matq.hpp"

namespace g1 {

// Positive definite symmetric Gram matrix of floats, defined up to a positive
// scalar.
struct GramMatrix {
    int n = 0;
    std::vector<double> a; // row-major
    double& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
    static GramMatrix identity(int n);
};

// Cholesky-based positive definiteness test (also validates symmetry to
// 1e-10 relative).
bool is_positive_definite(const GramMatrix& g);

struct LLLResult {
    MatZ u;        // unimodular, det +-1
    GramMatrix g;  // u^T G u, LLL-reduced
};

// LLL on the Gram matrix: the entries are scaled by 10^24, rounded to
// integers, and reduced exactly, which makes the returned u deterministic.
LLLResult lll_gram(const GramMatrix& g, double delta = 0.99);

// Exact LLL on an integer Gram matrix; returns u with u^T G u reduced.
MatZ lll_gram_exact(std::vector<std::vector<Int>> g, const Rat& delta);

} // namespace g1
