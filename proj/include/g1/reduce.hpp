#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "g1/invariants.hpp"
#include "g1/lll.hpp"
#include "g1/models.hpp"

namespace g1 {

struct TorsionMatrix {
    std::complex<double> x_t, y_t; // torsion point on y^2 = x^3 - 27 c4 x - 54 c6
    std::vector<std::complex<double>> m; // row-major n x n, det normalised to 1
    std::complex<double> det_m;          // before normalisation
    int n = 3;
};

// Reduction covariant of a binary quartic from its complex ramification
// points (Julia's construction).
GramMatrix covariant2_roots(const std::array<Rat, 5>& f);

// The same covariant from the 2-torsion action (resolvent cubic route).
GramMatrix covariant2_torsion(const std::array<Rat, 5>& f);

// The eight matrices describing the action of the nontrivial 3-torsion
// points on the plane cubic.
std::vector<TorsionMatrix> torsion_matrices3(const Model3& m, std::uint64_t seed = 0);

GramMatrix covariant3(const Model3& m, std::uint64_t seed = 0);

GramMatrix covariant4(const Model4& m, std::uint64_t seed = 0);

GramMatrix covariant_of(const GenusOneModel& m, std::uint64_t seed = 0);

struct ReduceResult {
    GenusOneModel model;
    Transformation t;
};

// Unimodular reduction: LLL on the reduction covariant, applied to the model;
// invariants are preserved exactly.
ReduceResult reduce_model(const GenusOneModel& m, std::uint64_t seed = 0, double delta = 0.99);

// y-shift so that each of l, m, n lands in {0, 1}.
std::pair<Model2, Trans2> normalise_cross_terms(const Model2& m);

// Orthogonality defect of a Gram matrix (>= 1; 1 iff diagonal).
double lll_defect(const GramMatrix& g);

} // namespace g1
