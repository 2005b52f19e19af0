#pragma once
#include <optional>
#include <vector>

#include "g1/matq.hpp"
#include "g1/poly.hpp"

namespace g1 {

// Arithmetic in F_p with p an arbitrary prime (mpz residues in [0, p)).
struct FpCtx {
    Int p;
    explicit FpCtx(Int prime);
    Int reduce(const Int& x) const;
    Int reduce_rat(const Rat& x) const; // requires p-integral denominator
    Int add(const Int& a, const Int& b) const { return reduce(Int(a + b)); }
    Int sub(const Int& a, const Int& b) const { return reduce(Int(a - b)); }
    Int mul(const Int& a, const Int& b) const { return reduce(Int(a * b)); }
    Int neg(const Int& a) const { return reduce(Int(-a)); }
    Int inv(const Int& a) const;
    Int pow(const Int& a, const Int& e) const;
    // Square root mod p (Tonelli-Shanks; trivial for p = 2), nullopt if
    // a is a non-residue.
    std::optional<Int> sqrt(const Int& a) const;
};

using FpVec = std::vector<Int>;
using FpMat = std::vector<FpVec>; // rows

// Reduced row echelon form in place; returns rank.
int rref(FpMat& m, const FpCtx& F);
// Echelon-form basis of the right kernel (each vector reduced mod p).
std::vector<FpVec> gf_kernel(FpMat m, const FpCtx& F);

// --- univariate / binary forms over F_p ---------------------------------------

// f = sum c[i] X^i (ascending), coefficients reduced mod p.
using FpPoly = std::vector<Int>;

FpPoly fp_trim(FpPoly f);
int fp_deg(const FpPoly& f); // -1 for zero
FpPoly fp_derivative(const FpPoly& f, const FpCtx& F);
FpPoly fp_mod(FpPoly a, const FpPoly& b, const FpCtx& F);
FpPoly fp_gcd(FpPoly a, FpPoly b, const FpCtx& F); // monic
Int fp_eval(const FpPoly& f, const Int& x, const FpCtx& F);

// Binary form of degree d: coefficients c[i] of x^(d-i) z^i, i = 0..d.
struct BinFormFp {
    std::vector<Int> c; // size d+1
    int deg() const { return static_cast<int>(c.size()) - 1; }
};

// A projective point of P^1(F_p): (x : z), normalised so the first nonzero
// coordinate is 1.
struct P1Point {
    Int x, z;
    bool operator==(const P1Point&) const = default;
};

Int binform_eval(const BinFormFp& f, const P1Point& pt, const FpCtx& F);
int multiplicity_at(const BinFormFp& f, const P1Point& pt, const FpCtx& F);
// The unique root of multiplicity >= m (m >= 2), if any (nullopt when none;
// throws invariant_violation_error if several distinct roots qualify).
std::optional<P1Point> unique_root_with_multiplicity(const BinFormFp& f, int m, const FpCtx& F);
// Common roots in P^1(F_p) of two binary forms (via gcd + root extraction).
std::vector<P1Point> common_roots_p1(const BinFormFp& f, const BinFormFp& g, const FpCtx& F);
// Resultant of two binary quadratics, reduced mod p.
Int resultant22(const BinFormFp& f, const BinFormFp& g, const FpCtx& F);
BinFormFp binform_gcd(const BinFormFp& f, const BinFormFp& g, const FpCtx& F);
// Root of a form that is a power of a single linear form.
std::optional<P1Point> single_projective_root(const BinFormFp& f, const FpCtx& F);

// --- quadratic forms mod p ------------------------------------------------------

// Quadric in nvars variables as coefficient map of x_i x_j (i <= j).
struct FpQuad {
    int nvars;
    std::vector<Int> c; // packed upper triangle, row-major: (0,0),(0,1),...,(n-1,n-1)
    Int& at(int i, int j);
    const Int& at(int i, int j) const;
};

FpQuad fp_quad_from_poly(const Poly& q, int nvars, const FpCtx& F);
Int fp_quad_eval(const FpQuad& q, const FpVec& v, const FpCtx& F);
// Kernel of the quadric: for odd p the matrix kernel of second partials; for
// p = 2 the subspace where Q and all its partials vanish.
std::vector<FpVec> fp_quad_kernel(const FpQuad& q, const FpCtx& F);
int fp_quad_rank(const FpQuad& q, const FpCtx& F);
// Factor a quadric of rank <= 2 into two linear forms over F_p; nullopt if it
// is anisotropic (irreducible over F_p) or rank > 2.  Linear forms are
// coefficient vectors of length nvars.
std::optional<std::pair<FpVec, FpVec>> fp_quad_split(const FpQuad& q, const FpCtx& F);

// --- SL_n(Z) lifts ----------------------------------------------------------------

// U in SL_n(Z) whose reduction mod p maps e1 to the given nonzero point of
// P^(n-1)(F_p); deterministic Hermite-style completion.
MatZ sl_lift(const FpVec& target, int n, const FpCtx& F);
// U in SL_n(Z) whose first k columns reduce to a basis of the span of the
// given k independent vectors.
MatZ sl_lift_subspace(const std::vector<FpVec>& basis, int n, const FpCtx& F);

} // namespace g1
