#pragma once
#include <array>
#include <string>
#include <variant>

#include "g1/matq.hpp"
#include "g1/poly.hpp"

namespace g1 {

// Weierstrass equation y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct Model1 {
    std::array<Rat, 5> a; // a1, a2, a3, a4, a6
    bool operator==(const Model1&) const = default;
};

// Generalised binary quartic y^2 + P(x,z) y = Q(x,z) with
// P = l x^2 + m xz + n z^2 and Q = a x^4 + b x^3 z + c x^2 z^2 + d xz^3 + e z^4.
struct Model2 {
    std::array<Rat, 3> p; // l, m, n
    std::array<Rat, 5> q; // a, b, c, d, e
    bool operator==(const Model2&) const = default;
};

// Ternary cubic; coefficients in the fixed monomial order
// x^3, y^3, z^3, x^2 y, x^2 z, x y^2, y^2 z, x z^2, y z^2, xyz.
struct Model3 {
    std::array<Rat, 10> c;
    bool operator==(const Model3&) const = default;
};

// Ordered pair of quadrics in x1..x4; per quadric the coefficients c_ij of
// sum_{i<=j} c_ij x_i x_j in the order 11,12,13,14,22,23,24,33,34,44.
struct Quadric4 {
    std::array<Rat, 10> c;
    bool operator==(const Quadric4&) const = default;
};

struct Model4 {
    Quadric4 q1, q2;
    bool operator==(const Model4&) const = default;
};

using GenusOneModel = std::variant<Model1, Model2, Model3, Model4>;

int degree(const GenusOneModel& m);
bool is_integral(const GenusOneModel& m);
bool is_p_integral(const GenusOneModel& m, const Int& p);

// --- transformations -------------------------------------------------------

struct Trans1 {
    Rat u{1}, r{0}, s{0}, t{0}; // x <- u^2 x + r, y <- u^3 y + u^2 s x + t
    bool operator==(const Trans1&) const = default;
};

struct Trans2 {
    Rat mu{1};
    std::array<Rat, 3> r{Rat(0), Rat(0), Rat(0)};
    MatQ m = MatQ::identity(2);
    bool operator==(const Trans2&) const = default;
};

struct Trans3 {
    Rat mu{1};
    MatQ m = MatQ::identity(3);
    bool operator==(const Trans3&) const = default;
};

struct Trans4 {
    MatQ m2 = MatQ::identity(2); // pencil change
    MatQ n4 = MatQ::identity(4); // coordinate change
    bool operator==(const Trans4&) const = default;
};

using Transformation = std::variant<Trans1, Trans2, Trans3, Trans4>;

Transformation identity_transformation(int deg);
bool is_identity(const Transformation& g);
Rat det(const Transformation& g);
Transformation compose(const Transformation& g2, const Transformation& g1);
Transformation inverse(const Transformation& g);
GenusOneModel apply(const Transformation& g, const GenusOneModel& m);

Model2 apply2(const Trans2& g, const Model2& m);
Model3 apply3(const Trans3& g, const Model3& m);
Model4 apply4(const Trans4& g, const Model4& m);

// --- polynomial views -------------------------------------------------------

// Variables: x=0, y=1, z=2, t=3.  Binary forms use x=0, z=1.
Poly binary_form(const std::array<Rat, 3>& c);
Poly binary_form(const std::array<Rat, 5>& c);
std::array<Rat, 3> binary_quadratic_coeffs(const Poly& f);
std::array<Rat, 5> binary_quartic_coeffs(const Poly& f);
Poly cubic_form(const Model3& m);
Model3 cubic_from_form(const Poly& f);
Poly quadric_form(const Quadric4& q);
Quadric4 quadric_from_form(const Poly& f);
// Matrix of second partials of a quadric (diagonal 2*c_ii).
MatQ quadric_matrix(const Quadric4& q);
Quadric4 quadric_from_matrix(const MatQ& a);

// --- constructions of Section "models from Weierstrass data" ----------------

GenusOneModel weierstrass_embed(const Model1& w, int n);
GenusOneModel weierstrass_embed_P(const Model1& w, int n); // requires a6 = 0

// Degree-raising maps: prepared shapes as documented at the definitions.
Model3 unproject(const Model2& m); // requires quartic coefficient a = 0
Model4 unproject(const Model3& m); // requires z^3 coefficient = 0
Model2 project3(const Model3& m);  // distinguished point (0:0:1), z^3 coeff = 0,
                                   // model quadratic in z
Model3 project4(const Model4& m);  // distinguished point (0:0:0:1), x4^2 coeffs = 0

// --- text formats ------------------------------------------------------------

std::string serialize(const GenusOneModel& m);
GenusOneModel parse_model(const std::string& text);
std::string serialize(const Transformation& g);
Transformation parse_transformation(const std::string& text);

} // namespace g1
