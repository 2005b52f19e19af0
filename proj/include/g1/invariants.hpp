#pragma once
#include "g1/models.hpp"

namespace g1 {

struct InvariantTriple {
    Rat c4, c6, delta;
};

struct AInvariants {
    std::array<Rat, 5> a; // a1, a2, a3, a4, a6
    Rat b2, b4, b6;
};

struct LevelReport {
    Int p;
    long v_delta_model;
    long v_delta_min;
    long level;
};

// I = 12ae - 3bd + c^2, J = 72ace - 27ad^2 - 27b^2e + 9bcd - 2c^3.
std::pair<Rat, Rat> binary_quartic_IJ(const std::array<Rat, 5>& q);

// Exact invariants; singular models allowed (delta = 0).
InvariantTriple invariants(const GenusOneModel& m);

// Hessian of a ternary cubic (determinant of the matrix of second partials).
Model3 hessian(const Model3& m);

// pf and rd of a single quadric.
std::pair<Rat, Rat> pf_rd(const Quadric4& q);
// Pencil versions: pf(x Q1 + z Q2) as a binary quadratic, rd(x Q1 + z Q2)
// as a binary quartic.
std::array<Rat, 3> pf_pencil(const Model4& m);
std::array<Rat, 5> rd_pencil(const Model4& m);

// Doubling: (P, Q) = (pf-pencil, rd-pencil); same discriminant as the pair.
Model2 doubling(const Model4& m);

AInvariants a_invariants(const GenusOneModel& m);

// Weierstrass model carrying the a-invariants of the model; same invariants.
Model1 jacobian_weierstrass(const GenusOneModel& m);

struct LaskaKrausResult {
    Int u;
    Int c4_min, c6_min;
    Int delta_min;
};

// Minimal (c4, c6) over Q by the Laska-Kraus-Connell conditions; requires
// integral c4, c6 with c4^3 - c6^2 = 1728 delta, delta != 0.
LaskaKrausResult laska_kraus(const Int& c4, const Int& c6,
                             unsigned long long factor_budget = 10000000ULL);

// Per-prime level of an integral nonsingular model.
LevelReport level(const GenusOneModel& m, const Int& p,
                  unsigned long long factor_budget = 10000000ULL);

// det(Ax + Bz) of the pair's second-partial matrices, as a binary quartic.
std::array<Rat, 5> pencil_quartic(const Model4& m);

} // namespace g1
