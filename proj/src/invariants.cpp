#include "g1/invariants.hpp"

#include <climits>
#include <mutex>

namespace g1 {

std::pair<Rat, Rat> binary_quartic_IJ(const std::array<Rat, 5>& q) {
    const Rat &a = q[0], &b = q[1], &c = q[2], &d = q[3], &e = q[4];
    Rat I = 12 * a * e - 3 * b * d + c * c;
    Rat J = 72 * a * c * e - 27 * a * d * d - 27 * b * b * e + 9 * b * c * d - 2 * c * c * c;
    return {I, J};
}

namespace {

struct BCChain {
    Rat b2, b4, b6, b8, c4, c6, delta;
};

BCChain bc_chain(const std::array<Rat, 5>& a) {
    BCChain r;
    const Rat &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    r.b2 = a1 * a1 + 4 * a2;
    r.b4 = a1 * a3 + 2 * a4;
    r.b6 = a3 * a3 + 4 * a6;
    r.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    r.c4 = r.b2 * r.b2 - 24 * r.b4;
    r.c6 = -r.b2 * r.b2 * r.b2 + 36 * r.b2 * r.b4 - 216 * r.b6;
    r.delta = -r.b2 * r.b2 * r.b8 - 8 * r.b4 * r.b4 * r.b4 - 27 * r.b6 * r.b6 +
              9 * r.b2 * r.b4 * r.b6;
    return r;
}

std::array<Rat, 5> a_invariants2(const Model2& m) {
    const Rat &l = m.p[0], &mm = m.p[1], &n = m.p[2];
    const Rat &a = m.q[0], &b = m.q[1], &c = m.q[2], &d = m.q[3], &e = m.q[4];
    std::array<Rat, 5> out;
    out[0] = mm;
    out[1] = c - l * n;
    out[2] = l * d + n * b;
    out[3] = -4 * a * e + b * d - (l * l * e + l * n * c + n * n * a);
    out[4] = -4 * a * c * e + a * d * d + b * b * e -
             (l * l * c * e + mm * mm * a * e + n * n * a * c + l * n * b * d) + l * mm * b * e +
             mm * n * a * d;
    return out;
}

// --- degree 3: evaluated integer polynomial tables ---------------------------
//
// c4 and c6 of a ternary cubic are fixed primitive integer polynomials in the
// ten coefficients.  They are expanded once, symbolically: c4 from the
// b-chain of the printed a1..a4, c6 by solving the Hessian identity
// H(H(F)) = 48 c4^2 F + 16 c6 H(F) coefficient-wise and dividing exactly.
// Model coefficients live on polynomial variables 3..12 (0..2 are x,y,z).

struct TcTables {
    Poly c4, c6;          // polynomials in variables 3..12
    std::array<Poly, 4> a14; // printed a1, a2, a3, a4
};

Poly sym(int i) {
    return Poly::var(3 + i); // i indexes the Model3 coefficient order
}

Poly generic_cubic_form() {
    Poly f;
    const std::array<std::array<int, 3>, 10> monos = {{{3, 0, 0},
                                                       {0, 3, 0},
                                                       {0, 0, 3},
                                                       {2, 1, 0},
                                                       {2, 0, 1},
                                                       {1, 2, 0},
                                                       {0, 2, 1},
                                                       {1, 0, 2},
                                                       {0, 1, 2},
                                                       {1, 1, 1}}};
    for (int k = 0; k < 10; ++k) {
        Mono mo;
        mo.e[0] = static_cast<std::uint8_t>(monos[static_cast<std::size_t>(k)][0]);
        mo.e[1] = static_cast<std::uint8_t>(monos[static_cast<std::size_t>(k)][1]);
        mo.e[2] = static_cast<std::uint8_t>(monos[static_cast<std::size_t>(k)][2]);
        mo.e[3 + k] = 1;
        f.add_term(Rat(1), mo);
    }
    return f;
}

Poly poly_hessian_xyz(const Poly& f) {
    std::array<Poly, 9> h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            h[static_cast<std::size_t>(3 * i + j)] = f.derivative(i).derivative(j);
    return det3(h);
}

// coefficient of the pure x^3 / y^3 / ... monomial, as polynomial in the symbols
Poly xyz_coeff(const Poly& f, int ex, int ey, int ez) {
    Poly out;
    for (const auto& [m, c] : f.terms()) {
        if (m.e[0] != ex || m.e[1] != ey || m.e[2] != ez)
            continue;
        Mono sm = m;
        sm.e[0] = sm.e[1] = sm.e[2] = 0;
        out.add_term(c, sm);
    }
    return out;
}

const TcTables& tc_tables() {
    static TcTables tables;
    static std::once_flag once;
    std::call_once(once, [] {
        // model coefficients (a, b, c, a2, a3, b1, b3, c1, c2, m) in the fixed
        // monomial order x^3, y^3, z^3, x^2y, x^2z, xy^2, y^2z, xz^2, yz^2, xyz
        Poly A = sym(0), B = sym(1), C = sym(2);
        Poly A2 = sym(3), A3 = sym(4), B1 = sym(5), B3 = sym(6);
        Poly C1 = sym(7), C2 = sym(8), M = sym(9);
        Poly a1 = M;
        Poly a2 = -(A2 * C2 + A3 * B3 + B1 * C1);
        Poly a3 = A * B * C * Rat(9) - (A * B3 * C2 + B * A3 * C1 + C * A2 * B1) -
                  (A2 * B3 * C1 + A3 * B1 * C2);
        Poly a4 = (A * B * C1 * C2 + A * C * B1 * B3 + B * C * A2 * A3) * Rat(-3) +
                  A * (B1 * C2 * C2 + B3 * B3 * C1) + B * (A2 * C1 * C1 + A3 * A3 * C2) +
                  C * (A2 * A2 * B3 + A3 * B1 * B1) + A2 * C2 * A3 * B3 + B1 * C1 * A2 * C2 +
                  A3 * B3 * B1 * C1;
        tables.a14 = {a1, a2, a3, a4};
        Poly b2 = a1 * a1 + a2 * Rat(4);
        Poly b4 = a1 * a3 + a4 * Rat(2);
        tables.c4 = b2 * b2 - b4 * Rat(24);

        Poly f = generic_cubic_form();
        Poly h = poly_hessian_xyz(f);
        Poly hh = poly_hessian_xyz(h);
        // x^3 coefficients of the identity HH = 48 c4^2 F + 16 c6 H
        Poly hh_x = xyz_coeff(hh, 3, 0, 0);
        Poly h_x = xyz_coeff(h, 3, 0, 0);
        Poly num = hh_x - tables.c4 * tables.c4 * A * Rat(48);
        tables.c6 = num.exact_div(h_x * Rat(16));

        if (!tables.c4.is_integral() || !tables.c6.is_integral())
            throw invariant_violation_error("degree-3 invariant tables not integral");
        if (tables.c4.content() != 1 || tables.c6.content() != 1)
            throw invariant_violation_error("degree-3 invariant tables not primitive");
    });
    return tables;
}

std::vector<Rat> tc_point(const Model3& m) {
    std::vector<Rat> xs(13, Rat(0));
    for (int i = 0; i < 10; ++i)
        xs[static_cast<std::size_t>(3 + i)] = m.c[static_cast<std::size_t>(i)];
    return xs;
}

InvariantTriple invariants3(const Model3& m) {
    const TcTables& t = tc_tables();
    auto xs = tc_point(m);
    InvariantTriple r;
    r.c4 = t.c4.eval(xs);
    r.c6 = t.c6.eval(xs);
    r.delta = (r.c4 * r.c4 * r.c4 - r.c6 * r.c6) / 1728;
    return r;
}

std::array<Rat, 5> a_invariants3(const Model3& m) {
    const TcTables& t = tc_tables();
    auto xs = tc_point(m);
    std::array<Rat, 5> a;
    for (int i = 0; i < 4; ++i)
        a[static_cast<std::size_t>(i)] = t.a14[static_cast<std::size_t>(i)].eval(xs);
    Rat c6 = t.c6.eval(xs);
    Rat b2 = a[0] * a[0] + 4 * a[1];
    Rat b4 = a[0] * a[2] + 2 * a[3];
    Rat b6 = (-c6 - b2 * b2 * b2 + 36 * b2 * b4) / 216;
    a[4] = (b6 - a[2] * a[2]) / 4;
    return a;
}

} // namespace

Model3 hessian(const Model3& m) {
    Poly f = cubic_form(m);
    return cubic_from_form(poly_hessian_xyz(f));
}

std::pair<Rat, Rat> pf_rd(const Quadric4& q) {
    const auto& c = q.c;
    // order: 11,12,13,14,22,23,24,33,34,44
    Rat pf = c[1] * c[8] + c[2] * c[6] + c[3] * c[5];
    Rat det = quadric_matrix(q).det();
    Rat rd = (det - pf * pf) / 4;
    bool integral = true;
    for (const auto& x : c)
        integral = integral && is_integer(x);
    if (integral && !is_integer(rd))
        throw invariant_violation_error("rd not integral for integral quadric");
    return {pf, rd};
}

std::array<Rat, 5> pencil_quartic(const Model4& m) {
    MatQ a = quadric_matrix(m.q1), b = quadric_matrix(m.q2);
    std::array<Poly, 16> e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e[static_cast<std::size_t>(4 * i + j)] =
                Poly::var(0) * a(i, j) + Poly::var(1) * b(i, j);
    return binary_quartic_coeffs(det4(e));
}

std::array<Rat, 3> pf_pencil(const Model4& m) {
    const auto& c1 = m.q1.c;
    const auto& c2 = m.q2.c;
    auto pf_cross = [](const std::array<Rat, 10>& u, const std::array<Rat, 10>& v) -> Rat {
        return u[1] * v[8] + v[1] * u[8] + u[2] * v[6] + v[2] * u[6] + u[3] * v[5] + v[3] * u[5];
    };
    std::array<Rat, 3> out;
    out[0] = c1[1] * c1[8] + c1[2] * c1[6] + c1[3] * c1[5];
    out[1] = pf_cross(c1, c2);
    out[2] = c2[1] * c2[8] + c2[2] * c2[6] + c2[3] * c2[5];
    return out;
}

std::array<Rat, 5> rd_pencil(const Model4& m) {
    auto det = pencil_quartic(m);
    auto pf = pf_pencil(m);
    Poly pfp = binary_form(pf);
    Poly detp = binary_form(det);
    Poly rd = (detp - pfp * pfp) / Rat(4);
    if (is_integral(GenusOneModel(m)) && !rd.is_integral())
        throw invariant_violation_error("rd pencil not integral for integral pair");
    return binary_quartic_coeffs(rd);
}

Model2 doubling(const Model4& m) {
    Model2 out;
    out.p = pf_pencil(m);
    out.q = rd_pencil(m);
    return out;
}

InvariantTriple invariants(const GenusOneModel& m) {
    switch (m.index()) {
    case 0: {
        auto bc = bc_chain(std::get<Model1>(m).a);
        return {bc.c4, bc.c6, bc.delta};
    }
    case 1: {
        auto bc = bc_chain(a_invariants2(std::get<Model2>(m)));
        return {bc.c4, bc.c6, bc.delta};
    }
    case 2: return invariants3(std::get<Model3>(m));
    default: {
        auto f = pencil_quartic(std::get<Model4>(m));
        auto [I, J] = binary_quartic_IJ(f);
        InvariantTriple r;
        r.c4 = I;          // 2^-4 * c4(F) with c4(F) = 2^4 I
        r.c6 = J / 2;      // 2^-6 * c6(F) with c6(F) = 2^5 J
        r.delta = (r.c4 * r.c4 * r.c4 - r.c6 * r.c6) / 1728;
        return r;
    }
    }
}

AInvariants a_invariants(const GenusOneModel& m) {
    std::array<Rat, 5> a;
    switch (m.index()) {
    case 0: a = std::get<Model1>(m).a; break;
    case 1: a = a_invariants2(std::get<Model2>(m)); break;
    case 2: a = a_invariants3(std::get<Model3>(m)); break;
    default: a = a_invariants2(doubling(std::get<Model4>(m))); break;
    }
    AInvariants out;
    out.a = a;
    out.b2 = a[0] * a[0] + 4 * a[1];
    out.b4 = a[0] * a[2] + 2 * a[3];
    out.b6 = a[2] * a[2] + 4 * a[4];
    InvariantTriple inv = invariants(m);
    if (out.b2 * out.b2 - 24 * out.b4 != inv.c4 ||
        -out.b2 * out.b2 * out.b2 + 36 * out.b2 * out.b4 - 216 * out.b6 != inv.c6)
        throw invariant_violation_error("a-invariants inconsistent with invariants");
    if (is_integral(m) && (!is_integer(a[4]) || !is_integer(a[2])))
        throw invariant_violation_error("derived a6 not integral for integral model");
    return out;
}

Model1 jacobian_weierstrass(const GenusOneModel& m) {
    InvariantTriple inv = invariants(m);
    if (inv.delta == 0)
        throw singular_model_error();
    Model1 w{a_invariants(m).a};
    InvariantTriple wi = invariants(GenusOneModel(w));
    if (wi.c4 != inv.c4 || wi.c6 != inv.c6 || wi.delta != inv.delta)
        throw invariant_violation_error("jacobian invariants mismatch");
    return w;
}

namespace {

bool kraus_conditions(const Int& c4, const Int& c6) {
    // at 3: v3(c6) != 2; at 2: c6 = -1 mod 4, or (v2(c4) >= 4 and c6 = 0 or 8 mod 32)
    if (c6 != 0 && vp_int(c6, 3) == 2)
        return false;
    Int c6m4 = ((c6 % 4) + 4) % 4;
    if (c6m4 == 3)
        return true;
    bool v2c4_ge4 = (c4 == 0) || vp_int(c4, 2) >= 4;
    Int c6m32 = ((c6 % 32) + 32) % 32;
    return v2c4_ge4 && (c6m32 == 0 || c6m32 == 8);
}

} // namespace

LaskaKrausResult laska_kraus(const Int& c4, const Int& c6, unsigned long long factor_budget) {
    Rat delta_r = (Rat(c4) * c4 * c4 - Rat(c6) * c6) / 1728;
    if (!is_integer(delta_r))
        throw argument_error("laska_kraus: c4^3 - c6^2 not divisible by 1728");
    Int delta = num(delta_r);
    if (delta == 0)
        throw singular_model_error();
    // Any prime of u divides both of c4, c6 (or the nonzero one when the
    // other vanishes).
    Int g;
    if (c4 == 0)
        g = abs(c6);
    else if (c6 == 0)
        g = abs(c4);
    else
        g = gcd(c4, c6);
    auto emax_at = [&](const Int& p) {
        // u^12 must divide Delta as well, else the quotient pair would not
        // satisfy the syzygy integrally
        long e4 = c4 == 0 ? LONG_MAX / 2 : vp_int(c4, p) / 4;
        long e6 = c6 == 0 ? LONG_MAX / 2 : vp_int(c6, p) / 6;
        long ed = vp_int(delta, p) / 12;
        return std::min(std::min(e4, e6), ed);
    };
    auto pow_int = [](const Int& p, long k) {
        Int r = 1;
        for (long i = 0; i < k; ++i)
            r *= p;
        return r;
    };
    Int u = 1;
    long e2cap = 0, e3cap = 0;
    if (g > 1) {
        for (const auto& [p, e] : factor(g, factor_budget).factors) {
            (void)e;
            if (p == 2) {
                e2cap = emax_at(p);
            } else if (p == 3) {
                e3cap = emax_at(p);
            } else {
                u *= pow_int(p, emax_at(p));
            }
        }
    }
    // Exponent at 3: the condition v3(c6') != 2 only involves v3(c6).
    long b = e3cap;
    while (b > 0) {
        if (c6 == 0 || vp_int(c6, 3) - 6 * b != 2)
            break;
        --b;
    }
    u *= pow_int(Int(3), b);
    // Exponent at 2: mod-32 test on the fully divided values, so apply every
    // other division first.
    long a = e2cap;
    while (a > 0) {
        Int t = pow_int(Int(2), a) * u;
        Int c4t = c4 / (t * t * t * t);
        Int c6t = c6 / (t * t * t * t * t * t);
        Int c6m4 = ((c6t % 4) + 4) % 4;
        bool ok = c6m4 == 3;
        if (!ok) {
            bool v2c4 = (c4t == 0) || vp_int(c4t, 2) >= 4;
            Int c6m32 = ((c6t % 32) + 32) % 32;
            ok = v2c4 && (c6m32 == 0 || c6m32 == 8);
        }
        if (ok)
            break;
        --a;
    }
    u *= pow_int(Int(2), a);
    LaskaKrausResult r;
    r.u = u;
    Int u4 = u * u * u * u;
    Int u6 = u4 * u * u;
    r.c4_min = c4 / u4;
    r.c6_min = c6 / u6;
    r.delta_min = delta / (u6 * u6);
    if (!kraus_conditions(r.c4_min, r.c6_min))
        throw invariant_violation_error("laska_kraus: minimal pair fails Kraus conditions");
    return r;
}

LevelReport level(const GenusOneModel& m, const Int& p, unsigned long long factor_budget) {
    if (!is_probable_prime(p))
        throw argument_error("level: p not prime");
    if (!is_p_integral(m, p))
        throw argument_error("level: model not p-integral");
    InvariantTriple inv = invariants(m);
    if (inv.delta == 0)
        throw singular_model_error();
    if (!is_integral(m))
        throw argument_error("level: model not integral");
    LaskaKrausResult lk = laska_kraus(num(inv.c4), num(inv.c6), factor_budget);
    LevelReport r;
    r.p = p;
    r.v_delta_model = vp_int(num(inv.delta), p);
    r.v_delta_min = vp_int(lk.delta_min, p);
    long diff = r.v_delta_model - r.v_delta_min;
    if (diff % 12 != 0)
        throw invariant_violation_error("level: v(Delta) difference not divisible by 12");
    r.level = diff / 12;
    if (r.level < 0)
        throw invariant_violation_error("level: negative level for integral model");
    if (p >= 5) {
        // l = min{ floor(v(c4)/4), floor(v(c6)/6) } with v(0) = +infinity
        long inf = LONG_MAX / 2;
        long via_c = std::min(inv.c4 == 0 ? inf : vp_int(num(inv.c4), p) / 4,
                              inv.c6 == 0 ? inf : vp_int(num(inv.c6), p) / 6);
        if (via_c != r.level)
            throw invariant_violation_error("level: c4/c6 cross-check failed");
    }
    return r;
}

} // namespace g1
