#include "g1/models.hpp"

#include <cctype>
#include <sstream>

namespace g1 {

namespace {
constexpr int X = 0, Y = 1, Z = 2, T = 3;

Mono mono(int ex, int ey = 0, int ez = 0, int et = 0) {
    Mono m;
    m.e[X] = static_cast<std::uint8_t>(ex);
    m.e[Y] = static_cast<std::uint8_t>(ey);
    m.e[Z] = static_cast<std::uint8_t>(ez);
    m.e[T] = static_cast<std::uint8_t>(et);
    return m;
}

// monomial order of Model3 coefficients
const std::array<Mono, 10> kCubicMonos = {
    mono(3, 0, 0), mono(0, 3, 0), mono(0, 0, 3), mono(2, 1, 0), mono(2, 0, 1),
    mono(1, 2, 0), mono(0, 2, 1), mono(1, 0, 2), mono(0, 1, 2), mono(1, 1, 1),
};

// (i,j) pairs of Quadric4 coefficient order
constexpr int kQuadIdx[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                 {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
} // namespace

int degree(const GenusOneModel& m) {
    return static_cast<int>(m.index()) + 1;
}

namespace {
template <std::size_t N> bool arr_integral(const std::array<Rat, N>& a) {
    for (const auto& c : a)
        if (!is_integer(c))
            return false;
    return true;
}
template <std::size_t N> bool arr_p_integral(const std::array<Rat, N>& a, const Int& p) {
    for (const auto& c : a)
        if (c != 0 && vp_int(den(c), p) > 0)
            return false;
    return true;
}
} // namespace

bool is_integral(const GenusOneModel& m) {
    return std::visit(
        [](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Model1>)
                return arr_integral(v.a);
            else if constexpr (std::is_same_v<V, Model2>)
                return arr_integral(v.p) && arr_integral(v.q);
            else if constexpr (std::is_same_v<V, Model3>)
                return arr_integral(v.c);
            else
                return arr_integral(v.q1.c) && arr_integral(v.q2.c);
        },
        m);
}

bool is_p_integral(const GenusOneModel& m, const Int& p) {
    return std::visit(
        [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Model1>)
                return arr_p_integral(v.a, p);
            else if constexpr (std::is_same_v<V, Model2>)
                return arr_p_integral(v.p, p) && arr_p_integral(v.q, p);
            else if constexpr (std::is_same_v<V, Model3>)
                return arr_p_integral(v.c, p);
            else
                return arr_p_integral(v.q1.c, p) && arr_p_integral(v.q2.c, p);
        },
        m);
}

// --- transformation group ----------------------------------------------------

Transformation identity_transformation(int deg) {
    switch (deg) {
    case 1: return Trans1{};
    case 2: return Trans2{};
    case 3: return Trans3{};
    case 4: return Trans4{};
    default: throw argument_error("identity_transformation: bad degree");
    }
}

bool is_identity(const Transformation& g) {
    return std::visit(
        [](const auto& t) {
            using V = std::decay_t<decltype(t)>;
            return t == V{};
        },
        g);
}

Rat det(const Transformation& g) {
    return std::visit(
        [](const auto& t) -> Rat {
            using V = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<V, Trans1>)
                return Rat(1) / t.u;
            else if constexpr (std::is_same_v<V, Trans2>)
                return t.mu * t.m.det();
            else if constexpr (std::is_same_v<V, Trans3>)
                return t.mu * t.m.det();
            else
                return t.m2.det() * t.n4.det();
        },
        g);
}

namespace {

// Substitution images from matrix columns: argument j becomes
// sum_i m(i,j) x_i, the index order fixed for all degrees.
std::vector<Poly> column_images(const MatQ& m) {
    std::vector<Poly> im(static_cast<std::size_t>(m.cols()));
    for (int j = 0; j < m.cols(); ++j) {
        Poly f;
        for (int i = 0; i < m.rows(); ++i)
            f += Poly::var(i) * m(i, j);
        im[static_cast<std::size_t>(j)] = f;
    }
    return im;
}

Model1 apply1(const Trans1& g, const Model1& w) {
    const Rat &u = g.u, &r = g.r, &s = g.s, &t = g.t;
    if (u == 0)
        throw argument_error("apply: u = 0");
    const Rat &a1 = w.a[0], &a2 = w.a[1], &a3 = w.a[2], &a4 = w.a[3], &a6 = w.a[4];
    Model1 o;
    o.a[0] = (a1 + 2 * s) / u;
    o.a[1] = (a2 - s * a1 + 3 * r - s * s) / (u * u);
    o.a[2] = (a3 + r * a1 + 2 * t) / (u * u * u);
    o.a[3] = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / (u * u * u * u);
    o.a[4] = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) /
             (u * u * u * u * u * u);
    return o;
}

} // namespace

Model2 apply2(const Trans2& g, const Model2& m) {
    if (g.mu == 0 || g.m.det() == 0)
        throw argument_error("apply: singular degree-2 transformation");
    auto im = column_images(g.m);
    // binary forms live on variables x=0, z=1
    Poly P = Poly::var(0, 2) * m.p[0] + (Poly::var(0) * Poly::var(1)) * m.p[1] +
             Poly::var(1, 2) * m.p[2];
    Poly Q;
    for (int i = 0; i <= 4; ++i) {
        Mono mo;
        mo.e[0] = static_cast<std::uint8_t>(4 - i);
        mo.e[1] = static_cast<std::uint8_t>(i);
        Q.add_term(m.q[static_cast<std::size_t>(i)], mo);
    }
    Poly PM = P.subst(im), QM = Q.subst(im);
    Poly R = Poly::var(0, 2) * g.r[0] + (Poly::var(0) * Poly::var(1)) * g.r[1] +
             Poly::var(1, 2) * g.r[2];
    Poly Pn = (PM + R * Rat(2)) * g.mu;
    Poly Qn = (QM - PM * R - R * R) * (g.mu * g.mu);
    Model2 o;
    o.p = binary_quadratic_coeffs(Pn);
    o.q = binary_quartic_coeffs(Qn);
    return o;
}

Model3 apply3(const Trans3& g, const Model3& m) {
    if (g.mu == 0 || g.m.det() == 0)
        throw argument_error("apply: singular degree-3 transformation");
    Poly F = cubic_form(m).subst(column_images(g.m)) * g.mu;
    return cubic_from_form(F);
}

Model4 apply4(const Trans4& g, const Model4& m) {
    if (g.m2.det() == 0 || g.n4.det() == 0)
        throw argument_error("apply: singular degree-4 transformation");
    Poly q1 = quadric_form(m.q1), q2 = quadric_form(m.q2);
    Poly r1 = q1 * g.m2(0, 0) + q2 * g.m2(0, 1);
    Poly r2 = q1 * g.m2(1, 0) + q2 * g.m2(1, 1);
    auto im = column_images(g.n4);
    Model4 o;
    o.q1 = quadric_from_form(r1.subst(im));
    o.q2 = quadric_from_form(r2.subst(im));
    return o;
}

GenusOneModel apply(const Transformation& g, const GenusOneModel& m) {
    if (g.index() != m.index())
        throw argument_error("apply: degree mismatch");
    switch (m.index()) {
    case 0: return apply1(std::get<Trans1>(g), std::get<Model1>(m));
    case 1: return apply2(std::get<Trans2>(g), std::get<Model2>(m));
    case 2: return apply3(std::get<Trans3>(g), std::get<Model3>(m));
    default: return apply4(std::get<Trans4>(g), std::get<Model4>(m));
    }
}

namespace {

// r1 composed with the coordinate change of g2 (binary quadratic in new coords)
std::array<Rat, 3> compose_r(const std::array<Rat, 3>& r1, const MatQ& m2, const Rat& mu1,
                             const std::array<Rat, 3>& r2) {
    Poly R1 = Poly::var(0, 2) * r1[0] + (Poly::var(0) * Poly::var(1)) * r1[1] +
              Poly::var(1, 2) * r1[2];
    Poly R = R1.subst(column_images(m2));
    R += (Poly::var(0, 2) * r2[0] + (Poly::var(0) * Poly::var(1)) * r2[1] +
          Poly::var(1, 2) * r2[2]) /
         mu1;
    return binary_quadratic_coeffs(R);
}

} // namespace

Transformation compose(const Transformation& g2, const Transformation& g1) {
    if (g2.index() != g1.index())
        throw argument_error("compose: degree mismatch");
    switch (g1.index()) {
    case 0: {
        const auto &a = std::get<Trans1>(g1), &b = std::get<Trans1>(g2);
        Trans1 c;
        c.u = a.u * b.u;
        c.r = a.u * a.u * b.r + a.r;
        c.s = a.u * b.s + a.s;
        c.t = a.u * a.u * a.u * b.t + a.u * a.u * a.s * b.r + a.t;
        return c;
    }
    case 1: {
        const auto &a = std::get<Trans2>(g1), &b = std::get<Trans2>(g2);
        Trans2 c;
        c.mu = a.mu * b.mu;
        c.m = b.m * a.m;
        c.r = compose_r(a.r, b.m, a.mu, b.r);
        return c;
    }
    case 2: {
        const auto &a = std::get<Trans3>(g1), &b = std::get<Trans3>(g2);
        return Trans3{a.mu * b.mu, b.m * a.m};
    }
    default: {
        const auto &a = std::get<Trans4>(g1), &b = std::get<Trans4>(g2);
        return Trans4{b.m2 * a.m2, b.n4 * a.n4};
    }
    }
}

Transformation inverse(const Transformation& g) {
    switch (g.index()) {
    case 0: {
        const auto& t = std::get<Trans1>(g);
        Trans1 i;
        i.u = Rat(1) / t.u;
        i.r = -t.r / (t.u * t.u);
        i.s = -t.s / t.u;
        i.t = (t.s * t.r - t.t) / (t.u * t.u * t.u);
        return i;
    }
    case 1: {
        const auto& t = std::get<Trans2>(g);
        Trans2 i;
        i.mu = Rat(1) / t.mu;
        i.m = t.m.inverse();
        Poly R = Poly::var(0, 2) * t.r[0] + (Poly::var(0) * Poly::var(1)) * t.r[1] +
                 Poly::var(1, 2) * t.r[2];
        Poly Ri = R.subst(column_images(i.m)) * (-t.mu);
        i.r = binary_quadratic_coeffs(Ri);
        return i;
    }
    case 2: {
        const auto& t = std::get<Trans3>(g);
        return Trans3{Rat(1) / t.mu, t.m.inverse()};
    }
    default: {
        const auto& t = std::get<Trans4>(g);
        return Trans4{t.m2.inverse(), t.n4.inverse()};
    }
    }
}

// --- polynomial views --------------------------------------------------------

Poly binary_form(const std::array<Rat, 3>& c) {
    Poly f;
    for (int i = 0; i <= 2; ++i) {
        Mono m;
        m.e[0] = static_cast<std::uint8_t>(2 - i);
        m.e[1] = static_cast<std::uint8_t>(i);
        f.add_term(c[static_cast<std::size_t>(i)], m);
    }
    return f;
}

Poly binary_form(const std::array<Rat, 5>& c) {
    Poly f;
    for (int i = 0; i <= 4; ++i) {
        Mono m;
        m.e[0] = static_cast<std::uint8_t>(4 - i);
        m.e[1] = static_cast<std::uint8_t>(i);
        f.add_term(c[static_cast<std::size_t>(i)], m);
    }
    return f;
}

std::array<Rat, 3> binary_quadratic_coeffs(const Poly& f) {
    std::array<Rat, 3> c;
    for (int i = 0; i <= 2; ++i) {
        Mono m;
        m.e[0] = static_cast<std::uint8_t>(2 - i);
        m.e[1] = static_cast<std::uint8_t>(i);
        c[static_cast<std::size_t>(i)] = f.coeff(m);
    }
    return c;
}

std::array<Rat, 5> binary_quartic_coeffs(const Poly& f) {
    std::array<Rat, 5> c;
    for (int i = 0; i <= 4; ++i) {
        Mono m;
        m.e[0] = static_cast<std::uint8_t>(4 - i);
        m.e[1] = static_cast<std::uint8_t>(i);
        c[static_cast<std::size_t>(i)] = f.coeff(m);
    }
    return c;
}

Poly cubic_form(const Model3& m) {
    Poly f;
    for (int i = 0; i < 10; ++i)
        f.add_term(m.c[static_cast<std::size_t>(i)], kCubicMonos[static_cast<std::size_t>(i)]);
    return f;
}

Model3 cubic_from_form(const Poly& f) {
    Model3 m;
    for (int i = 0; i < 10; ++i)
        m.c[static_cast<std::size_t>(i)] = f.coeff(kCubicMonos[static_cast<std::size_t>(i)]);
    return m;
}

Poly quadric_form(const Quadric4& q) {
    Poly f;
    for (int k = 0; k < 10; ++k) {
        Mono m;
        m.e[kQuadIdx[k][0]] += 1;
        m.e[kQuadIdx[k][1]] += 1;
        f.add_term(q.c[static_cast<std::size_t>(k)], m);
    }
    return f;
}

Quadric4 quadric_from_form(const Poly& f) {
    Quadric4 q;
    for (int k = 0; k < 10; ++k) {
        Mono m;
        m.e[kQuadIdx[k][0]] += 1;
        m.e[kQuadIdx[k][1]] += 1;
        q.c[static_cast<std::size_t>(k)] = f.coeff(m);
    }
    return q;
}

MatQ quadric_matrix(const Quadric4& q) {
    MatQ a(4, 4);
    for (int k = 0; k < 10; ++k) {
        int i = kQuadIdx[k][0], j = kQuadIdx[k][1];
        if (i == j)
            a(i, i) = 2 * q.c[static_cast<std::size_t>(k)];
        else
            a(i, j) = a(j, i) = q.c[static_cast<std::size_t>(k)];
    }
    return a;
}

Quadric4 quadric_from_matrix(const MatQ& a) {
    Quadric4 q;
    for (int k = 0; k < 10; ++k) {
        int i = kQuadIdx[k][0], j = kQuadIdx[k][1];
        q.c[static_cast<std::size_t>(k)] = (i == j) ? a(i, i) / 2 : a(i, j);
    }
    return q;
}

// --- Weierstrass embeddings ---------------------------------------------------

GenusOneModel weierstrass_embed(const Model1& w, int n) {
    const Rat &a1 = w.a[0], &a2 = w.a[1], &a3 = w.a[2], &a4 = w.a[3], &a6 = w.a[4];
    switch (n) {
    case 2: {
        Model2 m;
        m.p = {Rat(0), a1, a3};
        m.q = {Rat(0), Rat(1), a2, a4, a6};
        return m;
    }
    case 3: {
        Model3 m;
        m.c = {Rat(-1), Rat(0), -a6, Rat(0), -a2, Rat(0), Rat(1), -a4, a3, a1};
        return m;
    }
    case 4: {
        Model4 m;
        // x^2 - z t = 0 ; y^2 + a1 xy + a3 yz - xt - a2 x^2 - a4 xz - a6 z^2 = 0
        Poly x = Poly::var(0), y = Poly::var(1), z = Poly::var(2), t = Poly::var(3);
        m.q1 = quadric_from_form(x * x - z * t);
        m.q2 = quadric_from_form(y * y + x * y * a1 + y * z * a3 - x * t - x * x * a2 -
                                 x * z * a4 - z * z * a6);
        return m;
    }
    default: throw argument_error("weierstrass_embed: degree must be 2, 3 or 4");
    }
}

GenusOneModel weierstrass_embed_P(const Model1& w, int n) {
    if (w.a[4] != 0)
        throw argument_error("weierstrass_embed_P: requires a6 = 0");
    const Rat &a1 = w.a[0], &a2 = w.a[1], &a3 = w.a[2], &a4 = w.a[3];
    switch (n) {
    case 2: {
        Model2 m;
        m.p = {Rat(-1), a1, a2};
        m.q = {Rat(0), Rat(0), Rat(0), -a3, -a4};
        return m;
    }
    case 3: {
        Model3 m;
        // y^2 z - x^2 y + a1 xyz + a2 y z^2 + a3 x z^2 + a4 z^3
        m.c = {Rat(0), Rat(0), a4, Rat(-1), Rat(0), Rat(0), Rat(1), a3, a2, a1};
        return m;
    }
    case 4: {
        Model4 m;
        Poly x = Poly::var(0), y = Poly::var(1), z = Poly::var(2), t = Poly::var(3);
        m.q1 = quadric_from_form(z * t - x * y + y * z * a1 + z * z * a3);
        m.q2 = quadric_from_form(y * y - x * t + y * z * a2 + z * z * a4);
        return m;
    }
    default: throw argument_error("weierstrass_embed_P: degree must be 2, 3 or 4");
    }
}

// --- unprojection / projection -------------------------------------------------

Model3 unproject(const Model2& m) {
    if (m.q[0] != 0)
        throw argument_error("unproject: generalised binary quartic not in prepared shape "
                             "(x^4 coefficient must vanish)");
    // y^2 + f2(x1,x2) y = x2 f3(x1,x2)  ->  x2 z^2 - f2(x,y) z - f3(x,y) with the
    // distinguished point at (0:0:1); here (x1,x2) relabel to (x,y).
    const Rat &l = m.p[0], &mm = m.p[1], &n = m.p[2];
    const Rat &b = m.q[1], &c = m.q[2], &d = m.q[3], &e = m.q[4];
    Model3 o;
    o.c = {-b, -e, Rat(0), -c, -l, -d, -n, Rat(0), Rat(1), -mm};
    return o;
}

Model4 unproject(const Model3& m) {
    if (m.c[2] != 0)
        throw argument_error("unproject: ternary cubic not in prepared shape "
                             "(z^3 coefficient must vanish)");
    // F = x1 q2 - x2 q1 with every x-divisible term assigned to q2.
    Poly x = Poly::var(0), y = Poly::var(1), z = Poly::var(2);
    Poly q2 = x * x * m.c[0] + x * y * m.c[3] + x * z * m.c[4] + y * y * m.c[5] + y * z * m.c[9] +
              z * z * m.c[7];
    Poly q1 = -(y * y * m.c[1] + y * z * m.c[6] + z * z * m.c[8]);
    Poly t = Poly::var(3);
    Model4 o;
    o.q1 = quadric_from_form(x * t + q1);
    o.q2 = quadric_from_form(y * t + q2);
    return o;
}

Model2 project3(const Model3& m) {
    if (m.c[2] != 0)
        throw argument_error("project: ternary cubic has nonzero z^3 coefficient");
    // F = f1(x,y) z^2 - f2(x,y) z - f3(x,y); output y^2 + f2 y = f1 f3.
    Poly x = Poly::var(0), z = Poly::var(1); // binary world
    Poly f1 = x * m.c[7] + z * m.c[8];
    Poly f2 = -(x * x * m.c[4] + x * z * m.c[9] + z * z * m.c[6]);
    Poly f3 = -(x * x * x * m.c[0] + x * x * z * m.c[3] + x * z * z * m.c[5] + z * z * z * m.c[1]);
    Model2 o;
    o.p = binary_quadratic_coeffs(f2);
    o.q = binary_quartic_coeffs(f1 * f3);
    return o;
}

Model3 project4(const Model4& m) {
    if (m.q1.c[9] != 0 || m.q2.c[9] != 0)
        throw argument_error("project: quadric pair has nonzero x4^2 coefficient");
    Poly x = Poly::var(0), y = Poly::var(1), z = Poly::var(2);
    auto split = [&](const Quadric4& q, Poly& ell, Poly& rest) {
        ell = x * q.c[3] + y * q.c[6] + z * q.c[8]; // x4-cross coefficients
        rest = x * x * q.c[0] + x * y * q.c[1] + x * z * q.c[2] + y * y * q.c[4] + y * z * q.c[5] +
               z * z * q.c[7];
    };
    Poly l1, q1, l2, q2;
    split(m.q1, l1, q1);
    split(m.q2, l2, q2);
    return cubic_from_form(l1 * q2 - l2 * q1);
}

// --- text serialisation ---------------------------------------------------------

namespace {

std::string rat_str(const Rat& r) {
    return r.get_str();
}

struct Tokens {
    std::vector<std::string> tok;
    std::vector<std::size_t> pos;
};

Tokens tokenize(const std::string& s) {
    Tokens t;
    std::size_t i = 0;
    while (i < s.size()) {
        if (std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
            ++j;
        t.tok.push_back(s.substr(i, j - i));
        t.pos.push_back(i);
        i = j;
    }
    return t;
}

Rat parse_rat(const std::string& s, std::size_t at) {
    try {
        Rat r(s);
        if (r.get_den() == 0)
            throw parse_error("zero denominator in '" + s + "'", at);
        r.canonicalize();
        return r;
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error("bad rational '" + s + "'", at);
    }
}

} // namespace

std::string serialize(const GenusOneModel& m) {
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Model1>) {
                os << "w";
                for (const auto& c : v.a)
                    os << ' ' << rat_str(c);
            } else if constexpr (std::is_same_v<V, Model2>) {
                os << "gbq";
                for (const auto& c : v.p)
                    os << ' ' << rat_str(c);
                os << " /";
                for (const auto& c : v.q)
                    os << ' ' << rat_str(c);
            } else if constexpr (std::is_same_v<V, Model3>) {
                os << "tc";
                for (const auto& c : v.c)
                    os << ' ' << rat_str(c);
            } else {
                os << "qi";
                for (const auto& c : v.q1.c)
                    os << ' ' << rat_str(c);
                os << " |";
                for (const auto& c : v.q2.c)
                    os << ' ' << rat_str(c);
            }
        },
        m);
    return os.str();
}

GenusOneModel parse_model(const std::string& text) {
    Tokens t = tokenize(text);
    if (t.tok.empty())
        throw parse_error("empty model", 0);
    std::size_t k = 1;
    auto need = [&](std::size_t more) {
        if (t.tok.size() < k + more)
            throw parse_error("truncated model", text.size());
    };
    auto next_rat = [&]() {
        Rat r = parse_rat(t.tok[k], t.pos[k]);
        ++k;
        return r;
    };
    const std::string& tag = t.tok[0];
    if (tag == "w") {
        need(5);
        Model1 m;
        for (auto& c : m.a)
            c = next_rat();
        if (k != t.tok.size())
            throw parse_error("trailing tokens", t.pos[k]);
        return m;
    }
    if (tag == "gbq") {
        need(9);
        Model2 m;
        for (auto& c : m.p)
            c = next_rat();
        if (t.tok[k] != "/")
            throw parse_error("expected '/'", t.pos[k]);
        ++k;
        for (auto& c : m.q)
            c = next_rat();
        if (k != t.tok.size())
            throw parse_error("trailing tokens", t.pos[k]);
        return m;
    }
    if (tag == "tc") {
        need(10);
        Model3 m;
        for (auto& c : m.c)
            c = next_rat();
        if (k != t.tok.size())
            throw parse_error("trailing tokens", t.pos[k]);
        return m;
    }
    if (tag == "qi") {
        need(21);
        Model4 m;
        for (auto& c : m.q1.c)
            c = next_rat();
        if (t.tok[k] != "|")
            throw parse_error("expected '|'", t.pos[k]);
        ++k;
        for (auto& c : m.q2.c)
            c = next_rat();
        if (k != t.tok.size())
            throw parse_error("trailing tokens", t.pos[k]);
        return m;
    }
    throw parse_error("unknown model tag '" + tag + "'", t.pos[0]);
}

std::string serialize(const Transformation& g) {
    std::ostringstream os;
    auto mat = [&](const MatQ& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                os << ' ' << rat_str(m(i, j));
    };
    std::visit(
        [&](const auto& t) {
            using V = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<V, Trans1>) {
                os << "t1 " << rat_str(t.u) << ' ' << rat_str(t.r) << ' ' << rat_str(t.s) << ' '
                   << rat_str(t.t);
            } else if constexpr (std::is_same_v<V, Trans2>) {
                os << "t2 " << rat_str(t.mu) << " / " << rat_str(t.r[0]) << ' ' << rat_str(t.r[1])
                   << ' ' << rat_str(t.r[2]) << " /";
                mat(t.m);
            } else if constexpr (std::is_same_v<V, Trans3>) {
                os << "t3 " << rat_str(t.mu) << " /";
                mat(t.m);
            } else {
                os << "t4";
                mat(t.m2);
                os << " /";
                mat(t.n4);
            }
        },
        g);
    return os.str();
}

Transformation parse_transformation(const std::string& text) {
    Tokens t = tokenize(text);
    if (t.tok.empty())
        throw parse_error("empty transformation", 0);
    std::size_t k = 1;
    auto next_rat = [&]() {
        if (k >= t.tok.size())
            throw parse_error("truncated transformation", text.size());
        Rat r = parse_rat(t.tok[k], t.pos[k]);
        ++k;
        return r;
    };
    auto expect = [&](const std::string& s) {
        if (k >= t.tok.size() || t.tok[k] != s)
            throw parse_error("expected '" + s + "'", k < t.tok.size() ? t.pos[k] : text.size());
        ++k;
    };
    auto mat = [&](int n) {
        MatQ m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = next_rat();
        return m;
    };
    const std::string& tag = t.tok[0];
    if (tag == "t1") {
        Trans1 g;
        g.u = next_rat();
        g.r = next_rat();
        g.s = next_rat();
        g.t = next_rat();
        return g;
    }
    if (tag == "t2") {
        Trans2 g;
        g.mu = next_rat();
        expect("/");
        g.r[0] = next_rat();
        g.r[1] = next_rat();
        g.r[2] = next_rat();
        expect("/");
        g.m = mat(2);
        return g;
    }
    if (tag == "t3") {
        Trans3 g;
        g.mu = next_rat();
        expect("/");
        g.m = mat(3);
        return g;
    }
    if (tag == "t4") {
        Trans4 g;
        g.m2 = mat(2);
        expect("/");
        g.n4 = mat(4);
        return g;
    }
    throw parse_error("unknown transformation tag '" + tag + "'", t.pos[0]);
}

} // namespace g1
