#include "g1/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "g1/roots.hpp"

namespace g1 {

namespace {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

lcplx to_l(const cplx& z) {
    return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())};
}
cplx to_d(const lcplx& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

std::vector<lcplx> refine_roots(const std::vector<Rat>& coeffs, const std::vector<cplx>& roots) {
    std::vector<long double> c;
    c.reserve(coeffs.size());
    for (const auto& r : coeffs)
        c.push_back(static_cast<long double>(r.get_d()));
    std::vector<long double> d;
    for (std::size_t i = 1; i < c.size(); ++i)
        d.push_back(c[i] * static_cast<long double>(i));
    auto horner = [](const std::vector<long double>& p, const lcplx& x) {
        lcplx r = 0;
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            r = r * x + *it;
        return r;
    };
    std::vector<lcplx> out;
    for (const auto& z0 : roots) {
        lcplx z = to_l(z0);
        for (int i = 0; i < 3; ++i) {
            lcplx f = horner(c, z), df = horner(d, z);
            if (std::abs(df) == 0)
                break;
            z -= f / df;
        }
        out.push_back(z);
    }
    return out;
}

GramMatrix gram2(double g11, double g12, double g22) {
    GramMatrix g;
    g.n = 2;
    g.a = {g11, g12, g12, g22};
    return g;
}

void assert_pd(const GramMatrix& g, const char* who) {
    if (!is_positive_definite(g))
        throw numeric_error(std::string(who) + ": covariant not positive definite");
}

} // namespace

double lll_defect(const GramMatrix& g) {
    // prod sqrt(G_ii) / sqrt(det G)
    int n = g.n;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.at(i, j);
    double det = 1, prod = 1;
    for (int i = 0; i < n; ++i)
        prod *= g.at(i, i);
    // LU for determinant
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k; i < n; ++i)
            if (std::abs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) >
                std::abs(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(k)]))
                piv = i;
        if (piv != k) {
            std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(k)]);
            det = -det;
        }
        det *= m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        for (int i = k + 1; i < n; ++i) {
            double f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] /
                       m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
            for (int j = k; j < n; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
    }
    return std::sqrt(prod / det);
}

GramMatrix covariant2_roots(const std::array<Rat, 5>& f0) {
    InvariantTriple inv = invariants(GenusOneModel(Model2{{Rat(0), Rat(0), Rat(0)}, f0}));
    if (inv.delta == 0)
        throw argument_error("covariant2_roots: singular quartic");
    std::array<Rat, 5> f = f0;
    // ensure nonzero leading coefficient by x <- x + k z
    long shear = 0;
    if (f[0] == 0) {
        Poly F = binary_form(f0);
        for (long k = 1; k <= 4; ++k) {
            Rat lead = F.eval({Rat(1), Rat(k)});
            if (lead != 0) {
                shear = k;
                break;
            }
        }
        if (shear == 0)
            throw invariant_violation_error("covariant2_roots: quartic vanishes at 5 points");
        Trans2 g;
        g.m = MatQ(2, 2);
        g.m(0, 0) = 1;
        g.m(0, 1) = Rat(shear); // row 1 = (1, k): new leading coefficient F(1, k)
        g.m(1, 0) = 0;
        g.m(1, 1) = 1;
        f = apply2(g, Model2{{Rat(0), Rat(0), Rat(0)}, f0}).q;
    }
    std::vector<Rat> coeffs = {f[4], f[3], f[2], f[1], f[0]}; // ascending
    auto roots = refine_roots(coeffs, poly_roots_complex(coeffs));
    // f'(theta)
    std::vector<long double> c;
    for (const auto& r : coeffs)
        c.push_back(static_cast<long double>(r.get_d()));
    auto fprime = [&](const lcplx& x) {
        lcplx r = 0;
        for (std::size_t i = c.size() - 1; i >= 1; --i)
            r = r * x + c[i] * static_cast<long double>(i);
        return r;
    };
    long double g11 = 0, g12 = 0, g22 = 0;
    for (const auto& th : roots) {
        long double w = 1.0L / std::abs(fprime(th));
        g11 += w;
        g12 += -w * th.real();
        g22 += w * std::norm(th);
    }
    GramMatrix g = gram2(static_cast<double>(g11), static_cast<double>(g12),
                         static_cast<double>(g22));
    if (shear != 0) {
        // phi(F o M) = M phi(F) M^T with M = [[1,k],[0,1]], so
        // phi(F) = M^-1 phi' M^-T
        double k = static_cast<double>(shear);
        double a = g.at(0, 0), b = g.at(0, 1), d = g.at(1, 1);
        g = gram2(a - 2 * k * b + k * k * d, b - k * d, d);
    }
    assert_pd(g, "covariant2_roots");
    return g;
}

GramMatrix covariant2_torsion(const std::array<Rat, 5>& f) {
    auto [I, J] = binary_quartic_IJ(f);
    InvariantTriple inv = invariants(GenusOneModel(Model2{{Rat(0), Rat(0), Rat(0)}, f}));
    if (inv.delta == 0)
        throw argument_error("covariant2_torsion: singular quartic");
    std::vector<Rat> r = {J, -3 * I, Rat(0), Rat(1)}; // X^3 - 3 I X + J ascending
    auto phis = refine_roots(r, poly_roots_complex(r));
    const Rat &a = f[0], &b = f[1], &c = f[2], &d = f[3];
    auto alpha = [&](const lcplx& phi) {
        Rat k1 = 8 * a * c - 3 * b * b;
        Rat k2 = 6 * a * d - b * c;
        Rat k3 = 9 * b * d - 4 * c * c;
        lcplx a1 = 4.0L * static_cast<long double>(a.get_d()) * phi -
                   static_cast<long double>(k1.get_d());
        lcplx a2 = static_cast<long double>(b.get_d()) * phi -
                   static_cast<long double>(k2.get_d());
        lcplx a3 = (-2.0L * phi * phi + 2.0L * static_cast<long double>(c.get_d()) * phi -
                    static_cast<long double>(k3.get_d())) /
                   3.0L;
        return std::array<lcplx, 3>{a1, a2, a3};
    };
    if (inv.delta > 0) {
        // three real roots; exactly one with det A > 0
        int chosen = -1;
        for (std::size_t i = 0; i < phis.size(); ++i) {
            auto al = alpha(lcplx(phis[i].real(), 0));
            long double det = (al[0] * al[2] - al[1] * al[1]).real();
            if (det > 0) {
                if (chosen >= 0)
                    throw invariant_violation_error(
                        "covariant2_torsion: several roots with positive determinant");
                chosen = static_cast<int>(i);
            }
        }
        if (chosen < 0)
            throw invariant_violation_error("covariant2_torsion: no root with det A > 0");
        auto al = alpha(lcplx(phis[static_cast<std::size_t>(chosen)].real(), 0));
        long double sign = al[0].real() > 0 ? 1 : -1;
        GramMatrix g = gram2(static_cast<double>(sign * al[0].real()),
                             static_cast<double>(sign * al[1].real()),
                             static_cast<double>(sign * al[2].real()));
        assert_pd(g, "covariant2_torsion");
        return g;
    }
    // delta < 0: one real and two conjugate roots.  A_phi at the real root
    // may be degenerate (alpha_1 = 0 there is possible), so the average uses
    // only the complex pair: M_T = W A_phi for a complex root phi (valid,
    // since alpha_1(phi) and alpha_1(conj phi) are conjugate and cannot both
    // vanish), and M_S = M_T conj(M_T) for the real 2-torsion point.
    lcplx phi;
    bool found = false;
    for (const auto& p : phis)
        if (std::abs(p.imag()) > 1e-12 * (1 + std::abs(p))) {
            phi = p;
            found = true;
            break;
        }
    if (!found)
        throw invariant_violation_error("covariant2_torsion: expected complex resolvent root");
    auto al = alpha(phi);
    if (std::abs(al[0]) == 0 && std::abs(al[1]) == 0 && std::abs(al[2]) == 0)
        throw invariant_violation_error("covariant2_torsion: degenerate A_phi");
    // M_T = W A, W = [[0,-1],[1,0]]
    std::array<lcplx, 4> mt = {-al[1], -al[2], al[0], al[1]};
    auto mul22 = [](const std::array<lcplx, 4>& x, const std::array<lcplx, 4>& y) {
        return std::array<lcplx, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                    x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    };
    std::array<lcplx, 4> mtc = {std::conj(mt[0]), std::conj(mt[1]), std::conj(mt[2]),
                                std::conj(mt[3])};
    std::array<lcplx, 4> ms = mul22(mt, mtc);
    auto add_term = [&](std::array<lcplx, 4>& acc, const std::array<lcplx, 4>& m, long double w) {
        // w * conj(m)^t m
        acc[0] += w * (std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2]);
        acc[1] += w * (std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3]);
        acc[3] += w * (std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3]);
        acc[2] = std::conj(acc[1]);
    };
    auto det22 = [](const std::array<lcplx, 4>& m) { return m[0] * m[3] - m[1] * m[2]; };
    std::array<lcplx, 4> acc = {lcplx(1, 0), lcplx(0, 0), lcplx(0, 0), lcplx(1, 0)};
    long double wt = std::abs(det22(mt));
    if (wt == 0)
        throw invariant_violation_error("covariant2_torsion: degenerate A_phi");
    add_term(acc, mt, 1.0L / wt);
    // conj(M_T) is the action of the conjugate point
    add_term(acc, mtc, 1.0L / wt);
    long double ws = std::abs(det22(ms));
    if (ws == 0)
        throw invariant_violation_error("covariant2_torsion: degenerate M_S");
    add_term(acc, ms, 1.0L / ws);
    GramMatrix g = gram2(static_cast<double>(acc[0].real()), static_cast<double>(acc[1].real()),
                         static_cast<double>(acc[3].real()));
    assert_pd(g, "covariant2_torsion");
    return g;
}

namespace {

// 3x3 complex matrices as row-major arrays
using CMat3 = std::array<lcplx, 9>;

CMat3 cmul(const CMat3& a, const CMat3& b) {
    CMat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                r[static_cast<std::size_t>(3 * i + j)] +=
                    a[static_cast<std::size_t>(3 * i + k)] * b[static_cast<std::size_t>(3 * k + j)];
    return r;
}

lcplx cdet(const CMat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

CMat3 cinv(const CMat3& m) {
    lcplx d = cdet(m);
    if (std::abs(d) == 0)
        throw numeric_error("torsion matrix not invertible");
    CMat3 r;
    r[0] = (m[4] * m[8] - m[5] * m[7]) / d;
    r[1] = (m[2] * m[7] - m[1] * m[8]) / d;
    r[2] = (m[1] * m[5] - m[2] * m[4]) / d;
    r[3] = (m[5] * m[6] - m[3] * m[8]) / d;
    r[4] = (m[0] * m[8] - m[2] * m[6]) / d;
    r[5] = (m[2] * m[3] - m[0] * m[5]) / d;
    r[6] = (m[3] * m[7] - m[4] * m[6]) / d;
    r[7] = (m[1] * m[6] - m[0] * m[7]) / d;
    r[8] = (m[0] * m[4] - m[1] * m[3]) / d;
    return r;
}

double cnorm(const CMat3& m) {
    double s = 0;
    for (const auto& v : m)
        s = std::max(s, static_cast<double>(std::abs(v)));
    return s;
}

// coefficients of a complex ternary cubic in the Model3 monomial order
struct CCubic {
    std::array<lcplx, 10> c;
};

CCubic combine(const Model3& f, const Model3& h, const lcplx& cf, const lcplx& ch) {
    CCubic t;
    for (int i = 0; i < 10; ++i)
        t.c[static_cast<std::size_t>(i)] =
            cf * static_cast<long double>(f.c[static_cast<std::size_t>(i)].get_d()) +
            ch * static_cast<long double>(h.c[static_cast<std::size_t>(i)].get_d());
    return t;
}

// M_T = r A + 2 y_T B from the labelled coefficients of the syzygetic cubic.
CMat3 torsion_matrix_formula(const CCubic& t, const lcplx& y_t) {
    // labels: T = r x^3 + s1 x^2 y + s2 x y^2 + s3 y^3 + t1 x^2 z + t2 x z^2
    //           + t3 z^3 + u xyz + v y^2 z + w y z^2
    // Model3 order: x^3, y^3, z^3, x^2y, x^2z, xy^2, y^2z, xz^2, yz^2, xyz
    const lcplx r = t.c[0], s3 = t.c[1], t3 = t.c[2], s1 = t.c[3], t1 = t.c[4], s2 = t.c[5],
                v = t.c[6], t2 = t.c[7], w = t.c[8], u = t.c[9];
    CMat3 A;
    A[0] = -12.0L * r * s2 * w - 36.0L * r * s3 * t2 + 12.0L * r * u * v + 4.0L * s1 * s1 * w +
           4.0L * s1 * s2 * t2 - 8.0L * s1 * t1 * v - s1 * u * u + 12.0L * s3 * t1 * t1;
    A[1] = -54.0L * r * s3 * w + 18.0L * r * v * v + 6.0L * s1 * s2 * w - 3.0L * s1 * u * v -
           6.0L * s2 * t1 * v + 9.0L * s3 * t1 * u;
    A[2] = -81.0L * r * s3 * t3 + 9.0L * r * v * w + 9.0L * s1 * s2 * t3 - 3.0L * s1 * t2 * v -
           3.0L * s2 * t1 * w + 9.0L * s3 * t1 * t2;
    A[3] = 36.0L * r * s2 * t2 - 9.0L * r * u * u - 12.0L * s1 * s1 * t2 + 12.0L * s1 * t1 * u -
           12.0L * s2 * t1 * t1;
    A[4] = 24.0L * r * s2 * w + 18.0L * r * s3 * t2 - 15.0L * r * u * v - 8.0L * s1 * s1 * w -
           2.0L * s1 * s2 * t2 + 10.0L * s1 * t1 * v + 2.0L * s1 * u * u - 3.0L * s2 * t1 * u -
           6.0L * s3 * t1 * t1;
    A[5] = 54.0L * r * s2 * t3 - 9.0L * r * u * w - 18.0L * s1 * s1 * t3 + 6.0L * s1 * t1 * w +
           3.0L * s1 * t2 * u - 6.0L * s2 * t1 * t2;
    A[6] = 0;
    A[7] = -18.0L * r * s2 * v + 27.0L * r * s3 * u + 6.0L * s1 * s1 * v - 3.0L * s1 * s2 * u -
           18.0L * s1 * s3 * t1 + 6.0L * s2 * s2 * t1;
    A[8] = -12.0L * r * s2 * w + 18.0L * r * s3 * t2 + 3.0L * r * u * v + 4.0L * s1 * s1 * w -
           2.0L * s1 * s2 * t2 - 2.0L * s1 * t1 * v - s1 * u * u + 3.0L * s2 * t1 * u -
           6.0L * s3 * t1 * t1;
    CMat3 B1;
    B1[0] = s1 * u - 2.0L * s2 * t1;
    B1[1] = s1 * v - 3.0L * s3 * t1;
    B1[2] = s1 * w - 4.0L * s2 * t2 - t1 * v + u * u;
    B1[3] = -3.0L * r * u + 2.0L * s1 * t1;
    B1[4] = -3.0L * r * v + s2 * t1;
    B1[5] = -3.0L * r * w + s1 * t2;
    B1[6] = 6.0L * r * s2 - 2.0L * s1 * s1;
    B1[7] = 9.0L * r * s3 - s1 * s2;
    B1[8] = 3.0L * r * v - s1 * u + s2 * t1;
    CMat3 B;
    for (int i = 0; i < 9; ++i)
        B[static_cast<std::size_t>(i)] = r * B1[static_cast<std::size_t>(i)];
    B[2] += s1 * s1 * t2 - s1 * t1 * u + s2 * t1 * t1;
    CMat3 M;
    for (int i = 0; i < 9; ++i)
        M[static_cast<std::size_t>(i)] =
            r * A[static_cast<std::size_t>(i)] + 2.0L * y_t * B[static_cast<std::size_t>(i)];
    return M;
}

CMat3 normalise_det1(const CMat3& m) {
    lcplx d = cdet(m);
    if (std::abs(d) == 0)
        throw numeric_error("torsion matrix has zero determinant");
    lcplx s = std::exp(std::log(d) / 3.0L);
    CMat3 r;
    for (int i = 0; i < 9; ++i)
        r[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] / s;
    return r;
}

} // namespace

std::vector<TorsionMatrix> torsion_matrices3(const Model3& m0, std::uint64_t seed) {
    InvariantTriple inv = invariants(GenusOneModel(m0));
    if (inv.delta == 0)
        throw singular_model_error();
    // a coordinate shuffle is applied when the syzygetic cubic vanishes at
    // (1:0:0); drawn from the seeded generator and undone on output
    Rng rng(seed * 0x9e3779b9U + 17);
    Model3 m = m0;
    MatQ shuffle = MatQ::identity(3);
    bool shuffled = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Model3 h = hessian(m);
        // E[3] from the 3-division polynomial of y^2 = x^3 - 27 c4 x - 54 c6:
        // 3 x^4 - 6 (27 c4) x^2 - 12 (54 c6) x - (27 c4)^2
        Rat A = -27 * inv.c4, B = -54 * inv.c6;
        std::vector<Rat> psi3 = {-(A * A), 12 * B, 6 * A, Rat(0), Rat(3)};
        auto xs = refine_roots(psi3, poly_roots_complex(psi3));
        bool ok = true;
        std::vector<TorsionMatrix> out;
        for (const auto& xt : xs) {
            lcplx rhs = xt * xt * xt + static_cast<long double>(A.get_d()) * xt +
                        static_cast<long double>(B.get_d());
            lcplx yt = std::sqrt(rhs);
            for (int sign = 0; sign < 2; ++sign) {
                lcplx y = sign ? -yt : yt;
                // syzygetic cubic 2 x_T F - 3 H
                CCubic t = combine(m, h, 2.0L * xt, lcplx(-3.0L, 0));
                double scale = 0;
                for (const auto& c : t.c)
                    scale = std::max(scale, static_cast<double>(std::abs(c)));
                if (std::abs(t.c[0]) <= 1e-9 * scale) {
                    ok = false;
                    break;
                }
                CMat3 M = torsion_matrix_formula(t, y);
                double mscale = cnorm(M);
                // the printed formula may give zero; fall back to (M_{-T})^-1
                CCubic tm = t;
                CMat3 Mm = torsion_matrix_formula(tm, -y);
                if (mscale <= 1e-9 * std::max(1.0, cnorm(Mm))) {
                    if (cnorm(Mm) == 0)
                        throw internal_error("torsion matrices vanish for T and -T");
                    M = cinv(normalise_det1(Mm));
                } else {
                    M = normalise_det1(M);
                }
                TorsionMatrix tm_out;
                tm_out.x_t = to_d(xt);
                tm_out.y_t = to_d(y);
                tm_out.det_m = to_d(cdet(M));
                tm_out.m.resize(9);
                for (int i = 0; i < 9; ++i)
                    tm_out.m[static_cast<std::size_t>(i)] = to_d(M[static_cast<std::size_t>(i)]);
                out.push_back(std::move(tm_out));
            }
            if (!ok)
                break;
        }
        if (ok) {
            if (shuffled) {
                // undo: M_orig = S^T M S^-T
                MatQ st = shuffle.transpose();
                MatQ sti = st.inverse();
                for (auto& tm : out) {
                    CMat3 M;
                    for (int i = 0; i < 9; ++i)
                        M[static_cast<std::size_t>(i)] = to_l(tm.m[static_cast<std::size_t>(i)]);
                    CMat3 S{}, Si{};
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) {
                            S[static_cast<std::size_t>(3 * i + j)] =
                                static_cast<long double>(st(i, j).get_d());
                            Si[static_cast<std::size_t>(3 * i + j)] =
                                static_cast<long double>(sti(i, j).get_d());
                        }
                    CMat3 R = cmul(cmul(S, M), Si);
                    for (int i = 0; i < 9; ++i)
                        tm.m[static_cast<std::size_t>(i)] = to_d(R[static_cast<std::size_t>(i)]);
                    tm.det_m = to_d(cdet(R));
                }
            }
            return out;
        }
        // random small unimodular shuffle
        MatQ s = MatQ::identity(3);
        int i = static_cast<int>(rng.range(0, 2));
        int j = static_cast<int>(rng.range(0, 2));
        if (i == j)
            j = (j + 1) % 3;
        s(i, j) = Rat(rng.range(1, 2));
        Trans3 g{Rat(1), s};
        m = apply3(g, m);
        shuffle = shuffled ? MatQ(s * shuffle) : s;
        shuffled = true;
    }
    throw numeric_error("torsion_matrices3: could not avoid vanishing corner");
}

GramMatrix covariant3(const Model3& m, std::uint64_t seed) {
    auto ts = torsion_matrices3(m, seed);
    // identity contributes I; weight |det M|^(-2/3) with det normalised to 1
    std::array<long double, 9> acc{};
    for (int i = 0; i < 3; ++i)
        acc[static_cast<std::size_t>(4 * i)] = 1.0L;
    for (const auto& t : ts) {
        double w = std::pow(std::abs(t.det_m), -2.0 / 3.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                lcplx s = 0;
                for (int k = 0; k < 3; ++k)
                    s += std::conj(to_l(t.m[static_cast<std::size_t>(3 * k + i)])) *
                         to_l(t.m[static_cast<std::size_t>(3 * k + j)]);
                acc[static_cast<std::size_t>(3 * i + j)] +=
                    static_cast<long double>(w) * s.real();
            }
    }
    GramMatrix g;
    g.n = 3;
    g.a.resize(9);
    for (int i = 0; i < 9; ++i)
        g.a[static_cast<std::size_t>(i)] = static_cast<double>(acc[static_cast<std::size_t>(i)]);
    // symmetrise tiny asymmetries from the complex sums
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double v = 0.5 * (g.at(i, j) + g.at(j, i));
            g.at(i, j) = g.at(j, i) = v;
        }
    assert_pd(g, "covariant3");
    return g;
}

namespace {

MatQ adjugate4(const MatQ& m) {
    MatQ a(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            // cofactor C_ji
            std::array<Rat, 9> sub;
            int k = 0;
            for (int r = 0; r < 4; ++r) {
                if (r == j)
                    continue;
                for (int c = 0; c < 4; ++c) {
                    if (c == i)
                        continue;
                    sub[static_cast<std::size_t>(k++)] = m(r, c);
                }
            }
            MatQ s3(3, 3);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    s3(r, c) = sub[static_cast<std::size_t>(3 * r + c)];
            Rat cof = s3.det();
            if ((i + j) % 2 == 1)
                cof = -cof;
            a(i, j) = cof;
        }
    return a;
}

} // namespace

GramMatrix covariant4(const Model4& m0, std::uint64_t seed) {
    InvariantTriple inv = invariants(GenusOneModel(m0));
    if (inv.delta == 0)
        throw singular_model_error();
    Rng rng(seed * 0x51b5ad12U + 3);
    Model4 m = m0;
    // require nonzero a and e of F = det(Ax + Bz); a pencil change does not
    // move the curve, so nothing to undo
    std::array<Rat, 5> f = pencil_quartic(m);
    for (int attempt = 0; attempt < 16 && (f[0] == 0 || f[4] == 0); ++attempt) {
        MatQ p(2, 2);
        p(0, 0) = Rat(rng.range(1, 3));
        p(0, 1) = Rat(rng.range(0, 2));
        p(1, 0) = Rat(rng.range(0, 2));
        p(1, 1) = Rat(rng.range(1, 3));
        if (p.det() == 0)
            continue;
        Trans4 g;
        g.m2 = p;
        m = apply4(g, m);
        f = pencil_quartic(m);
    }
    if (f[0] == 0 || f[4] == 0)
        throw numeric_error("covariant4: could not normalise the pencil");
    MatQ A = quadric_matrix(m.q1), B = quadric_matrix(m.q2);
    MatQ adjA = adjugate4(A), adjB = adjugate4(B);
    // adj(adjA x + adjB z) = a^2 A x^3 + a M1 x^2 z + e M2 x z^2 + e^2 B z^3
    std::array<Poly, 16> pencil;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            pencil[static_cast<std::size_t>(4 * i + j)] =
                Poly::var(0) * adjA(i, j) + Poly::var(1) * adjB(i, j);
    // adjugate of the 4x4 polynomial matrix
    auto minor3 = [&](int skip_r, int skip_c) {
        std::array<Poly, 9> sub;
        int k = 0;
        for (int r = 0; r < 4; ++r) {
            if (r == skip_r)
                continue;
            for (int c = 0; c < 4; ++c) {
                if (c == skip_c)
                    continue;
                sub[static_cast<std::size_t>(k++)] = pencil[static_cast<std::size_t>(4 * r + c)];
            }
        }
        return det3(sub);
    };
    MatQ M1(4, 4), M2(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Poly cof = minor3(j, i);
            if ((i + j) % 2 == 1)
                cof = -cof;
            // cubic in (x, z): check x^3 and z^3 coefficients, read x^2z, xz^2
            Mono mx3;
            mx3.e[0] = 3;
            Mono mz3;
            mz3.e[1] = 3;
            Mono mx2z;
            mx2z.e[0] = 2;
            mx2z.e[1] = 1;
            Mono mxz2;
            mxz2.e[0] = 1;
            mxz2.e[1] = 2;
            if (cof.coeff(mx3) != f[0] * f[0] * A(i, j) || cof.coeff(mz3) != f[4] * f[4] * B(i, j))
                throw invariant_violation_error("covariant4: adjugate identity failed");
            M1(i, j) = cof.coeff(mx2z) / f[0];
            M2(i, j) = cof.coeff(mxz2) / f[4];
        }
    // roots of f(X) = F(X,1)
    std::vector<Rat> coeffs = {f[4], f[3], f[2], f[1], f[0]};
    auto roots = refine_roots(coeffs, poly_roots_complex(coeffs));
    std::vector<long double> cl;
    for (const auto& r : coeffs)
        cl.push_back(static_cast<long double>(r.get_d()));
    auto fprime = [&](const lcplx& x) {
        lcplx r = 0;
        for (std::size_t i = cl.size() - 1; i >= 1; --i)
            r = r * x + cl[i] * static_cast<long double>(i);
        return r;
    };
    long double a = static_cast<long double>(f[0].get_d());
    long double e = static_cast<long double>(f[4].get_d());
    std::array<long double, 16> acc{};
    for (const auto& th : roots) {
        // S = e/theta A + M1 + theta M2 + a theta^2 B
        std::array<lcplx, 16> S;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                S[static_cast<std::size_t>(4 * i + j)] =
                    (e / th) * static_cast<long double>(A(i, j).get_d()) +
                    static_cast<long double>(M1(i, j).get_d()) +
                    th * static_cast<long double>(M2(i, j).get_d()) +
                    a * th * th * static_cast<long double>(B(i, j).get_d());
        // rank-1 check: singular values of S from the real embedding of
        // H = S^dagger S (eigenvalues of [[Re H, -Im H], [Im H, Re H]])
        std::array<long double, 64> Hr{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                lcplx s = 0;
                for (int k = 0; k < 4; ++k)
                    s += std::conj(S[static_cast<std::size_t>(4 * k + i)]) *
                         S[static_cast<std::size_t>(4 * k + j)];
                Hr[static_cast<std::size_t>(8 * i + j)] = s.real();
                Hr[static_cast<std::size_t>(8 * (i + 4) + (j + 4))] = s.real();
                Hr[static_cast<std::size_t>(8 * i + (j + 4))] = -s.imag();
                Hr[static_cast<std::size_t>(8 * (i + 4) + j)] = s.imag();
            }
        for (int sweep = 0; sweep < 30; ++sweep)
            for (int p = 0; p < 8; ++p)
                for (int q = p + 1; q < 8; ++q) {
                    long double hpq = Hr[static_cast<std::size_t>(8 * p + q)];
                    if (std::abs(hpq) < 1e-36L)
                        continue;
                    long double tau = (Hr[static_cast<std::size_t>(8 * q + q)] -
                                       Hr[static_cast<std::size_t>(8 * p + p)]) /
                                      (2 * hpq);
                    long double t = (tau >= 0 ? 1.0L : -1.0L) /
                                    (std::abs(tau) + std::sqrt(1 + tau * tau));
                    long double cth = 1 / std::sqrt(1 + t * t);
                    long double sth = t * cth;
                    for (int k = 0; k < 8; ++k) {
                        long double hpk = Hr[static_cast<std::size_t>(8 * p + k)];
                        long double hqk = Hr[static_cast<std::size_t>(8 * q + k)];
                        Hr[static_cast<std::size_t>(8 * p + k)] = cth * hpk - sth * hqk;
                        Hr[static_cast<std::size_t>(8 * q + k)] = sth * hpk + cth * hqk;
                    }
                    for (int k = 0; k < 8; ++k) {
                        long double hkp = Hr[static_cast<std::size_t>(8 * k + p)];
                        long double hkq = Hr[static_cast<std::size_t>(8 * k + q)];
                        Hr[static_cast<std::size_t>(8 * k + p)] = cth * hkp - sth * hkq;
                        Hr[static_cast<std::size_t>(8 * k + q)] = sth * hkp + cth * hkq;
                    }
                }
        std::array<long double, 8> ev;
        for (int i = 0; i < 8; ++i)
            ev[static_cast<std::size_t>(i)] = Hr[static_cast<std::size_t>(8 * i + i)];
        std::sort(ev.begin(), ev.end(), std::greater<>());
        // eigenvalues come in pairs; positions 0-1 are sigma1^2, 2-3 sigma2^2
        long double s1 = std::sqrt(std::max(ev[0], 0.0L));
        long double s2 = std::sqrt(std::max(ev[2], 0.0L));
        if (s1 <= 0 || s2 > 1e-6L * s1)
            throw numeric_error("covariant4: rank-1 check failed (sigma2/sigma1 = " +
                                std::to_string(static_cast<double>(s2 / (s1 > 0 ? s1 : 1))) + ")");
        // pivot: largest |S_kk|, lowest index on ties
        int piv = 0;
        long double best = -1;
        for (int k = 0; k < 4; ++k) {
            long double v = std::abs(S[static_cast<std::size_t>(4 * k + k)]);
            if (v > best) {
                best = v;
                piv = k;
            }
        }
        lcplx alpha = S[static_cast<std::size_t>(4 * piv + piv)];
        if (std::abs(alpha) == 0)
            throw numeric_error("covariant4: zero pivot in rank-1 factor");
        std::array<lcplx, 4> g;
        for (int k = 0; k < 4; ++k)
            g[static_cast<std::size_t>(k)] = S[static_cast<std::size_t>(4 * k + piv)] / alpha;
        long double w = std::abs(alpha) / std::sqrt(std::abs(fprime(th)));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                acc[static_cast<std::size_t>(4 * i + j)] +=
                    w * (std::conj(g[static_cast<std::size_t>(i)]) *
                         g[static_cast<std::size_t>(j)])
                            .real();
    }
    GramMatrix g;
    g.n = 4;
    g.a.resize(16);
    for (int i = 0; i < 16; ++i)
        g.a[static_cast<std::size_t>(i)] = static_cast<double>(acc[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double v = 0.5 * (g.at(i, j) + g.at(j, i));
            g.at(i, j) = g.at(j, i) = v;
        }
    assert_pd(g, "covariant4");
    return g;
}

GramMatrix covariant_of(const GenusOneModel& m, std::uint64_t seed) {
    switch (m.index()) {
    case 1: {
        const Model2& g = std::get<Model2>(m);
        Poly F = binary_form(g.p) * binary_form(g.p) + binary_form(g.q) * Rat(4);
        return covariant2_roots(binary_quartic_coeffs(F));
    }
    case 2: return covariant3(std::get<Model3>(m), seed);
    case 3: return covariant4(std::get<Model4>(m), seed);
    default: throw argument_error("covariant_of: degree must be 2, 3 or 4");
    }
}

std::pair<Model2, Trans2> normalise_cross_terms(const Model2& m) {
    if (!is_integral(GenusOneModel(m)))
        throw argument_error("normalise_cross_terms: model not integral");
    Trans2 g;
    for (int i = 0; i < 3; ++i)
        g.r[static_cast<std::size_t>(i)] = -Rat(floordiv(num(m.p[static_cast<std::size_t>(i)]), 2));
    Model2 out = apply2(g, m);
    for (const auto& c : out.p)
        if (!(c == 0 || c == 1))
            throw invariant_violation_error("normalise_cross_terms: residue not in {0,1}");
    if (!is_integral(GenusOneModel(out)))
        throw invariant_violation_error("normalise_cross_terms: output not integral");
    return {out, g};
}

ReduceResult reduce_model(const GenusOneModel& m, std::uint64_t seed, double delta) {
    InvariantTriple inv = invariants(m);
    if (inv.delta == 0)
        throw singular_model_error();
    ReduceResult res;
    switch (m.index()) {
    case 1: {
        const Model2& g = std::get<Model2>(m);
        Poly F = binary_form(g.p) * binary_form(g.p) + binary_form(g.q) * Rat(4);
        GramMatrix cov = covariant2_roots(binary_quartic_coeffs(F));
        LLLResult lll = lll_gram(cov, delta);
        Trans2 gu;
        gu.m = lll.u.transpose().to_q();
        Model2 red = apply2(gu, g);
        auto [normed, shift] = normalise_cross_terms(red);
        res.model = normed;
        res.t = compose(Transformation(shift), Transformation(gu));
        break;
    }
    case 2: {
        const Model3& g = std::get<Model3>(m);
        GramMatrix cov = covariant3(g, seed);
        LLLResult lll = lll_gram(cov, delta);
        Trans3 gu{Rat(1), lll.u.transpose().to_q()};
        Model3 red = apply3(gu, g);
        Transformation t(gu);
        // sign normalisation
        for (const auto& c : red.c) {
            if (c > 0)
                break;
            if (c < 0) {
                Trans3 neg{Rat(-1), MatQ::identity(3)};
                red = apply3(neg, red);
                t = compose(Transformation(neg), t);
                break;
            }
        }
        res.model = red;
        res.t = t;
        break;
    }
    case 3: {
        const Model4& g = std::get<Model4>(m);
        // pencil pre-step: reduce det(Ax + Bz) as a binary quartic
        std::array<Rat, 5> f = pencil_quartic(g);
        Model4 cur = g;
        Transformation t = identity_transformation(4);
        if (invariants(GenusOneModel(Model2{{Rat(0), Rat(0), Rat(0)}, f})).delta != 0) {
            GramMatrix cov2 = covariant2_roots(f);
            LLLResult l2 = lll_gram(cov2, delta);
            Trans4 gp;
            gp.m2 = l2.u.transpose().to_q();
            cur = apply4(gp, cur);
            t = compose(Transformation(gp), t);
        }
        GramMatrix cov = covariant4(cur, seed);
        LLLResult lll = lll_gram(cov, delta);
        Trans4 gu;
        gu.n4 = lll.u.transpose().to_q();
        cur = apply4(gu, cur);
        t = compose(Transformation(gu), t);
        // per-quadric sign normalisation, leaving the pair order unchanged
        auto first_neg = [](const Quadric4& q) {
            for (const auto& c : q.c) {
                if (c > 0)
                    return false;
                if (c < 0)
                    return true;
            }
            return false;
        };
        Trans4 sg;
        sg.m2 = MatQ::diag({Rat(first_neg(cur.q1) ? -1 : 1), Rat(first_neg(cur.q2) ? -1 : 1)});
        if (!(sg == Trans4{})) {
            cur = apply4(sg, cur);
            t = compose(Transformation(sg), t);
        }
        res.model = cur;
        res.t = t;
        break;
    }
    default: throw argument_error("reduce_model: degree must be 2, 3 or 4");
    }
    InvariantTriple after = invariants(res.model);
    if (after.c4 != inv.c4 || after.c6 != inv.c6 || after.delta != inv.delta)
        throw invariant_violation_error("reduce_model: invariants changed");
    return res;
}

} // namespace g1
