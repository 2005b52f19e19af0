#include "g1/gf.hpp"

#include <algorithm>

namespace g1 {

FpCtx::FpCtx(Int prime) : p(std::move(prime)) {
    if (!(p > 1) || !is_probable_prime(p))
        throw argument_error("FpCtx: modulus is not prime");
}

Int FpCtx::reduce(const Int& x) const {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    return r;
}

Int FpCtx::reduce_rat(const Rat& x) const {
    Int d = reduce(den(x));
    if (d == 0)
        throw argument_error("FpCtx::reduce: denominator divisible by p");
    return mul(reduce(num(x)), inv(d));
}

Int FpCtx::inv(const Int& a) const {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), reduce(a).get_mpz_t(), p.get_mpz_t()))
        throw argument_error("FpCtx::inv: not invertible");
    return r;
}

Int FpCtx::pow(const Int& a, const Int& e) const {
    Int r;
    mpz_powm(r.get_mpz_t(), reduce(a).get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
}

std::optional<Int> FpCtx::sqrt(const Int& a0) const {
    Int a = reduce(a0);
    if (a == 0)
        return Int(0);
    if (p == 2)
        return a; // squaring is the identity on F_2
    if (pow(a, (p - 1) / 2) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return pow(a, (p + 1) / 4);
    // Tonelli-Shanks
    Int q = p - 1;
    unsigned long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (pow(z, (p - 1) / 2) != p - 1)
        ++z;
    Int m(static_cast<long>(s)), c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
    while (t != 1) {
        Int i = 0, tt = t;
        while (tt != 1) {
            tt = mul(tt, tt);
            ++i;
            if (i == m)
                return std::nullopt;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j)
            b = mul(b, b);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    return r;
}

int rref(FpMat& m, const FpCtx& F) {
    if (m.empty())
        return 0;
    int rows = static_cast<int>(m.size());
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (m[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(m[rank], m[piv]);
        Int inv = F.inv(m[rank][col]);
        for (int j = col; j < cols; ++j)
            m[rank][j] = F.mul(m[rank][j], inv);
        for (int i = 0; i < rows; ++i) {
            if (i == rank || m[i][col] == 0)
                continue;
            Int f = m[i][col];
            for (int j = col; j < cols; ++j)
                m[i][j] = F.sub(m[i][j], F.mul(f, m[rank][j]));
        }
        ++rank;
    }
    return rank;
}

std::vector<FpVec> gf_kernel(FpMat m, const FpCtx& F) {
    if (m.empty())
        return {};
    int cols = static_cast<int>(m[0].size());
    int rank = rref(m, F);
    std::vector<int> pivot_col(static_cast<std::size_t>(rank));
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int i = 0, c = 0; i < rank; ++i) {
        while (c < cols && m[i][c] == 0)
            ++c;
        pivot_col[i] = c;
        is_pivot[c] = true;
    }
    std::vector<FpVec> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free])
            continue;
        FpVec v(static_cast<std::size_t>(cols), Int(0));
        v[static_cast<std::size_t>(free)] = 1;
        for (int i = 0; i < rank; ++i)
            v[static_cast<std::size_t>(pivot_col[i])] = F.neg(m[i][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// --- univariate ---------------------------------------------------------------

FpPoly fp_trim(FpPoly f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
    return f;
}

int fp_deg(const FpPoly& f) {
    return static_cast<int>(f.size()) - 1;
}

FpPoly fp_derivative(const FpPoly& f, const FpCtx& F) {
    FpPoly d;
    for (std::size_t i = 1; i < f.size(); ++i)
        d.push_back(F.mul(f[i], Int(static_cast<long>(i))));
    return fp_trim(std::move(d));
}

FpPoly fp_mod(FpPoly a, const FpPoly& b, const FpCtx& F) {
    if (b.empty())
        throw argument_error("fp_mod: zero divisor");
    Int lead_inv = F.inv(b.back());
    while (a.size() >= b.size()) {
        Int f = F.mul(a.back(), lead_inv);
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[off + i] = F.sub(a[off + i], F.mul(f, b[i]));
        a = fp_trim(std::move(a));
        if (a.empty())
            break;
    }
    return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, const FpCtx& F) {
    a = fp_trim(std::move(a));
    b = fp_trim(std::move(b));
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Int inv = F.inv(a.back());
        for (auto& c : a)
            c = F.mul(c, inv);
    }
    return a;
}

Int fp_eval(const FpPoly& f, const Int& x, const FpCtx& F) {
    Int r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it)
        r = F.add(F.mul(r, x), *it);
    return r;
}

// --- binary forms ---------------------------------------------------------------

Int binform_eval(const BinFormFp& f, const P1Point& pt, const FpCtx& F) {
    int d = f.deg();
    Int r = 0;
    Int xp = 1;
    std::vector<Int> xpow(static_cast<std::size_t>(d) + 1), zpow(static_cast<std::size_t>(d) + 1);
    xpow[0] = zpow[0] = 1;
    for (int i = 1; i <= d; ++i) {
        xpow[static_cast<std::size_t>(i)] = F.mul(xpow[static_cast<std::size_t>(i - 1)], pt.x);
        zpow[static_cast<std::size_t>(i)] = F.mul(zpow[static_cast<std::size_t>(i - 1)], pt.z);
    }
    for (int i = 0; i <= d; ++i)
        r = F.add(r, F.mul(f.c[static_cast<std::size_t>(i)],
                           F.mul(xpow[static_cast<std::size_t>(d - i)],
                                 zpow[static_cast<std::size_t>(i)])));
    return r;
}

namespace {

P1Point normalise(P1Point pt, const FpCtx& F) {
    pt.x = F.reduce(pt.x);
    pt.z = F.reduce(pt.z);
    if (pt.x != 0) {
        Int i = F.inv(pt.x);
        return {Int(1), F.mul(pt.z, i)};
    }
    if (pt.z == 0)
        throw argument_error("P1 point (0:0)");
    return {Int(0), Int(1)};
}

// Dehomogenise towards f(X) = F(X, 1).
FpPoly dehom(const BinFormFp& f) {
    FpPoly g(f.c.size());
    int d = f.deg();
    for (int i = 0; i <= d; ++i)
        g[static_cast<std::size_t>(d - i)] = f.c[static_cast<std::size_t>(i)];
    return fp_trim(std::move(g));
}

} // namespace

int multiplicity_at(const BinFormFp& f, const P1Point& pt0, const FpCtx& F) {
    P1Point pt = normalise(pt0, F);
    int d = f.deg();
    if (pt.x == 1 && pt.z == 0) {
        // multiplicity of (1:0) = number of leading z-coefficients vanishing
        // from the z^d end... (1:0) is a root iff coefficient of x^d is 0;
        // multiplicity = index of first nonzero coefficient.
        int m = 0;
        while (m <= d && f.c[static_cast<std::size_t>(m)] == 0)
            ++m;
        return m;
    }
    // finite root theta = x/z
    FpPoly g = dehom(f);
    if (g.empty())
        return d + 1; // zero form: conventionally everything
    Int theta = F.mul(pt.x, F.inv(pt.z));
    int mult = 0;
    FpPoly cur = g;
    while (!cur.empty() && fp_eval(cur, theta, F) == 0) {
        ++mult;
        // synthetic division by (X - theta)
        FpPoly q(cur.size() - 1);
        Int carry = 0;
        for (std::size_t i = cur.size(); i-- > 1;) {
            carry = F.add(cur[i], F.mul(carry, theta));
            q[i - 1] = carry;
        }
        cur = fp_trim(std::move(q));
    }
    return mult;
}

namespace {

// roots in F_p of a polynomial of degree <= 2
std::vector<Int> small_roots(const FpPoly& h, const FpCtx& F) {
    std::vector<Int> out;
    int d = fp_deg(h);
    if (d == 1) {
        out.push_back(F.neg(F.mul(h[0], F.inv(h[1]))));
    } else if (d == 2) {
        if (F.p == 2) {
            for (long t = 0; t < 2; ++t)
                if (fp_eval(h, Int(t), F) == 0)
                    out.push_back(Int(t));
        } else {
            Int disc = F.sub(F.mul(h[1], h[1]), F.mul(Int(4), F.mul(h[2], h[0])));
            auto sd = F.sqrt(disc);
            if (sd) {
                Int inv2a = F.inv(F.mul(Int(2), h[2]));
                out.push_back(F.mul(F.sub(*sd, h[1]), inv2a));
                if (disc != 0)
                    out.push_back(F.mul(F.sub(F.neg(*sd), h[1]), inv2a));
            }
        }
    }
    return out;
}

// Candidates for multiple roots of h: gcd-with-derivative chain, unwrapping
// p-th powers (h = g(X^p) = g(X)^p over F_p) when the derivative vanishes.
// The unwrap can only trigger for p <= deg h.
std::vector<Int> multiple_root_candidates(FpPoly h, const FpCtx& F) {
    unsigned long pl =
        mpz_fits_ulong_p(F.p.get_mpz_t()) ? F.p.get_ui() : static_cast<unsigned long>(-1);
    bool first = true;
    while (fp_deg(h) > 2) {
        FpPoly d = fp_derivative(h, F);
        if (d.empty()) {
            FpPoly g;
            for (std::size_t i = 0; i < h.size(); i += pl)
                g.push_back(h[i]);
            h = fp_trim(std::move(g));
            first = false; // every root already has multiplicity >= p
            continue;
        }
        h = fp_gcd(h, d, F);
        first = false;
        if (h.empty() || fp_deg(h) == 0)
            return {};
    }
    if (first && fp_deg(h) == 2) {
        // still the original polynomial; restrict to its repeated part
        FpPoly d = fp_derivative(h, F);
        if (!d.empty())
            h = fp_gcd(h, d, F);
        // (derivative zero for p = 2 means both roots repeated; keep h)
    }
    return small_roots(h, F);
}

} // namespace

std::optional<P1Point> unique_root_with_multiplicity(const BinFormFp& f, int m, const FpCtx& F) {
    int d = f.deg();
    std::optional<P1Point> found;
    auto consider = [&](const P1Point& pt) {
        if (multiplicity_at(f, pt, F) < m)
            return;
        P1Point n = normalise(pt, F);
        if (found && !(*found == n))
            throw invariant_violation_error("several roots of required multiplicity");
        found = n;
    };
    int mi = 0;
    while (mi <= d && f.c[static_cast<std::size_t>(mi)] == 0)
        ++mi;
    if (mi >= m)
        consider(P1Point{Int(1), Int(0)});
    FpPoly g = dehom(f);
    if (!g.empty() && fp_deg(g) >= 2) {
        if (m <= 1)
            throw argument_error("unique_root_with_multiplicity: m must be >= 2");
        for (const auto& theta : multiple_root_candidates(g, F))
            consider(P1Point{theta, Int(1)});
    }
    return found;
}

BinFormFp binform_gcd(const BinFormFp& f, const BinFormFp& g, const FpCtx& F) {
    int mf = 0, dg_f = f.deg();
    while (mf <= dg_f && f.c[static_cast<std::size_t>(mf)] == 0)
        ++mf;
    int mg = 0, dg_g = g.deg();
    while (mg <= dg_g && g.c[static_cast<std::size_t>(mg)] == 0)
        ++mg;
    bool fzero = mf > dg_f, gzero = mg > dg_g;
    if (fzero && gzero)
        throw argument_error("binform_gcd: both forms zero");
    if (fzero)
        return g;
    if (gzero)
        return f;
    int minf = std::min(mf, mg); // shared multiplicity at (1:0)
    FpPoly h = fp_gcd(dehom(f), dehom(g), F);
    int e = fp_deg(h);
    BinFormFp out;
    out.c.assign(static_cast<std::size_t>(e + minf) + 1, Int(0));
    for (int i = 0; i <= e; ++i)
        out.c[static_cast<std::size_t>(e - i)] = h[static_cast<std::size_t>(i)];
    // shift by z^minf: coefficients of x^(e-i) z^(i+minf)
    if (minf > 0) {
        std::vector<Int> shifted(out.c.size(), Int(0));
        for (int i = 0; i <= e; ++i)
            shifted[static_cast<std::size_t>(i + minf)] = out.c[static_cast<std::size_t>(i)];
        out.c = std::move(shifted);
    }
    return out;
}

std::optional<P1Point> single_projective_root(const BinFormFp& f, const FpCtx& F) {
    // The unique projective root of a form that is (a scalar times) a power
    // of one linear form; nullopt if the form has several distinct roots or
    // none over F_p.
    int d = f.deg();
    int mi = 0;
    while (mi <= d && f.c[static_cast<std::size_t>(mi)] == 0)
        ++mi;
    if (mi > d)
        throw argument_error("single_projective_root: zero form");
    if (mi == d)
        return P1Point{Int(1), Int(0)};
    if (mi > 0)
        return std::nullopt; // root at infinity plus finite part
    FpPoly h = dehom(f);
    unsigned long pl =
        mpz_fits_ulong_p(F.p.get_mpz_t()) ? F.p.get_ui() : static_cast<unsigned long>(-1);
    while (fp_deg(h) > 1) {
        FpPoly dd = fp_derivative(h, F);
        if (dd.empty()) {
            FpPoly g2;
            for (std::size_t i = 0; i < h.size(); i += pl)
                g2.push_back(h[i]);
            h = fp_trim(std::move(g2));
            continue;
        }
        FpPoly s = fp_gcd(h, dd, F);
        if (s.empty() || fp_deg(s) == 0)
            break;
        h = s;
    }
    if (fp_deg(h) == 1) {
        Int theta = F.neg(F.mul(h[0], F.inv(h[1])));
        if (multiplicity_at(f, {theta, Int(1)}, F) == d)
            return normalise({theta, Int(1)}, F);
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<P1Point> common_roots_p1(const BinFormFp& f, const BinFormFp& g, const FpCtx& F) {
    std::vector<P1Point> out;
    // infinity
    if (multiplicity_at(f, {Int(1), Int(0)}, F) > 0 && multiplicity_at(g, {Int(1), Int(0)}, F) > 0)
        out.push_back(P1Point{Int(1), Int(0)});
    FpPoly a = dehom(f), b = dehom(g);
    if (a.empty() && b.empty())
        throw argument_error("common_roots_p1: both forms zero");
    FpPoly h = a.empty() ? b : (b.empty() ? a : fp_gcd(a, b, F));
    if (h.empty())
        throw argument_error("common_roots_p1: zero gcd");
    // roots of h of degree <= 2 over F_p
    if (fp_deg(h) == 1) {
        out.push_back(normalise({F.neg(F.mul(h[0], F.inv(h[1]))), Int(1)}, F));
    } else if (fp_deg(h) == 2) {
        if (F.p == 2) {
            for (long t = 0; t < 2; ++t)
                if (fp_eval(h, Int(t), F) == 0)
                    out.push_back(normalise({Int(t), Int(1)}, F));
        } else {
            Int a2 = h[2], b1 = h[1], c0 = h[0];
            Int disc = F.sub(F.mul(b1, b1), F.mul(Int(4), F.mul(a2, c0)));
            auto sd = F.sqrt(disc);
            if (sd) {
                Int inv2a = F.inv(F.mul(Int(2), a2));
                out.push_back(normalise({F.mul(F.sub(*sd, b1), inv2a), Int(1)}, F));
                if (disc != 0)
                    out.push_back(
                        normalise({F.mul(F.sub(F.neg(*sd), b1), inv2a), Int(1)}, F));
            }
        }
    }
    return out;
}

Int resultant22(const BinFormFp& f, const BinFormFp& g, const FpCtx& F) {
    if (f.deg() != 2 || g.deg() != 2)
        throw argument_error("resultant22: need binary quadratics");
    const Int &a = f.c[0], &b = f.c[1], &c = f.c[2];
    const Int &d = g.c[0], &e = g.c[1], &h = g.c[2];
    // Res of binary quadratic forms: (ah - cd)^2 - (ae - bd)(bh - ce)
    Int t1 = F.sub(F.mul(a, h), F.mul(c, d));
    Int t2 = F.sub(F.mul(a, e), F.mul(b, d));
    Int t3 = F.sub(F.mul(b, h), F.mul(c, e));
    return F.sub(F.mul(t1, t1), F.mul(t2, t3));
}

// --- quadrics --------------------------------------------------------------------

Int& FpQuad::at(int i, int j) {
    if (i > j)
        std::swap(i, j);
    return c[static_cast<std::size_t>(i * nvars - i * (i - 1) / 2 + (j - i))];
}

const Int& FpQuad::at(int i, int j) const {
    int ii = i, jj = j;
    if (ii > jj)
        std::swap(ii, jj);
    return c[static_cast<std::size_t>(ii * nvars - ii * (ii - 1) / 2 + (jj - ii))];
}

FpQuad fp_quad_from_poly(const Poly& q, int nvars, const FpCtx& F) {
    FpQuad out;
    out.nvars = nvars;
    out.c.assign(static_cast<std::size_t>(nvars * (nvars + 1) / 2), Int(0));
    for (const auto& [m, coef] : q.terms()) {
        int i = -1, j = -1;
        for (int v = 0; v < kMaxVars; ++v) {
            for (int k = 0; k < m.e[v]; ++k) {
                if (i < 0)
                    i = v;
                else if (j < 0)
                    j = v;
                else
                    throw argument_error("fp_quad_from_poly: not a quadric");
            }
        }
        if (j < 0)
            throw argument_error("fp_quad_from_poly: not homogeneous quadratic");
        out.at(i, j) = F.add(out.at(i, j), F.reduce_rat(coef));
    }
    return out;
}

Int fp_quad_eval(const FpQuad& q, const FpVec& v, const FpCtx& F) {
    Int r = 0;
    for (int i = 0; i < q.nvars; ++i)
        for (int j = i; j < q.nvars; ++j)
            r = F.add(r, F.mul(q.at(i, j),
                               F.mul(v[static_cast<std::size_t>(i)],
                                     v[static_cast<std::size_t>(j)])));
    return r;
}

std::vector<FpVec> fp_quad_kernel(const FpQuad& q, const FpCtx& F) {
    int n = q.nvars;
    if (F.p != 2) {
        FpMat m(static_cast<std::size_t>(n), FpVec(static_cast<std::size_t>(n), Int(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (i == j) ? F.mul(Int(2), q.at(i, i)) : F.reduce(q.at(std::min(i, j), std::max(i, j)));
        return gf_kernel(std::move(m), F);
    }
    // p = 2: rows are the partial derivatives dQ/dx_i = sum_{j != i} c_ij x_j.
    FpMat m(static_cast<std::size_t>(n), FpVec(static_cast<std::size_t>(n), Int(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = F.reduce(q.at(i, j));
    auto w = gf_kernel(std::move(m), F);
    // restrict Q to W; there it equals the square of a linear form whose zero
    // set is the kernel.
    std::vector<Int> vals;
    vals.reserve(w.size());
    for (const auto& v : w)
        vals.push_back(fp_quad_eval(q, v, F)); // in F_2, Q restricted is linear in the lambda's
    FpMat lin(1, FpVec(w.size(), Int(0)));
    for (std::size_t i = 0; i < w.size(); ++i)
        lin[0][i] = vals[i];
    auto lam = gf_kernel(std::move(lin), F);
    std::vector<FpVec> out;
    for (const auto& l : lam) {
        FpVec v(static_cast<std::size_t>(n), Int(0));
        for (std::size_t i = 0; i < w.size(); ++i)
            if (l[i] != 0)
                for (int j = 0; j < n; ++j)
                    v[static_cast<std::size_t>(j)] =
                        F.add(v[static_cast<std::size_t>(j)], w[i][static_cast<std::size_t>(j)]);
        out.push_back(std::move(v));
    }
    return out;
}

int fp_quad_rank(const FpQuad& q, const FpCtx& F) {
    return q.nvars - static_cast<int>(fp_quad_kernel(q, F).size());
}

namespace {

// complete a set of independent vectors mod p to a basis of F_p^n
FpMat complete_basis(std::vector<FpVec> vs, int n, const FpCtx& F) {
    FpMat rows = vs;
    for (int e = 0; e < n && static_cast<int>(rows.size()) < n; ++e) {
        FpVec cand(static_cast<std::size_t>(n), Int(0));
        cand[static_cast<std::size_t>(e)] = 1;
        FpMat test = rows;
        test.push_back(cand);
        FpMat copy = test;
        if (rref(copy, F) == static_cast<int>(test.size()))
            rows = std::move(test);
    }
    if (static_cast<int>(rows.size()) != n)
        throw invariant_violation_error("complete_basis failed");
    return rows;
}

} // namespace

std::optional<std::pair<FpVec, FpVec>> fp_quad_split(const FpQuad& q, const FpCtx& F) {
    int n = q.nvars;
    auto ker = fp_quad_kernel(q, F);
    int rank = n - static_cast<int>(ker.size());
    if (rank > 2 || rank == 0)
        return std::nullopt;
    // basis: kernel last, complement first
    FpMat basis = complete_basis({}, n, F);
    if (!ker.empty()) {
        FpMat rows = ker;
        basis = complete_basis(rows, n, F);
        // order: complement vectors are those appended after kernel; rotate so
        // complement comes first
        FpMat reordered(basis.begin() + static_cast<long>(ker.size()), basis.end());
        reordered.insert(reordered.end(), basis.begin(), basis.begin() + static_cast<long>(ker.size()));
        basis = std::move(reordered);
    }
    int m = rank; // dimension of complement
    // Gram of Q restricted to complement basis b_0..b_{m-1}:
    // Q(sum t_i b_i) = sum_i Q(b_i) t_i^2 + sum_{i<j} B(b_i,b_j) t_i t_j
    auto polar = [&](const FpVec& u, const FpVec& v) {
        // B(u,v) = Q(u+v) - Q(u) - Q(v)
        FpVec s(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            s[i] = F.add(u[i], v[i]);
        return F.sub(F.sub(fp_quad_eval(q, s, F), fp_quad_eval(q, u, F)), fp_quad_eval(q, v, F));
    };
    std::vector<Int> lin1(static_cast<std::size_t>(m), Int(0)), lin2(static_cast<std::size_t>(m), Int(0));
    if (m == 1) {
        // Q restricted to the complement is a t^2 = (a t)(t).
        lin1[0] = fp_quad_eval(q, basis[0], F);
        lin2[0] = 1;
    } else {
        Int a = fp_quad_eval(q, basis[0], F);
        Int b = polar(basis[0], basis[1]);
        Int c = fp_quad_eval(q, basis[1], F);
        // factor a t0^2 + b t0 t1 + c t1^2 over F_p
        if (a == 0) {
            // t1 (b t0 + c t1)
            lin1[1] = 1;
            lin2[0] = b;
            lin2[1] = c;
        } else if (F.p == 2) {
            if (b == 0) {
                auto sa = F.sqrt(a);
                auto sc = F.sqrt(c);
                lin1[0] = *sa;
                lin1[1] = *sc;
                lin2 = lin1;
            } else {
                // a t0^2 + t0 t1 + c t1^2 (b = 1): roots over F_2 exist iff
                // a = 0 or c = 0 or a + b + c = 0.
                if (c == 0) {
                    lin1[0] = 1; // t0 (a t0 + b t1)
                    lin2[0] = a;
                    lin2[1] = b;
                } else if (F.add(F.add(a, b), c) == 0) {
                    // root t0 = t1: factor (t0 + t1)(a t0 + c t1)
                    lin1[0] = 1;
                    lin1[1] = 1;
                    lin2[0] = a;
                    lin2[1] = c;
                } else {
                    return std::nullopt;
                }
            }
        } else {
            Int disc = F.sub(F.mul(b, b), F.mul(Int(4), F.mul(a, c)));
            auto sd = F.sqrt(disc);
            if (!sd)
                return std::nullopt;
            // a(t0 - r1 t1)(t0 - r2 t1) with r_i = (-b +- sd)/(2a)
            Int inv2a = F.inv(F.mul(Int(2), a));
            Int r1 = F.mul(F.sub(*sd, b), inv2a);
            Int r2 = F.mul(F.sub(F.neg(*sd), b), inv2a);
            lin1[0] = 1;
            lin1[1] = F.neg(r1);
            lin2[0] = a;
            lin2[1] = F.mul(a, F.neg(r2));
        }
    }
    // express linear forms in the original coordinates: t_i are coordinates
    // w.r.t. basis rows; linear form L(t) = sum l_i t_i corresponds to the
    // covector l^T C where C maps x to t: C = (basis rows as matrix)^{-T}...
    // Simpler: the linear form in x is determined by its values on the basis:
    // L(b_i) = l_i for complement, 0 on kernel.  Solve covector u with
    // u . b_i = l_i.
    auto solve_covector = [&](const std::vector<Int>& l) {
        FpMat m2(static_cast<std::size_t>(n), FpVec(static_cast<std::size_t>(n + 1), Int(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                m2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            m2[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] =
                (i < m) ? l[static_cast<std::size_t>(i)] : Int(0);
        }
        rref(m2, F);
        FpVec u(static_cast<std::size_t>(n), Int(0));
        for (int i = 0; i < n; ++i) {
            int c0 = 0;
            while (c0 < n && m2[static_cast<std::size_t>(i)][static_cast<std::size_t>(c0)] == 0)
                ++c0;
            if (c0 < n)
                u[static_cast<std::size_t>(c0)] =
                    m2[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
        }
        return u;
    };
    return std::make_pair(solve_covector(lin1), solve_covector(lin2));
}

// --- SL_n(Z) lifts -----------------------------------------------------------------

namespace {

// W v = gcd * e1 by integer row operations; returns W (det +-1) and its
// inverse accumulated alongside.
void gcd_reduce(std::vector<Int>& v, MatZ& winv) {
    int n = static_cast<int>(v.size());
    // eliminate entries from the bottom up into v[0]
    for (int i = n - 1; i >= 1; --i) {
        if (v[static_cast<std::size_t>(i)] == 0)
            continue;
        Int a = v[0], b = v[static_cast<std::size_t>(i)];
        Int g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        // rows: r0' = x r0 + y ri ; ri' = -(b/g) r0 + (a/g) ri  (det 1)
        Int bg = b / g, ag = a / g;
        v[0] = g;
        v[static_cast<std::size_t>(i)] = 0;
        // winv tracks the inverse: columns transform contragrediently:
        // c0' = ag c0 + bg ci ; ci' = -y c0 + x ci
        for (int r = 0; r < n; ++r) {
            Int c0 = winv(r, 0), ci = winv(r, i);
            winv(r, 0) = ag * c0 + bg * ci;
            winv(r, i) = -y * c0 + x * ci;
        }
    }
}

} // namespace

MatZ sl_lift(const FpVec& target, int n, const FpCtx& F) {
    std::vector<Int> v(static_cast<std::size_t>(n));
    bool all_zero = true;
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = F.reduce(target[static_cast<std::size_t>(i)]);
        if (v[static_cast<std::size_t>(i)] != 0)
            all_zero = false;
    }
    if (all_zero)
        throw argument_error("sl_lift: target is zero mod p");
    // make primitive
    Int g = 0;
    for (const auto& c : v)
        g = gcd(g, c);
    for (auto& c : v)
        c /= g;
    MatZ u = MatZ::identity(n);
    std::vector<Int> w = v;
    gcd_reduce(w, u);
    if (w[0] < 0)
        throw internal_error("sl_lift: negative gcd");
    // u now satisfies: u * e1-ish... by construction u's columns were updated
    // so that u * (reduced coordinate vector) = original v, i.e. column 0 of
    // u equals v / w[0].
    // normalise trailing columns: reduce against column 0 for smaller entries
    for (int j = 1; j < n; ++j) {
        // pick pivot = first nonzero entry of column 0
        int piv = 0;
        while (piv < n && u(piv, 0) == 0)
            ++piv;
        if (piv >= n || u(piv, 0) == 0)
            break;
        Int q = floordiv(u(piv, j), u(piv, 0));
        if (q != 0)
            for (int r = 0; r < n; ++r)
                u(r, j) -= q * u(r, 0);
    }
    // in-op postcondition: det exactly 1, image correct
    if (u.det() != 1)
        throw invariant_violation_error("sl_lift: determinant != 1");
    // column 0 congruent to target projectively: v was primitive lift
    for (int i = 0; i < n; ++i)
        if (F.reduce(u(i, 0) - v[static_cast<std::size_t>(i)]) != 0)
            throw invariant_violation_error("sl_lift: wrong image mod p");
    return u;
}

MatZ sl_lift_subspace(const std::vector<FpVec>& basis, int n, const FpCtx& F) {
    if (basis.empty())
        throw argument_error("sl_lift_subspace: empty basis");
    // Lift the first vector, transform the rest into the new coordinates,
    // recurse on the trailing (n-1)-block.
    MatZ u = sl_lift(basis[0], n, F);
    if (basis.size() == 1)
        return u;
    // express remaining vectors in new coordinates: solve u * y = v mod p
    MatQ uq = u.to_q();
    MatQ uinv = uq.inverse();
    std::vector<FpVec> rest;
    for (std::size_t k = 1; k < basis.size(); ++k) {
        FpVec y(static_cast<std::size_t>(n), Int(0));
        for (int i = 0; i < n; ++i) {
            Rat acc = 0;
            for (int j = 0; j < n; ++j)
                acc += uinv(i, j) * Rat(basis[k][static_cast<std::size_t>(j)]);
            y[static_cast<std::size_t>(i)] = F.reduce_rat(acc);
        }
        // drop first coordinate (already spanned)
        FpVec tail(y.begin() + 1, y.end());
        bool nz = false;
        for (const auto& c : tail)
            if (c != 0)
                nz = true;
        if (!nz)
            throw argument_error("sl_lift_subspace: dependent basis");
        rest.push_back(tail);
    }
    MatZ sub = sl_lift_subspace(rest, n - 1, F);
    MatZ ext = MatZ::identity(n);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j)
            ext(i + 1, j + 1) = sub(i, j);
    return u * ext;
}

} // namespace g1
