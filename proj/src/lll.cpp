#include "g1/lll.hpp"

#include <cmath>

namespace g1 {

GramMatrix GramMatrix::identity(int n) {
    GramMatrix g;
    g.n = n;
    g.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        g.at(i, i) = 1.0;
    return g;
}

bool is_positive_definite(const GramMatrix& g) {
    int n = g.n;
    double scale = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            scale = std::max(scale, std::abs(g.at(i, j)));
    if (scale == 0)
        return false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(g.at(i, j) - g.at(j, i)) > 1e-10 * scale)
                return false;
    // Cholesky
    std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g.at(i, j);
            for (int k = 0; k < j; ++k)
                s -= l[static_cast<std::size_t>(i * n + k)] * l[static_cast<std::size_t>(j * n + k)];
            if (i == j) {
                if (s <= 0)
                    return false;
                l[static_cast<std::size_t>(i * n + i)] = std::sqrt(s);
            } else {
                l[static_cast<std::size_t>(i * n + j)] = s / l[static_cast<std::size_t>(j * n + j)];
            }
        }
    }
    return true;
}

namespace {

// Gram-Schmidt data recomputed exactly from the current integer Gram.
struct Gso {
    std::vector<Rat> B;              // squared norms of b_i^*
    std::vector<std::vector<Rat>> mu; // mu[i][j], j < i
};

Gso gso_from_gram(const std::vector<std::vector<Int>>& g) {
    int n = static_cast<int>(g.size());
    Gso s;
    s.B.assign(static_cast<std::size_t>(n), Rat(0));
    s.mu.assign(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
    // r[i][j] = <b_i, b_j^*>
    std::vector<std::vector<Rat>> r(static_cast<std::size_t>(n),
                                    std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            Rat v = Rat(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            for (int k = 0; k < j; ++k)
                v -= s.mu[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                     r[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            if (j < i) {
                if (s.B[static_cast<std::size_t>(j)] == 0)
                    throw argument_error("lll_gram: Gram matrix not positive definite");
                s.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    v / s.B[static_cast<std::size_t>(j)];
            } else {
                s.B[static_cast<std::size_t>(i)] = v;
                if (v <= 0)
                    throw argument_error("lll_gram: Gram matrix not positive definite");
            }
        }
    }
    return s;
}

Int round_rat(const Rat& x) {
    // nearest integer, ties toward -inf offsets are irrelevant for LLL
    Int n2 = 2 * num(x) + den(x);
    Int d2 = 2 * den(x);
    return floordiv(n2, d2);
}

void gram_colrow_addmul(std::vector<std::vector<Int>>& g, int dst, int src, const Int& q) {
    int n = static_cast<int>(g.size());
    // b_dst += q * b_src  => G updates on row and column dst
    for (int j = 0; j < n; ++j)
        g[static_cast<std::size_t>(dst)][static_cast<std::size_t>(j)] +=
            q * g[static_cast<std::size_t>(src)][static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(dst)] +=
            q * g[static_cast<std::size_t>(i)][static_cast<std::size_t>(src)];
}

void gram_swap(std::vector<std::vector<Int>>& g, int i, int j) {
    int n = static_cast<int>(g.size());
    std::swap(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
    for (int r = 0; r < n; ++r)
        std::swap(g[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                  g[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
}

} // namespace

MatZ lll_gram_exact(std::vector<std::vector<Int>> g, const Rat& delta) {
    int n = static_cast<int>(g.size());
    MatZ u = MatZ::identity(n);
    int k = 1;
    int guard = 0;
    while (k < n) {
        if (++guard > 100000)
            throw internal_error("lll_gram: iteration guard exceeded");
        Gso s = gso_from_gram(g);
        // size-reduce b_k against b_{k-1}..b_0
        for (int j = k - 1; j >= 0; --j) {
            Int q = round_rat(s.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
            if (q != 0) {
                gram_colrow_addmul(g, k, j, -q);
                for (int r = 0; r < n; ++r)
                    u(r, k) -= q * u(r, j);
                s = gso_from_gram(g);
            }
        }
        // Lovasz condition
        Rat lhs = s.B[static_cast<std::size_t>(k)];
        Rat mu = s.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(k - 1)];
        Rat rhs = (delta - mu * mu) * s.B[static_cast<std::size_t>(k - 1)];
        if (lhs >= rhs) {
            ++k;
        } else {
            gram_swap(g, k, k - 1);
            for (int r = 0; r < n; ++r)
                std::swap(u(r, k), u(r, k - 1));
            k = std::max(k - 1, 1);
        }
    }
    return u;
}

LLLResult lll_gram(const GramMatrix& g, double delta) {
    if (g.n < 2 || g.n > 4)
        throw argument_error("lll_gram: dimension must be 2..4");
    if (!(delta > 0.25 && delta < 1.0))
        throw argument_error("lll_gram: delta out of range");
    if (!is_positive_definite(g))
        throw argument_error("lll_gram: Gram matrix not positive definite");
    int n = g.n;
    // scale to integers: relative scale 10^24 against the largest entry
    double mx = 0;
    for (double v : g.a)
        mx = std::max(mx, std::abs(v));
    std::vector<std::vector<Int>> gi(static_cast<std::size_t>(n),
                                     std::vector<Int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            // mirror the upper triangle so rounding keeps exact symmetry
            double v = g.at(i, j) / mx;
            Rat r(v);
            Rat scaled = r * Rat(Int("1000000000000000000000000"));
            Int e = round_rat(scaled);
            gi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
            gi[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
        }
    long num_delta = std::lround(delta * 10000.0);
    Rat dexact(num_delta, 10000);
    dexact.canonicalize();
    MatZ u = lll_gram_exact(gi, dexact);
    LLLResult res;
    res.u = u;
    res.g.n = n;
    res.g.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    // u^T G u on the original doubles
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s += u(a, i).get_d() * g.at(a, b) * u(b, j).get_d();
            res.g.at(i, j) = s;
        }
    return res;
}

} // namespace g1
