#include "g1/arith.hpp"

#include <algorithm>
#include <cstdlib>

namespace g1 {

Int floordiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
}

long vp_int(const Int& x, const Int& p) {
    if (x == 0)
        throw argument_error("vp_int: zero argument");
    Int t;
    return static_cast<long>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

std::optional<long> vp(const Rat& x, const Int& p) {
    if (!(p > 1) || !is_probable_prime(p))
        throw argument_error("vp: modulus is not prime");
    if (x == 0)
        return std::nullopt;
    return vp_int(num(x), p) - vp_int(den(x), p);
}

bool vp_ge(const Rat& x, const Int& p, long k) {
    if (x == 0)
        return true;
    return vp_int(num(x), p) - vp_int(den(x), p) >= k;
}

std::optional<Int> iroot(const Int& x, unsigned long k) {
    if (x <= 0 || k < 1)
        throw argument_error("iroot: need x > 0, k >= 1");
    Int r;
    int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    if (!exact)
        return std::nullopt;
    return r;
}

namespace {

Int pollard_brent(const Int& n, unsigned long long budget, unsigned long long& used) {
    // Brent's variant; deterministic constants, retried with increasing c.
    for (Int c = 1; c < 32; ++c) {
        Int y = 2, r = 1, q = 1, g = 1, x, ys;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i)
                y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = std::min(Int(128), Int(r - k));
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * ((x > y) ? x - y : y - x) % n;
                }
                used += mpz_get_ui(lim.get_mpz_t());
                if (used > budget)
                    return 0;
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd((x > ys) ? x - ys : ys - x, n);
                if (++used > budget)
                    return 0;
            }
        }
        if (g != n && g != 1)
            return g;
    }
    return 0;
}

void factor_rec(Int n, std::vector<std::pair<Int, int>>& out, unsigned long long budget,
                unsigned long long& used) {
    if (n == 1)
        return;
    if (is_probable_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    Int d = pollard_brent(n, budget, used);
    if (d == 0)
        throw factor_budget_error("incomplete factorisation, unfactored cofactor " + n.get_str());
    factor_rec(d, out, budget, used);
    factor_rec(n / d, out, budget, used);
}

} // namespace

Factorisation factor(const Int& n, unsigned long long budget) {
    if (n == 0)
        throw argument_error("factor: zero argument");
    Int m = abs(n);
    std::vector<std::pair<Int, int>> fs;
    for (Int p = 2; p * p <= m && p <= 1000000; p == 2 ? p = 3 : p += 2) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            fs.emplace_back(p, e);
        }
    }
    if (m > 1) {
        if (m <= Int(1000000) * Int(1000000) || is_probable_prime(m)) {
            fs.emplace_back(m, 1);
        } else {
            unsigned long long used = 0;
            std::vector<std::pair<Int, int>> rest;
            factor_rec(m, rest, budget, used);
            std::sort(rest.begin(), rest.end());
            for (std::size_t i = 0; i < rest.size();) {
                std::size_t j = i;
                int e = 0;
                while (j < rest.size() && rest[j].first == rest[i].first) {
                    e += rest[j].second;
                    ++j;
                }
                fs.emplace_back(rest[i].first, e);
                i = j;
            }
        }
    }
    Factorisation f;
    f.factors = std::move(fs);
    return f;
}

unsigned long long factor_budget_from_env() {
    if (const char* s = std::getenv("G1_FACTOR_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && v > 0)
            return v;
    }
    return 10000000ULL;
}

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

long Rng::range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace g1
