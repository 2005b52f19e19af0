#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "g1/errors.hpp"

namespace g1 {

using Int = mpz_class;
using Rat = mpq_class;

inline Int num(const Rat& x) { return Int(x.get_num()); }
inline Int den(const Rat& x) { return Int(x.get_den()); }

inline bool is_integer(const Rat& x) { return den(x) == 1; }

Int floordiv(const Int& a, const Int& b);

// Miller-Rabin backed primality (25 rounds; deterministic for all inputs
// arising here in practice).
bool is_probable_prime(const Int& n);

// v_p of a nonzero integer.
long vp_int(const Int& x, const Int& p);

// v_p of a rational; nullopt encodes +infinity (x = 0).
std::optional<long> vp(const Rat& x, const Int& p);

// true iff v_p(x) >= k, with v_p(0) = +infinity.
bool vp_ge(const Rat& x, const Int& p, long k);

// Exact k-th root: r with r^k == x, or nullopt.
std::optional<Int> iroot(const Int& x, unsigned long k);

struct Factorisation {
    std::vector<std::pair<Int, int>> factors; // (prime, exponent), primes ascending
};

// Trial division to 10^6 then Pollard rho (Brent cycle finding).  The budget
// caps rho iterations per cofactor; overrunning it raises factor_budget_error
// naming the unfactored cofactor.
Factorisation factor(const Int& n, unsigned long long budget = 10000000ULL);

unsigned long long factor_budget_from_env();

// Splitmix-based deterministic generator for tests and seeded shuffles.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // uniform in [lo, hi] inclusive
    long range(long lo, long hi);

  private:
    std::uint64_t state_;
};

} // namespace g1
