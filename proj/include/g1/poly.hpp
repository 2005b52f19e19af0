#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "g1/arith.hpp"
#include "g1/matq.hpp"

namespace g1 {

// Exponent vector for up to kMaxVars variables, lex-ordered.
constexpr int kMaxVars = 14;

struct Mono {
    std::array<std::uint8_t, kMaxVars> e{};
    auto operator<=>(const Mono&) const = default;
    int deg() const {
        int d = 0;
        for (auto v : e)
            d += v;
        return d;
    }
};

// Sparse multivariate polynomial over Q.  This backs both the model algebra
// (forms in x,y,z,t = variables 0..3) and the one-off symbolic expansion of
// the degree-3 invariant tables (model coefficients as variables 3..12).
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rat& c) {
        if (c != 0)
            t_[Mono{}] = c;
    }
    static Poly var(int i, int deg = 1) {
        Poly p;
        Mono m;
        m.e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(deg);
        p.t_[m] = 1;
        return p;
    }
    static Poly term(const Rat& c, const Mono& m) {
        Poly p;
        if (c != 0)
            p.t_[m] = c;
        return p;
    }

    const std::map<Mono, Rat>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int total_degree() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& s) const;
    Poly operator/(const Rat& s) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    bool operator==(const Poly& o) const = default;

    Poly derivative(int var) const;
    Rat coeff(const Mono& m) const;
    // Substitute images[i] for variable i (identity when images[i] is unset).
    Poly subst(const std::vector<Poly>& images) const;
    Rat eval(const std::vector<Rat>& xs) const;
    // All coefficients integral?
    bool is_integral() const;
    // gcd of numerators over lcm of denominators (positive); 0 poly -> 0.
    Rat content() const;
    // Exact division by a single divisor; throws invariant_violation_error if
    // the division leaves a remainder.
    Poly exact_div(const Poly& d) const;

    void add_term(const Rat& c, const Mono& m);

  private:
    std::map<Mono, Rat> t_;
};

Poly det3(const std::array<Poly, 9>& m);
Poly det4(const std::array<Poly, 16>& m);

} // namespace g1
