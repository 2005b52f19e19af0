#include "g1/poly.hpp"

namespace g1 {

int Poly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : t_)
        d = std::max(d, m.deg());
    return d;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.t_)
        add_term(c, m);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.t_)
        add_term(-c, m);
    return *this;
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : t_)
        r.t_[m] = -c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : t_)
        for (const auto& [m2, c2] : o.t_) {
            Mono m;
            for (int i = 0; i < kMaxVars; ++i)
                m.e[i] = static_cast<std::uint8_t>(m1.e[i] + m2.e[i]);
            r.add_term(c1 * c2, m);
        }
    return r;
}

Poly Poly::operator*(const Rat& s) const {
    if (s == 0)
        return Poly();
    Poly r;
    for (const auto& [m, c] : t_)
        r.t_[m] = c * s;
    return r;
}

Poly Poly::operator/(const Rat& s) const {
    if (s == 0)
        throw argument_error("poly division by zero scalar");
    return *this * (Rat(1) / s);
}

void Poly::add_term(const Rat& c, const Mono& m) {
    if (c == 0)
        return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0)
            t_.erase(it);
    }
}

Poly Poly::derivative(int var) const {
    Poly r;
    for (const auto& [m, c] : t_) {
        if (m.e[var] == 0)
            continue;
        Mono d = m;
        d.e[var] -= 1;
        r.add_term(c * Rat(static_cast<int>(m.e[var])), d);
    }
    return r;
}

Rat Poly::coeff(const Mono& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Rat(0) : it->second;
}

Poly Poly::subst(const std::vector<Poly>& images) const {
    // Variables beyond images.size() map to themselves; listed images are
    // taken verbatim (a zero image substitutes 0).
    Poly r;
    for (const auto& [m, c] : t_) {
        Poly term(c);
        for (int i = 0; i < kMaxVars && !term.is_zero(); ++i) {
            int e = m.e[i];
            if (e == 0)
                continue;
            const Poly img = static_cast<std::size_t>(i) < images.size() ? images[i] : Poly::var(i);
            for (int k = 0; k < e; ++k)
                term = term * img;
        }
        r += term;
    }
    return r;
}

Rat Poly::eval(const std::vector<Rat>& xs) const {
    Rat r = 0;
    for (const auto& [m, c] : t_) {
        Rat t = c;
        for (int i = 0; i < kMaxVars; ++i)
            for (int k = 0; k < m.e[i]; ++k)
                t *= xs[static_cast<std::size_t>(i)];
        r += t;
    }
    return r;
}

bool Poly::is_integral() const {
    for (const auto& [m, c] : t_)
        if (!is_integer(c))
            return false;
    return true;
}

Rat Poly::content() const {
    if (t_.empty())
        return Rat(0);
    Int g = 0, l = 1;
    for (const auto& [m, c] : t_) {
        g = gcd(g, num(c));
        l = lcm(l, den(c));
    }
    Rat r(abs(g), l);
    r.canonicalize();
    return r;
}

Poly Poly::exact_div(const Poly& d) const {
    if (d.is_zero())
        throw argument_error("exact_div: zero divisor");
    Poly rem = *this, q;
    const auto& dlead = *d.t_.rbegin(); // lex-largest term
    while (!rem.is_zero()) {
        const auto& rlead = *rem.t_.rbegin();
        Mono m;
        for (int i = 0; i < kMaxVars; ++i) {
            if (rlead.first.e[i] < dlead.first.e[i])
                throw invariant_violation_error("exact_div: inexact division");
            m.e[i] = static_cast<std::uint8_t>(rlead.first.e[i] - dlead.first.e[i]);
        }
        Rat c = rlead.second / dlead.second;
        q.add_term(c, m);
        rem -= d * Poly::term(c, m);
    }
    return q;
}

Poly det3(const std::array<Poly, 9>& m) {
    auto at = [&](int i, int j) -> const Poly& { return m[static_cast<std::size_t>(3 * i + j)]; };
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

Poly det4(const std::array<Poly, 16>& m) {
    auto at = [&](int i, int j) -> const Poly& { return m[static_cast<std::size_t>(4 * i + j)]; };
    Poly r;
    int sgn = 1;
    for (int j = 0; j < 4; ++j) {
        std::array<Poly, 9> sub;
        int k = 0;
        for (int i = 1; i < 4; ++i)
            for (int jj = 0; jj < 4; ++jj) {
                if (jj == j)
                    continue;
                sub[static_cast<std::size_t>(k++)] = at(i, jj);
            }
        Poly c = at(0, j) * det3(sub);
        r += (sgn > 0) ? c : -c;
        sgn = -sgn;
    }
    return r;
}

} // namespace g1
