#include "g1/roots.hpp"

#include <algorithm>
#include <cmath>

#include "g1/errors.hpp"

namespace g1 {

namespace {

using cplx = std::complex<double>;
using qfloat = __float128;

struct qcplx {
    qfloat re, im;
};

qcplx qc(const cplx& z) {
    return {static_cast<qfloat>(z.real()), static_cast<qfloat>(z.imag())};
}
cplx dc(const qcplx& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}
qcplx operator+(const qcplx& a, const qcplx& b) {
    return {a.re + b.re, a.im + b.im};
}
qcplx operator-(const qcplx& a, const qcplx& b) {
    return {a.re - b.re, a.im - b.im};
}
qcplx operator*(const qcplx& a, const qcplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
qcplx operator/(const qcplx& a, const qcplx& b) {
    qfloat d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
double qabs(const qcplx& a) {
    return std::sqrt(static_cast<double>(a.re * a.re + a.im * a.im));
}

cplx horner(const std::vector<cplx>& c, const cplx& x) {
    cplx r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        r = r * x + *it;
    return r;
}

double residual_scale(const std::vector<double>& mags, double ax) {
    double s = 0, xp = 1;
    for (double m : mags) {
        s += m * xp;
        xp *= ax;
    }
    return s;
}

// one Newton pass per root in extended precision
void polish_quad(const std::vector<cplx>& c, std::vector<cplx>& roots) {
    std::vector<qcplx> qcoef;
    qcoef.reserve(c.size());
    for (const auto& z : c)
        qcoef.push_back(qc(z));
    std::vector<qcplx> dcoef;
    for (std::size_t i = 1; i < c.size(); ++i)
        dcoef.push_back(qc(c[i] * static_cast<double>(i)));
    auto qhorner = [](const std::vector<qcplx>& p, const qcplx& x) {
        qcplx r{0, 0};
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            r = r * x + *it;
        return r;
    };
    for (auto& z : roots) {
        qcplx x = qc(z);
        for (int it = 0; it < 4; ++it) {
            qcplx f = qhorner(qcoef, x);
            qcplx df = qhorner(dcoef, x);
            if (qabs(df) == 0)
                break;
            x = x - f / df;
        }
        z = dc(x);
    }
}

std::vector<cplx> aberth(const std::vector<cplx>& coeffs, const RootOptions& opts) {
    int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<cplx> deriv;
    for (int i = 1; i <= n; ++i)
        deriv.push_back(coeffs[static_cast<std::size_t>(i)] * static_cast<double>(i));
    // initial guesses on a perturbed circle (radius from the Cauchy bound)
    double lead = std::abs(coeffs[static_cast<std::size_t>(n)]);
    double radius = 0;
    for (int i = 0; i < n; ++i)
        radius = std::max(radius, std::pow(std::abs(coeffs[static_cast<std::size_t>(i)]) / lead,
                                           1.0 / (n - i)));
    radius = std::max(radius * 0.7 + 0.3, 0.5);
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double ang = 2 * M_PI * i / n + 0.4;
        z[static_cast<std::size_t>(i)] = std::polar(radius * (1.0 + 0.08 * i), ang);
    }
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            cplx zi = z[static_cast<std::size_t>(i)];
            cplx f = horner(coeffs, zi);
            cplx df = horner(deriv, zi);
            cplx newton = (df == cplx(0)) ? cplx(0) : f / df;
            cplx sum = 0;
            for (int j = 0; j < n; ++j)
                if (j != i)
                    sum += cplx(1) / (zi - z[static_cast<std::size_t>(j)]);
            cplx denom = cplx(1) - newton * sum;
            cplx w = (denom == cplx(0)) ? newton : newton / denom;
            z[static_cast<std::size_t>(i)] -= w;
            worst = std::max(worst, std::abs(w) / (1.0 + std::abs(zi)));
        }
        if (worst < 1e-15)
            break;
    }
    return z;
}

void symmetrise_real(std::vector<cplx>& z) {
    // pair roots with conjugates, average; collapse near-real roots
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i])
            continue;
        if (std::abs(z[i].imag()) <= 1e-9 * (1.0 + std::abs(z[i]))) {
            z[i] = cplx(z[i].real(), 0);
            used[i] = true;
            continue;
        }
        std::size_t best = i;
        double bestd = 1e300;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (j == i || used[j])
                continue;
            double d = std::abs(z[j] - std::conj(z[i]));
            if (d < bestd) {
                bestd = d;
                best = j;
            }
        }
        if (best != i && bestd <= 1e-6 * (1.0 + std::abs(z[i]))) {
            cplx w = (z[i] + std::conj(z[best])) / 2.0;
            z[i] = w;
            z[best] = std::conj(w);
            used[i] = used[best] = true;
        } else {
            used[i] = true;
        }
    }
}

std::vector<cplx> roots_impl(const std::vector<double>& dc_in, bool real_input,
                             const RootOptions& opts) {
    std::vector<double> dcoef = dc_in;
    while (!dcoef.empty() && dcoef.back() == 0)
        dcoef.pop_back();
    if (dcoef.size() < 2)
        throw argument_error("poly_roots_complex: degree must be >= 1");
    std::vector<cplx> coeffs(dcoef.begin(), dcoef.end());
    std::vector<cplx> z = aberth(coeffs, opts);
    std::vector<double> mags;
    for (double c : dcoef)
        mags.push_back(std::abs(c));
    bool ok = true;
    for (const auto& r : z)
        if (std::abs(horner(coeffs, r)) > opts.residual_factor * residual_scale(mags, std::abs(r)))
            ok = false;
    if (!ok)
        polish_quad(coeffs, z);
    for (const auto& r : z)
        if (std::abs(horner(coeffs, r)) > opts.residual_factor * residual_scale(mags, std::abs(r)))
            throw numeric_error("poly_roots_complex: residual tolerance not met");
    if (real_input)
        symmetrise_real(z);
    std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

} // namespace

std::vector<std::complex<double>> poly_roots_complex(const std::vector<Rat>& coeffs,
                                                     const RootOptions& opts) {
    if (coeffs.size() < 2 || coeffs.back() == 0)
        throw argument_error("poly_roots_complex: degree >= 1 with nonzero leading coefficient");
    std::vector<double> dc;
    dc.reserve(coeffs.size());
    for (const auto& c : coeffs)
        dc.push_back(c.get_d());
    return roots_impl(dc, true, opts);
}

std::vector<std::complex<double>> poly_roots_complex(const std::vector<double>& coeffs,
                                                     const RootOptions& opts) {
    if (coeffs.size() < 2 || coeffs.back() == 0)
        throw argument_error("poly_roots_complex: degree >= 1 with nonzero leading coefficient");
    return roots_impl(coeffs, true, opts);
}

} // namespace g1
