#include "g1/scan.hpp"

#include <algorithm>

#ifdef G1_HAVE_OPENMP
#include <omp.h>
#endif

namespace g1 {

ScanImpl default_scan_impl() {
#ifdef G1_HAVE_OPENMP
    return ScanImpl::openmp;
#else
    return ScanImpl::serial;
#endif
}

namespace {

// Dense coefficient table of a cubic and its partials reduced mod p, using
// machine integers (p < 2^20 so products of three residues fit in 64 bits
// only if p < 2^21; evaluation below keeps every partial product reduced).
struct CubicModP {
    long p;
    // coefficients in the Model3 monomial order
    std::array<long, 10> f;
    std::array<std::array<long, 6>, 3> d; // partials: quadratic forms
                                          // order: x^2, y^2, z^2, xy, xz, yz
};

long lred(long x, long p) {
    long r = x % p;
    return r < 0 ? r + p : r;
}

CubicModP prepare(const Model3& m, long p) {
    CubicModP c;
    c.p = p;
    FpCtx F((Int(p)));
    for (int i = 0; i < 10; ++i)
        c.f[static_cast<std::size_t>(i)] =
            F.reduce_rat(m.c[static_cast<std::size_t>(i)]).get_si();
    // F = c0 x^3 + c1 y^3 + c2 z^3 + c3 x^2y + c4 x^2z + c5 xy^2 + c6 y^2z
    //   + c7 xz^2 + c8 yz^2 + c9 xyz
    const auto& f = c.f;
    // dF/dx = 3c0 x^2 + c3 2xy + c4 2xz + c5 y^2 + c7 z^2 + c9 yz
    c.d[0] = {lred(3 * f[0], p), f[5], f[7], lred(2 * f[3], p), lred(2 * f[4], p), f[9]};
    // dF/dy = c3 x^2 + 3c1 y^2 + c6 2yz + c5 2xy + c8 z^2 + c9 xz
    c.d[1] = {f[3], lred(3 * f[1], p), f[8], lred(2 * f[5], p), f[9], lred(2 * f[6], p)};
    // dF/dz = c4 x^2 + c6 y^2 + 3c2 z^2 + c9 xy + c7 2xz + c8 2yz
    c.d[2] = {f[4], f[6], lred(3 * f[2], p), f[9], lred(2 * f[7], p), lred(2 * f[8], p)};
    return c;
}

bool is_singular_at(const CubicModP& c, long x, long y, long z) {
    long p = c.p;
    long x2 = (x * x) % p, y2 = (y * y) % p, z2 = (z * z) % p;
    long xy = (x * y) % p, xz = (x * z) % p, yz = (y * z) % p;
    const auto& f = c.f;
    long v = (f[0] * x2 % p * x + f[1] * y2 % p * y + f[2] * z2 % p * z) % p;
    v = (v + f[3] * x2 % p * y + f[4] * x2 % p * z + f[5] * y2 % p * x) % p;
    v = (v + f[6] * y2 % p * z + f[7] * z2 % p * x + f[8] * z2 % p * y) % p;
    v = (v + f[9] * xy % p * z) % p;
    if (v % p != 0)
        return false;
    for (const auto& d : c.d) {
        long w = (d[0] * x2 + d[1] * y2 + d[2] * z2) % p;
        w = (w + d[3] * xy + d[4] * xz + d[5] * yz) % p;
        if (w % p != 0)
            return false;
    }
    return true;
}

} // namespace

SingularScanResult singular_points_mod_p(const Model3& m, const Int& p, int max_points,
                                         ScanImpl impl) {
    if (p > (1 << 20))
        throw argument_error("prime too large for degree-3 singular-locus scan");
    long pl = p.get_si();
    CubicModP c = prepare(m, pl);
    SingularScanResult res;
    auto push = [&](long x, long y, long z) {
        ++res.count;
        if (static_cast<int>(res.points.size()) < max_points)
            res.points.push_back({Int(x), Int(y), Int(z)});
    };

    // affine chart (1 : a : b), scanned row by row so early termination keeps
    // the canonical (lexicographic) order of hits
    bool done = false;
    if (impl == ScanImpl::serial
#ifndef G1_HAVE_OPENMP
        || true
#endif
    ) {
        for (long a = 0; a < pl && !done; ++a)
            for (long b = 0; b < pl; ++b) {
                if (is_singular_at(c, 1, a, b)) {
                    push(1, a, b);
                    if (static_cast<int>(res.points.size()) >= max_points) {
                        done = true;
                        break;
                    }
                }
            }
    } else {
#ifdef G1_HAVE_OPENMP
        // process blocks of rows in order; parallel inside a block, then check
        // for early exit so results match the serial scan exactly
        const long block = std::max<long>(256, pl / 8);
        for (long a0 = 0; a0 < pl && !done; a0 += block) {
            long a1 = std::min(pl, a0 + block);
            std::vector<std::array<long, 2>> hits;
#pragma omp parallel
            {
                std::vector<std::array<long, 2>> local;
#pragma omp for schedule(static) nowait
                for (long a = a0; a < a1; ++a)
                    for (long b = 0; b < pl; ++b)
                        if (is_singular_at(c, 1, a, b))
                            local.push_back({a, b});
#pragma omp critical
                hits.insert(hits.end(), local.begin(), local.end());
            }
            std::sort(hits.begin(), hits.end());
            for (const auto& h : hits) {
                push(1, h[0], h[1]);
                if (static_cast<int>(res.points.size()) >= max_points) {
                    done = true;
                    break;
                }
            }
        }
#endif
    }
    // charts (0 : 1 : b) and (0 : 0 : 1); cheap, always serial
    if (!done)
        for (long b = 0; b < pl; ++b) {
            if (is_singular_at(c, 0, 1, b)) {
                push(0, 1, b);
                if (static_cast<int>(res.points.size()) >= max_points) {
                    done = true;
                    break;
                }
            }
        }
    if (!done && is_singular_at(c, 0, 0, 1))
        push(0, 0, 1);
    return res;
}

} // namespace g1
