#pragma once
#include <vector>

#include "g1/gf.hpp"
#include "g1/models.hpp"

namespace g1 {

enum class ScanImpl { serial, openmp };

// Default implementation: OpenMP when compiled in, else serial.
ScanImpl default_scan_impl();

// Singular locus of a ternary cubic mod p: points of P^2(F_p) where F and all
// three partials vanish.  Scans representatives (1:a:b), (0:1:b), (0:0:1) in
// that order and returns the first `max_points` hits in canonical order plus
// the total count seen so far (the scan stops early once max_points are
// found, so `count` is then a lower bound).  p is capped at 2^20.
struct SingularScanResult {
    std::vector<std::array<Int, 3>> points;
    long count = 0;
};

SingularScanResult singular_points_mod_p(const Model3& f, const Int& p, int max_points,
                                         ScanImpl impl);

} // namespace g1
