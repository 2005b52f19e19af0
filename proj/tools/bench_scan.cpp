// Benchmark: serial vs OpenMP singular-locus scan over P^2(F_p).
#include <chrono>
#include <cstdio>

#include "g1/scan.hpp"

using namespace g1;

namespace {

double run_once(const Model3& f, const Int& p, ScanImpl impl, long& count) {
    auto t0 = std::chrono::steady_clock::now();
    auto res = singular_points_mod_p(f, p, 2, impl);
    auto t1 = std::chrono::steady_clock::now();
    count = res.count;
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main() {
    // a cuspidal-type cubic: singular exactly at one point, so the scan is
    // exhaustive (the worst case for both implementations)
    Model3 f;
    f.c = {Rat(0), Rat(-1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1), Rat(0), Rat(0)};
    // x z^2 - y^3
    std::printf("%10s %12s %12s %8s %8s\n", "p", "serial[s]", "openmp[s]", "speedup", "count");
    for (long p : {2003L, 5003L, 10007L}) {
        long c1 = 0, c2 = 0;
        double ts = run_once(f, Int(p), ScanImpl::serial, c1);
#ifdef G1_HAVE_OPENMP
        double tp = run_once(f, Int(p), ScanImpl::openmp, c2);
#else
        double tp = run_once(f, Int(p), ScanImpl::serial, c2);
#endif
        if (c1 != c2) {
            std::printf("MISMATCH at p=%ld: %ld vs %ld\n", p, c1, c2);
            return 1;
        }
        std::printf("%10ld %12.4f %12.4f %8.2f %8ld\n", p, ts, tp, ts / (tp > 0 ? tp : 1e-9), c1);
    }
    return 0;
}
