// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code.  Run via ctest or directly; exits nonzero on any failure.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cstdio>

#include "g1/minimise.hpp"
#include "g1/reduce.hpp"
#include "test_util.hpp"

using namespace g1;
using namespace g1::testutil;

namespace {

struct CriterionReporter : doctest::IReporter {
    const doctest::TestCaseData* current = nullptr;
    bool case_failed = false;
    std::chrono::steady_clock::time_point start;

    explicit CriterionReporter(const doctest::ContextOptions&) {}
    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats&) override {}
    void test_case_start(const doctest::TestCaseData& d) override {
        current = &d;
        case_failed = false;
        start = std::chrono::steady_clock::now();
    }
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats&) override {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%-58s %s  (%.2fs)\n", current->m_name, case_failed ? "FAIL" : "pass", secs);
        std::fflush(stdout);
    }
    void test_case_exception(const doctest::TestCaseException&) override { case_failed = true; }
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData& a) override {
        if (a.m_failed)
            case_failed = true;
    }
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};

REGISTER_REPORTER("criteria", 1, CriterionReporter);

GenusOneModel f1() {
    return parse_model("tc 27089 2142 291938 10008 -127341 92937 104736 21093 -71172 -2655");
}
GenusOneModel f3() {
    return parse_model("tc 40877301 -11504 12 -8035425 -64887 526580 -200 5803 -383 7307");
}
GenusOneModel f4() {
    return parse_model("tc 12 12 171 65 65 0 -94 87 101 7");
}
GenusOneModel skoro() {
    return parse_model("qi -1 22 -132 792 -66 792 -5040 -2520 32670 -105786 | "
                       "-1 -6 66 -396 33 -396 2376 1188 -15120 49005");
}
GenusOneModel skoro_min() {
    return parse_model("qi -364 -424 319 -474 -126 187 -280 -70 209 -155 | "
                       "174 198 -152 220 57 -86 130 33 -97 72");
}

Int delta_e_71() {
    return pow_int(2, 39) * 3 * pow_int(5, 9) * pow_int(7, 3) * 503;
}

template <typename T> long max_abs_coeff(const T& arr) {
    Rat m = 0;
    for (const auto& c : arr)
        if (abs(c) > m)
            m = abs(c);
    return static_cast<long>(m.get_d());
}

} // namespace

TEST_CASE("1. 7.1 discriminant and levels of F1 (exact, < 1 s)") {
    auto t0 = std::chrono::steady_clock::now();
    InvariantTriple inv = invariants(f1());
    CHECK(num(inv.delta) == pow_int(3, 12) * pow_int(503, 12) * delta_e_71());
    CHECK(level(f1(), 3).level == 1);
    CHECK(level(f1(), 503).level == 1);
    CHECK(level(f1(), 2).level == 0);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
}

TEST_CASE("2. 7.1 replay of the printed transformations (exact)") {
    Trans3 ga{Rat(1, 9), MatQ(3, 3)};
    ga.m(0, 0) = 3;
    ga.m(1, 0) = -1;
    ga.m(2, 1) = 1;
    ga.m(1, 2) = 1;
    Trans3 gb{Rat(1, Int(503) * 503), MatQ(3, 3)};
    gb.m(0, 0) = 503;
    gb.m(1, 0) = -33;
    gb.m(2, 0) = 1;
    gb.m(2, 1) = 1;
    gb.m(1, 2) = 1;
    gb.m(2, 2) = -10;
    CHECK(g1::apply(compose(Transformation(gb), Transformation(ga)), f1()) == f3());
    Trans3 gc{Rat(1), MatQ(3, 3)};
    gc.m(1, 0) = 4;
    gc.m(2, 0) = -3;
    gc.m(1, 1) = 61;
    gc.m(2, 1) = -46;
    gc.m(0, 2) = 1;
    gc.m(1, 2) = 6;
    gc.m(2, 2) = -4;
    CHECK(g1::apply(Transformation(gc), f3()) == f4());
}

TEST_CASE("3. 7.1 global minimisation of F1 (exact, < 5 s)") {
    auto t0 = std::chrono::steady_clock::now();
    GlobalRun run = minimise_global(f1());
    CHECK(is_integral(run.model));
    CHECK(num(invariants(run.model).delta) == delta_e_71());
    for (const auto& rep : run.reports)
        CHECK(rep.level == 0);
    CHECK(g1::apply(run.t, f1()) == run.model);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 5.0);
}

TEST_CASE("4. 7.1 covariant of F3 matches the printed matrix (1e-6, < 2 s)") {
    auto t0 = std::chrono::steady_clock::now();
    GramMatrix g = covariant3(std::get<Model3>(f3()));
    const double printed[9] = {176413988.185,  -11560848.1174, 3471.84429193,
                               -11560848.1174, 757736.524016,  -1499.92503970,
                               3471.84429193,  -1499.92503970, 13237.5156939};
    double s = 13237.5156939 / g.at(2, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(g.at(i, j) * s - printed[3 * i + j]) <=
                  1e-6 * std::abs(printed[3 * i + j]));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 2.0);
}

TEST_CASE("5. 7.1 reduction of F3: coefficients <= 171, invariants exact") {
    ReduceResult r = reduce_model(f3());
    CHECK(max_abs_coeff(std::get<Model3>(r.model).c) <= 171);
    InvariantTriple a = invariants(f3()), b = invariants(r.model);
    CHECK(a.c4 == b.c4);
    CHECK(a.c6 == b.c6);
    CHECK(a.delta == b.delta);
}

TEST_CASE("6. 7.2 pipeline: doubling, minimisation, reduction, covariant (< 10 s)") {
    auto t0 = std::chrono::steady_clock::now();
    // doubled quartic of the printed pair
    auto f = pencil_quartic(std::get<Model4>(skoro()));
    Int s = 16 * pow_int(3, 8);
    CHECK(f[0] == Rat(-9) * s);
    CHECK(f[1] == Rat(13) * s);
    CHECK(f[2] == Rat(-18) * s);
    CHECK(f[3] == 0);
    CHECK(f[4] == Rat(3) * s);
    // global minimisation reaches level 0 at 2 and 3
    GlobalRun run = minimise_global(skoro());
    CHECK(level(run.model, 2).level == 0);
    CHECK(level(run.model, 3).level == 0);
    // reduction of the minimal pair
    ReduceResult r = reduce_model(GenusOneModel(skoro_min()));
    CHECK(max_abs_coeff(std::get<Model4>(r.model).q1.c) <= 2);
    CHECK(max_abs_coeff(std::get<Model4>(r.model).q2.c) <= 2);
    CHECK(invariants(r.model).delta == invariants(skoro_min()).delta);
    CHECK(invariants(r.model).c6 == invariants(skoro_min()).c6);
    // covariant of the printed minimal pair, up to a positive scalar
    GramMatrix g = covariant4(std::get<Model4>(skoro_min()));
    const double printed[16] = {8857.72019,  5117.00780,  -3885.97776, 5665.67630,
                                5117.00780,  3080.24124,  -2279.16858, 3348.18401,
                                -3885.97776, -2279.16858, 1716.07038,  -2498.36286,
                                5665.67630,  3348.18401,  -2498.36286, 3706.96839};
    double scale = printed[0] / g.at(0, 0);
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs(g.a[static_cast<std::size_t>(i)] * scale - printed[i]) <=
              1e-4 * std::abs(printed[0]));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 10.0);
}

TEST_CASE("7. 7.3 quadrics D and the 2-descent quartic") {
    GenusOneModel d = parse_model("qi 0 2 1 1 0 0 1 1 0 -2 | 1 0 1 -1 2 -1 2 -1 -1 1");
    InvariantTriple inv = invariants(d);
    CHECK(inv.c4 == 0);
    CHECK(inv.c6 == Rat(-864) * 7823);
    CHECK(inv.delta == Rat(-432) * 7823 * 7823);
    // level 0 at all primes: u = 1 in the global driver
    GlobalRun run = minimise_global(d);
    CHECK(run.u == 1);
    CHECK(run.model == d);
    // the quartic is minimal as a plain binary quartic
    std::array<Rat, 5> c = {Rat(-18), Rat(116), Rat(48), Rat(-12), Rat(30)};
    CHECK(binary_quartic_minimal_at_2(c));
    // odd primes: Delta = 2^12 Delta_E leaves nothing to improve away from 2
    InvariantTriple ci = invariants(GenusOneModel(Model2{{Rat(0), Rat(0), Rat(0)}, c}));
    CHECK(num(ci.delta) == Int(-432) * 7823 * 7823 * 4096);
}

TEST_CASE("8. section-5 critical examples: critical, level 2, minimiser stuck") {
    GenusOneModel c2 = parse_model("gbq 0 0 0 / 2 0 24 0 8");
    GenusOneModel c3 = parse_model("tc 1 3 9 0 0 0 0 0 0 18");
    GenusOneModel c4m = parse_model("qi 1 0 0 0 0 0 4 2 0 0 | 0 0 4 0 1 0 0 0 0 2");
    CHECK(is_critical(c2, 2));
    CHECK(is_critical(c3, 3));
    CHECK(is_critical(c4m, 2));
    CHECK(level(c2, 2).level == 2);
    CHECK(level(c3, 3).level == 2);
    CHECK(level(c4m, 2).level == 2);
    LocalRun r2 = minimise_gbq2(std::get<Model2>(c2));
    CHECK(r2.level_out == 2);
    CHECK(r2.cert.kind != CertKind::level_zero);
    LocalRun r3 = minimise_tc(std::get<Model3>(c3), 3);
    CHECK(r3.level_out == 2);
    CHECK(r3.cert.kind != CertKind::level_zero);
    LocalRun r4 = minimise_qi(std::get<Model4>(c4m), 2);
    CHECK(r4.level_out == 2);
    CHECK(r4.cert.kind != CertKind::level_zero);
}

TEST_CASE("9a. syzygy exact on 1000 random integral models per degree") {
    Rng rng(91);
    for (int deg = 1; deg <= 4; ++deg)
        for (int i = 0; i < 1000; ++i) {
            GenusOneModel m = random_model(rng, deg);
            InvariantTriple inv = invariants(m);
            CHECK(inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 == 1728 * inv.delta);
        }
}

TEST_CASE("9b. invariant weights exact on 200 random transformations per degree") {
    Rng rng(92);
    for (int deg = 1; deg <= 4; ++deg)
        for (int i = 0; i < 200; ++i) {
            GenusOneModel m = random_model(rng, deg);
            Transformation g = random_transformation(rng, deg);
            Rat d = det(g);
            InvariantTriple a = invariants(m), b = invariants(g1::apply(g, m));
            Rat d4 = d * d * d * d;
            CHECK(b.c4 == d4 * a.c4);
            CHECK(b.c6 == d4 * d * d * a.c6);
            CHECK(b.delta == d4 * d4 * d4 * a.delta);
        }
}

TEST_CASE("9c. doubling preserves Delta exactly on 500 random pairs") {
    Rng rng(93);
    for (int i = 0; i < 500; ++i) {
        Model4 m = random_qi(rng);
        CHECK(invariants(GenusOneModel(doubling(m))).delta == invariants(GenusOneModel(m)).delta);
    }
}

TEST_CASE("9d. degree-2 covariant methods agree within 1e-8 on 100 quartics") {
    Rng rng(94);
    int done = 0;
    for (int i = 0; i < 300 && done < 100; ++i) {
        Model2 m = random_gbq(rng);
        m.p = {Rat(0), Rat(0), Rat(0)};
        if (invariants(GenusOneModel(m)).delta == 0)
            continue;
        GramMatrix a = covariant2_roots(m.q);
        GramMatrix b = covariant2_torsion(m.q);
        double ma = 0, mb = 0;
        for (double v : a.a)
            ma = std::max(ma, std::abs(v));
        for (double v : b.a)
            mb = std::max(mb, std::abs(v));
        for (std::size_t k = 0; k < a.a.size(); ++k)
            CHECK(std::abs(a.a[k] / ma - b.a[k] / mb) < 1e-8);
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("9e. covariant covariance under unimodular changes (1e-5 / 1e-4)") {
    Rng rng(95);
    auto prop_ok = [](const GramMatrix& x, const GramMatrix& y, double tol) {
        double mx = 0, my = 0;
        for (double v : x.a)
            mx = std::max(mx, std::abs(v));
        for (double v : y.a)
            my = std::max(my, std::abs(v));
        for (std::size_t k = 0; k < x.a.size(); ++k)
            if (std::abs(x.a[k] / mx - y.a[k] / my) >= tol)
                return false;
        return true;
    };
    auto congr = [](const MatQ& m, const GramMatrix& g) {
        GramMatrix r;
        r.n = g.n;
        r.a.assign(g.a.size(), 0.0);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                double s = 0;
                for (int p = 0; p < g.n; ++p)
                    for (int q = 0; q < g.n; ++q)
                        s += m(p, i).get_d() * g.at(p, q) * m(q, j).get_d();
                r.at(i, j) = s;
            }
        return r;
    };
    int done3 = 0;
    for (int i = 0; i < 60 && done3 < 10; ++i) {
        Model3 m = random_tc(rng, 3);
        if (invariants(GenusOneModel(m)).delta == 0)
            continue;
        MatQ u = random_unimodular(rng, 3, 6, 3);
        GramMatrix before = covariant3(m);
        GramMatrix after = covariant3(apply3(Trans3{Rat(1), u}, m));
        CHECK(prop_ok(after, congr(u.transpose(), before), 1e-5));
        ++done3;
    }
    CHECK(done3 == 10);
    int done4 = 0;
    for (int i = 0; i < 80 && done4 < 6; ++i) {
        Model4 m = random_qi(rng, 2);
        if (invariants(GenusOneModel(m)).delta == 0)
            continue;
        MatQ u = random_unimodular(rng, 4, 6, 2);
        Trans4 g;
        g.n4 = u;
        GramMatrix before, after;
        try {
            before = covariant4(m);
            after = covariant4(apply4(g, m));
        } catch (const numeric_error&) {
            continue;
        }
        CHECK(prop_ok(after, congr(u.transpose(), before), 1e-4));
        ++done4;
    }
    CHECK(done4 == 6);
}

TEST_CASE("9f. unprojection and projection preserve Delta on 200 prepared models") {
    Rng rng(96);
    int done = 0;
    for (int i = 0; i < 400 && done < 100; ++i) {
        Model2 m = random_gbq(rng);
        m.q[0] = 0;
        InvariantTriple before = invariants(GenusOneModel(m));
        if (before.delta == 0)
            continue;
        Model3 up = unproject(m);
        CHECK(invariants(GenusOneModel(up)).delta == before.delta);
        CHECK(project3(up) == m);
        ++done;
    }
    CHECK(done == 100);
    done = 0;
    for (int i = 0; i < 400 && done < 100; ++i) {
        Model3 m = random_tc(rng);
        m.c[2] = 0;
        InvariantTriple before = invariants(GenusOneModel(m));
        if (before.delta == 0)
            continue;
        Model4 up = unproject(m);
        CHECK(invariants(GenusOneModel(up)).delta == before.delta);
        CHECK(project4(up) == m);
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("9g. minimiser idempotence on the golden outputs") {
    std::vector<GenusOneModel> golden;
    golden.push_back(minimise_global(f1()).model);
    golden.push_back(minimise_global(skoro()).model);
    golden.push_back(
        minimise_global(parse_model("gbq 0 0 0 / -18 116 48 -12 30")).model);
    golden.push_back(parse_model("qi 0 2 1 1 0 0 1 1 0 -2 | 1 0 1 -1 2 -1 2 -1 -1 1"));
    // critical outputs are fixed points of their local drivers
    golden.push_back(minimise_gbq2(std::get<Model2>(parse_model("gbq 0 0 0 / 2 0 24 0 8"))).model);
    for (const auto& m : golden) {
        GlobalRun again = minimise_global(m);
        CHECK(is_identity(again.t));
        CHECK(again.model == m);
    }
    GenusOneModel c3 = parse_model("tc 1 3 9 0 0 0 0 0 0 18");
    LocalRun l3 = minimise_tc(std::get<Model3>(c3), 3);
    LocalRun l3b = minimise_tc(std::get<Model3>(l3.model), 3);
    CHECK(is_identity(l3b.t));
    GenusOneModel c4m = parse_model("qi 1 0 0 0 0 0 4 2 0 0 | 0 0 4 0 1 0 0 0 0 2");
    LocalRun l4 = minimise_qi(std::get<Model4>(c4m), 2);
    LocalRun l4b = minimise_qi(std::get<Model4>(l4.model), 2);
    CHECK(is_identity(l4b.t));
}

int main(int argc, char** argv) {
    doctest::Context ctx(argc, argv);
    ctx.setOption("reporters", "criteria");
    auto t0 = std::chrono::steady_clock::now();
    int res = ctx.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("total runtime %.1fs (budget for the property suites: 60s)\n", secs);
    if (secs >= 60.0 && res == 0) {
        std::printf("property-suite runtime budget exceeded                     FAIL\n");
        return 1;
    }
    return res;
}
