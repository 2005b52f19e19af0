#include "g1/report_io.hpp"

namespace g1 {

using nlohmann::json;

namespace {

json rat_json(const Rat& r) {
    return r.get_str();
}

template <std::size_t N> json arr_json(const std::array<Rat, N>& a) {
    json j = json::array();
    for (const auto& c : a)
        j.push_back(rat_json(c));
    return j;
}

Rat rat_from(const json& j) {
    Rat r(j.get<std::string>());
    if (r.get_den() == 0)
        throw parse_error("zero denominator", 0);
    r.canonicalize();
    return r;
}

template <std::size_t N> std::array<Rat, N> arr_from(const json& j) {
    if (!j.is_array() || j.size() != N)
        throw parse_error("bad coefficient array", 0);
    std::array<Rat, N> a;
    for (std::size_t i = 0; i < N; ++i)
        a[i] = rat_from(j[i]);
    return a;
}

json mat_json(const MatQ& m) {
    json j = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k)
            j.push_back(rat_json(m(i, k)));
    return j;
}

MatQ mat_from(const json& j, int n) {
    MatQ m(n, n);
    if (!j.is_array() || static_cast<int>(j.size()) != n * n)
        throw parse_error("bad matrix", 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            m(i, k) = rat_from(j[static_cast<std::size_t>(n * i + k)]);
    return m;
}

} // namespace

json model_json(const GenusOneModel& m) {
    json j;
    j["deg"] = degree(m);
    json c = json::array();
    std::visit(
        [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Model1>) {
                for (const auto& x : v.a)
                    c.push_back(rat_json(x));
            } else if constexpr (std::is_same_v<V, Model2>) {
                for (const auto& x : v.p)
                    c.push_back(rat_json(x));
                for (const auto& x : v.q)
                    c.push_back(rat_json(x));
            } else if constexpr (std::is_same_v<V, Model3>) {
                for (const auto& x : v.c)
                    c.push_back(rat_json(x));
            } else {
                for (const auto& x : v.q1.c)
                    c.push_back(rat_json(x));
                for (const auto& x : v.q2.c)
                    c.push_back(rat_json(x));
            }
        },
        m);
    j["coeffs"] = c;
    return j;
}

GenusOneModel model_from_json(const json& j) {
    int deg = j.at("deg").get<int>();
    const json& c = j.at("coeffs");
    switch (deg) {
    case 1: return Model1{arr_from<5>(c)};
    case 2: {
        if (c.size() != 8)
            throw parse_error("degree-2 model needs 8 coefficients", 0);
        Model2 m;
        for (int i = 0; i < 3; ++i)
            m.p[static_cast<std::size_t>(i)] = rat_from(c[static_cast<std::size_t>(i)]);
        for (int i = 0; i < 5; ++i)
            m.q[static_cast<std::size_t>(i)] = rat_from(c[static_cast<std::size_t>(3 + i)]);
        return m;
    }
    case 3: return Model3{arr_from<10>(c)};
    case 4: {
        if (c.size() != 20)
            throw parse_error("degree-4 model needs 20 coefficients", 0);
        Model4 m;
        for (int i = 0; i < 10; ++i)
            m.q1.c[static_cast<std::size_t>(i)] = rat_from(c[static_cast<std::size_t>(i)]);
        for (int i = 0; i < 10; ++i)
            m.q2.c[static_cast<std::size_t>(i)] = rat_from(c[static_cast<std::size_t>(10 + i)]);
        return m;
    }
    default: throw parse_error("bad degree", 0);
    }
}

json transformation_json(const Transformation& t) {
    json j;
    std::visit(
        [&](const auto& g) {
            using V = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<V, Trans1>) {
                j["deg"] = 1;
                j["u"] = rat_json(g.u);
                j["r"] = rat_json(g.r);
                j["s"] = rat_json(g.s);
                j["t"] = rat_json(g.t);
            } else if constexpr (std::is_same_v<V, Trans2>) {
                j["deg"] = 2;
                j["mu"] = rat_json(g.mu);
                j["r"] = arr_json(g.r);
                j["M"] = mat_json(g.m);
            } else if constexpr (std::is_same_v<V, Trans3>) {
                j["deg"] = 3;
                j["mu"] = rat_json(g.mu);
                j["M"] = mat_json(g.m);
            } else {
                j["deg"] = 4;
                j["M2"] = mat_json(g.m2);
                j["N"] = mat_json(g.n4);
            }
        },
        t);
    return j;
}

Transformation transformation_from_json(const json& j) {
    int deg = j.at("deg").get<int>();
    switch (deg) {
    case 1: {
        Trans1 g;
        g.u = rat_from(j.at("u"));
        g.r = rat_from(j.at("r"));
        g.s = rat_from(j.at("s"));
        g.t = rat_from(j.at("t"));
        return g;
    }
    case 2: {
        Trans2 g;
        g.mu = rat_from(j.at("mu"));
        g.r = arr_from<3>(j.at("r"));
        g.m = mat_from(j.at("M"), 2);
        return g;
    }
    case 3: {
        Trans3 g;
        g.mu = rat_from(j.at("mu"));
        g.m = mat_from(j.at("M"), 3);
        return g;
    }
    case 4: {
        Trans4 g;
        g.m2 = mat_from(j.at("M2"), 2);
        g.n4 = mat_from(j.at("N"), 4);
        return g;
    }
    default: throw parse_error("bad transformation degree", 0);
    }
}

json invariants_json(const InvariantTriple& inv) {
    json j;
    j["c4"] = rat_json(inv.c4);
    j["c6"] = rat_json(inv.c6);
    j["delta"] = rat_json(inv.delta);
    return j;
}

json a_invariants_json(const AInvariants& a) {
    json j;
    j["a1"] = rat_json(a.a[0]);
    j["a2"] = rat_json(a.a[1]);
    j["a3"] = rat_json(a.a[2]);
    j["a4"] = rat_json(a.a[3]);
    j["a6"] = rat_json(a.a[4]);
    j["b2"] = rat_json(a.b2);
    j["b4"] = rat_json(a.b4);
    j["b6"] = rat_json(a.b6);
    return j;
}

json level_report_json(const LevelReport& r) {
    json j;
    j["p"] = r.p.get_str();
    j["vDelta_model"] = r.v_delta_model;
    j["vDelta_min"] = r.v_delta_min;
    j["level"] = r.level;
    return j;
}

json local_run_json(const LocalRun& r) {
    json j;
    j["p"] = r.p.get_str();
    j["level_in"] = r.level_in;
    j["level_out"] = r.level_out;
    j["certificate"] = {{"kind", cert_kind_name(r.cert.kind)}, {"detail", r.cert.detail}};
    json steps = json::array();
    for (const auto& s : r.steps) {
        json sj;
        sj["kind"] = step_kind_name(s.kind);
        sj["transformation"] = transformation_json(s.t);
        sj["vDelta_before"] = s.v_delta_before;
        sj["vDelta_after"] = s.v_delta_after;
        steps.push_back(sj);
    }
    j["steps"] = steps;
    j["model"] = serialize(r.model);
    return j;
}

json global_run_json(const GlobalRun& r) {
    json j;
    j["model"] = serialize(r.model);
    j["model_json"] = model_json(r.model);
    j["transformation"] = transformation_json(r.t);
    j["u"] = r.u.get_str();
    j["seed"] = r.seed;
    json locals = json::array();
    for (const auto& l : r.locals)
        locals.push_back(local_run_json(l));
    j["locals"] = locals;
    json reps = json::array();
    for (const auto& rep : r.reports)
        reps.push_back(level_report_json(rep));
    j["levels"] = reps;
    return j;
}

json gram_json(const GramMatrix& g) {
    double scale = 0;
    for (double v : g.a)
        scale = std::max(scale, std::abs(v));
    json j;
    j["n"] = g.n;
    j["scale"] = scale;
    json a = json::array();
    for (double v : g.a)
        a.push_back(scale > 0 ? v / scale : v);
    j["entries"] = a;
    return j;
}

} // namespace g1
