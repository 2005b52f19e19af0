#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "g1/report_io.hpp"

using namespace g1;

namespace {

// inline model string or path to a file whose first non-empty line is one
GenusOneModel load_model(const std::string& arg) {
    const std::string tags[] = {"w ", "gbq ", "tc ", "qi "};
    for (const auto& t : tags)
        if (arg.rfind(t, 0) == 0)
            return parse_model(arg);
    std::ifstream in(arg);
    if (!in)
        throw parse_error("cannot open '" + arg + "' (and it is not an inline model)", 0);
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (!trimmed.empty() && trimmed[0] != '#')
            return parse_model(trimmed);
    }
    throw parse_error("no model found in '" + arg + "'", 0);
}

struct Options {
    std::string model;
    std::string p;
    std::uint64_t seed = 0;
    double delta = 0.99;
    int precision = 12;
    std::string format = "text";
    bool transform_only = false;
};

void print_invariants_text(std::ostream& os, const GenusOneModel& m) {
    InvariantTriple inv = invariants(m);
    os << "c4 = " << inv.c4 << "\nc6 = " << inv.c6 << "\ndelta = " << inv.delta << "\n";
    if (inv.delta == 0)
        throw singular_model_error();
    AInvariants a = a_invariants(m);
    os << "a-invariants: [" << a.a[0] << ", " << a.a[1] << ", " << a.a[2] << ", " << a.a[3]
       << ", " << a.a[4] << "]\n";
    os << "jacobian: " << serialize(GenusOneModel(jacobian_weierstrass(m))) << "\n";
}

int run(const Options& opt, const std::string& cmd) {
    GenusOneModel m = load_model(opt.model);
    nlohmann::json out;
    bool json_mode = opt.format == "json";
    if (cmd == "invariants") {
        InvariantTriple inv = invariants(m);
        if (inv.delta == 0) {
            std::cerr << "singular model (Delta = 0)\n";
            return 3;
        }
        if (json_mode) {
            out["invariants"] = invariants_json(inv);
            out["a_invariants"] = a_invariants_json(a_invariants(m));
            out["jacobian"] = serialize(GenusOneModel(jacobian_weierstrass(m)));
            std::cout << out.dump(2) << "\n";
        } else {
            print_invariants_text(std::cout, m);
        }
        return 0;
    }
    if (cmd == "minimise") {
        if (!opt.p.empty()) {
            LocalRun lr = minimise_local(m, Int(opt.p), opt.seed);
            if (opt.transform_only) {
                std::cout << (json_mode ? transformation_json(lr.t).dump(2) : serialize(lr.t))
                          << "\n";
                return 0;
            }
            if (json_mode)
                std::cout << local_run_json(lr).dump(2) << "\n";
            else {
                std::cout << serialize(lr.model) << "\n";
                std::cout << "p = " << lr.p << ": level " << lr.level_in << " -> " << lr.level_out
                          << " (" << cert_kind_name(lr.cert.kind) << ")\n";
                std::cout << "transformation: " << serialize(lr.t) << "\n";
            }
            return 0;
        }
        GlobalRun gr = minimise_global(m, opt.seed, factor_budget_from_env());
        if (opt.transform_only) {
            std::cout << (json_mode ? transformation_json(gr.t).dump(2) : serialize(gr.t)) << "\n";
            return 0;
        }
        if (json_mode)
            std::cout << global_run_json(gr).dump(2) << "\n";
        else {
            std::cout << serialize(gr.model) << "\n";
            for (const auto& rep : gr.reports)
                std::cout << "p = " << rep.p << ": v(Delta) = " << rep.v_delta_model
                          << ", v(Delta_min) = " << rep.v_delta_min << ", level " << rep.level
                          << "\n";
            for (const auto& l : gr.locals)
                std::cout << "p = " << l.p << ": level " << l.level_in << " -> " << l.level_out
                          << " (" << cert_kind_name(l.cert.kind) << ", " << l.steps.size()
                          << " steps)\n";
            std::cout << "transformation: " << serialize(gr.t) << "\n";
        }
        return 0;
    }
    if (cmd == "reduce" || cmd == "minred") {
        Transformation total = identity_transformation(degree(m));
        GenusOneModel cur = m;
        nlohmann::json stages = nlohmann::json::array();
        if (cmd == "minred") {
            GlobalRun gr = minimise_global(cur, opt.seed, factor_budget_from_env());
            cur = gr.model;
            total = gr.t;
            stages.push_back(global_run_json(gr));
        } else if (!is_integral(cur)) {
            throw argument_error("reduce: model must be integral");
        }
        ReduceResult rr = reduce_model(cur, opt.seed, opt.delta);
        cur = rr.model;
        total = compose(rr.t, total);
        if (opt.transform_only) {
            std::cout << (json_mode ? transformation_json(total).dump(2) : serialize(total))
                      << "\n";
            return 0;
        }
        if (json_mode) {
            out["model"] = serialize(cur);
            out["model_json"] = model_json(cur);
            out["transformation"] = transformation_json(total);
            out["covariant"] = gram_json(covariant_of(cur, opt.seed));
            if (cmd == "minred")
                out["minimisation"] = stages;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << serialize(cur) << "\n";
            std::cout << "transformation: " << serialize(total) << "\n";
        }
        return 0;
    }
    std::cerr << "unknown command\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimise and reduce genus one models of degree 2, 3, 4 over Q"};
    app.require_subcommand(1);
    Options opt;
    std::string cmd;
    for (const char* name : {"invariants", "minimise", "reduce", "minred"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("model", opt.model, "inline model string or file path")->required();
        sub->add_option("--p", opt.p, "prime for local minimisation");
        sub->add_option("--seed", opt.seed, "seed for randomised shuffles");
        sub->add_option("--delta", opt.delta, "LLL parameter in (0.25, 1)");
        sub->add_option("--precision", opt.precision, "float print digits (>= 10)");
        sub->add_option("--format", opt.format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--transform", opt.transform_only, "emit the transformation only");
        sub->callback([&cmd, name] { cmd = name; });
    }
    CLI11_PARSE(app, argc, argv);
    if (!(opt.delta > 0.25 && opt.delta < 1.0)) {
        std::cerr << "delta must lie in (0.25, 1)\n";
        return 1;
    }
    if (opt.precision < 10) {
        std::cerr << "precision must be >= 10\n";
        return 1;
    }
    std::cout.precision(opt.precision);
    try {
        return run(opt, cmd);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const singular_model_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const factor_budget_error& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 5;
    } catch (const g1::error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
