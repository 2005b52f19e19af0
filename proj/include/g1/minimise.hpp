#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "g1/invariants.hpp"
#include "g1/models.hpp"
#include "g1/scan.hpp"

namespace g1 {

enum class StepKind {
    divide,
    move_root,
    move_point,
    move_line,
    situation1,
    situation2,
    flipflop,
    pencil_absorb,
    y_shift,
};

const char* step_kind_name(StepKind k);

struct MinimisationStep {
    Transformation t;
    StepKind kind;
    long v_delta_before = 0;
    long v_delta_after = 0;
};

enum class CertKind { level_zero, iteration_bound, critical, no_multiple_root };

const char* cert_kind_name(CertKind k);

struct MinimalityCertificate {
    CertKind kind;
    std::string detail;
};

struct LocalRun {
    GenusOneModel model;
    Transformation t;
    MinimalityCertificate cert;
    std::vector<MinimisationStep> steps;
    Int p;
    long level_in = 0;
    long level_out = 0;
};

// Local minimisation of a binary quartic at an odd prime (the quartic is the
// degree-2 model (0, F)).
LocalRun minimise_bq(const std::array<Rat, 5>& f, const Int& p);

// Local minimisation of a generalised binary quartic at p = 2.
LocalRun minimise_gbq2(const Model2& m);

// Local minimisation of a ternary cubic at any prime.
LocalRun minimise_tc(const Model3& m, const Int& p, ScanImpl impl = default_scan_impl());

// Local minimisation of a quadric intersection at any prime.
LocalRun minimise_qi(const Model4& m, const Int& p, std::uint64_t seed = 0);

// Dispatch on degree; degree-2 models at odd p are y-shifted onto the
// quartic P^2 + 4Q, which leaves denominators only at 2.
LocalRun minimise_local(const GenusOneModel& m, const Int& p, std::uint64_t seed = 0);

// Coefficient-valuation criticality test.
bool is_critical(const GenusOneModel& m, const Int& p);

// Minimality of a plain binary quartic at p = 2 (no cross terms allowed, a
// strictly stronger condition than minimality of the generalised model).
// Runs the move/divide procedure; a failed step certifies minimality, since
// every step succeeds on a non-minimal quartic.
bool binary_quartic_minimal_at_2(const std::array<Rat, 5>& f);

struct GlobalRun {
    GenusOneModel model;
    Transformation t;
    std::vector<LocalRun> locals;
    std::vector<LevelReport> reports; // for the output model
    std::uint64_t seed = 0;
    Int u; // 12th root of |Delta(input)/Delta_min| after integral scaling
};

GlobalRun minimise_global(const GenusOneModel& m, std::uint64_t seed = 0,
                          unsigned long long factor_budget = 10000000ULL);

} // namespace g1
