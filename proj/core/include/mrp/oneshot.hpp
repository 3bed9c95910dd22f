#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrp/scenario.hpp"
#include "mrp/smt.hpp"

namespace mrp {

namespace detail {
class JointEncoding;
}

struct OneShotOptions {
    smt::SolverConfig solver = smt::default_solver_config();
    std::optional<int> horizon;    // defaults to Scenario::horizon
    bool prefer_moves = true;      // lexicographic tie-break after W: fewest recharge steps
    bool distance_hints = true;    // implied travel-time constraints between loops
    bool symmetry_breaking = true;
};

// The monolithic query: full state matching over the hypercycle.
class OneShotQuery {
public:
    OneShotQuery(const Scenario& s, const OneShotOptions& o = {});
    ~OneShotQuery();
    OneShotQuery(OneShotQuery&&) noexcept;

    const smt::Program& program() const;
    int horizon() const noexcept { return T_; }
    // Maps a model back to a bundle with T_prime equal to the horizon.
    PlanBundle extract_plan(const smt::Model& m) const;

private:
    const Scenario* s_;
    int T_;
    std::unique_ptr<detail::JointEncoding> enc_;
};

smt::Program encode_oneshot(const Scenario& s, const OneShotOptions& o = {});

struct OneShotResult {
    smt::Status status = smt::Status::Timeout;
    std::optional<PlanBundle> bundle;
    std::vector<std::int64_t> objective_values;  // in program objective order
    std::vector<std::string> warnings;
    double seconds = 0.0;
};

// Encodes, solves and extracts. Infeasibility and timeouts are reported through status.
OneShotResult plan_oneshot(const Scenario& s, const OneShotOptions& o = {});

}  // namespace mrp
