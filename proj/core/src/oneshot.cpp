#include "mrp/oneshot.hpp"

#include "encoding.hpp"
#include "mrp/error.hpp"

namespace mrp {

namespace {

detail::JointOptions joint_options(const Scenario& s, const OneShotOptions& o) {
    detail::JointOptions j;
    j.T = o.horizon.value_or(s.horizon);
    j.charge_matching = true;
    j.recharger_return = true;
    j.prefer_moves = o.prefer_moves;
    j.minimize_travel = true;
    j.mode = s.objective_mode;
    j.w1 = s.w1;
    j.w2 = s.w2;
    j.distance_hints = o.distance_hints;
    j.symmetry_breaking = o.symmetry_breaking;
    return j;
}

}  // namespace

OneShotQuery::OneShotQuery(const Scenario& s, const OneShotOptions& o)
    : s_(&s), T_(o.horizon.value_or(s.horizon)),
      enc_(std::make_unique<detail::JointEncoding>(s, joint_options(s, o))) {}

OneShotQuery::~OneShotQuery() = default;
OneShotQuery::OneShotQuery(OneShotQuery&&) noexcept = default;

const smt::Program& OneShotQuery::program() const { return enc_->program(); }

PlanBundle OneShotQuery::extract_plan(const smt::Model& m) const {
    auto plans = enc_->extract(m);
    return assemble_bundle(*s_, "oneshot", T_, std::move(plans.workers), std::move(plans.rechargers),
                           std::move(plans.recharger_starts), std::move(plans.events));
}

smt::Program encode_oneshot(const Scenario& s, const OneShotOptions& o) {
    return OneShotQuery(s, o).program();
}

OneShotResult plan_oneshot(const Scenario& s, const OneShotOptions& o) {
    validate_scenario(s);
    OneShotResult r;
    r.warnings = scenario_warnings(s);
    OneShotQuery q(s, o);
    auto out = smt::solve(q.program(), o.solver);
    r.status = out.status;
    r.seconds = out.wall_seconds;
    r.objective_values = out.objective_values;
    if (out.model) {
        r.bundle = q.extract_plan(*out.model);
        r.bundle->solve_status = smt::to_string(out.status);
        r.bundle->runtime_seconds = out.wall_seconds;
    }
    return r;
}

}  // namespace mrp
