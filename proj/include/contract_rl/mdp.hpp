#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contract_rl/common.hpp"

namespace contract_rl {

constexpr int kInfiniteHorizon = -1;

enum class Variant { kHiddenAction, kObservedAction };

/// Hidden-action (or observed-action) principal-agent MDP.
///
/// The episode starts in `initial_state`. In a state s at timestep t the
/// principal offers a contract, the agent picks an action a, an outcome o is
/// drawn from outcome_fn(s, a), rewards r(s, a) + b(o) and r^p(s, o) - b(o)
/// accrue, and the MDP moves to s' ~ transition_fn(s, o). A finite-horizon
/// episode ends after the decision taken at timestep horizon - 1; transition
/// rows of those last-decision states are never consumed.
struct PrincipalAgentMdp {
  int num_states = 0;
  int num_actions = 0;   // n
  int num_outcomes = 0;  // m
  int initial_state = 0;

  std::vector<double> outcome_fn;        // [s][a][o]
  std::vector<double> transition_fn;     // [s][o][s']
  std::vector<double> agent_reward;      // [s][a], r(s,a)
  std::vector<double> principal_reward;  // [s][o], r^p(s,o)

  double gamma = 1.0;
  int horizon = kInfiniteHorizon;
  std::vector<int> timestep;  // per-state tag; empty allowed for infinite horizon
  Variant variant = Variant::kHiddenAction;

  std::vector<std::string> state_names;    // optional, for serialization
  std::vector<std::string> action_names;   // optional
  std::vector<std::string> outcome_names;  // optional

  bool finite_horizon() const { return horizon != kInfiniteHorizon; }

  double outcome_prob(int s, int a, int o) const {
    return outcome_fn[(static_cast<size_t>(s) * num_actions + a) * num_outcomes + o];
  }
  double& outcome_prob(int s, int a, int o) {
    return outcome_fn[(static_cast<size_t>(s) * num_actions + a) * num_outcomes + o];
  }
  std::span<const double> outcome_row(int s, int a) const {
    return {outcome_fn.data() + (static_cast<size_t>(s) * num_actions + a) * num_outcomes,
            static_cast<size_t>(num_outcomes)};
  }

  double transition_prob(int s, int o, int s2) const {
    return transition_fn[(static_cast<size_t>(s) * num_outcomes + o) * num_states + s2];
  }
  double& transition_prob(int s, int o, int s2) {
    return transition_fn[(static_cast<size_t>(s) * num_outcomes + o) * num_states + s2];
  }
  std::span<const double> transition_row(int s, int o) const {
    return {transition_fn.data() + (static_cast<size_t>(s) * num_outcomes + o) * num_states,
            static_cast<size_t>(num_states)};
  }

  double reward_agent(int s, int a) const { return agent_reward[static_cast<size_t>(s) * num_actions + a]; }
  double& reward_agent(int s, int a) { return agent_reward[static_cast<size_t>(s) * num_actions + a]; }
  double reward_principal(int s, int o) const { return principal_reward[static_cast<size_t>(s) * num_outcomes + o]; }
  double& reward_principal(int s, int o) { return principal_reward[static_cast<size_t>(s) * num_outcomes + o]; }

  // True when acting in s ends the episode (finite horizon only).
  bool last_decision(int s) const { return finite_horizon() && timestep[s] + 1 >= horizon; }

  std::string state_name(int s) const {
    return s < static_cast<int>(state_names.size()) ? state_names[s] : "s" + std::to_string(s);
  }

  static PrincipalAgentMdp make(int states, int actions, int outcomes) {
    PrincipalAgentMdp m;
    m.num_states = states;
    m.num_actions = actions;
    m.num_outcomes = outcomes;
    m.outcome_fn.assign(static_cast<size_t>(states) * actions * outcomes, 0.0);
    m.transition_fn.assign(static_cast<size_t>(states) * outcomes * states, 0.0);
    m.agent_reward.assign(static_cast<size_t>(states) * actions, 0.0);
    m.principal_reward.assign(static_cast<size_t>(states) * outcomes, 0.0);
    m.timestep.assign(states, 0);
    return m;
  }
};

/// Non-negative payment vector indexed by outcome (limited liability).
struct Contract {
  std::vector<double> pay;

  Contract() = default;
  explicit Contract(int m) : pay(m, 0.0) {}
  Contract(std::initializer_list<double> v) : pay(v) {}

  int size() const { return static_cast<int>(pay.size()); }
  double operator()(int o) const { return pay[o]; }
  bool nonnegative() const {
    for (double p : pay)
      if (p < 0.0) return false;
    return true;
  }
};

inline double sup_distance(const Contract& a, const Contract& b) {
  if (a.pay.size() != b.pay.size()) throw std::invalid_argument("contract size mismatch");
  double d = 0.0;
  for (size_t i = 0; i < a.pay.size(); ++i) d = std::max(d, std::abs(a.pay[i] - b.pay[i]));
  return d;
}

/// Expected payment of a contract under an outcome distribution.
inline double expected_payment(const Contract& b, std::span<const double> outcome_dist) {
  if (static_cast<size_t>(b.size()) != outcome_dist.size())
    throw std::invalid_argument("expected_payment: contract/distribution length mismatch");
  return dot(b.pay, outcome_dist);
}

/// Deterministic state -> contract map, with an optional recommended action
/// per state (used by the agent's principal-favored tie-breaking).
struct PrincipalPolicy {
  std::vector<Contract> contract_of;
  std::vector<int> recommendation;  // -1 when no recommendation is attached

  PrincipalPolicy() = default;
  PrincipalPolicy(int states, int outcomes)
      : contract_of(states, Contract(outcomes)), recommendation(states, -1) {}

  static PrincipalPolicy zero(const PrincipalAgentMdp& mdp) {
    return PrincipalPolicy(mdp.num_states, mdp.num_outcomes);
  }

  int size() const { return static_cast<int>(contract_of.size()); }
};

inline double sup_distance(const PrincipalPolicy& a, const PrincipalPolicy& b) {
  if (a.size() != b.size()) throw std::invalid_argument("policy size mismatch");
  double d = 0.0;
  for (int s = 0; s < a.size(); ++s) d = std::max(d, sup_distance(a.contract_of[s], b.contract_of[s]));
  return d;
}

/// Agent decision rule backed by a truncated Q-table:
///   act(s, b) = argmax_a  E_{o ~ O(s,a)} b(o) + Qbar(s, a).
/// Ties within tie_tolerance go to the attached recommendation when there is
/// one, otherwise to the lowest action index.
struct AgentPolicy {
  Table2 truncated_q;  // [s][a]
  double tie_tolerance = 1e-9;

  AgentPolicy() = default;
  explicit AgentPolicy(Table2 q, double tol = 1e-9) : truncated_q(std::move(q)), tie_tolerance(tol) {}

  int act(const PrincipalAgentMdp& mdp, int s, const Contract& b, int recommended = -1) const {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(mdp.num_actions);
    for (int a = 0; a < mdp.num_actions; ++a) {
      vals[a] = expected_payment(b, mdp.outcome_row(s, a)) + truncated_q(s, a);
      best = std::max(best, vals[a]);
    }
    if (recommended >= 0 && vals[recommended] >= best - tie_tolerance) return recommended;
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (vals[a] >= best - tie_tolerance) return a;
    }
    return 0;
  }

  // Agent's value of facing contract b in s: max_a E[b(o)] + Qbar(s,a).
  double state_value(const PrincipalAgentMdp& mdp, int s, const Contract& b) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.num_actions; ++a) {
      best = std::max(best, expected_payment(b, mdp.outcome_row(s, a)) + truncated_q(s, a));
    }
    return best;
  }
};

/// Structural diagnostics. Empty result means all invariants hold.
inline std::vector<std::string> validate(const PrincipalAgentMdp& mdp, double row_sum_tol = 1e-12) {
  std::vector<std::string> out;
  auto check_row = [&](std::span<const double> row, const std::string& what) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) {
        out.push_back(what + ": negative entry " + format_float(p));
        return;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > row_sum_tol) out.push_back(what + ": row sum " + format_float(sum));
  };

  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a)
      check_row(mdp.outcome_row(s, a), "outcome row (" + mdp.state_name(s) + ", a" + std::to_string(a) + ")");
    for (int o = 0; o < mdp.num_outcomes; ++o)
      check_row(mdp.transition_row(s, o), "transition row (" + mdp.state_name(s) + ", o" + std::to_string(o) + ")");
  }

  if (mdp.finite_horizon()) {
    if (static_cast<int>(mdp.timestep.size()) != mdp.num_states) {
      out.push_back("timestep tags missing for finite horizon");
      return out;
    }
    if (mdp.timestep[mdp.initial_state] != 0)
      out.push_back("initial state timestep is " + std::to_string(mdp.timestep[mdp.initial_state]) + ", expected 0");
    for (int s = 0; s < mdp.num_states; ++s) {
      if (mdp.timestep[s] < 0 || mdp.timestep[s] >= mdp.horizon)
        out.push_back("state " + mdp.state_name(s) + ": timestep " + std::to_string(mdp.timestep[s]) + " outside [0, horizon)");
      if (mdp.last_decision(s)) continue;  // transition rows unused after the last decision
      for (int o = 0; o < mdp.num_outcomes; ++o) {
        for (int s2 = 0; s2 < mdp.num_states; ++s2) {
          if (mdp.transition_prob(s, o, s2) > 0.0 && mdp.timestep[s2] != mdp.timestep[s] + 1) {
            out.push_back("transition (" + mdp.state_name(s) + ", o" + std::to_string(o) + ") reaches " +
                          mdp.state_name(s2) + " at timestep " + std::to_string(mdp.timestep[s2]) +
                          ", expected " + std::to_string(mdp.timestep[s] + 1));
          }
        }
      }
    }
  }

  if (mdp.variant == Variant::kObservedAction) {
    if (mdp.num_actions != mdp.num_outcomes) {
      out.push_back("variant mismatch: observed-action requires m = n");
    } else {
      for (int s = 0; s < mdp.num_states; ++s) {
        for (int a = 0; a < mdp.num_actions; ++a) {
          for (int o = 0; o < mdp.num_outcomes; ++o) {
            double expect = (o == a) ? 1.0 : 0.0;
            if (std::abs(mdp.outcome_prob(s, a, o) - expect) > row_sum_tol) {
              out.push_back("variant mismatch: outcome row (" + mdp.state_name(s) + ", a" + std::to_string(a) +
                            ") is not one-hot on outcome " + std::to_string(a));
              o = mdp.num_outcomes;  // one message per row
            }
          }
        }
      }
    }
  }
  return out;
}

inline void require_valid(const PrincipalAgentMdp& mdp) {
  auto v = validate(mdp);
  if (!v.empty()) throw std::invalid_argument("invalid principal-agent MDP: " + v.front());
}

struct ViewStep {
  double reward = 0.0;
  int next_state = -1;
  int outcome = -1;
  bool done = false;
};

/// Single-player view of the game from the agent's side, under a fixed
/// principal policy rho. View states are (state, contract) pairs; the
/// contract in every future state is rho(s').
class AgentMdpView {
 public:
  AgentMdpView(const PrincipalAgentMdp& mdp, const PrincipalPolicy& rho) : mdp_(&mdp), rho_(&rho) {}

  struct State {
    int s;
    Contract contract;
  };

  State initial() const { return {mdp_->initial_state, rho_->contract_of[mdp_->initial_state]}; }
  State at(int s) const { return {s, rho_->contract_of[s]}; }

  // Step with action a: reward is r(s,a) + b(o); the next pair carries rho(s').
  ViewStep step(const State& st, int a, Rng& rng) const {
    ViewStep out;
    out.outcome = rng.categorical(mdp_->outcome_row(st.s, a));
    out.reward = mdp_->reward_agent(st.s, a) + st.contract(out.outcome);
    out.done = mdp_->last_decision(st.s);
    if (!out.done) out.next_state = rng.categorical(mdp_->transition_row(st.s, out.outcome));
    return out;
  }

  const PrincipalAgentMdp& mdp() const { return *mdp_; }
  const PrincipalPolicy& rho() const { return *rho_; }

 private:
  const PrincipalAgentMdp* mdp_;
  const PrincipalPolicy* rho_;
};

/// Single-player view of the game from the principal's side, under a fixed
/// agent policy. Actions are contracts; the agent's response is baked in.
class PrincipalMdpView {
 public:
  PrincipalMdpView(const PrincipalAgentMdp& mdp, const AgentPolicy& pi) : mdp_(&mdp), pi_(&pi) {}

  ViewStep step(int s, const Contract& b, Rng& rng, int recommended = -1) const {
    if (!b.nonnegative()) throw std::invalid_argument("contract violates limited liability");
    ViewStep out;
    int a = pi_->act(*mdp_, s, b, recommended);
    out.outcome = rng.categorical(mdp_->outcome_row(s, a));
    out.reward = mdp_->reward_principal(s, out.outcome) - b(out.outcome);
    out.done = mdp_->last_decision(s);
    if (!out.done) out.next_state = rng.categorical(mdp_->transition_row(s, out.outcome));
    return out;
  }

  const PrincipalAgentMdp& mdp() const { return *mdp_; }

 private:
  const PrincipalAgentMdp* mdp_;
  const AgentPolicy* pi_;
};

}  // namespace contract_rl
