#include "crnsim/learn.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "crnsim/bestresp.hpp"
#include "crnsim/physics.hpp"

namespace crnsim {

namespace {

constexpr double kConcentrated = 1e-9;

int default_window(const LearnConfig& config, int fallback) {
  return config.stop_window > 0 ? config.stop_window : fallback;
}

void check_config(const NetworkInstance& inst, const LearnConfig& config) {
  if (config.memory < 1) throw ConfigError("memory length M must be >= 1");
  if (config.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!config.costs.empty() && static_cast<int>(config.costs.size()) != inst.num_cus())
    throw ConfigError("per-CU cost vector must have one entry per CU");
  for (int i = 0; i < inst.num_cus(); ++i)
    if (!(config.cost_of(i) >= 0.0)) throw ConfigError("connection costs must be >= 0");
  if (!(config.certify_tol > 0.0)) throw ConfigError("certify_tol must be > 0");
}

std::vector<ReplyMemory> fresh_memories(const NetworkInstance& inst, int capacity) {
  return std::vector<ReplyMemory>(inst.num_cus(), ReplyMemory(inst.num_aps(), capacity));
}

void mark_converged_rows(RunTrace& trace) {
  if (!trace.converged) return;
  for (auto& row : trace.rows) row.converged = row.iteration + 1 >= trace.iterations_to_converge;
}

}  // namespace

// ---------------------------------------------------------------- memory

ReplyMemory::ReplyMemory(int num_aps, int capacity)
    : num_aps_(num_aps), capacity_(capacity), counts_(num_aps, 0) {
  if (num_aps < 1) throw std::invalid_argument("ReplyMemory: num_aps must be >= 1");
  if (capacity < 1) throw std::invalid_argument("ReplyMemory: capacity must be >= 1");
}

void ReplyMemory::push(int best_reply) {
  if (best_reply < 0 || best_reply >= num_aps_) throw std::invalid_argument("ReplyMemory: bad AP index");
  replies_.push_back(best_reply);
  ++counts_[best_reply];
  if (static_cast<int>(replies_.size()) > capacity_) {
    --counts_[replies_.front()];
    replies_.pop_front();
  }
}

std::vector<double> ReplyMemory::beta() const {
  std::vector<double> b(num_aps_, 0.0);
  if (replies_.empty()) return b;
  const double n = static_cast<double>(replies_.size());
  for (int w = 0; w < num_aps_; ++w) b[w] = counts_[w] / n;
  return b;
}

double ReplyMemory::max_beta() const {
  if (replies_.empty()) return 0.0;
  return *std::max_element(counts_.begin(), counts_.end()) / static_cast<double>(replies_.size());
}

ReplyMemory beta_update(ReplyMemory mem, int best_reply) {
  mem.push(best_reply);
  return mem;
}

int sample_association(std::span<const double> beta, Rng& rng) {
  return static_cast<int>(rng.categorical(beta));
}

// ---------------------------------------------------------------- shared

double LearnConfig::cost_of(int i) const { return costs.empty() ? cost : costs[i]; }

double LearnConfig::max_cost() const {
  if (costs.empty()) return cost;
  return *std::max_element(costs.begin(), costs.end());
}

void ConvergenceMonitor::record(long t, bool quiet, bool switched, bool certified) {
  quiet_run_ = quiet ? quiet_run_ + 1 : 0;
  if (switched || !certified)
    certified_since_ = -1;
  else if (certified_since_ < 0)
    certified_since_ = t;
}

JepCertificate certify_jep(const NetworkInstance& inst, const Association& assoc,
                           const PowerProfile& powers, double tol) {
  const auto imap = interference_map(inst, assoc, powers);
  JepCertificate cert;
  cert.gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.num_cus(); ++i) {
    const double current = rate(inst, i, assoc[i], powers[i], imap.at(i, assoc[i]));
    double best = current;
    for (int w = 0; w < inst.num_aps(); ++w)
      best = std::max(best, best_rate_at(inst, i, w, imap.at(i, w)).rate);
    const double gap = best - current;
    if (gap > cert.gap) {
      cert.gap = gap;
      cert.worst_cu = i;
    }
  }
  cert.pass = cert.gap <= tol;
  return cert;
}

Association random_association(const NetworkInstance& inst, Rng& rng) {
  Association a(inst.num_cus());
  for (auto& w : a) w = static_cast<int>(rng.index(inst.num_aps()));
  return a;
}

PowerVector random_power(const NetworkInstance& inst, int i, int w, Rng& rng) {
  auto p = rng.dirichlet_flat(inst.channel_count(w));
  for (auto& v : p) v *= inst.budget(i);
  return p;
}

namespace detail {

TraceRow make_row(const NetworkInstance& inst, const Association& assoc,
                  const PowerProfile& powers, long t) {
  TraceRow row;
  row.iteration = t;
  row.sum_rate = sum_rate(inst, assoc, powers);
  row.potential = system_potential(inst, assoc, powers);
  return row;
}

void finalize_trace(const NetworkInstance& inst, const Association& assoc,
                    const PowerProfile& powers, double tol, RunTrace& trace) {
  trace.assoc = assoc;
  trace.powers = powers;
  trace.sum_rate = sum_rate(inst, assoc, powers);
  trace.potential = system_potential(inst, assoc, powers);
  trace.certificate_gap = certify_jep(inst, assoc, powers, tol).gap;
  mark_converged_rows(trace);
}

}  // namespace detail

// ---------------------------------------------------------------- JASPA

JaspaRun::JaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed)
    : inst_(inst), config_(std::move(config)), rng_(seed),
      monitor_(default_window(config_, config_.memory)) {
  check_config(inst_, config_);
  state_.assoc = random_association(inst_, rng_);
  state_.powers = uniform_profile(inst_, state_.assoc);
  state_.memory = fresh_memories(inst_, config_.memory);
  state_.stay.assign(inst_.num_cus(), 1);
  trace_.algo = "jaspa";
  if (config_.memory < inst_.num_cus())
    trace_.warnings.push_back("memory length M < N; convergence guarantee needs M >= N");
}

JaspaRun::JaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed,
                   Association initial)
    : JaspaRun(inst, std::move(config), seed) {
  check_association(inst_, initial);
  state_.assoc = std::move(initial);
  state_.powers = uniform_profile(inst_, state_.assoc);
}

bool JaspaRun::step() {
  if (done_ && config_.stop_on_convergence) return true;
  const int n = inst_.num_cus();
  const long t = state_.t;

  // Inner loop: equilibrium powers for the current association.
  bool inner_ok = true;
  state_.powers = solve_all_aps(inst_, state_.assoc, state_.powers, config_.inner, &inner_ok);
  if (!inner_ok && std::find(trace_.warnings.begin(), trace_.warnings.end(),
                             "inner solver hit max_iters") == trace_.warnings.end())
    trace_.warnings.push_back("inner solver hit max_iters");

  TraceRow row = detail::make_row(inst_, state_.assoc, state_.powers, t);
  const auto imap = interference_map(inst_, state_.assoc, state_.powers);

  Association next(n);
  best_replies_.assign(n, 0);
  std::vector<double> rates(inst_.num_aps(), 0.0);
  double worst_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    const int home = state_.assoc[i];
    const double current = rate(inst_, i, home, state_.powers[i], imap.at(i, home));
    for (int w = 0; w < inst_.num_aps(); ++w)
      rates[w] = (w == home) ? current : best_rate_at(inst_, i, w, imap.at(i, w)).rate;
    const int reply = select_best_ap(home, rates, current, config_.cost_of(i), rng_);
    best_replies_[i] = reply;
    state_.memory[i].push(reply);
    next[i] = sample_association(state_.memory[i].beta(), rng_);
    worst_gap = std::max(worst_gap, 1.0 - state_.memory[i].max_beta());
  }

  int switchers = 0;
  for (int i = 0; i < n; ++i) {
    if (next[i] == state_.assoc[i]) {
      ++state_.stay[i];
      continue;
    }
    ++switchers;
    state_.stay[i] = 1;
    state_.powers[i] = uniform_power(inst_, i, next[i]);
  }
  row.num_switchers = switchers;
  row.max_beta_gap = worst_gap;
  trace_.rows.push_back(row);

  state_.assoc = std::move(next);
  ++state_.t;

  const bool switched = switchers > 0;
  const bool certified = !done_ && !switched &&
                         certify_jep(inst_, state_.assoc, state_.powers, config_.certify_tol + config_.max_cost()).pass;
  monitor_.record(t, switchers == 0 && worst_gap <= kConcentrated, switched, certified);
  if (!done_ && monitor_.converged()) {
    done_ = true;
    trace_.converged = true;
    trace_.iterations_to_converge = monitor_.iterations_to_converge();
  }
  return done_;
}

RunTrace JaspaRun::finish() {
  if (!done_) state_.powers = solve_all_aps(inst_, state_.assoc, state_.powers, config_.inner);
  trace_.iterations_run = state_.t;
  detail::finalize_trace(inst_, state_.assoc, state_.powers,
                         config_.certify_tol + config_.max_cost(), trace_);
  return trace_;
}

// ---------------------------------------------------------------- Se-JASPA

SeJaspaRun::SeJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed)
    : inst_(inst), config_(std::move(config)), rng_(seed),
      monitor_(default_window(config_, inst.num_cus())) {
  check_config(inst_, config_);
  state_.assoc = random_association(inst_, rng_);
  state_.powers.resize(inst_.num_cus());
  for (int i = 0; i < inst_.num_cus(); ++i)
    state_.powers[i] = random_power(inst_, i, state_.assoc[i], rng_);
  state_.stay.assign(inst_.num_cus(), 1);
  trace_.algo = "se";
}

bool SeJaspaRun::step() {
  if (done_ && config_.stop_on_convergence) return true;
  const long t = state_.t;
  const int actor = static_cast<int>((t + 1) % inst_.num_cus());
  TraceRow row = detail::make_row(inst_, state_.assoc, state_.powers, t);

  std::vector<BestRate> options(inst_.num_aps());
  std::vector<double> rates(inst_.num_aps());
  for (int w = 0; w < inst_.num_aps(); ++w) {
    const auto interference = interference_at(inst_, state_.assoc, state_.powers, actor, w);
    options[w] = best_rate_at(inst_, actor, w, interference);
    rates[w] = options[w].rate;
  }
  const int target = argmax_random_tie(rates, rng_);
  const bool switched = target != state_.assoc[actor];
  state_.stay[actor] = switched ? 1 : state_.stay[actor] + 1;
  state_.assoc[actor] = target;
  state_.powers[actor] = std::move(options[target].power);

  row.num_switchers = switched ? 1 : 0;
  trace_.rows.push_back(row);
  ++state_.t;

  const bool certified = !done_ && !switched &&
                         certify_jep(inst_, state_.assoc, state_.powers, config_.certify_tol).pass;
  monitor_.record(t, !switched, switched, certified);
  if (!done_ && monitor_.converged()) {
    done_ = true;
    trace_.converged = true;
    trace_.iterations_to_converge = monitor_.iterations_to_converge();
  }
  return done_;
}

RunTrace SeJaspaRun::finish() {
  trace_.iterations_run = state_.t;
  detail::finalize_trace(inst_, state_.assoc, state_.powers, config_.certify_tol, trace_);
  return trace_;
}

// ---------------------------------------------------------------- Si-JASPA

SiJaspaRun::SiJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed)
    : inst_(inst), config_(std::move(config)), rng_(seed),
      monitor_(default_window(config_, config_.memory)) {
  check_config(inst_, config_);
  state_.assoc = random_association(inst_, rng_);
  state_.powers.resize(inst_.num_cus());
  for (int i = 0; i < inst_.num_cus(); ++i)
    state_.powers[i] = random_power(inst_, i, state_.assoc[i], rng_);
  state_.memory = fresh_memories(inst_, config_.memory);
  state_.stay.assign(inst_.num_cus(), 1);
  trace_.algo = "si";
}

bool SiJaspaRun::step() {
  if (done_ && config_.stop_on_convergence) return true;
  const int n = inst_.num_cus();
  const long t = state_.t;
  TraceRow row = detail::make_row(inst_, state_.assoc, state_.powers, t);
  const auto imap = interference_map(inst_, state_.assoc, state_.powers);

  Association next(n);
  std::vector<double> rates(inst_.num_aps(), 0.0);
  double worst_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    const int home = state_.assoc[i];
    const double current = rate(inst_, i, home, state_.powers[i], imap.at(i, home));
    for (int w = 0; w < inst_.num_aps(); ++w)
      rates[w] = (w == home) ? current : best_rate_at(inst_, i, w, imap.at(i, w)).rate;
    state_.memory[i].push(select_best_ap(home, rates, current, config_.cost_of(i), rng_));
    next[i] = sample_association(state_.memory[i].beta(), rng_);
    worst_gap = std::max(worst_gap, 1.0 - state_.memory[i].max_beta());
  }

  // Best-response powers against the profile of iteration t, then the
  // stay-damped update.
  int switchers = 0;
  PowerProfile updated(n);
  for (int i = 0; i < n; ++i) {
    const int w = next[i];
    auto target = waterfill(inst_, i, w, imap.at(i, w));
    if (w != state_.assoc[i]) {
      ++switchers;
      state_.stay[i] = 1;
      updated[i] = std::move(target);
    } else {
      ++state_.stay[i];
      const double a = config_.schedule.alpha(state_.stay[i]);
      updated[i].resize(target.size());
      for (std::size_t m = 0; m < target.size(); ++m)
        updated[i][m] = (1.0 - a) * state_.powers[i][m] + a * target[m];
    }
  }
  state_.powers = std::move(updated);
  row.num_switchers = switchers;
  row.max_beta_gap = worst_gap;
  trace_.rows.push_back(row);
  state_.assoc = std::move(next);
  ++state_.t;

  const bool switched = switchers > 0;
  const bool certified = !done_ && !switched &&
                         certify_jep(inst_, state_.assoc, state_.powers, config_.certify_tol + config_.max_cost()).pass;
  monitor_.record(t, switchers == 0 && worst_gap <= kConcentrated, switched, certified);
  if (!done_ && monitor_.converged()) {
    done_ = true;
    trace_.converged = true;
    trace_.iterations_to_converge = monitor_.iterations_to_converge();
  }
  return done_;
}

RunTrace SiJaspaRun::finish() {
  trace_.iterations_run = state_.t;
  detail::finalize_trace(inst_, state_.assoc, state_.powers,
                         config_.certify_tol + config_.max_cost(), trace_);
  return trace_;
}

// ---------------------------------------------------------------- drivers

namespace {
template <class Run>
RunTrace drive(Run run, const LearnConfig& config) {
  for (int k = 0; k < config.max_iters; ++k)
    if (run.step() && config.stop_on_convergence) break;
  return run.finish();
}
}  // namespace

RunTrace run_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed) {
  return drive(JaspaRun(inst, config, seed), config);
}

RunTrace run_se_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed) {
  return drive(SeJaspaRun(inst, config, seed), config);
}

RunTrace run_si_jaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed) {
  return drive(SiJaspaRun(inst, config, seed), config);
}

}  // namespace crnsim
