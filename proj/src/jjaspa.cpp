#include "crnsim/jjaspa.hpp"

#include <algorithm>
#include <stdexcept>

#include "crnsim/bestresp.hpp"
#include "crnsim/physics.hpp"

namespace crnsim {

CoalitionKey coalition_key(std::span<const int> occupants) {
  CoalitionKey key{std::vector<int>(occupants.begin(), occupants.end())};
  std::sort(key.members.begin(), key.members.end());
  key.members.erase(std::unique(key.members.begin(), key.members.end()), key.members.end());
  return key;
}

void CuMemories::push(int ap, InterferenceSnapshot interference, double rate, long iteration) {
  am_.push_back(ap);
  im_.push_back(std::move(interference));
  rm_.push_back(rate);
  stamp_.push_back(iteration);
  if (static_cast<int>(am_.size()) > capacity_) {
    am_.pop_front();
    im_.pop_front();
    rm_.pop_front();
    stamp_.pop_front();
  }
}

JJaspaRun::JJaspaRun(const NetworkInstance& inst, LearnConfig config, std::uint64_t seed)
    : inst_(inst), config_(std::move(config)), rng_(seed),
      monitor_(config_.stop_window > 0 ? config_.stop_window : config_.memory) {
  if (config_.memory < 1) throw ConfigError("memory length M must be >= 1");
  if (config_.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  state_.assoc = random_association(inst_, rng_);
  state_.powers.resize(inst_.num_cus());
  for (int i = 0; i < inst_.num_cus(); ++i)
    state_.powers[i] = random_power(inst_, i, state_.assoc[i], rng_);
  state_.stay.assign(inst_.num_cus(), 1);
  memories_.assign(inst_.num_cus(), CuMemories(config_.memory));
  records_.resize(inst_.num_aps());
  trace_.algo = "jjaspa";
}

long JJaspaRun::coalition_count() const {
  long total = 0;
  for (const auto& table : records_) total += static_cast<long>(table.size());
  return total;
}

void JJaspaRun::update_records(const InterferenceMap& imap, long t) {
  const auto occupants = occupants_by_ap(inst_, state_.assoc);
  for (int w = 0; w < inst_.num_aps(); ++w) {
    if (occupants[w].empty()) continue;
    auto& table = records_[w];
    auto key = coalition_key(occupants[w]);
    auto it = table.find(key);
    if (it == table.end()) {
      if (table.size() >= kMaxCoalitionsPerAp) {
        auto victim = std::min_element(table.begin(), table.end(), [](const auto& a, const auto& b) {
          return a.second.last_visit < b.second.last_visit;
        });
        table.erase(victim);
        if (!evicted_) {
          evicted_ = true;
          trace_.warnings.push_back("coalition table full; evicting least recently visited records");
        }
      }
      it = table.emplace(std::move(key), ApCoalitionRecord{}).first;
    }
    auto& rec = it->second;
    rec.powers.clear();
    rec.interference.clear();
    for (int i : it->first.members) {
      rec.powers.push_back(state_.powers[i]);
      const auto seen = imap.at(i, w);
      rec.interference.emplace_back(seen.begin(), seen.end());
    }
    ++rec.visits;
    rec.last_visit = t;
  }
}

bool JJaspaRun::step() {
  if (done_ && config_.stop_on_convergence) return true;
  const int n = inst_.num_cus();
  const int num_aps = inst_.num_aps();
  const long t = state_.t;
  TraceRow row = detail::make_row(inst_, state_.assoc, state_.powers, t);

  // CU memories: own AP, interference at every AP, realized rate.
  const auto imap = interference_map(inst_, state_.assoc, state_.powers);
  for (int i = 0; i < n; ++i) {
    InterferenceSnapshot snap(num_aps);
    for (int w = 0; w < num_aps; ++w) {
      const auto seen = imap.at(i, w);
      snap[w].assign(seen.begin(), seen.end());
    }
    const int home = state_.assoc[i];
    const double r = rate(inst_, i, home, state_.powers[i], imap.at(i, home));
    memories_[i].push(home, std::move(snap), r, t);
  }

  // AP memories for the coalitions currently in place.
  update_records(imap, t);

  // Sample one aligned memory slot and pick among the APs that beat it.
  Association next(n);
  last_samples_.assign(n, 0);
  last_candidates_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    const std::size_t slot = rng_.index(memories_[i].size());
    last_samples_[i] = slot;
    const auto entry = memories_[i].at(slot);
    auto& candidates = last_candidates_[i];
    for (int w = 0; w < num_aps; ++w) {
      if (w == entry.ap || best_rate_at(inst_, i, w, (*entry.interference)[w]).rate > entry.rate)
        candidates.push_back(w);
    }
    next[i] = candidates[rng_.index(candidates.size())];
  }

  // Powers from the record of the coalition each CU joins.
  const auto next_occupants = occupants_by_ap(inst_, next);
  PowerProfile updated(n);
  int switchers = 0;
  for (int i = 0; i < n; ++i) {
    const int w = next[i];
    if (w != state_.assoc[i]) {
      ++switchers;
      state_.stay[i] = 1;
    } else {
      ++state_.stay[i];
    }
    const auto key = coalition_key(next_occupants[w]);
    const auto it = records_[w].find(key);
    if (it == records_[w].end()) {
      updated[i] = random_power(inst_, i, w, rng_);
      continue;
    }
    const auto& rec = it->second;
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(key.members.begin(), key.members.end(), i) - key.members.begin());
    const double a = config_.schedule.alpha(rec.visits);
    const auto target = waterfill(inst_, i, w, rec.interference[pos]);
    const auto& last = rec.powers[pos];
    updated[i].resize(target.size());
    for (std::size_t m = 0; m < target.size(); ++m)
      updated[i][m] = (1.0 - a) * last[m] + a * target[m];
  }

  state_.powers = std::move(updated);
  row.num_switchers = switchers;
  row.coalitions = coalition_count();
  trace_.rows.push_back(row);
  state_.assoc = std::move(next);
  ++state_.t;

  const bool switched = switchers > 0;
  const bool certified = !done_ && !switched &&
                         certify_jep(inst_, state_.assoc, state_.powers, config_.certify_tol).pass;
  monitor_.record(t, switchers == 0, switched, certified);
  if (!done_ && monitor_.converged()) {
    done_ = true;
    trace_.converged = true;
    trace_.iterations_to_converge = monitor_.iterations_to_converge();
  }
  return done_;
}

RunTrace JJaspaRun::finish() {
  trace_.iterations_run = state_.t;
  detail::finalize_trace(inst_, state_.assoc, state_.powers, config_.certify_tol, trace_);
  return trace_;
}

RunTrace run_jjaspa(const NetworkInstance& inst, const LearnConfig& config, std::uint64_t seed) {
  JJaspaRun run(inst, config, seed);
  for (int k = 0; k < config.max_iters; ++k)
    if (run.step() && config.stop_on_convergence) break;
  return run.finish();
}

}  // namespace crnsim
