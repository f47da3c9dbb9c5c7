#include "crnsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <stdexcept>

#include "crnsim/parallel.hpp"
#include "crnsim/physics.hpp"

namespace crnsim {

void project_capped_simplex(std::span<double> v, double cap) {
  double positive = 0.0;
  for (double x : v) positive += std::max(x, 0.0);
  if (positive <= cap) {
    for (auto& x : v) x = std::max(x, 0.0);
    return;
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    prefix += sorted[r];
    const double candidate = (prefix - cap) / static_cast<double>(r + 1);
    if (r + 1 == sorted.size() || sorted[r + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

namespace {

// P_w and its gradient over a flat layout: occupant q owns [q*m, (q+1)*m).
struct PotentialProblem {
  const NetworkInstance& inst;
  int w;
  std::span<const int> occupants;
  std::size_t m;
  std::vector<double> gains;  // same layout as x
  std::vector<double> noise;  // per channel
  double scale;

  PotentialProblem(const NetworkInstance& in, int ap, std::span<const int> occ)
      : inst(in), w(ap), occupants(occ), m(in.channel_count(ap)) {
    const auto& chans = inst.channels_of(w);
    gains.resize(occupants.size() * m);
    for (std::size_t q = 0; q < occupants.size(); ++q)
      for (std::size_t c = 0; c < m; ++c) gains[q * m + c] = inst.gain(occupants[q], w, chans[c]);
    noise.resize(m);
    for (std::size_t c = 0; c < m; ++c) noise[c] = inst.noise(w, chans[c]);
    scale = 1.0 / (std::log(inst.log_base()) * inst.num_channels());
  }

  std::vector<double> received(const std::vector<double>& x) const {
    std::vector<double> s(m, 0.0);
    for (std::size_t q = 0; q < occupants.size(); ++q)
      for (std::size_t c = 0; c < m; ++c) s[c] += gains[q * m + c] * x[q * m + c];
    return s;
  }

  double value(const std::vector<double>& x) const {
    const auto s = received(x);
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += std::log1p(s[c] / noise[c]);
    return acc * scale;
  }

  std::vector<double> gradient(const std::vector<double>& x) const {
    const auto s = received(x);
    std::vector<double> g(x.size());
    for (std::size_t q = 0; q < occupants.size(); ++q)
      for (std::size_t c = 0; c < m; ++c) g[q * m + c] = scale * gains[q * m + c] / (noise[c] + s[c]);
    return g;
  }

  void project(std::vector<double>& x) const {
    for (std::size_t q = 0; q < occupants.size(); ++q)
      project_capped_simplex(std::span<double>(x.data() + q * m, m), inst.budget(occupants[q]));
  }
};

}  // namespace

PotentialMax maximize_potential(const NetworkInstance& inst, int w,
                                std::span<const int> occupants, double tol, int max_iters) {
  PotentialMax out;
  if (occupants.empty()) return out;
  const PotentialProblem prob(inst, w, occupants);
  const std::size_t m = prob.m;
  const std::size_t dim = occupants.size() * m;

  std::vector<double> x(dim);
  for (std::size_t q = 0; q < occupants.size(); ++q)
    for (std::size_t c = 0; c < m; ++c) x[q * m + c] = inst.budget(occupants[q]) / static_cast<double>(m);
  double fx = prob.value(x);
  auto g = prob.gradient(x);

  auto stationarity = [&](const std::vector<double>& at, const std::vector<double>& grad) {
    std::vector<double> y(dim);
    for (std::size_t k = 0; k < dim; ++k) y[k] = at[k] + grad[k];
    prob.project(y);
    double r = 0.0;
    for (std::size_t k = 0; k < dim; ++k) r = std::max(r, std::abs(y[k] - at[k]));
    return r;
  };

  constexpr double kMinStep = 1e-12;
  constexpr double kMaxStep = 1e12;
  constexpr double kArmijo = 1e-4;
  double lambda = 1.0;
  {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax > 0.0) lambda = 1.0 / gmax;
  }

  int it = 0;
  double station = stationarity(x, g);
  std::vector<double> trial(dim), dir(dim);
  while (it < max_iters && station >= tol) {
    ++it;
    for (std::size_t k = 0; k < dim; ++k) trial[k] = x[k] + lambda * g[k];
    prob.project(trial);
    double slope = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      dir[k] = trial[k] - x[k];
      slope += g[k] * dir[k];
    }
    if (slope <= 0.0) break;
    double s = 1.0;
    double ft = prob.value(trial);
    while (ft < fx + kArmijo * s * slope && s > 1e-20) {
      s *= 0.5;
      for (std::size_t k = 0; k < dim; ++k) trial[k] = x[k] + s * dir[k];
      ft = prob.value(trial);
    }
    if (!(ft > fx)) break;  // no ascent left at machine precision
    const auto gt = prob.gradient(trial);
    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double sk = trial[k] - x[k];
      ss += sk * sk;
      sy += sk * (gt[k] - g[k]);
    }
    // Concave objective: s.y <= 0; BB step is ss / -sy.
    lambda = (sy < 0.0) ? std::clamp(ss / -sy, kMinStep, kMaxStep) : kMaxStep;
    if (ss == 0.0) break;
    x.swap(trial);
    g = gt;
    fx = ft;
    station = stationarity(x, g);
  }

  out.value = fx;
  out.iterations = it;
  out.stationarity = station;
  out.powers.resize(occupants.size());
  for (std::size_t q = 0; q < occupants.size(); ++q)
    out.powers[q].assign(x.begin() + static_cast<long>(q * m), x.begin() + static_cast<long>((q + 1) * m));
  return out;
}

double equilibrium_potential(const NetworkInstance& inst, int w, std::span<const int> occupants,
                             double tol) {
  if (occupants.empty()) return 0.0;
  return maximize_potential(inst, w, occupants, tol).value;
}

SepResult exhaustive_sep(const NetworkInstance& inst, double tol) {
  const int n = inst.num_cus();
  const int num_aps = inst.num_aps();
  if (std::pow(static_cast<double>(num_aps), n) > kMaxAssociations || n > 30)
    throw std::invalid_argument("exhaustive_sep: too many association profiles");

  // P-bar_w depends only on the occupant set of w; solve each (w, subset) once.
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> ep(static_cast<std::size_t>(num_aps) * subsets, 0.0);
  parallel_for(ep.size(), [&](std::size_t k) {
    const int w = static_cast<int>(k / subsets);
    const std::size_t mask = k % subsets;
    if (mask == 0) return;
    std::vector<int> occ;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1U) occ.push_back(i);
    ep[k] = equilibrium_potential(inst, w, occ, tol);
  });

  SepResult result;
  const auto total = static_cast<std::size_t>(std::llround(std::pow(num_aps, n)));
  result.table.reserve(total);
  Association a(n, 0);
  double best = -1.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<std::size_t> masks(num_aps, 0);
    for (int i = 0; i < n; ++i) masks[a[i]] |= std::size_t{1} << i;
    SepRow row;
    row.assoc = a;
    row.ep.resize(num_aps);
    for (int w = 0; w < num_aps; ++w) {
      row.ep[w] = ep[static_cast<std::size_t>(w) * subsets + masks[w]];
      row.sep += row.ep[w];
    }
    // Relative slack keeps equal profiles from flipping on rounding.
    if (row.sep > best + 1e-12 * std::max(1.0, std::abs(best))) {
      best = row.sep;
      result.best = a;
    }
    result.table.push_back(std::move(row));
    // Next association in lexicographic order (last CU varies fastest).
    for (int i = n - 1; i >= 0; --i) {
      if (++a[i] < num_aps) break;
      a[i] = 0;
    }
  }
  result.sep = best;
  return result;
}

double max_throughput(const NetworkInstance& inst) { return exhaustive_sep(inst).sep; }

BaselineResult closest_ap_baseline(const NetworkInstance& inst, double tol) {
  const auto& cus = inst.cu_positions();
  const auto& aps = inst.ap_positions();
  if (cus.empty() || aps.empty()) throw std::invalid_argument("closest_ap_baseline: instance has no geometry");
  BaselineResult out;
  out.assoc.resize(inst.num_cus());
  for (int i = 0; i < inst.num_cus(); ++i) {
    int best = 0;
    double best_d = distance(cus[i], aps[0]);
    for (int w = 1; w < inst.num_aps(); ++w) {
      const double d = distance(cus[i], aps[w]);
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    out.assoc[i] = best;
  }
  InnerOptions opts;
  opts.tol = tol;
  out.powers = solve_all_aps(inst, out.assoc, uniform_profile(inst, out.assoc), opts);
  out.sum_rate = sum_rate(inst, out.assoc, out.powers);
  return out;
}

NetworkInstance merge_aps(const NetworkInstance& inst) {
  const int n = inst.num_cus();
  const int k = inst.num_channels();
  std::vector<double> gains(static_cast<std::size_t>(n) * k);
  std::vector<double> noise(k);
  for (int c = 0; c < k; ++c) {
    const int owner = inst.channel_owner()[c];
    noise[c] = inst.noise(owner, c);
    for (int i = 0; i < n; ++i) gains[static_cast<std::size_t>(i) * k + c] = inst.gain(i, owner, c);
  }
  std::vector<Point> ap;
  if (!inst.ap_positions().empty()) ap.push_back(inst.ap_positions().front());
  return NetworkInstance(n, 1, k, std::vector<int>(k, 0), std::move(gains), std::move(noise),
                         inst.budgets(), inst.cu_positions(), std::move(ap), inst.rng_seed(),
                         inst.log_base());
}

BaselineResult multi_connectivity_solve(const NetworkInstance& merged, double tol,
                                        const StepsizeSchedule& schedule, int max_iters) {
  if (merged.num_aps() != 1) throw std::invalid_argument("expects a merged single-AP instance");
  std::vector<int> everyone(merged.num_cus());
  for (int i = 0; i < merged.num_cus(); ++i) everyone[i] = i;
  BaselineResult out;
  out.assoc.assign(merged.num_cus(), 0);
  const auto init = uniform_profile(merged, out.assoc);
  out.powers = aiwf_solve(merged, 0, everyone, init, schedule, tol, max_iters).powers;
  out.sum_rate = sum_rate(merged, out.assoc, out.powers);
  return out;
}

double multi_connectivity_baseline(const NetworkInstance& inst, double tol,
                                   const StepsizeSchedule& schedule, int max_iters) {
  return multi_connectivity_solve(merge_aps(inst), tol, schedule, max_iters).sum_rate;
}

void write_sep_table(std::ostream& os, const SepResult& result, int num_aps) {
  os << "association,sep";
  for (int w = 0; w < num_aps; ++w) os << ",ep_" << w;
  os << '\n';
  const auto old = os.precision(12);
  for (const auto& row : result.table) {
    os << encode_association(row.assoc) << ',' << row.sep;
    for (double v : row.ep) os << ',' << v;
    os << '\n';
  }
  os.precision(old);
}

}  // namespace crnsim
