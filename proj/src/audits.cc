// Copyright 2026 The Leakgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leakgame/audits.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "leakgame/algebra.h"
#include "leakgame/dp_solver.h"
#include "leakgame/measures.h"
#include "leakgame/qif_solver.h"

namespace leakgame {

namespace {

constexpr std::size_t kMaxGridActions = 4;
// Certificate target for the QIF solve inside an audit. The default solver
// tolerance is not reachable within the default iteration budget.
constexpr double kAuditQifTolerance = 5e-3;

std::size_t Subdivisions(double step) {
  if (!(step > 0.0 && step <= 0.1)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must lie in (0, 0.1]");
  }
  return static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9));
}

// Enumerates compositions of m into n parts in lexicographic order.
void ForEachComposition(std::size_t n, std::size_t m,
                        const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> k(n, 0);
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == n) {
      k[i] = left;
      visit(k);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      k[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, m);
}

std::uint64_t Key(const std::vector<std::size_t>& k, std::size_t m) {
  std::uint64_t key = 0;
  for (std::size_t c : k) key = key * (m + 1) + c;
  return key;
}

struct GridScan {
  std::vector<double> best_delta;
  double best_value = std::numeric_limits<double>::infinity();
  // Largest |f(p) - f(q)| between lattice neighbours, if requested.
  double max_neighbour_change = 0.0;
};

GridScan ScanGrid(std::size_t n, std::size_t m, bool track_neighbours,
                  const std::function<double(const std::vector<double>&)>& f) {
  GridScan scan;
  std::unordered_map<std::uint64_t, double> values;
  std::vector<double> point(n);
  const double inv = 1.0 / static_cast<double>(m);
  ForEachComposition(n, m, [&](const std::vector<std::size_t>& k) {
    for (std::size_t i = 0; i < n; ++i) point[i] = static_cast<double>(k[i]) * inv;
    const double v = f(point);
    if (v < scan.best_value - 1e-15) {
      scan.best_value = v;
      scan.best_delta = point;
    }
    if (track_neighbours) values.emplace(Key(k, m), v);
  });
  if (track_neighbours) {
    ForEachComposition(n, m, [&](const std::vector<std::size_t>& k) {
      const double here = values.at(Key(k, m));
      std::vector<std::size_t> nb = k;
      for (std::size_t i = 0; i < n; ++i) {
        if (k[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          --nb[i];
          ++nb[j];
          const double there = values.at(Key(nb, m));
          if (std::isfinite(here) && std::isfinite(there)) {
            scan.max_neighbour_change = std::max(scan.max_neighbour_change, std::abs(here - there));
          }
          ++nb[i];
          --nb[j];
        }
      }
    });
  }
  return scan;
}

void CheckGridGame(const GameSpec& game) {
  if (game.num_defender_actions() > kMaxGridActions) {
    throw Error(ErrorCode::kTooManyActions, "grid oracle supports at most 4 defender actions");
  }
}

bool IsPositive(double v) { return v >= kZeroThreshold; }

void RequireFullSupport(const Prior& prior, const Labels& inputs) {
  if (prior.labels() != inputs) {
    throw Error(ErrorCode::kLabelMismatch, "prior labels differ from channel inputs");
  }
  for (double w : prior.weights()) {
    if (!IsPositive(w)) throw Error(ErrorCode::kInvalidArgument, "prior must have full support");
  }
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

void ForEachSimplexGridPoint(std::size_t n, double step,
                             const std::function<void(std::span<const double>)>& visit) {
  if (n == 0) throw Error(ErrorCode::kEmptyDomain, "simplex of dimension zero");
  const std::size_t m = Subdivisions(step);
  std::vector<double> point(n);
  ForEachComposition(n, m, [&](const std::vector<std::size_t>& k) {
    for (std::size_t i = 0; i < n; ++i) point[i] = static_cast<double>(k[i]) / static_cast<double>(m);
    visit(point);
  });
}

GridOptimum BruteForceQif(const GameSpec& game, double grid_step) {
  const QifMeasure& q = game.qif();
  CheckGridGame(game);
  const std::size_t n = game.num_defender_actions();
  const std::size_t m = Subdivisions(grid_step);
  std::vector<std::vector<Channel>> families;
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    families.push_back(game.ChannelsForAttack(a));
  }
  const GridScan scan = ScanGrid(n, m, false, [&](const std::vector<double>& delta) {
    const MixedStrategy s = Distribution::Create(game.defender_actions(), delta);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& family : families) {
      worst = std::max(worst, PosteriorVulnerability(q.gain, q.prior, HiddenChoice(s, family)));
    }
    return worst;
  });
  const double step = 1.0 / static_cast<double>(m);
  return {scan.best_delta, scan.best_value, step,
          QifObjective(game).LipschitzBound() * step * static_cast<double>(n - 1)};
}

GridOptimum BruteForceDpHidden(const GameSpec& game, double grid_step) {
  const DpMeasure& dp = game.dp();
  CheckGridGame(game);
  const std::size_t n = game.num_defender_actions();
  const std::size_t m = Subdivisions(grid_step);
  std::vector<std::vector<Channel>> families;
  for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
    families.push_back(game.ChannelsForAttack(a));
  }
  const GridScan scan = ScanGrid(n, m, n > 1, [&](const std::vector<double>& delta) {
    const MixedStrategy s = Distribution::Create(game.defender_actions(), delta);
    double worst = 0.0;
    for (const auto& family : families) {
      worst = std::max(worst, DpLevelOf(HiddenChoice(s, family), dp.adjacency).value());
    }
    return worst;
  });
  const double step = 1.0 / static_cast<double>(m);
  return {scan.best_delta, scan.best_value, step,
          scan.max_neighbour_change * static_cast<double>(n - 1)};
}

std::vector<Prior> SampleDirichletPriors(const Labels& secrets, std::size_t count,
                                         std::uint64_t seed) {
  if (secrets.empty()) throw Error(ErrorCode::kEmptyDomain, "no secrets to sample over");
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<Prior> priors;
  priors.reserve(count);
  while (priors.size() < count) {
    std::vector<double> w(secrets.size());
    double sum = 0.0;
    for (double& v : w) {
      v = gamma(rng);
      sum += v;
    }
    bool full = sum > 0.0;
    for (double& v : w) {
      v /= sum;
      full = full && IsPositive(v);
    }
    if (full) priors.push_back(Distribution::Create(secrets, std::move(w)));
  }
  return priors;
}

BayesBoundReport CheckBayesHypothesisBound(const Channel& channel,
                                           const AdjacencyRelation& adjacency,
                                           const std::vector<Prior>& priors) {
  if (!IsConforming(channel, adjacency)) {
    throw Error(ErrorCode::kNonConforming, "channel is not conforming to the adjacency relation");
  }
  BayesBoundReport report;
  report.epsilon = DpLevelOf(channel, adjacency).value();
  const double bound = std::exp(report.epsilon);
  report.min_slack = std::numeric_limits<double>::infinity();
  const auto pairs = adjacency.Resolve(channel.inputs());
  const Eigen::Index nx = channel.num_inputs();
  for (std::size_t p = 0; p < priors.size(); ++p) {
    const Prior& prior = priors[p];
    RequireFullSupport(prior, channel.inputs());
    for (Eigen::Index y = 0; y < channel.num_outputs(); ++y) {
      double py = 0.0;
      for (Eigen::Index x = 0; x < nx; ++x) py += prior[static_cast<std::size_t>(x)] * channel(x, y);
      if (!IsPositive(py)) continue;
      for (const auto& [i, j] : pairs) {
        for (const auto& [x, xp] : {std::pair{i, j}, std::pair{j, i}}) {
          const double post_x = prior[x] * channel(static_cast<Eigen::Index>(x), y) / py;
          const double post_xp = prior[xp] * channel(static_cast<Eigen::Index>(xp), y) / py;
          if (!IsPositive(post_x) && !IsPositive(post_xp)) continue;
          ++report.checks;
          const double inflation = (post_x / post_xp) / (prior[x] / prior[xp]);
          report.max_inflation = std::max(report.max_inflation, inflation);
          const double slack = bound - inflation;
          report.min_slack = std::min(report.min_slack, slack);
          if (slack < -1e-9 * bound) {
            report.violations.push_back("prior " + std::to_string(p) + ", output " +
                                        channel.outputs()[static_cast<std::size_t>(y)] + ", pair (" +
                                        channel.inputs()[x] + ", " + channel.inputs()[xp] +
                                        "): inflation " + Fmt(inflation) + " > e^eps " + Fmt(bound));
          }
        }
      }
    }
  }
  if (report.checks == 0) report.min_slack = bound - 1.0;
  return report;
}

InfoIncreaseReport CheckInfoIncreaseBounds(const Channel& channel,
                                           const AdjacencyRelation& adjacency,
                                           const std::vector<Prior>& priors, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kNegativeEpsilon, "alpha must be non-negative");
  if (!IsConforming(channel, adjacency)) {
    throw Error(ErrorCode::kNonConforming, "channel is not conforming to the adjacency relation");
  }
  InfoIncreaseReport report;
  report.epsilon = DpLevelOf(channel, adjacency).value();
  const Eigen::Index nx = channel.num_inputs();
  // Ratios outside [e^-alpha, e^alpha], kept for direction (1).
  std::vector<std::string> out_of_band;
  for (std::size_t p = 0; p < priors.size(); ++p) {
    const Prior& prior = priors[p];
    RequireFullSupport(prior, channel.inputs());
    for (Eigen::Index y = 0; y < channel.num_outputs(); ++y) {
      double py = 0.0;
      for (Eigen::Index x = 0; x < nx; ++x) py += prior[static_cast<std::size_t>(x)] * channel(x, y);
      if (!IsPositive(py)) continue;
      for (Eigen::Index x = 0; x < nx; ++x) {
        // p(x|y) / p(x) = C(x, y) / p(y).
        const double ratio = channel(x, y) / py;
        ++report.checks;
        const double log_ratio = IsPositive(ratio) ? std::abs(std::log(ratio))
                                                   : std::numeric_limits<double>::infinity();
        report.observed_alpha = std::max(report.observed_alpha, log_ratio);
        if (log_ratio > alpha + 1e-12) {
          out_of_band.push_back("prior " + std::to_string(p) + ", output " +
                                channel.outputs()[static_cast<std::size_t>(y)] + ", secret " +
                                channel.inputs()[static_cast<std::size_t>(x)] + ": |ln ratio| " +
                                Fmt(log_ratio) + " > alpha " + Fmt(alpha));
        }
      }
    }
  }
  report.direction1_applicable = report.epsilon <= alpha + 1e-12;
  if (report.direction1_applicable) {
    for (auto& v : out_of_band) report.violations.push_back("direction (1): " + v);
  }
  report.direction2_applicable = out_of_band.empty() && !priors.empty();
  if (report.direction2_applicable && !CheckDp(channel, adjacency, 2.0 * alpha)) {
    report.violations.push_back("direction (2): level " + Fmt(report.epsilon) + " exceeds 2 alpha " +
                                Fmt(2.0 * alpha));
  }
  if (!priors.empty() && report.epsilon > 2.0 * report.observed_alpha + 1e-12) {
    report.violations.push_back("level " + Fmt(report.epsilon) + " exceeds twice the observed " +
                                Fmt(report.observed_alpha));
  }
  return report;
}

VnmWitness VnmIndependenceWitness(double d) {
  if (!(d > 0.0 && d < 0.25)) {
    throw Error(ErrorCode::kParameterOutOfRange, "witness parameter must lie in (0, 1/4)");
  }
  const Labels x = {"x0", "x1"};
  const Labels y = {"y0", "y1"};
  const Channel c1 = Channel::FromRows(x, y, {{1 - 2 * d, 2 * d}, {2 * d, 1 - 2 * d}});
  const Channel c2 = Channel::FromRows(x, y, {{1 - d, d}, {d, 1 - d}});
  const Channel c3 = Channel::FromRows(x, y, {{d, 1 - d}, {1 - d, d}});
  const MixedStrategy half = Distribution::Uniform({"c", "c3"});
  const Channel mix1 = HiddenChoice(half, std::vector<Channel>{c1, c3});
  const Channel mix2 = HiddenChoice(half, std::vector<Channel>{c2, c3});
  const Prior pi = Uniform(x);
  const AdjacencyRelation all = AdjacencyRelation::AllPairs();

  VnmWitness w;
  w.d = d;
  w.qif_c1 = BayesPosterior(pi, c1);
  w.qif_c2 = BayesPosterior(pi, c2);
  w.qif_mix1 = BayesPosterior(pi, mix1);
  w.qif_mix2 = BayesPosterior(pi, mix2);
  w.dp_c1 = DpLevelOf(c1, all).value();
  w.dp_c2 = DpLevelOf(c2, all).value();
  w.dp_mix1 = DpLevelOf(mix1, all).value();
  w.dp_mix2 = DpLevelOf(mix2, all).value();
  w.qif_reversal = w.qif_c1 < w.qif_c2 && w.qif_mix1 > w.qif_mix2;
  w.dp_reversal = w.dp_c1 < w.dp_c2 && w.dp_mix1 > w.dp_mix2;
  if (!w.qif_reversal || !w.dp_reversal) {
    throw Error(ErrorCode::kNumericalFailure, "preference reversal not observed at d = " + Fmt(d));
  }
  return w;
}

bool GameAudit::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

namespace {

double GridStepFor(std::size_t n) {
  if (n <= 2) return 1e-3;
  if (n == 3) return 5e-3;
  return 0.02;
}

std::vector<MixedStrategy> RandomStrategies(const Labels& actions, std::size_t count,
                                            std::uint64_t seed) {
  return SampleDirichletPriors(actions, count, seed);
}

MixedStrategy Blend(const MixedStrategy& p, const MixedStrategy& q, double t) {
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = t * p[i] + (1.0 - t) * q[i];
  return Distribution::Create(p.labels(), std::move(w));
}

void AuditQif(const GameSpec& game, std::uint64_t seed, GameAudit& audit) {
  QifSolverOptions options;
  options.tolerance = kAuditQifTolerance;
  const SolveReport report = SolveQif(game, options);
  audit.checks.push_back({"solver_certified", report.certified,
                          "value " + Fmt(report.value) + ", gap " + Fmt(report.certificate_gap)});

  const auto deltas = RandomStrategies(game.defender_actions(), 40, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t convexity_failures = 0;
  std::size_t subgradient_failures = 0;
  for (std::size_t i = 0; i + 1 < deltas.size(); i += 2) {
    const double t = unit(rng);
    const MixedStrategy mid = Blend(deltas[i], deltas[i + 1], t);
    for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
      const MixedStrategy alpha = Distribution::Point(game.attacker_actions(), a);
      const double lhs = QifUtility(game, mid, alpha);
      const double rhs = t * QifUtility(game, deltas[i], alpha) +
                         (1.0 - t) * QifUtility(game, deltas[i + 1], alpha);
      if (lhs > rhs + 1e-12) ++convexity_failures;
    }
    const std::vector<double> h = Subgradient(game, deltas[i]);
    const double fi = FValueAt(game, deltas[i]).value;
    const double fj = FValueAt(game, deltas[i + 1]).value;
    double lin = fi;
    for (std::size_t d = 0; d < h.size(); ++d) lin += h[d] * (deltas[i + 1][d] - deltas[i][d]);
    if (fj < lin - 1e-12) ++subgradient_failures;
  }
  audit.checks.push_back({"convexity_in_defender_strategy", convexity_failures == 0,
                          std::to_string(convexity_failures) + " violations"});
  audit.checks.push_back({"subgradient_inequality", subgradient_failures == 0,
                          std::to_string(subgradient_failures) + " violations"});

  if (game.num_defender_actions() <= kMaxGridActions) {
    const GridOptimum grid = BruteForceQif(game, GridStepFor(game.num_defender_actions()));
    const double gap = std::abs(report.value - grid.value);
    const double allowed = options.tolerance + grid.slack;
    audit.checks.push_back({"grid_oracle_agreement", gap <= allowed,
                            "grid value " + Fmt(grid.value) + ", |difference| " + Fmt(gap) +
                                ", allowed " + Fmt(allowed)});
  }
}

void AuditDp(const GameSpec& game, std::uint64_t seed, std::size_t num_priors, GameAudit& audit) {
  const AdjacencyRelation& adjacency = game.dp().adjacency;
  const SolveReport hidden = SolveDpHidden(game);
  const SolveReport visible = SolveDpVisible(game);
  audit.checks.push_back({"solver_certified", hidden.certified,
                          "hidden value " + Fmt(hidden.value) + ", |F| " +
                              Fmt(hidden.certificate_gap)});
  audit.checks.push_back({"visible_not_below_hidden", visible.value >= hidden.value - 1e-6,
                          "visible " + Fmt(visible.value) + ", hidden " + Fmt(hidden.value)});

  const auto deltas = RandomStrategies(game.defender_actions(), 20, seed);
  const auto alphas = RandomStrategies(game.attacker_actions(), 20, seed + 1);
  const MixedStrategy uniform_alpha = Uniform(game.attacker_actions());
  std::size_t bound_failures = 0;
  std::size_t dominance_failures = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double u = DpUtilityHidden(game, deltas[i], alphas[i]).value();
    if (u > HiddenUpperBound(game, deltas[i], alphas[i]).value() + 1e-12) ++bound_failures;
    if (DpUtilityHidden(game, deltas[i], uniform_alpha).value() < u - 1e-12) ++dominance_failures;
  }
  audit.checks.push_back({"hidden_below_pure_bound", bound_failures == 0,
                          std::to_string(bound_failures) + " violations"});
  audit.checks.push_back({"full_support_attacker_dominates", dominance_failures == 0,
                          std::to_string(dominance_failures) + " violations"});

  if (game.num_defender_actions() <= kMaxGridActions) {
    const GridOptimum grid = BruteForceDpHidden(game, GridStepFor(game.num_defender_actions()));
    const double gap = std::abs(hidden.value - grid.value);
    const double allowed = 1e-6 + grid.slack;
    audit.checks.push_back({"grid_oracle_agreement", gap <= allowed,
                            "grid value " + Fmt(grid.value) + ", |difference| " + Fmt(gap) +
                                ", allowed " + Fmt(allowed)});
  }

  const auto priors = SampleDirichletPriors(game.inputs(), num_priors, seed + 2);
  std::size_t bayes_violations = 0;
  std::size_t increase_violations = 0;
  for (const Channel& c : game.channels()) {
    bayes_violations += CheckBayesHypothesisBound(c, adjacency, priors).violations.size();
    if (adjacency.mode() == AdjacencyRelation::Mode::kAllPairs) {
      const double level = DpLevelOf(c, adjacency).value();
      increase_violations += CheckInfoIncreaseBounds(c, adjacency, priors, level).violations.size();
    }
  }
  audit.checks.push_back({"posterior_ratio_bound", bayes_violations == 0,
                          std::to_string(bayes_violations) + " violations over " +
                              std::to_string(priors.size()) + " priors"});
  if (adjacency.mode() == AdjacencyRelation::Mode::kAllPairs) {
    audit.checks.push_back({"prior_to_posterior_bounds", increase_violations == 0,
                            std::to_string(increase_violations) + " violations over " +
                                std::to_string(priors.size()) + " priors"});
  }
}

}  // namespace

GameAudit AuditGame(const GameSpec& game, std::uint64_t seed, std::size_t num_priors) {
  GameAudit audit;
  if (game.is_qif()) {
    AuditQif(game, seed, audit);
  } else {
    AuditDp(game, seed, num_priors, audit);
  }
  return audit;
}

}  // namespace leakgame
