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

#include "leakgame/cli.h"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <utility>

#include "leakgame/audits.h"
#include "leakgame/dp_solver.h"
#include "leakgame/io.h"
#include "leakgame/measures.h"
#include "leakgame/qif_solver.h"
#include "leakgame/scenarios.h"

namespace leakgame {

namespace {

struct CsvRow {
  std::string entity;
  std::string value;
};

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void WriteCsv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open " + path + " for writing");
  f << "entity,value\n";
  for (const auto& r : rows) f << CsvField(r.entity) << "," << CsvField(r.value) << "\n";
  if (!f) throw ParseError("cannot write " + path);
}

std::vector<CsvRow> ReportRows(const SolveReport& r) {
  std::vector<CsvRow> rows;
  const auto& s = r.defender_strategy;
  for (std::size_t i = 0; i < s.size(); ++i) rows.push_back({"delta:" + s.labels()[i], Num(s[i])});
  rows.push_back({"value", Num(r.value)});
  rows.push_back({"certificate_gap", Num(r.certificate_gap)});
  rows.push_back({"iterations", std::to_string(r.iterations)});
  return rows;
}

// Utility of every pure profile: posterior vulnerability or DP level.
std::vector<CsvRow> PureTableRows(const GameSpec& game) {
  std::vector<CsvRow> rows;
  for (std::size_t d = 0; d < game.num_defender_actions(); ++d) {
    for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
      const Channel& c = game.channel(d, a);
      const double v = game.is_qif()
                           ? PosteriorVulnerability(game.qif().gain, game.qif().prior, c)
                           : DpLevelOf(c, game.dp().adjacency).value();
      rows.push_back({game.defender_actions()[d] + "|" + game.attacker_actions()[a], Num(v)});
    }
  }
  return rows;
}

Json OptionalNumber(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Options {
  std::string game_path;
  std::string channel_path;
  std::string config_path;
  std::string csv_path;
  std::string mode = "hidden";
  std::string adjacency;
  std::string prior_path;
  std::string gain = "bayes";
  double qif_tolerance = QifSolverOptions{}.tolerance;
  std::int64_t qif_max_iter = QifSolverOptions{}.max_iter;
  double dp_tolerance = DpSolverOptions{}.tolerance;
  std::int64_t dp_max_iter = DpSolverOptions{}.max_iter;
  double eps_strong = 0.1;
  double eps_weak = 2.0;
  std::uint64_t seed = 1;
  std::size_t priors = 50;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int Emit(const Json& j, const std::vector<CsvRow>& csv, const Options& o) {
    out_ << CanonicalDump(j);
    if (!o.csv_path.empty()) WriteCsv(o.csv_path, csv);
    return kExitOk;
  }

  int SolveQifCmd(const Options& o) {
    const GameSpec game = GameFromJson(ReadJson(o.game_path));
    QifSolverOptions opts;
    opts.tolerance = o.qif_tolerance;
    opts.max_iter = o.qif_max_iter;
    const SolveReport r = SolveQif(game, opts);
    Json j = ReportToJson(game, r);
    j["attacker_best_response"] =
        game.attacker_actions()[AttackerBestResponse(game, r.defender_strategy)];
    Emit(j, ReportRows(r), o);
    return Certified(r);
  }

  int SolveDpCmd(const Options& o) {
    const GameSpec game = GameFromJson(ReadJson(o.game_path));
    DpSolverOptions opts;
    opts.tolerance = o.dp_tolerance;
    opts.max_iter = o.dp_max_iter;
    const SolveReport r = o.mode == "visible" ? SolveDpVisible(game) : SolveDpHidden(game, opts);
    Json j = ReportToJson(game, r);
    j["mode"] = o.mode;
    Emit(j, ReportRows(r), o);
    return Certified(r);
  }

  int DpLevelCmd(const Options& o) {
    const Channel c = ChannelFromJson(ReadJson(o.channel_path));
    const AdjacencyRelation adj = o.adjacency == "all-pairs"
                                      ? AdjacencyRelation::AllPairs()
                                      : AdjacencyFromJson(ReadJson(o.adjacency));
    const DpLevel level = DpLevelOf(c, adj);
    const Json j{{"dp_level", OptionalNumber(level.value())},
                 {"conforming", !level.is_infinite()},
                 {"units", "nats"}};
    return Emit(j, {{"dp_level", Num(level.value())}}, o);
  }

  int VulnerabilityCmd(const Options& o) {
    const Channel c = ChannelFromJson(ReadJson(o.channel_path));
    const Prior prior = PriorFromJson(ReadJson(o.prior_path), c.inputs());
    const GainFunction gain = o.gain == "bayes" ? GainFunction::Bayes(c.inputs())
                                                : GainFromJson(ReadJson(o.gain), c.inputs());
    const double before = PriorVulnerability(gain, prior);
    const double after = PosteriorVulnerability(gain, prior, c);
    const double ratio = before > 0.0 ? after / before : std::numeric_limits<double>::infinity();
    const Json j{{"prior_vulnerability", before},
                 {"posterior_vulnerability", after},
                 {"additive_leakage", after - before},
                 {"multiplicative_leakage", OptionalNumber(ratio)}};
    return Emit(j,
                {{"prior_vulnerability", Num(before)},
                 {"posterior_vulnerability", Num(after)},
                 {"additive_leakage", Num(after - before)},
                 {"multiplicative_leakage", Num(ratio)}},
                o);
  }

  int BuildCmd(const GameSpec& game, const Options& o) {
    return Emit(GameToJson(game), PureTableRows(game), o);
  }

  int BuildCrowdsCmd(const Options& o) {
    return BuildCmd(BuildCrowds(CrowdsConfigFromJson(ReadJson(o.config_path))), o);
  }

  int BuildLdpCmd(const Options& o) {
    std::vector<std::string> warnings;
    const auto tables = o.config_path.empty() ? CompasTables(&warnings)
                                              : TablesFromJson(ReadJson(o.config_path), &warnings);
    for (const auto& w : warnings) err_ << "warning: " << w << "\n";
    return BuildCmd(BuildLdpGame(tables, o.eps_strong, o.eps_weak), o);
  }

  int AuditCmd(const Options& o) {
    const GameSpec game = GameFromJson(ReadJson(o.game_path));
    const GameAudit audit = AuditGame(game, o.seed, o.priors);
    std::vector<CsvRow> rows;
    for (const auto& c : audit.checks) rows.push_back({c.name, c.passed ? "1" : "0"});
    Emit(AuditToJson(audit), rows, o);
    if (audit.ok()) return kExitOk;
    for (const auto& c : audit.checks) {
      if (!c.passed) err_ << "audit check failed: " << c.name << " (" << c.detail << ")\n";
    }
    return kExitValidation;
  }

 private:
  int Certified(const SolveReport& r) {
    if (r.certified) return kExitOk;
    err_ << "not certified: iteration limit reached with gap " << Num(r.certificate_gap) << "\n";
    return kExitNotCertified;
  }

  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-sum information-leakage games: solve, measure, build and audit."};
  app.name("leakgame");
  app.require_subcommand(1);
  Options o;
  Runner runner(out, err);
  std::function<int()> action;

  auto add_csv = [&](CLI::App* cmd) {
    cmd->add_option("--csv", o.csv_path, "Also write an entity,value table to this path");
  };

  CLI::App* solve = app.add_subcommand("solve", "Compute an equilibrium");
  solve->require_subcommand(1);
  CLI::App* solve_qif = solve->add_subcommand("qif", "Projected subgradient solve of a QIF game");
  solve_qif->add_option("game", o.game_path, "Game JSON file, or - for standard input")->required();
  solve_qif->add_option("--tolerance", o.qif_tolerance, "Certificate gap target")
      ->check(CLI::PositiveNumber);
  solve_qif->add_option("--max-iter", o.qif_max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  add_csv(solve_qif);
  solve_qif->callback([&] { action = [&] { return runner.SolveQifCmd(o); }; });

  CLI::App* solve_dp = solve->add_subcommand("dp", "Equilibrium of a DP game");
  solve_dp->add_option("game", o.game_path, "Game JSON file, or - for standard input")->required();
  solve_dp->add_option("--mode", o.mode, "Defender's choice operator")
      ->required()
      ->check(CLI::IsMember({"hidden", "visible"}));
  solve_dp->add_option("--tolerance", o.dp_tolerance, "Certified gap on the level, in nats")
      ->check(CLI::PositiveNumber);
  solve_dp->add_option("--max-iter", o.dp_max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  add_csv(solve_dp);
  solve_dp->callback([&] { action = [&] { return runner.SolveDpCmd(o); }; });

  CLI::App* measure = app.add_subcommand("measure", "Evaluate a single channel");
  measure->require_subcommand(1);
  CLI::App* dp_level = measure->add_subcommand("dp-level", "Differential-privacy level in nats");
  dp_level->add_option("channel", o.channel_path, "Channel JSON file, or -")->required();
  dp_level->add_option("--adjacency", o.adjacency, "all-pairs, or a JSON file of pairs")
      ->required();
  add_csv(dp_level);
  dp_level->callback([&] { action = [&] { return runner.DpLevelCmd(o); }; });

  CLI::App* vuln = measure->add_subcommand("vulnerability", "Prior and posterior g-vulnerability");
  vuln->add_option("channel", o.channel_path, "Channel JSON file, or -")->required();
  vuln->add_option("--prior", o.prior_path, "Prior JSON file")->required();
  vuln->add_option("--gain", o.gain, "bayes, or a gain-function JSON file");
  add_csv(vuln);
  vuln->callback([&] { action = [&] { return runner.VulnerabilityCmd(o); }; });

  CLI::App* build = app.add_subcommand("build", "Emit a ready-made game as JSON");
  build->require_subcommand(1);
  const std::vector<std::pair<const char*, GameSpec (*)()>> fixed = {
      {"two-millionaires", &BuildTwoMillionaires},
      {"binary-sum", &BuildBinarySum},
      {"dp-example", &BuildDpExample}};
  for (const auto& [name, fn] : fixed) {
    CLI::App* cmd = build->add_subcommand(name, std::string("The ") + name + " game");
    add_csv(cmd);
    auto* builder = fn;
    cmd->callback([&, builder] { action = [&, builder] { return runner.BuildCmd(builder(), o); }; });
  }
  CLI::App* crowds = build->add_subcommand("crowds", "Crowds on an ad-hoc network");
  crowds->add_option("config", o.config_path, "Crowds configuration JSON")->required();
  add_csv(crowds);
  crowds->callback([&] { action = [&] { return runner.BuildCrowdsCmd(o); }; });
  CLI::App* ldp = build->add_subcommand("ldp", "Randomized-response design over attribute tables");
  ldp->add_option("tables", o.config_path, "Correlation tables JSON (default: built-in COMPAS)");
  ldp->add_option("--eps-strong", o.eps_strong, "Level used when d == a")
      ->check(CLI::NonNegativeNumber);
  ldp->add_option("--eps-weak", o.eps_weak, "Level used when d != a")->check(CLI::NonNegativeNumber);
  add_csv(ldp);
  ldp->callback([&] { action = [&] { return runner.BuildLdpCmd(o); }; });

  CLI::App* audit = app.add_subcommand("audit", "Run solver, oracle and theorem checks on a game");
  audit->add_option("game", o.game_path, "Game JSON file, or -")->required();
  audit->add_option("--seed", o.seed, "Seed for sampled strategies and priors");
  audit->add_option("--priors", o.priors, "Number of sampled priors")->check(CLI::PositiveNumber);
  add_csv(audit);
  audit->callback([&] { action = [&] { return runner.AuditCmd(o); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  if (!action) {
    err << "error: no command given\n";
    return kExitValidation;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kMaxIterationsExceeded ? kExitNotCertified : kExitValidation;
  } catch (const ParseError& e) {
    err << "error [parse]: " << e.what() << "\n";
    return kExitIo;
  } catch (const Json::exception& e) {
    err << "error [parse]: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace leakgame
