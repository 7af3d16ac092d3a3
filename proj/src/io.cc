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

#include "leakgame/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "leakgame/measures.h"

namespace leakgame {

namespace {

const Json& Field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

Labels LabelList(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of strings");
  Labels out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) throw ParseError(std::string(what) + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<double> NumberList(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> Rows(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(NumberList(row, what));
  return out;
}

Json RowsToJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ChannelKey(const std::string& d, const std::string& a) { return d + "|" + a; }

std::vector<std::pair<std::string, std::string>> PairList(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of pairs");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : j) {
    const Labels two = LabelList(p, what);
    if (two.size() != 2) throw ParseError(std::string(what) + " entries must be 2-element arrays");
    out.emplace_back(two[0], two[1]);
  }
  return out;
}

CrowdsSite SiteFromJson(const Json& j) {
  const Json& label = Field(j, "label", "site");
  if (!label.is_string()) throw ParseError("site label must be a string");
  return {label.get<std::string>(), LabelList(Field(j, "neighbors", "site"), "site neighbors")};
}

void DumpCanonical(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann::json objects are std::map-backed, so iteration is sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        DumpCanonical(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        DumpCanonical(v, indent + 2, out);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json ChannelToJson(const Channel& channel) {
  return Json{{"inputs", channel.inputs()},
              {"outputs", channel.outputs()},
              {"matrix", RowsToJson(channel.matrix())}};
}

Channel ChannelFromJson(const Json& j) {
  return Channel::FromRows(LabelList(Field(j, "inputs", "channel"), "channel inputs"),
                           LabelList(Field(j, "outputs", "channel"), "channel outputs"),
                           Rows(Field(j, "matrix", "channel"), "channel matrix"));
}

Json GameToJson(const GameSpec& game) {
  Json channels = Json::object();
  for (std::size_t d = 0; d < game.num_defender_actions(); ++d) {
    for (std::size_t a = 0; a < game.num_attacker_actions(); ++a) {
      channels[ChannelKey(game.defender_actions()[d], game.attacker_actions()[a])] =
          RowsToJson(game.channel(d, a).matrix());
    }
  }
  Json measure;
  if (game.is_qif()) {
    const QifMeasure& q = game.qif();
    measure["kind"] = "qif";
    measure["prior"] = q.prior.weights();
    if (q.gain.is_bayes()) {
      measure["gain"] = "bayes";
    } else {
      measure["gain"] = Json{{"guesses", q.gain.guesses()}, {"table", RowsToJson(q.gain.table())}};
    }
  } else {
    const AdjacencyRelation& adj = game.dp().adjacency;
    measure["kind"] = "dp";
    if (adj.mode() == AdjacencyRelation::Mode::kAllPairs) {
      measure["adjacency"] = "all-pairs";
    } else {
      Json pairs = Json::array();
      for (const auto& [x, y] : adj.pairs()) pairs.push_back({x, y});
      measure["adjacency"] = std::move(pairs);
    }
  }
  return Json{{"defender_actions", game.defender_actions()},
              {"attacker_actions", game.attacker_actions()},
              {"inputs", game.inputs()},
              {"outputs", game.outputs()},
              {"channels", std::move(channels)},
              {"measure", std::move(measure)}};
}

GameSpec GameFromJson(const Json& j) {
  const Labels defender = LabelList(Field(j, "defender_actions", "game"), "defender_actions");
  const Labels attacker = LabelList(Field(j, "attacker_actions", "game"), "attacker_actions");
  const Labels inputs = LabelList(Field(j, "inputs", "game"), "inputs");
  const Labels outputs = LabelList(Field(j, "outputs", "game"), "outputs");
  const Json& table = Field(j, "channels", "game");
  if (!table.is_object()) throw ParseError("channels must be an object keyed by \"d|a\"");
  std::vector<Channel> channels;
  channels.reserve(defender.size() * attacker.size());
  for (const auto& d : defender) {
    for (const auto& a : attacker) {
      const auto it = table.find(ChannelKey(d, a));
      if (it == table.end()) {
        throw Error(ErrorCode::kMissingChannel, "no channel for profile " + ChannelKey(d, a));
      }
      channels.push_back(Channel::FromRows(inputs, outputs, Rows(*it, "channel matrix")));
    }
  }
  if (table.size() != channels.size()) {
    throw Error(ErrorCode::kLabelMismatch, "channels object has keys outside D x A");
  }

  const Json& m = Field(j, "measure", "game");
  const Json& kind = Field(m, "kind", "measure");
  if (kind == "qif") {
    QifMeasure q{PriorFromJson(Field(m, "prior", "measure"), inputs),
                 GainFromJson(Field(m, "gain", "measure"), inputs)};
    return GameSpec::Create(defender, attacker, std::move(channels), std::move(q));
  }
  if (kind == "dp") {
    return GameSpec::Create(defender, attacker, std::move(channels),
                            DpMeasure{AdjacencyFromJson(Field(m, "adjacency", "measure"))});
  }
  throw ParseError("measure kind must be \"qif\" or \"dp\"");
}

Prior PriorFromJson(const Json& j, const Labels& secrets) {
  if (j.is_array()) return Distribution::Create(secrets, NumberList(j, "prior"));
  const Labels labels = LabelList(Field(j, "labels", "prior"), "prior labels");
  if (labels != secrets) throw Error(ErrorCode::kLabelMismatch, "prior labels differ from inputs");
  return Distribution::Create(labels, NumberList(Field(j, "weights", "prior"), "prior weights"));
}

GainFunction GainFromJson(const Json& j, const Labels& secrets) {
  if (j.is_string()) {
    if (j.get<std::string>() != "bayes") throw ParseError("gain must be \"bayes\" or an object");
    return GainFunction::Bayes(secrets);
  }
  const Labels guesses = LabelList(Field(j, "guesses", "gain"), "gain guesses");
  const auto rows = Rows(Field(j, "table", "gain"), "gain table");
  if (rows.size() != guesses.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gain table needs one row per guess");
  }
  Eigen::MatrixXd table(static_cast<Eigen::Index>(guesses.size()),
                        static_cast<Eigen::Index>(secrets.size()));
  for (std::size_t w = 0; w < rows.size(); ++w) {
    if (rows[w].size() != secrets.size()) {
      throw Error(ErrorCode::kShapeMismatch, "gain table row width differs from |X|");
    }
    for (std::size_t x = 0; x < secrets.size(); ++x) {
      table(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(x)) = rows[w][x];
    }
  }
  return GainFunction::Create(guesses, secrets, std::move(table));
}

AdjacencyRelation AdjacencyFromJson(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "all-pairs") {
      throw ParseError("adjacency must be \"all-pairs\" or a list of pairs");
    }
    return AdjacencyRelation::AllPairs();
  }
  return AdjacencyRelation::Explicit(PairList(j, "adjacency"));
}

CrowdsConfig CrowdsConfigFromJson(const Json& j) {
  CrowdsConfig c;
  c.nodes = LabelList(Field(j, "nodes", "crowds config"), "nodes");
  c.edges = PairList(Field(j, "edges", "crowds config"), "edges");
  const Json& pf = Field(j, "forward_prob", "crowds config");
  if (!pf.is_number()) throw ParseError("forward_prob must be a number");
  c.forward_prob = pf.get<double>();
  for (const char* key : {"attacker_sites", "defender_sites"}) {
    const Json& sites = Field(j, key, "crowds config");
    if (!sites.is_array()) throw ParseError(std::string(key) + " must be an array");
    auto& dest = std::string(key) == "attacker_sites" ? c.attacker_sites : c.defender_sites;
    for (const auto& s : sites) dest.push_back(SiteFromJson(s));
  }
  return c;
}

std::vector<CorrelationTable> TablesFromJson(const Json& j, std::vector<std::string>* warnings) {
  const Json& list = j.is_array() ? j : Field(j, "tables", "tables document");
  if (!list.is_array()) throw ParseError("tables must be an array");
  std::vector<CorrelationTable> out;
  for (const auto& t : list) {
    const Json& name = Field(t, "name", "table");
    if (!name.is_string()) throw ParseError("table name must be a string");
    out.push_back(CorrelationTable::Create(
        name.get<std::string>(), LabelList(Field(t, "secrets", "table"), "table secrets"),
        LabelList(Field(t, "values", "table"), "table values"),
        Rows(Field(t, "rows", "table"), "table rows"), warnings));
  }
  return out;
}

Json TablesToJson(const std::vector<CorrelationTable>& tables) {
  Json list = Json::array();
  for (const auto& t : tables) {
    list.push_back(Json{{"name", t.name()},
                        {"secrets", t.secrets()},
                        {"values", t.attribute_values()},
                        {"rows", RowsToJson(t.rows())}});
  }
  return Json{{"tables", std::move(list)}};
}

Json DistributionToJson(const Distribution& d) {
  return Json{{"labels", d.labels()}, {"weights", d.weights()}};
}

Json ReportToJson(const GameSpec& game, const SolveReport& report) {
  Json j{{"measure", game.is_qif() ? "qif" : "dp"},
         {"defender_strategy", DistributionToJson(report.defender_strategy)},
         {"value", report.value},
         {"units", game.is_qif() ? "probability" : "nats"},
         {"iterations", report.iterations},
         {"certificate_gap", report.certificate_gap},
         {"certified", report.certified}};
  j["attacker_strategy"] =
      report.attacker_strategy ? DistributionToJson(*report.attacker_strategy) : Json(nullptr);
  const auto support = report.defender_strategy.Support();
  if (support.size() == 1) j["defender_action"] = game.defender_actions()[support.front()];
  return j;
}

Json AuditToJson(const GameAudit& audit) {
  Json checks = Json::array();
  for (const auto& c : audit.checks) {
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return Json{{"checks", std::move(checks)}, {"ok", audit.ok()}};
}

std::string CanonicalDump(const Json& j) {
  std::string out;
  DumpCanonical(j, 0, out);
  out += "\n";
  return out;
}

std::string ReadText(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ParseError("cannot read " + path);
  return buf.str();
}

Json ReadJson(const std::string& path) {
  const std::string text = ReadText(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError((path == "-" ? std::string("standard input") : path) +
                     ": invalid JSON: " + e.what());
  }
}

}  // namespace leakgame
