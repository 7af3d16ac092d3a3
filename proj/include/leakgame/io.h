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

// JSON file formats.
//
// Game:
//   {"defender_actions": [...], "attacker_actions": [...],
//    "inputs": [...], "outputs": [...],
//    "channels": {"<d>|<a>": [[row], ...], ...},
//    "measure": {"kind": "qif", "prior": [...], "gain": "bayes" | GAIN}
//             | {"kind": "dp", "adjacency": "all-pairs" | [["x1", "x2"], ...]}}
//   GAIN = {"guesses": [...], "table": [[g(w, x) for x] for w]}
//
// Channel:     {"inputs": [...], "outputs": [...], "matrix": [[...], ...]}
// Prior:       [weights aligned with the channel inputs] or
//              {"labels": [...], "weights": [...]}
// Crowds:      {"nodes": [...], "edges": [[u, v], ...], "forward_prob": p,
//               "attacker_sites": [{"label": l, "neighbors": [...]}, ...],
//               "defender_sites": [...]}; other keys are ignored.
// Tables:      {"tables": [{"name": n, "secrets": [...], "values": [...],
//               "rows": [[...], ...]}, ...]}

#ifndef LEAKGAME_IO_H_
#define LEAKGAME_IO_H_

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "leakgame/audits.h"
#include "leakgame/core.h"
#include "leakgame/scenarios.h"

namespace leakgame {

using Json = nlohmann::json;

// Malformed document: wrong structure or types, as opposed to well-formed
// content that violates a domain invariant (which raises leakgame::Error).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json ChannelToJson(const Channel& channel);
Channel ChannelFromJson(const Json& j);

Json GameToJson(const GameSpec& game);
GameSpec GameFromJson(const Json& j);

Prior PriorFromJson(const Json& j, const Labels& secrets);
GainFunction GainFromJson(const Json& j, const Labels& secrets);
AdjacencyRelation AdjacencyFromJson(const Json& j);

CrowdsConfig CrowdsConfigFromJson(const Json& j);
std::vector<CorrelationTable> TablesFromJson(const Json& j, std::vector<std::string>* warnings);
Json TablesToJson(const std::vector<CorrelationTable>& tables);

Json DistributionToJson(const Distribution& d);
Json ReportToJson(const GameSpec& game, const SolveReport& report);
Json AuditToJson(const GameAudit& audit);

// Sorted keys, two-space indent, doubles with 17 significant digits.
std::string CanonicalDump(const Json& j);

// Reads a whole file, or standard input for "-". Throws ParseError on
// unreadable paths and malformed JSON.
std::string ReadText(const std::string& path);
Json ReadJson(const std::string& path);

}  // namespace leakgame

#endif  // LEAKGAME_IO_H_
