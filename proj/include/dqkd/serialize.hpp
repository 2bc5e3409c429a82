// Copyright 2026 The dqkd Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * JSON documents for attacks, configs and results.
 *
 * AttackParams:
 *     {"c00": .., "c01": .., "c11": .., "c10": ..,
 *      "overlaps": [{"name": "s", "re": .., "im": ..}, ...]}
 * Overlaps missing from the list default to 0.
 *
 * A protocol config is {attack, n, check_fraction, announce_fraction,
 * backward_noise, seed, permute} plus an optional abort_slack_z. The attack
 * may also be given by name: {"named": "symmetric", "e": 0.05}.
 */

#pragma once

#include <json.hpp>

#include "dqkd/attack.hpp"
#include "dqkd/keyrate.hpp"
#include "dqkd/optimizer.hpp"
#include "dqkd/protosim.hpp"

namespace dqkd {

using Json = nlohmann::json;

Json to_json(const AttackParams &params);
/// Throws ParseError naming the offending field.
AttackParams attack_from_json(const Json &doc);

Json to_json(const ChannelFidelities &f);
Json to_json(const KeyRateReport &report);
KeyRateReport report_from_json(const Json &doc);

Json to_json(const OptResult &result);
Json to_json(const ProtocolStats &stats);

Json to_json(const ProtocolConfig &config);
/// Parses and validates; throws ParseError or InvalidArgument.
ProtocolConfig config_from_json(const Json &doc);

} // namespace dqkd
