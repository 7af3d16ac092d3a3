# Copyright 2026 The Leakgame Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the leakgame C++ library."""

from ._leakgame import (
    Channel,
    GameSpec,
    LeakgameError,
    bayes_posterior,
    brute_force_dp_hidden,
    brute_force_qif,
    build_binary_sum,
    build_compas_game,
    build_crowds,
    build_dp_example,
    build_two_millionaires,
    cascade,
    dp_level,
    hidden_choice,
    posterior_vulnerability,
    randomized_response,
    run_cli,
    solve_dp_hidden,
    solve_dp_visible,
    solve_qif,
    visible_choice,
    vnm_independence_witness,
)

__all__ = [
    "Channel",
    "GameSpec",
    "LeakgameError",
    "bayes_posterior",
    "brute_force_dp_hidden",
    "brute_force_qif",
    "build_binary_sum",
    "build_compas_game",
    "build_crowds",
    "build_dp_example",
    "build_two_millionaires",
    "cascade",
    "dp_level",
    "hidden_choice",
    "posterior_vulnerability",
    "randomized_response",
    "run_cli",
    "solve_dp_hidden",
    "solve_dp_visible",
    "solve_qif",
    "visible_choice",
    "vnm_independence_witness",
]
