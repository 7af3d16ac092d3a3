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

"""Generates data/crowds_manet.json, an approximate 30-node MANET layout.

Nodes are placed uniformly in a 1 km x 1 km square and linked when closer
than 250 m. Placements are redrawn from the same generator until the range
graph is connected. Nine candidate sites are then drawn the same way, each
required to reach at least two honest nodes. The same nine sites serve as
both the attacker's and the defender's locations.

Usage: python3 tools/gen_crowds_topology.py [output_path]
"""

import json
import math
import random
import sys

SEED = 20260101
NUM_NODES = 30
NUM_SITES = 9
SIDE_M = 1000.0
RANGE_M = 250.0
FORWARD_PROB = 0.8


def neighbours(p, points):
    return [i for i, q in enumerate(points) if p is not q and math.dist(p, q) <= RANGE_M]


def connected(points):
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in neighbours(points[i], points):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(points)


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "data/crowds_manet.json"
    rng = random.Random(SEED)
    while True:
        nodes = [(rng.uniform(0, SIDE_M), rng.uniform(0, SIDE_M)) for _ in range(NUM_NODES)]
        if connected(nodes):
            break
    sites = []
    while len(sites) < NUM_SITES:
        p = (rng.uniform(0, SIDE_M), rng.uniform(0, SIDE_M))
        if len(neighbours(p, nodes)) >= 2:
            sites.append(p)

    labels = [f"n{i + 1}" for i in range(NUM_NODES)]
    edges = []
    for i in range(NUM_NODES):
        for j in range(i + 1, NUM_NODES):
            if math.dist(nodes[i], nodes[j]) <= RANGE_M:
                edges.append([labels[i], labels[j]])
    site_records = []
    for k, p in enumerate(sites):
        site_records.append({
            "label": str(k + 1),
            "neighbors": [labels[i] for i in neighbours(p, nodes)],
        })
    config = {
        "note": ("Approximate layout: 30 nodes in 1 km x 1 km, 250 m range, generated by "
                 f"tools/gen_crowds_topology.py with seed {SEED}. Not a transcription of "
                 "measured coordinates."),
        "nodes": labels,
        "positions": {labels[i]: [round(x, 1), round(y, 1)] for i, (x, y) in enumerate(nodes)},
        "site_positions": {str(k + 1): [round(x, 1), round(y, 1)] for k, (x, y) in enumerate(sites)},
        "edges": edges,
        "forward_prob": FORWARD_PROB,
        "attacker_sites": site_records,
        "defender_sites": site_records,
    }
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
