"""Step through one repair on a seeded topology and print the plan.

    python3 scripts/repair_walkthrough.py --seed 3 --failed 4 --k 7
"""

import argparse
import json

from ncstorage.galois import field_for_q
from ncstorage.mdscodes import sparsest_generator
from ncstorage.repair import Method, RepairMode, repair_node
from ncstorage.simnet import assign_shares, random_source, random_topology
from ncstorage.storage import encode_vector


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--failed", type=int, default=0)
    p.add_argument("--k", type=int, default=7)
    p.add_argument("--mode", choices=["exact", "functional"], default="exact")
    a = p.parse_args()

    topo = random_topology(a.seed, storage_connected=True)
    g = sparsest_generator(10, a.k, field_for_q(16))
    data = random_source(g.spec, a.k, 8, a.seed)
    shares = assign_shares(topo, g, data)
    for method in Method:
        out = repair_node(topo, shares, a.failed, g, RepairMode(a.mode), method)
        ok = out.new_share.payload == encode_vector(out.new_share.coding_vector, data)
        print(f"== {method.value}: {out.transmissions_total} transmissions, "
              f"stddev {out.energy.stddev_tx:.3f}, payload correct: {ok}")
        if out.plan:
            print(json.dumps(out.plan.to_json()))
        print(json.dumps(out.energy.to_json()["per_node_tx"]))


if __name__ == "__main__":
    main()
