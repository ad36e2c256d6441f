"""Rebuild the golden files in this directory.

Run only when an output format changes on purpose:
    python3 tests/fixtures/regenerate.py
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np

from autoreal import gmodule as gm
from autoreal import indexed_module as im_mod
from autoreal.acceptance import realization_fixture
from autoreal.group_ring import GroupRingContext

HERE = Path(__file__).parent


def dump(name, obj):
    (HERE / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def main():
    ctx = GroupRingContext(3, 2)
    dump("identity_3.json", gm.module_to_json(gm.module_from_type(ctx.__class__(3, 1), [1, 1, 1])))
    dump("canonical_3_1.json", gm.module_to_json(gm.module_from_type(ctx.__class__(2, 2), [3, 1])))
    rng = np.random.default_rng(20240601)
    base = gm.module_from_type(ctx, [5, 3, 1, 1])
    dump("scrambled_module.json", gm.module_to_json(gm.scramble(base, gm.random_invertible(3, base.dim, rng))))

    for case in ("full-ring", "correction", "exceptional"):
        im, i, c, gamma = realization_fixture(case)
        obj = im_mod.indexed_to_json(im)
        obj.update({"gamma": list(gamma), "i": i, "c": c})
        dump(f"realize_{case.replace('-', '_')}.json", obj)
    im, i, c, _ = realization_fixture("full-ring")
    inst = im_mod.synthetic_instance(3, 1, 0, [1], 0)
    obj = im_mod.indexed_to_json(im)
    obj.update({"gamma": list(im.j_eps.rho_apply(inst.canonical_generators[0], 0)), "i": i, "c": c})
    dump("realize_bad_gamma.json", obj)
    dump("jepsilon_3_1.json", im_mod.indexed_to_json(im))

    runs = {
        "scrambled_module.expected.json": ["module-decompose", "scrambled_module.json"],
        "jepsilon_3_1.expected.json": ["jepsilon-decompose", "jepsilon_3_1.json"],
        "realize_full_ring.expected.json": ["realize", "realize_full_ring.json"],
        "realize_correction.expected.json": ["realize", "realize_correction.json"],
        "realize_exceptional.expected.json": ["realize", "realize_exceptional.json"],
        "kummer_4_3_1.expected.json": ["kummer-check", "4", "3", "1"],
        "group_info_2_1_2_0.expected.json": ["group-info", "2", "1", "2", "0"],
    }
    for out, argv in runs.items():
        res = subprocess.run([sys.executable, "-m", "autoreal", *argv], cwd=HERE, capture_output=True, text=True, check=True)
        (HERE / out).write_text(res.stdout, encoding="utf-8")


if __name__ == "__main__":
    main()
