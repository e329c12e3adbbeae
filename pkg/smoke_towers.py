import json
import time

from iwacalc.arith import PrimeConfig
from iwacalc.poly import IwasawaPoly
from iwacalc.towers import (
    TowerSpec,
    build_tower,
    corpus_run,
    tower_report,
)

fails = []


def chk(name, cond):
    if not cond:
        fails.append(name)
        print("FAIL:", name)
    else:
        print("ok:", name)


cfg = PrimeConfig(3, 8)

# --- f = T - 3 ---------------------------------------------------------
t0 = time.time()
tw = build_tower(TowerSpec(cfg, f=IwasawaPoly(cfg, [-3, 1])))  # T - 3
print("T-3 build:", round(time.time() - t0, 2), "s")
chk("T-3 ranks all 1", tw.ranks == [1, 1, 1, 1, 1])
chk("T-3 orders Z/3^n", [list(M.orders) for M in tw.levels] == [[1], [2], [3], [4], [5]])
chk("T-3 n0=1 z=0", tw.n0 == 1 and tw.z == 0)
chk("T-3 not degenerate", not tw.degenerate and not tw.non_injective_levels)
rep = tower_report(tw)
chk("T-3 zero violations", rep["violations"] == [])
chk("T-3 labels stable", all(l == "stable" for l in rep["labels"]))
by = {f["name"]: f["status"] for f in rep["findings"]}
for name in [
    "fukuda-persistence",
    "stabilization-lift-generator",
    "stabilization-lift-module",
    "stabilization-omega-torsion",
    "stabilization-order-law",
    "main-constant-valuation",
    "main-eisenstein",
    "main-dichotomy",
    "main-binomial",
    "main-annihilator-shift",
    "conic-kernel-law",
    "conic-image-saturation",
    "conic-coprimality",
]:
    chk(f"T-3 {name} pass", by.get(name) == "pass")

# --- f = T^2 - 3 -------------------------------------------------------
t0 = time.time()
tw2 = build_tower(TowerSpec(cfg, f=IwasawaPoly(cfg, [-3, 0, 1])))
print("T^2-3 build:", round(time.time() - t0, 2), "s")
chk("T^2-3 n0=2", tw2.n0 == 2)
rep2 = tower_report(tw2)
by2 = {f["name"]: f["status"] for f in rep2["findings"]}
chk("T^2-3 eisenstein", by2.get("main-eisenstein") == "pass")
chk("T^2-3 zero violations", rep2["violations"] == [])
chk("T^2-3 rank 2 final", tw2.ranks[-1] == 2)

# --- f = T^2 - 9 -------------------------------------------------------
tw9 = build_tower(TowerSpec(cfg, f=IwasawaPoly(cfg, [-9, 0, 1])))
rep9 = tower_report(tw9)
by9 = {f["name"]: f["status"] for f in rep9["findings"]}
chk("T^2-9 zero violations", rep9["violations"] == [])
chk("T^2-9 dichotomy", by9.get("main-dichotomy") == "pass")
chk("T^2-9 val", by9.get("main-constant-valuation") == "pass")
print("T^2-9 ranks", tw9.ranks, "n0", tw9.n0, "z", tw9.z)

# --- flat 3^2 horizon 4 ------------------------------------------------
t0 = time.time()
twf = build_tower(TowerSpec(cfg, flat_exponent=2, horizon=4))
print("flat build:", round(time.time() - t0, 2), "s")
chk("flat ranks", twf.ranks == [1, 3, 9, 27])
chk("flat exponent", all(M.orders == (2,) * M.p_rank for M in twf.levels))
t0 = time.time()
repf = tower_report(twf)
print("flat verify:", round(time.time() - t0, 2), "s")
byf = {f["name"]: f["status"] for f in repf["findings"]}
chk("flat unsettled", byf.get("fukuda-persistence") == "inapplicable")
chk("flat stab inapplicable", byf.get("stabilization") == "inapplicable")
chk("flat main inapplicable", byf.get("main") == "inapplicable")
chk("flat point2 pass", byf.get("conic-kernel-law") == "pass")
chk("flat point4 inapplicable", byf.get("conic-coprimality") == "inapplicable")
chk("flat labels regular-flat", all(l == "regular-flat" for l in repf["labels"]))
chk("flat zero violations", repf["violations"] == [])

# --- f = T degenerate ---------------------------------------------------
twT = build_tower(TowerSpec(cfg, f=IwasawaPoly(cfg, [0, 1]), horizon=3))
chk("T degenerate", twT.degenerate)
chk("T modules Z/3^8", all(list(M.orders) == [8] for M in twT.levels))
repT = tower_report(twT)
byT = {f["name"]: f["status"] for f in repT["findings"]}
chk("T coprimality fails", byT.get("conic-coprimality") == "fail")
chk("T stab inapplicable", byT.get("stabilization") == "inapplicable")
chk("T main inapplicable", byT.get("main") == "inapplicable")

# --- corpus (small) -----------------------------------------------------
t0 = time.time()
c1 = corpus_run(3, 5, 4, seed=42)
dt = time.time() - t0
print("corpus count=5:", round(dt, 2), "s")
c2 = corpus_run(3, 5, 4, seed=42)
chk("corpus deterministic", json.dumps(c1, sort_keys=True) == json.dumps(c2, sort_keys=True))
chk("corpus no violations", c1["violation_count"] == 0)
print("labels:", c1["label_histogram"], "n0:", c1["n0_histogram"])

print()
print("FAILS:", len(fails), fails)
