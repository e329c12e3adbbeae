"""Smoke tests for transitions.py against hand-computed cases."""
import sys

sys.path.insert(0, "src")

from iwacalc.arith import PrimeConfig
from iwacalc.modules import GammaModule
from iwacalc.poly import IwasawaPoly
from iwacalc.transitions import (
    Transition,
    verify_axioms,
    axiom_violations,
    kernel_K,
    check_exactk,
    transition_module,
    classify,
    check_stable,
    check_flat_equivalence,
    check_hasroot,
    check_initrans,
    check_sk,
    check_finflat,
    dispatch_checks,
    binomial_shape,
    binomial_solve,
    transition_to_json,
    transition_from_json,
)

fails = []


def chk(name, cond):
    if not cond:
        fails.append(name)
        print("FAIL:", name)


cfg = PrimeConfig(3, 8)
T = IwasawaPoly.T(cfg)

# --- case 1: flat mod-3 model, level 1 -> 2 --------------------------------
A3 = GammaModule(cfg, (1,), [[1]], 1, generator=(1,))
B3 = GammaModule(
    cfg, (1, 1, 1), [[1, 0, 0], [1, 1, 0], [0, 1, 1]], 2, generator=(1, 0, 0)
)
t3 = Transition(A3, B3, [[1, 0, 0]], [[0], [0], [1]], T)

ax = verify_axioms(t3)
chk("flat3 axioms all pass", all(f.status == "pass" for f in ax))
chk("flat3 |K| = 9", kernel_K(t3).size() == 9)
rep = classify(t3)
chk("flat3 label", rep.rendered() == "regular-flat, initial")
chk("flat3 no axiom violations", rep.axiom_violations == [])
ek = check_exactk(t3)
chk("flat3 exactk", all(f.status == "pass" for f in ek))
tm = transition_module(t3)
chk("flat3 Tmod cyclic", tm.cyclic and tm.nu_annihilates)
chk("flat3 Tmod size 9", tm.module.size == 9)
chk("flat3 bounds", tm.rank_bound_holds and tm.exp_bound_holds)
chk("flat3 ell", tm.ell == 3 and tm.ell_witness_ok)
fe = check_flat_equivalence(t3)
agr = {f.name: f for f in fe}
chk("flat3 lreg agree", agr["flat-equivalence-agreement"].status == "pass")
chk(
    "flat3 lreg all true",
    agr["flat-equivalence-agreement"].witness
    == {"i": True, "ii": True, "iii": True, "iv": True, "lift_in_pB": False},
)
chk("flat3 exp transfer", agr["flat-exponent-transfer"].status == "pass")

# --- case 2: flat mod-9 model, level 1 -> 2 --------------------------------
A9 = GammaModule(cfg, (2,), [[1]], 1, generator=(1,))
B9 = GammaModule(
    cfg, (2, 2, 2), [[1, 0, 0], [1, 1, 6], [0, 1, 7]], 2, generator=(1, 0, 0)
)
t9 = Transition(A9, B9, [[1, 0, 0]], [[3], [3], [1]], T)
ax = verify_axioms(t9)
chk("flat9 axioms all pass", all(f.status == "pass" for f in ax))
chk("flat9 |K| = 81", kernel_K(t9).size() == 81)
rep = classify(t9)
chk("flat9 label", rep.rendered() == "regular-flat, initial")
chk("flat9 socle straight", rep.socle_shape == "straight")
ek = check_exactk(t9)
chk("flat9 exactk", all(f.status == "pass" for f in ek))
fe = check_flat_equivalence(t9)
agr = {f.name: f for f in fe}
chk("flat9 lreg agree", agr["flat-equivalence-agreement"].status == "pass")
chk(
    "flat9 lreg all true",
    agr["flat-equivalence-agreement"].witness
    == {"i": True, "ii": True, "iii": True, "iv": True, "lift_in_pB": False},
)
chk("flat9 exp transfer", agr["flat-exponent-transfer"].status == "pass")
tm = transition_module(t9)
chk("flat9 Tmod", tm.cyclic and tm.nu_annihilates and tm.module.size == 81)

# --- case 3: e1-shaped pair Z/9 -> C_27 x C_3 ------------------------------
Ae = GammaModule(cfg, (2,), [[1]], 1, generator=(1,))
Be = GammaModule(cfg, (3, 1), [[1, 9], [1, 1]], 2, generator=(1, 0))
te = Transition(Ae, Be, [[1, 0]], [[12], [0]], T)
ax = verify_axioms(te)
chk("e1 axioms all pass", all(f.status == "pass" for f in ax))
chk("e1 |K| = 9", kernel_K(te).size() == 9)
rep = classify(te)
chk("e1 label terminal", rep.label == "terminal")
chk("e1 rendered", rep.rendered() == "terminal, initial")
chk("e1 folded", rep.socle_shape == "folded")
fe = check_flat_equivalence(te)
agr = {f.name: f for f in fe}
chk("e1 lreg agree (all false)", agr["flat-equivalence-agreement"].status == "pass")
chk(
    "e1 lreg all false",
    agr["flat-equivalence-agreement"].witness
    == {"i": False, "ii": False, "iii": False, "iv": False, "lift_in_pB": True},
)
chk("e1 no exp transfer claim", "flat-exponent-transfer" not in agr)
it = check_initrans(te)
chk("e1 initrans applicable + pass", all(f.status == "pass" for f in it))
hr = check_hasroot(te)
chk("e1 hasroot applicable + pass", all(f.status == "pass" for f in hr))
sk = check_sk(te)
chk("e1 sk inapplicable", sk[0].status == "inapplicable")
ff = check_finflat(te)
chk("e1 finflat inapplicable", ff[0].status == "inapplicable")
tm = transition_module(te)
chk("e1 Tmod size 9 cyclic nu", tm.cyclic and tm.nu_annihilates and tm.module.size == 9)
chk("e1 ell = 1", tm.ell == 1 and tm.ell_witness_ok)
allf = dispatch_checks(te)
chk("e1 dispatch no fails", all(f.status != "fail" for f in allf))

# --- case 4: violation fixture (norm o lift != p) --------------------------
Av = GammaModule(cfg, (1,), [[1]], 1, generator=(1,))
Bv = GammaModule(cfg, (1,), [[1]], 1, generator=(1,))
tv = Transition(Av, Bv, [[1]], [[1]], T)
viol = axiom_violations(tv)
chk("violation detected", [f.name for f in viol] == ["norm-lift-is-p"])

# --- case 5: stable pair from the linear tower -----------------------------
As = GammaModule(cfg, (1,), [[1]], 1, generator=(1,))
Bs = GammaModule(cfg, (2,), [[4]], 2, generator=(1,))  # tau = 1+T, T = 3
ts = Transition(As, Bs, [[1]], [[21]], T)
ax = verify_axioms(ts)
chk("stable axioms all pass", all(f.status == "pass" for f in ax))
rep = classify(ts)
chk("stable label", rep.rendered() == "stable, initial")
st = check_stable(ts)
chk("stable checks pass", all(f.status == "pass" for f in st))
allf = dispatch_checks(ts)
chk("stable dispatch no fails", all(f.status != "fail" for f in allf))

# --- binomial detector ------------------------------------------------------
f1 = IwasawaPoly(cfg, [-3, 0, 1])  # T^2 - 3
ok, info = binomial_shape(f1, 3)
chk("binomial accepts T^2-3 at scale 3", ok)
f2 = IwasawaPoly(cfg, [9, 3, 1])  # T^2 + 3T + 9
ok2, _ = binomial_shape(f2, 9)
ok3, _ = binomial_shape(f2, 3)
chk("binomial rejects T^2+3T+9", not ok2 and not ok3)
w = binomial_solve(Be, Be.generator, 2, 9)
chk("binomial solve on e1: T^2 = 9w(T)", w is not None and w.constant() % 3 != 0)

# --- JSON round trip --------------------------------------------------------
js = transition_to_json(te)
te2 = transition_from_json(js)
chk("json roundtrip", transition_to_json(te2) == js)

print("FAILS:", len(fails), fails)
