"""Model towers of finite level quotients joined by norms and nu-lifts.

A tower holds the levels A_n = (polynomial ring at precision N) / (f, omega_n)
for n up to a horizon, each with the image of 1 as designated generator, the
natural projection as norm and multiplication by nu as lift.  Flat towers
replace f by a prime power so every level is a free module over Z/p^k.  The
verifiers re-check the stabilization relations, the annihilator statements and
the conicity surrogates on the finished object and return findings rather
than raising.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .arith import PrimeConfig, valuation
from .modules import (
    GammaModule,
    image_subgroup,
    minimal_annihilator,
    presentation_from_relations,
    socle_subgroup,
    subexponent,
)
from .poly import IwasawaPoly, is_distinguished, is_eisenstein, nu_poly, omega_poly
from .transitions import (
    Finding,
    Transition,
    _hom_kernel,
    _passfail,
    binomial_shape,
    binomial_solve,
    classify,
    dispatch_checks,
)

__all__ = [
    "TowerSpec",
    "Tower",
    "PRECISION_CAP",
    "default_horizon",
    "build_tower",
    "fukuda_index",
    "fukuda_findings",
    "verify_stab_relations",
    "verify_main",
    "conicity_check",
    "is_violation",
    "run_all_verifiers",
    "tower_report",
    "sample_distinguished",
    "corpus_run",
]

PRECISION_CAP = 64


def default_horizon(p: int) -> int:
    return 5 if p == 3 else 3


@dataclass(frozen=True)
class TowerSpec:
    """Input data: exactly one of f (distinguished) or a flat exponent k."""

    cfg: PrimeConfig
    f: IwasawaPoly | None = None
    horizon: int = 0  # 0 selects the per-prime default
    flat_exponent: int | None = None

    def __post_init__(self) -> None:
        if (self.f is None) == (self.flat_exponent is None):
            raise ValueError("exactly one of f / flat_exponent must be given")
        if self.f is not None:
            if self.f.is_zero():
                raise ValueError("f must be nonzero")
            if not is_distinguished(self.f):
                raise ValueError("f must be distinguished (monic, lower coefficients divisible by p)")
        elif self.flat_exponent < 1:
            raise ValueError("flat exponent must be >= 1")
        if self.horizon == 0:
            object.__setattr__(self, "horizon", default_horizon(self.cfg.p))
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


@dataclass
class Tower:
    spec: TowerSpec
    cfg: PrimeConfig  # working precision, possibly raised during the build
    levels: list[GammaModule]  # levels[i] is A_{i+1}
    transitions: list[Transition]
    degenerate: bool = False
    degenerate_reason: str | None = None
    non_injective_levels: list[int] = field(default_factory=list)
    n0: int | None = None
    z: int | None = None

    @property
    def horizon(self) -> int:
        return len(self.levels)

    @property
    def is_flat(self) -> bool:
        return self.spec.flat_exponent is not None

    @property
    def ranks(self) -> list[int]:
        return [M.p_rank for M in self.levels]


# ---------------------------------------------------------------------------
# ambient polynomial arithmetic in Z/p^N[T] modulo a monic f


def _tmul_mod(vec: list[int], fcoeffs, m: int) -> list[int]:
    """T * (vector of coefficients below deg f), reduced mod monic f, mod m."""
    d = len(fcoeffs) - 1
    top = vec[d - 1]
    out = [0] * d
    out[0] = (-top * fcoeffs[0]) % m
    for j in range(1, d):
        out[j] = (vec[j - 1] - top * fcoeffs[j]) % m
    return out


def _poly_vec_mod(g: IwasawaPoly, f: IwasawaPoly) -> list[int]:
    _, r = g.divmod_monic(f)
    d = f.degree()
    return list(r.coeffs) + [0] * (d - len(r.coeffs))


def _mult_matrix(gvec: list[int], f: IwasawaPoly, m: int) -> list[list[int]]:
    """Column-convention matrix of multiplication by g on the T^j basis mod f."""
    d = f.degree()
    cols = []
    cur = list(gvec)
    for _ in range(d):
        cols.append(list(cur))
        cur = _tmul_mod(cur, f.coeffs, m)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _one_plus_t_matrix(f: IwasawaPoly, m: int) -> list[list[int]]:
    d = f.degree()
    one = [1] + [0] * (d - 1)
    vec = [(a + b) % m for a, b in zip(one, _tmul_mod(one, f.coeffs, m))]
    return _mult_matrix(vec, f, m)


def _basis(M: GammaModule) -> list[tuple[int, ...]]:
    r = M.p_rank
    return [tuple(1 if j == k else 0 for j in range(r)) for k in range(r)]


# ---------------------------------------------------------------------------
# construction


def _build_f_levels(cfg: PrimeConfig, f: IwasawaPoly, horizon: int):
    width = f.degree()
    m = cfg.modulus
    preses = []
    for n in range(1, horizon + 1):
        omr = _poly_vec_mod(omega_poly(n, cfg), f)
        rows = []
        vec = list(omr)
        for _ in range(width):
            rows.append(list(vec))
            vec = _tmul_mod(vec, f.coeffs, m)
        pres = presentation_from_relations(
            cfg,
            n,
            width,
            rows,
            _one_plus_t_matrix(f, m),
            check_precision=False,
            labels={"name": f"A_{n}"},
        )
        M = pres.module
        if M.p_rank:
            M.generator = pres.coords([1] + [0] * (width - 1))
        preses.append(pres)
    levels = [pr.module for pr in preses]

    transitions = []
    for n in range(1, horizon):
        lo, hi = preses[n - 1], preses[n]
        rA, rB = lo.module.p_rank, hi.module.p_rank
        norm_cols = [lo.coords(hi.lift(e)) for e in _basis(hi.module)]
        norm = [[norm_cols[j][i] for j in range(rB)] for i in range(rA)]
        m_nu = _mult_matrix(_poly_vec_mod(nu_poly(n, cfg), f), f, m)
        lift_cols = []
        for e in _basis(lo.module):
            amb = lo.lift(e)
            img = [sum(m_nu[i][t] * amb[t] for t in range(width)) % m for i in range(width)]
            lift_cols.append(hi.coords(img))
        lift = [[lift_cols[j][i] for j in range(rA)] for i in range(rB)]
        transitions.append(
            Transition(lo.module, hi.module, norm, lift, omega_poly(n, cfg))
        )
    return levels, transitions


def _build_flat_levels(cfg: PrimeConfig, k: int, horizon: int):
    m = cfg.modulus
    levels = []
    for n in range(1, horizon + 1):
        om = omega_poly(n, cfg)
        width = om.degree()
        M = GammaModule(
            cfg,
            (k,) * width,
            _one_plus_t_matrix(om, m),
            n,
            generator=[1] + [0] * (width - 1),
            labels={"name": f"A_{n}"},
        )
        levels.append(M)

    transitions = []
    for n in range(1, horizon):
        om_lo, om_hi = omega_poly(n, cfg), omega_poly(n + 1, cfg)
        wlo, whi = om_lo.degree(), om_hi.degree()
        cols = []
        cur = [1] + [0] * (wlo - 1)
        for _ in range(whi):
            cols.append(list(cur))
            cur = _tmul_mod(cur, om_lo.coeffs, m)
        norm = [[cols[j][i] for j in range(whi)] for i in range(wlo)]
        cols = []
        cur = _poly_vec_mod(nu_poly(n, cfg), om_hi)
        for _ in range(wlo):
            cols.append(list(cur))
            cur = _tmul_mod(cur, om_hi.coeffs, m)
        lift = [[cols[j][i] for j in range(wlo)] for i in range(whi)]
        transitions.append(Transition(levels[n - 1], levels[n], norm, lift, om_lo))
    return levels, transitions


def build_tower(spec: TowerSpec) -> Tower:
    """Construct all levels, detect lift injectivity, settle n0 and z.

    Precision is raised until it exceeds twice the largest component
    exponent.  When the exponent itself keeps tracking the precision the
    ideal (f, omega_n) fails to cut out a finite structure independent of N;
    the tower is then rebuilt at the requested precision and flagged
    degenerate instead of chasing the cap.
    """
    if spec.flat_exponent is not None:
        k = spec.flat_exponent
        cfg = spec.cfg
        if cfg.N <= 2 * k:
            cfg = cfg.with_precision(2 * k + 1)
        levels, transitions = _build_flat_levels(cfg, k, spec.horizon)
        tower = Tower(spec, cfg, levels, transitions)
    else:
        N = spec.cfg.N
        prev_saturated = False
        while True:
            cfg = spec.cfg.with_precision(N)
            f = IwasawaPoly(cfg, spec.f.coeffs)
            levels, transitions = _build_f_levels(cfg, f, spec.horizon)
            emax = max((M.orders[0] if M.orders else 0) for M in levels)
            if N > 2 * emax:
                tower = Tower(spec, cfg, levels, transitions)
                break
            if emax >= N and prev_saturated:
                cfg = spec.cfg
                f = IwasawaPoly(cfg, spec.f.coeffs)
                levels, transitions = _build_f_levels(cfg, f, spec.horizon)
                tower = Tower(
                    spec,
                    cfg,
                    levels,
                    transitions,
                    degenerate=True,
                    degenerate_reason="component exponent tracks the precision; "
                    "f shares a factor with some omega_n",
                )
                break
            prev_saturated = emax >= N
            N = max(2 * emax + 1, N + 1)
            if N > PRECISION_CAP:
                raise ValueError(
                    f"precision cap p^{PRECISION_CAP} exceeded while separating "
                    f"component exponents (largest seen: p^{emax})"
                )

    for idx, t in enumerate(tower.transitions, start=1):
        if t.lift_image.size() != t.A.size:
            tower.non_injective_levels.append(idx)
    tower.n0 = fukuda_index(tower)
    if tower.n0 is not None:
        M = tower.levels[tower.n0 - 1]
        if M.generator is not None:
            tower.z = M.order_exp(M.generator) - tower.n0
    return tower


# ---------------------------------------------------------------------------
# verifiers


def fukuda_index(tw: Tower) -> int | None:
    """Least level n with p-rank(A_n) = p-rank(A_{n+1}); None if unsettled."""
    r = tw.ranks
    for n in range(1, len(r)):
        if r[n - 1] == r[n]:
            return n
    return None


def fukuda_findings(tw: Tower) -> list[Finding]:
    r = tw.ranks
    if tw.n0 is None:
        reason = "rank never repeats within the horizon"
        if tw.is_flat:
            reason += " (flat towers grow at every level by design)"
        return [Finding("fukuda-persistence", "inapplicable", reason)]
    out = [
        _passfail(
            "fukuda-persistence",
            all(r[m - 1] == r[tw.n0 - 1] for m in range(tw.n0, len(r) + 1)),
            witness={"ranks": r, "n0": tw.n0},
        ),
        _passfail(
            "rank-monotone-before-stabilization",
            all(r[i] <= r[i + 1] for i in range(tw.n0 - 1)),
            witness={"ranks": r[: tw.n0]},
        ),
    ]
    return out


def verify_stab_relations(tw: Tower) -> list[Finding]:
    """Relations at stabilized levels: the lift sends the generator to p
    times the upper generator, the whole level onto p times the upper level,
    omega pushes a generating orbit into the lifted p-torsion, and orders
    grow by exactly p per level."""
    if tw.degenerate:
        return [Finding("stabilization", "inapplicable", "degenerate model")]
    if tw.n0 is None:
        return [
            Finding(
                "stabilization", "inapplicable", "no stabilization index within the horizon"
            )
        ]
    p = tw.cfg.p
    n0, z = tw.n0, tw.z
    bad_ord = []
    for n in range(n0, tw.horizon + 1):
        M = tw.levels[n - 1]
        if M.generator is None or M.order_exp(M.generator) != n + z:
            bad_ord.append(n)
    bad_gen, bad_mod, bad_soc = [], [], []
    for n in range(n0, tw.horizon):
        t = tw.transitions[n - 1]
        A, B = t.A, t.B
        if t.lift_apply(A.generator) != B.scal(p, B.generator):
            bad_gen.append(n)
        pB = image_subgroup(B, [B.scal(p, e) for e in _basis(B)])
        if t.lift_image != pB:
            bad_mod.append(n)
        tor = socle_subgroup(A)
        lifted = image_subgroup(B, [t.lift_apply(v) for v in tor.generator_vectors()])
        x = B.generator
        for _ in range(B.p_rank):
            if not lifted.contains(B.act(t.omega, x)):
                bad_soc.append(n)
                break
            x = B.t_apply(x)
    def w(levels):
        return {"failing_levels": levels} if levels else {"n0": n0, "z": z}
    return [
        _passfail("stabilization-lift-generator", not bad_gen, witness=w(bad_gen)),
        _passfail("stabilization-lift-module", not bad_mod, witness=w(bad_mod)),
        _passfail("stabilization-omega-torsion", not bad_soc, witness=w(bad_soc)),
        _passfail("stabilization-order-law", not bad_ord, witness=w(bad_ord)),
    ]


def verify_main(tw: Tower) -> list[Finding]:
    """Statements about the annihilator input f: the order of the first
    generator matches the constant-term valuation, the order-p case forces an
    Eisenstein shape, the early/late stabilization dichotomy, a binomial
    annihilator at the stabilization level, and the drift between the level
    annihilators and f killing the lifted previous level."""
    p = tw.cfg.p
    if tw.is_flat:
        return [Finding("main", "inapplicable", "flat tower has no annihilator input")]
    if tw.degenerate:
        return [Finding("main", "inapplicable", "degenerate model")]
    f = IwasawaPoly(tw.cfg, tw.spec.f.coeffs)
    out = []

    A1 = tw.levels[0]
    v0 = valuation(f.constant(), p, cap=tw.cfg.N)
    q1 = A1.order(A1.generator) if A1.p_rank else 1
    out.append(
        _passfail(
            "main-constant-valuation",
            q1 == p**v0,
            witness={"v_p(f(0))": v0, "ord(a_1)": q1},
        )
    )
    if q1 == p:
        out.append(_passfail("main-eisenstein", is_eisenstein(f), witness={"v_p(f(0))": v0}))
    else:
        out.append(Finding("main-eisenstein", "inapplicable", "ord(a_1) != p"))

    n0 = tw.n0
    if n0 is None:
        out.append(Finding("main-dichotomy", "inapplicable", "unsettled"))
        out.append(Finding("main-binomial", "inapplicable", "unsettled"))
        out.append(Finding("main-annihilator-shift", "inapplicable", "unsettled"))
        return out

    r_final = tw.ranks[-1]
    if n0 <= 3:
        if q1 > p:
            out.append(
                _passfail(
                    "main-dichotomy",
                    r_final < p * (p - 1),
                    witness={"branch": "early", "rank": r_final, "bound": p * (p - 1)},
                )
            )
        else:
            out.append(
                Finding(
                    "main-dichotomy",
                    "pass",
                    {"branch": "early", "note": "no rank bound claimed when ord(a_1) = p"},
                )
            )
    else:
        M = tw.levels[n0 - 2]
        out.append(
            _passfail(
                "main-dichotomy",
                subexponent(M) == M.exponent,
                witness={"branch": "late", "level": n0 - 1},
            )
        )

    Mn0 = tw.levels[n0 - 1]
    lam = Mn0.p_rank
    w = binomial_solve(Mn0, Mn0.generator, lam, q1) if Mn0.generator is not None else None
    witness = {"lead_degree": lam, "scale": q1}
    if w is not None:
        witness["unit"] = w.to_list()
    if Mn0.generator is not None:
        g0 = minimal_annihilator(Mn0, Mn0.generator)
        shape_ok = q1 < tw.cfg.modulus and binomial_shape(g0, q1)[0]
        witness["minimal_annihilator"] = g0.to_list()
        witness["minimal_annihilator_binomial"] = shape_ok
    out.append(_passfail("main-binomial", w is not None, witness=witness))

    bad_shift = []
    for n in range(max(n0, 2), tw.horizon + 1):
        M = tw.levels[n - 1]
        if M.generator is None:
            bad_shift.append(n)
            continue
        g = minimal_annihilator(M, M.generator)
        h = g - f
        U = tw.transitions[n - 2].lift_image
        if any(any(M.act(h, v)) for v in U.generator_vectors()):
            bad_shift.append(n)
    if tw.horizon < max(n0, 2):
        out.append(Finding("main-annihilator-shift", "inapplicable", "horizon below first comparable level"))
    else:
        out.append(
            _passfail(
                "main-annihilator-shift",
                not bad_shift,
                witness={"failing_levels": bad_shift} if bad_shift else None,
            )
        )
    return out


def _subgroup_p_rank(U, B: GammaModule) -> int:
    p = B.cfg.p
    pU = image_subgroup(B, [B.scal(p, g) for g in U.generator_vectors()])
    quot = U.size() // pU.size()
    k = 0
    while quot > 1:
        quot //= p
        k += 1
    return k


def conicity_check(tw: Tower) -> list[Finding]:
    """Finite surrogates for the conicity conditions: composite-norm kernels
    are omega multiples, lifted levels saturate to p times the upper level at
    stabilized indices, and f stays coprime to every omega (ideal proper,
    lifts injective)."""
    out = []

    if tw.degenerate:
        out.append(
            Finding(
                "conic-kernel-law",
                "inapplicable",
                "degenerate model has no reliable omega structure at this precision",
            )
        )
    else:
        bad_pairs = []
        for n in range(1, tw.horizon + 1):
            om = omega_poly(n, tw.cfg)
            for m_idx in range(n + 1, tw.horizon + 1):
                Mm = tw.levels[m_idx - 1]
                images = list(_basis(Mm))
                for step in range(m_idx - 1, n - 1, -1):
                    t = tw.transitions[step - 1]
                    images = [t.norm_apply(v) for v in images]
                ker = _hom_kernel(Mm, tw.levels[n - 1], images)
                omMm = image_subgroup(Mm, [Mm.act(om, e) for e in _basis(Mm)])
                if ker != omMm:
                    bad_pairs.append([n, m_idx])
        out.append(
            _passfail(
                "conic-kernel-law",
                not bad_pairs,
                witness={"failing_pairs": bad_pairs} if bad_pairs else None,
            )
        )

    if tw.degenerate or tw.is_flat or tw.n0 is None:
        out.append(
            Finding(
                "conic-image-saturation",
                "inapplicable",
                "needs a settled non-degenerate tower built from f",
            )
        )
    else:
        p = tw.cfg.p
        bad = []
        for n in range(tw.n0, tw.horizon):
            t = tw.transitions[n - 1]
            B = t.B
            pB = image_subgroup(B, [B.scal(p, e) for e in _basis(B)])
            if t.lift_image != pB or _subgroup_p_rank(t.lift_image, B) != t.A.p_rank:
                bad.append(n)
        out.append(
            _passfail(
                "conic-image-saturation",
                not bad,
                witness={"failing_levels": bad} if bad else {"levels": [tw.n0, tw.horizon - 1]},
            )
        )

    if tw.is_flat:
        out.append(Finding("conic-coprimality", "inapplicable", "no f in a flat tower"))
    else:
        proper = all(M.size > 1 for M in tw.levels)
        injective = not tw.non_injective_levels
        out.append(
            _passfail(
                "conic-coprimality",
                proper and injective,
                witness={
                    "ideal_proper": proper,
                    "non_injective_levels": tw.non_injective_levels,
                },
            )
        )
    return out


# ---------------------------------------------------------------------------
# orchestration

# Failures in these families make the run fail.  Everything else that can
# fail (the per-case lemma checkers and the annihilator-shape detectors) is
# reported as a diagnostic: those checks carry extra hypotheses that random
# towers are free to miss.
VIOLATION_FAMILIES = (
    "axiom:",
    "fukuda-persistence",
    "rank-monotone-before-stabilization",
    "rank-growth-stop",
    "rank-bound",
    "exponent-bound",
    "stabilization",
    "main-constant-valuation",
    "main-eisenstein",
    "main-dichotomy",
    "main-annihilator-shift",
    "conic-",
)


def is_violation(name: str) -> bool:
    return name.startswith(VIOLATION_FAMILIES)


def run_all_verifiers(tw: Tower, with_transition_checks: bool = True) -> dict:
    """All tower-level verifiers plus, optionally, the per-transition
    classification and lemma checkers.  Returns {"findings": [...],
    "transitions": [...], "labels": [...]} with findings as Finding objects."""
    findings = list(fukuda_findings(tw))
    findings.extend(verify_stab_relations(tw))
    findings.extend(verify_main(tw))
    findings.extend(conicity_check(tw))

    labels = []
    per_transition = []
    if with_transition_checks and not tw.degenerate:
        prev = None
        for idx, t in enumerate(tw.transitions, start=1):
            rep = classify(t)
            labels.append(rep.label)
            t_findings = [
                Finding(f"axiom:{name}", "fail", None) for name in rep.axiom_violations
            ]
            t_findings.extend(dispatch_checks(t, prev=prev, rep=rep))
            per_transition.append(
                {"index": idx, "label": rep.rendered(), "findings": t_findings}
            )
            prev = t
    return {"findings": findings, "transitions": per_transition, "labels": labels}


def _finding_json(f: Finding) -> dict:
    return f.to_json()


def tower_report(tw: Tower, with_transition_checks: bool = True) -> dict:
    """JSON-ready summary of a tower and every verifier's findings."""
    run = run_all_verifiers(tw, with_transition_checks=with_transition_checks)
    violations = []
    diagnostics = []
    for f in run["findings"]:
        if f.status != "fail":
            continue
        (violations if is_violation(f.name) else diagnostics).append(f.name)
    transitions = []
    for entry in run["transitions"]:
        for f in entry["findings"]:
            if f.status != "fail":
                continue
            tagged = f"transition[{entry['index']}]:{f.name}"
            (violations if is_violation(f.name) else diagnostics).append(tagged)
        transitions.append(
            {
                "index": entry["index"],
                "label": entry["label"],
                "findings": [_finding_json(f) for f in entry["findings"]],
            }
        )
    report = {
        "p": tw.cfg.p,
        "precision": tw.cfg.N,
        "requested_precision": tw.spec.cfg.N,
        "horizon": tw.horizon,
        "flat_exponent": tw.spec.flat_exponent,
        "f": tw.spec.f.to_list() if tw.spec.f is not None else None,
        "ranks": tw.ranks,
        "orders": [list(M.orders) for M in tw.levels],
        "n0": tw.n0,
        "z": tw.z,
        "degenerate": tw.degenerate,
        "degenerate_reason": tw.degenerate_reason,
        "non_injective_levels": tw.non_injective_levels,
        "findings": [_finding_json(f) for f in run["findings"]],
        "transitions": transitions,
        "labels": run["labels"],
        "violations": violations,
        "diagnostic_failures": diagnostics,
    }
    return report


# ---------------------------------------------------------------------------
# corpus


def sample_distinguished(rng: random.Random, p: int, max_deg: int, cfg: PrimeConfig) -> IwasawaPoly:
    """Monic polynomial with lower coefficients p times a uniform draw below
    p^4, nonzero constant term."""
    deg = rng.randint(1, max_deg)
    coeffs = [p * rng.randrange(p**4) for _ in range(deg)]
    while coeffs[0] == 0:
        coeffs[0] = p * rng.randrange(p**4)
    return IwasawaPoly(cfg, coeffs + [1])


def corpus_run(
    p: int,
    count: int,
    max_deg: int,
    seed: int,
    horizon: int | None = None,
    precision: int | None = None,
) -> dict:
    """Sample towers, run every verifier, aggregate labels, stabilization
    indices and violations.  Deterministic for a fixed seed."""
    horizon = horizon or default_horizon(p)
    precision = precision or 8
    base_cfg = PrimeConfig(p, precision)
    rng = random.Random(seed)
    towers = []
    label_hist: dict[str, int] = {}
    n0_hist: dict[str, int] = {}
    violations: list[str] = []
    diagnostics: list[str] = []
    for idx in range(count):
        f = sample_distinguished(rng, p, max_deg, base_cfg)
        entry: dict = {"index": idx, "f": f.to_list()}
        try:
            tw = build_tower(TowerSpec(base_cfg, f=f, horizon=horizon))
        except ValueError as exc:
            entry["error"] = str(exc)
            towers.append(entry)
            continue
        report = tower_report(tw)
        entry.update(
            {
                "ranks": report["ranks"],
                "n0": report["n0"],
                "z": report["z"],
                "degenerate": report["degenerate"],
                "labels": report["labels"],
                "violations": report["violations"],
                "diagnostic_failures": report["diagnostic_failures"],
            }
        )
        for lab in report["labels"]:
            label_hist[lab] = label_hist.get(lab, 0) + 1
        n0_key = str(report["n0"])
        n0_hist[n0_key] = n0_hist.get(n0_key, 0) + 1
        violations.extend(f"tower[{idx}]:{name}" for name in report["violations"])
        diagnostics.extend(
            f"tower[{idx}]:{name}" for name in report["diagnostic_failures"]
        )
        towers.append(entry)
    return {
        "p": p,
        "count": count,
        "max_deg": max_deg,
        "seed": seed,
        "horizon": horizon,
        "precision": precision,
        "towers": towers,
        "label_histogram": label_hist,
        "n0_histogram": n0_hist,
        "violations": violations,
        "violation_count": len(violations),
        "diagnostic_failures": diagnostics,
        "diagnostic_failure_count": len(diagnostics),
    }
