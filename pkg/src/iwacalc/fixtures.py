"""Bundled example data and fixture evaluation.

A fixture file is a JSON envelope: name, kind, prime, precision, a payload
whose shape depends on the kind, and a list of expected values.  Every
expected value carries an origin marker: published-table for numbers copied
from an external table, derived for values produced by an independent
computation here, construction for properties the builder guarantees by
design.  evaluate_fixture rebuilds the objects and checks each expectation.

Coordinates in payloads may be negative; they are normalized modulo the
component orders on ingest.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .arith import PrimeConfig, valuation
from .lattices import howell, kernel_mixed, solve_mixed, span_size
from .modules import (
    GammaModule,
    Subgroup,
    fp_rank,
    image_subgroup,
    is_cyclic_lambda,
    minimal_generating_set,
    module_from_json,
    presentation_from_relations,
    socle_subgroup,
    subexponent,
)
from .poly import IwasawaPoly, nu_poly, omega_poly
from .towers import TowerSpec, _one_plus_t_matrix, _poly_vec_mod, build_tower
from .transitions import (
    Finding,
    Transition,
    _hom_kernel,
    binomial_solve,
    check_finflat,
    check_flat_equivalence,
    check_sk,
    classify,
    classify_from_invariants,
    transition_from_json,
    verify_axioms,
)

__all__ = [
    "FIXTURE_NAMES",
    "FixtureReport",
    "OrbitFixture",
    "OrbitSolveReport",
    "direct_sum",
    "evaluate_fixture",
    "fixture_dir",
    "ingest_module",
    "ingest_orbit_fixture",
    "list_fixtures",
    "load_fixture",
    "order_reversal_model",
    "realize_fixture",
]

FIXTURE_NAMES = (
    "e1",
    "e2",
    "e3",
    "e4_style",
    "finflat_quotient",
    "flat_model",
    "rthaine",
    "sk_boundary",
)

_DATA_DIR = Path(__file__).parent / "data"


def fixture_dir() -> Path:
    env = os.environ.get("IWACALC_FIXTURE_DIR")
    return Path(env) if env else _DATA_DIR


def list_fixtures() -> list[str]:
    return sorted(path.stem for path in fixture_dir().glob("*.json"))


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    path = Path(source)
    if not path.exists():
        candidate = fixture_dir() / f"{source}.json"
        if not candidate.exists():
            raise FileNotFoundError(f"no fixture file {source!r}")
        path = candidate
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_fixture(source) -> dict:
    data = _load_json(source)
    for key in ("name", "kind", "p", "precision", "payload", "expected"):
        if key not in data:
            raise ValueError(f"fixture is missing the {key!r} field")
    return data


def ingest_module(source) -> GammaModule:
    """Read a module file: component orders plus the tau matrix."""
    data = _load_json(source)
    if "orders" not in data and "payload" in data:
        data = data["payload"]
    if "orders" not in data or "tau" not in data:
        raise ValueError("module file needs orders and tau fields")
    return module_from_json(data)


def _exponent_of(q: int, p: int) -> int:
    e = 0
    while p**e < q:
        e += 1
    if p**e != q or e == 0:
        raise ValueError(f"component order {q} is not a positive power of {p}")
    return e


# ---------------------------------------------------------------------------
# orbit fixtures: coordinate tables without an explicit T-matrix


@dataclass
class OrbitSolveReport:
    consistent: bool
    tau: list[list[int]] | None
    degrees_of_freedom: int | None
    violated_identity: str | None
    certificate: dict | None
    module: GammaModule | None = None


class OrbitFixture:
    """A T-orbit printed as coordinate rows, plus a designated norm lift.

    Formal elements are pairs (g, c) standing for g(T)·b + c·a, where b is
    the orbit generator and a the lift.  T shifts g and kills a; orbit rows
    beyond the table are zero.  Group-level questions (orders, spans,
    socle membership) go through the coordinates; T-action questions stay in
    the formal calculus because a compatible matrix need not exist.
    """

    def __init__(self, cfg: PrimeConfig, payload: dict, name: str = "orbit"):
        self.cfg = cfg
        self.name = name
        self.level = int(payload["level"])
        p = cfg.p
        exps = tuple(_exponent_of(int(q), p) for q in payload["component_orders"])
        if any(exps[i] < exps[i + 1] for i in range(len(exps) - 1)):
            raise ValueError("component orders must be non-increasing")
        self.exps = exps
        self.moduli = tuple(p**e for e in exps)
        self.rows = [self.canon(r) for r in payload["orbit_rows"]]
        self.lift_vec = self.canon(payload["lift_vector"])
        self.source_exps = tuple(
            _exponent_of(int(q), p) for q in payload["source_orders"]
        )
        self.d = int(payload["transition_degree"])
        self.scalar_rows = dict(payload.get("scalar_rows", {}))
        # identity action carrier for group-level computations
        ident = [[1 if i == j else 0 for j in range(len(exps))] for i in range(len(exps))]
        self.group = GammaModule(cfg, exps, ident, level=1)

    # -- coordinate helpers
    def canon(self, vec) -> tuple[int, ...]:
        return tuple(int(x) % m for x, m in zip(vec, self.moduli))

    def scal(self, c: int, vec) -> tuple[int, ...]:
        return tuple((c * int(x)) % m for x, m in zip(vec, self.moduli))

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple([0] * len(self.exps))

    def coords(self, poly, lift_coeff: int = 0) -> tuple[int, ...]:
        acc = [0] * len(self.exps)
        for j, c in enumerate(poly):
            if j >= len(self.rows):
                break
            for i, x in enumerate(self.rows[j]):
                acc[i] += int(c) * x
        for i, x in enumerate(self.lift_vec):
            acc[i] += int(lift_coeff) * x
        return self.canon(acc)

    def t_orbit_coords(self, poly, lift_coeff: int, steps: int) -> list[tuple[int, ...]]:
        """Coordinates of the element and its first `steps` T-shifts."""
        out = []
        g, c = list(poly), lift_coeff
        for _ in range(steps + 1):
            out.append(self.coords(g, c))
            g, c = [0] + g, 0
        return out

    def norm_value(self, poly, lift_coeff: int) -> int:
        """Image under the norm when the source is cyclic with T acting as 0."""
        if len(self.source_exps) != 1:
            raise ValueError("formal norm rule needs a cyclic source")
        q = self.cfg.p ** self.source_exps[0]
        g0 = int(poly[0]) if poly else 0
        return (g0 + self.cfg.p * int(lift_coeff)) % q

    def in_socle(self, vec) -> bool:
        return all(x % (m // self.cfg.p) == 0 for x, m in zip(vec, self.moduli))

    def socle_fp(self, vec) -> list[int]:
        p = self.cfg.p
        return [(x // (m // p)) % p for x, m in zip(vec, self.moduli)]

    # -- the solver
    def solve_tau(self) -> OrbitSolveReport:
        p = self.cfg.p
        n = len(self.exps)
        pairs = [
            (self.rows[j], self.rows[j + 1] if j + 1 < len(self.rows) else self.zero)
            for j in range(len(self.rows))
        ]
        pairs.append((self.lift_vec, self.zero))
        action_rows = []
        freedom = 0
        for i in range(n):
            ei = self.exps[i]
            q = p**ei
            div_js = [j for j in range(n) if self.exps[j] < ei]
            n_eq = len(pairs) + len(div_js)
            # unknowns are the entries of row i of the T-action matrix; the
            # trailing equations encode the divisibility each entry owes to
            # the component order gap
            unk = []
            for j in range(n):
                col = [v[j] % q for v, _ in pairs] + [0] * len(div_js)
                if j in div_js:
                    col[len(pairs) + div_js.index(j)] = p ** self.exps[j]
                unk.append(col)
            targets = [w[i] % q for _, w in pairs] + [0] * len(div_js)
            sol = solve_mixed(unk, targets, [ei] * n_eq, p)
            if sol is None:
                cert = self._first_violated_certificate()
                msg = (
                    cert["message"]
                    if cert
                    else f"no consistent T-action on coordinate row {i}"
                )
                return OrbitSolveReport(False, None, None, msg, cert)
            kern = kernel_mixed(unk, [ei] * n_eq, p)
            ech = howell([list(k) for k in kern], q, p) if kern else []
            red = [x % q for x in sol]
            for hrow in ech:
                c = next((k for k, v in enumerate(hrow) if v % q), None)
                if c is None:
                    continue
                lead = p ** valuation(hrow[c] % q, p)
                t_ = red[c] // lead
                red = [(a - t_ * b) % q for a, b in zip(red, hrow)]
            if ech:
                freedom += valuation(span_size(ech, q, p), p)
            action_rows.append(red)
        tau = [
            [(action_rows[i][j] + (1 if i == j else 0)) % (p ** self.exps[i]) for j in range(n)]
            for i in range(n)
        ]
        try:
            module = GammaModule(
                self.cfg, self.exps, tau, level=self.level, generator=self.rows[0]
            )
        except ValueError as exc:
            return OrbitSolveReport(
                False, None, freedom, f"solved action fails validation: {exc}", None
            )
        return OrbitSolveReport(True, tau, freedom, None, None, module)

    def _certificates(self) -> list[dict]:
        """Scalar coincidences c·u == m·v force c·Tu == m·Tv; collect breaks.

        The scan order is deterministic: table position, then scalar.
        """
        p = self.cfg.p
        bound = p ** max(self.exps)
        seq = [
            (j, self.rows[j], self.rows[j + 1] if j + 1 < len(self.rows) else self.zero)
            for j in range(len(self.rows))
        ]
        seq.append(("a", self.lift_vec, self.zero))
        seen: dict = {}
        out = []
        for tag, vec, succ in seq:
            for c in range(1, bound):
                key = self.scal(c, vec)
                forced = self.scal(c, succ)
                if key == self.zero:
                    if forced != self.zero:
                        out.append(self._certificate(tag, c, None, None, forced))
                    continue
                if key in seen:
                    tag0, c0, forced0 = seen[key]
                    if forced0 != forced:
                        out.append(self._certificate(tag0, c0, tag, c, forced0, forced))
                else:
                    seen[key] = (tag, c, forced)
        return out

    def _certificate(self, tag0, c0, tag1, c1, lhs, rhs=None) -> dict:
        def elem(tag, shift):
            if tag == "a":
                return "T·a" if shift else "a"
            return f"T^{tag + shift}·b"

        def succ_tag(tag):
            return "T·a" if tag == "a" else tag + 1

        if tag1 is None:
            msg = (
                f"{c0}·{elem(tag0, 1)} should vanish because {c0}·{elem(tag0, 0)} "
                f"does, but it equals {list(lhs)}"
            )
            return {
                "scalars": [c0],
                "from": [tag0],
                "forced": [succ_tag(tag0)],
                "lhs": list(lhs),
                "rhs": [0] * len(self.exps),
                "message": msg,
            }
        msg = (
            f"{c0}·{elem(tag0, 1)} != {c1}·{elem(tag1, 1)} although "
            f"{c0}·{elem(tag0, 0)} == {c1}·{elem(tag1, 0)}"
        )
        return {
            "scalars": [c0, c1],
            "from": [tag0, tag1],
            "forced": [succ_tag(tag0), succ_tag(tag1)],
            "lhs": list(lhs),
            "rhs": list(rhs),
            "message": msg,
        }

    def _first_violated_certificate(self) -> dict | None:
        certs = self._certificates()
        return certs[0] if certs else None


def ingest_orbit_fixture(source, strict: bool = True):
    """Solve an orbit table for a compatible module.

    Returns the GammaModule when a T-matrix exists (the Howell-canonical
    representative; leftover degrees of freedom are recorded in the module
    labels).  Inconsistent tables raise with the violated identity named,
    or return the OrbitSolveReport when strict is off.
    """
    data = _load_json(source)
    payload = data.get("payload", data)
    cfg = PrimeConfig(int(data.get("p", 3)), int(data.get("precision", 8)))
    orb = OrbitFixture(cfg, payload, name=data.get("name", "orbit"))
    rep = orb.solve_tau()
    if rep.consistent:
        mod = rep.module
        mod.labels["orbit_degrees_of_freedom"] = str(rep.degrees_of_freedom)
        return mod
    if strict:
        raise ValueError(f"inconsistent orbit table: {rep.violated_identity}")
    return rep


# ---------------------------------------------------------------------------
# builders


def _cyclic_quotient(cfg: PrimeConfig, level: int, relation: dict) -> GammaModule:
    """One summand: the level-n group ring modulo a monic or scalar relation."""
    om = omega_poly(level, cfg)
    width = om.degree()
    tau_amb = _one_plus_t_matrix(om, cfg.modulus)
    rows = []
    if "f" in relation:
        g = IwasawaPoly(cfg, relation["f"])
        for j in range(width):
            shifted = IwasawaPoly(cfg, [0] * j + g.to_list())
            rows.append(tuple(_poly_vec_mod(shifted, om)))
    else:
        s = int(relation["scalar"]) % cfg.modulus
        rows = [tuple(s if i == j else 0 for i in range(width)) for j in range(width)]
    pres = presentation_from_relations(cfg, level, width, rows, tau_amb)
    M = pres.module
    gen = tuple(pres.coords(tuple([1] + [0] * (width - 1))))
    return GammaModule(cfg, M.orders, M.tau, level=level, generator=gen)


def direct_sum(summands: list[GammaModule]) -> GammaModule:
    """Block sum with components re-sorted into non-increasing order."""
    if not summands:
        raise ValueError("need at least one summand")
    cfg = summands[0].cfg
    level = max(m.level for m in summands)
    orders = []
    for m in summands:
        orders.extend(m.orders)
    perm = sorted(range(len(orders)), key=lambda k: (-orders[k], k))
    offsets = []
    off = 0
    for m in summands:
        offsets.append(off)
        off += m.p_rank
    big = [[0] * off for _ in range(off)]
    for m, o in zip(summands, offsets):
        for i in range(m.p_rank):
            for j in range(m.p_rank):
                big[o + i][o + j] = m.tau[i][j]
    tau = [[big[perm[i]][perm[j]] for j in range(off)] for i in range(off)]
    new_orders = tuple(orders[k] for k in perm)
    return GammaModule(cfg, new_orders, tau, level=level)


def order_reversal_model(p: int, f_coeffs, m: int) -> GammaModule:
    """The graded test bed (Z/p^m)^m: quotient by the m-th power of a
    distinguished linear polynomial together with p^m."""
    cfg = PrimeConfig(p, max(2 * m + 2, 4))
    f = IwasawaPoly(cfg, f_coeffs)
    fm = f
    for _ in range(m - 1):
        fm = fm * f
    width = fm.degree()
    tau_amb = _one_plus_t_matrix(fm, cfg.modulus)
    rows = [
        tuple(p**m if i == j else 0 for i in range(width)) for j in range(width)
    ]
    last = None
    for level in range(m + 1, m + 4):
        try:
            pres = presentation_from_relations(cfg, level, width, rows, tau_amb)
            M = pres.module
            gen = tuple(pres.coords(tuple([1] + [0] * (width - 1))))
            return GammaModule(cfg, M.orders, M.tau, level=level, generator=gen)
        except ValueError as exc:
            last = exc
    raise ValueError(f"no admissible level for the model: {last}")


def _build_tower_transition(cfg: PrimeConfig, payload: dict) -> dict:
    f = IwasawaPoly(cfg, payload["f"])
    spec = TowerSpec(cfg, f=f, horizon=int(payload["levels"]))
    tower = build_tower(spec)
    t = tower.transitions[int(payload.get("transition_index", 0))]
    return {"tower": tower, "transition": t}


def _build_flat_quotient(cfg: PrimeConfig, payload: dict) -> dict:
    src = payload["source"]
    tgt = payload["target"]
    n = int(src["level"])
    om = omega_poly(n, cfg)
    q_src = cfg.p ** int(src["flat_exponent"])
    tauA = _one_plus_t_matrix(om, q_src)
    gen = tuple([1] + [0] * (om.degree() - 1))
    A = GammaModule(
        cfg,
        tuple([int(src["flat_exponent"])] * om.degree()),
        tauA,
        level=n,
        generator=gen,
    )

    monic = IwasawaPoly(cfg, tgt["relations"]["monic"])
    width = int(tgt["width"])
    if monic.degree() != width:
        raise ValueError("monic relation must match the presentation width")
    const = int(tgt["relations"]["constant"])
    scaled = tgt["relations"]["scaled_omega"]
    sc_poly = omega_poly(int(scaled["level"]), cfg)
    sc = int(scaled["scale"])
    rows = [tuple(const if i == j else 0 for i in range(width)) for j in range(width)]
    sc_vec = [(sc * c) % cfg.modulus for c in sc_poly.to_list()]
    for j in range(width):
        g = IwasawaPoly(cfg, [0] * j + sc_vec)
        rows.append(tuple(_poly_vec_mod(g, monic)))
    pres = presentation_from_relations(cfg, int(tgt["level"]), width, rows, tau_amb := _one_plus_t_matrix(monic, cfg.modulus))
    B0 = pres.module
    genB = tuple(pres.coords(tuple([1] + [0] * (width - 1))))
    B = GammaModule(cfg, B0.orders, B0.tau, level=int(tgt["level"]), generator=genB)

    # norm reduces mod (p^k, omega_n); lift multiplies by the relative norm
    ncols = []
    for k in range(B.p_rank):
        amb = pres.lift(tuple(1 if i == k else 0 for i in range(B.p_rank)))
        red = _poly_vec_mod(IwasawaPoly(cfg, list(amb)), om)
        ncols.append(tuple(c % q_src for c in red))
    norm = [tuple(ncols[k][i] for k in range(B.p_rank)) for i in range(A.p_rank)]
    nu = nu_poly(n, cfg)
    lcols = []
    for j in range(A.p_rank):
        g = IwasawaPoly(cfg, [0] * j + nu.to_list())
        lcols.append(tuple(pres.coords(tuple(_poly_vec_mod(g, monic)))))
    lift = [tuple(lcols[j][i] for j in range(A.p_rank)) for i in range(B.p_rank)]
    t = Transition(A, B, norm, lift, om)
    return {"transition": t}


# ---------------------------------------------------------------------------
# evaluators: per kind, a dict of computed values keyed by expectation name


def _printed(orders, p) -> list[int]:
    return [p**e for e in orders]


def _transition_values(t: Transition) -> dict:
    p = t.A.cfg.p
    rep = classify(t)
    out = {
        "source-orders": _printed(t.A.orders, p),
        "target-orders": _printed(t.B.orders, p),
        "label": rep.rendered(),
        "axiom-violations": [f.name for f in rep.axiom_violations],
        "printed-terminal-not-definitional": not (t.B.p_rank < p * t.d),
        "rank-at-socle-boundary": t.B.p_rank == (p - 1) * t.d,
        "exponent-growth": [t.A.exponent, t.B.exponent],
    }
    if t.B.generator is not None:
        w = binomial_solve(t.B, t.B.generator, t.B.p_rank, t.A.exponent)
        out["binomial-annihilator"] = w is not None
    return out


def _eval_tower_transition(cfg: PrimeConfig, payload: dict) -> dict:
    return _transition_values(_build_tower_transition(cfg, payload)["transition"])


def _eval_transition(cfg: PrimeConfig, payload: dict) -> dict:
    t = transition_from_json(payload["transition"])
    B = t.B
    out = _transition_values(t)
    basis = [tuple(1 if j == k else 0 for j in range(B.p_rank)) for k in range(B.p_rank)]
    om = t.omega.to_list()
    omega_cols = [B.act(om, e) for e in basis]
    out["target-cyclic"] = bool(is_cyclic_lambda(B)[0])
    out["kernel-size"] = t.kernel.size()
    out["omega-image-size"] = image_subgroup(B, omega_cols).size()
    out["omega-torsion-size"] = _hom_kernel(B, B, omega_cols).size()
    out["lift-image-size"] = t.lift_image.size()
    out["socle-equals-kernel"] = socle_subgroup(B) == t.kernel
    sk = {f.name: f.status for f in check_sk(t)}
    out["socle-in-kernel-finding"] = sk.get("sk-socle-in-kernel", "inapplicable")
    return out


def _eval_flat_tower(cfg: PrimeConfig, payload: dict) -> dict:
    spec = TowerSpec(
        cfg, flat_exponent=int(payload["flat_exponent"]), horizon=int(payload["levels"])
    )
    tower = build_tower(spec)
    labels = [classify(t).label for t in tower.transitions]
    agree = all(
        f.status == "pass"
        for t in tower.transitions
        for f in check_flat_equivalence(t)
        if f.name == "flat-equivalence-agreement"
    )
    return {
        "ranks": list(tower.ranks),
        "exponents": [m.exponent for m in tower.levels],
        "labels": labels,
        "flat-equivalence-agreement": agree,
    }


def _eval_direct_sum(cfg: PrimeConfig, payload: dict) -> dict:
    mods = [
        _cyclic_quotient(cfg, int(payload["level"]), spec)
        for spec in payload["summands"]
    ]
    M = direct_sum(mods)
    return {
        "orders": _printed(M.orders, cfg.p),
        "p-rank": M.p_rank,
        "cyclic": bool(is_cyclic_lambda(M)[0]),
        "min-generators": len(minimal_generating_set(M)),
    }


def _eval_flat_quotient(cfg: PrimeConfig, payload: dict) -> dict:
    t = _build_flat_quotient(cfg, payload)["transition"]
    out = _transition_values(t)
    ff = {f.name: f for f in check_finflat(t)}
    for name in ("finflat-terminal", "finflat-rank-window", "finflat-binomial-annihilator"):
        if name in ff:
            out[name] = ff[name].status
    bin_f = ff.get("finflat-binomial-annihilator")
    if bin_f is not None and bin_f.witness:
        out["finflat-binomial-witness"] = bin_f.witness.get("w")
    return out


def _eval_orbit(cfg: PrimeConfig, payload: dict) -> dict:
    orb = OrbitFixture(cfg, payload)
    p = cfg.p
    n = len(orb.exps)
    out: dict = {}

    consistent = True
    for key, printed in orb.scalar_rows.items():
        scal_text, _, ref = key.partition("*")
        c = int(scal_text)
        if ref == "lift":
            got = orb.scal(c, orb.lift_vec)
        elif ref.startswith("orbit"):
            got = orb.scal(c, orb.rows[int(ref[len("orbit"):])])
        else:
            raise ValueError(f"unknown scalar row {key!r}")
        consistent = consistent and got == orb.canon(printed)
    out["printed-rows-consistent"] = consistent

    om = omega_poly(orb.level, cfg).to_list()
    out["orbit-satisfies-level-recurrence"] = all(
        orb.coords([0] * j + om) == orb.zero for j in range(len(orb.rows))
    )
    span = Subgroup.from_vectors(orb.group, orb.rows + [orb.lift_vec])
    out["orbit-spans-module"] = span.size() == orb.group.size
    out["generator-order"] = orb.group.order(orb.rows[0])
    out["lift-order"] = orb.group.order(orb.lift_vec)

    sg = payload["socle_generator"]
    s_poly, s_c = list(sg["poly"]), int(sg["lift_coeff"])
    s_coords = orb.coords(s_poly, s_c)
    out["socle-generator-coords"] = list(s_coords)
    out["socle-generator-order"] = orb.group.order(s_coords)
    orbit_of_s = orb.t_orbit_coords(s_poly, s_c, n - 1)
    out["socle-cyclic"] = all(orb.in_socle(v) for v in orbit_of_s) and fp_rank(
        [orb.socle_fp(v) for v in orbit_of_s], p
    ) == n
    out["socle-generator-outside-kernel"] = orb.norm_value(s_poly, s_c) != 0

    pb = orb.scal(p, orb.rows[0])
    lift_span = Subgroup.from_vectors(orb.group, [orb.lift_vec])
    out["p-generator-outside-lift-image"] = not lift_span.contains(pb)

    q = orb.group.exponent
    qb, qtb = orb.scal(q, orb.rows[0]), orb.scal(q, orb.rows[1])
    out["exponent-multiple-in-socle-T-kernel"] = orb.in_socle(qb) and qtb == orb.zero
    sq = q // p
    sqb, sqtb = orb.scal(sq, orb.rows[0]), orb.scal(sq, orb.rows[1])
    out["subexponent-multiple-in-socle-T-kernel"] = (
        orb.in_socle(sqb) and sqtb == orb.zero
    )

    roof = [orb.socle_fp(orb.scal(sq, r)) for r in orb.rows]
    shape = "straight" if fp_rank(roof, p) == n else "folded"
    out["socle-shape"] = shape
    rep = classify_from_invariants(
        p,
        len(orb.source_exps),
        n,
        orb.d,
        orb.group.exponent,
        p ** orb.exps[-1],
        shape,
    )
    out["label"] = rep.rendered()

    solve = orb.solve_tau()
    out["tau-matrix-exists"] = solve.consistent
    if solve.certificate is not None:
        out["violated-identity"] = {
            k: solve.certificate[k] for k in ("scalars", "from", "forced")
        }
    return out


_EVALUATORS = {
    "tower-transition": _eval_tower_transition,
    "transition": _eval_transition,
    "flat-tower": _eval_flat_tower,
    "direct-sum": _eval_direct_sum,
    "flat-quotient-transition": _eval_flat_quotient,
    "orbit": _eval_orbit,
}


def realize_fixture(fx) -> dict:
    """Rebuild the fixture's objects without judging expectations."""
    if not isinstance(fx, dict):
        fx = load_fixture(fx)
    cfg = PrimeConfig(int(fx["p"]), int(fx["precision"]))
    kind = fx["kind"]
    payload = fx["payload"]
    if kind == "tower-transition":
        return _build_tower_transition(cfg, payload)
    if kind == "transition":
        return {"transition": transition_from_json(payload["transition"])}
    if kind == "flat-tower":
        spec = TowerSpec(
            cfg,
            flat_exponent=int(payload["flat_exponent"]),
            horizon=int(payload["levels"]),
        )
        return {"tower": build_tower(spec)}
    if kind == "direct-sum":
        mods = [
            _cyclic_quotient(cfg, int(payload["level"]), s) for s in payload["summands"]
        ]
        return {"module": direct_sum(mods)}
    if kind == "flat-quotient-transition":
        return _build_flat_quotient(cfg, payload)
    if kind == "orbit":
        return {"orbit": OrbitFixture(cfg, payload, name=fx.get("name", "orbit"))}
    raise ValueError(f"unknown fixture kind {kind!r}")


@dataclass
class FixtureReport:
    name: str
    kind: str
    findings: list[Finding] = field(default_factory=list)

    @property
    def failures(self) -> list[Finding]:
        return [f for f in self.findings if f.status == "fail"]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "findings": [f.to_json() for f in self.findings],
            "failure_count": len(self.failures),
        }


def evaluate_fixture(fx) -> FixtureReport:
    if not isinstance(fx, dict):
        fx = load_fixture(fx)
    cfg = PrimeConfig(int(fx["p"]), int(fx["precision"]))
    actuals = _EVALUATORS[fx["kind"]](cfg, fx["payload"])
    findings = []
    for exp in fx["expected"]:
        name = exp["name"]
        origin = exp.get("origin", "derived")
        if name not in actuals:
            findings.append(
                Finding(name, "inapplicable", {"origin": origin, "reason": "no evaluator"})
            )
            continue
        got = actuals[name]
        findings.append(
            Finding(
                name,
                "pass" if got == exp["value"] else "fail",
                witness={"origin": origin, "expected": exp["value"], "actual": got},
            )
        )
    return FixtureReport(fx["name"], fx["kind"], findings)
