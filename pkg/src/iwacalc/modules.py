"""Finite abelian p-groups with a Gamma-action, as modules over Z_p[T].

A module is presented by invariant factors plus an automorphism matrix:
orders = descending exponents (e_1, ..., e_r) with component i cyclic of
order p^{e_i}, and tau an integer matrix acting on coordinate columns,
(tau x)_i = sum_j tau[i][j] x_j mod p^{e_i}.  T always acts as tau - I.

All exact linear algebra (membership, kernels, quotients) runs over Z/p^N
through the Howell/Smith routines in lattices.py; nothing here touches
floating point or rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .arith import PrimeConfig, inv_mod, valuation
from .lattices import (
    AugmentedEchelon,
    howell,
    kernel_mixed,
    smith_quotient,
    solve_mixed,
    span_size,
)
from .poly import (
    IwasawaPoly,
    QuotientIdeal,
    is_distinguished,
    omega_poly,
    weierstrass_prepare,
)

__all__ = [
    "GammaModule",
    "Subgroup",
    "FpTStructure",
    "OrderProfile",
    "QuotientMap",
    "Presentation",
    "subgroup_span",
    "lambda_closure",
    "subgroup_sum",
    "subgroup_intersection",
    "quotient_module",
    "presentation_from_relations",
    "minimal_annihilator",
    "order_profile",
    "express_as_unit_multiple",
    "dual_module",
    "pairing",
    "module_to_json",
    "module_from_json",
]


# ---------------------------------------------------------------------------
# small F_p linear algebra (socle/roof structure work mod p)


def fp_rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    mat = [[e % p for e in r] for r in rows]
    pivots: list[int] = []
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [(e * inv) % p for e in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank])]
        pivots.append(c)
        rank += 1
    return mat[:rank], pivots


def fp_rank(rows: list[list[int]], p: int) -> int:
    return len(fp_rref(rows, p)[0])


def fp_mat_vec(mat: list[list[int]], v: list[int], p: int) -> list[int]:
    return [sum(mat[i][j] * v[j] for j in range(len(v))) % p for i in range(len(mat))]


def fp_mat_mul(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(m)] for i in range(n)
    ]


def _nilpotent_jordan_lengths(mat: list[list[int]], p: int) -> list[int]:
    """Partition of dim into Jordan block lengths for a nilpotent matrix."""
    dim = len(mat)
    if dim == 0:
        return []
    ranks = [dim]
    power = [row[:] for row in mat]
    while True:
        r = fp_rank(power, p)
        ranks.append(r)
        if r == 0:
            break
        power = fp_mat_mul(power, mat, p)
    # blocks of length >= k: ranks[k-1] - ranks[k]
    blocks_ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    out = []
    for k in range(len(blocks_ge), 0, -1):
        exactly = blocks_ge[k - 1] - (blocks_ge[k] if k < len(blocks_ge) else 0)
        out.extend([k] * exactly)
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------


class GammaModule:
    """⊕_i Z/p^{e_i} with an automorphism tau; T acts as tau − I."""

    def __init__(
        self,
        cfg: PrimeConfig,
        orders,
        tau,
        level: int,
        generator=None,
        labels=None,
        check_level: bool = True,
        check_precision: bool = True,
    ):
        self.cfg = cfg
        self.orders = tuple(int(e) for e in orders)
        self.level = int(level)
        r = len(self.orders)
        if any(e <= 0 for e in self.orders):
            raise ValueError("component exponents must be positive")
        if list(self.orders) != sorted(self.orders, reverse=True):
            raise ValueError("orders must be non-increasing")
        if len(tau) != r or any(len(row) != r for row in tau):
            raise ValueError("tau shape mismatch")
        p = cfg.p
        self.tau = tuple(
            tuple(int(tau[i][j]) % p ** self.orders[i] for j in range(r)) for i in range(r)
        )
        for i in range(r):
            for j in range(r):
                need = max(0, self.orders[i] - self.orders[j])
                if self.tau[i][j] % p**need:
                    raise ValueError(f"tau[{i}][{j}] violates the homomorphism condition")
        if r and fp_rank([[self.tau[i][j] % p for j in range(r)] for i in range(r)], p) != r:
            raise ValueError("tau is not invertible mod p")
        if check_precision and self.orders and cfg.N <= 2 * self.orders[0]:
            raise ValueError(
                f"precision p^{cfg.N} too small: need p^N > exp^2 = p^{2*self.orders[0]}"
            )
        if check_level and r:
            if not self._tau_power_is_identity(p ** (self.level - 1)):
                raise ValueError(f"tau^(p^{self.level-1}) is not the identity; wrong level")
        self.generator = tuple(generator) if generator is not None else None
        if self.generator is not None:
            self.generator = self.canon(self.generator)
        self.labels = dict(labels) if labels else {}

    # -- structure constants ----------------------------------------------
    @property
    def p_rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return self.cfg.p ** self.orders[0] if self.orders else 1

    @cached_property
    def size(self) -> int:
        return self.cfg.p ** sum(self.orders)

    @cached_property
    def component_moduli(self) -> tuple[int, ...]:
        return tuple(self.cfg.p**e for e in self.orders)

    def is_zero_module(self) -> bool:
        return not self.orders

    # -- elements ------------------------------------------------------------
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.p_rank

    def canon(self, x) -> tuple[int, ...]:
        return tuple(int(v) % m for v, m in zip(x, self.component_moduli))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.component_moduli))

    def sub(self, x, y) -> tuple[int, ...]:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.component_moduli))

    def scal(self, c: int, x) -> tuple[int, ...]:
        return tuple((c * a) % m for a, m in zip(x, self.component_moduli))

    def tau_apply(self, x) -> tuple[int, ...]:
        r = self.p_rank
        return tuple(
            sum(self.tau[i][j] * x[j] for j in range(r)) % self.component_moduli[i]
            for i in range(r)
        )

    def t_apply(self, x) -> tuple[int, ...]:
        return self.sub(self.tau_apply(x), x)

    def act(self, f, x) -> tuple[int, ...]:
        """f(T)·x by Horner; f an IwasawaPoly or coefficient sequence."""
        coeffs = f.coeffs if isinstance(f, IwasawaPoly) else tuple(f)
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.t_apply(acc), self.scal(c, x))
        return acc

    def order_exp(self, x) -> int:
        """k with ord(x) = p^k."""
        best = 0
        for v, e in zip(x, self.orders):
            if v % self.cfg.p**e:
                best = max(best, e - valuation(v, self.cfg.p, cap=e))
        return best

    def order(self, x) -> int:
        return self.cfg.p ** self.order_exp(x)

    def in_pM(self, x) -> bool:
        x = self.canon(x)
        return all(v % self.cfg.p == 0 for v in x)

    def elements(self):
        """All elements in lexicographic coordinate order.  Only for small modules."""
        import itertools

        yield from itertools.product(*(range(m) for m in self.component_moduli))

    def random_element(self, rng) -> tuple[int, ...]:
        return tuple(rng.randrange(m) for m in self.component_moduli)

    # -- internals ------------------------------------------------------------
    def _tau_mat_mul(self, a, b):
        r = self.p_rank
        return tuple(
            tuple(
                sum(a[i][k] * b[k][j] for k in range(r)) % self.component_moduli[i]
                for j in range(r)
            )
            for i in range(r)
        )

    def _tau_power(self, e: int):
        r = self.p_rank
        result = tuple(
            tuple((1 if i == j else 0) for j in range(r)) for i in range(r)
        )
        base = self.tau
        while e:
            if e & 1:
                result = self._tau_mat_mul(result, base)
            base = self._tau_mat_mul(base, base)
            e >>= 1
        return result

    def _tau_power_is_identity(self, e: int) -> bool:
        pw = self._tau_power(e)
        r = self.p_rank
        return all(
            pw[i][j] % self.component_moduli[i] == (1 if i == j else 0) % self.component_moduli[i]
            for i in range(r)
            for j in range(r)
        )

    def __repr__(self) -> str:
        os = " x ".join(f"C_{self.cfg.p}^{e}" for e in self.orders) or "0"
        return f"GammaModule(p={self.cfg.p}, level={self.level}, {os})"


# ---------------------------------------------------------------------------
# subgroups


@dataclass
class Subgroup:
    """Canonical Z_p-span inside a GammaModule, stored as Howell rows of the
    scaled embedding x_i -> x_i * p^{e_1 - e_i} in (Z/p^{e_1})^r."""

    parent: GammaModule
    scaled_rows: list[list[int]]

    @staticmethod
    def _scale_vec(M: GammaModule, x) -> list[int]:
        e1 = M.orders[0] if M.orders else 0
        return [
            (v * M.cfg.p ** (e1 - e)) % M.cfg.p**e1 for v, e in zip(M.canon(x), M.orders)
        ]

    @classmethod
    def from_vectors(cls, M: GammaModule, vecs) -> "Subgroup":
        if not M.orders:
            return cls(M, [])
        q = M.cfg.p ** M.orders[0]
        rows = [cls._scale_vec(M, v) for v in vecs]
        return cls(M, howell(rows, q, M.cfg.p))

    @cached_property
    def _ech(self) -> AugmentedEchelon | None:
        if not self.parent.orders:
            return None
        q = self.parent.cfg.p ** self.parent.orders[0]
        return AugmentedEchelon(self.scaled_rows, q, self.parent.cfg.p)

    def size(self) -> int:
        if not self.parent.orders:
            return 1
        q = self.parent.cfg.p ** self.parent.orders[0]
        return span_size(self.scaled_rows, q, self.parent.cfg.p)

    def contains(self, x) -> bool:
        if not self.parent.orders:
            return True
        if self._ech is None:
            return all(v == 0 for v in self.parent.canon(x))
        return self._ech.member(self._scale_vec(self.parent, x))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.scaled_rows == other.scaled_rows
        )

    def is_subset_of(self, other: "Subgroup") -> bool:
        return all(other._contains_scaled(r) for r in self.scaled_rows)

    def _contains_scaled(self, scaled_row) -> bool:
        if self._ech is None:
            return all(v == 0 for v in scaled_row)
        return self._ech.member(scaled_row)

    def generator_vectors(self) -> list[tuple[int, ...]]:
        """Unscale the canonical rows back to module coordinates."""
        M = self.parent
        if not M.orders:
            return []
        e1 = M.orders[0]
        out = []
        for row in self.scaled_rows:
            vec = []
            ok = True
            for v, e in zip(row, M.orders):
                s = M.cfg.p ** (e1 - e)
                if v % s:
                    ok = False
                    break
                vec.append((v // s) % M.cfg.p**e)
            if ok:
                out.append(tuple(vec))
            else:
                raise AssertionError("scaled row not in the embedded module lattice")
        return out


def subgroup_span(M: GammaModule, vecs) -> Subgroup:
    return Subgroup.from_vectors(M, vecs)


def lambda_closure(M: GammaModule, vecs) -> Subgroup:
    """Smallest tau-stable subgroup containing vecs."""
    sub = Subgroup.from_vectors(M, vecs)
    while True:
        gens = sub.generator_vectors()
        extra = [M.tau_apply(g) for g in gens]
        bigger = Subgroup.from_vectors(M, gens + extra)
        if bigger.size() == sub.size():
            return sub
        sub = bigger


def subgroup_sum(a: Subgroup, b: Subgroup) -> Subgroup:
    assert a.parent is b.parent
    return Subgroup.from_vectors(
        a.parent, a.generator_vectors() + b.generator_vectors()
    )


def subgroup_intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    """U ∩ V via the kernel of the stacked span matrix."""
    M = a.parent
    if not M.orders:
        return Subgroup(M, [])
    q = M.cfg.p ** M.orders[0]
    ra, rb = a.scaled_rows, b.scaled_rows
    if not ra or not rb:
        return Subgroup(M, [])
    stacked = [list(r) for r in ra] + [[(-v) % q for v in r] for r in rb]
    combos = AugmentedEchelon(stacked, q, M.cfg.p).kernel()
    gens = []
    for c in combos:
        vec = [0] * len(ra[0])
        for lam, row in zip(c[: len(ra)], ra):
            for i, v in enumerate(row):
                vec[i] = (vec[i] + lam * v) % q
        gens.append(vec)
    return Subgroup(M, howell(gens, q, M.cfg.p))


def image_subgroup(M: GammaModule, images) -> Subgroup:
    """Span of a list of vectors already living in M (e.g. a map's images
    of the source's standard basis)."""
    return Subgroup.from_vectors(M, images)


def scaled_submodule_TM(M: GammaModule) -> Subgroup:
    basis = [tuple(1 if j == i else 0 for j in range(M.p_rank)) for i in range(M.p_rank)]
    return Subgroup.from_vectors(M, [M.t_apply(e) for e in basis])


def socle_subgroup(M: GammaModule) -> Subgroup:
    gens = []
    for i, e in enumerate(M.orders):
        v = [0] * M.p_rank
        v[i] = M.cfg.p ** (e - 1)
        gens.append(tuple(v))
    return Subgroup.from_vectors(M, gens)


# ---------------------------------------------------------------------------
# socle / roof with the F_p[T]-structure


@dataclass
class FpTStructure:
    kind: str  # "socle" | "roof"
    dim: int
    matrix: list[list[int]]  # T acting mod p in the structure's own basis
    t_rank: int
    cyclic: bool
    straight: bool | None  # only for socles of cyclic modules with a generator
    generators: list[tuple[int, ...]]  # basis, in parent coordinates
    cyclic_generator: tuple[int, ...] | None
    jordan_lengths: list[int]


def _socle_matrix(M: GammaModule) -> list[list[int]]:
    p, r = M.cfg.p, M.p_rank
    tm = [
        [(M.tau[i][j] - (1 if i == j else 0)) for j in range(r)] for i in range(r)
    ]
    out = [[0] * r for _ in range(r)]
    for j in range(r):
        for i in range(r):
            num = tm[j][i] * p ** M.orders[i]
            den = p ** M.orders[j]
            if num % den:
                raise AssertionError("socle matrix entry not integral; tau invalid")
            out[j][i] = (num // den) % p
    return out


def _roof_matrix(M: GammaModule) -> list[list[int]]:
    p, r = M.cfg.p, M.p_rank
    return [
        [(M.tau[i][j] - (1 if i == j else 0)) % p for j in range(r)] for i in range(r)
    ]


def t_rank_via_kernel(mat: list[list[int]], p: int) -> int:
    dim = len(mat)
    return dim - fp_rank(mat, p)


def t_rank_via_cokernel(mat: list[list[int]], p: int) -> int:
    dim = len(mat)
    transposed = [[mat[j][i] for j in range(dim)] for i in range(dim)]
    return dim - fp_rank(transposed, p)


def _krylov_rank_fp(mat, v, p) -> int:
    vecs = []
    cur = v[:]
    for _ in range(len(mat) + 1):
        vecs.append(cur[:])
        if fp_rank(vecs, p) < len(vecs):
            vecs.pop()
            break
        cur = fp_mat_vec(mat, cur, p)
    return len(vecs)


def _fp_cyclic_generator(mat, p) -> list[int] | None:
    """A vector with full Krylov rank, or None.  mat is nilpotent here, so
    cyclic <=> rank(mat) = dim-1 and any v with mat^{dim-1} v != 0 works."""
    dim = len(mat)
    if dim == 0:
        return None
    if dim == 1:
        return [1]
    if fp_rank(mat, p) != dim - 1:
        return None
    power = [row[:] for row in mat]
    for _ in range(dim - 2):
        power = fp_mat_mul(power, mat, p)
    # power = mat^(dim-1) is nonzero, so some column j is nonzero and the
    # standard vector e_j already has full Krylov length
    for j in range(dim):
        if any(power[i][j] % p for i in range(dim)):
            return [1 if t == j else 0 for t in range(dim)]
    return None


def socle(M: GammaModule) -> FpTStructure:
    p, r = M.cfg.p, M.p_rank
    mat = _socle_matrix(M)
    tr = t_rank_via_kernel(mat, p)
    basis = []
    for i, e in enumerate(M.orders):
        v = [0] * r
        v[i] = p ** (e - 1)
        basis.append(tuple(v))
    cyc_vec = _fp_cyclic_generator(mat, p)
    cyclic = r <= 1 or tr <= 1
    gen = None
    if cyc_vec is not None:
        gen = tuple(
            (cyc_vec[i] * p ** (M.orders[i] - 1)) % p ** M.orders[i] for i in range(r)
        )
    straight = None
    if M.generator is not None and r:
        b = M.generator
        k = M.order_exp(b)
        if k >= 1:
            psi = M.scal(p ** (k - 1), b)
            y = [0] * r
            ok = True
            for i, e in enumerate(M.orders):
                s = p ** (e - 1)
                if psi[i] % s:
                    ok = False
                    break
                y[i] = (psi[i] // s) % p
            straight = ok and _krylov_rank_fp(mat, y, p) == r
    return FpTStructure(
        kind="socle",
        dim=r,
        matrix=mat,
        t_rank=tr,
        cyclic=cyclic,
        straight=straight,
        generators=basis,
        cyclic_generator=gen,
        jordan_lengths=_nilpotent_jordan_lengths(mat, p),
    )


def roof(M: GammaModule) -> FpTStructure:
    p, r = M.cfg.p, M.p_rank
    mat = _roof_matrix(M)
    tr = t_rank_via_kernel(mat, p)
    basis = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    cyc_vec = _fp_cyclic_generator(mat, p)
    gen = tuple(cyc_vec) if cyc_vec is not None else None
    return FpTStructure(
        kind="roof",
        dim=r,
        matrix=mat,
        t_rank=tr,
        cyclic=r <= 1 or tr <= 1,
        straight=None,
        generators=basis,
        cyclic_generator=gen,
        jordan_lengths=_nilpotent_jordan_lengths(mat, p),
    )


def subexponent(M: GammaModule) -> int:
    """min ord over elements outside pM.

    An element outside pM has a unit coordinate in some component, so its
    order is at least that component's, and the last standard basis vector
    attains the minimum: the answer is p^{e_r} with e_r the smallest
    invariant-factor exponent.  subexponent_bruteforce is the reference.
    """
    if M.is_zero_module():
        raise ValueError("subexponent of the zero module is undefined")
    return M.cfg.p ** M.orders[-1]


def subexponent_bruteforce(M: GammaModule) -> int:
    best = None
    for x in M.elements():
        if M.in_pM(x):
            continue
        o = M.order(x)
        if best is None or o < best:
            best = o
    if best is None:
        raise ValueError("subexponent of the zero module is undefined")
    return best


def minimal_generating_set(M: GammaModule) -> list[tuple[int, ...]]:
    """Standard basis vectors: a lift of the evident basis of M/pM."""
    r = M.p_rank
    return [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]


def generates(M: GammaModule, vecs) -> bool:
    return lambda_closure(M, vecs).size() == M.size


def pT_submodule(M: GammaModule) -> Subgroup:
    basis = minimal_generating_set(M)
    gens = [M.scal(M.cfg.p, e) for e in basis] + [M.t_apply(e) for e in basis]
    return Subgroup.from_vectors(M, gens)


def is_cyclic_lambda(M: GammaModule) -> tuple[bool, tuple[int, ...] | None]:
    """Cyclic over Z_p[T] iff dim M/(p,T)M <= 1; generator = lexicographically
    smallest coordinate vector outside (p,T)M."""
    if M.is_zero_module():
        return True, None
    W = pT_submodule(M)
    quot = M.size // W.size()
    if quot == 1:
        # (p,T)M = M forces M = 0 by Nakayama; nonzero M cannot land here
        raise AssertionError("maximal-ideal submodule equals a nonzero module")
    if quot > M.cfg.p:
        return False, None
    for x in M.elements():
        if not W.contains(x):
            return True, tuple(x)
    raise AssertionError("no generator found in a cyclic module")


@dataclass(frozen=True)
class OrderProfile:
    q_list: tuple[int, ...]  # ord(T^i b) for i < p_rank
    jumps: frozenset  # {i : q_i > q_{i+1}} within the window
    ell: int  # largest l with ord(T^{l-1} b) = exp(M)
    full_q_list: tuple[int, ...]  # extended until the orbit dies
    alt_ell: int | None  # p_rank(M / qM) when a reference exponent is given


def order_profile(M: GammaModule, b, ref_q: int | None = None) -> OrderProfile:
    r = M.p_rank
    orbit = []
    cur = M.canon(b)
    cap = sum(M.orders) + 1
    for _ in range(cap):
        o = M.order(cur)
        if o == 1:
            break
        orbit.append(o)
        cur = M.t_apply(cur)
    window = tuple(orbit[:r]) if r else ()
    if any(window[i] < window[i + 1] for i in range(len(window) - 1)):
        raise ValueError("order profile not non-increasing: b does not generate cyclically")
    jumps = frozenset(
        i for i in range(len(window) - 1) if window[i] > window[i + 1]
    )
    expo = M.exponent
    ell = 0
    for o in orbit:
        if o == expo:
            ell += 1
        else:
            break
    alt = None
    if ref_q is not None:
        vq = valuation(ref_q, M.cfg.p, cap=M.cfg.N) if ref_q > 1 else 0
        alt = sum(1 for e in M.orders if e > vq)
    return OrderProfile(window, jumps, ell, tuple(orbit), alt)


# ---------------------------------------------------------------------------
# annihilators and unit expressions


def _krylov_rows(M: GammaModule, b, depth: int) -> list[list[int]]:
    rows = []
    cur = M.canon(b)
    for _ in range(depth + 1):
        rows.append(list(cur))
        cur = M.t_apply(cur)
    return rows


def _monic_min_from_kernel(M: GammaModule, kern_rows: list[list[int]]):
    """Minimal-degree unit-leading relation, monic-normalized, or None."""
    m = M.cfg.modulus
    p = M.cfg.p
    if not kern_rows:
        return None
    width = len(kern_rows[0])
    rev = [list(reversed(r)) for r in kern_rows]
    H = howell(rev, m, p)
    best = None
    for r in H:
        c = next(i for i, e in enumerate(r) if e != 0)
        deg = width - 1 - c
        if valuation(r[c], p, cap=M.cfg.N) == 0 and (best is None or deg < best[0]):
            best = (deg, list(reversed(r))[: deg + 1])
    if best is None:
        return None
    deg, coeffs = best
    inv = inv_mod(coeffs[-1], m)
    return IwasawaPoly(M.cfg, [(c * inv) % m for c in coeffs])


def annihilator_relation_rows(M: GammaModule, b, depth: int) -> list[list[int]]:
    """All degree <= depth relations g with g(T)·b = 0, as coefficient rows.

    Coefficients are canonical mod p^{e_1}; lifting them mod p^N changes
    nothing the module can see, since p^{e_1} already kills every element.
    """
    rows = _krylov_rows(M, b, depth)
    return kernel_mixed(rows, list(M.orders), M.cfg.p)


def minimal_annihilator(M: GammaModule, b) -> IwasawaPoly:
    """Minimal-degree monic annihilator of the generator b, normalized to a
    distinguished polynomial."""
    if M.is_zero_module():
        return IwasawaPoly.one(M.cfg)
    if not generates(M, [b]):
        raise ValueError("b does not generate the module")
    depth = 2 * M.p_rank + M.cfg.p ** (M.level - 1)
    for attempt in (depth, 2 * depth):
        kern = annihilator_relation_rows(M, b, attempt)
        g = _monic_min_from_kernel(M, kern)
        if g is not None:
            break
    else:
        raise ValueError("no monic annihilator below the degree cap")
    if M.cfg.p ** (M.level - 1) <= M.cfg.degree_cap:
        ideal = QuotientIdeal(M.cfg, (omega_poly(M.level, M.cfg),))
        from .poly import reduce_poly

        if not reduce_poly(g, ideal).is_zero():
            prep = weierstrass_prepare(g, ideal)
            if prep.poly.degree() == g.degree():
                g = prep.poly
    if not is_distinguished(g):
        raise AssertionError("minimal annihilator failed distinguished normalization")
    if any(M.act(g, b)):
        raise AssertionError("claimed annihilator does not annihilate")
    return g


def no_smaller_monic_annihilator(M: GammaModule, b, degree: int) -> bool:
    """Exhaustive check: no monic relation of degree < `degree` kills b."""
    for d in range(degree):
        rows = _krylov_rows(M, b, d)
        target = rows[-1]
        lower = rows[:-1]
        if not lower:
            if all(v == 0 for v in target):
                return False
            continue
        sol = solve_mixed(lower, target, list(M.orders), M.cfg.p)
        if sol is not None:
            return False
    return True


def express_as_unit_multiple(M: GammaModule, y, z, depth: int | None = None):
    """A unit polynomial v with z = v(T)·y, when z ≡ y mod pM; else None."""
    y, z = M.canon(y), M.canon(z)
    if M.in_pM(y) or M.in_pM(z):
        raise ValueError("both elements must lie outside pM")
    if not M.in_pM(M.sub(y, z)):
        return None
    if depth is None:
        depth = 2 * M.p_rank + M.cfg.p ** (M.level - 1)
    rows = _krylov_rows(M, y, depth)
    exps = list(M.orders)
    sol = solve_mixed(rows, list(z), exps, M.cfg.p)
    if sol is None:
        return None
    p = M.cfg.p
    if sol[0] % p == 0:
        kern = kernel_mixed(rows, exps, p)
        fix = next((k for k in kern if k[0] % p), None)
        if fix is None:
            return None
        m = M.cfg.modulus
        sol = [(a + b) % m for a, b in zip(sol, fix)]
    v = IwasawaPoly(M.cfg, sol)
    if M.act(v, y) != z:
        raise AssertionError("unit-multiple solve produced a non-solution")
    return v


# ---------------------------------------------------------------------------
# duality


def _adjoint(M: GammaModule, mat) -> list[list[int]]:
    """G^{-1} mat^T G with G = diag(p^{e_1-e_i}); integral by the
    homomorphism condition."""
    p, r = M.cfg.p, M.p_rank
    out = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            num = mat[j][i] * p ** M.orders[i]
            den = p ** M.orders[j]
            if num % den:
                raise AssertionError("adjoint entry not integral")
            out[i][j] = (num // den) % p ** M.orders[i]
    return out


def _tau_inverse(M: GammaModule) -> list[list[int]]:
    r = M.p_rank
    cols = [[M.tau[i][k] for i in range(r)] for k in range(r)]  # row k = column k of tau
    inv_cols = []
    for j in range(r):
        target = [1 if i == j else 0 for i in range(r)]
        x = solve_mixed(cols, target, list(M.orders), M.cfg.p)
        if x is None:
            raise AssertionError("tau not invertible")
        inv_cols.append(x)
    mods = M.component_moduli
    return [[inv_cols[j][i] % mods[i] for j in range(r)] for i in range(r)]


def dual_module(M: GammaModule, check_precision: bool = True) -> GammaModule:
    """Pontryagin dual with the contragredient action twisted so that T acts
    as the involution image of T: tau_dual = (1+p)·adjoint(tau^{-1}).

    The twist raises the annihilation level: omega at the original level maps
    to a scalar of valuation `level`, so the dual is only annihilated once
    p^{level'} reaches the exponent.
    """
    if M.is_zero_module():
        return GammaModule(M.cfg, (), (), M.level)
    tau_inv = _tau_inverse(M)
    adj = _adjoint(M, tau_inv)
    up = 1 + M.cfg.p
    r = M.p_rank
    tau_d = [[(up * adj[i][j]) % M.cfg.p ** M.orders[i] for j in range(r)] for i in range(r)]
    level = max(M.level, M.orders[0])
    return GammaModule(
        M.cfg,
        M.orders,
        tau_d,
        level,
        labels={"dual_of": M.labels.get("name", "?")},
        check_precision=check_precision,
    )


def pairing(M: GammaModule, x, rho) -> int:
    """Canonical pairing M x M^dual -> Z/exp(M)."""
    e1 = M.orders[0] if M.orders else 0
    q = M.cfg.p**e1
    x = M.canon(x)
    total = 0
    for xi, ri, e in zip(x, rho, M.orders):
        total += xi * ri * M.cfg.p ** (e1 - e)
    return total % q


# ---------------------------------------------------------------------------
# quotients and presentations


@dataclass
class QuotientMap:
    module: GammaModule
    _V: list[list[int]]
    _Vinv: list[list[int]]
    _keep: int
    _src: GammaModule

    def project(self, x) -> tuple[int, ...]:
        x = self._src.canon(x)
        r = len(self._V)
        img = [
            sum(x[i] * self._V[i][j] for i in range(r)) for j in range(self._keep)
        ]
        return self.module.canon(img)

    def lift(self, y) -> tuple[int, ...]:
        r = len(self._V)
        out = [0] * r
        for i in range(self._keep):
            for j in range(r):
                out[j] += y[i] * self._Vinv[i][j]
        return self._src.canon(out)


def quotient_module(M: GammaModule, sub: Subgroup, check_stable: bool = True) -> QuotientMap:
    """M / sub with the inherited action; sub must be tau-stable."""
    r = M.p_rank
    p = M.cfg.p
    if check_stable:
        for g in sub.generator_vectors():
            if not sub.contains(M.tau_apply(g)):
                raise ValueError("subgroup is not tau-stable")
    rel = [list(M.canon(g)) for g in sub.generator_vectors()]
    for i, e in enumerate(M.orders):
        row = [0] * r
        row[i] = p**e
        rel.append(row)
    m = p ** M.orders[0]
    exps, V, Vinv = smith_quotient(rel, r, m, p)
    keep = sum(1 for e in exps if e > 0)
    orders = exps[:keep]
    # transported action: tau_Q = project . tau . lift
    cols = []
    for j in range(keep):
        unit = [1 if i == j else 0 for i in range(keep)]
        lifted = [0] * r
        for i in range(keep):
            for t in range(r):
                lifted[t] += unit[i] * Vinv[i][t]
        lifted = M.canon(lifted)
        timg = M.tau_apply(lifted)
        col = [sum(timg[i] * V[i][jj] for i in range(r)) for jj in range(keep)]
        cols.append(col)
    tau_q = [[cols[j][i] % p ** orders[i] for j in range(keep)] for i in range(keep)]
    Q = GammaModule(
        M.cfg, orders, tau_q, M.level, check_precision=False
    )
    return QuotientMap(Q, V, Vinv, keep, M)


@dataclass
class Presentation:
    """Z^width / (relations + p^N) carrying a transported ambient action."""

    module: GammaModule
    V: list[list[int]]
    Vinv: list[list[int]]
    keep: int
    width: int

    def coords(self, ambient_vec) -> tuple[int, ...]:
        img = [
            sum(ambient_vec[i] * self.V[i][j] for i in range(self.width))
            for j in range(self.keep)
        ]
        return self.module.canon(img)

    def lift(self, coords) -> list[int]:
        out = [0] * self.width
        for i in range(self.keep):
            for j in range(self.width):
                out[j] += coords[i] * self.Vinv[i][j]
        return out


def presentation_from_relations(
    cfg: PrimeConfig,
    level: int,
    width: int,
    rel_rows: list[list[int]],
    tau_ambient,
    check_precision: bool = True,
    labels=None,
) -> Presentation:
    """Quotient of Z^width by (rel_rows, p^N), with tau transported from the
    ambient action matrix (column convention)."""
    m = cfg.modulus
    exps, V, Vinv = smith_quotient([list(r) for r in rel_rows], width, m, cfg.p)
    keep = sum(1 for e in exps if e > 0)
    orders = exps[:keep]
    cols = []
    for j in range(keep):
        lifted = [Vinv[j][t] for t in range(width)]
        timg = [
            sum(tau_ambient[i][t] * lifted[t] for t in range(width)) % m
            for i in range(width)
        ]
        col = [sum(timg[i] * V[i][jj] for i in range(width)) for jj in range(keep)]
        cols.append(col)
    tau_q = [
        [cols[j][i] % cfg.p ** orders[i] for j in range(keep)] for i in range(keep)
    ]
    Q = GammaModule(
        cfg, orders, tau_q, level, check_precision=check_precision, labels=labels
    )
    return Presentation(Q, V, Vinv, keep, width)


# ---------------------------------------------------------------------------
# JSON


def module_to_json(M: GammaModule) -> dict:
    return {
        "p": M.cfg.p,
        "precision": M.cfg.N,
        "level": M.level,
        "orders": list(M.orders),
        "tau": [list(row) for row in M.tau],
        "generator": list(M.generator) if M.generator is not None else None,
        "labels": dict(M.labels),
    }


def module_from_json(data: dict, check_precision: bool = True) -> GammaModule:
    cfg = PrimeConfig(int(data["p"]), int(data["precision"]))
    return GammaModule(
        cfg,
        data["orders"],
        data["tau"],
        int(data["level"]),
        generator=data.get("generator"),
        labels=data.get("labels"),
        check_precision=check_precision,
    )
