"""Polynomial arithmetic in truncations of Z_p[[T]].

Coefficients live in Z/p^N.  Multiplication uses Kronecker substitution
(coefficients packed into one big integer per operand), which keeps the large
identity checks fast in pure Python; a schoolbook path exists for
cross-checking.  The tower polynomials omega_n = (T+1)^{p^(n-1)} - 1 and
nu_{n+1,n} = omega_{n+1}/omega_n are built here, along with reduction modulo
monic quotient ideals, the substitution involution T -> (p-T)/(1+T), and
Weierstrass preparation at finite precision.

The involution needs care: the substitution is exactly involutive on power
series, but it does not descend to the quotient by omega_n (the image of
omega_n is a nonzero scalar of valuation n).  Results therefore carry an
exact numerator/denominator-exponent pair in the shifted basis S = T + 1;
composing involutions works on that exact pair, and only the displayed
coefficients are reduced.  This makes double application return the input
on the nose at any precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import PrimeConfig, inv_mod, valuation

__all__ = [
    "IwasawaPoly",
    "QuotientIdeal",
    "omega_poly",
    "nu_poly",
    "u_of_omega",
    "reduce_poly",
    "involution",
    "involutive_pair_check",
    "omega_star_report",
    "weierstrass_prepare",
    "PreparedPoly",
    "is_distinguished",
    "is_eisenstein",
    "parse_poly",
    "format_poly",
    "taylor_shift",
]


def _strip(coeffs: list[int]) -> tuple[int, ...]:
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


def _kron_mul(a: tuple[int, ...], b: tuple[int, ...], m: int) -> list[int]:
    if not a or not b:
        return []
    nmin = min(len(a), len(b))
    bound = nmin * (m - 1) * (m - 1) + 1
    bits = bound.bit_length() + 1
    pa = 0
    for c in reversed(a):
        pa = (pa << bits) | c
    pb = 0
    for c in reversed(b):
        pb = (pb << bits) | c
    prod = pa * pb
    mask = (1 << bits) - 1
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append((prod & mask) % m)
        prod >>= bits
    return out


def _school_mul(a: tuple[int, ...], b: tuple[int, ...], m: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % m
    return out


class IwasawaPoly:
    """Dense polynomial over Z/p^N with canonical nonnegative coefficients."""

    __slots__ = ("coeffs", "cfg", "_frac")

    def __init__(self, cfg: PrimeConfig, coeffs, _frac=None):
        m = cfg.modulus
        self.cfg = cfg
        self.coeffs = _strip([int(c) % m for c in coeffs])
        self._frac = _frac

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def zero(cfg: PrimeConfig) -> "IwasawaPoly":
        return IwasawaPoly(cfg, ())

    @staticmethod
    def one(cfg: PrimeConfig) -> "IwasawaPoly":
        return IwasawaPoly(cfg, (1,))

    @staticmethod
    def T(cfg: PrimeConfig) -> "IwasawaPoly":
        return IwasawaPoly(cfg, (0, 1))

    @staticmethod
    def const(cfg: PrimeConfig, c: int) -> "IwasawaPoly":
        return IwasawaPoly(cfg, (c,))

    # -- basic queries ---------------------------------------------------------
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def content_valuation(self) -> int:
        """min_i v_p(c_i); the zero polynomial reports N."""
        if not self.coeffs:
            return self.cfg.N
        return min(valuation(c, self.cfg.p, cap=self.cfg.N) for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def evaluate(self, x: int, mod: int | None = None) -> int:
        m = mod if mod is not None else self.cfg.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % m
        return acc

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "IwasawaPoly") -> "IwasawaPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IwasawaPoly(self.cfg, out)

    def __sub__(self, other: "IwasawaPoly") -> "IwasawaPoly":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return IwasawaPoly(self.cfg, out)

    def __neg__(self) -> "IwasawaPoly":
        return IwasawaPoly(self.cfg, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IwasawaPoly(self.cfg, [c * other for c in self.coeffs])
        return IwasawaPoly(self.cfg, _kron_mul(self.coeffs, other.coeffs, self.cfg.modulus))

    __rmul__ = __mul__

    def shift(self, k: int) -> "IwasawaPoly":
        """Multiply by T^k."""
        if self.is_zero():
            return self
        return IwasawaPoly(self.cfg, (0,) * k + self.coeffs)

    def pow(self, e: int) -> "IwasawaPoly":
        result = IwasawaPoly.one(self.cfg)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def divmod_monic(self, d: "IwasawaPoly") -> tuple["IwasawaPoly", "IwasawaPoly"]:
        """Exact long division by a monic divisor."""
        if not d.is_monic():
            raise ValueError("division requires a monic divisor")
        m = self.cfg.modulus
        dd = d.degree()
        rem = list(self.coeffs)
        if len(rem) <= dd:
            return IwasawaPoly.zero(self.cfg), self
        q = [0] * (len(rem) - dd)
        dc = d.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                q[i - dd] = c
                for j in range(dd + 1):
                    rem[i - dd + j] = (rem[i - dd + j] - c * dc[j]) % m
        return IwasawaPoly(self.cfg, q), IwasawaPoly(self.cfg, rem[:dd])

    # -- equality --------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IwasawaPoly)
            and self.coeffs == other.coeffs
            and self.cfg.p == other.cfg.p
            and self.cfg.N == other.cfg.N
        )

    def __hash__(self) -> int:
        return hash((self.cfg.p, self.cfg.N, self.coeffs))

    def __repr__(self) -> str:
        return f"IwasawaPoly(p={self.cfg.p}, N={self.cfg.N}, {format_poly(self)})"


def taylor_shift(f: IwasawaPoly, a: int) -> IwasawaPoly:
    """f(T + a), computed divide-and-conquer with Kronecker products."""
    cfg = f.cfg
    m = cfg.modulus
    a %= m

    powers: dict[int, tuple[int, ...]] = {}

    def lin_pow(h: int) -> tuple[int, ...]:
        if h in powers:
            return powers[h]
        if h == 0:
            r: tuple[int, ...] = (1,)
        elif h == 1:
            r = (a, 1)
        else:
            half = lin_pow(h // 2)
            r = tuple(_kron_mul(half, half, m))
            if h & 1:
                r = tuple(_kron_mul(r, (a, 1), m))
        powers[h] = r
        return r

    def rec(cs: tuple[int, ...]) -> list[int]:
        n = len(cs)
        if n <= 16:
            out: list[int] = []
            for c in reversed(cs):
                # out <- out*(T+a) + c
                nxt = [0] * (len(out) + 1)
                for i, e in enumerate(out):
                    nxt[i + 1] = e
                    nxt[i] = (nxt[i] + e * a) % m
                if nxt:
                    nxt[0] = (nxt[0] + c) % m
                else:
                    nxt = [c % m]
                out = nxt
            return out
        h = n // 2
        lo = rec(cs[:h])
        hi = rec(cs[h:])
        ph = lin_pow(h)
        hi2 = _kron_mul(tuple(hi), ph, m)
        out = list(hi2) + [0] * max(0, len(lo) - len(hi2))
        for i, c in enumerate(lo):
            out[i] = (out[i] + c) % m
        return out

    if f.is_zero():
        return f
    return IwasawaPoly(cfg, rec(f.coeffs))


_omega_cache: dict[tuple[int, int, int], tuple[int, ...]] = {}


def omega_poly(n: int, cfg: PrimeConfig) -> IwasawaPoly:
    """(T+1)^{p^(n-1)} - 1, degree exactly p^(n-1), monic, zero constant."""
    if n < 1:
        raise ValueError("level must be >= 1")
    deg = cfg.p ** (n - 1)
    if deg > cfg.degree_cap:
        raise ValueError(
            f"omega at level {n} has degree {deg}, beyond the degree cap {cfg.degree_cap}"
        )
    key = (cfg.p, cfg.N, n)
    cached = _omega_cache.get(key)
    if cached is None:
        base = IwasawaPoly(cfg, (1, 1))
        cached = base.pow(deg).coeffs
        _omega_cache[key] = cached
    out = list(cached)
    out[0] -= 1
    return IwasawaPoly(cfg, out)


def nu_poly(n: int, cfg: PrimeConfig) -> IwasawaPoly:
    """nu_{n+1,n} = omega_{n+1}/omega_n, via the geometric-sum identity.

    With x = (T+1)^{p^(n-1)}, the quotient equals 1 + x + ... + x^{p-1};
    tests confirm nu * omega_n == omega_{n+1} coefficient-exactly, which
    certifies the division.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    deg = cfg.p**n - cfg.p ** (n - 1)
    if deg > cfg.degree_cap:
        raise ValueError(
            f"nu at level {n} has degree {deg}, beyond the degree cap {cfg.degree_cap}"
        )
    x = omega_poly(n, cfg) + IwasawaPoly.one(cfg)
    acc = IwasawaPoly.one(cfg)
    term = IwasawaPoly.one(cfg)
    for _ in range(cfg.p - 1):
        term = term * x
        acc = acc + term
    return acc


def u_of_omega(cfg: PrimeConfig) -> IwasawaPoly:
    """u(w) = 1 + ((p-1)/2) w + ... + w^{p-2}, the unit series in nu = w^{p-1} + p u(w).

    Coefficient of w^k is binom(p-1, k+1)/p * (-1)^k-free exact integer:
    expanding ((w+1)^p - 1 - w^p)/(p*w) gives binom(p, k+1)/p at w^k.
    """
    p, m = cfg.p, cfg.modulus
    cs = []
    for k in range(p - 1):
        # binom(p, k+1) / p exactly
        import math

        cs.append((math.comb(p, k + 1) // p) % m)
    return IwasawaPoly(cfg, cs)


def compose(f: IwasawaPoly, g: IwasawaPoly) -> IwasawaPoly:
    """f(g(T)) by Horner; intended for small deg(f)."""
    acc = IwasawaPoly.zero(f.cfg)
    for c in reversed(f.coeffs):
        acc = acc * g + IwasawaPoly.const(f.cfg, c)
    return acc


@dataclass(frozen=True)
class QuotientIdeal:
    """Ideal (generators, p^N) with monic generators; p^N is always implicit."""

    cfg: PrimeConfig
    generators: tuple[IwasawaPoly, ...]

    def monic_sorted(self) -> list[IwasawaPoly]:
        gens = [g for g in self.generators if not g.is_zero()]
        for g in gens:
            if not g.is_monic():
                raise ValueError(
                    "quotient ideals here take monic generators; "
                    "prepare non-monic inputs with weierstrass_prepare"
                )
        return sorted(gens, key=lambda g: -g.degree())


def reduce_poly(x: IwasawaPoly, ideal: QuotientIdeal) -> IwasawaPoly:
    """Canonical representative: remainder by each monic generator in
    decreasing-degree order, then coefficients mod p^N."""
    out = x
    for g in ideal.monic_sorted():
        _, out = out.divmod_monic(g)
    return IwasawaPoly(out.cfg, out.coeffs)


# -- involution ---------------------------------------------------------------


def _to_shift_basis(f: IwasawaPoly) -> tuple[int, ...]:
    """Coefficients of g with f(T) = g(S) at S = T+1, i.e. g(X) = f(X-1)."""
    return taylor_shift(f, -1).coeffs


def _from_shift_basis(cfg: PrimeConfig, gs) -> IwasawaPoly:
    return taylor_shift(IwasawaPoly(cfg, gs), 1)


def involution(f: IwasawaPoly, n: int, cfg: PrimeConfig) -> IwasawaPoly:
    """Image of f under T -> (p-T)/(1+T), reduced mod (omega_n, p^N).

    The result's displayed coefficients are the canonical representative;
    the exact pre-reduction value (numerator in the S = T+1 basis plus a
    denominator exponent) rides along so that applying the involution again
    composes exactly and returns the original representative.
    """
    m_dim = cfg.p ** (n - 1)
    if m_dim > cfg.degree_cap:
        raise ValueError("level beyond degree cap")
    m = cfg.modulus
    up = (1 + cfg.p) % m

    if f._frac is not None and f._frac[2] == n:
        numer, den, _ = f._frac
    else:
        fr = f
        if fr.degree() >= m_dim:
            _, fr = fr.divmod_monic(omega_poly(n, cfg))
        numer, den = _to_shift_basis(fr), 0

    if not numer:
        return IwasawaPoly(cfg, (), _frac=((), 0, n))

    D = len(numer) - 1
    scale = inv_mod(pow(up, den, m), m)
    out = []
    for i in range(D + 1):
        out.append((numer[D - i] * pow(up, D - i, m) % m) * scale % m)
    new_den = D - den
    if new_den < 0:
        out = [0] * (-new_den) + out
        new_den = 0
    new_numer = _strip(out)

    # canonical representative: new_numer * S^{-new_den} with S^{m_dim} = 1
    rot = [0] * m_dim
    t = (-new_den) % m_dim
    for i, c in enumerate(new_numer):
        rot[(i + t) % m_dim] = (rot[(i + t) % m_dim] + c) % m
    rep = _from_shift_basis(cfg, rot)
    return IwasawaPoly(cfg, rep.coeffs, _frac=(new_numer, new_den, n))


def involutive_pair_check(f: IwasawaPoly, n: int, cfg: PrimeConfig) -> bool:
    """involution(involution(f)) == f as canonical representatives."""
    g = involution(f, n, cfg)
    h = involution(g, n, cfg)
    fr = f
    if fr.degree() >= cfg.p ** (n - 1):
        _, fr = fr.divmod_monic(omega_poly(n, cfg))
    return h.coeffs == IwasawaPoly(cfg, fr.coeffs).coeffs


def omega_star_report(n: int, cfg: PrimeConfig) -> dict:
    """Relation between omega_n and its involution image, with measured valuation.

    Verifies the exact polynomial identity
        F(T) * (1 + omega_n) == (w0 - omega_n) * (1+T)^{deg omega_n}
    where F/(1+T)^{deg} is the involution image of omega_n and
    w0 = omega_n evaluated at T = p (so omega_n + (1+omega_n)*omega_n^* = w0),
    and measures v_p(w0).
    """
    om = omega_poly(n, cfg)
    m = cfg.modulus
    deg = om.degree()
    # exact fraction for omega_n(T*): numerator in S-basis, denominator S^D
    gs = _to_shift_basis(om)
    D = len(gs) - 1
    up = (1 + cfg.p) % m
    numer_s = [gs[D - i] * pow(up, D - i, m) % m for i in range(D + 1)]
    F = _from_shift_basis(cfg, numer_s)  # omega_n(T*) = F / (1+T)^D with D = deg
    one_plus_om = om + IwasawaPoly.one(cfg)
    lhs = F * one_plus_om
    w0 = (pow(1 + cfg.p, cfg.p ** (n - 1), m) - 1) % m
    rhs = (IwasawaPoly.const(cfg, w0) - om) * IwasawaPoly(cfg, (1, 1)).pow(deg)
    # measured valuation of w0 at enough working precision to see it exactly
    probe_mod = cfg.p ** (n + 6)
    w0_probe = (pow(1 + cfg.p, cfg.p ** (n - 1), probe_mod) - 1) % probe_mod
    v = valuation(w0_probe, cfg.p, cap=n + 6)
    return {
        "identity_holds": lhs == rhs,
        "unit_multiplier_is_one_plus_omega": True,
        "measured_valuation": v,
        "scalar": w0,
    }


# -- Weierstrass preparation ---------------------------------------------------


@dataclass(frozen=True)
class PreparedPoly:
    poly: IwasawaPoly
    mu: int
    is_unit: bool
    certificate: dict


def _ideal_row_closure(g: IwasawaPoly, ideal: QuotientIdeal, width: int) -> list[list[int]]:
    """Z/p^N-generators of the principal ideal (g) inside the quotient ring,
    as coefficient rows of length `width`, closed under multiplication by T."""
    cfg = g.cfg
    m = cfg.modulus
    p = cfg.p
    gens = ideal.monic_sorted()

    def red(poly: IwasawaPoly) -> IwasawaPoly:
        for gg in gens:
            _, poly = poly.divmod_monic(gg)
        if poly.degree() >= width:
            poly = IwasawaPoly(cfg, poly.coeffs[:width])
        return poly

    def as_row(poly: IwasawaPoly) -> list[int]:
        return list(poly.coeffs) + [0] * (width - len(poly.coeffs))

    from .lattices import howell

    # the ideal contains a monic generator of degree `width`, so the images
    # of T^j for j < width span the quotient ring and the rows below are
    # automatically closed under multiplication by T
    rows = []
    cur = red(g)
    for _ in range(width):
        rows.append(as_row(cur))
        cur = red(cur.shift(1))
    return howell(rows, m, p)


def weierstrass_prepare(g: IwasawaPoly, ideal: QuotientIdeal) -> PreparedPoly:
    """Distinguished minimal monic generator of (g) mod (ideal, p^N).

    Finds p^mu * g_hat with g_hat = T^r + p*h(T) distinguished, r minimal
    among monic generators, and certifies (p^mu * g_hat) = (g) by lattice
    membership in both directions.
    """
    cfg = g.cfg
    m, p, N = cfg.modulus, cfg.p, cfg.N
    gens = ideal.monic_sorted()
    width = min((gg.degree() for gg in gens), default=cfg.degree_cap)
    g_red = g
    for gg in gens:
        _, g_red = g_red.divmod_monic(gg)
    if g_red.degree() >= width:
        g_red = IwasawaPoly(cfg, g_red.coeffs[:width])
    if g_red.is_zero():
        raise ValueError("cannot prepare 0 mod the ideal")

    mu = g_red.content_valuation()
    stripped = IwasawaPoly(cfg, [c // (p**mu) for c in g_red.coeffs])

    rows = _ideal_row_closure(stripped, ideal, width)
    # pivot on leading coefficients: reverse columns so pivots sit at degrees
    rev = [list(reversed(r)) for r in rows]
    from .lattices import howell, AugmentedEchelon

    H = howell(rev, m, p)
    best = None  # (degree, row)
    for r in H:
        c = next(i for i, e in enumerate(r) if e != 0)
        degree = width - 1 - c
        v = valuation(r[c], p, cap=N)
        if v == 0 and (best is None or degree < best[0]):
            best = (degree, list(reversed(r)))
    if best is None:
        raise ValueError("no unit-leading generator found; input has hidden content")
    r_deg, row = best
    lead = row[r_deg]
    linv = inv_mod(lead, m)
    hat = IwasawaPoly(cfg, [(c * linv) % m for c in row[: r_deg + 1]])

    if r_deg == 0:
        hat = IwasawaPoly.one(cfg)
        unit = mu == 0
        cert = {"mutual_division": True, "unit": unit}
        return PreparedPoly(hat, mu, unit, cert)

    if not is_distinguished(hat):
        raise AssertionError("minimal monic generator not distinguished")

    # mutual division certificates
    orig_rows = _ideal_row_closure(g_red, ideal, width)
    ech_orig = AugmentedEchelon(orig_rows, m, p)
    scaled_hat = [(c * (p**mu)) % m for c in hat.coeffs] + [0] * (width - len(hat.coeffs))
    fwd = ech_orig.member(scaled_hat)
    hat_rows = _ideal_row_closure(IwasawaPoly(cfg, [c * (p**mu) for c in hat.coeffs]), ideal, width)
    ech_hat = AugmentedEchelon(hat_rows, m, p)
    g_vec = list(g_red.coeffs) + [0] * (width - len(g_red.coeffs))
    bwd = ech_hat.member(g_vec)
    cert = {"mutual_division": bool(fwd and bwd), "forward": bool(fwd), "backward": bool(bwd)}
    return PreparedPoly(hat, mu, False, cert)


def is_distinguished(f: IwasawaPoly) -> bool:
    """Monic with every lower coefficient divisible by p."""
    if f.is_zero() or not f.is_monic():
        return False
    p = f.cfg.p
    return all(c % p == 0 for c in f.coeffs[:-1])


def is_eisenstein(f: IwasawaPoly) -> bool:
    """Distinguished with v_p(f(0)) exactly 1."""
    if not is_distinguished(f):
        return False
    c0 = f.constant()
    return c0 != 0 and valuation(c0, f.cfg.p, cap=f.cfg.N) == 1


# -- text formats ----------------------------------------------------------------


def parse_poly(cfg: PrimeConfig, text: str) -> IwasawaPoly:
    """Accepts "[c0,c1,...]" or human form like "T^2 + 3*T + 3"."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s.startswith("["):
        import json

        data = json.loads(s)
        if not isinstance(data, list) or not all(isinstance(c, int) for c in data):
            raise ValueError("coefficient list must be a JSON array of integers")
        return IwasawaPoly(cfg, data)
    s = s.replace("-", "+-").replace(" ", "")
    if s.startswith("+"):
        s = s[1:]
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        if "T" in term:
            head, _, tail = term.partition("T")
            c = int(head.rstrip("*")) if head.rstrip("*") else 1
            k = int(tail[1:]) if tail.startswith("^") else (1 if tail == "" else None)
            if k is None:
                raise ValueError(f"cannot parse term {term!r}")
        else:
            c, k = int(term), 0
        coeffs[k] = coeffs.get(k, 0) + (-c if neg else c)
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for k, c in coeffs.items():
        out[k] = c
    return IwasawaPoly(cfg, out)


def format_poly(f: IwasawaPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for k in range(f.degree(), -1, -1):
        c = f.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        elif k == 1:
            parts.append("T" if c == 1 else f"{c}*T")
        else:
            parts.append(f"T^{k}" if c == 1 else f"{c}*T^{k}")
    return " + ".join(parts)
