"""Exact linear algebra over Z/p^N and over mixed prime-power component moduli.

Z/p^N is a chain ring, so a Howell-style strong echelon form gives canonical
row spans, membership, solving, and kernels without any rational arithmetic.
Mixed component moduli (module coordinates mod p^{e_1}, ..., p^{e_r}) are
handled by scaling each column up to the largest modulus, which converts every
question into a uniform-modulus one.

Quotient structure (invariant factors plus a basis change) comes from an
integer Smith normal form on small matrices; column transforms are tracked
exactly over Z so coordinate maps are unimodular.
"""

from __future__ import annotations

from .arith import valuation, inv_mod

__all__ = [
    "howell",
    "span_size",
    "AugmentedEchelon",
    "scale_rows",
    "solve_mixed",
    "kernel_mixed",
    "member_mixed",
    "subgroup_rows",
    "smith_quotient",
    "mat_mul",
    "mat_vec",
    "identity_matrix",
]


def _nonzero(row: list[int]) -> bool:
    return any(e != 0 for e in row)


def howell(rows: list[list[int]], m: int, p: int) -> list[list[int]]:
    """Canonical strong echelon form of the mod-m row span (m a power of p).

    Returns rows with strictly increasing pivot columns; each pivot entry is
    p^v for some v, entries in other result rows above a pivot are reduced
    mod that pivot.  Two generating sets span the same subgroup of (Z/m)^w
    iff their howell forms are identical.
    """
    if not rows:
        return []
    width = len(rows[0])
    work = [[e % m for e in r] for r in rows]
    work = [r for r in work if _nonzero(r)]
    result: list[list[int]] = []
    N = valuation(m, p)
    for col in range(width):
        best = None
        best_v = None
        for idx, r in enumerate(work):
            e = r[col]
            if e == 0:
                continue
            v = valuation(e, p, cap=N)
            if best_v is None or v < best_v:
                best, best_v = idx, v
        if best is None:
            continue
        piv = work.pop(best)
        u = piv[col] // (p**best_v)
        uinv = inv_mod(u, m)
        piv = [(e * uinv) % m for e in piv]
        pv = p**best_v
        nxt = []
        for r in work:
            e = r[col]
            if e != 0:
                q = e // pv
                r = [(a - q * b) % m for a, b in zip(r, piv)]
            if _nonzero(r):
                nxt.append(r)
        work = nxt
        closure = [(e * (m // pv)) % m for e in piv]
        if _nonzero(closure):
            work.append(closure)
        result.append(piv)
    # canonical reduction of entries above later pivots
    pivots = []
    for r in result:
        c = next(i for i, e in enumerate(r) if e != 0)
        pivots.append((c, valuation(r[c], p, cap=N)))
    for i in range(len(result)):
        for j in range(len(result)):
            if j == i:
                continue
            cj, vj = pivots[j]
            ci, _ = pivots[i]
            if cj <= ci:
                continue
            e = result[i][cj]
            q = e // (p**vj)
            if q:
                result[i] = [(a - q * b) % m for a, b in zip(result[i], result[j])]
    return result


def span_size(howell_rows: list[list[int]], m: int, p: int) -> int:
    """Order of the subgroup of (Z/m)^w spanned by rows in howell form."""
    N = valuation(m, p)
    size = 1
    for r in howell_rows:
        c = next(i for i, e in enumerate(r) if e != 0)
        size *= m // (p ** valuation(r[c], p, cap=N))
    return size


class AugmentedEchelon:
    """Echelon data for solving c * rows = target (mod m) and for kernels.

    Rows are eliminated with their coefficient combination carried along, so
    membership answers come with an explicit expression and the left kernel
    (all c with sum_i c_i rows_i = 0 mod m) falls out of the same sweep.
    """

    def __init__(self, rows: list[list[int]], m: int, p: int):
        self.m = m
        self.p = p
        self.k = len(rows)
        self.width = len(rows[0]) if rows else 0
        N = valuation(m, p)
        aug = []
        for i, r in enumerate(rows):
            comb = [0] * self.k
            comb[i] = 1
            aug.append(([e % m for e in r], comb))
        pivrows: list[tuple[int, int, list[int], list[int]]] = []
        kernel_raw: list[list[int]] = []
        work = aug
        for col in range(self.width):
            best = None
            best_v = None
            for idx, (r, _) in enumerate(work):
                e = r[col]
                if e == 0:
                    continue
                v = valuation(e, p, cap=N)
                if best_v is None or v < best_v:
                    best, best_v = idx, v
            if best is None:
                continue
            r, comb = work.pop(best)
            u = r[col] // (p**best_v)
            uinv = inv_mod(u, m)
            r = [(e * uinv) % m for e in r]
            comb = [(e * uinv) % m for e in comb]
            pv = p**best_v
            nxt = []
            for rr, cc in work:
                e = rr[col]
                if e != 0:
                    q = e // pv
                    rr = [(a - q * b) % m for a, b in zip(rr, r)]
                    cc = [(a - q * b) % m for a, b in zip(cc, comb)]
                if _nonzero(rr):
                    nxt.append((rr, cc))
                elif _nonzero(cc):
                    kernel_raw.append(cc)
            work = nxt
            scale = m // pv
            clo_r = [(e * scale) % m for e in r]
            clo_c = [(e * scale) % m for e in comb]
            if _nonzero(clo_r):
                work.append((clo_r, clo_c))
            elif _nonzero(clo_c):
                kernel_raw.append(clo_c)
            pivrows.append((col, best_v, r, comb))
        for rr, cc in work:
            if not _nonzero(rr) and _nonzero(cc):
                kernel_raw.append(cc)
        self._pivots = pivrows
        self._kernel_raw = kernel_raw

    def solve(self, target: list[int]) -> list[int] | None:
        """Coefficients c with sum c_i rows_i = target (mod m), or None."""
        m, p = self.m, self.p
        cur = [e % m for e in target]
        comb = [0] * self.k
        for col, v, r, c in self._pivots:
            e = cur[col]
            if e == 0:
                continue
            if e % (p**v) != 0:
                return None
            q = e // (p**v)
            cur = [(a - q * b) % m for a, b in zip(cur, r)]
            comb = [(a + q * b) % m for a, b in zip(comb, c)]
        if _nonzero(cur):
            return None
        return comb

    def member(self, target: list[int]) -> bool:
        return self.solve(target) is not None

    def kernel(self) -> list[list[int]]:
        """Canonical generators of the left kernel mod m."""
        if self.k == 0:
            return []
        return howell(self._kernel_raw, self.m, self.p)


def scale_rows(rows: list[list[int]], col_orders: list[int], p: int) -> tuple[list[list[int]], int]:
    """Embed mixed-moduli coordinates into uniform modulus p^{max e}.

    col_orders holds exponents e_j (component j lives mod p^{e_j}); column j
    is multiplied by p^{emax - e_j}.  Returns scaled rows and p^{emax}.
    """
    emax = max(col_orders) if col_orders else 1
    m = p**emax
    scales = [p ** (emax - e) for e in col_orders]
    return [[(e * s) % m for e, s in zip(r, scales)] for r in rows], m


def solve_mixed(rows: list[list[int]], target: list[int], col_orders: list[int], p: int) -> list[int] | None:
    scaled, m = scale_rows(rows + [target], col_orders, p)
    ech = AugmentedEchelon(scaled[:-1], m, p)
    return ech.solve(scaled[-1])


def kernel_mixed(rows: list[list[int]], col_orders: list[int], p: int) -> list[list[int]]:
    scaled, m = scale_rows(rows, col_orders, p)
    return AugmentedEchelon(scaled, m, p).kernel()


def member_mixed(x: list[int], gen_rows: list[list[int]], col_orders: list[int], p: int) -> bool:
    return solve_mixed(gen_rows, x, col_orders, p) is not None


def subgroup_rows(gen_rows: list[list[int]], col_orders: list[int], p: int) -> list[list[int]]:
    """Canonical (scaled-coordinate) representation of the generated subgroup."""
    scaled, m = scale_rows(gen_rows, col_orders, p)
    return howell(scaled, m, p)


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: list[list[int]], B: list[list[int]], mod: int | None = None) -> list[list[int]]:
    n, k = len(A), len(B)
    w = len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(w):
            s = 0
            for t in range(k):
                s += Ai[t] * B[t][j]
            row.append(s % mod if mod else s)
        out.append(row)
    return out


def mat_vec(A: list[list[int]], x: list[int], mod: int | None = None) -> list[int]:
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, x):
            s += a * b
        out.append(s % mod if mod else s)
    return out


def _swap_cols(M, i, j):
    for r in M:
        r[i], r[j] = r[j], r[i]


def _addmul_col(M, dst, src, q):
    if q == 0:
        return
    for r in M:
        r[dst] += q * r[src]


def smith_quotient(rel_rows: list[list[int]], width: int, m: int, p: int):
    """Structure of (Z/m)^width modulo the span of rel_rows.

    Returns (orders, V, Vinv): orders is the full length-`width` list of
    component exponents e_j (descending, possibly 0 for trivial components);
    V and Vinv are exact integer unimodular width x width matrices with new
    coordinates x_new = x_old . V and x_old = x_new . Vinv.  Component j of
    the new coordinates is defined mod p^{orders[j]}.  Because prime-power
    cyclic decompositions are unique as multisets, sorting the diagonal
    (gcd'd with m) descending yields the invariant factors without needing
    the divisibility chain.
    """
    if width == 0:
        return [], [], []
    A = [list(r) for r in rel_rows]
    A += [[m if i == j else 0 for j in range(width)] for i in range(width)]
    V = identity_matrix(width)
    Vinv = identity_matrix(width)
    rows = len(A)

    def col_op_addmul(dst, src, q):
        # A -> A * E ; V -> V * E ; Vinv -> E^{-1} * Vinv
        _addmul_col(A, dst, src, q)
        _addmul_col(V, dst, src, q)
        for t in range(width):
            Vinv[src][t] -= q * Vinv[dst][t]

    def col_op_swap(i, j):
        if i == j:
            return
        _swap_cols(A, i, j)
        _swap_cols(V, i, j)
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_op_negate(j):
        for row in A:
            row[j] = -row[j]
        for row in V:
            row[j] = -row[j]
        Vinv[j] = [-x for x in Vinv[j]]

    def fix_pivot_sign(t):
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]

    t = 0
    while t < width:
        piv = None
        for i in range(t, rows):
            for j in range(t, width):
                e = A[i][j]
                if e != 0 and (piv is None or abs(e) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        A[t], A[pi] = A[pi], A[t]
        col_op_swap(t, pj)
        fix_pivot_sign(t)
        while True:
            changed = False
            # balanced quotients halve the pivot on every swap, so both
            # clearing loops finish in O(log m) swaps per entry
            for i in range(t + 1, rows):
                while A[i][t]:
                    piv_v = A[t][t]
                    q = (A[i][t] + (piv_v >> 1)) // piv_v
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if not A[i][t]:
                        break
                    A[t], A[i] = A[i], A[t]
                    fix_pivot_sign(t)
                    changed = True
            for j in range(t + 1, width):
                while A[t][j]:
                    piv_v = A[t][t]
                    q = (A[t][j] + (piv_v >> 1)) // piv_v
                    if q:
                        col_op_addmul(j, t, -q)
                    if not A[t][j]:
                        break
                    col_op_swap(t, j)
                    if A[t][t] < 0:
                        col_op_negate(t)
                    changed = True
            if not changed:
                break
        t += 1
    import math

    N = valuation(m, p)
    orders = []
    for j in range(width):
        d = abs(A[j][j])
        d = math.gcd(d, m)
        orders.append(valuation(d, p, cap=N) if d else N)
    perm = sorted(range(width), key=lambda j: -orders[j])
    orders_sorted = [orders[j] for j in perm]
    Vp = [[row[j] for j in perm] for row in V]
    Vinvp = [Vinv[j] for j in perm]
    return orders_sorted, Vp, Vinvp
