"""Abelian codes over F_q: parity machinery, dimension, distance, encoding.

A code is determined by its ambient index space and an orbit-closed
defining set.  The parity matrix is assembled from the check tensor: for
each restricted representative e the column at position j carries the
base-field coordinates of prod_i alpha_i^(e_i j_i), taken in the subfield
matching the q-orbit size of e.  A word is a codeword iff its syndrome
against this matrix vanishes, which is how everything downstream (rank
verification, encoding, decoding, distance work) is grounded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import sympy
from sympy.ntheory import n_order

from .gamma import CheckSet, compute_tables
from .gf import (FieldElem, FieldError, ScalarField, build_context,
                 root_of_unity, subfield_coords)
from .orbit import Ambient, DefiningSet, restricted_reps

_FULL_ENUM_LIMIT = 1 << 20
_GRAY_MAX_K = 28


def _prime_power(q: int):
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    ((p, s),) = fac.items()
    return int(p), int(s)


# ---------- dense matrices over F_q ----------


class MatrixGF:
    """Dense matrix over the base field, entries stored as integer labels."""

    def __init__(self, scalars: ScalarField, data, role: str = "matrix"):
        self.field = scalars
        dtype = np.uint8 if scalars.q <= 256 else np.uint16
        self.data = np.array(data, dtype=dtype, copy=True)
        if self.data.ndim != 2:
            self.data = self.data.reshape(1, -1)
        self.role = role

    @property
    def shape(self):
        return self.data.shape

    def rref(self, col_order=None):
        """Reduced row echelon form; returns (MatrixGF, pivot column list).

        col_order restricts and orders the pivot search; columns not listed
        are never used as pivots.
        """
        f = self.field
        m, n = self.data.shape
        if col_order is None:
            col_order = range(n)
        pivots = []
        row = 0
        if f.s == 1:
            p = f.p
            A = self.data.astype(np.int64)
            for col in col_order:
                if row == m:
                    break
                nz = np.nonzero(A[row:, col])[0]
                if nz.size == 0:
                    continue
                pr = row + int(nz[0])
                if pr != row:
                    A[[row, pr]] = A[[pr, row]]
                inv = pow(int(A[row, col]), -1, p)
                if inv != 1:
                    A[row] = (A[row] * inv) % p
                others = np.nonzero(A[:, col])[0]
                others = others[others != row]
                if others.size:
                    A[others] = (A[others] - np.outer(A[others, col], A[row])) % p
                pivots.append(col)
                row += 1
            out = MatrixGF(f, A, role="rref")
        else:
            add_t, mul_t, neg_t, _, _ = f.tables()
            A = self.data.copy()
            for col in col_order:
                if row == m:
                    break
                nz = np.nonzero(A[row:, col])[0]
                if nz.size == 0:
                    continue
                pr = row + int(nz[0])
                if pr != row:
                    A[[row, pr]] = A[[pr, row]]
                inv = f.inv(int(A[row, col]))
                if inv != 1:
                    A[row] = mul_t[A[row], inv]
                others = np.nonzero(A[:, col])[0]
                others = others[others != row]
                if others.size:
                    contrib = mul_t[neg_t[A[others, col]][:, None], A[row][None, :]]
                    A[others] = add_t[A[others], contrib]
                pivots.append(col)
                row += 1
            out = MatrixGF(f, A, role="rref")
        return out, pivots

    def rank(self, col_order=None) -> int:
        if self.field.q == 2:
            rows = self.row_ints()
            n = self.data.shape[1]
            order = list(col_order) if col_order is not None else range(n)
            return len(_rref_ints(rows, order)[1])
        return len(self.rref(col_order)[1])

    def nullspace(self):
        """Basis of the right kernel, one row per basis vector."""
        f = self.field
        m, n = self.data.shape
        R, pivots = self.rref()
        free = [c for c in range(n) if c not in set(pivots)]
        basis = np.zeros((len(free), n), dtype=self.data.dtype)
        for bi, fc in enumerate(free):
            basis[bi, fc] = 1
            for ri, pc in enumerate(pivots):
                basis[bi, pc] = f.neg(int(R.data[ri, fc]))
        return MatrixGF(f, basis, role="generator")

    def mul_vec(self, vec) -> np.ndarray:
        f = self.field
        vec = np.asarray(vec)
        if f.s == 1:
            return ((self.data.astype(np.int64) @ vec.astype(np.int64)) % f.p) \
                .astype(self.data.dtype)
        add_t, mul_t, _, _, _ = f.tables()
        acc = np.zeros(self.data.shape[0], dtype=self.data.dtype)
        for j in np.nonzero(vec)[0]:
            acc = add_t[acc, mul_t[self.data[:, int(j)], int(vec[int(j)])]]
        return acc

    def mul_mat(self, other: "MatrixGF") -> "MatrixGF":
        cols = [self.mul_vec(other.data[:, j]) for j in range(other.data.shape[1])]
        return MatrixGF(self.field, np.stack(cols, axis=1), role="matrix")

    def row_ints(self):
        """Rows packed into ints, bit j = column j (q = 2 only)."""
        if self.field.q != 2:
            raise ValueError("bit packing requires q = 2")
        out = []
        for row in self.data:
            v = 0
            for j in np.nonzero(row)[0]:
                v |= 1 << int(j)
            out.append(v)
        return out

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.data)

    def __repr__(self):
        return f"MatrixGF(role={self.role!r}, shape={self.data.shape}, q={self.field.q})"


def _rref_ints(rows, col_order):
    """RREF of bit-packed rows; returns (reduced nonzero rows, pivot cols)."""
    rows = [int(r) for r in rows]
    out = []
    pivots = []
    for col in col_order:
        bit = 1 << col
        idx = None
        for i, r in enumerate(rows):
            if r & bit:
                idx = i
                break
        if idx is None:
            continue
        piv = rows.pop(idx)
        rows = [r ^ piv if r & bit else r for r in rows]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
    return out, pivots


# ---------- the code itself ----------


class AbelianCode:
    """An abelian code given by its defining set."""

    def __init__(self, defining: DefiningSet):
        amb = defining.ambient
        p, s = _prime_power(amb.q)
        M = 1
        for ri in amb.r:
            if ri > 1:
                M = math.lcm(M, int(n_order(amb.q, ri)))
        self.ambient = amb
        self.defining = defining
        self.ctx = build_context(p, s, M)
        self.scalars = ScalarField(self.ctx)
        self.roots = tuple(root_of_unity(self.ctx, ri) for ri in amb.r)
        self.reps = restricted_reps(defining)
        self.tables = compute_tables(self.reps)
        self._positions = None
        self._tensor = None
        self._parity = None
        self._generator = None

    @property
    def length(self) -> int:
        return self.ambient.length

    @property
    def dimension(self) -> int:
        return self.length - len(self.defining)

    def positions(self):
        if self._positions is None:
            self._positions = self.ambient.positions()
        return self._positions

    def __repr__(self):
        return (f"AbelianCode(q={self.ambient.q}, r={self.ambient.r}, "
                f"|D|={len(self.defining)}, k={self.dimension})")


@dataclass
class CheckTensor:
    """Concatenated subfield-coordinate blocks, one per representative."""

    reps: tuple
    sizes: tuple
    offsets: tuple
    matrix: np.ndarray
    basis_shift: int = 0

    def column(self, j: int) -> np.ndarray:
        return self.matrix[:, j]

    def block(self, rep_index: int) -> np.ndarray:
        off = self.offsets[rep_index]
        return self.matrix[off:off + self.sizes[rep_index]]


def check_tensor(code: AbelianCode, basis_shift: int = 0) -> CheckTensor:
    """Assemble the check tensor of the code.

    basis_shift b replaces the designated basis (1, g, ..., g^(d-1)) of each
    subfield with (g^b, ..., g^(d-1+b)); any b gives an equivalent tensor,
    which the verification tests rely on.
    """
    if basis_shift == 0 and code._tensor is not None:
        return code._tensor
    ctx = code.ctx
    amb = code.ambient
    positions = code.positions()
    reps = code.reps.reps
    sizes = tuple(code.tables.gamma(rep) for rep in reps)
    offsets = tuple(itertools.accumulate((0,) + sizes[:-1]))
    total = sum(sizes)
    dtype = np.uint8 if amb.q <= 256 else np.uint16
    mat = np.zeros((total, len(positions)), dtype=dtype)
    for ri_idx, rep in enumerate(reps):
        d = sizes[ri_idx]
        pows = []
        for axis, r_axis in enumerate(amb.r):
            g = ctx.pow(code.roots[axis].rep, rep[axis])
            cur = [ctx.one]
            for _ in range(r_axis - 1):
                cur.append(ctx.mul(cur[-1], g))
            pows.append(cur)
        shift_mult = None
        if basis_shift:
            sub_order = amb.q**d - 1
            gd = ctx.subfield_generator(d)
            shift_mult = ctx.pow(gd, (-basis_shift) % sub_order) if sub_order else ctx.one
        off = offsets[ri_idx]
        for j, pos in enumerate(positions):
            x = ctx.one
            for axis in range(amb.n):
                x = ctx.mul(x, pows[axis][pos[axis]])
            if shift_mult is not None:
                x = ctx.mul(x, shift_mult)
            mat[off:off + d, j] = subfield_coords(ctx, FieldElem(ctx, x), d)
    tensor = CheckTensor(tuple(reps), sizes, offsets, mat, basis_shift)
    if basis_shift == 0:
        code._tensor = tensor
    return tensor


def parity_matrix(code: AbelianCode) -> MatrixGF:
    if code._parity is None:
        code._parity = MatrixGF(code.scalars, check_tensor(code).matrix, role="parity")
    return code._parity


def generator_matrix(code: AbelianCode) -> MatrixGF:
    if code._generator is None:
        if len(code.defining) == 0:
            eye = np.eye(code.length, dtype=np.uint8)
            code._generator = MatrixGF(code.scalars, eye, role="generator")
        else:
            code._generator = parity_matrix(code).nullspace()
            code._generator.role = "generator"
    return code._generator


def dimension(code: AbelianCode) -> int:
    return code.dimension


def contains(code: AbelianCode, vec) -> bool:
    if len(code.defining) == 0:
        return True
    return not np.any(parity_matrix(code).mul_vec(vec))


def evaluate_at_root(code: AbelianCode, vec, exponent) -> FieldElem:
    """P(alpha_1^e_1, ..., alpha_n^e_n) for a coefficient vector P."""
    ctx = code.ctx
    acc = ctx.zero
    vec = np.asarray(vec)
    for j, pos in enumerate(code.positions()):
        label = int(vec[j])
        if not label:
            continue
        x = code.scalars.element(label).rep
        for axis in range(code.ambient.n):
            x = ctx.mul(x, ctx.pow(code.roots[axis].rep,
                                   (exponent[axis] * pos[axis]) % code.ambient.r[axis]))
        acc = ctx.add(acc, x)
    return FieldElem(ctx, acc)


# ---------- verification ----------


@dataclass
class VerifyResult:
    ok: bool
    reason: str
    rank: int
    expected: int
    pivots: tuple = ()

    def __bool__(self):
        return self.ok


def verify_check_positions(code: AbelianCode, cs: CheckSet) -> VerifyResult:
    """Independent linear-algebra check that cs is a valid check-position set.

    The columns of the parity matrix indexed by cs must span the full row
    space, i.e. have rank |D|.  A cardinality mismatch is reported as its
    own failure mode, distinct from a rank deficiency.
    """
    if cs.ambient != code.ambient:
        raise ValueError("check set belongs to a different ambient")
    expected = len(code.defining)
    npos = len(cs.positions)
    if npos != expected:
        return VerifyResult(False, "cardinality", -1, expected)
    if expected == 0:
        return VerifyResult(True, "ok", 0, 0)
    cols = sorted(code.ambient.index_of(t) for t in cs.positions)
    H = parity_matrix(code)
    sub = H.data[:, cols]
    if code.ambient.q == 2:
        rows = MatrixGF(code.scalars, sub).row_ints()
        _, pivots = _rref_ints(rows, range(len(cols)))
        rank = len(pivots)
    else:
        sub_m = MatrixGF(code.scalars, sub)
        _, pivots = sub_m.rref()
        rank = len(pivots)
    if rank != expected:
        return VerifyResult(False, "rank", rank, expected)
    piv_positions = tuple(code.ambient.tuple_of(cols[c]) for c in pivots)
    return VerifyResult(True, "ok", rank, expected, piv_positions)


# ---------- minimum distance ----------


@dataclass
class DistanceResult:
    lower: int
    upper: int
    witness: Optional[np.ndarray]
    method: str
    evaluations: int

    @property
    def is_exact(self) -> bool:
        return self.lower >= self.upper

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError(f"distance not resolved: bracket [{self.lower}, {self.upper}]")
        return self.upper

    def __repr__(self):
        if self.is_exact:
            return f"DistanceResult(d={self.upper}, method={self.method!r})"
        return f"DistanceResult([{self.lower},{self.upper}], method={self.method!r})"


def _int_to_vec(x: int, l: int) -> np.ndarray:
    return np.array([(x >> j) & 1 for j in range(l)], dtype=np.uint8)


def _popcount_u64(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr)


def _gray_min(rows, l, budget=None):
    """Minimum nonzero weight over all F_2 combinations of independent rows.

    The low 20 rows are tabulated as numpy chunks; the remaining rows are
    walked in Gray-code order so each step is one row XOR plus vector ops.
    """
    k = len(rows)
    split = min(k, 20)
    nch = (l + 63) // 64
    mask64 = (1 << 64) - 1
    tabs = []
    for c in range(nch):
        t = np.zeros(1, dtype=np.uint64)
        for row in rows[:split]:
            part = np.uint64((row >> (64 * c)) & mask64)
            t = np.concatenate([t, t ^ part])
        tabs.append(t)
    best = l + 1
    bw = None
    evals = 0
    hi = 0
    steps = 1 << (k - split)
    for step in range(steps):
        if step:
            j = (step & -step).bit_length() - 1
            hi ^= rows[split + j]
        acc = None
        for c in range(nch):
            part = np.uint64((hi >> (64 * c)) & mask64)
            w = _popcount_u64(tabs[c] ^ part).astype(np.uint32)
            acc = w if acc is None else acc + w
        if hi == 0:
            acc[0] = l + 1
        i = int(np.argmin(acc))
        wt = int(acc[i])
        if wt < best:
            best = wt
            low = 0
            for c in range(nch):
                low |= int(tabs[c][i]) << (64 * c)
            bw = low ^ hi
        evals += 1 << split
        if budget is not None and evals >= budget and step + 1 < steps:
            return best, bw, evals, False
    return best, bw, evals, True


def _enum_weight_min(rows, w, best, best_wit):
    """Scan all XOR combinations of exactly w rows, tracking the minimum."""
    k = len(rows)

    def rec(start, acc, rem):
        nonlocal best, best_wit
        if rem == 1:
            for i in range(start, k):
                v = acc ^ rows[i]
                wt = v.bit_count()
                if wt and wt < best:
                    best = wt
                    best_wit = v
        else:
            for i in range(start, k - rem + 1):
                rec(i + 1, acc ^ rows[i], rem - 1)

    if w >= 1 and k >= w:
        rec(0, 0, w)
    return best, best_wit


def _bz_matrices(rows, k, l):
    """RREF copies of the generator over pairwise disjoint pivot sets.

    Returns a list of (row_ints, fresh_rank): fresh_rank pivots of each
    matrix fall on columns unused by all previous ones.
    """
    used = set()
    mats = []
    while len(used) < l:
        order = [c for c in range(l) if c not in used] + sorted(used)
        red, pivots = _rref_ints(rows, order)
        fresh = [c for c in pivots if c not in used]
        if not fresh or len(red) < k:
            break
        mats.append((red, len(fresh)))
        used.update(fresh)
    return mats


def _bz_min(rows, k, l, budget=None, decide_at_least=None):
    """Information-set enumeration in the Brouwer-Zimmermann style (q = 2).

    When every generator row has even weight, all codewords do, so an odd
    lower bound can be rounded up; this is what makes weight-8 distances
    at dimension 40 certifiable without a depth-7 pass.
    """
    mats = _bz_matrices(rows, k, l)
    completed = [0] * len(mats)
    even = all(r.bit_count() % 2 == 0 for r in rows)
    ub = l + 1
    wit = None
    evals = 0

    def lower_bound():
        lb = sum(max(0, completed[i] + 1 - (k - r)) for i, (_, r) in enumerate(mats))
        if even and lb % 2:
            lb += 1
        return lb

    w = 0
    while True:
        lb = lower_bound()
        if lb >= ub:
            return ub, wit, evals, True
        if decide_at_least is not None and (lb >= decide_at_least or ub < decide_at_least):
            return (lb if lb < ub else ub), wit, evals, lb >= ub
        w += 1
        if w > k:
            return ub, wit, evals, True
        for i, (mrows, r) in enumerate(mats):
            gain = w + 1 - (k - r)
            if gain <= 0 and w > 2:
                continue
            cost = math.comb(k, w)
            if budget is not None and evals + cost > budget:
                return lower_bound(), wit if wit is not None else None, evals, False
            evals += cost
            new_ub, new_wit = _enum_weight_min(mrows, w, ub, wit)
            if new_ub < ub:
                ub, wit = new_ub, new_wit
            completed[i] = w
            if lower_bound() >= ub:
                return ub, wit, evals, True
            if decide_at_least is not None and ub < decide_at_least:
                return lower_bound(), wit, evals, False


def _bz_min_generic(code, G, budget=None):
    """BZ-style enumeration over F_q, q > 2; desk scale only."""
    f = code.scalars
    q = f.q
    k, l = G.data.shape
    used = set()
    mats = []
    while len(used) < l:
        order = [c for c in range(l) if c not in used] + sorted(used)
        red, pivots = G.rref(order)
        fresh = [c for c in pivots if c not in used]
        if not fresh or len(pivots) < k:
            break
        mats.append((red.data.copy(), len(fresh)))
        used.update(fresh)

    completed = [0] * len(mats)
    ub = l + 1
    wit = None
    evals = 0
    nonzero = list(range(1, q))

    if f.s == 1:
        def scaled(row, c):
            return (row.astype(np.int64) * c) % f.p
        def addv(a, b):
            return (a.astype(np.int64) + b.astype(np.int64)) % f.p
    else:
        add_t, mul_t, _, _, _ = f.tables()
        def scaled(row, c):
            return mul_t[row, c]
        def addv(a, b):
            return add_t[a, b]

    def lower_bound():
        return sum(max(0, completed[i] + 1 - (k - r)) for i, (_, r) in enumerate(mats))

    w = 0
    while True:
        lb = lower_bound()
        if lb >= ub:
            return ub, wit, evals, True
        w += 1
        if w > k:
            return ub, wit, evals, True
        for i, (rows, r) in enumerate(mats):
            gain = w + 1 - (k - r)
            if gain <= 0 and w > 2:
                continue
            cost = math.comb(k, w) * (q - 1) ** w
            if budget is not None and evals + cost > budget:
                return lower_bound(), wit, evals, False
            evals += cost

            def rec(start, acc, rem):
                nonlocal ub, wit
                if rem == 0:
                    wt = int(np.count_nonzero(acc))
                    if wt and wt < ub:
                        ub = wt
                        wit = acc.copy()
                    return
                for idx in range(start, k - rem + 1):
                    for c in nonzero:
                        rec(idx + 1, addv(acc, scaled(rows[idx], c)), rem - 1)

            rec(0, np.zeros(l, dtype=np.int64), w)
            completed[i] = w
            if lower_bound() >= ub:
                return ub, wit, evals, True


def _full_min(code, G):
    """Expand every message; memory-bounded exact enumeration."""
    f = code.scalars
    q = f.q
    k, l = G.data.shape
    if q**k * l > (1 << 28):
        raise ValueError("full enumeration exceeds the memory budget")
    A = np.zeros((1, l), dtype=G.data.dtype)
    if f.s == 1:
        for row in G.data:
            blocks = [A]
            for v in range(1, q):
                blocks.append((A.astype(np.int64) + v * row.astype(np.int64)) % f.p)
            A = np.vstack([b.astype(G.data.dtype) for b in blocks])
    else:
        add_t, mul_t, _, _, _ = f.tables()
        for row in G.data:
            blocks = [A]
            for v in range(1, q):
                blocks.append(add_t[A, mul_t[row, v][None, :]])
            A = np.vstack(blocks)
    weights = np.count_nonzero(A, axis=1)
    weights[0] = l + 1
    i = int(np.argmin(weights))
    return int(weights[i]), A[i].copy(), q**k


def min_distance(code: AbelianCode, budget=None, method: str = "auto") -> DistanceResult:
    """Minimum weight of the code; exact or a certified bracket under budget."""
    k = code.dimension
    l = code.length
    q = code.ambient.q
    if k == 0:
        raise ValueError("minimum distance of the zero code is undefined")
    G = generator_matrix(code)
    if method == "auto":
        if q == 2 and k <= _GRAY_MAX_K:
            method = "gray"
        elif q**k <= _FULL_ENUM_LIMIT:
            method = "full"
        else:
            method = "bz"
    if method == "gray":
        if q != 2:
            raise ValueError("Gray-code enumeration requires q = 2")
        rows = G.row_ints()
        best, bw, evals, exact = _gray_min(rows, l, budget)
        wit = _int_to_vec(bw, l) if bw is not None else None
        return DistanceResult(best if exact else 1, best, wit, "gray", evals)
    if method == "full":
        best, wit, evals = _full_min(code, G)
        return DistanceResult(best, best, wit, "full", evals)
    if method == "bz":
        if q == 2:
            rows = G.row_ints()
            lo, wit_i, evals, exact = _bz_min(rows, k, l, budget)
            if exact:
                wit = _int_to_vec(wit_i, l) if wit_i is not None else None
                return DistanceResult(lo, lo, wit, "bz", evals)
            ub = wit_i.bit_count() if wit_i is not None else l
            wit = _int_to_vec(wit_i, l) if wit_i is not None else None
            return DistanceResult(lo, ub, wit, "bz", evals)
        ub, wit, evals, exact = _bz_min_generic(code, G, budget)
        wt = wit.astype(np.uint8) if wit is not None else None
        return DistanceResult(ub if exact else 1, ub, wt, "bz", evals)
    raise ValueError(f"unknown method {method!r}")


def distance_at_least(code: AbelianCode, d: int, budget=None) -> bool:
    """Decide d(C) >= d without necessarily resolving the exact distance."""
    if d <= 1:
        return True
    if code.dimension == 0:
        return True
    if d <= 5:
        return find_low_weight_codeword(code, d - 1) is None
    q = code.ambient.q
    G = generator_matrix(code)
    if q == 2:
        rows = G.row_ints()
        lo, wit, evals, exact = _bz_min(rows, code.dimension, code.length,
                                        budget, decide_at_least=d)
        if exact:
            return lo >= d
        if wit is not None and wit.bit_count() < d:
            return False
        return lo >= d
    res = min_distance(code, budget=budget)
    return res.lower >= d


def find_low_weight_codeword(code: AbelianCode, wmax: int):
    """A nonzero codeword of weight <= wmax, or None.

    Works on the parity matrix: a codeword of weight w corresponds to w
    linearly dependent columns.  For q = 2 and wmax <= 4 the search is a
    hash of column XOR pairs; otherwise supports are enumerated directly.
    """
    l = code.length
    if wmax < 1:
        return None
    if len(code.defining) == 0:
        vec = np.zeros(l, dtype=np.uint8)
        vec[0] = 1
        return vec
    if code.dimension == 0:
        return None
    H = parity_matrix(code)

    def vec_of(support, values):
        out = np.zeros(l, dtype=np.uint8)
        for j, v in zip(support, values):
            out[j] = v
        return out

    if code.ambient.q == 2 and wmax <= 4:
        cols = []
        for j in range(l):
            v = 0
            for i in np.nonzero(H.data[:, j])[0]:
                v |= 1 << int(i)
            cols.append(v)
        for j, c in enumerate(cols):
            if c == 0:
                return vec_of([j], [1])
        if wmax < 2:
            return None
        seen = {}
        for j, c in enumerate(cols):
            if c in seen:
                return vec_of([seen[c], j], [1, 1])
            seen[c] = j
        if wmax < 3:
            return None
        for a in range(l):
            for b in range(a + 1, l):
                x = cols[a] ^ cols[b]
                j = seen.get(x)
                if j is not None and j not in (a, b):
                    return vec_of([a, b, j], [1, 1, 1])
        if wmax < 4:
            return None
        pairs = {}
        for a in range(l):
            for b in range(a + 1, l):
                x = cols[a] ^ cols[b]
                if x in pairs:
                    c, d = pairs[x]
                    if len({a, b, c, d}) == 4:
                        return vec_of([c, d, a, b], [1, 1, 1, 1])
                else:
                    pairs[x] = (a, b)
        return None

    max_supports = 5_000_000
    total = sum(math.comb(l, w) for w in range(1, wmax + 1))
    if total > max_supports:
        raise ValueError("support enumeration too large; use distance_at_least")
    f = code.scalars
    for w in range(1, wmax + 1):
        for support in itertools.combinations(range(l), w):
            sub = MatrixGF(f, H.data[:, list(support)])
            ker = sub.nullspace()
            if ker.data.shape[0]:
                return vec_of(support, [int(v) for v in ker.data[0]])
    return None


# ---------- encoding ----------


def standard_form_parity(code: AbelianCode, cs: CheckSet):
    """Parity matrix with an identity block on the (sorted) check positions.

    Returns (MatrixGF, check column indices).  Raises if cs fails
    verification, since the reduction needs an invertible check block.
    """
    res = verify_check_positions(code, cs)
    if not res:
        raise ValueError(f"check positions not verified: {res.reason}")
    if len(code.defining) == 0:
        return MatrixGF(code.scalars, np.zeros((0, code.length), dtype=np.uint8),
                        role="standard-parity"), []
    cols = sorted(code.ambient.index_of(t) for t in cs.positions)
    H = parity_matrix(code)
    R, pivots = H.rref(col_order=cols)
    if list(pivots) != cols:
        raise AssertionError("verified check block failed to pivot (unreachable)")
    R.role = "standard-parity"
    return R, cols


def encode(code: AbelianCode, cs: CheckSet, info_values) -> np.ndarray:
    """Systematic encoding: info positions carry the message verbatim."""
    H_std, check_cols = standard_form_parity(code, cs)
    f = code.scalars
    l = code.length
    info = set(code.ambient.positions()) - set(cs.positions)
    y = np.zeros(l, dtype=H_std.data.dtype if len(check_cols) else np.uint8)
    for pos, val in info_values.items():
        pos = tuple(pos)
        if pos not in info:
            raise ValueError(f"{pos} is not an information position")
        if not 0 <= int(val) < f.q:
            raise ValueError(f"value {val} out of range for q = {f.q}")
        y[code.ambient.index_of(pos)] = int(val)
    if check_cols:
        syn = H_std.mul_vec(y)
        for i, col in enumerate(check_cols):
            y[col] = f.neg(int(syn[i]))
    return y
