"""Finite field arithmetic for the check-position machinery.

Fields F_{p^(s*M)} are realized as F_p[x] modulo a fixed monic irreducible
polynomial of degree s*M.  The base field of the codes is F_q with q = p^s,
and M is chosen by the caller so that every root of unity it needs lives in
F_{q^M}.

Representation: an element is its coefficient vector, low degree first.  For
p = 2 the vector is packed into a Python int (bit i = coefficient of x^i),
otherwise it is a tuple of digits mod p.  Every deterministic choice made
here (modulus, generator, subfield bases) follows one rule: candidates are
ordered by the integer encoding sum(c_i * p^i) and the smallest valid one
wins.  Two contexts built from the same (p, s, M) are therefore identical.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import sympy

MAX_FIELD_BITS = 64


class FieldError(ValueError):
    pass


# ---------- dense polynomial helpers over F_p (construction time only) ----------


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return _poly_trim(out)


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % p
    return _poly_trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        c = a[-1]
        if c:
            shift = len(a) - 1 - df
            for j in range(len(f)):
                a[shift + j] = (a[shift + j] - c * f[j]) % p
        a.pop()
    return _poly_trim(a)


def _poly_powmod(a, e, f, p):
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_monic(a, p):
    if a and a[-1] != 1:
        inv = pow(a[-1], -1, p)
        a = [(v * inv) % p for v in a]
    return a


def _poly_gcd(a, b, p):
    # _poly_mod requires a monic divisor, so normalize before each step
    a, b = list(a), _poly_monic(list(b), p)
    while b:
        a, b = b, _poly_monic(_poly_mod(a, b, p), p)
    return _poly_monic(a, p)


def _is_irreducible(f, p):
    """Monic f over F_p, via gcd with x^(p^i) - x for i up to deg/2."""
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    h = [0, 1]
    for _ in range(d // 2):
        h = _poly_powmod(h, p, f, p)
        g = _poly_gcd(f, _poly_sub(h, [0, 1], p), p)
        if len(g) - 1 >= 1:
            return False
    return True


def _lowest_irreducible(p, d):
    """First monic irreducible of degree d, candidates ordered by integer encoding."""
    if d == 1:
        return [0, 1]
    for enc in range(p**d):
        tail = enc
        coeffs = []
        for _ in range(d):
            coeffs.append(tail % p)
            tail //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return f
    raise FieldError("no irreducible polynomial found (unreachable)")


# ---------- context ----------


class FieldContext:
    """Arithmetic context for F_{p^(s*M)} with designated base field F_{p^s}.

    Immutable after construction; safe to share.  Heavy per-subfield data
    (coordinate solvers) is cached lazily.
    """

    def __init__(self, p: int, s: int, M: int):
        if p < 2 or not sympy.isprime(p):
            raise FieldError(f"p = {p} is not prime")
        if s < 1 or M < 1:
            raise FieldError("s and M must be positive")
        deg = s * M
        if p**deg > (1 << MAX_FIELD_BITS):
            raise FieldError(
                f"field F_{{{p}^{deg}}} exceeds the {MAX_FIELD_BITS}-bit size policy"
            )
        self.p = p
        self.s = s
        self.M = M
        self.deg = deg
        self.q = p**s
        self.order = p**deg
        self.N = self.order - 1  # multiplicative group order

        mod_list = _lowest_irreducible(p, deg)
        self.modulus = tuple(mod_list)
        if p == 2:
            self._mod_int = sum(c << i for i, c in enumerate(mod_list))
            self.zero = 0
            self.one = 1
        else:
            self.zero = (0,) * deg
            self.one = (1,) + (0,) * (deg - 1)

        self._n_factors = tuple(sorted(sympy.factorint(self.N))) if self.N > 1 else ()
        self.generator_rep = self._find_generator()
        self._solvers = {}
        self._eta = None

    # -- encoding --

    def encode(self, rep) -> int:
        """Integer encoding sum(c_i * p^i); the canonical element order."""
        if self.p == 2:
            return rep
        return sum(c * self.p**i for i, c in enumerate(rep))

    def decode(self, enc: int):
        if self.p == 2:
            return enc
        digits = []
        for _ in range(self.deg):
            digits.append(enc % self.p)
            enc //= self.p
        return tuple(digits)

    def digits(self, rep) -> list:
        """Coefficient list, low degree first, length deg."""
        if self.p == 2:
            return [(rep >> i) & 1 for i in range(self.deg)]
        return list(rep)

    # -- arithmetic on raw representations --

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.p == 2:
            return a
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.p == 2:
            acc = 0
            top = 1 << self.deg
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._mod_int
            return acc
        p, deg = self.p, self.deg
        t = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        t[i + j] = (t[i + j] + ai * bj) % p
        mod = self.modulus
        for i in range(2 * deg - 2, deg - 1, -1):
            c = t[i]
            if c:
                shift = i - deg
                for j in range(deg + 1):
                    t[shift + j] = (t[shift + j] - c * mod[j]) % p
        return tuple(t[:deg])

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == self.zero:
            raise FieldError("division by zero")
        return self.pow(a, self.N - 1) if self.N > 1 else a

    def frob(self, a):
        """The base-field Frobenius a -> a^q."""
        return self.pow(a, self.q)

    def multiplicative_order(self, a) -> int:
        if a == self.zero:
            raise FieldError("zero has no multiplicative order")
        order = self.N
        if order == 0:
            return 1
        for f in self._n_factors:
            while order % f == 0 and self.pow(a, order // f) == self.one:
                order //= f
        return order

    def _find_generator(self):
        if self.N == 1:
            return self.one
        for enc in range(2, self.order):
            rep = self.decode(enc)
            if all(self.pow(rep, self.N // f) != self.one for f in self._n_factors):
                return rep
        raise FieldError("no generator found (unreachable)")

    # -- subfield coordinates --

    def eta(self):
        """Canonical generator of the base field F_q inside this context."""
        if self._eta is None:
            self._eta = self.pow(self.generator_rep, self.N // (self.q - 1)) \
                if self.q > 2 else self.one
        return self._eta

    def subfield_generator(self, d: int):
        """Generator of F_{q^d}^* obtained as a power of the field generator."""
        if self.M % d != 0:
            raise FieldError(f"d = {d} does not divide M = {self.M}")
        sub_order = self.q**d - 1
        if sub_order == 0:
            return self.one
        return self.pow(self.generator_rep, self.N // sub_order)

    def _solver(self, d: int):
        """Cached F_p-linear solver for coordinates of F_{q^d} over F_q."""
        if d in self._solvers:
            return self._solvers[d]
        p, s, deg = self.p, self.s, self.deg
        gd = self.subfield_generator(d)
        eta = self.eta()
        cols = []
        gpow = self.one
        for _ in range(d):
            epow = self.one
            for _ in range(s):
                cols.append(self.digits(self.mul(gpow, epow)))
                epow = self.mul(epow, eta)
            gpow = self.mul(gpow, gd)
        ncols = d * s
        # row reduce [B | I] over F_p; B has full column rank ncols
        aug = np.zeros((deg, ncols + deg), dtype=np.int64)
        for j, col in enumerate(cols):
            aug[:, j] = col
        aug[:, ncols:] = np.eye(deg, dtype=np.int64)
        row = 0
        for col in range(ncols):
            piv = None
            for r in range(row, deg):
                if aug[r, col] % p:
                    piv = r
                    break
            if piv is None:
                raise FieldError("subfield basis degenerate (unreachable)")
            aug[[row, piv]] = aug[[piv, row]]
            inv = pow(int(aug[row, col]) % p, -1, p)
            aug[row] = (aug[row] * inv) % p
            for r in range(deg):
                if r != row and aug[r, col] % p:
                    aug[r] = (aug[r] - aug[r, col] * aug[row]) % p
            row += 1
        extract = aug[:ncols, ncols:] % p
        consistency = aug[ncols:, ncols:] % p
        self._solvers[d] = (extract, consistency)
        return self._solvers[d]

    # -- dunders --

    def __eq__(self, other):
        return isinstance(other, FieldContext) and \
            (self.p, self.s, self.M) == (other.p, other.s, other.M)

    def __hash__(self):
        return hash((self.p, self.s, self.M))

    def __repr__(self):
        return f"FieldContext(p={self.p}, s={self.s}, M={self.M})"


@dataclass(frozen=True)
class FieldElem:
    """Element of a FieldContext; thin immutable wrapper over the raw rep."""

    ctx: FieldContext
    rep: object

    def _check(self, other):
        if self.ctx != other.ctx:
            raise FieldError("elements from different contexts")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.ctx, self.ctx.add(self.rep, other.rep))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.ctx, self.ctx.sub(self.rep, other.rep))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.rep))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.ctx, self.ctx.mul(self.rep, other.rep))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.rep, e))

    @property
    def coeffs(self):
        return tuple(self.ctx.digits(self.rep))

    def is_zero(self) -> bool:
        return self.rep == self.ctx.zero

    def multiplicative_order(self) -> int:
        return self.ctx.multiplicative_order(self.rep)

    def __repr__(self):
        return f"FieldElem{self.coeffs}"


@functools.lru_cache(maxsize=None)
def build_context(p: int, s: int, M: int) -> FieldContext:
    """Deterministic context for F_{p^(s*M)} over the base field F_{p^s}."""
    return FieldContext(p, s, M)


def generator(ctx: FieldContext) -> FieldElem:
    return FieldElem(ctx, ctx.generator_rep)


def root_of_unity(ctx: FieldContext, r: int) -> FieldElem:
    """The canonical element of multiplicative order exactly r."""
    if r < 1:
        raise FieldError("order must be positive")
    if r == 1:
        return FieldElem(ctx, ctx.one)
    if ctx.N % r != 0:
        raise FieldError(f"no element of order {r}: {r} does not divide {ctx.N}")
    return FieldElem(ctx, ctx.pow(ctx.generator_rep, ctx.N // r))


def frobenius(ctx: FieldContext, a: FieldElem) -> FieldElem:
    return FieldElem(ctx, ctx.frob(a.rep))


def in_subfield(ctx: FieldContext, a: FieldElem, d: int) -> bool:
    """True when a lies in F_{q^d} (fixed by the d-th power of Frobenius)."""
    if ctx.M % d != 0:
        return False
    return ctx.pow(a.rep, ctx.q**d) == a.rep


def subfield_coords(ctx: FieldContext, a: FieldElem, d: int):
    """Coordinates of a over F_q in the designated basis of F_{q^d}.

    Returns a length-d tuple of base field labels.  A label encodes the
    element sum(c_j * eta^j) of F_q as the integer sum(c_j * p^j), so labels
    0 and 1 are the field's 0 and 1, and for s = 1 the label is the residue.
    """
    if ctx.M % d != 0:
        raise FieldError(f"d = {d} does not divide M = {ctx.M}")
    extract, consistency = ctx._solver(d)
    vec = np.asarray(ctx.digits(a.rep), dtype=np.int64)
    if consistency.size and np.any((consistency @ vec) % ctx.p):
        raise FieldError(f"element is not in F_{{q^{d}}}")
    coords = (extract @ vec) % ctx.p
    p, s = ctx.p, ctx.s
    out = []
    for i in range(d):
        label = 0
        for j in range(s):
            label += int(coords[i * s + j]) * p**j
        out.append(label)
    return tuple(out)


class ScalarField:
    """The base field F_q of a context, acting on integer labels 0..q-1.

    Labels follow the same encoding as subfield_coords.  Addition is
    digitwise mod p; products go through the ambient context (cached in
    numpy tables for vectorized matrix work).
    """

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.p = ctx.p
        self.s = ctx.s
        self.q = ctx.q
        if self.q > 4096:
            raise FieldError("base field too large for tabulated scalar work")
        self._tables = None

    # label <-> element of the context

    def element(self, label: int) -> FieldElem:
        p, acc = self.p, self.ctx.zero
        eta = self.ctx.eta()
        epow = self.ctx.one
        for _ in range(self.s):
            digit = label % p
            label //= p
            if digit:
                term = epow
                for _ in range(digit - 1):
                    term = self.ctx.add(term, epow)
                acc = self.ctx.add(acc, term)
            epow = self.ctx.mul(epow, eta)
        return FieldElem(self.ctx, acc)

    def label_of(self, elem: FieldElem) -> int:
        (label,) = subfield_coords(self.ctx, elem, 1)
        return label

    # scalar ops on labels

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        p, out, w = self.p, 0, 1
        for _ in range(self.s):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.s == 1:
            return (-a) % self.p
        p, out, w = self.p, 0, 1
        for _ in range(self.s):
            out += ((-(a % p)) % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        _, _, _, log, exp = self.tables()
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        if self.s == 1:
            return pow(a, -1, self.p)
        _, _, _, log, exp = self.tables()
        return int(exp[(-log[a]) % (self.q - 1)])

    def tables(self):
        """(add_table, mul_table, neg_table, log, exp) as numpy label arrays."""
        if self._tables is None:
            q = self.q
            dtype = np.uint8 if q <= 256 else np.uint16
            eta = self.ctx.eta()
            exp = np.zeros(max(q - 1, 1), dtype=dtype)
            log = np.zeros(q, dtype=np.int64)
            acc = self.ctx.one
            for k in range(q - 1):
                label = self.label_of(FieldElem(self.ctx, acc))
                exp[k] = label
                log[label] = k
                acc = self.ctx.mul(acc, eta)
            add_table = np.zeros((q, q), dtype=dtype)
            mul_table = np.zeros((q, q), dtype=dtype)
            neg_table = np.zeros(q, dtype=dtype)
            for a in range(q):
                neg_table[a] = self.neg(a)
                for b in range(q):
                    add_table[a, b] = self.add(a, b)
                    if a and b:
                        mul_table[a, b] = exp[(log[a] + log[b]) % (q - 1)]
            self._tables = (add_table, mul_table, neg_table, log, exp)
        return self._tables

    def __repr__(self):
        return f"ScalarField(q={self.q})"
