"""Finite fields with explicit tables, and their characters.

Elements of F_{p^k} are integer indices 0..q-1.  For an extension field
the index is the little-endian digit expansion over the base field, so
the base field embeds as the indices 0..base.q-1 and the prime subfield
always occupies 0..p-1.  All arithmetic is table driven and vectorized
over numpy integer arrays.

The modulus of an extension is the lexicographically smallest monic
irreducible of the right degree (coefficients compared low degree
first), and the stored generator is the smallest-index element of
multiplicative order q-1, so every table is deterministic.
"""

import numpy as np

from . import poly
from .errors import NonPrime, SizeExceeded, Singular, SizeMismatch

MAX_Q = 1 << 20


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """Tables for F_q, q = p^k, either a prime field or an extension of
    another FieldCtx by an irreducible monic modulus.

    Attributes: p, k (degree over the prime field), q, base (FieldCtx or
    None), deg (degree over base), modulus (coefficient tuple over the
    base, low degree first, monic; None for a prime field), gen, exp
    (length q-1), log (length q, log[0] = -1), digits (q x deg),
    inv_table (length q, junk at 0), trace_to_prime (length q, values
    < p).
    """

    def __init__(self, p=None, base=None, deg=None):
        if base is None:
            self._init_prime(p)
        else:
            self._init_ext(base, deg)
        self.inv_table = np.zeros(self.q, dtype=np.int64)
        idx = np.arange(self.q - 1)
        self.inv_table[self.exp] = self.exp[(self.q - 1 - idx) % (self.q - 1)]
        self._build_trace()

    def _init_prime(self, p):
        if not _is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if p > MAX_Q:
            raise SizeExceeded(f"p = {p} exceeds {MAX_Q}")
        self.p = p
        self.k = 1
        self.q = p
        self.base = None
        self.deg = 1
        self.modulus = None
        self.digits = np.arange(p, dtype=np.int64).reshape(p, 1)
        self._places = np.array([1], dtype=np.int64)
        gen = 1
        if p > 2:
            facs = _prime_factors(p - 1)
            for g in range(2, p):
                if all(pow(g, (p - 1) // ell, p) != 1 for ell in facs):
                    gen = g
                    break
        self.gen = gen
        exp = np.ones(p - 1, dtype=np.int64)
        for i in range(1, p - 1):
            exp[i] = (exp[i - 1] * gen) % p
        self.exp = exp
        self.log = np.full(p, -1, dtype=np.int64)
        self.log[exp] = np.arange(p - 1)

    def _init_ext(self, base, deg):
        q = base.q ** deg
        if q > MAX_Q:
            raise SizeExceeded(f"q = {q} exceeds {MAX_Q}")
        self.p = base.p
        self.k = base.k * deg
        self.q = q
        self.base = base
        self.deg = deg
        self.modulus = poly.smallest_irreducible(base, deg)
        places = base.q ** np.arange(deg, dtype=np.int64)
        self._places = places
        idx = np.arange(q, dtype=np.int64)
        self.digits = (idx[:, None] // places[None, :]) % base.q

        # generator: smallest index of multiplicative order q-1
        facs = _prime_factors(q - 1)
        gen = None
        for cand in range(1, q):
            tup = self._tup(cand)
            if all(self._pow_tup(tup, (q - 1) // ell) != (1,) for ell in facs):
                gen = cand
                break
        if gen is None:  # q = 2 has trivial unit group
            gen = 1
        self.gen = gen
        exp = np.empty(q - 1, dtype=np.int64)
        cur = (1,)
        gt = self._tup(gen)
        for i in range(q - 1):
            exp[i] = self._idx(cur)
            cur = poly.mod(base, poly.mul(base, cur, gt), self.modulus)
        self.exp = exp
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[exp] = np.arange(q - 1)

    def _tup(self, i):
        return poly.trim(int(d) for d in self.digits[i])

    def _idx(self, tup):
        return int(sum(int(c) * int(self._places[j]) for j, c in enumerate(tup)))

    def _pow_tup(self, tup, n):
        acc = (1,)
        while n:
            if n & 1:
                acc = poly.mod(self.base, poly.mul(self.base, acc, tup), self.modulus)
            tup = poly.mod(self.base, poly.mul(self.base, tup, tup), self.modulus)
            n >>= 1
        return acc

    def _build_trace(self):
        # absolute trace x + x^p + ... + x^(p^(k-1)); lands in the prime
        # subfield, whose elements are the indices 0..p-1
        q, p, k = self.q, self.p, self.k
        fp = np.zeros(q, dtype=np.int64)
        if q > 1:
            fp[self.exp] = self.exp[(np.arange(q - 1) * p) % (q - 1)]
        acc = np.arange(q, dtype=np.int64)
        cur = acc
        for _ in range(k - 1):
            cur = fp[cur]
            acc = self.add(acc, cur)
        if not (acc < p).all():
            raise AssertionError("trace left the prime subfield")
        self.trace_to_prime = acc
        self.frob_p = fp

    # --- arithmetic on indices (ints or int arrays) ---

    def add(self, x, y):
        if self.base is None:
            return (np.asarray(x) + np.asarray(y)) % self.p
        s = self.base.add(self.digits[x], self.digits[y])
        return s @ self._places

    def neg(self, x):
        if self.base is None:
            return (-np.asarray(x)) % self.p
        return self.base.neg(self.digits[x]) @ self._places

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        lx = self.log[x]
        ly = self.log[y]
        out = self.exp[(lx + ly) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, out)

    def inv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise Singular("zero is not invertible")
        return self.inv_table[x]

    def pow(self, x, n):
        """x^n for a scalar index x and integer n >= 0."""
        x = int(x)
        if x == 0:
            return 0 if n else 1
        return int(self.exp[(int(self.log[x]) * n) % (self.q - 1)])

    def is_square_unit(self, x):
        """Whether a nonzero element is a square."""
        if self.q % 2 == 0:
            return True
        return int(self.log[x]) % 2 == 0

    def __repr__(self):
        return f"FieldCtx(q={self.q}, p={self.p}, k={self.k})"


def make_field(p, k=1):
    """F_{p^k} with canonical modulus and generator; p^k <= 2^20."""
    prime = FieldCtx(p=p)
    if k == 1:
        return prime
    return FieldCtx(base=prime, deg=k)


class ExtCtx:
    """The quadratic extension F_{q^2} of a given F_q, with Frobenius,
    norm and trace tables.

    norm and trace land in the base subfield, so their tables store base
    indices (< q).  eps is the smallest-index non-square unit of the
    base field (only defined for odd q).
    """

    def __init__(self, base):
        self.base = base
        self.q = base.q
        self.p = base.p
        ext = FieldCtx(base=base, deg=2)
        self.ext = ext
        Q = ext.q
        self.embed = np.arange(base.q, dtype=np.int64)

        frob = np.zeros(Q, dtype=np.int64)
        frob[ext.exp] = ext.exp[(np.arange(Q - 1) * base.q) % (Q - 1)]
        self.frob = frob

        idx = np.arange(Q, dtype=np.int64)
        norm = ext.mul(idx, frob)
        trace = ext.add(idx, frob[idx])
        if not ((norm < base.q).all() and (trace < base.q).all()):
            raise AssertionError("norm/trace left the base subfield")
        self.norm = norm
        self.trace = trace

        self.eps = None
        if base.q % 2 == 1:
            for a in range(2, base.q):
                if not base.is_square_unit(a):
                    self.eps = a
                    break

        # norm-one subgroup, cyclic of order q+1: powers of gen^(q-1)
        t = np.arange(base.q + 1, dtype=np.int64)
        self.norm_one = ext.exp[((base.q - 1) * t) % (Q - 1)]

    def __repr__(self):
        return f"ExtCtx(q={self.q})"


def make_ext(base):
    return ExtCtx(base)


class AddChar:
    """Additive character psi_s(x) = zeta_p^(Tr(s x)) of F_q, where Tr
    is the absolute trace to F_p.  shift = 1 is the canonical psi."""

    def __init__(self, ctx, shift=1):
        self.ctx = ctx
        self.shift = int(shift) % ctx.q
        x = np.arange(ctx.q, dtype=np.int64)
        self.exponents = ctx.trace_to_prime[ctx.mul(self.shift, x)]
        self.values = np.exp(2j * np.pi * self.exponents / ctx.p)

    def __call__(self, x):
        return self.values[x]

    @property
    def is_trivial(self):
        return self.shift == 0


class MultChar:
    """Multiplicative character chi_j(x) = zeta_(q-1)^(j log x) of F_q^*.

    values[0] is stored as 0; the character is undefined at zero."""

    def __init__(self, ctx, j):
        self.ctx = ctx
        self.j = int(j) % (ctx.q - 1)
        e = (self.j * ctx.log) % (ctx.q - 1)
        vals = np.exp(2j * np.pi * e / (ctx.q - 1))
        vals[0] = 0.0
        self.values = vals
        self.exponents = e

    def __call__(self, x):
        return self.values[x]

    @property
    def is_trivial(self):
        return self.j == 0

    @property
    def is_quadratic(self):
        """Nontrivial and equal to its own inverse (odd q only)."""
        return self.ctx.q % 2 == 1 and self.j == (self.ctx.q - 1) // 2

    def conj(self):
        return MultChar(self.ctx, (-self.j) % (self.ctx.q - 1))

    def __eq__(self, other):
        return isinstance(other, MultChar) and other.ctx is self.ctx and other.j == self.j

    def __hash__(self):
        return hash((id(self.ctx), self.j))


def is_primitive(chi):
    """A character of F_{q^2}^* is primitive (not a norm pullback) iff
    it is nontrivial on the norm-one subgroup, i.e. (q+1) does not
    divide its exponent."""
    Q = chi.ctx.q
    q = round(Q ** 0.5)
    if q * q != Q:
        raise SizeMismatch("primitivity needs a quadratic extension field")
    return chi.j % (q + 1) != 0


class NormOneChar:
    """Character of the norm-one subgroup of F_{q^2}^*, cyclic of order
    q+1.  Index j is taken mod q+1; j = (q+1)/2 is the quadratic one."""

    def __init__(self, ectx, j):
        self.ectx = ectx
        q = ectx.q
        self.j = int(j) % (q + 1)
        vals = np.zeros(ectx.ext.q, dtype=complex)
        t = np.arange(q + 1)
        vals[ectx.norm_one] = np.exp(2j * np.pi * self.j * t / (q + 1))
        self.values = vals

    def __call__(self, z):
        return self.values[z]

    @property
    def is_trivial(self):
        return self.j == 0

    @property
    def is_quadratic(self):
        return self.ectx.q % 2 == 1 and self.j == (self.ectx.q + 1) // 2

    def conj(self):
        return NormOneChar(self.ectx, (-self.j) % (self.ectx.q + 1))


def fourier_transform(f, orders):
    """Fourier transform on a product of cyclic groups Z/n_1 x ... x Z/n_r
    indexed little-endian (first factor varies fastest):

        FT f(e) = sum_x f(x) conj(chi_e(x)),  chi_e(x) = prod zeta_(n_i)^(e_i x_i).

    Realized as a mixed-radix FFT; |G| <= 2^16.
    """
    f = np.asarray(f, dtype=complex)
    n = 1
    for o in orders:
        n *= int(o)
    if f.shape != (n,):
        raise SizeMismatch(f"expected length {n}, got {f.shape}")
    if n > 1 << 16:
        raise SizeExceeded(f"group order {n} exceeds 2^16")
    cube = f.reshape(tuple(int(o) for o in orders[::-1]))
    return np.fft.fftn(cube).ravel()


def dual_pairing(ectx, x):
    """The additive character y -> psi(tr(conj(x) y)) of F_{q^2} attached
    to x under the trace-form self-duality."""
    return AddChar(ectx.ext, shift=int(ectx.frob[x]))
