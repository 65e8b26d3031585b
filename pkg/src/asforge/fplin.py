"""Exact linear algebra over F_p with numpy integer arrays."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import BudgetExceeded, NotSubspace


def rref(M, p):
    """Reduced row echelon form mod p: (R, pivots) with zero rows dropped."""
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = A.shape
    inv = [0] + [pow(i, -1, p) for i in range(1, p)]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p):
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(M, p, cols=None):
    """FpSubspace of solutions v with M v = 0."""
    A = np.asarray(M, dtype=np.int64)
    n = A.shape[1] if A.ndim == 2 and A.size else cols
    if n is None:
        raise ValueError("cannot infer the number of columns")
    if A.size == 0:
        return FpSubspace(p, n, np.eye(n, dtype=np.int64))
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(piv):
            basis[i, pc] = (-R[j, f]) % p
    return FpSubspace(p, n, basis)


solve_homogeneous = nullspace


class FpSubspace:
    """A subspace of F_p^n stored by its canonical (rref) basis."""

    def __init__(self, p, n, rows=None):
        self.p = p
        self.n = n
        A = np.zeros((0, n), dtype=np.int64) if rows is None or len(rows) == 0 \
            else np.asarray(rows, dtype=np.int64).reshape(-1, n)
        if A.shape[0]:
            A, piv = rref(A, p)
        else:
            piv = []
        self.basis = A
        self.pivots = piv
        self.basis.setflags(write=False)

    @classmethod
    def full(cls, p, n):
        return cls(p, n, np.eye(n, dtype=np.int64))

    @classmethod
    def zero(cls, p, n):
        return cls(p, n)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        return (isinstance(other, FpSubspace) and self.p == other.p and self.n == other.n
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.p, self.n, self.basis.tobytes()))

    def __repr__(self):
        return f"FpSubspace(p={self.p}, n={self.n}, dim={self.dim})"

    def contains(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.dim == 0:
            return not v.any()
        w = (v - self.coords(v) @ self.basis) % self.p
        return not w.any()

    def coords(self, v):
        """Coordinates of v in the rref basis (valid when v lies in the space)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return v[self.pivots] if self.dim else np.zeros(0, dtype=np.int64)

    def combine(self, coeffs):
        c = np.asarray(coeffs, dtype=np.int64)
        return (c @ self.basis) % self.p

    def __add__(self, other):
        return FpSubspace(self.p, self.n, np.vstack([self.basis, other.basis]))

    def is_subspace_of(self, other):
        return all(other.contains(v) for v in self.basis)

    def meets_trivially(self, other):
        return rank(np.vstack([self.basis, other.basis]), self.p) == self.dim + other.dim \
            if self.dim and other.dim else True


def complement(V, U):
    """W with V + W = U, V and W independent: greedy over U's basis rows."""
    if not V.is_subspace_of(U):
        raise NotSubspace("V is not contained in U")
    p, n = U.p, U.n
    chosen = []
    acc = V.basis.copy()
    r = V.dim
    for row in U.basis:
        trial = np.vstack([acc, row])
        rk = rank(trial, p)
        if rk > r:
            acc, r = trial, rk
            chosen.append(row)
    return FpSubspace(p, n, np.array(chosen).reshape(-1, n))


def gaussian_binomial(n, r, p):
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def rref_coordinates(d, r, p):
    """All r x d rref matrices of full rank over F_p in canonical order."""
    for piv in itertools.combinations(range(d), r):
        free = [(i, c) for i in range(r) for c in range(piv[i] + 1, d) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            M = np.zeros((r, d), dtype=np.int64)
            for i, c in enumerate(piv):
                M[i, c] = 1
            for (i, c), v in zip(free, vals):
                M[i, c] = v
            yield M


def enumerate_subspaces(space, r, budget=None):
    """Every r-dimensional subspace of ``space`` once, as (coordinate rref, FpSubspace)."""
    total = gaussian_binomial(space.dim, r, space.p)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} subspaces exceed the budget {budget}")
    for M in rref_coordinates(space.dim, r, space.p):
        yield M, FpSubspace(space.p, space.n, (M @ space.basis) % space.p)


def canonical_line(v, p):
    v = np.asarray(v, dtype=np.int64) % p
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise ValueError("zero vector spans no line")
    return (v * pow(int(v[nz[0]]), -1, p)) % p


def enumerate_lines(space):
    """(coordinate vector, ambient vector) for each projective line, first nonzero = 1."""
    for M in rref_coordinates(space.dim, 1, space.p):
        c = M[0]
        yield c, (c @ space.basis) % space.p


def flatten(F, codes):
    """F_q coordinates -> F_p coordinates via the power basis."""
    out = []
    for c in codes:
        out.extend(F.digits(c))
    return np.array(out, dtype=np.int64)


def unflatten(F, vec):
    v = [int(x) for x in vec]
    return [F.from_digits(v[i:i + F.s]) for i in range(0, len(v), F.s)]
