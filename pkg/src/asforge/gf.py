"""Finite fields F_{p^s} with table-driven arithmetic.

Elements are stored as integer codes: the code of c_0 + c_1*a + ... + c_{s-1}*a^{s-1}
is sum(c_i * p**i), where ``a`` is a root of the field modulus.  ``FieldDesc``
operates on raw codes (fast path used by series and linear algebra);
``FieldElt`` is the user-facing immutable wrapper.

Every field is built directly over F_p.  Towers F_q < F_{q^d} are realised by
computing an explicit embedding (root scanning of the smaller modulus).
"""

from __future__ import annotations

import threading

from .errors import FieldError

MAX_FIELD_SIZE = 2 ** 20

# Lexicographically least primitive polynomials (constant term first), so the
# modulus root generates the multiplicative group.
DEFAULT_MODULI = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (1, 2, 1, 0, 0, 0, 0, 1),
    (3, 8): (2, 0, 0, 1, 0, 0, 0, 0, 1),
    (3, 9): (1, 0, 1, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (3, 11): (1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 12): (2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 3, 0, 1),
    (5, 4): (2, 2, 1, 0, 1),
    (5, 5): (2, 4, 0, 0, 0, 1),
    (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 7): (2, 3, 0, 0, 0, 0, 0, 1),
    (5, 8): (3, 2, 1, 0, 0, 0, 0, 0, 1),
    (5, 9): (3, 2, 1, 0, 0, 0, 0, 0, 0, 1),
    (5, 10): (3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 11): (2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (5, 12): (3, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 3, 0, 1),
    (7, 4): (5, 3, 1, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (7, 6): (5, 1, 3, 0, 0, 0, 1),
    (7, 7): (2, 6, 0, 0, 0, 0, 0, 1),
    (7, 8): (3, 1, 0, 0, 0, 0, 0, 0, 1),
    (7, 9): (2, 1, 1, 0, 0, 0, 0, 0, 0, 1),
    (7, 10): (5, 1, 5, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 11): (4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (7, 12): (3, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
}


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- dense polynomial helpers over F_p (lists, constant term first) ----------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    inv_lead = pow(f[-1], p - 2, p)
    while len(_ptrim(a)) >= len(f):
        c = a[-1] * inv_lead % p
        k = len(a) - len(f)
        for i, fc in enumerate(f):
            a[k + i] = (a[k + i] - c * fc) % p
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
    return _pmod(r, f, p)


def _ppowmod(a, e, f, p):
    r = [1]
    a = _pmod(a, f, p)
    while e:
        if e & 1:
            r = _pmulmod(r, a, f, p)
        a = _pmulmod(a, a, f, p)
        e >>= 1
    return r


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(modulus, p):
    """Rabin's test over F_p for a monic polynomial (constant term first)."""
    f = list(modulus)
    s = len(f) - 1
    if s < 1 or f[-1] % p != 1:
        return False
    if s == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(k):
        return _ppowmod(x, p ** k, f, p)

    diff = list(x_pow_p_pow(s))
    diff += [0] * max(0, 2 - len(diff))
    diff[1] = (diff[1] - 1) % p
    if _ptrim(diff):
        return False
    for r in _prime_factors(s):
        g = list(x_pow_p_pow(s // r))
        g += [0] * max(0, 2 - len(g))
        g[1] = (g[1] - 1) % p
        if len(_pgcd(f, g, p)) != 1:
            return False
    return True


class FieldDesc:
    """The field F_p[a]/(modulus).  Use :func:`GF` to obtain cached instances."""

    def __init__(self, p, s, modulus):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus {modulus} is not monic of degree {s}")
        if p ** s > MAX_FIELD_SIZE:
            raise FieldError(f"field of size {p}^{s} exceeds the size guard")
        if not is_irreducible_fp(modulus, p):
            raise FieldError(f"modulus {modulus} is not irreducible over F_{p}")
        self.p = p
        self.s = s
        self.q = p ** s
        self.modulus = modulus
        self._build_tables()
        self.log_minus_one = 0 if p == 2 else self.order // 2

    # -- construction ---------------------------------------------------------

    def _times_gen(self, digits, gen):
        p, s, f = self.p, self.s, self.modulus
        if s > 1 and gen[1] == 1 and not any(gen[:1] + gen[2:]):
            # multiplication by a: shift, then reduce the top digit
            top = digits[-1]
            r = [0] + list(digits[:-1])
            if top:
                r = [(x - top * c) % p for x, c in zip(r, f)]
            return r
        r = [0] * (2 * s)
        for i, x in enumerate(digits):
            if x:
                for j, y in enumerate(gen):
                    if y:
                        r[i + j] = (r[i + j] + x * y) % p
        for k in range(2 * s - 1, s - 1, -1):
            c = r[k]
            if c:
                for i in range(s + 1):
                    r[k - s + i] = (r[k - s + i] - c * f[i]) % p
        return r[:s]

    def _code(self, digits):
        c = 0
        for d in reversed(digits):
            c = c * self.p + d
        return c

    def _build_tables(self):
        p, s, q = self.p, self.s, self.q
        n = q - 1
        for g in [p] + [c for c in range(1, q) if c != p] if s > 1 else range(1, q):
            gen = self.digits(g)
            exp = [0] * n
            log = [-1] * q
            cur = [1] + [0] * (s - 1)
            ok = True
            for i in range(n):
                c = self._code(cur)
                if log[c] != -1:
                    ok = False
                    break
                exp[i] = c
                log[c] = i
                cur = self._times_gen(cur, gen)
            if ok:
                break
        self.generator = g
        self.order = n
        self._exp = exp + exp
        self._log = log
        if p == 2:
            self._zech = None
        else:
            zech = [0] * n
            for i in range(n):
                c = exp[i]
                d0 = c % p
                c1 = c - d0 + (d0 + 1) % p
                zech[i] = log[c1] if c1 else -1
            self._zech = zech
        # the trace is F_p-linear: tabulate it on the power basis first
        basis_tr = []
        for i in range(s):
            x = acc = p ** i
            for _ in range(s - 1):
                x = self.pow(x, p)
                acc = self.add(acc, x)
            basis_tr.append(acc)
        tr = [0] * q
        for c in range(1, q):
            tr[c] = sum(d * t for d, t in zip(self.digits(c), basis_tr)) % p
        self._trace_fp = tr

    # -- code-level arithmetic ----------------------------------------------

    def digits(self, c):
        out = []
        for _ in range(self.s):
            out.append(c % self.p)
            c //= self.p
        return out

    def from_digits(self, digits):
        digits = [int(d) % self.p for d in digits]
        if len(digits) > self.s:
            raise FieldError("too many coefficients for this field")
        return self._code(digits + [0] * (self.s - len(digits)))

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        la = self._log[a]
        d = self._log[b] - la
        if d < 0:
            d += self.order
        z = self._zech[d]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a):
        if self.p == 2 or not a:
            return a
        return self._exp[self._log[a] + self.log_minus_one]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in finite field")
        la = self._log[a]
        return self._exp[(self.order - la) % self.order]

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero in finite field")
        if not a:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self.order]

    def pow(self, a, e):
        if e == 0:
            return 1
        if not a:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % self.order]

    def from_int(self, n):
        return int(n) % self.p

    def frob(self, a, i=1):
        return self.pow(a, pow(self.p, i % self.s, self.order) if self.order > 1 else 1)

    def pth_root(self, a):
        return self.frob(a, self.s - 1)

    def trace_fp(self, a):
        return self._trace_fp[a]

    def elements(self):
        return range(self.q)

    # -- misc -----------------------------------------------------------------

    def __call__(self, value):
        """Build a FieldElt from an int (prime-field value) or digit sequence."""
        if isinstance(value, FieldElt):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElt(self, self.from_int(value))
        return FieldElt(self, self.from_digits(value))

    def elt(self, code):
        return FieldElt(self, code)

    @property
    def gen(self):
        """The modulus root ``a`` as an element."""
        return FieldElt(self, self.p if self.s > 1 else (-self.modulus[0]) % self.p)

    def render(self, c):
        if self.s == 1:
            return str(c)
        terms = []
        for i, d in enumerate(self.digits(c)):
            if not d:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        return "+".join(reversed(terms)) if terms else "0"

    def __repr__(self):
        return f"GF({self.p}^{self.s})"

    def __reduce__(self):
        return (GF, (self.p, self.s, self.modulus))


_FIELD_CACHE = {}
_EMBED_CACHE = {}
_LOCK = threading.Lock()


def GF(p, s=1, modulus=None):
    """Cached field constructor; ``modulus`` defaults to the shipped table."""
    if modulus is None:
        if (p, s) in DEFAULT_MODULI:
            modulus = DEFAULT_MODULI[(p, s)]
        else:
            modulus = _search_primitive(p, s)
    key = (p, s, tuple(int(c) % p for c in modulus))
    with _LOCK:
        F = _FIELD_CACHE.get(key)
        if F is None:
            F = FieldDesc(p, s, key[2])
            _FIELD_CACHE[key] = F
    return F


def _is_primitive(f, p):
    """True when x generates the multiplicative group of F_p[x]/(f)."""
    if not is_irreducible_fp(f, p):
        return False
    n = p ** (len(f) - 1) - 1
    return all(_ptrim(list(_ppowmod([0, 1], n // r, list(f), p))) != [1]
               for r in _prime_factors(n))


_SEARCHED_MODULI = {}


def _search_primitive(p, s):
    if p ** s > MAX_FIELD_SIZE:
        raise FieldError(f"field of size {p}^{s} exceeds the size guard")
    if (p, s) in _SEARCHED_MODULI:
        return _SEARCHED_MODULI[(p, s)]
    code = 1
    while True:
        c = [(code // p ** i) % p for i in range(s)]
        code += 1
        if c[0] == 0:
            continue
        f = tuple(c) + (1,)
        if _is_primitive(f, p):
            _SEARCHED_MODULI[(p, s)] = f
            return f


def prime_field(p):
    return GF(p, 1)


def extension(F, d):
    """The degree-d extension of F (as a field over F_p) and the embedding F -> E."""
    E = GF(F.p, F.s * d)
    return E, embedding(F, E)


def embedding(F, E):
    """Table mapping codes of F to codes of E, a field homomorphism.

    The image of the generator is the smallest-code root of F's modulus in E.
    """
    if F is E:
        return list(range(F.q))
    if F.p != E.p or E.s % F.s:
        raise FieldError(f"{F!r} is not a subfield of {E!r}")
    key = (F, E)
    with _LOCK:
        table = _EMBED_CACHE.get(key)
    if table is not None:
        return table
    if F.s == 1:
        table = list(range(F.q))
    else:
        root = None
        for r in range(E.q):
            acc = 0
            for c in reversed(F.modulus):
                acc = E.add(E.mul(acc, r), c)
            if acc == 0:
                root = r
                break
        if root is None:
            raise FieldError(f"no root of {F!r} modulus inside {E!r}")
        powers = [1]
        for _ in range(F.s - 1):
            powers.append(E.mul(powers[-1], root))
        table = []
        for c in range(F.q):
            acc = 0
            for d, pw in zip(F.digits(c), powers):
                if d:
                    acc = E.add(acc, E.mul(d, pw))
            table.append(acc)
    with _LOCK:
        _EMBED_CACHE[key] = table
    return table


def restriction(F, E):
    """Inverse of :func:`embedding` as a dict on the image."""
    return {c: i for i, c in enumerate(embedding(F, E))}


class FieldElt:
    """Immutable element of a :class:`FieldDesc`."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    @property
    def coeffs(self):
        return tuple(self.field.digits(self.code))

    def _other(self, other):
        if isinstance(other, FieldElt):
            if other.field is not self.field:
                raise FieldError("mismatched fields")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.field, self.field.div(o, self.code))

    def __neg__(self):
        return FieldElt(self.field, self.field.neg(self.code))

    def __pow__(self, e):
        return FieldElt(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElt):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FieldElt({self.field.render(self.code)} in {self.field!r})"

    def __str__(self):
        return self.field.render(self.code)


def field_arith(a, b, kind):
    if a.field is not b.field:
        raise FieldError("mismatched fields")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


def trace(a, target):
    """Relative trace of ``a`` down to the subfield ``target``."""
    F = a.field
    if F.p != target.p or F.s % target.s:
        raise FieldError(f"{target!r} is not a subfield of {F!r}")
    k = F.s // target.s
    acc, x = 0, a.code
    for _ in range(k):
        acc = F.add(acc, x)
        x = F.pow(x, target.q)
    back = restriction(target, F)
    return FieldElt(target, back[acc])


def pth_root(a):
    return FieldElt(a.field, a.field.pth_root(a.code))


def frobenius(a, i=1):
    return FieldElt(a.field, a.field.frob(a.code, i))


def enumerate_field(field):
    if field.q > MAX_FIELD_SIZE:
        raise FieldError("field too large to enumerate")
    return [FieldElt(field, c) for c in range(field.q)]
