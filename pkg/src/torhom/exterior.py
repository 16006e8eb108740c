"""Exterior algebras over a lattice and its dual.

Multivectors live in the exterior algebra on Z^r, forms in the algebra on
the dual.  Elements are sparse maps from strictly ascending index tuples to
integer coefficients; every sign in the package derives from the sorting
permutation of such tuples, so there is a single sign convention sitewide.

The contraction of a form by the i-th lattice basis vector deletes the dual
index i with sign (-1)^(k-1) where k is its 1-based position.  Evaluation
pairs equal index tuples to 1 (Kronecker), and the cap product is the unique
adjoint of the wedge: evaluate(b, cap(a, x)) == evaluate(wedge(b, a), x).
"""

from __future__ import annotations


class RankMismatch(ValueError):
    """Operands live over lattices of different rank."""


def merge_sign(s, t):
    """Merge two strictly ascending tuples; (merged, sign) or None on overlap."""
    out = []
    sign = 1
    i = j = 0
    while i < len(s) and j < len(t):
        a, b = s[i], t[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
            if (len(s) - i) & 1:
                sign = -sign
    out.extend(s[i:])
    out.extend(t[j:])
    return tuple(out), sign


class _Alternating:
    """Shared machinery for Form and Multivector."""

    __slots__ = ("rank", "coords")

    def __init__(self, rank, coords=None):
        self.rank = rank
        clean = {}
        if coords:
            for key, val in coords.items():
                key = tuple(key)
                if any(b <= a for a, b in zip(key, key[1:])):
                    raise ValueError(f"index tuple not strictly ascending: {key}")
                if key and (key[0] < 0 or key[-1] >= rank):
                    raise ValueError(f"index out of range for rank {rank}: {key}")
                val = int(val)
                if val:
                    clean[key] = val
        self.coords = clean

    # -- linear structure ---------------------------------------------------

    def _check(self, other):
        if type(self) is not type(other):
            raise TypeError("mixed Form/Multivector arithmetic")
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check(other)
        coords = dict(self.coords)
        for key, val in other.coords.items():
            coords[key] = coords.get(key, 0) + val
        return type(self)(self.rank, coords)

    def __sub__(self, other):
        self._check(other)
        coords = dict(self.coords)
        for key, val in other.coords.items():
            coords[key] = coords.get(key, 0) - val
        return type(self)(self.rank, coords)

    def __neg__(self):
        return type(self)(self.rank, {k: -v for k, v in self.coords.items()})

    def scale(self, c):
        c = int(c)
        return type(self)(self.rank, {k: c * v for k, v in self.coords.items()})

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.rank == other.rank
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((type(self).__name__, self.rank, tuple(sorted(self.coords.items()))))

    def __bool__(self):
        return bool(self.coords)

    def is_zero(self):
        return not self.coords

    def degrees(self):
        return sorted({len(k) for k in self.coords})

    def homogeneous_degree(self):
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("element is not homogeneous")
        return degs[0]

    def __repr__(self):
        kind = type(self).__name__
        if not self.coords:
            return f"{kind}(rank={self.rank}, 0)"
        terms = " ".join(f"{v}*e{list(k)}" for k, v in sorted(self.coords.items()))
        return f"{kind}(rank={self.rank}, {terms})"


class Multivector(_Alternating):
    """Element of the exterior algebra on the lattice Z^rank."""

    @classmethod
    def basis(cls, rank, key=()):
        return cls(rank, {tuple(key): 1})

    @classmethod
    def from_vector(cls, vec):
        return cls(len(vec), {(i,): c for i, c in enumerate(vec) if c})


class Form(_Alternating):
    """Element of the exterior algebra on the dual lattice."""

    @classmethod
    def basis(cls, rank, key=()):
        return cls(rank, {tuple(key): 1})

    @classmethod
    def unit(cls, rank):
        return cls(rank, {(): 1})


def wedge(a, b):
    """Exterior product; graded-commutative, associative, same kind in/out."""
    if type(a) is not type(b):
        raise TypeError("wedge needs two Forms or two Multivectors")
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    coords = {}
    for ka, va in a.coords.items():
        for kb, vb in b.coords.items():
            merged = merge_sign(ka, kb)
            if merged is None:
                continue
            key, sign = merged
            coords[key] = coords.get(key, 0) + sign * va * vb
    return type(a)(a.rank, coords)


def contract(i, form: Form) -> Form:
    """Contraction of a form by the i-th lattice basis vector."""
    if not 0 <= i < form.rank:
        raise ValueError(f"basis index {i} out of range for rank {form.rank}")
    coords = {}
    for key, val in form.coords.items():
        try:
            pos = key.index(i)
        except ValueError:
            continue
        sign = -1 if pos & 1 else 1
        newkey = key[:pos] + key[pos + 1 :]
        coords[newkey] = coords.get(newkey, 0) + sign * val
    return Form(form.rank, coords)


def contract_by(vector, form: Form) -> Form:
    """Contraction by an arbitrary lattice vector, by linearity."""
    if len(vector) != form.rank:
        raise RankMismatch(f"vector length {len(vector)} vs rank {form.rank}")
    coords = {}
    for key, val in form.coords.items():
        for pos, idx in enumerate(key):
            c = vector[idx]
            if not c:
                continue
            sign = -1 if pos & 1 else 1
            newkey = key[:pos] + key[pos + 1 :]
            coords[newkey] = coords.get(newkey, 0) + sign * c * val
    return Form(form.rank, coords)


def evaluate(form: Form, mv: Multivector) -> int:
    """Pairing of a form against a multivector; Kronecker on basis tuples."""
    if not isinstance(form, Form) or not isinstance(mv, Multivector):
        raise TypeError("evaluate takes (Form, Multivector)")
    if form.rank != mv.rank:
        raise RankMismatch(f"rank {form.rank} vs {mv.rank}")
    small, large = (form.coords, mv.coords)
    if len(large) < len(small):
        small, large = large, small
    return sum(val * large[key] for key, val in small.items() if key in large)


def cap(form: Form, mv: Multivector) -> Multivector:
    """Cap product: the adjoint of wedge on the form side.

    Defined by evaluate(b, cap(a, x)) == evaluate(wedge(b, a), x) for all b.
    """
    if not isinstance(form, Form) or not isinstance(mv, Multivector):
        raise TypeError("cap takes (Form, Multivector)")
    if form.rank != mv.rank:
        raise RankMismatch(f"rank {form.rank} vs {mv.rank}")
    coords = {}
    for ka, va in form.coords.items():
        sa = set(ka)
        for kb, vb in mv.coords.items():
            if not sa.issubset(kb):
                continue
            rest = tuple(x for x in kb if x not in sa)
            merged = merge_sign(rest, ka)
            if merged is None:
                continue
            _, sign = merged
            coords[rest] = coords.get(rest, 0) + sign * va * vb
    return Multivector(form.rank, coords)
