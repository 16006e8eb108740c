"""Graded pieces of the face ring of a fan.

The face ring is the polynomial ring on one generator per ray, modulo all
monomials whose support (the set of rays with positive exponent) is not a
cone of the fan.  Monomials of non-cone support are simply never created;
elements are dicts {SRMonomial: int}.

A monomial of polynomial degree p sits in cohomological degree 2p; the
factor of 2 is applied only at complex-assembly time, never here.
"""

from __future__ import annotations

from itertools import combinations

from .fans import Fan


class SRMonomial:
    """Monomial in the ray generators with all exponents positive."""

    __slots__ = ("exps",)

    def __init__(self, exps):
        if isinstance(exps, dict):
            items = sorted((int(r), int(e)) for r, e in exps.items() if e)
        else:
            items = sorted((int(r), int(e)) for r, e in exps if e)
        if any(e < 0 for _, e in items):
            raise ValueError("negative exponent in monomial")
        self.exps = tuple(items)

    @classmethod
    def one(cls):
        return cls(())

    @property
    def degree(self):
        return sum(e for _, e in self.exps)

    @property
    def support(self):
        return tuple(r for r, _ in self.exps)

    def exponent_vector(self, n_rays):
        vec = [0] * n_rays
        for r, e in self.exps:
            vec[r] = e
        return tuple(vec)

    def __eq__(self, other):
        return isinstance(other, SRMonomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        if not self.exps:
            return "SRMonomial(1)"
        body = "*".join(f"u{r}^{e}" if e > 1 else f"u{r}" for r, e in self.exps)
        return f"SRMonomial({body})"


def monomial_product(fan: Fan, a: SRMonomial, b: SRMonomial):
    """Product of two monomials, or None when the support is not a cone."""
    exps = dict(a.exps)
    for r, e in b.exps:
        exps[r] = exps.get(r, 0) + e
    support = tuple(sorted(exps))
    if support not in fan:
        return None
    return SRMonomial(exps)


def sr_basis(fan: Fan, p: int):
    """All degree-p monomials supported on cones, enumerated by support.

    Deterministic order: ascending lexicographic on full exponent vectors.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    if p == 0:
        return [SRMonomial.one()]
    n = len(fan.rays)
    monomials = []
    for cone in fan.cones:
        k = len(cone)
        if k == 0 or k > p:
            continue
        # compositions of p into k positive parts, one per supporting ray
        for cut in combinations(range(1, p), k - 1):
            bounds = (0,) + cut + (p,)
            exps = [(cone[i], bounds[i + 1] - bounds[i]) for i in range(k)]
            monomials.append(SRMonomial(exps))
    monomials.sort(key=lambda m: m.exponent_vector(n))
    return monomials


def sr_multiply(fan: Fan, a: dict, b: dict) -> dict:
    """Product of two face-ring elements (dicts {SRMonomial: coeff})."""
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = monomial_product(fan, ma, mb)
            if m is None:
                continue
            c = out.get(m, 0) + ca * cb
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def linear_form_image(fan: Fan, i: int) -> dict:
    """Image in the face ring of the i-th dual-basis linear form.

    The form with value 1 on e_i maps to the sum over rays of the ray's i-th
    coordinate times that ray's degree-one generator.
    """
    if not 0 <= i < fan.rank:
        raise ValueError(f"basis index {i} out of range for rank {fan.rank}")
    out = {}
    for rho, ray in enumerate(fan.rays):
        c = ray[i]
        if c:
            out[SRMonomial(((rho, 1),))] = c
    return out
