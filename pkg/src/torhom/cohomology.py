"""Integral cohomology of the toric variety of a regular fan.

Two chain models are implemented.  The full model is the tensor product of
the exterior algebra on the dual lattice with the face ring; a basis element
is a pair (S, m) of a dual index tuple and a face-ring monomial, and the
differential contracts one dual index against multiplication by the matching
degree-one face-ring element.  The small model keeps, for every cone, only
the forms vanishing on that cone tensored with the cone's squarefree
monomial; its differential contracts by the additional ray of each coface.
The small model is finite (rank sum over cones of 2^(r - dim)) and is the
default computation engine; the truncated full model serves as an
independent oracle and carries the ring structure.

Grading: an element with form degree q and monomial degree p sits in total
degree t = 2p + q, and every differential raises t by exactly one.  The
small model lives in degrees 0..2r.

For fans whose rays are distinct positive coordinate vectors (coordinate
subspace arrangement complements) the full model splits into finitely many
strands indexed by a multidegree over the rays plus a frozen set of
non-ray dual indices; homology is computed strand by strand, which keeps
the truncated full model tractable at every size this package targets.
"""

from __future__ import annotations

from itertools import combinations

from .complexes import GradedComplex
from .exterior import contract_by
from .fans import Fan, classify
from .intlinalg import HomologyGroup, IntMatrix, snf, solve_columns
from .stanley_reisner import (
    SRMonomial,
    linear_form_image,
    monomial_product,
    sr_basis,
)


class NotP1RSubfan(ValueError):
    """Cup product requested outside the proven (P^1)^r-subfan case."""


class DegreeOverflow(ValueError):
    """Requested product degree exceeds twice the rank."""


# -- full complex ---------------------------------------------------------------


def _linear_images(fan: Fan):
    return [sorted(linear_form_image(fan, i).items(), key=lambda kv: kv[0].exps)
            for i in range(fan.rank)]


def _full_column(fan: Fan, images, S, mono):
    """Differential image of the basis element (S, mono), as a sparse dict."""
    out = {}
    for pos, i in enumerate(S):
        sign = -1 if pos & 1 else 1
        rest = S[:pos] + S[pos + 1 :]
        for gen, coeff in images[i]:
            m = monomial_product(fan, mono, gen)
            if m is None:
                continue
            key = (rest, m)
            val = out.get(key, 0) + sign * coeff
            if val:
                out[key] = val
            else:
                del out[key]
    return out


def build_full_complex(fan: Fan, t_max=None) -> GradedComplex:
    """Truncated full model with basis in all total degrees <= t_max + 1."""
    fan.require_valid()
    r = fan.rank
    if t_max is None:
        t_max = 2 * r
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    images = _linear_images(fan)
    bases = {}
    monomials = {p: sr_basis(fan, p) for p in range((t_max + 1) // 2 + 1)}
    for t in range(t_max + 2):
        labels = []
        for p in range(t // 2 + 1):
            q = t - 2 * p
            if q > r:
                continue
            for m in monomials[p]:
                for S in combinations(range(r), q):
                    labels.append((S, m))
        bases[t] = labels
    columns = {}
    for t in range(t_max + 2):
        if t + 1 <= t_max + 1:
            columns[t] = [_full_column(fan, images, S, m) for (S, m) in bases[t]]
        else:
            columns[t] = [{} for _ in bases[t]]
    return GradedComplex(bases, columns)


def full_product_chain(fan: Fan, chain1: dict, chain2: dict) -> dict:
    """Chain-level product (S,m)*(S',m') = (S merge S', mm') in the full model."""
    from .exterior import merge_sign

    out = {}
    for (s1, m1), c1 in chain1.items():
        for (s2, m2), c2 in chain2.items():
            merged = merge_sign(s1, s2)
            if merged is None:
                continue
            key_s, sign = merged
            m = monomial_product(fan, m1, m2)
            if m is None:
                continue
            key = (key_s, m)
            val = out.get(key, 0) + sign * c1 * c2
            if val:
                out[key] = val
            else:
                del out[key]
    return out


def chain_total_degree(chain: dict):
    degs = {len(s) + 2 * m.degree for (s, m) in chain}
    if len(degs) != 1:
        raise ValueError("chain is not homogeneous")
    return degs.pop()


# -- small complex ---------------------------------------------------------------


def _small_column(fan: Fan, cone, S):
    """Differential image of (cone, S) in the small model.

    Contract the adapted dual-basis wedge by the additional ray of each
    coface, then re-express in the coface's adapted coordinates.  The
    re-expression is exact; a residual outside the coface's dual subalgebra
    would contradict the model and raises AssertionError.
    """
    ctx = fan.quotient_context(cone)
    form = ctx.dual_form(S)
    out = {}
    for tau, rho in fan.cofaces(cone):
        g = contract_by(fan.rays[rho], form)
        if g.is_zero():
            continue
        tctx = fan.quotient_context(tau)
        for subset, coeff in tctx.form_quotient_coords(g).items():
            key = (tau, subset)
            val = out.get(key, 0) + coeff
            if val:
                out[key] = val
            else:
                del out[key]
    return out


def build_small_complex(fan: Fan) -> GradedComplex:
    """Finite model: for each cone, forms vanishing on it at degree 2 dim + q."""
    fan.require_valid()
    r = fan.rank
    bases = {t: [] for t in range(2 * r + 2)}
    for cone in fan.cones:
        k = len(cone)
        q_max = r - k
        for q in range(q_max + 1):
            for S in combinations(range(q_max), q):
                bases[2 * k + q].append((cone, S))
    for t in bases:
        bases[t].sort(key=lambda cs: (len(cs[0]), cs[0], cs[1]))
    columns = {t: [_small_column(fan, cone, S) for (cone, S) in bases[t]] for t in bases}
    return GradedComplex(bases, columns)


def small_contraction_column(fan: Fan, i, label):
    """Chain-level contraction by e_i on a small-model basis element."""
    cone, S = label
    ctx = fan.quotient_context(cone)
    k = len(cone)
    out = {}
    for pos, s in enumerate(S):
        c = ctx.basis_inv.at(k + s, i)
        if not c:
            continue
        sign = -1 if pos & 1 else 1
        key = (cone, S[:pos] + S[pos + 1 :])
        val = out.get(key, 0) + sign * c
        if val:
            out[key] = val
        else:
            del out[key]
    return out


def include_small_chain(fan: Fan, chain: dict) -> dict:
    """Image of a small-model chain under the inclusion into the full model."""
    out = {}
    for (cone, S), coeff in chain.items():
        ctx = fan.quotient_context(cone)
        mono = SRMonomial(tuple((rho, 1) for rho in cone))
        for key_s, c in ctx.dual_form(S).coords.items():
            key = (key_s, mono)
            val = out.get(key, 0) + coeff * c
            if val:
                out[key] = val
            else:
                del out[key]
    return out


# -- full-model homology engines --------------------------------------------------


class DenseFullEngine:
    """Full-model homology straight from the truncated dense complex."""

    def __init__(self, fan: Fan, t_max):
        self.fan = fan
        self.t_max = t_max
        self.complex = build_full_complex(fan, t_max)

    def group(self, t, modulus=None) -> HomologyGroup:
        if t > self.t_max or self.complex.rank(t) == 0:
            return HomologyGroup(0)
        return self.complex.homology(t, modulus)

    def generator_orders(self, t):
        if t > self.t_max or self.complex.rank(t) == 0:
            return []
        pair = self.complex.pair(t)
        return [0] * pair.group.free_rank + list(pair.torsion_orders)

    def coords_of_cycle(self, t, chain: dict):
        if t > self.t_max or self.complex.rank(t) == 0:
            if chain:
                raise ValueError("nonzero chain in a zero degree")
            return []
        pair = self.complex.pair(t)
        free, tors = pair.coordinates(self.complex.chain_to_vector(t, chain))
        return list(free) + list(tors)


class _Strand:
    """One multidegree strand of the full model of an arrangement fan."""

    __slots__ = ("basis", "complex")

    def __init__(self, fan, images, labels_by_t):
        self.basis = labels_by_t
        columns = {}
        for t, labels in labels_by_t.items():
            cols = []
            for (S, m) in labels:
                cols.append(_full_column(fan, images, S, m))
            columns[t] = cols
        self.complex = GradedComplex(labels_by_t, columns)


class ArrangementFullEngine:
    """Strand-decomposed full-model homology for arrangement complements.

    The differential preserves the multidegree over the rays together with
    the set of dual indices not matched to any ray, so the full model is the
    direct sum of small strands; groups and class coordinates are assembled
    strand by strand in a fixed order.  Strand membership of every
    differential image is asserted during construction.
    """

    def __init__(self, fan: Fan, t_max):
        fan.require_valid()
        flags = classify(fan)
        if not flags.arrangement_complement:
            raise ValueError("strand engine needs an arrangement-complement fan")
        self.fan = fan
        self.t_max = t_max
        self.images = _linear_images(fan)
        self.n = len(fan.rays)
        self.axis_of_ray = []
        for ray in fan.rays:
            self.axis_of_ray.append(next(i for i, c in enumerate(ray) if c))
        self.ray_of_axis = {a: i for i, a in enumerate(self.axis_of_ray)}
        self.free_axes = [i for i in range(fan.rank) if i not in self.ray_of_axis]
        self._strands = {}
        self._by_degree = {t: [] for t in range(t_max + 2)}
        self._enumerate_strands()

    def strand_key(self, label):
        S, mono = label
        b = list(mono.exponent_vector(self.n))
        sfree = []
        for coord in S:
            rho = self.ray_of_axis.get(coord)
            if rho is None:
                sfree.append(coord)
            else:
                b[rho] += 1
        return tuple(b), tuple(sfree)

    def _strand_labels(self, key):
        b, sfree = key
        support = tuple(i for i, x in enumerate(b) if x)
        labels_by_t = {}
        for size in range(len(support) + 1):
            for A in combinations(support, size):
                exps = list(b)
                for rho in A:
                    exps[rho] -= 1
                mono_support = tuple(i for i, x in enumerate(exps) if x)
                if mono_support not in self.fan:
                    continue
                mono = SRMonomial(tuple((i, x) for i, x in enumerate(exps) if x))
                S = tuple(sorted([self.axis_of_ray[rho] for rho in A] + list(sfree)))
                t = 2 * mono.degree + len(S)
                if t <= self.t_max + 1:
                    labels_by_t.setdefault(t, []).append((S, mono))
        for labels in labels_by_t.values():
            labels.sort(key=lambda sm: (sm[0], sm[1].exps))
        return labels_by_t

    def _enumerate_strands(self):
        budget = self.t_max + 1
        sfree_sets = []
        for size in range(len(self.free_axes) + 1):
            sfree_sets.extend(combinations(self.free_axes, size))

        def multidegrees(prefix, remaining, idx):
            if idx == self.n:
                yield tuple(prefix)
                return
            for v in range(remaining + 1):
                prefix.append(v)
                yield from multidegrees(prefix, remaining - v, idx + 1)
                prefix.pop()

        for sfree in sfree_sets:
            cap = budget - len(sfree)
            if cap < 0:
                continue
            for b in multidegrees([], cap, 0):
                core = tuple(i for i, x in enumerate(b) if x >= 2)
                if core not in self.fan:
                    continue
                key = (b, sfree)
                labels_by_t = self._strand_labels(key)
                if not labels_by_t:
                    continue
                strand = _Strand(self.fan, self.images, labels_by_t)
                for t, cols in strand.complex.columns.items():
                    for col in cols:
                        for target in col:
                            if self.strand_key(target) != key:
                                raise AssertionError("differential left its strand")
                self._strands[key] = strand
                for t in labels_by_t:
                    self._by_degree[t].append(key)
        for t in self._by_degree:
            self._by_degree[t].sort()

    def strands_at(self, t):
        return self._by_degree.get(t, [])

    def group(self, t, modulus=None) -> HomologyGroup:
        groups = []
        for key in self.strands_at(t):
            groups.append(self._strands[key].complex.homology(t, modulus))
        return HomologyGroup.direct_sum(groups) if groups else HomologyGroup(0)

    def generator_orders(self, t):
        orders = []
        for key in self.strands_at(t):
            pair = self._strands[key].complex.pair(t)
            orders.extend([0] * pair.group.free_rank + list(pair.torsion_orders))
        return orders

    def coords_of_cycle(self, t, chain: dict):
        buckets = {}
        for label, coeff in chain.items():
            buckets.setdefault(self.strand_key(label), {})[label] = coeff
        coords = []
        for key in self.strands_at(t):
            strand = self._strands[key]
            pair = strand.complex.pair(t)
            part = buckets.pop(key, None)
            if part is None:
                coords.extend([0] * len(pair.generators))
            else:
                free, tors = pair.coordinates(strand.complex.chain_to_vector(t, part))
                coords.extend(list(free) + list(tors))
        if buckets:
            raise AssertionError("cycle touches a strand outside the enumeration")
        return coords


def full_engine(fan: Fan, t_max):
    """Pick the strand engine when available, the dense one otherwise."""
    if classify(fan).arrangement_complement:
        return ArrangementFullEngine(fan, t_max)
    return DenseFullEngine(fan, t_max)


# -- cohomology table and class arithmetic ----------------------------------------


class CohomologyClass:
    """Class coordinates in the recorded homology basis of one degree.

    ``free`` lists coordinates on the free generators, ``torsion`` on the
    torsion generators (reduced modulo their orders).
    """

    __slots__ = ("degree", "free", "torsion")

    def __init__(self, degree, free=(), torsion=()):
        self.degree = degree
        self.free = tuple(int(c) for c in free)
        self.torsion = tuple(int(c) for c in torsion)

    def is_zero(self):
        return not any(self.free) and not any(self.torsion)

    def __eq__(self, other):
        return (
            isinstance(other, CohomologyClass)
            and self.degree == other.degree
            and self.free == other.free
            and self.torsion == other.torsion
        )

    def __hash__(self):
        return hash((self.degree, self.free, self.torsion))

    def __repr__(self):
        return f"CohomologyClass(degree={self.degree}, free={self.free}, torsion={self.torsion})"


class CohomologyTable:
    """Cohomology of a fan with deterministic generators and products.

    Groups come from the small model.  Products are computed in the full
    model: small-model representatives are pushed through the inclusion,
    multiplied, and the resulting class is pulled back along the inclusion
    isomorphism.
    """

    def __init__(self, fan: Fan):
        fan.require_valid()
        self.fan = fan
        self.r = fan.rank
        self.complex = build_small_complex(fan)
        self._engine = None
        self._inclusion_matrices = {}

    # -- groups and classes -----------------------------------------------------

    def group(self, t, modulus=None) -> HomologyGroup:
        if t < 0 or t > 2 * self.r or self.complex.rank(t) == 0:
            return HomologyGroup(0)
        return self.complex.homology(t, modulus)

    def table(self, modulus=None):
        return {t: self.group(t, modulus) for t in range(2 * self.r + 1)}

    def pair(self, t):
        return self.complex.pair(t)

    def generators(self, t):
        """Generator chains {label: coeff} in the small model, free then torsion."""
        if self.group(t).is_trivial() and self.complex.rank(t) == 0:
            return []
        pair = self.pair(t)
        return [self.complex.vector_to_chain(t, g) for g in pair.generators]

    def zero_class(self, t):
        g = self.group(t)
        return CohomologyClass(t, (0,) * g.free_rank, (0,) * len(g.torsion))

    def basis_classes(self, t):
        g = self.group(t)
        out = []
        for i in range(g.free_rank):
            free = [0] * g.free_rank
            free[i] = 1
            out.append(CohomologyClass(t, free, (0,) * len(g.torsion)))
        for i in range(len(g.torsion)):
            tors = [0] * len(g.torsion)
            tors[i] = 1
            out.append(CohomologyClass(t, (0,) * g.free_rank, tors))
        return out

    def class_of_chain(self, t, chain: dict) -> CohomologyClass:
        if t > 2 * self.r or self.complex.rank(t) == 0:
            if chain:
                raise ValueError("nonzero chain in a zero degree")
            return self.zero_class(t)
        free, tors = self.pair(t).coordinates(self.complex.chain_to_vector(t, chain))
        return CohomologyClass(t, free, tors)

    def chain_of_class(self, c: CohomologyClass) -> dict:
        if c.degree > 2 * self.r or self.complex.rank(c.degree) == 0:
            return {}
        vec = self.pair(c.degree).chain_of_class(c.free, c.torsion)
        return self.complex.vector_to_chain(c.degree, vec)

    # -- module structure ---------------------------------------------------------

    def lambda_action(self, i, c: CohomologyClass) -> CohomologyClass:
        """Action of the i-th lattice basis vector: chain-level contraction."""
        chain = self.chain_of_class(c)
        out = {}
        for label, coeff in chain.items():
            for key, val in small_contraction_column(self.fan, i, label).items():
                acc = out.get(key, 0) + coeff * val
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return self.class_of_chain(c.degree - 1, out)

    # -- ring structure -------------------------------------------------------------

    def engine(self):
        if self._engine is None:
            self._engine = full_engine(self.fan, 2 * self.r)
        return self._engine

    def _inclusion_data(self, t):
        data = self._inclusion_matrices.get(t)
        if data is None:
            engine = self.engine()
            orders_full = engine.generator_orders(t)
            cols = []
            for gen in self.generators(t):
                cols.append(engine.coords_of_cycle(t, include_small_chain(self.fan, gen)))
            data = (cols, orders_full)
            self._inclusion_matrices[t] = data
        return data

    def _class_from_full_coords(self, t, coords):
        cols, orders_full = self._inclusion_data(t)
        g_full = len(orders_full)
        g_small = len(cols)
        if g_full == 0:
            return self.zero_class(t)
        rel_cols = []
        for pos, d in enumerate(orders_full):
            if d > 0:
                col = [0] * g_full
                col[pos] = d
                rel_cols.append(col)
        system = IntMatrix.from_columns(cols + rel_cols, g_full)
        rhs = IntMatrix.from_columns([list(coords)], g_full)
        sol = solve_columns(system, rhs)
        if sol is None:
            raise AssertionError("full-model class not in the image of the inclusion")
        x = sol.column(0)[:g_small]
        group = self.group(t)
        free = x[: group.free_rank]
        tors = [
            c % d for c, d in zip(x[group.free_rank :], group.torsion)
        ]
        return CohomologyClass(t, free, tors)

    def cup(self, c1: CohomologyClass, c2: CohomologyClass, conjecture_mode=False):
        """Cup product of two classes.

        Proven for subfans of the (P^1)^r fan; anywhere else the canonical
        chain-level product is only conjectural and must be requested
        explicitly with ``conjecture_mode`` (results labelled UNVERIFIED by
        the CLI).
        """
        if not conjecture_mode and not classify(self.fan).p1r_subfan:
            raise NotP1RSubfan(
                "cup product proven only for subfans of the (P^1)^r fan; "
                "pass conjecture_mode to compute the conjectural product"
            )
        t = c1.degree + c2.degree
        if t > 2 * self.r:
            return self.zero_class(t)
        z1 = include_small_chain(self.fan, self.chain_of_class(c1))
        z2 = include_small_chain(self.fan, self.chain_of_class(c2))
        product = full_product_chain(self.fan, z1, z2)
        coords = self.engine().coords_of_cycle(t, product)
        return self._class_from_full_coords(t, coords)


# -- public operations --------------------------------------------------------------


def cohomology(fan: Fan, modulus=None, engine="small"):
    """Degreewise cohomology table for degrees 0..2r.

    ``engine='small'`` uses the finite model; ``engine='full'`` recomputes
    through the truncated full model (oracle pipeline).
    """
    fan.require_valid()
    r = fan.rank
    if engine == "small":
        return CohomologyTable(fan).table(modulus)
    if engine == "full":
        eng = full_engine(fan, 2 * r)
        return {t: eng.group(t, modulus) for t in range(2 * r + 1)}
    raise ValueError(f"unknown engine {engine!r}")


def lambda_action(fan: Fan, i, c: CohomologyClass) -> CohomologyClass:
    return CohomologyTable(fan).lambda_action(i, c)


def cup(fan: Fan, c1: CohomologyClass, c2: CohomologyClass, conjecture_mode=False):
    return CohomologyTable(fan).cup(c1, c2, conjecture_mode=conjecture_mode)


def quasi_iso_check(fan: Fan) -> bool:
    """Whether the inclusion of the small model is a quasi-isomorphism.

    Compares homology of the small model with the truncated full model in
    all degrees <= 2r and checks that the induced map on homology is an
    isomorphism (surjectivity between abstractly equal finitely generated
    groups suffices).
    """
    fan.require_valid()
    r = fan.rank
    table = CohomologyTable(fan)
    engine = full_engine(fan, 2 * r + 2)
    for t in range(2 * r + 1):
        small_group = table.group(t)
        full_group = engine.group(t)
        if small_group != full_group:
            return False
        orders_full = engine.generator_orders(t)
        cols = [
            engine.coords_of_cycle(t, include_small_chain(fan, gen))
            for gen in table.generators(t)
        ]
        if not _surjective(cols, orders_full):
            return False
    return True


def _surjective(columns, target_orders):
    """Does the span of the columns plus the relations cover Z^g?"""
    g = len(target_orders)
    if g == 0:
        return True
    rel_cols = []
    for pos, d in enumerate(target_orders):
        if d > 0:
            col = [0] * g
            col[pos] = d
            rel_cols.append(col)
    mat = IntMatrix.from_columns(list(columns) + rel_cols, g)
    inv = snf(mat).invariant_factors()
    return len(inv) == g and all(d == 1 for d in inv)
