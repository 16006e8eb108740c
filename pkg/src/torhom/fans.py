"""Fans of regular cones: validation, faces, orientations, Cox fans.

A cone is stored as a strictly ascending tuple of indices into the fan's ray
table; the empty tuple is the zero cone.  Fans are built from maximal cones
and closed under faces.  Validation checks primitivity of rays, face
closure, regularity of every cone (its rays extend to a Z-basis) and, via
exact rational Fourier-Motzkin elimination, that any two cones meet exactly
in the cone on their shared rays.

Orientation conventions: the reference orientation of a cone is the wedge of
its rays in ascending ray-index order, and the ambient orientation is
e_1 ^ ... ^ e_r.  Per-cone sign flips are supported so downstream homology
can be checked to be independent of the choice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

from .exterior import Multivector, wedge
from .intlinalg import IntMatrix, NotUnimodular, basis_completion, snf
from .polyhedral import feasible


class FanFormatError(ValueError):
    """Malformed fan description (schema violation, duplicates, ...)."""


class InvalidFan(ValueError):
    """Operation requires a valid fan but validation found violations."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid fan: " + "; ".join(v.message for v in report.violations))


class ConeNotInFan(KeyError):
    pass


class NotAFacet(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations


@dataclass(frozen=True)
class FanClasses:
    complete: bool
    p1r_subfan: bool
    arrangement_complement: bool


@dataclass
class QuotientContext:
    """Adapted coordinates for one regular cone.

    ``basis`` is a unimodular matrix whose first k columns are the cone's
    rays in ascending ray-index order; the remaining columns induce a basis
    of the quotient lattice.  Forms vanishing on the cone's span are exactly
    those expressible in the dual-basis forms of the trailing columns.
    """

    cone: tuple
    rank: int
    basis: IntMatrix
    basis_inv: IntMatrix
    _dual_forms: dict = field(default_factory=dict)
    _wedges: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.cone)

    @property
    def quotient_rank(self):
        return self.rank - len(self.cone)

    def dual_form(self, subset):
        """Wedge of adapted dual-basis forms, as a Form in standard coordinates.

        ``subset`` is a strictly ascending tuple of quotient indices in
        range(quotient_rank), addressing the trailing dual-basis rows.
        """
        subset = tuple(subset)
        form = self._dual_forms.get(subset)
        if form is None:
            from .exterior import Form

            form = Form(self.rank, {(): 1})
            k = self.dim
            for s in subset:
                row = self.basis_inv.row(k + s)
                form = wedge(form, Form(self.rank, {(i,): c for i, c in enumerate(row) if c}))
            self._dual_forms[subset] = form
        return form

    def column_wedge(self, subset):
        """Wedge of the adapted basis columns addressed by quotient indices."""
        subset = tuple(subset)
        mv = self._wedges.get(subset)
        if mv is None:
            mv = Multivector(self.rank, {(): 1})
            k = self.dim
            for s in subset:
                col = self.basis.column(k + s)
                mv = wedge(mv, Multivector.from_vector(col))
            self._wedges[subset] = mv
        return mv

    def vector_quotient_coords(self, vec):
        """Coordinates of a lattice vector's class in the quotient basis."""
        full = self.basis_inv.mul_vector(list(vec))
        return full[self.dim :]

    def form_quotient_coords(self, form, check=True):
        """Express a form through the trailing dual-basis wedges.

        Returns {quotient subset: coefficient}.  With ``check`` the input is
        reconstructed and compared, so forms outside the span are rejected.
        """
        from .exterior import Form, evaluate

        if form.is_zero():
            return {}
        q = self.quotient_rank
        out = {}
        for deg in form.degrees():
            for subset in combinations(range(q), deg):
                c = evaluate(form, self.column_wedge(subset))
                if c:
                    out[subset] = c
        if check:
            recon = Form(self.rank, {})
            for subset, c in out.items():
                recon = recon + self.dual_form(subset).scale(c)
            if recon != form:
                raise AssertionError("form does not lie in the cone's dual subalgebra")
        return out

    @property
    def det(self):
        """Determinant of the adapted basis (always +1 or -1)."""
        return self.basis.det()


def _close_faces(max_cones):
    cones = set()
    for cone in max_cones:
        cone = tuple(cone)
        for size in range(len(cone) + 1):
            cones.update(combinations(cone, size))
    cones.add(())
    return tuple(sorted(cones, key=lambda c: (len(c), c)))


class Fan:
    """Rank, primitive ray table and a face-closed set of cones.

    Construction only checks shapes; semantic requirements (primitivity,
    regularity, proper intersections) live in :func:`validate`.
    """

    def __init__(self, rank, rays, max_cones, *, cones=None):
        rank = int(rank)
        if rank < 0:
            raise FanFormatError("rank must be nonnegative")
        self.rank = rank
        self.rays = tuple(tuple(int(c) for c in ray) for ray in rays)
        for ray in self.rays:
            if len(ray) != rank:
                raise FanFormatError("ray length does not match rank")
        seen = set()
        canon = []
        for cone in max_cones:
            cone = tuple(int(i) for i in cone)
            if any(i < 0 or i >= len(self.rays) for i in cone):
                raise FanFormatError("cone refers to a missing ray")
            if len(set(cone)) != len(cone) or tuple(sorted(cone)) != cone:
                raise FanFormatError("cone ray indices must be strictly ascending")
            if cone in seen:
                raise FanFormatError("duplicate cone in fan description")
            seen.add(cone)
            canon.append(cone)
        self._given_max_cones = tuple(canon)
        if cones is None:
            self.cones = _close_faces(canon)
        else:
            self.cones = tuple(sorted({tuple(c) for c in cones} | {()}, key=lambda c: (len(c), c)))
        self._cone_set = frozenset(self.cones)
        self._contexts = {}
        self._cofaces = None
        self._validation = None
        self._maximal = None

    # -- basic queries -------------------------------------------------------

    def __contains__(self, cone):
        return tuple(cone) in self._cone_set

    def cones_of_dim(self, k):
        return [c for c in self.cones if len(c) == k]

    @property
    def maximal_cones(self):
        if self._maximal is None:
            maximal = []
            for cone in self.cones:
                if not any(
                    set(cone) < set(other) for other in self.cones if len(other) > len(cone)
                ):
                    maximal.append(cone)
            self._maximal = maximal
        return self._maximal

    def ray_vector(self, i):
        return self.rays[i]

    def facets(self, cone):
        cone = tuple(cone)
        if cone not in self._cone_set:
            raise ConeNotInFan(cone)
        return [cone[:i] + cone[i + 1 :] for i in range(len(cone))]

    def cofaces(self, cone):
        """Cones having ``cone`` as a facet, with their additional ray index."""
        if self._cofaces is None:
            table = {c: [] for c in self.cones}
            for tau in self.cones:
                for i in range(len(tau)):
                    sigma = tau[:i] + tau[i + 1 :]
                    table[sigma].append((tau, tau[i]))
            self._cofaces = table
        cone = tuple(cone)
        if cone not in self._cone_set:
            raise ConeNotInFan(cone)
        return self._cofaces[cone]

    def quotient_context(self, cone):
        cone = tuple(cone)
        ctx = self._contexts.get(cone)
        if ctx is None:
            if cone not in self._cone_set:
                raise ConeNotInFan(cone)
            B = basis_completion([self.rays[i] for i in cone], self.rank)
            Bi = _unimodular_inverse(B)
            ctx = QuotientContext(cone, self.rank, B, Bi)
            self._contexts[cone] = ctx
        return ctx

    # -- validation ----------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._validation is None:
            self._validation = validate(self)
        return self._validation

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise InvalidFan(report)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self):
        return {
            "rank": self.rank,
            "rays": [list(ray) for ray in self.rays],
            "max_cones": [list(c) for c in sorted(self.maximal_cones, key=lambda c: (len(c), c))],
        }

    @classmethod
    def from_json_dict(cls, data):
        if not isinstance(data, dict):
            raise FanFormatError("fan file must contain a JSON object")
        extra = set(data) - {"rank", "rays", "max_cones"}
        if extra:
            raise FanFormatError(f"unknown keys in fan file: {sorted(extra)}")
        for key in ("rank", "rays", "max_cones"):
            if key not in data:
                raise FanFormatError(f"fan file missing key {key!r}")
        if not isinstance(data["rank"], int):
            raise FanFormatError("rank must be an integer")
        if not isinstance(data["rays"], list) or not all(
            isinstance(r, list) and all(isinstance(x, int) for x in r) for r in data["rays"]
        ):
            raise FanFormatError("rays must be a list of integer vectors")
        if not isinstance(data["max_cones"], list) or not all(
            isinstance(c, list) and all(isinstance(x, int) for x in c) for c in data["max_cones"]
        ):
            raise FanFormatError("max_cones must be a list of ray-index lists")
        return cls(data["rank"], data["rays"], data["max_cones"])


def _unimodular_inverse(M: IntMatrix) -> IntMatrix:
    dec = snf(M)
    diag = dec.diagonal()
    if any(d != 1 for d in diag) or M.rows != M.cols:
        raise ValueError("matrix is not unimodular")
    # M = u_inv @ D @ v_inv = u_inv @ v_inv, so M^-1 = V @ U.
    return dec.V.mul(dec.U)


def load_fan(path) -> Fan:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FanFormatError(f"invalid JSON: {exc}") from exc
    return Fan.from_json_dict(data)


def dump_fan(fan: Fan, path):
    text = json.dumps(fan.to_json_dict(), indent=2) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- validation ---------------------------------------------------------------


def _is_primitive(ray):
    g = 0
    for c in ray:
        g = gcd(g, abs(c))
    return g == 1


def _cones_overlap_badly(fan: Fan, c1, c2):
    """True when cone(c1) meets cone(c2) outside the cone on shared rays."""
    shared = set(c1) & set(c2)
    outside = [i for i in c1 if i not in shared] + [i for i in c2 if i not in shared]
    if not outside:
        return False
    nvars = len(c1) + len(c2)
    equalities = []
    for d in range(fan.rank):
        coeffs = [0] * nvars
        for pos, i in enumerate(c1):
            coeffs[pos] += fan.rays[i][d]
        for pos, i in enumerate(c2):
            coeffs[len(c1) + pos] -= fan.rays[i][d]
        equalities.append((coeffs, 0))
    # normalisation: the coefficients on non-shared rays sum to 1
    coeffs = [0] * nvars
    for pos, i in enumerate(c1):
        if i not in shared:
            coeffs[pos] += 1
    for pos, i in enumerate(c2):
        if i not in shared:
            coeffs[len(c1) + pos] += 1
    equalities.append((coeffs, -1))
    inequalities = []
    for j in range(nvars):
        coeffs = [0] * nvars
        coeffs[j] = 1
        inequalities.append((coeffs, 0, False))
    return feasible(equalities, inequalities, nvars)


def validate(fan: Fan) -> ValidationReport:
    """Full validation report: primitivity, closure, regularity, intersections."""
    violations = []
    for i, ray in enumerate(fan.rays):
        if not _is_primitive(ray):
            violations.append(Violation("non-primitive-ray", f"ray {i} not primitive"))
    for cone in fan.cones:
        for size in range(len(cone)):
            for face in combinations(cone, size):
                if face not in fan._cone_set:
                    violations.append(
                        Violation("missing-face", f"face {list(face)} of cone {list(cone)} missing")
                    )
    regular = set()
    for cone in fan.cones:
        if not cone:
            regular.add(cone)
            continue
        if any(not _is_primitive(fan.rays[i]) for i in cone):
            continue
        try:
            basis_completion([fan.rays[i] for i in cone], fan.rank)
            regular.add(cone)
        except NotUnimodular:
            violations.append(Violation("non-regular-cone", f"cone {list(cone)} not regular"))
    max_cones = fan.maximal_cones
    for a in range(len(max_cones)):
        if max_cones[a] not in regular:
            continue
        for b in range(a + 1, len(max_cones)):
            if max_cones[b] not in regular:
                continue
            if _cones_overlap_badly(fan, max_cones[a], max_cones[b]):
                violations.append(
                    Violation(
                        "bad-intersection",
                        f"cones {list(max_cones[a])} and {list(max_cones[b])} do not intersect in a common face",
                    )
                )
    # deduplicate, preserving first occurrence
    seen = set()
    unique = []
    for v in violations:
        if v not in seen:
            seen.add(v)
            unique.append(v)
    return ValidationReport(tuple(unique))


def facets(fan: Fan, cone):
    """All codimension-one faces of a cone of the fan."""
    return fan.facets(cone)


# -- orientations --------------------------------------------------------------


class OrientationData:
    """Chosen orientation of every cone, as signed ascending-ray wedges.

    The default choice orients each cone by its rays in ascending ray-index
    order; ``flips`` multiplies individual cones' orientations by -1.
    """

    def __init__(self, fan: Fan, flips=None):
        self.fan = fan
        self.signs = {cone: 1 for cone in fan.cones}
        if flips:
            for cone in flips:
                cone = tuple(cone)
                if cone not in fan._cone_set:
                    raise ConeNotInFan(cone)
                self.signs[cone] = -self.signs[cone]

    def omega_prime(self, cone) -> Multivector:
        """Wedge of the cone's rays (ascending), times the cone's sign."""
        cone = tuple(cone)
        mv = Multivector(self.fan.rank, {(): 1})
        for i in cone:
            mv = wedge(mv, Multivector.from_vector(self.fan.rays[i]))
        return mv.scale(self.signs[cone])

    def omega_quotient_coefficient(self, cone):
        """Coefficient of omega_sigma on the top quotient-basis wedge.

        omega_sigma is pinned down by omega'_sigma ^ omega_sigma = e_1^...^e_r;
        in the adapted basis it is det(basis) times the top wedge of the
        trailing columns, times the cone's sign.
        """
        ctx = self.fan.quotient_context(cone)
        return ctx.det * self.signs[tuple(cone)]

    def sign_between(self, sigma, tau):
        """The sign Or comparing a facet's orientation inside its coface.

        Defined by omega'_tau == Or * x_rho ^ omega'_sigma where rho is the
        additional ray; computed by comparing the two wedges exactly.
        """
        sigma = tuple(sigma)
        tau = tuple(tau)
        if sigma not in self.fan._cone_set or tau not in self.fan._cone_set:
            raise ConeNotInFan((sigma, tau))
        extra = set(tau) - set(sigma)
        if len(extra) != 1 or not set(sigma) < set(tau):
            raise NotAFacet(f"{sigma} is not a facet of {tau}")
        rho = extra.pop()
        w_tau = self.omega_prime(tau)
        w_cmp = wedge(Multivector.from_vector(self.fan.rays[rho]), self.omega_prime(sigma))
        if w_tau == w_cmp:
            return 1
        if w_tau == w_cmp.scale(-1):
            return -1
        raise AssertionError("orientation wedges are not proportional")


def orientation_sign(fan: Fan, sigma, tau, orientation: OrientationData | None = None):
    """Sign comparing the orientation of facet ``sigma`` inside ``tau``."""
    data = orientation if orientation is not None else OrientationData(fan)
    return data.sign_between(sigma, tau)


# -- classification and Cox fans ------------------------------------------------


def _axis_of(ray):
    """(index, sign) if the ray is +/- a standard basis vector, else None."""
    nz = [(i, c) for i, c in enumerate(ray) if c]
    if len(nz) != 1 or abs(nz[0][1]) != 1:
        return None
    return nz[0]


def classify(fan: Fan) -> FanClasses:
    """Structural flags: completeness, (P^1)^r-subfan, arrangement complement."""
    fan.require_valid()
    axes = [_axis_of(ray) for ray in fan.rays]
    p1r = all(a is not None for a in axes)
    if p1r:
        for cone in fan.cones:
            coords = [axes[i][0] for i in cone]
            if len(set(coords)) != len(coords):
                p1r = False
                break
    arrangement = all(a is not None and a[1] == 1 for a in axes)
    r = fan.rank
    if r == 0:
        complete = True
    else:
        max_cones = fan.maximal_cones
        complete = bool(max_cones) and all(len(c) == r for c in max_cones)
        if complete and not fan.cones_of_dim(r):
            complete = False
        if complete:
            top = fan.cones_of_dim(r)
            top_sets = [set(c) for c in top]
            for wall in fan.cones_of_dim(r - 1):
                wall_set = set(wall)
                count = sum(1 for t in top_sets if wall_set < t)
                if count != 2:
                    complete = False
                    break
    return FanClasses(complete, p1r, arrangement)


def cox(fan: Fan) -> Fan:
    """The fan on the lattice freely generated by the rays.

    Each ray becomes a standard basis vector and cones keep their ray-index
    sets, so the cone poset is untouched.  When the original rays do not
    span the ambient space rationally, the lattice is enlarged by a full
    copy of the original one to keep the associated map surjective.
    """
    fan.require_valid()
    n = len(fan.rays)
    if n:
        ray_matrix = IntMatrix.from_columns([list(r) for r in fan.rays], fan.rank)
        rank_of_rays = len(snf(ray_matrix).invariant_factors())
    else:
        rank_of_rays = 0
    new_rank = n if rank_of_rays == fan.rank else n + fan.rank
    rays = []
    for i in range(n):
        vec = [0] * new_rank
        vec[i] = 1
        rays.append(vec)
    max_cones = sorted(fan.maximal_cones, key=lambda c: (len(c), c))
    return Fan(new_rank, rays, [list(c) for c in max_cones])
