"""Bundled example fans.

Single source of truth for the corpus shipped under fans/ in the repository
root; the JSON files there are generated from these definitions and a test
keeps them in sync.  Names ending in a rank suffix follow the pattern
``torus_r2`` (the fan with only the zero cone in Z^2); ``cox_<name>`` is the
Cox fan of the base fan.

The six-ray arrangement fan realises the complement of the coordinate
subspace arrangement whose simplicial complex is the 6-vertex triangulation
of the real projective plane (10 triangles, all 15 edges); its cohomology
has 2-torsion, which exercises every torsion code path.
"""

from __future__ import annotations

from .fans import Fan, cox

# 6-vertex triangulation of the real projective plane: every pair of
# vertices is an edge, each edge lies in exactly two of the ten triangles.
RP2_TRIANGLES = (
    (0, 1, 3),
    (0, 1, 5),
    (0, 2, 3),
    (0, 2, 4),
    (0, 4, 5),
    (1, 2, 4),
    (1, 2, 5),
    (1, 3, 4),
    (2, 3, 5),
    (3, 4, 5),
)


def _torus(r):
    return {"rank": r, "rays": [], "max_cones": [[]]}


def _affine(r):
    rays = [[1 if j == i else 0 for j in range(r)] for i in range(r)]
    return {"rank": r, "rays": rays, "max_cones": [list(range(r))]}


def _p1():
    return {"rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]}


def _projective_space(r):
    rays = [[1 if j == i else 0 for j in range(r)] for i in range(r)]
    rays.append([-1] * r)
    cones = [sorted(set(range(r + 1)) - {i}) for i in range(r + 1)]
    return {"rank": r, "rays": rays, "max_cones": sorted(cones)}


def _p1xp1():
    return {
        "rank": 2,
        "rays": [[1, 0], [-1, 0], [0, 1], [0, -1]],
        "max_cones": [[0, 2], [0, 3], [1, 2], [1, 3]],
    }


def _hirzebruch(a):
    return {
        "rank": 2,
        "rays": [[1, 0], [0, 1], [-1, a], [0, -1]],
        "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
    }


def _blowup_c2():
    return {
        "rank": 2,
        "rays": [[1, 0], [0, 1], [1, 1]],
        "max_cones": [[0, 2], [1, 2]],
    }


def _punctured_c2():
    return {"rank": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0], [1]]}


def _rp2_arrangement():
    rays = [[1 if j == i else 0 for j in range(6)] for i in range(6)]
    return {"rank": 6, "rays": rays, "max_cones": [list(t) for t in RP2_TRIANGLES]}


_BASE_BUILDERS = {
    "torus_r1": lambda: _torus(1),
    "torus_r2": lambda: _torus(2),
    "torus_r3": lambda: _torus(3),
    "affine_r1": lambda: _affine(1),
    "affine_r2": lambda: _affine(2),
    "affine_r3": lambda: _affine(3),
    "p1": _p1,
    "p2": lambda: _projective_space(2),
    "p3": lambda: _projective_space(3),
    "p1xp1": _p1xp1,
    "hirzebruch_0": lambda: _hirzebruch(0),
    "hirzebruch_1": lambda: _hirzebruch(1),
    "hirzebruch_2": lambda: _hirzebruch(2),
    "hirzebruch_3": lambda: _hirzebruch(3),
    "blowup_c2": _blowup_c2,
    "punctured_c2": _punctured_c2,
    "rp2_arrangement": _rp2_arrangement,
}


def base_names():
    return sorted(_BASE_BUILDERS)


def corpus_names():
    """All bundled fan names: base fans plus their Cox fans."""
    names = base_names()
    return names + [f"cox_{name}" for name in names]


def bundled_fan(name) -> Fan:
    if name.startswith("cox_"):
        return cox(bundled_fan(name[4:]))
    builder = _BASE_BUILDERS.get(name)
    if builder is None:
        raise KeyError(f"unknown bundled fan {name!r}")
    data = builder()
    return Fan(data["rank"], data["rays"], data["max_cones"])
