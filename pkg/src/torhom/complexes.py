"""Graded complexes of free Z-modules with degree-raising differentials.

Basis elements are arbitrary hashable labels; differentials are stored as
one sparse column per source basis element and materialised as dense
IntMatrix objects on demand.  Homology at each degree is delegated to
:class:`torhom.intlinalg.PairHomology`, which also provides deterministic
generators and class coordinates.
"""

from __future__ import annotations

from .intlinalg import IntMatrix, PairHomology


class GradedComplex:
    """Finite complex with differentials raising the degree by one."""

    def __init__(self, basis, columns):
        """``basis``: {t: [labels]}; ``columns``: {t: [dict target_label->coeff]}.

        ``columns[t][j]`` is the image of the j-th degree-t basis element,
        written in degree-(t+1) labels.  Degrees absent from ``basis`` are
        zero modules.
        """
        self.basis = {t: list(labels) for t, labels in basis.items() if labels}
        self.columns = columns
        self._index = {
            t: {label: i for i, label in enumerate(labels)} for t, labels in self.basis.items()
        }
        self._matrices = {}
        self._pairs = {}

    @property
    def degrees(self):
        return sorted(self.basis)

    def rank(self, t):
        return len(self.basis.get(t, ()))

    def labels(self, t):
        return self.basis.get(t, [])

    def index(self, t, label):
        return self._index[t][label]

    def matrix(self, t) -> IntMatrix:
        """Dense matrix of d: degree t -> degree t+1 (rows = target basis)."""
        mat = self._matrices.get(t)
        if mat is None:
            rows = self.rank(t + 1)
            cols = self.rank(t)
            data = [[0] * cols for _ in range(rows)]
            if cols and rows:
                target_index = self._index.get(t + 1, {})
                for j, col in enumerate(self.columns.get(t, [])):
                    for label, coeff in col.items():
                        data[target_index[label]][j] = coeff
            mat = IntMatrix(data, rows, cols)
            self._matrices[t] = mat
        return mat

    def apply_differential(self, t, chain: dict) -> dict:
        """Sparse image of a degree-t chain {label: coeff}."""
        cols = self.columns.get(t, [])
        index = self._index.get(t, {})
        out = {}
        for label, coeff in chain.items():
            if not coeff:
                continue
            for target, c in cols[index[label]].items():
                val = out.get(target, 0) + coeff * c
                if val:
                    out[target] = val
                else:
                    del out[target]
        return out

    def differential_squares_to_zero(self, t_lo=None, t_hi=None) -> bool:
        """Exact sparse check of d(d(e)) == 0 for every basis element."""
        degrees = self.degrees
        if not degrees:
            return True
        lo = degrees[0] if t_lo is None else t_lo
        hi = degrees[-1] if t_hi is None else t_hi
        for t in range(lo, hi + 1):
            for col in self.columns.get(t, []):
                if self.apply_differential(t + 1, col):
                    return False
        return True

    def pair(self, t, modulus=None) -> PairHomology:
        key = (t, modulus)
        ph = self._pairs.get(key)
        if ph is None:
            ph = PairHomology(self.matrix(t), self.matrix(t - 1), modulus)
            self._pairs[key] = ph
        return ph

    def homology(self, t, modulus=None):
        return self.pair(t, modulus).group

    def homology_table(self, t_max, modulus=None):
        return {t: self.homology(t, modulus) for t in range(t_max + 1)}

    def chain_to_vector(self, t, chain: dict):
        vec = [0] * self.rank(t)
        index = self._index.get(t, {})
        for label, coeff in chain.items():
            if coeff:
                vec[index[label]] += coeff
        return vec

    def vector_to_chain(self, t, vec):
        labels = self.labels(t)
        return {labels[i]: c for i, c in enumerate(vec) if c}
