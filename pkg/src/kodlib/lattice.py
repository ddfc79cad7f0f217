"""Integral lattices with a symmetric bilinear form, over exact rationals.

Classes are plain tuples of :class:`fractions.Fraction` whose length equals
the lattice rank.  Nothing in here ever touches a float.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

Rational = Fraction
ClassVector = tuple  # tuple[Fraction, ...]


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and canonical strings ("p/q", "n") to a Fraction."""
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {value!r}") from exc
    raise ValidationError(f"not a rational number: {value!r} (floats are not accepted)")


def format_rational(r: Fraction | int) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def as_class(coords: Iterable) -> ClassVector:
    return tuple(to_rational(c) for c in coords)


def is_integral(v: Sequence[Fraction]) -> bool:
    return all(Fraction(c).denominator == 1 for c in v)


@dataclass(frozen=True)
class IntersectionLattice:
    basis_labels: tuple
    form: tuple

    def __post_init__(self):
        labels = tuple(self.basis_labels)
        form = tuple(tuple(row) for row in self.form)
        n = len(labels)
        if n < 1:
            raise ValidationError("lattice rank must be at least 1")
        if len(set(labels)) != n:
            raise ValidationError("basis labels must be distinct")
        if len(form) != n or any(len(row) != n for row in form):
            raise ValidationError("form must be a square matrix matching the basis")
        for row in form:
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise ValidationError(f"form entries must be integers, got {x!r}")
        for i in range(n):
            for j in range(i):
                if form[i][j] != form[j][i]:
                    raise ValidationError("form is not symmetric")
        object.__setattr__(self, "basis_labels", labels)
        object.__setattr__(self, "form", form)

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def unit(self, label_or_index) -> ClassVector:
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return tuple(Fraction(int(j == i)) for j in range(self.rank))

    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        return pair(self, a, b)

    def square(self, a: Sequence) -> Fraction:
        return pair(self, a, a)


def diagonal(entries: Sequence[int], labels: Sequence[str] | None = None) -> IntersectionLattice:
    n = len(entries)
    labels = labels or [f"e{i}" for i in range(n)]
    form = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return IntersectionLattice(tuple(labels), tuple(map(tuple, form)))


def _check_dims(L: IntersectionLattice, *vectors) -> None:
    for v in vectors:
        if len(v) != L.rank:
            raise ValidationError(f"class of length {len(v)} does not belong to a rank-{L.rank} lattice")


def pair(L: IntersectionLattice, a: Sequence, b: Sequence) -> Fraction:
    """Return aᵀ·Q·b."""
    _check_dims(L, a, b)
    # integer classes stay in int arithmetic until the end
    total = 0
    for ai, row in zip(a, L.form):
        if ai:
            total += ai * sum(q * bj for q, bj in zip(row, b) if q)
    return total if isinstance(total, Fraction) else Fraction(total)


def _congruence_pivots(form: Sequence[Sequence]) -> list[Fraction]:
    # symmetric Gaussian elimination; returns the diagonal pivots
    a = [[Fraction(x) for x in row] for row in form]
    n = len(a)
    pivots = []
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[i], a[j] = a[j], a[i]
                for row in a:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    raise ValidationError("form is degenerate")
                # e_i <- e_i + e_j makes the pivot 2*a[i][j] != 0
                for k in range(n):
                    a[i][k] += a[j][k]
                for k in range(n):
                    a[k][i] += a[k][j]
        p = a[i][i]
        pivots.append(p)
        for j in range(i + 1, n):
            f = a[j][i] / p
            if f:
                for k in range(n):
                    a[j][k] -= f * a[i][k]
                for k in range(n):
                    a[k][j] -= f * a[k][i]
    return pivots


def inertia(L: IntersectionLattice) -> tuple[int, int]:
    """(number of positive, number of negative) squares of a nondegenerate form."""
    return _inertia(L.form)


@lru_cache(maxsize=256)
def _inertia(form: tuple) -> tuple[int, int]:
    pivots = _congruence_pivots(form)
    return sum(p > 0 for p in pivots), sum(p < 0 for p in pivots)


def b_plus(L: IntersectionLattice) -> int:
    return inertia(L)[0]


def light_cone_pairs_nonneg(L: IntersectionLattice, a: Sequence, b: Sequence, w: Sequence) -> bool:
    """Oracle for the light cone lemma: two forward classes pair non-negatively.

    Raises :class:`ValidationError` unless b⁺ = 1, a² ≥ 0, b² ≥ 0, w² > 0
    and both a·w, b·w are positive.
    """
    _check_dims(L, a, b, w)
    if b_plus(L) != 1:
        raise ValidationError("light cone lemma needs b+ = 1")
    if pair(L, a, a) < 0 or pair(L, b, b) < 0:
        raise ValidationError("both classes must have non-negative square")
    if pair(L, w, w) <= 0:
        raise ValidationError("reference class must have positive square")
    if pair(L, a, w) <= 0 or pair(L, b, w) <= 0:
        raise ValidationError("both classes must pair positively with the reference class")
    return pair(L, a, b) >= 0


# -- small exact matrix helpers used by basis changes --------------------------------

def mat_vec(m: Sequence[Sequence], v: Sequence) -> ClassVector:
    return tuple(sum((Fraction(r[j]) * v[j] for j in range(len(v)) if r[j]), Fraction(0)) for r in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
                 for row in a)


def identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_inverse(m: Sequence[Sequence]) -> tuple:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ValidationError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def gram(L: IntersectionLattice, basis: Sequence[Sequence]) -> tuple:
    """Gram matrix of the given classes (rows of ``basis``)."""
    return tuple(tuple(pair(L, u, v) for v in basis) for u in basis)


# -- JSON ----------------------------------------------------------------------------

def lattice_to_json(L: IntersectionLattice, classes: Mapping[str, Sequence] | None = None) -> dict:
    out = {"basis": list(L.basis_labels), "form": [list(r) for r in L.form]}
    if classes:
        for name, v in classes.items():
            _check_dims(L, v)
        out["classes"] = {name: [format_rational(c) for c in v] for name, v in classes.items()}
    return out


def lattice_from_json(obj: Mapping) -> tuple[IntersectionLattice, dict]:
    try:
        L = IntersectionLattice(tuple(obj["basis"]), tuple(tuple(r) for r in obj["form"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"lattice JSON needs 'basis' and 'form': {exc}") from exc
    classes = {}
    for name, coords in (obj.get("classes") or {}).items():
        v = as_class(coords)
        _check_dims(L, v)
        classes[name] = v
    return L, classes
