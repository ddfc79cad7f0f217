"""Symplectic 4-manifolds: minimal-model catalogue, blow-ups, -1 classes, coverings.

Explicit models (rational and ruled) carry their intersection lattice in a
standard basis:

=================  ===========================  =================================
kind               basis                        canonical class
=================  ===========================  =================================
RationalCP2        H, E1..Ek                    -3H + ΣEi
RationalS2xS2      H1, H2, E1..Ek               -2H1 - 2H2 + ΣEi
RuledTrivial(h)    U, T, E1..Ek   (U²=0)        -2U + (2h-2)T + ΣEi
RuledNontrivial(h) U, T, E1..Ek   (U²=1)        -2U + (2h-1)T + ΣEi
=================  ===========================  =================================

``General`` models (Kodaira dimension >= 0) carry only the numerical data the
definition of κ^s consumes.
"""
from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ConsistencyError, ValidationError
from .kodaira_low import KodDim, kappa_number
from .lattice import (
    IntersectionLattice,
    as_class,
    format_rational,
    gram,
    is_integral,
    mat_inverse,
    mat_mul,
    mat_vec,
    pair,
    to_rational,
)


class Kind(str, enum.Enum):
    CP2 = "RationalCP2"
    S2XS2 = "RationalS2xS2"
    RULED_TRIVIAL = "RuledTrivial"
    RULED_NONTRIVIAL = "RuledNontrivial"
    GENERAL = "General"


RATIONAL_KINDS = (Kind.CP2, Kind.S2XS2)
RULED_KINDS = (Kind.RULED_TRIVIAL, Kind.RULED_NONTRIVIAL)


@dataclass(frozen=True)
class MinimalModelKind:
    kind: Kind
    h: int | None = None
    ksq: Fraction | None = None
    k_torsion: bool = False
    k_dot_omega_positive: bool = False
    b_plus: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind in RULED_KINDS:
            if isinstance(self.h, bool) or not isinstance(self.h, int) or self.h < 1:
                raise ValidationError("ruled models need base genus h >= 1")
        elif self.kind is Kind.GENERAL:
            if self.ksq is None:
                raise ValidationError("General models need K²")
            object.__setattr__(self, "ksq", to_rational(self.ksq))
            if self.b_plus < 1:
                raise ValidationError("b+ of a symplectic manifold is at least 1")
            if self.k_torsion and (self.ksq != 0 or self.k_dot_omega_positive):
                raise ValidationError("torsion K forces K² = 0 and K·ω = 0")
            if not self.k_torsion and not self.k_dot_omega_positive and self.ksq > 0:
                # (K·ω = 0, K² > 0) is excluded by the light cone lemma
                raise ConsistencyError("K·ω = 0 with K² > 0 cannot occur")

    @property
    def explicit(self) -> bool:
        return self.kind is not Kind.GENERAL


def cp2() -> MinimalModelKind:
    return MinimalModelKind(Kind.CP2)


def s2xs2() -> MinimalModelKind:
    return MinimalModelKind(Kind.S2XS2)


def ruled(h: int, trivial: bool = True) -> MinimalModelKind:
    return MinimalModelKind(Kind.RULED_TRIVIAL if trivial else Kind.RULED_NONTRIVIAL, h=h)


def general(ksq, k_torsion: bool = False, k_dot_omega_positive: bool | None = None,
            b_plus: int = 1) -> MinimalModelKind:
    """Minimal model known by numbers only; K·ω is taken positive unless K is torsion."""
    if k_dot_omega_positive is None:
        k_dot_omega_positive = not k_torsion
    return MinimalModelKind(Kind.GENERAL, ksq=to_rational(ksq), k_torsion=k_torsion,
                            k_dot_omega_positive=k_dot_omega_positive, b_plus=b_plus)


@dataclass(frozen=True)
class FourManifoldModel:
    """A minimal model together with k blow-ups and, for explicit kinds, a class [ω].

    ``omega`` holds the coordinates of [ω] in the standard basis; when it is
    omitted on an explicit model a monotone-like default is filled in.
    """

    minimal: MinimalModelKind
    blowups: int = 0
    omega: tuple | None = None

    def __post_init__(self):
        if isinstance(self.blowups, bool) or not isinstance(self.blowups, int) or self.blowups < 0:
            raise ValidationError("blow-up count must be a non-negative integer")
        if not self.minimal.explicit:
            if self.omega is not None:
                raise ValidationError("General models carry ω only as the sign of K·ω")
            return
        if self.omega is None:
            object.__setattr__(self, "omega", default_omega(self.minimal, self.blowups))
        else:
            object.__setattr__(self, "omega", as_class(self.omega))
        validate_omega(self)

    @property
    def kind(self) -> Kind:
        return self.minimal.kind

    @property
    def explicit(self) -> bool:
        return self.minimal.explicit

    @property
    def is_rational(self) -> bool:
        return self.kind in RATIONAL_KINDS

    @property
    def is_ruled(self) -> bool:
        return self.kind in RULED_KINDS

    @cached_property
    def lattice(self) -> IntersectionLattice:
        if not self.explicit:
            raise ValidationError("General models carry no explicit lattice")
        k = self.blowups
        head = {
            Kind.CP2: (("H",), ((1,),)),
            Kind.S2XS2: (("H1", "H2"), ((0, 1), (1, 0))),
            Kind.RULED_TRIVIAL: (("U", "T"), ((0, 1), (1, 0))),
            Kind.RULED_NONTRIVIAL: (("U", "T"), ((1, 1), (1, 0))),
        }[self.kind]
        labels, block = head
        r = len(labels)
        n = r + k
        form = [[0] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                form[i][j] = block[i][j]
        for i in range(r, n):
            form[i][i] = -1
        return IntersectionLattice(labels + tuple(f"E{i + 1}" for i in range(k)), tuple(map(tuple, form)))

    @property
    def head_rank(self) -> int:
        return 1 if self.kind is Kind.CP2 else 2

    @cached_property
    def canonical(self) -> tuple:
        if not self.explicit:
            raise ValidationError("General models carry no explicit canonical class")
        h = self.minimal.h
        head = {
            Kind.CP2: (-3,),
            Kind.S2XS2: (-2, -2),
            Kind.RULED_TRIVIAL: (-2, 2 * h - 2 if h else 0),
            Kind.RULED_NONTRIVIAL: (-2, 2 * h - 1 if h else 0),
        }[self.kind]
        return as_class(head + (1,) * self.blowups)

    def unit(self, label) -> tuple:
        return self.lattice.unit(label)

    def exceptional(self, i: int) -> tuple:
        """The coordinate class E_{i+1}."""
        return self.lattice.unit(self.head_rank + i)

    def pair(self, a, b) -> Fraction:
        return pair(self.lattice, a, b)

    def ksq(self) -> Fraction:
        """K² of this (possibly blown-up) manifold."""
        if self.explicit:
            return self.pair(self.canonical, self.canonical)
        return self.minimal.ksq - self.blowups


def default_omega(minimal: MinimalModelKind, k: int) -> tuple:
    kind = minimal.kind
    if kind is Kind.CP2:
        # positive on every class with E² = K·E = -1 (pairs to d(x-3)+1 there)
        return as_class((max(3, k),) + (-1,) * k)
    if kind is Kind.S2XS2:
        s = max(2, k)
        return as_class((s, s) + (-1,) * k)
    return as_class((2, k + 1) + (-1,) * k)


def validate_omega(m: FourManifoldModel) -> None:
    w = m.omega
    if len(w) != m.lattice.rank:
        raise ValidationError(f"ω has {len(w)} coordinates, lattice rank is {m.lattice.rank}")
    r = m.head_rank
    z = [-c for c in w[r:]]
    if any(zi <= 0 for zi in z):
        raise ValidationError("ω must have positive area on every E_i")
    if m.pair(w, w) <= 0:
        raise ValidationError("ω² must be positive")
    kind = m.kind
    if kind is Kind.CP2:
        ok = w[0] > 0
    elif kind is Kind.S2XS2:
        ok = w[0] > 0 and w[1] > 0
    elif kind is Kind.RULED_TRIVIAL:
        ok = w[0] > 0 and w[1] > 0 and all(w[0] - zi > 0 for zi in z)
    else:
        x, y = w[0], w[1]
        ok = x > 0 and x + y > 0 and x + 2 * y > 0 and all(x - zi > 0 for zi in z)
    if not ok:
        raise ValidationError(f"ω = {[format_rational(c) for c in w]} violates the positivity conditions for {kind.value}")


def kappa_s(m: FourManifoldModel) -> KodDim:
    """Symplectic Kodaira dimension; blow-ups do not change it."""
    if m.is_rational or m.is_ruled:
        return KodDim.NEG_INF
    mk = m.minimal
    if mk.k_torsion:
        return KodDim.ZERO
    if mk.ksq < 0:
        return KodDim.NEG_INF
    return kappa_number(mk.ksq) + kappa_number(1 if mk.k_dot_omega_positive else 0)


# -- -1 classes ----------------------------------------------------------------------

# largest coefficient of an exceptional class on CP² blown up at k <= 8 points
_MAX_EXCEPTIONAL_DEGREE = {0: 0, 1: 1, 2: 1, 3: 1, 4: 1, 5: 2, 6: 2, 7: 3, 8: 6}


@dataclass(frozen=True)
class MinusOneSet:
    kind: str  # "Orthogonal" | "RuledPairs" | "Enumerated"
    classes: tuple
    bound: int | None = None
    complete: bool = True

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)


@lru_cache(maxsize=None)
def _cp2_exceptional_coords(k: int, bound: int) -> tuple:
    """All (d, c_1..c_k) with dH + Σc_iE_i of square -1 and K-degree -1, |entries| <= bound."""
    out = []
    for d in range(-bound, bound + 1):
        target_sq = d * d + 1  # Σ m_i², where c_i = -m_i
        target_sum = 3 * d - 1  # Σ m_i
        if target_sum * target_sum > k * target_sq:
            continue
        m = [0] * k

        # m_1 >= m_2 >= ... ; the permutations are added afterwards
        def rec(i, cap, rem_sq, rem_sum):
            left = k - i
            if left == 0:
                if rem_sq == 0 and rem_sum == 0:
                    for perm in set(itertools.permutations(m)):
                        out.append((d,) + tuple(-x for x in perm))
                return
            if rem_sum * rem_sum > left * rem_sq or rem_sum > left * cap:
                return
            top = min(cap, math.isqrt(rem_sq))
            for x in range(top, -min(bound, math.isqrt(rem_sq)) - 1, -1):
                m[i] = x
                rec(i + 1, x, rem_sq - x * x, rem_sum - x)
            m[i] = 0

        rec(0, bound, target_sq, target_sum)
    out.sort(key=lambda v: (v[0], [-c for c in v[1:]]))
    return tuple(out)


def _s2xs2_to_cp2(k: int) -> tuple:
    """Isometry (S²×S²)#k -> CP²#(k+1) taking canonical class to canonical class.

    H1 -> H - E2, H2 -> H - E1, E1 -> H - E1 - E2, E_j -> E_{j+1}.
    Returned as a matrix acting on coordinate columns.
    """
    n = k + 2
    images = [None] * n
    images[0] = [1, 0, -1] + [0] * (n - 3)
    images[1] = [1, -1, 0] + [0] * (n - 3)
    images[2] = [1, -1, -1] + [0] * (n - 3)
    for j in range(3, n):
        col = [0] * n
        col[j] = 1
        images[j] = col
    return tuple(tuple(Fraction(images[c][r]) for c in range(n)) for r in range(n))


@lru_cache(maxsize=None)
def enumerate_minus_one(m: FourManifoldModel, bound: int = 30) -> MinusOneSet:
    """The symplectic -1 classes of ``m``.

    General models give indices 0..k-1 of E_1..E_k.  Ruled models give
    E_i and T - E_i.  Rational models are searched in a coefficient box of
    half-width ``bound`` (coefficients measured in the CP²#k frame) and the
    result records whether the box is known to contain every class.
    """
    k = m.blowups
    if not m.explicit:
        return MinusOneSet("Orthogonal", tuple(range(k)), bound, True)
    w = m.omega
    if m.is_ruled:
        t = m.unit("T")
        classes = []
        for i in range(k):
            e = m.exceptional(i)
            classes.append(e)
            classes.append(tuple(a - b for a, b in zip(t, e)))
        classes = tuple(c for c in classes if m.pair(c, w) > 0)
        return MinusOneSet("RuledPairs", classes, bound, True)
    if m.kind is Kind.S2XS2 and k == 0:
        return MinusOneSet("Enumerated", (), bound, True)
    if m.kind is Kind.CP2:
        kk, to_frame = k, None
    else:
        kk, to_frame = k + 1, _s2xs2_to_cp2(k)
    raw = _cp2_exceptional_coords(kk, bound)
    if to_frame is not None:
        back = [[int(x) for x in row] for row in mat_inverse(to_frame)]
        raw = [tuple(sum(r[j] * v[j] for j in range(len(v))) for r in back) for v in raw]
    # ω·v > 0 tested in integers: scale Q·ω to a common denominator
    qw = [m.pair(w, m.unit(i)) for i in range(len(w))]
    den = math.lcm(*(c.denominator for c in qw))
    qw = [int(c * den) for c in qw]
    classes = tuple(v for v in raw if sum(a * b for a, b in zip(qw, v)) > 0)
    complete = kk <= 8 and bound >= _MAX_EXCEPTIONAL_DEGREE[kk]
    return MinusOneSet("Enumerated", classes, bound, complete)


def is_minus_one_class(m: FourManifoldModel, v: Sequence) -> bool:
    v = as_class(v)
    return (is_integral(v) and m.pair(v, v) == -1 and m.pair(m.canonical, v) == -1
            and m.pair(m.omega, v) > 0)


# -- blow-up / blow-down ---------------------------------------------------------------

def blow_up(m: FourManifoldModel, area=None) -> FourManifoldModel:
    """Blow up once; ``area`` is ω(E_new) and defaults to a small admissible value."""
    if not m.explicit:
        if area is not None:
            raise ValidationError("General models do not track areas")
        return replace(m, blowups=m.blowups + 1)
    w = m.omega
    if area is None:
        r = m.head_rank
        areas = [m.pair(w, m.unit(i)) for i in range(r)] + [-c for c in w[r:]]
        slack = [m.pair(w, w), Fraction(1)] + [a for a in areas if a > 0]
        if m.is_ruled:
            slack += [w[0] + c for c in w[r:]]  # ω·(T - E_i)
        area = min(slack) / 2
    area = to_rational(area)
    if area <= 0:
        raise ValidationError("blow-up size must be positive")
    return FourManifoldModel(m.minimal, m.blowups + 1, tuple(w) + (-area,))


@dataclass(frozen=True)
class BlowDown:
    """Result of blowing down pairwise orthogonal -1 classes.

    ``matrix`` maps coordinates of a class in the original model to the
    coordinates of its pushforward; ``classes`` are the blown-down classes in
    original coordinates (indices for General models).
    """

    model: FourManifoldModel
    source: FourManifoldModel
    classes: tuple
    matrix: tuple | None = None

    def push(self, v: Sequence) -> tuple:
        if self.matrix is None:
            raise ValidationError("General models push forward pairing data, not coordinates")
        return mat_vec(self.matrix, as_class(v))

    def corrections(self, v: Sequence) -> list:
        """c_i = F·E_i for each blown-down E_i, so that F = ι(F') - Σ c_i E_i."""
        return [self.source.pair(as_class(v), e) for e in self.classes]

    def report(self, named: dict) -> dict:
        return {"correction": [{"class": name, "c_i": [format_rational(c) for c in self.corrections(v)]}
                               for name, v in named.items()]}


def _complement_map(L: IntersectionLattice, basis_rows: Sequence[Sequence]) -> tuple:
    """Coordinates of the orthogonal projection onto span(basis_rows), in that basis."""
    g = gram(L, basis_rows)
    q_rows = [[sum((Fraction(L.form[i][j]) * b[j] for j in range(L.rank)), Fraction(0)) for i in range(L.rank)]
              for b in basis_rows]  # row i: x -> b_i·x
    return mat_mul(mat_inverse(g), q_rows)


def _unit(n, i):
    return tuple(Fraction(int(j == i)) for j in range(n))


def _cremona_to_coordinate(k: int, v: tuple) -> tuple[tuple, int]:
    """K-preserving isometry G of CP²#k (k >= 3) with G·v a coordinate class E_j."""
    n = k + 1
    G = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    v = list(v)
    Q = [1] + [-1] * k
    while v[0] != 0:
        if v[0] < 0:
            raise ValidationError("not an exceptional class (negative degree)")
        mult = sorted(range(k), key=lambda i: (v[i + 1], i))[:3]  # most negative c_i = largest m_i
        d = v[0]
        msum = -sum(v[i + 1] for i in mult)
        if msum <= d:
            raise ValidationError("Cremona reduction stalled: not an exceptional class")
        alpha = [0] * n
        alpha[0] = 1
        for i in mult:
            alpha[i + 1] = -1
        # reflection x -> x + (x·α)α, matrix I + α αᵀ Q
        R = tuple(tuple(Fraction(int(i == j)) + alpha[i] * alpha[j] * Q[j] for j in range(n)) for i in range(n))
        G = mat_mul(R, G)
        v = list(mat_vec(R, v))
    js = [i for i in range(k) if v[i + 1] != 0]
    if len(js) != 1 or v[js[0] + 1] != 1:
        raise ValidationError("not an exceptional class")
    return G, js[0]


def _blow_down_one(m: FourManifoldModel, v: tuple) -> tuple[FourManifoldModel, tuple]:
    L = m.lattice
    n = L.rank
    k = m.blowups
    r = m.head_rank
    if m.kind is Kind.S2XS2:
        M = _s2xs2_to_cp2(k)
        cp = FourManifoldModel(cp2(), k + 1, mat_vec(M, m.omega))
        new, S = _blow_down_one(cp, mat_vec(M, v))
        return new, mat_mul(S, M)
    if m.kind is Kind.CP2:
        if v[0] == 0:
            j = next(i for i in range(k) if v[i + 1] != 0)
            rows = [_unit(n, i) for i in range(n) if i != j + 1]
            S = _complement_map(L, rows)
            return FourManifoldModel(cp2(), k - 1, mat_vec(S, m.omega)), S
        if k == 2:
            # H - E1 - E2: complement spanned by H - E2, H - E1 is even, so S²×S²
            rows = [as_class((1, 0, -1)), as_class((1, -1, 0))]
            S = _complement_map(L, rows)
            return FourManifoldModel(s2xs2(), 0, mat_vec(S, m.omega)), S
        G, j = _cremona_to_coordinate(k, v)
        Ginv = mat_inverse(G)
        cols = list(zip(*Ginv))
        rows = [tuple(cols[i]) for i in range(n) if i != j + 1]
        S = _complement_map(L, rows)
        return FourManifoldModel(cp2(), k - 1, mat_vec(S, m.omega)), S
    # ruled: v is E_i or T - E_i
    i = next(i for i in range(k) if v[r + i] != 0)
    others = [_unit(n, r + j) for j in range(k) if j != i]
    U, T, E = _unit(n, 0), _unit(n, 1), _unit(n, r + i)
    if v[1] == 0:
        rows = [U, T] + others
        new_kind = m.minimal
    elif m.kind is Kind.RULED_TRIVIAL:
        rows = [tuple(u - e + t for u, e, t in zip(U, E, T)), T] + others
        new_kind = ruled(m.minimal.h, trivial=False)
    else:
        rows = [tuple(u - e for u, e in zip(U, E)), T] + others
        new_kind = ruled(m.minimal.h, trivial=True)
    S = _complement_map(L, rows)
    return FourManifoldModel(new_kind, k - 1, mat_vec(S, m.omega)), S


def blow_down(m: FourManifoldModel, classes: Iterable) -> BlowDown:
    """Blow down pairwise orthogonal -1 classes.

    Explicit models take coordinate vectors; General models take indices of
    E_1..E_k.  The returned :class:`BlowDown` carries the pushforward.
    """
    classes = list(classes)
    if not m.explicit:
        idx = []
        for c in classes:
            if isinstance(c, bool) or not isinstance(c, int) or not 0 <= c < m.blowups:
                raise ValidationError(f"{c!r} is not an exceptional index of this model")
            idx.append(c)
        if len(set(idx)) != len(idx):
            raise ValidationError("repeated exceptional class")
        return BlowDown(replace(m, blowups=m.blowups - len(idx)), m, tuple(idx))
    vs = [as_class(c) for c in classes]
    for v in vs:
        if not is_minus_one_class(m, v):
            raise ValidationError(f"{[format_rational(c) for c in v]} is not a symplectic -1 class")
        if m.is_ruled and v not in enumerate_minus_one(m).classes:
            raise ValidationError("not one of the -1 classes E_i, T - E_i of a ruled model")
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if m.pair(vs[a], vs[b]) != 0:
                raise ValidationError("blow-down classes must be pairwise orthogonal")
    n = m.lattice.rank
    P = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    cur = m
    pending = list(vs)
    while pending:
        v = pending.pop(0)
        cur, S = _blow_down_one(cur, v)
        P = mat_mul(S, P)
        pending = [mat_vec(S, u) for u in pending]
    # K pushes forward to K' (the ΣE_i part is projected away)
    if mat_vec(P, m.canonical) != cur.canonical:
        raise ConsistencyError("blow-down basis change does not preserve the canonical class")
    return BlowDown(cur, m, tuple(vs), P)


# -- coverings -------------------------------------------------------------------------

class TrivialCoverWarning(UserWarning):
    """CP² and S²×S² are simply connected and only have the trivial cover."""


def cover(m: FourManifoldModel, n: int, notes: list | None = None) -> FourManifoldModel:
    """The degree-n cover induced from the base (ruled) or by scaling (General).

    A rational model only has the trivial cover; it is returned unchanged and a
    note is appended to ``notes`` (or issued as a warning when ``notes`` is None).
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError("covering degree must be a positive integer")
    if n == 1:
        return m
    mk = m.minimal
    if m.is_rational:
        msg = f"{mk.kind.value} is simply connected; only the trivial cover exists"
        if notes is None:
            warnings.warn(msg, TrivialCoverWarning, stacklevel=2)
        else:
            notes.append(msg)
        return m
    k = m.blowups
    if not m.explicit:
        return FourManifoldModel(replace(mk, ksq=n * mk.ksq), n * k)
    h2 = n * (mk.h - 1) + 1
    x, y = m.omega[0], m.omega[1]
    z = [-c for c in m.omega[2:]]
    if mk.kind is Kind.RULED_TRIVIAL:
        new_kind, coeff_t = ruled(h2, True), n * y
    else:
        # the pulled-back section has square n; parity of n decides the bundle
        trivial = n % 2 == 0
        new_kind = ruled(h2, trivial)
        coeff_t = x * Fraction(n - (0 if trivial else 1), 2) + n * y
    omega = (x, coeff_t) + tuple(-zi for zi in z for _ in range(n))
    return FourManifoldModel(new_kind, n * k, omega)


def kappa_komega_from_pencil(g_tilde: int, c: Sequence[int]) -> KodDim:
    """κ^s(K·[ω]) from the lifted fibre genus and its pairings with the blown-down spheres."""
    if g_tilde < 0 or any(ci < 0 for ci in c):
        raise ValidationError("genus and pairings must be non-negative")
    return kappa_number(2 * g_tilde - 2 - sum(c))


# -- JSON ------------------------------------------------------------------------------

def kind_to_json(mk: MinimalModelKind) -> dict:
    out = {"kind": mk.kind.value}
    if mk.kind in RULED_KINDS:
        out["h"] = mk.h
    elif mk.kind is Kind.GENERAL:
        out.update(ksq=format_rational(mk.ksq), k_torsion=mk.k_torsion,
                   k_dot_omega_positive=mk.k_dot_omega_positive, b_plus=mk.b_plus)
    return out


def kind_from_json(obj) -> MinimalModelKind:
    if isinstance(obj, str):
        obj = {"kind": obj}
    try:
        kind = Kind(obj["kind"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"unknown minimal model kind in {obj!r}") from exc
    if kind in RULED_KINDS:
        return MinimalModelKind(kind, h=obj.get("h"))
    if kind is Kind.GENERAL:
        torsion = bool(obj.get("k_torsion", False))
        return MinimalModelKind(kind, ksq=obj.get("ksq"), k_torsion=torsion,
                                k_dot_omega_positive=bool(obj.get("k_dot_omega_positive", not torsion)),
                                b_plus=int(obj.get("b_plus", 1)))
    return MinimalModelKind(kind)


def model_to_json(m: FourManifoldModel) -> dict:
    out = {"minimal": kind_to_json(m.minimal), "blowups": m.blowups}
    if m.explicit:
        out["omega"] = [format_rational(c) for c in m.omega]
    return out


def model_from_json(obj) -> FourManifoldModel:
    if not isinstance(obj, dict) or "minimal" not in obj:
        raise ValidationError("model JSON needs a 'minimal' entry")
    omega = obj.get("omega")
    if isinstance(omega, dict):
        omega = omega.get("coords")
    blowups = obj.get("blowups", 0)
    return FourManifoldModel(kind_from_json(obj["minimal"]), blowups, None if omega is None else as_class(omega))
