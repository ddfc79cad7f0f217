"""Embedded symplectic surfaces F in a 4-manifold and the relative Kodaira dimension κ^s(M, ω, F).

Surfaces come in two flavours.  On explicit models (rational, ruled) a
component is a coordinate class.  On ``General`` models a component is a
record of pairings: K·F, F², F·E_i for every blow-up class, and the sign of
F·ω.  All answers that depend on enumerating -1 classes of a rational model
carry the enumeration bound.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConsistencyError, UniquenessViolation, ValidationError
from .four_manifold import (
    FourManifoldModel,
    Kind,
    blow_down,
    enumerate_minus_one,
    kappa_s,
)
from .kodaira_low import KodDim
from .lattice import as_class, format_rational, to_rational

DEFAULT_BOUND = 30


@dataclass(frozen=True)
class ClassComponent:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", as_class(self.coords))


@dataclass(frozen=True)
class PairingComponent:
    k_dot_f: Fraction
    f_sq: Fraction
    f_dot_e: tuple = ()
    omega_positive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "k_dot_f", to_rational(self.k_dot_f))
        object.__setattr__(self, "f_sq", to_rational(self.f_sq))
        object.__setattr__(self, "f_dot_e", tuple(to_rational(x) for x in self.f_dot_e))


SurfaceComponent = ClassComponent | PairingComponent


@dataclass(frozen=True)
class SurfaceConfig:
    components: tuple = ()

    def __post_init__(self):
        comps = []
        for c in self.components:
            if isinstance(c, (ClassComponent, PairingComponent)):
                comps.append(c)
            elif isinstance(c, dict):
                comps.append(_pairing_from_json(c))
            else:
                comps.append(ClassComponent(c))
        object.__setattr__(self, "components", tuple(comps))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def pairing_mode(self) -> bool:
        return any(isinstance(c, PairingComponent) for c in self.components)


@dataclass(frozen=True)
class RelativeTriple:
    """(M, ω, F).  ω lives on the manifold model."""

    manifold: FourManifoldModel
    surface: SurfaceConfig = SurfaceConfig()

    def __post_init__(self):
        if not isinstance(self.surface, SurfaceConfig):
            object.__setattr__(self, "surface", SurfaceConfig(tuple(self.surface)))
        m, comps = self.manifold, self.surface.components
        for c in comps:
            if isinstance(c, ClassComponent):
                if not m.explicit:
                    raise ValidationError("General models take pairing-mode surface components")
                if len(c.coords) != m.lattice.rank:
                    raise ValidationError(f"surface class has {len(c.coords)} coordinates, lattice rank is {m.lattice.rank}")
                if m.pair(c.coords, m.omega) <= 0:
                    raise ValidationError("surface components must have positive symplectic area")
            else:
                if m.explicit:
                    raise ValidationError("explicit models take coordinate surface components")
                if len(c.f_dot_e) != m.blowups:
                    raise ValidationError(f"pairing data lists {len(c.f_dot_e)} values F·E_i, model has {m.blowups} blow-ups")
                if not c.omega_positive:
                    raise ValidationError("surface components must have positive symplectic area")
            genus(c, m)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                a, b = comps[i], comps[j]
                if isinstance(a, ClassComponent) and m.pair(a.coords, b.coords) != 0:
                    raise ValidationError("disjoint surface components must have zero intersection")


# -- adjunction ------------------------------------------------------------------------

def _k_dot_f(c: SurfaceComponent, m: FourManifoldModel | None) -> Fraction:
    if isinstance(c, PairingComponent):
        return c.k_dot_f
    return m.pair(m.canonical, c.coords)


def _f_sq(c: SurfaceComponent, m: FourManifoldModel | None) -> Fraction:
    if isinstance(c, PairingComponent):
        return c.f_sq
    return m.pair(c.coords, c.coords)


def genus(c: SurfaceComponent, m: FourManifoldModel | None = None) -> int:
    """Genus from the adjunction formula 2g - 2 = K·F + F²."""
    if isinstance(c, ClassComponent) and m is None:
        raise ValidationError("coordinate components need their model")
    v = _k_dot_f(c, m) + _f_sq(c, m)
    if v.denominator != 1 or v.numerator % 2 or v < -2:
        raise ValidationError(f"K·F + F² = {format_rational(v)} is not 2g - 2 for any genus g >= 0")
    return (v.numerator + 2) // 2


def total_genus_defect(F: SurfaceConfig, m: FourManifoldModel | None = None) -> int:
    return sum(2 * genus(c, m) - 2 for c in F.components)


def f_plus(F: SurfaceConfig, m: FourManifoldModel | None = None) -> SurfaceConfig:
    """Drop the sphere components."""
    return SurfaceConfig(tuple(c for c in F.components if genus(c, m) >= 1))


def _plus(t: RelativeTriple) -> RelativeTriple:
    return replace(t, surface=f_plus(t.surface, t.manifold))


def total_class(t: RelativeTriple) -> tuple:
    m = t.manifold
    total = [Fraction(0)] * m.lattice.rank
    for c in t.surface.components:
        total = [a + b for a, b in zip(total, c.coords)]
    return tuple(total)


def _pairings_with(t: RelativeTriple, e) -> list:
    """F_i·E for each component; ``e`` is a class (explicit) or an index (General)."""
    m = t.manifold
    if m.explicit:
        return [m.pair(c.coords, e) for c in t.surface.components]
    return [c.f_dot_e[e] for c in t.surface.components]


# -- maximality --------------------------------------------------------------------------

def _check_lemma_max(t: RelativeTriple, e, per: list) -> None:
    if any(x < 0 for x in per):
        raise ConsistencyError(
            f"a positive-genus surface component pairs negatively with the -1 class {_show(e)}")


def _show(e) -> str:
    if isinstance(e, int):
        return f"E{e + 1}"
    return "(" + ", ".join(format_rational(x) for x in e) + ")"


def is_maximal(t: RelativeTriple, bound: int = DEFAULT_BOUND) -> bool:
    """F⁺·E != 0 for every symplectic -1 class E (within ``bound`` on rational models)."""
    t = _plus(t)
    if not t.surface.components:
        if t.manifold.is_rational:
            return len(enumerate_minus_one(t.manifold, bound)) == 0
        return t.manifold.blowups == 0
    ok = True
    for e in enumerate_minus_one(t.manifold, bound):
        per = _pairings_with(t, e)
        _check_lemma_max(t, e, per)
        if sum(per) == 0:
            ok = False
    return ok


def validate_triple(t: RelativeTriple, bound: int = DEFAULT_BOUND) -> None:
    """Necessary realizability checks beyond those done at construction.

    Positive-genus components must pair non-negatively with every symplectic
    -1 class.  Raises :class:`ConsistencyError` otherwise.
    """
    p = _plus(t)
    if p.surface.components:
        for e in enumerate_minus_one(p.manifold, bound):
            _check_lemma_max(p, e, _pairings_with(p, e))


def gw_stability_warnings(t: RelativeTriple) -> list[str]:
    """Soft realizability hints: embedded surfaces pair non-negatively with GW stable classes."""
    m = t.manifold
    out = []
    for i, c in enumerate(t.surface.components):
        if genus(c, m) == 0:
            continue
        if isinstance(c, PairingComponent):
            if kappa_s(m) is not KodDim.NEG_INF and c.f_sq >= 0 and c.k_dot_f < 0:
                out.append(f"component {i}: F² >= 0 and K·F < 0 on a manifold with κ^s >= 0")
            continue
        stable = []
        if m.kind is Kind.CP2:
            stable = [("H", m.unit("H"))]
        elif m.kind is Kind.S2XS2:
            stable = [("H1", m.unit("H1")), ("H2", m.unit("H2"))]
        elif m.is_ruled:
            stable = [("T", m.unit("T"))]
        for name, s in stable:
            if m.pair(c.coords, s) < 0:
                out.append(f"component {i}: F·{name} < 0 although {name} is GW stable")
    return out


# -- adjoint class -----------------------------------------------------------------------

@dataclass(frozen=True)
class AdjointInvariants:
    aq: Fraction  # (K + [F])²
    aw_sign: int  # sign of (K + [F])·[ω]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def adjoint_invariants(t: RelativeTriple) -> AdjointInvariants:
    """(K+[F])² and the sign of (K+[F])·ω, with the sign-classification checks applied."""
    m = t.manifold
    comps = t.surface.components
    if m.explicit:
        K = m.canonical
        A = tuple(a + b for a, b in zip(K, total_class(t))) if comps else K
        aq = m.pair(A, A)
        aw = _sign(m.pair(A, m.omega))
    else:
        kf = sum((c.k_dot_f for c in comps), Fraction(0))
        ff = sum((c.f_sq for c in comps), Fraction(0))
        aq = m.ksq() + 2 * kf + ff
        positive = m.minimal.k_dot_omega_positive or m.blowups > 0 or bool(comps)
        aw = 1 if positive else 0
    k = kappa_s(m)
    if k is not KodDim.NEG_INF and comps:
        if aq < 0:
            raise ConsistencyError("(K+F)² < 0 for a maximal positive-genus surface on a κ^s >= 0 manifold")
        if aq == 0 and any(genus(c, m) != 1 for c in comps):
            raise ConsistencyError("(K+F)² = 0 on a κ^s >= 0 manifold forces every component to be a torus")
    if k is not KodDim.NEG_INF:
        if aw < 0:
            raise ConsistencyError("(K+F)·ω < 0 on a κ^s >= 0 manifold")
        if aw == 0 and (comps or m.blowups or k is not KodDim.ZERO):
            raise ConsistencyError("(K+F)·ω = 0 only for a minimal κ^s = 0 manifold with F empty")
    return AdjointInvariants(aq, aw)


# -- relative minimal model --------------------------------------------------------------

def _orthogonal_greedy(m: FourManifoldModel, classes) -> list:
    chosen = []
    for e in classes:
        if all(m.pair(e, c) == 0 for c in chosen):
            chosen.append(e)
    return chosen


def _push_surface(t: RelativeTriple, bd, removed) -> SurfaceConfig:
    comps = []
    for c in t.surface.components:
        if isinstance(c, ClassComponent):
            comps.append(ClassComponent(bd.push(c.coords)))
        else:
            cs = [c.f_dot_e[i] for i in removed]
            keep = tuple(x for i, x in enumerate(c.f_dot_e) if i not in set(removed))
            comps.append(PairingComponent(c.k_dot_f - sum(cs), c.f_sq + sum(x * x for x in cs), keep))
    return SurfaceConfig(tuple(comps))


def relative_minimal_model(t: RelativeTriple, bound: int = DEFAULT_BOUND,
                           order: Callable[[list], list] | None = None) -> RelativeTriple:
    """Blow down the -1 classes orthogonal to F⁺ until F⁺ is maximal.

    With F⁺ nonempty those classes are pairwise orthogonal and the result is
    unique; ``order`` may reorder each blow-down batch (useful for checking
    that).  With F⁺ empty a maximal orthogonal subset is chosen greedily.
    """
    t = _plus(t)
    order = order or (lambda xs: xs)
    while True:
        m = t.manifold
        es = list(enumerate_minus_one(m, bound))
        if not t.surface.components:
            if not es:
                return t
            batch = es if not m.explicit else _orthogonal_greedy(m, es)
        else:
            batch = []
            for e in es:
                per = _pairings_with(t, e)
                _check_lemma_max(t, e, per)
                if sum(per) == 0:
                    batch.append(e)
            if not batch:
                return t
            if m.explicit:
                for i in range(len(batch)):
                    for j in range(i + 1, len(batch)):
                        if m.pair(batch[i], batch[j]) != 0:
                            raise UniquenessViolation(
                                f"-1 classes {_show(batch[i])} and {_show(batch[j])} are both orthogonal "
                                "to F but meet each other")
        batch = order(list(batch))
        bd = blow_down(m, batch)
        t = RelativeTriple(bd.model, _push_surface(t, bd, batch if not m.explicit else ()))


# -- relative Kodaira dimension ----------------------------------------------------------

def kappa_from_adjoint(aq, aw_sign: int) -> KodDim:
    if aw_sign < 0 or aq < 0:
        return KodDim.NEG_INF
    if aw_sign == 0:
        if aq > 0:
            raise ConsistencyError("(K+F)·ω = 0 with (K+F)² > 0 cannot occur")
        return KodDim.ZERO
    return KodDim.ONE if aq == 0 else KodDim.TWO


def kappa_relative(t: RelativeTriple, bound: int = DEFAULT_BOUND) -> KodDim:
    t = _plus(t)
    if not t.surface.components:
        return kappa_s(t.manifold)
    rm = relative_minimal_model(t, bound)
    inv = adjoint_invariants(rm)
    k = kappa_from_adjoint(inv.aq, inv.aw_sign)
    if k < kappa_s(t.manifold):
        raise ConsistencyError("relative Kodaira dimension fell below the absolute one")
    return k


class Case(str, enum.Enum):
    NEG_INF_CASE = "NEG_INF_CASE"
    ZERO_CASE = "ZERO_CASE"
    OTHER = "OTHER"


def classify(t: RelativeTriple, bound: int = DEFAULT_BOUND) -> Case:
    """Which classification theorem applies to a nonempty positive-genus F."""
    t = _plus(t)
    if not t.surface.components:
        raise ValidationError("classification needs a nonempty surface with positive-genus components")
    rm = relative_minimal_model(t, bound)
    m = rm.manifold
    if m.explicit:
        F = total_class(rm)
        if m.is_ruled and m.blowups == 0 and m.pair(F, m.unit("T")) == 1:
            case = Case.NEG_INF_CASE
        elif F == tuple(-x for x in m.canonical) and kappa_s(m) is KodDim.NEG_INF:
            case = Case.ZERO_CASE
        else:
            case = Case.OTHER
    else:
        case = Case.OTHER
    k = kappa_relative(t, bound)
    if (case is Case.NEG_INF_CASE) != (k is KodDim.NEG_INF) or (case is Case.ZERO_CASE) != (k is KodDim.ZERO):
        raise ConsistencyError(f"classification {case.value} disagrees with κ = {k}")
    return case


def fiber_sum_kappa(t1: RelativeTriple, t2: RelativeTriple, bound: int = DEFAULT_BOUND) -> KodDim:
    """κ^s of a relatively minimal fibre sum along connected surfaces of equal genus."""
    gs = []
    for t in (t1, t2):
        if len(t.surface.components) != 1:
            raise ValidationError("fibre sums glue along connected surfaces")
        g = genus(t.surface.components[0], t.manifold)
        if g < 1:
            raise ValidationError("fibre sums need genus >= 1")
        gs.append(g)
    if gs[0] != gs[1]:
        raise ValidationError(f"genus mismatch: {gs[0]} vs {gs[1]}")
    return max(kappa_relative(t1, bound), kappa_relative(t2, bound))


# -- JSON --------------------------------------------------------------------------------

def _pairing_from_json(obj: dict) -> PairingComponent:
    try:
        return PairingComponent(obj["K_dot_F"], obj["F_sq"], tuple(obj.get("F_dot_E", ())),
                                bool(obj.get("F_omega_pos", True)))
    except KeyError as exc:
        raise ValidationError(f"pairing component needs K_dot_F and F_sq: missing {exc}") from exc


def surface_from_json(obj) -> SurfaceConfig:
    if obj is None:
        return SurfaceConfig()
    if isinstance(obj, dict):
        obj = obj.get("components", [])
    if not isinstance(obj, list):
        raise ValidationError("surface JSON needs a 'components' list")
    return SurfaceConfig(tuple(obj))


def surface_to_json(F: SurfaceConfig) -> dict:
    comps = []
    for c in F.components:
        if isinstance(c, ClassComponent):
            comps.append([format_rational(x) for x in c.coords])
        else:
            comps.append({"K_dot_F": format_rational(c.k_dot_f), "F_sq": format_rational(c.f_sq),
                          "F_dot_E": [format_rational(x) for x in c.f_dot_e], "F_omega_pos": c.omega_positive})
    return {"components": comps}
