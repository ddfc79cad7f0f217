"""Kodaira dimension of 4-dimensional Lefschetz fibrations via weighted divisors on the base."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, UnsupportedError, ValidationError
from .kodaira_low import (
    KodDim,
    QDivisor,
    kappa_number,
    kappa_surface,
    kappa_surface_divisor,
    surface_bundle_kappa,
)


def _nonneg_int(name, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ValidationError(f"{name} must be a non-negative integer, got {v!r}")
    return v


def _separating(g: int, s) -> tuple:
    s = tuple(_nonneg_int("separating count", x) for x in (s or ()))
    top = g // 2
    if len(s) > top:
        if any(s[top:]):
            raise ValidationError(f"genus {g} has separating types p = 1..{top} only")
        s = s[:top]
    return s + (0,) * (top - len(s))


@dataclass(frozen=True)
class LefschetzData:
    g: int
    h: int = 0
    a: int = 0
    s: tuple = ()
    hyperelliptic: bool = False
    minimal: bool = True
    c: int = 0
    c_prime: int = 0
    fiber_homologically_trivial: bool = False

    def __post_init__(self):
        if isinstance(self.g, bool) or not isinstance(self.g, int) or self.g < 1:
            raise ValidationError("fibre genus must be >= 1 (sphere fibres admit no relatively minimal singular fibres)")
        for name in ("h", "a", "c", "c_prime"):
            _nonneg_int(name, getattr(self, name))
        object.__setattr__(self, "s", _separating(self.g, self.s))
        if self.minimal and (self.c or self.c_prime):
            raise ValidationError("c and c_prime describe blow-downs and must be 0 for a minimal total space")

    @property
    def singular_fibres(self) -> int:
        return self.a + sum(self.s)

    def to_json(self) -> dict:
        out = asdict(self)
        out["s"] = list(self.s)
        if not self.fiber_homologically_trivial:
            del out["fiber_homologically_trivial"]
        return out

    @classmethod
    def from_json(cls, obj) -> "LefschetzData":
        if not isinstance(obj, dict) or "g" not in obj:
            raise ValidationError("fibration JSON needs at least 'g'")
        known = {"g", "h", "a", "s", "hyperelliptic", "minimal", "c", "c_prime", "fiber_homologically_trivial"}
        extra = set(obj) - known
        if extra:
            raise ValidationError(f"unknown fibration fields: {sorted(extra)}")
        return cls(**obj)


@dataclass(frozen=True)
class WeightSystem:
    b_ns: Fraction
    b_sep: tuple = field(default=())


def euler_char(L: LefschetzData) -> int:
    return (2 - 2 * L.g) * (2 - 2 * L.h) + L.singular_fibres


def endo_signature(g: int, a: int, s=(), strict: bool = True) -> Fraction:
    """Signature of a hyperelliptic genus-g fibration over S²; must be an integer when ``strict``."""
    if g < 2:
        raise ValidationError("the signature formula needs g >= 2")
    s = _separating(g, s)
    sigma = -Fraction(g + 1, 2 * g + 1) * a
    for p, sp in enumerate(s, start=1):
        sigma += (Fraction(4 * p * (g - p), 2 * g + 1) - 1) * sp
    if strict and sigma.denominator != 1:
        raise ValidationError(f"signature {sigma} is not an integer: no such hyperelliptic fibration")
    return sigma


def _k_squared_expanded(g: int, a: int, s: tuple) -> Fraction:
    k2 = Fraction(2 * 2 * (2 - 2 * g)) + Fraction(g - 1, 2 * g + 1) * a
    for p, sp in enumerate(s, start=1):
        k2 += Fraction(6 * p * (g - 2 * p) + 2 * g * (p - 1) + (4 * g * p - 1), 2 * g + 1) * sp
    return k2


def k_squared_hyperelliptic(g: int, a: int, s=(), strict: bool = True) -> Fraction:
    """K² = 3σ + 2χ over S², evaluated twice (signature route and expanded form)."""
    s = _separating(g, s)
    chi = 2 * (2 - 2 * g) + a + sum(s)
    k2 = 3 * endo_signature(g, a, s, strict) + 2 * chi
    if k2 != _k_squared_expanded(g, a, s):
        raise ConsistencyError("the two K² evaluations disagree")
    return k2


def weights(g: int) -> WeightSystem:
    if isinstance(g, bool) or not isinstance(g, int) or g < 1:
        raise ValidationError("weights are defined for fibre genus >= 1")
    if g == 1:
        return WeightSystem(Fraction(1, 12))
    den = (4 * g - 4) * (2 * g + 1)
    b_ns = Fraction(g - 1, den)
    b_sep = tuple(Fraction(6 * p * (g - 2 * p) + 2 * g * (p - 1) + (4 * g * p - 1), den)
                  for p in range(1, g // 2 + 1))
    return WeightSystem(b_ns, b_sep)


def base_divisor(L: LefschetzData) -> QDivisor:
    w = weights(L.g)
    entries = [(f"ns{i}", w.b_ns) for i in range(L.a)]
    for p, sp in enumerate(L.s, start=1):
        entries += [(f"sep{p}_{j}", w.b_sep[p - 1]) for j in range(sp)]
    return QDivisor(tuple(entries))


def kappa_total(L: LefschetzData) -> KodDim:
    """κ of the total space as κ^t(B, D) + κ^t(F), with the non-minimal correction over S²."""
    if L.fiber_homologically_trivial:
        raise UnsupportedError("torus fibrations over S² with homologically trivial fibre (Hopf surfaces) "
                               "carry no symplectic structure and are excluded")
    g, h = L.g, L.h
    if L.singular_fibres == 0:
        return surface_bundle_kappa(h, g)
    D = base_divisor(L)
    if h >= 1:
        # every positive weight gives the same answer here
        return kappa_surface_divisor(h, D) + kappa_surface(g)
    if g == 1:
        if L.a % 12:
            raise ValidationError(f"a relatively minimal elliptic fibration over S² has 12n singular fibres, got {L.a}")
        return kappa_surface_divisor(0, D) + KodDim.ZERO
    if not L.hyperelliptic:
        raise UnsupportedError("genus >= 2 fibrations over S² are covered only in the hyperelliptic case")
    k2 = k_squared_hyperelliptic(g, L.a, L.s)
    if L.minimal:
        by_k2 = kappa_number(k2) + KodDim.ONE
        by_base = kappa_surface_divisor(0, D) + kappa_surface(g)
        if by_k2 != by_base:
            raise ConsistencyError("base divisor and K² give different Kodaira dimensions")
        return by_k2
    base_term = -2 + D.degree() + Fraction(L.c, 4 * g - 4)
    # K'² of the minimal model is K² + c, which is (4g-4) times the base term
    if k2 + L.c != (4 * g - 4) * base_term:
        raise ConsistencyError("minimal-model K² disagrees with the corrected base divisor")
    return kappa_number(base_term) + kappa_number(2 * g - 2 - L.c_prime)


def double_k_squared(k_plus_f_squared) -> Fraction:
    """K² of the self fibre sum, 2(K+F)²."""
    return 2 * Fraction(k_plus_f_squared)


def self_fiber_sum_k_squared(L: LefschetzData) -> Fraction:
    """K² of the self fibre sum from the weights: 2(Σb_i - 1)(4g - 4)."""
    if L.g < 2:
        raise ValidationError("needs fibre genus >= 2")
    return 2 * (base_divisor(L).degree() - 1) * (4 * L.g - 4)
