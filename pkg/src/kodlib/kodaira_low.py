"""Kodaira dimension in dimensions 0-3 and relative surfaces with Q-divisors."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import ValidationError
from .lattice import format_rational, to_rational


@total_ordering
class KodDim(enum.Enum):
    """An extended value in {-inf, 0, 1, 2}; -inf absorbs under addition."""

    NEG_INF = "-inf"
    ZERO = "0"
    ONE = "1"
    TWO = "2"

    @property
    def rank(self) -> int | None:
        return None if self is KodDim.NEG_INF else int(self.value)

    @classmethod
    def of(cls, value) -> "KodDim":
        """Build from an int in 0..2, the strings "-inf"/"0"/"1"/"2", or None for -inf."""
        if isinstance(value, KodDim):
            return value
        if value is None:
            return cls.NEG_INF
        if isinstance(value, str):
            return cls(value.strip())
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 2:
            raise ValidationError(f"no Kodaira dimension {value!r} in scope")
        return cls(str(value))

    def _key(self) -> int:
        return -1 if self is KodDim.NEG_INF else int(self.value)

    def __lt__(self, other):
        if not isinstance(other, KodDim):
            return NotImplemented
        return self._key() < other._key()

    def __add__(self, other):
        if not isinstance(other, KodDim):
            return NotImplemented
        if self is KodDim.NEG_INF or other is KodDim.NEG_INF:
            return KodDim.NEG_INF
        return KodDim.of(self.rank + other.rank)

    def __str__(self) -> str:
        return self.value


NEG_INF = KodDim.NEG_INF


def kappa_number(r) -> KodDim:
    """-inf, 0 or 1 according to the sign of a rational number."""
    r = to_rational(r)
    if r < 0:
        return KodDim.NEG_INF
    return KodDim.ZERO if r == 0 else KodDim.ONE


def kappa_dim_le1(dim: int, components: int) -> KodDim:
    if dim not in (0, 1):
        raise ValidationError("dimension must be 0 or 1")
    if components < 0:
        raise ValidationError("component count must be non-negative")
    return KodDim.NEG_INF if components == 0 else KodDim.ZERO


def kappa_surface(g: int) -> KodDim:
    _check_genus(g)
    return kappa_number(2 * g - 2)


def _check_genus(g) -> None:
    if isinstance(g, bool) or not isinstance(g, int) or g < 0:
        raise ValidationError(f"genus must be a non-negative integer, got {g!r}")


@dataclass(frozen=True)
class QDivisor:
    """A finite rational combination of labelled points on a surface."""

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((str(pid), to_rational(w)) for pid, w in self.entries)
        ids = [pid for pid, _ in entries]
        if len(set(ids)) != len(ids):
            raise ValidationError("divisor point ids must be distinct")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def uniform(cls, count: int, weight, prefix: str = "x") -> "QDivisor":
        return cls(tuple((f"{prefix}{i}", weight) for i in range(count)))

    def degree(self) -> Fraction:
        """c(D), the sum of the weights."""
        return sum((w for _, w in self.entries), Fraction(0))

    def is_effective(self) -> bool:
        return all(w >= 0 for _, w in self.entries)

    def is_negative(self) -> bool:
        return all(w <= 0 for _, w in self.entries)

    def is_integral(self) -> bool:
        return all(w.denominator == 1 for _, w in self.entries)

    def __add__(self, other: "QDivisor") -> "QDivisor":
        return QDivisor(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> dict:
        return {"points": [{"id": pid, "weight": format_rational(w)} for pid, w in self.entries]}

    @classmethod
    def from_json(cls, obj) -> "QDivisor":
        points = obj.get("points", []) if isinstance(obj, dict) else obj
        try:
            return cls(tuple((p["id"], p["weight"]) for p in points))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"divisor points need 'id' and 'weight': {exc}") from exc


def kappa_surface_divisor(g: int, D: QDivisor | None = None) -> KodDim:
    """Relative Kodaira dimension of a genus-g surface: sign of 2g - 2 + c(D)."""
    _check_genus(g)
    if D is None or not len(D):
        return kappa_surface(g)
    return kappa_number(2 * g - 2 + D.degree())


class Geometry(enum.Enum):
    S3 = "S3"
    S2xR = "S2xR"
    E3 = "E3"
    Nil = "Nil"
    Sol = "Sol"
    H2xR = "H2xR"
    SL2R_tilde = "SL2R_tilde"
    H3 = "H3"


_GEOMETRY_CATEGORY = {
    Geometry.S3: KodDim.NEG_INF,
    Geometry.S2xR: KodDim.NEG_INF,
    Geometry.E3: KodDim.ZERO,
    Geometry.Nil: KodDim.ZERO,
    Geometry.Sol: KodDim.ZERO,
    Geometry.H2xR: KodDim.ONE,
    Geometry.SL2R_tilde: KodDim.ONE,
    Geometry.H3: KodDim.ONE,
}


def geometry(label) -> Geometry:
    try:
        return label if isinstance(label, Geometry) else Geometry(label)
    except ValueError as exc:
        raise ValidationError(f"unknown Thurston geometry {label!r}") from exc


def kappa_3manifold(pieces: Iterable) -> KodDim:
    """Kodaira dimension from the geometries of one prime/JSJ decomposition."""
    return max((_GEOMETRY_CATEGORY[geometry(p)] for p in pieces), default=KodDim.NEG_INF)


def kappa_disconnected(ks: Iterable[KodDim]) -> KodDim:
    return max((KodDim.of(k) for k in ks), default=KodDim.NEG_INF)


@dataclass(frozen=True)
class RamifiedCover:
    chi_cover: int
    divisor: QDivisor
    kappa: KodDim


def riemann_hurwitz(N: int, chi_base: int, indices: Sequence[int]) -> RamifiedCover:
    if N < 1:
        raise ValidationError("covering degree must be positive")
    if chi_base % 2 or chi_base > 2:
        raise ValidationError("base Euler characteristic must be even and at most 2")
    for e in indices:
        if not 1 <= e <= N:
            raise ValidationError(f"ramification index {e} outside 1..{N}")
    chi_cover = N * chi_base - sum(e - 1 for e in indices)
    if chi_cover % 2:
        raise ValidationError(f"Riemann-Hurwitz gives odd Euler characteristic {chi_cover}")
    if chi_cover > 2 * N:
        raise ValidationError("cover would have more components than sheets")
    D = QDivisor(tuple((f"p{i}", Fraction(e - 1, N)) for i, e in enumerate(indices)))
    kappa = kappa_surface_divisor((2 - chi_base) // 2, D)
    # kappa_number(-chi_cover) is the same sign computed on the cover side
    assert kappa == kappa_number(-chi_cover)
    return RamifiedCover(chi_cover, D, kappa)


@dataclass(frozen=True)
class SeifertData:
    base_genus: int
    multiplicities: tuple = ()

    def __post_init__(self):
        _check_genus(self.base_genus)
        mult = tuple(self.multiplicities)
        for a in mult:
            if isinstance(a, bool) or not isinstance(a, int) or a < 2:
                raise ValidationError(f"multiple fibre multiplicity must be an integer >= 2, got {a!r}")
        object.__setattr__(self, "multiplicities", mult)

    def divisor(self) -> QDivisor:
        return QDivisor(tuple((f"p{i}", 1 - Fraction(1, a)) for i, a in enumerate(self.multiplicities)))

    def orbifold_euler_characteristic(self) -> Fraction:
        return 2 - 2 * self.base_genus - self.divisor().degree()


def seifert_kappa(s: SeifertData) -> KodDim:
    return kappa_surface_divisor(s.base_genus, s.divisor())


def bundle_kappa_le3(kappa_base: KodDim, kappa_fiber: KodDim) -> KodDim:
    return KodDim.of(kappa_base) + KodDim.of(kappa_fiber)


def product_circle_kappa(kappa_m3: KodDim) -> KodDim:
    return KodDim.of(kappa_m3) + KodDim.ZERO


def surface_bundle_kappa(g_base: int, g_fiber: int) -> KodDim:
    """Kodaira dimension of a symplectic surface bundle over a surface.

    Hopf surfaces (homologically trivial torus fibres over S²) carry no
    symplectic structure and are outside the domain of this function.
    """
    return kappa_surface(g_base) + kappa_surface(g_fiber)
