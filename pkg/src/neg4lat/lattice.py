"""Integral classes in H_2 of CP^2 # k CP^2-bar and their intersection algebra.

A class is stored as ``(a, b)`` meaning ``a*H - sum(b[i] * e_i)``.  The
intersection form is diag(1, -1, ..., -1), so with this sign convention
``pair(x, y) = x.a*y.a - sum(x.b[i]*y.b[i])`` and the exceptional generator
``e_i`` is the class with ``a = 0`` and ``b_i = -1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class DimensionError(ValueError):
    """Classes living over different numbers of blow-ups were combined."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


@dataclass(frozen=True)
class LatticeClass:
    a: int
    b: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.a, int) or isinstance(self.a, bool):
            raise TypeError(f"coefficient of H must be an int, got {self.a!r}")
        b = tuple(self.b)
        if any(not isinstance(v, int) or isinstance(v, bool) for v in b):
            raise TypeError(f"exceptional coefficients must be ints, got {b!r}")
        object.__setattr__(self, "b", b)

    @property
    def k(self) -> int:
        return len(self.b)

    @classmethod
    def line(cls, k: int = 0) -> LatticeClass:
        return cls(1, (0,) * k)

    @classmethod
    def exceptional(cls, i: int, k: int) -> LatticeClass:
        """The generator e_i (0-based index)."""
        if not 0 <= i < k:
            raise IndexError(f"e_{i} does not exist for k={k}")
        b = [0] * k
        b[i] = -1
        return cls(0, tuple(b))

    def padded(self, k: int) -> LatticeClass:
        """Append zero coefficients up to ``k`` blow-ups."""
        if k < self.k:
            raise DimensionError(f"cannot pad a k={self.k} class down to k={k}")
        return LatticeClass(self.a, self.b + (0,) * (k - self.k))

    def __neg__(self):
        return LatticeClass(-self.a, tuple(-v for v in self.b))

    def __add__(self, other):
        if not isinstance(other, LatticeClass):
            return NotImplemented
        _check_dims(self, other)
        return LatticeClass(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other):
        if not isinstance(other, LatticeClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, m):
        if not isinstance(m, int) or isinstance(m, bool):
            return NotImplemented
        return LatticeClass(m * self.a, tuple(m * v for v in self.b))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"k": self.k, "a": self.a, "b": list(self.b)}

    def compact(self) -> str:
        return f"{self.a};" + ",".join(str(v) for v in self.b)

    def __str__(self):
        return self.compact()


@dataclass(frozen=True)
class RationalClass:
    """Same basis as :class:`LatticeClass` with exact rational coefficients."""

    a: Fraction
    b: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", tuple(_as_fraction(v) for v in self.b))

    @property
    def k(self) -> int:
        return len(self.b)

    @classmethod
    def from_lattice(cls, x: LatticeClass) -> RationalClass:
        return cls(Fraction(x.a), tuple(Fraction(v) for v in x.b))

    def to_json(self) -> dict:
        return {"k": self.k, "a": str(self.a), "b": [str(v) for v in self.b]}


AnyClass = Union[LatticeClass, RationalClass]


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not an exact rational: {v!r}") from exc
    return Fraction(v)


def _check_dims(x: AnyClass, y: AnyClass):
    if x.k != y.k:
        raise DimensionError(f"classes live over k={x.k} and k={y.k}")


def canonical_std(k: int) -> LatticeClass:
    """K_st = -3H + sum(e_i)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    return LatticeClass(-3, (-1,) * k)


def pair(x: AnyClass, y: AnyClass):
    _check_dims(x, y)
    return x.a * y.a - sum(u * v for u, v in zip(x.b, y.b))


def square(x: AnyClass):
    return pair(x, x)


def k_dot(x: LatticeClass) -> int:
    """pair(K_st, x), i.e. -3a + sum(b)."""
    return -3 * x.a + sum(x.b)


def adjunction_genus(x: LatticeClass) -> Fraction:
    """Genus forced by the adjunction equality K.C + C^2 = 2g - 2."""
    return 1 + Fraction(square(x) + k_dot(x), 2)


def is_sphere_class(x: LatticeClass) -> bool:
    return k_dot(x) == -2 - square(x)


def normalize_trivial(x: LatticeClass) -> LatticeClass:
    """Flip every e_i to make b_i >= 0 and sort b non-increasingly."""
    return LatticeClass(x.a, tuple(sorted((abs(v) for v in x.b), reverse=True)))


def is_trivial_normal(x: LatticeClass) -> bool:
    return all(v >= 0 for v in x.b) and all(u >= v for u, v in zip(x.b, x.b[1:]))


def drop_zeros(x: LatticeClass) -> LatticeClass:
    return LatticeClass(x.a, tuple(v for v in x.b if v != 0))


# -- literal formats ---------------------------------------------------------


def parse_class(text: str) -> LatticeClass:
    """Parse ``{"k":..,"a":..,"b":[..]}``, ``a;b1,...,bk`` or ``(a,b1,...,bk)``."""
    s = text.strip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed class literal {text!r}: {exc}") from exc
        return class_from_json(obj)
    if s.startswith("(") and s.endswith(")"):
        parts = [p.strip() for p in s[1:-1].split(",") if p.strip()]
        if not parts:
            raise DomainError(f"malformed class literal {text!r}")
        ints = [_parse_int(p, text) for p in parts]
        return LatticeClass(ints[0], tuple(ints[1:]))
    if ";" not in s:
        raise DomainError(f"malformed class literal {text!r}: expected 'a;b1,...,bk'")
    head, _, tail = s.partition(";")
    a = _parse_int(head, text)
    b = tuple(_parse_int(p, text) for p in tail.split(",")) if tail.strip() else ()
    return LatticeClass(a, b)


def class_from_json(obj) -> LatticeClass:
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise DomainError(f"class object needs 'a' and 'b': {obj!r}")
    a = _parse_int(obj["a"], obj)
    if not isinstance(obj["b"], list):
        raise DomainError(f"'b' must be a list: {obj!r}")
    b = tuple(_parse_int(v, obj) for v in obj["b"])
    if "k" in obj and obj["k"] != len(b):
        raise DomainError(f"'k'={obj['k']} disagrees with len(b)={len(b)}")
    return LatticeClass(a, b)


def parse_rational_class(text: str) -> RationalClass:
    s = text.strip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed class literal {text!r}: {exc}") from exc
        if not isinstance(obj, dict) or "a" not in obj or not isinstance(obj.get("b"), list):
            raise DomainError(f"class object needs 'a' and 'b': {obj!r}")
        return RationalClass(_parse_rational(obj["a"]), tuple(_parse_rational(v) for v in obj["b"]))
    if ";" not in s:
        raise DomainError(f"malformed class literal {text!r}")
    head, _, tail = s.partition(";")
    b = tuple(_parse_rational(p) for p in tail.split(",")) if tail.strip() else ()
    return RationalClass(_parse_rational(head), b)


def _parse_int(v, ctx) -> int:
    if isinstance(v, bool):
        raise DomainError(f"expected an integer in {ctx!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise DomainError(f"expected an integer, got {v!r} in {ctx!r}")


def _parse_rational(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise DomainError(f"expected an exact rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return _as_fraction(v)
    raise DomainError(f"expected an exact rational, got {v!r}")
