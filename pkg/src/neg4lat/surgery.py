"""Exact bookkeeping of (K^2, K.omega) through blow-ups, fiber sums and -4-blow-downs.

Kodaira dimension of a minimal symplectic 4-manifold is read off the signs of
K.omega and K^2; everything here stays in integers and Fractions so that the
sign tests are exact.  The classifier at the bottom is a plain rule table
whose rules each carry an identifier naming the structural statement used.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .lattice import DomainError


class Kappa(enum.IntEnum):
    NEG_INF = -1
    ZERO = 0
    ONE = 1
    TWO = 2

    def __str__(self):
        return "-inf" if self is Kappa.NEG_INF else str(self.value)

    def to_json(self):
        return "-inf" if self is Kappa.NEG_INF else self.value

    @classmethod
    def parse(cls, v) -> Kappa:
        if isinstance(v, Kappa):
            return v
        s = str(v).strip().lower()
        if s in ("-inf", "-infinity", "neg_inf", "-oo"):
            return cls.NEG_INF
        try:
            return cls(int(s))
        except ValueError:
            raise DomainError(f"not a Kodaira dimension: {v!r}") from None


class SymplecticAreaError(DomainError):
    pass


class GluingError(DomainError):
    pass


class MinimalityError(DomainError):
    pass


class InfeasibleScenario(DomainError):
    pass


def _q(v) -> Fraction:
    if isinstance(v, (bool, float)):
        raise DomainError(f"expected an exact rational, got {v!r}")
    try:
        return Fraction(v.strip()) if isinstance(v, str) else Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DomainError(f"expected an exact rational, got {v!r}") from exc


def _positive_area(area, what="area") -> Fraction:
    area = _q(area)
    if area <= 0:
        raise SymplecticAreaError(f"{what} must be positive, got {area}")
    return area


def kappa_surface(genus: int) -> Kappa:
    if genus < 0:
        raise DomainError("genus must be nonnegative")
    if genus == 0:
        return Kappa.NEG_INF
    return Kappa.ZERO if genus == 1 else Kappa.ONE


@dataclass(frozen=True)
class InvariantState:
    K_sq: int
    K_omega: Fraction
    minimal: bool = False
    label: str = ""

    def __post_init__(self):
        if isinstance(self.K_sq, bool) or not isinstance(self.K_sq, int):
            raise DomainError(f"K_sq must be an integer, got {self.K_sq!r}")
        object.__setattr__(self, "K_omega", _q(self.K_omega))

    def to_json(self) -> dict:
        return {"K_sq": self.K_sq, "K_omega": str(self.K_omega),
                "minimal": self.minimal, "label": self.label}

    @classmethod
    def from_json(cls, obj: dict) -> InvariantState:
        try:
            k_sq = obj["K_sq"]
            if isinstance(k_sq, str):
                k_sq = int(k_sq)
            return cls(k_sq, _q(obj.get("K_omega", 0)), bool(obj.get("minimal", False)),
                       str(obj.get("label", "")))
        except (KeyError, ValueError) as exc:
            raise DomainError(f"bad state {obj!r}: {exc}") from exc


def kappa4(state: InvariantState) -> Kappa:
    """Kodaira dimension of a minimal manifold from the signs of K.omega and K^2."""
    if not state.minimal:
        raise MinimalityError("state is not minimal; apply minimal-model reduction first")
    kw, ks = state.K_omega, state.K_sq
    if kw < 0 or ks < 0:
        return Kappa.NEG_INF
    if kw == 0 and ks == 0:
        return Kappa.ZERO
    if kw > 0 and ks == 0:
        return Kappa.ONE
    if kw > 0 and ks > 0:
        return Kappa.TWO
    raise DomainError(f"K.omega = 0 with K^2 = {ks} > 0 is not assigned a Kodaira dimension")


def blow_down(state: InvariantState, area_E, minimal: bool = False) -> InvariantState:
    area = _positive_area(area_E, "area of E")
    return replace(state, K_sq=state.K_sq + 1, K_omega=state.K_omega - area, minimal=minimal)


def blow_up(state: InvariantState, area) -> InvariantState:
    area = _positive_area(area, "area of the new exceptional sphere")
    return replace(state, K_sq=state.K_sq - 1, K_omega=state.K_omega + area, minimal=False)


def minus4_blow_down(state: InvariantState, area_V, minimal: bool = False) -> InvariantState:
    """Sum with (CP^2, 2H) along a -4-sphere V whose area matches that of 2H."""
    area = _positive_area(area_V, "area of V")
    return replace(state, K_sq=state.K_sq + 1, K_omega=state.K_omega + area / 2, minimal=minimal)


def fiber_sum_Komega(KwX, KwY, areaVX, areaVY) -> Fraction:
    ax = _positive_area(areaVX, "area of V in X")
    ay = _positive_area(areaVY, "area of V in Y")
    if ax != ay:
        raise GluingError(f"areas of V must match to glue: {ax} != {ay}")
    return _q(KwX) + _q(KwY) + ax + ay


def split_class(KX_AX: int, AX_V: int, KY_AY: int, AY_V: int, AX_sq: int, AY_sq: int):
    """(K_M.A, A^2) for a class A of the sum splitting as (A_X, A_Y)."""
    return KX_AX + AX_V + KY_AY + AY_V, AX_sq + AY_sq


def fiber_sum_K_sq(KX_sq: int, KY_sq: int, genus: int = 0) -> int:
    # K_M = (K_X + V_X, K_Y + V_Y) split; adjunction and V_X^2 + V_Y^2 = 0 collapse the squares
    if genus < 0:
        raise DomainError("genus must be nonnegative")
    return KX_sq + KY_sq + 8 * genus - 8


def fiber_sum(state: InvariantState, K_sq_Y: int, K_omega_Y, area_VX, area_VY=None,
              genus: int = 0, minimal: bool = False) -> InvariantState:
    area_VY = area_VX if area_VY is None else area_VY
    return replace(
        state,
        K_sq=fiber_sum_K_sq(state.K_sq, K_sq_Y, genus),
        K_omega=fiber_sum_Komega(state.K_omega, K_omega_Y, area_VX, area_VY),
        minimal=minimal,
    )


def kred_solve(K_M_sq: int, K_Xm_sq: int) -> int:
    """Number of blow-ups k with K_M^2 = K_{X_m}^2 - k + 1."""
    k = K_Xm_sq - K_M_sq + 1
    if k < 0:
        raise InfeasibleScenario(f"K_M^2={K_M_sq}, K_Xm^2={K_Xm_sq} would need k={k} < 0")
    return k


# -- minimality of a fiber sum ----------------------------------------------

NOT_MINIMAL, MINIMAL_IFF_Z, MINIMAL = "not-minimal", "minimal-iff-Z-minimal", "minimal"


@dataclass(frozen=True)
class SumDescriptor:
    genus: int
    vx_square: int
    vy_square: int
    exceptional_off_V: bool = False  # X - V_X or Y - V_Y holds a symplectic -1-sphere
    cp2_two_meeting: bool = False  # Y = (CP^2, 2H) and Z has >= 2 disjoint E_i with E_i.V = 1
    bundle_section: bool = False  # one side is an S^2-bundle with V a section

    def __post_init__(self):
        if self.genus < 0:
            raise DomainError("genus must be nonnegative")
        if self.vx_square + self.vy_square != 0:
            raise GluingError(f"normal squares must cancel: {self.vx_square} + {self.vy_square} != 0")
        if self.cp2_two_meeting and self.genus != 0:
            raise DomainError("the (CP^2, 2H) side glues along a sphere")


def minimality_of_sum(d: SumDescriptor) -> str:
    if d.exceptional_off_V or d.cp2_two_meeting:
        return NOT_MINIMAL
    if d.bundle_section:
        return MINIMAL_IFF_Z
    return MINIMAL


# -- pipelines ---------------------------------------------------------------

STEP_OPS = ("init", "blow_up", "blow_down", "minus4", "fiber_sum")


def run_pipeline(steps: list) -> dict:
    """Run a list of step objects; the first must be ``{"op": "init", ...}``.

    Steps may carry ``"minimal": true`` to assert the result is minimal.
    Returns the state trace and, for a minimal final state, its Kodaira dimension.
    """
    if not isinstance(steps, list) or not steps:
        raise DomainError("pipeline must be a non-empty JSON list of steps")
    first = steps[0]
    if not isinstance(first, dict) or first.get("op") != "init":
        raise DomainError('first pipeline step must be {"op": "init", "K_sq": ..., "K_omega": ...}')
    state = InvariantState.from_json(first)
    trace = [{"op": "init", "state": state.to_json()}]
    for step in steps[1:]:
        if not isinstance(step, dict):
            raise DomainError(f"step must be an object: {step!r}")
        op = step.get("op")
        minimal = bool(step.get("minimal", False))
        try:
            if op == "blow_up":
                state = blow_up(state, step["area"])
            elif op == "blow_down":
                state = blow_down(state, step["area"], minimal)
            elif op == "minus4":
                state = minus4_blow_down(state, step["area"], minimal)
            elif op == "fiber_sum":
                state = fiber_sum(state, int(step["K_sq_Y"]), step["K_omega_Y"], step["area_VX"],
                                  step.get("area_VY"), int(step.get("genus", 0)), minimal)
            else:
                raise DomainError(f"unknown pipeline op {op!r}; expected one of {STEP_OPS[1:]}")
        except KeyError as exc:
            raise DomainError(f"step {step!r} is missing {exc}") from None
        if "label" in step:
            state = replace(state, label=str(step["label"]))
        trace.append({"op": op, "state": state.to_json()})
    result = {"trace": trace, "final": state.to_json(), "kappa": None}
    if state.minimal:
        result["kappa"] = kappa4(state).to_json()
    else:
        result["kappa_note"] = "final state not asserted minimal"
    return result


def load_pipeline(path) -> list:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DomainError(f"pipeline {path} is not valid JSON: {exc}") from exc


# -- structure rules for -4-blow-downs ---------------------------------------

NOT_RULED, RATIONAL, IRRATIONAL_RULED = "not-ruled", "rational", "irrational-ruled"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class BlowdownScenario:
    kappa_X: Kappa
    n_sm: Union[int, str]
    k: int
    artificial: bool = False
    ruled: str = NOT_RULED
    n_sy: Optional[Union[int, str]] = None

    def __post_init__(self):
        object.__setattr__(self, "kappa_X", Kappa.parse(self.kappa_X))
        for name in ("n_sm", "n_sy"):
            v = getattr(self, name)
            if v is None or v == UNBOUNDED:
                continue
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer or 'unbounded'")
        if self.k < 0:
            raise DomainError("k must be nonnegative")
        if self.ruled not in (NOT_RULED, RATIONAL, IRRATIONAL_RULED):
            raise DomainError(f"unknown ruledness {self.ruled!r}")
        if (self.kappa_X == Kappa.NEG_INF) != (self.ruled != NOT_RULED):
            raise DomainError("kappa_X = -inf exactly when X is rational or ruled")

    @property
    def sy(self):
        # without artificiality the two counts coincide once kappa_X >= 0
        return self.n_sm if self.n_sy is None else self.n_sy


@dataclass(frozen=True)
class Classification:
    kappa_M: Optional[Kappa]
    structure: str
    rule: str

    def to_json(self) -> dict:
        return {"kappa_M": None if self.kappa_M is None else self.kappa_M.to_json(),
                "structure": self.structure, "rule": self.rule}


def _gt(v, n):
    return v == UNBOUNDED or (v is not None and v > n)


def _ge(v, n):
    return v == UNBOUNDED or (v is not None and v >= n)


def classify_minus4(s: BlowdownScenario) -> Classification:
    """Kodaira dimension and shape of the -4-blow-down M of a relatively minimal pair."""
    n, kX = s.n_sm, s.kappa_X

    if s.ruled == IRRATIONAL_RULED:
        return Classification(Kappa.NEG_INF, "artificial -4-sphere; M is ruled",
                              "irrational-ruled-is-artificial")
    if _gt(n, 4) or _ge(s.sy, 4):
        return Classification(Kappa.NEG_INF, "X and M rational or ruled",
                              "four-or-more-meeting-spheres")
    if s.ruled == RATIONAL:
        return _classify_rational(s)

    # kappa_X >= 0 from here on
    if s.artificial:
        if s.sy == 3 and s.k == 4:
            return Classification(kX, "X = X_m#4CP2bar, M = X_m#3CP2bar", "three-symplectic-meeting-spheres")
        return Classification(kX, "M has the Kodaira dimension of X", "artificial-sphere")
    if s.k > 4:
        raise InfeasibleScenario("a non-artificial pair with kappa_X >= 0 has at most 3 blow-ups")
    if n == 3:
        raise InfeasibleScenario("n_sm = 3 forces an artificial sphere when kappa_X >= 0")
    if n > 0 and s.k != n:
        raise InfeasibleScenario(f"n_sm = {n} > 0 forces X = X_m#{n}CP2bar, got k = {s.k}")

    if kX == Kappa.ZERO:
        if n == 0:
            if s.k == 0:
                raise InfeasibleScenario("no minimal manifold with kappa = 0 contains a symplectic -4-sphere")
            if s.k == 1:
                return Classification(Kappa.ONE, "order 2 logarithmic transform of X_m", "kappa0-no-meeting-spheres")
        if n == 1:
            raise InfeasibleScenario("kappa_X = 0 with n_sm = 1 contradicts adjunction")
        if n == 2:
            return Classification(Kappa.ZERO, "X_m#CP2bar, X_m a K3, Enriques, or unknown kappa=0 surface",
                                  "kappa0-two-meeting-spheres")
    if n > 0:
        return Classification(kX, f"X_m#{n - 1}CP2bar", "blow-down-along-meeting-sphere")
    # n == 0
    if s.k > 1:
        raise InfeasibleScenario("n_sm = 0 allows X = X_m or X_m#CP2bar only")
    if kX == Kappa.ONE:
        if s.k == 0:
            return Classification(Kappa.TWO, "K_M^2 = 1", "kappa1-minimal")
        return Classification(Kappa.ONE, "K_M^2 = 0", "kappa1-one-blow-up")
    return Classification(Kappa.TWO, "M stays of general type", "kappa2-preserved")


def _classify_rational(s: BlowdownScenario) -> Classification:
    n = s.n_sm
    if n == UNBOUNDED or n > 0:
        return Classification(Kappa.NEG_INF, "M is a smooth blow-down of X", "meeting-sphere-blow-down")
    # n_sm = 0: M is minimal, and kappa_M >= 0 needs X = CP2#10CP2bar
    if s.k == 10:
        return Classification(Kappa.ZERO, "Enriques surface when [V_X] = 6H - 2(e_1+...+e_10); "
                              "other classes open", "rational-ten-blow-ups")
    if s.k <= 9:
        raise InfeasibleScenario("for k <= 9 every -4-class is non-representable or has n_sy >= 1")
    raise InfeasibleScenario("k > 10 gives K_M^2 < 0 with n_sm = 0, which is impossible")
