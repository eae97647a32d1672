"""Screening -4-classes for symplectic sphere representatives.

Given a trivially normalized class xi = aH - sum b_i e_i with xi^2 = -4, any
symplectic sphere in the orbit, moved to the standard canonical class, has
the shape (+-a, +-b_1, ..., +-b_j, -1, ..., -1) where the b_i = 1 entries are
forced to -1.  Adjunction demands K_st . xi~ = 2 for an embedded -4-sphere, so
a class whose attainable values miss 2 cannot be represented.  Surviving
witnesses are then checked for being a multiple of an exceptional class, and
for meeting some exceptional class exactly once (which gives n_sm > 0).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .lattice import (
    DomainError,
    LatticeClass,
    is_trivial_normal,
    k_dot,
    pair,
    parse_class,
    square,
)
from .weyl import (
    EQUIVALENT,
    component_word,
    inverse_word,
    simplify_word,
    enumerate_exceptional,
    is_exceptional,
)

DEFAULT_A_MAX = 6
ADJUNCTION_TARGET = 2

NOT_REPRESENTABLE = "not-representable"
MULTIPLE_OF_EXCEPTIONAL = "multiple-of-exceptional"
NSM_POSITIVE = "nsm-positive"
INCONCLUSIVE = "inconclusive"

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class AdjunctionValueSet:
    xi: LatticeClass
    values: tuple[int, ...]
    witnesses: dict
    ones_positive: bool = False

    def __contains__(self, v):
        return v in self.values

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "values": list(self.values),
            "witnesses": {str(v): list(self.witnesses[v]) for v in self.values},
            "ones_positive": self.ones_positive,
        }


def _check_minus4(xi: LatticeClass):
    if square(xi) != -4:
        raise DomainError(f"{xi} has square {square(xi)}, expected -4")
    if not is_trivial_normal(xi):
        raise DomainError(f"{xi} is not in trivial normal form (b_i >= 0, non-increasing)")


def _free_and_forced(xi: LatticeClass, ones_positive: bool):
    """Positions 0 (for a) and 1..k (for b_i): which signs are free, and the forced ones."""
    coeffs = (xi.a,) + xi.b
    one_sign = 1 if ones_positive else -1
    forced = {}
    for pos, v in enumerate(coeffs):
        if v == 0:
            forced[pos] = 1
        elif pos > 0 and v == 1:
            forced[pos] = one_sign
    free = [pos for pos in range(len(coeffs)) if pos not in forced]
    return coeffs, free, forced


def _assignments(xi: LatticeClass, ones_positive: bool):
    coeffs, free, forced = _free_and_forced(xi, ones_positive)
    for signs in itertools.product((1, -1), repeat=len(free)):
        eps = [0] * len(coeffs)
        for pos, s in forced.items():
            eps[pos] = s
        for pos, s in zip(free, signs):
            eps[pos] = s
        yield tuple(eps)


def _value(xi: LatticeClass, eps: Assignment) -> int:
    return 3 * eps[0] * xi.a + sum(e * v for e, v in zip(eps[1:], xi.b))


def value_set(xi: LatticeClass, ones_positive: bool = False) -> AdjunctionValueSet:
    """Attainable K_st . xi~ values, each with the first sign assignment reaching it.

    An assignment is ``(eps_0, eps_1, ..., eps_k)`` and the value it gives is
    ``3*eps_0*a + sum(eps_i*b_i)``.  Zero coefficients carry eps = +1.
    """
    _check_minus4(xi)
    witnesses = {}
    for eps in _assignments(xi, ones_positive):
        witnesses.setdefault(_value(xi, eps), eps)
    return AdjunctionValueSet(xi, tuple(sorted(witnesses)), witnesses, ones_positive)


def assignments_for(xi: LatticeClass, value: int, ones_positive: bool = False) -> list[Assignment]:
    _check_minus4(xi)
    return [eps for eps in _assignments(xi, ones_positive) if _value(xi, eps) == value]


def witness_class(xi: LatticeClass, assignment, ones_positive: bool = False) -> LatticeClass:
    """The class xi~ = (-eps_0 a) H - sum (eps_i b_i) e_i, so K_st . xi~ is the assignment's value."""
    eps = tuple(assignment)
    coeffs, _, forced = _free_and_forced(xi, ones_positive)
    if len(eps) != len(coeffs) or any(e not in (1, -1) for e in eps):
        raise DomainError(f"assignment {eps} does not fit {xi}")
    if any(eps[pos] != s for pos, s in forced.items()):
        raise DomainError(f"assignment {eps} violates the forced signs for {xi}")
    return LatticeClass(-eps[0] * xi.a, tuple(e * v for e, v in zip(eps[1:], xi.b)))


def multiple_of_exceptional(xi_tilde: LatticeClass, a_max: int = DEFAULT_A_MAX):
    """Return ``(m, E)`` with xi_tilde = m*E, |m| >= 2, E exceptional and 0 <= E.a <= a_max."""
    sq = square(xi_tilde)
    # m^2 * E^2 = sq with E^2 = -1
    m = math.isqrt(-sq) if sq < 0 else 0
    if m < 2 or m * m != -sq:
        return None
    coeffs = (xi_tilde.a,) + xi_tilde.b
    if any(c % m for c in coeffs):
        return None
    for signed in (-m, m):
        e = LatticeClass(xi_tilde.a // signed, tuple(v // signed for v in xi_tilde.b))
        if is_exceptional(e) and 0 <= e.a <= a_max:
            return signed, e
    return None


def unit_meeting_exceptional(xi_tilde: LatticeClass, a_max: int = DEFAULT_A_MAX) -> list[LatticeClass]:
    return [e for e in enumerate_exceptional(xi_tilde.k, a_max) if pair(e, xi_tilde) == 1]


@dataclass(frozen=True)
class Witness:
    assignment: Assignment
    xi_tilde: LatticeClass
    multiple: Optional[tuple[int, LatticeClass]] = None
    meeting: tuple[LatticeClass, ...] = ()

    def to_json(self) -> dict:
        return {
            "assignment": list(self.assignment),
            "class": self.xi_tilde.to_json(),
            "k_dot": k_dot(self.xi_tilde),
            "square": square(self.xi_tilde),
            "multiple": None if self.multiple is None
            else {"m": self.multiple[0], "E": self.multiple[1].to_json()},
            "meeting": [e.to_json() for e in self.meeting],
        }


@dataclass(frozen=True)
class ScreenVerdict:
    xi: LatticeClass
    outcome: str
    values: tuple[int, ...]
    witnesses: tuple[Witness, ...] = ()
    a_max: int = DEFAULT_A_MAX
    ones_positive: bool = False

    @property
    def multiple(self) -> Optional[tuple[int, LatticeClass]]:
        for w in self.witnesses:
            if w.multiple is not None:
                return w.multiple
        return None

    @property
    def meeting(self) -> Optional[tuple[LatticeClass, LatticeClass]]:
        """First (xi~, E) with pair(E, xi~) = 1 among non-multiple witnesses."""
        for w in self.witnesses:
            if w.multiple is None and w.meeting:
                return w.xi_tilde, w.meeting[0]
        return None

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "outcome": self.outcome,
            "values": list(self.values),
            "witnesses": [w.to_json() for w in self.witnesses],
            "a_max": self.a_max,
            "ones_positive": self.ones_positive,
        }


def screen(xi: LatticeClass, a_max: int = DEFAULT_A_MAX, ones_positive: bool = False) -> ScreenVerdict:
    vs = value_set(xi, ones_positive)
    if ADJUNCTION_TARGET not in vs:
        return ScreenVerdict(xi, NOT_REPRESENTABLE, vs.values, (), a_max, ones_positive)
    witnesses = []
    seen = set()
    for eps in assignments_for(xi, ADJUNCTION_TARGET, ones_positive):
        cls = witness_class(xi, eps, ones_positive)
        if cls in seen:
            continue
        seen.add(cls)
        mult = multiple_of_exceptional(cls, a_max)
        meeting = () if mult is not None else tuple(unit_meeting_exceptional(cls, a_max))
        witnesses.append(Witness(eps, cls, mult, meeting))
    survivors = [w for w in witnesses if w.multiple is None]
    if not survivors:
        outcome = MULTIPLE_OF_EXCEPTIONAL
    elif any(w.meeting for w in survivors):
        outcome = NSM_POSITIVE
    else:
        outcome = INCONCLUSIVE
    return ScreenVerdict(xi, outcome, vs.values, tuple(witnesses), a_max, ones_positive)


# -- the orbit table ---------------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    rel_min_k: int
    xi: LatticeClass
    sympl_rep: str = "unknown"
    nsm_positive: bool = False
    starred: bool = False
    note: str = ""

    def to_json(self) -> dict:
        return {
            "rel_min_k": self.rel_min_k,
            "xi": self.xi.to_json(),
            "sympl_rep": self.sympl_rep,
            "nsm_positive": self.nsm_positive,
            "starred": self.starred,
            "note": self.note,
        }


def default_table_path():
    return resources.files("neg4lat").joinpath("data/table1.tsv")


def load_table(path=None) -> list[TableEntry]:
    source = default_table_path() if path is None else Path(path)
    with source.open(newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    entries = []
    for row in csv.DictReader(lines, delimiter="\t"):
        try:
            rep = (row.get("rep_flag") or "").strip()
            entries.append(TableEntry(
                rel_min_k=int(row["rel_min_k"]),
                xi=parse_class(row["class"]),
                sympl_rep="N" if rep == "N" else "unknown",
                nsm_positive=(row.get("nsm_flag") or "").strip() == ">0",
                starred=(row.get("star") or "").strip() == "*",
                note=(row.get("note") or "").strip(),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"bad table row {row!r}: {exc}") from exc
    return entries


PASS, REVIEW, FAIL = "pass", "review", "fail"


def check_entry(entry: TableEntry, a_max: int = DEFAULT_A_MAX) -> dict:
    xi = entry.xi
    problems = []
    sq = square(xi)
    if sq != -4:
        problems.append(f"square is {sq}, not -4")
    nonzero = sum(1 for v in xi.b if v != 0)
    if nonzero != entry.rel_min_k:
        problems.append(f"rel_min_k={entry.rel_min_k} but {nonzero} nonzero b_i")
    if not is_trivial_normal(xi):
        problems.append("not in trivial normal form")

    row = {"entry": entry.to_json(), "square": sq, "outcome": None, "status": FAIL,
           "problems": problems, "verdict": None}
    if problems:
        return row

    verdict = screen(xi, a_max)
    row["outcome"] = verdict.outcome
    row["verdict"] = verdict.to_json()
    if entry.sympl_rep == "N":
        ok = verdict.outcome in (NOT_REPRESENTABLE, MULTIPLE_OF_EXCEPTIONAL)
        row["status"] = PASS if ok else FAIL
        if not ok:
            problems.append(f"flag N but screen says {verdict.outcome}")
    elif entry.nsm_positive:
        if verdict.outcome == NSM_POSITIVE:
            row["status"] = PASS
        elif verdict.outcome == MULTIPLE_OF_EXCEPTIONAL:
            # the caption splits rows into N or n_sm > 0; this one is neither
            row["status"] = REVIEW
            problems.append("flag >0 but every adjunction witness is a multiple of an "
                            "exceptional class; rep flag is blank")
        else:
            problems.append(f"flag >0 but screen says {verdict.outcome}")
    else:
        row["status"] = REVIEW
        problems.append("row carries neither N nor >0")
    return row


def orbit_report(entries: list[TableEntry], a_cap: int) -> list[dict]:
    """Group table rows that share a bounded orbit once padded to a common k.

    Each group is reported as a chain of consecutive rows (in table order),
    every link carrying a replayable witness.  Pure findings: nothing here is
    compared against the table.
    """
    usable = [e for e in entries if square(e.xi) == -4]
    findings = []
    for k in sorted({e.xi.k for e in usable}):
        rows = [e for e in usable if e.xi.k <= k and abs(e.xi.a) <= a_cap]
        covered = set()
        for i, lead in enumerate(rows):
            if i in covered:
                continue
            nodes, word_to = component_word(lead.xi.padded(k), a_cap)
            group = [i] + [j for j in range(i + 1, len(rows)) if j not in covered
                           and _normal(rows[j].xi.padded(k)) in nodes]
            covered.update(group)
            for p, q in zip(group, group[1:]):
                x, y = rows[p].xi.padded(k), rows[q].xi.padded(k)
                word = simplify_word(inverse_word(word_to(x)) + word_to(y))
                findings.append({
                    "k": k,
                    "x": x.to_json(),
                    "y": y.to_json(),
                    "x_rel_min_k": rows[p].rel_min_k,
                    "y_rel_min_k": rows[q].rel_min_k,
                    "status": EQUIVALENT,
                    "witness_length": len(word),
                    "witness": [s.to_json() for s in word],
                    "explored": len(nodes),
                    "bound": a_cap,
                })
    return findings


def _normal(x: LatticeClass) -> LatticeClass:
    return LatticeClass(x.a, tuple(sorted((abs(v) for v in x.b), reverse=True)))


def verify_table(entries: list[TableEntry], a_max: int = DEFAULT_A_MAX,
                 a_cap: Optional[int] = None, orbits: bool = True) -> dict:
    rows = [check_entry(e, a_max) for e in entries]
    if a_cap is None:
        a_cap = max(12, max((abs(e.xi.a) for e in entries), default=0))
    counts = {s: sum(1 for r in rows if r["status"] == s) for s in (PASS, REVIEW, FAIL)}
    return {
        "rows": rows,
        "orbit_findings": orbit_report(entries, a_cap) if orbits else [],
        "a_max": a_max,
        "a_cap": a_cap,
        "counts": counts,
        "ok": counts[FAIL] == 0,
    }
