"""Admissible valuation profiles and their extremal weights.

A profile is a weakly decreasing tuple (v_1, ..., v_s) of positive integers:
v_r is the exponent of a fixed large prime in the r-th largest of the values
f(n_1), ..., f(n_s) it divides. Filters encode which profiles survive a given
divisibility bound; the maxima over the survivors are the exponents that
appear in the lower bounds for L_f(N) and rad L_f(N).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Profile = Tuple[int, ...]


def validate_profile(profile: Sequence[int]) -> Profile:
    t = tuple(int(v) for v in profile)
    if not t:
        raise ValueError("profile must be nonempty")
    if t[-1] < 1 or any(a < b for a, b in zip(t, t[1:])):
        raise ValueError(f"profile {t} is not weakly decreasing and positive")
    return t


def level_counts(profile: Sequence[int]) -> List[int]:
    """counts[k-1] = #{r : v_r >= k} for k = 1..v_1."""
    top = profile[0] if profile else 0
    return [sum(1 for v in profile if v >= k) for k in range(1, top + 1)]


def floor_log2(v: int) -> int:
    return v.bit_length() - 1


def baier_dey_bound(eta: int, v: int) -> int:
    """floor(2^(eta - 1 - floor(log2 v))), zero once the exponent is negative."""
    k = eta - 1 - floor_log2(v)
    return 1 << k if k >= 0 else 0


class AdmissibilityFilter:
    """Base class; ``caps`` returns (max length, max entry) or None if unbounded."""

    def admits(self, profile: Profile) -> bool:
        raise NotImplementedError

    def caps(self) -> Optional[Tuple[int, int]]:
        return None


@dataclass(frozen=True)
class Sah(AdmissibilityFilter):
    """#{r : v_r >= k} <= d - k for every level k occupied by the profile."""

    d: int

    def admits(self, profile: Profile) -> bool:
        return all(cnt <= self.d - k for k, cnt in enumerate(level_counts(profile), 1))

    def caps(self) -> Optional[Tuple[int, int]]:
        return (max(self.d - 1, 0), max(self.d - 1, 0))


@dataclass(frozen=True)
class BaierDey(AdmissibilityFilter):
    """No position r (1-based) with r >= floor(2^(eta-1-floor(log2 v_r))) + 1."""

    eta: int

    def admits(self, profile: Profile) -> bool:
        return all(r <= baier_dey_bound(self.eta, v) for r, v in enumerate(profile, 1))

    def caps(self) -> Optional[Tuple[int, int]]:
        # position 1 needs v < 2^eta; a value-1 entry may sit at most at 2^(eta-1)
        return (1 << (self.eta - 1), (1 << self.eta) - 1)


@dataclass(frozen=True)
class GenericU(AdmissibilityFilter):
    """#{r : v_r >= k} <= min(u - 1, d - k) for every occupied level k."""

    d: int
    u: int

    def admits(self, profile: Profile) -> bool:
        return all(
            cnt <= min(self.u - 1, self.d - k) for k, cnt in enumerate(level_counts(profile), 1)
        )

    def caps(self) -> Optional[Tuple[int, int]]:
        return (max(min(self.u - 1, self.d - 1), 0), max(self.d - 1, 0))


@dataclass(frozen=True)
class Conjunction(AdmissibilityFilter):
    members: Tuple[AdmissibilityFilter, ...]

    def __init__(self, members: Iterable[AdmissibilityFilter]):
        object.__setattr__(self, "members", tuple(members))

    def admits(self, profile: Profile) -> bool:
        return all(m.admits(profile) for m in self.members)

    def caps(self) -> Optional[Tuple[int, int]]:
        known = [c for c in (m.caps() for m in self.members) if c is not None]
        if not known:
            return None
        return (min(c[0] for c in known), min(c[1] for c in known))


def is_admissible(profile: Sequence[int], filt: AdmissibilityFilter) -> bool:
    return filt.admits(validate_profile(profile))


def enumerate_profiles(filt: AdmissibilityFilter) -> List[Profile]:
    """Every admissible profile, in lexicographic order.

    Depth-first: children append a value no larger than the current last
    entry, and an inadmissible node is not expanded. Pruning is sound
    because every filter here is closed under taking prefixes.
    """
    caps = filt.caps()
    if caps is None:
        raise ValueError(f"no finiteness cap derivable for {filt!r}")
    max_len, max_entry = caps
    out: List[Profile] = []

    def extend(prefix: Profile) -> None:
        if len(prefix) == max_len:
            return
        top = prefix[-1] if prefix else max_entry
        for v in range(1, top + 1):
            child = prefix + (v,)
            if filt.admits(child):
                out.append(child)
                extend(child)

    extend(())
    return sorted(out)


def weight(profile: Sequence[int]) -> int:
    return sum(profile)


def max_weight(filt: AdmissibilityFilter) -> int:
    profiles = enumerate_profiles(filt)
    return max((weight(p) for p in profiles), default=0)


def maximizers(filt: AdmissibilityFilter) -> List[Profile]:
    profiles = enumerate_profiles(filt)
    best = max((weight(p) for p in profiles), default=0)
    return [p for p in profiles if weight(p) == best]


def max_weight_over_height(filt: AdmissibilityFilter) -> Fraction:
    """max of (v_1 + ... + v_s) / v_1 over admissible profiles, exactly."""
    profiles = enumerate_profiles(filt)
    if not profiles:
        raise ValueError("filter admits no profile")
    return max(Fraction(weight(p), p[0]) for p in profiles)


def generic_u_exponent(d: int, u: int) -> int:
    """max_weight(GenericU(d, u)); checked against (d - u/2)(u - 1)."""
    if not 2 <= u <= d:
        raise ValueError("need 2 <= u <= d")
    w = max_weight(GenericU(d, u))
    closed = (Fraction(d) - Fraction(u, 2)) * (u - 1)
    assert w == closed, f"max weight {w} != (d - u/2)(u - 1) = {closed} for d={d}, u={u}"
    return w


# --- rendering ---

def tree_parent(p: Profile) -> Profile:
    """Parent in the weight tree: lower the last entry by one, dropping it at 1.

    Every node sits at depth equal to its weight, so the tree height is the
    maximal weight. Both filters above are closed under this move too.
    """
    if p[-1] > 1:
        return p[:-1] + (p[-1] - 1,)
    return p[:-1]


def _children(profiles: Iterable[Profile]) -> Dict[Profile, List[Profile]]:
    kids: Dict[Profile, List[Profile]] = {(): []}
    for p in sorted(set(profiles), key=lambda t: (sum(t), t)):
        kids.setdefault(p, [])
        kids.setdefault(tree_parent(p), []).append(p)
    for node, ch in kids.items():
        # raised last entry first, appended 1 second
        ch.sort(key=lambda t: len(t))
    return kids


def _label(p: Profile) -> str:
    return "(" + ",".join(str(v) for v in p) + ")"


def render_tree(profiles: Iterable[Profile]) -> str:
    """Indented UTF-8 tree; the raised-entry child precedes the appended-1 child."""
    kids = _children(profiles)
    lines: List[str] = []

    def walk(node: Profile, prefix: str, last: bool) -> None:
        if node:
            lines.append(prefix + ("└── " if last else "├── ") + _label(node))
            prefix += "    " if last else "│   "
        ch = kids.get(node, [])
        for i, c in enumerate(ch):
            walk(c, prefix, i == len(ch) - 1)

    roots = kids[()]
    for r in roots:
        lines.append(_label(r))
        ch = kids.get(r, [])
        for i, c in enumerate(ch):
            walk(c, "", i == len(ch) - 1)
    return "\n".join(lines) + "\n"


def render_dot(profiles: Iterable[Profile], name: str = "profiles") -> str:
    kids = _children(profiles)
    lines = [f"digraph {name} {{", "  node [shape=plaintext];"]
    for node in sorted(kids, key=lambda t: (len(t), t)):
        if node:
            lines.append(f'  "{_label(node)}";')
    for node in sorted(kids, key=lambda t: (len(t), t)):
        if not node:
            continue
        for c in kids[node]:
            lines.append(f'  "{_label(node)}" -> "{_label(c)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
