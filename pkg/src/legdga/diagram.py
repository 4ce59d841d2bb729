"""Plat-style front diagrams.

A front is read left to right as a list of events acting on horizontal strand
slots numbered 1, 2, ... from the top:

* ``L<i>``  a left cusp; two new strands appear at slots i and i+1, pushing
  the strands formerly at slots >= i down by two.
* ``X<i>``  the strands at slots i and i+1 cross.
* ``R<i>``  a right cusp joining the strands at slots i and i+1.

A closed knot starts and ends with no strands. An arc starts with two strands
emanating from a pair of boundary endpoints on the left (slots 1 and 2, the
upper one carrying potential one more than the lower one) and ends with none.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ncalg import Generator

KNOT = "knot"
ARC = "arc"

ARC_CENTRAL = "a"
ARC_NECK = "b"


class DiagramError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Event:
    kind: str  # "L", "X" or "R"
    slot: int

    def __str__(self):
        return f"{self.kind}{self.slot}"


@dataclass(frozen=True)
class FrontDiagram:
    events: tuple[Event, ...]
    kind: str = KNOT
    name: str = ""
    labels: tuple[tuple[str, int], ...] = ()   # (generator name, 1-based event index)
    # added to the potential of each component (by order of appearance); lets a
    # link keep the relative grading it inherits from a cobordism
    shifts: tuple[int, ...] = ()

    def __post_init__(self):
        _validate(self)

    @property
    def initial_strands(self) -> int:
        return 2 if self.kind == ARC else 0

    def strand_counts(self) -> list[int]:
        """Number of strands before each event, plus the final count."""
        n = self.initial_strands
        out = [n]
        for e in self.events:
            n += {"L": 2, "X": 0, "R": -2}[e.kind]
            out.append(n)
        return out

    def count(self, kind: str) -> int:
        return sum(1 for e in self.events if e.kind == kind)

    def with_events(self, events, name=None, labels=None) -> "FrontDiagram":
        return FrontDiagram(tuple(events), self.kind, self.name if name is None else name,
                            self.labels if labels is None else tuple(labels), self.shifts)


def _validate(D: FrontDiagram):
    if D.kind not in (KNOT, ARC):
        raise DiagramError(f"unknown kind {D.kind!r}")
    n = D.initial_strands
    for k, e in enumerate(D.events, 1):
        if e.kind not in "LXR" or len(e.kind) != 1:
            raise DiagramError(f"event {k}: unknown event type {e.kind!r}")
        i = e.slot
        if e.kind == "L":
            if not 1 <= i <= n + 1:
                raise DiagramError(f"event {k} ({e}): left cusp slot out of range 1..{n + 1}")
            n += 2
        else:
            if not 1 <= i or i + 1 > n:
                raise DiagramError(f"event {k} ({e}): references nonexistent strands (only {n})")
            if e.kind == "R":
                n -= 2
    if n != 0:
        raise DiagramError(f"front does not close up: {n} strands remain at the right")
    seen = set()
    for name, idx in D.labels:
        if name in seen:
            raise DiagramError(f"label {name!r} given twice")
        seen.add(name)
        if not 1 <= idx <= len(D.events) or D.events[idx - 1].kind == "L":
            raise DiagramError(f"label {name}={idx} does not point at a crossing or right cusp")


# -- text format ------------------------------------------------------------

_TOKEN = re.compile(r"^([LXR])(\d+)$")


def parse(text: str, name: str = "") -> FrontDiagram:
    kind = KNOT
    labels = []
    shifts = ()
    events = []
    event_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("name:"):
            name = line.split(":", 1)[1].strip()
            continue
        if low.startswith("kind:"):
            kind = line.split(":", 1)[1].strip().lower()
            if kind not in (KNOT, ARC):
                raise DiagramError(f"kind must be knot or arc, got {kind!r}", lineno)
            continue
        if low.startswith("shift:"):
            try:
                shifts = tuple(int(x) for x in line.split(":", 1)[1].split())
            except ValueError:
                raise DiagramError(f"malformed shift line {line!r}", lineno) from None
            continue
        if low.startswith("label"):
            m = re.match(r"^label\s+(\S+?)\s*=\s*(\d+)$", line)
            if not m:
                raise DiagramError(f"malformed label line {line!r}", lineno)
            labels.append((m.group(1), int(m.group(2))))
            continue
        for tok in line.split(";"):
            tok = tok.strip()
            if not tok:
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise DiagramError(f"malformed token {tok!r}", lineno)
            events.append(Event(m.group(1), int(m.group(2))))
            event_lines.append(lineno)
    try:
        return FrontDiagram(tuple(events), kind, name, tuple(labels), shifts)
    except DiagramError as exc:
        m = re.match(r"event (\d+)", str(exc))
        if m and exc.line is None:
            raise DiagramError(str(exc), event_lines[int(m.group(1)) - 1]) from None
        raise


def serialize(D: FrontDiagram) -> str:
    lines = []
    if D.name:
        lines.append(f"name: {D.name}")
    lines.append(f"kind: {D.kind}")
    if any(D.shifts):
        lines.append("shift: " + " ".join(map(str, D.shifts)))
    for gname, idx in D.labels:
        lines.append(f"label {gname}={idx}")
    lines.append("; ".join(str(e) for e in D.events))
    return "\n".join(lines) + "\n"


def load(path) -> FrontDiagram:
    with open(path) as fh:
        return parse(fh.read())


# -- strands, components, potentials ----------------------------------------

@dataclass
class StrandData:
    """Strand bookkeeping for a front.

    ``before[k]`` lists the strand-piece ids sitting in slots 1..n just before
    event k (0-based), ``after`` the pieces at the far right (always empty).
    A piece is a maximal cusp-free strand segment.
    """

    before: list[list[int]]
    pieces: int
    cusp_pairs: list[tuple[int, int, int]] = field(default_factory=list)  # (upper, lower, event)


def strands(D: FrontDiagram) -> StrandData:
    cur = list(range(D.initial_strands))
    next_id = len(cur)
    before = []
    pairs = []
    if D.kind == ARC:
        pairs.append((0, 1, -1))
    for k, e in enumerate(D.events):
        before.append(list(cur))
        i = e.slot - 1
        if e.kind == "L":
            cur[i:i] = [next_id, next_id + 1]
            pairs.append((next_id, next_id + 1, k))
            next_id += 2
        elif e.kind == "X":
            cur[i], cur[i + 1] = cur[i + 1], cur[i]
        else:
            pairs.append((cur[i], cur[i + 1], k))
            del cur[i:i + 2]
    before.append(cur)
    return StrandData(before, next_id, pairs)


def _union_find_offsets(npieces, pairs):
    """Weighted union-find: mu(upper) = mu(lower) + 1 for every cusp pair."""
    parent = list(range(npieces))
    off = [0] * npieces  # mu(x) = mu(root) + off[x]

    def find(x):
        if parent[x] == x:
            return x, 0
        r, o = find(parent[x])
        parent[x] = r
        off[x] += o
        return r, off[x]

    for up, lo, k in pairs:
        ru, ou = find(up)
        rl, ol = find(lo)
        if ru == rl:
            if ou - ol != 1:
                return None, k
            continue
        # attach ru under rl: mu(ru) = mu(up) - ou = mu(lo) + 1 - ou = mu(rl) + ol + 1 - ou
        parent[ru] = rl
        off[ru] = ol + 1 - ou
    return (parent, off, find), None


def components(D: FrontDiagram) -> list[int]:
    """Component id (0, 1, ...) of each strand piece, numbered by first appearance."""
    sd = strands(D)
    parent = list(range(sd.pieces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for up, lo, _ in sd.cusp_pairs:
        parent[find(up)] = find(lo)
    ids = {}
    out = []
    for p in range(sd.pieces):
        r = find(p)
        ids.setdefault(r, len(ids))
        out.append(ids[r])
    return out


def num_components(D: FrontDiagram) -> int:
    return len(set(components(D))) if D.events or D.kind == ARC else 0


def maslov_potential(D: FrontDiagram) -> list[int]:
    """Integer potential on strand pieces: minimum zero on each component, plus
    that component's shift if the diagram has any."""
    sd = strands(D)
    res, bad = _union_find_offsets(sd.pieces, sd.cusp_pairs)
    if res is None:
        raise DiagramError(f"no Maslov potential: nonzero rotation number (detected at event {bad + 1})")
    _, _, find = res
    mu = []
    for p in range(sd.pieces):
        _, o = find(p)
        mu.append(o)
    comp = components(D)
    lowest = {}
    for p, c in enumerate(comp):
        lowest[c] = min(lowest.get(c, mu[p]), mu[p])
    if D.shifts and len(D.shifts) != len(lowest):
        raise DiagramError(f"{len(D.shifts)} shifts given for {len(lowest)} components")
    shift = D.shifts or (0,) * len(lowest)
    return [mu[p] - lowest[comp[p]] + shift[comp[p]] for p in range(sd.pieces)]


def writhe(D: FrontDiagram) -> int:
    """Front writhe with all strands oriented along one traversal of each component."""
    return sum(_crossing_signs(D).values())


def _orientation(D: FrontDiagram) -> dict[int, int]:
    """Direction +1 (rightward) or -1 (leftward) of each piece along a traversal."""
    sd = strands(D)
    left, right = {}, {}
    for up, lo, k in sd.cusp_pairs:
        joined = right if k >= 0 and D.events[k].kind == "R" else left
        joined[up], joined[lo] = lo, up
    orient = {}
    for start in range(sd.pieces):
        if start in orient:
            continue
        x, d = start, 1
        while x not in orient:
            orient[x] = d
            x = right[x] if d == 1 else left[x]
            d = -d
    return orient


def _crossing_signs(D: FrontDiagram) -> dict[int, int]:
    sd = strands(D)
    orient = _orientation(D)
    out = {}
    for k, e in enumerate(D.events):
        if e.kind != "X":
            continue
        i = e.slot - 1
        a, b = sd.before[k][i], sd.before[k][i + 1]
        out[k] = 1 if orient[a] == orient[b] else -1
    return out


def thurston_bennequin(D: FrontDiagram) -> int:
    return writhe(D) - D.count("R")


# -- generators --------------------------------------------------------------

def default_name(D: FrontDiagram, k: int) -> str:
    e = D.events[k]
    return ("q" if e.kind == "X" else "r") + str(k + 1)


def chord_names(D: FrontDiagram) -> dict[int, str]:
    """Map 0-based event index of each crossing/right cusp to its generator name."""
    lab = {idx - 1: name for name, idx in D.labels}
    out = {}
    for k, e in enumerate(D.events):
        if e.kind != "L":
            out[k] = lab.get(k, default_name(D, k))
    names = list(out.values())
    if D.kind == ARC:
        names += [ARC_CENTRAL, ARC_NECK]
    if len(set(names)) != len(names):
        raise DiagramError("generator names collide; check the label lines")
    return out


def crossing_degree(D: FrontDiagram, k: int, mu=None, sd=None) -> int:
    e = D.events[k]
    if e.kind == "R":
        return 1
    if e.kind != "X":
        raise DiagramError(f"event {k + 1} is not a chord")
    mu = maslov_potential(D) if mu is None else mu
    sd = strands(D) if sd is None else sd
    i = e.slot - 1
    return mu[sd.before[k][i]] - mu[sd.before[k][i + 1]]


def generators(D: FrontDiagram) -> list[Generator]:
    """Crossings and right cusps in event order; for arcs, then the neck and central chords."""
    mu = maslov_potential(D)
    sd = strands(D)
    names = chord_names(D)
    gens = [Generator(names[k], crossing_degree(D, k, mu, sd)) for k in sorted(names)]
    if D.kind == ARC:
        gens.append(Generator(ARC_NECK, 0))
        gens.append(Generator(ARC_CENTRAL, mu[0] - mu[1]))
    return gens


def component_profile(D: FrontDiagram) -> dict[int, tuple[int, int, int]]:
    """Per component: (left cusps, right cusps, crossings of the component with itself)."""
    comp = components(D)
    sd = strands(D)
    prof = {c: [0, 0, 0] for c in set(comp)}
    for up, _, k in sd.cusp_pairs:
        if k >= 0:
            prof[comp[up]][0 if D.events[k].kind == "L" else 1] += 1
    for k, e in enumerate(D.events):
        if e.kind == "X":
            a, b = sd.before[k][e.slot - 1], sd.before[k][e.slot]
            if comp[a] == comp[b]:
                prof[comp[a]][2] += 1
    return {c: tuple(v) for c, v in prof.items()}


def is_standard_unlink(D: FrontDiagram) -> bool:
    """Every component is a standard unknot: one cusp of each kind, no self-crossings.

    Crossings between different components are allowed."""
    return D.kind == KNOT and all(p == (1, 1, 0) for p in component_profile(D).values())


def generator_events(D: FrontDiagram) -> dict[str, int]:
    return {v: k for k, v in chord_names(D).items()}


# -- helpers for building fronts ----------------------------------------------

def freeze_names(D: FrontDiagram) -> FrontDiagram:
    """Label every chord with its current name, so that later edits to the
    event list do not rename anything."""
    labels = tuple((g, k + 1) for k, g in sorted(chord_names(D).items()))
    return FrontDiagram(D.events, D.kind, D.name, labels, D.shifts)


def delete_event(D: FrontDiagram, k: int, name: str | None = None) -> FrontDiagram:
    """Remove crossing k (0-based).  Surviving chords keep their names.

    When the crossing joins two strands of equal potential, the old potential is
    still valid on the new diagram piece by piece (strand pieces only change
    places, never values), and the result is given the shifts that keep it.
    """
    if D.events[k].kind != "X":
        raise DiagramError(f"event {k + 1} is not a crossing")
    D = freeze_names(D)
    events = D.events[:k] + D.events[k + 1:]
    labels = []
    for g, idx in D.labels:
        if idx - 1 == k:
            continue
        labels.append((g, idx - 1 if idx - 1 > k else idx))
    name = D.name if name is None else name
    out = FrontDiagram(events, D.kind, name, tuple(labels))
    try:
        mu = maslov_potential(D)
        mu2 = maslov_potential(out)
    except DiagramError:
        return out
    comp = components(out)
    shifts = {}
    for p, c in enumerate(comp):
        shifts.setdefault(c, set()).add(mu[p] - mu2[p])
    if all(len(v) == 1 for v in shifts.values()):
        sh = tuple(next(iter(shifts[c])) for c in range(len(shifts)))
        if any(sh):
            out = FrontDiagram(events, D.kind, name, tuple(labels), sh)
    return out


def as_arc(D: FrontDiagram, name: str | None = None) -> FrontDiagram:
    """The arc obtained by cutting a knot open at its first left cusp."""
    if D.kind != KNOT or not D.events or D.events[0] != Event("L", 1):
        raise DiagramError("a knot front starting with L1 is required")
    D = freeze_names(D)
    labels = tuple((g, idx - 1) for g, idx in D.labels)
    return FrontDiagram(D.events[1:], ARC, name if name is not None else D.name + "-arc", labels,
                        D.shifts)


def as_knot(D: FrontDiagram, name: str | None = None) -> FrontDiagram:
    if D.kind != ARC:
        raise DiagramError("not an arc")
    D = freeze_names(D)
    labels = tuple((g, idx + 1) for g, idx in D.labels)
    return FrontDiagram((Event("L", 1),) + D.events, KNOT,
                        name if name is not None else D.name.removesuffix("-arc"), labels, D.shifts)
