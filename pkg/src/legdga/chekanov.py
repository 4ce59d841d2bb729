"""Chekanov-Eliashberg DGA of a plat front via its Ng resolution.

The resolution keeps left cusps as smooth turnarounds, keeps every crossing,
and replaces the right cusp ``R<i>`` by a crossing of slots i, i+1 followed
by a small loop closing those two strands.

Disks are found by a left-to-right sweep.  A vertical line meets an immersed
polygon in a finite set of intervals ("sheets"); each sheet runs from the
strand in slot ``t`` down to the strand in slot ``b`` and remembers which
boundary fragments form its top and bottom edges.  Events change the sheets
in a small number of local ways, and every disk is a path through those
choices that starts and ends with no sheets, stays connected and simply
connected, and uses exactly one positive corner.  Boundary fragments are
stitched together as the sweep proceeds; at the end they form one cycle that
is read counterclockwise from the positive corner to give the word.

Quadrants at a crossing of slots i, i+1 are named ``L``, ``T``, ``R``, ``B``
(left, top, right, bottom).  ``L`` and ``R`` are the positive (Reeb-sign +)
quadrants, ``T`` and ``B`` the negative ones.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from . import diagram as dg
from .ncalg import DGA, Algebra, Ring, ZZ, check_d_squared

# Orientation signs.  At a crossing of even degree the two quadrants listed
# here carry a -1; odd crossings carry none.  Each component has one extra -1
# placed on the loop of its last right cusp (the bounding spin structure).
SHADED = frozenset({"B", "R"})

DEFAULT_MAX_SHEETS = int(os.environ.get("LEGDGA_MAX_SHEETS", "10"))


class SignError(RuntimeError):
    def __init__(self, generator: str, dga: DGA):
        super().__init__(f"d^2 != 0 on {generator}: the sign convention is inconsistent")
        self.generator = generator
        self.dga = dga


@dataclass(frozen=True)
class Corner:
    generator: str
    quadrant: str   # L, T, R, B
    positive: bool
    sign: int


@dataclass(frozen=True)
class AdmissibleDisk:
    positive: str
    corners: tuple[Corner, ...]         # counterclockwise from the positive corner
    sign: int
    slices: tuple[tuple[tuple[int, int], ...], ...]   # sheet intervals after each event

    @property
    def word(self) -> tuple[str, ...]:
        return tuple(c.generator for c in self.corners if not c.positive)

    def __str__(self):
        w = " ".join(self.word) or "1"
        return f"{'+' if self.sign > 0 else '-'}[{self.positive} -> {w}]"


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Sheet:
    t: int
    b: int
    comp: int
    top: int      # boundary fragment along the top edge (traversed leftward)
    bot: int      # boundary fragment along the bottom edge (traversed rightward)


class _Sweep:
    def __init__(self, D: dg.FrontDiagram, signed: bool, shaded=SHADED, max_sheets=None,
                 twin_births=True, prune=True, extra_positive=None):
        self.D = D
        self.prune = prune
        # a chord allowed to be a second positive corner (for pinch maps)
        self.extra = extra_positive
        # positive corners used so far, as bits: 1 for an ordinary one, 2 for
        # one at the extra chord; a finished disk has used all of ``maxpos``
        self.maxpos = 1 if extra_positive is None else 3
        self.signed = signed
        self.shaded = frozenset(shaded)
        self.max_sheets = DEFAULT_MAX_SHEETS if max_sheets is None else max_sheets
        self.twin_births = twin_births
        self.names = dg.chord_names(D)
        self._weight = {k: 2 if n == extra_positive else 1 for k, n in self.names.items()}
        mu = dg.maslov_potential(D)
        sd = dg.strands(D)
        self.degree = {k: dg.crossing_degree(D, k, mu, sd) for k in self.names}
        comp = dg.components(D)
        last = {}
        for up, lo, k in sd.cusp_pairs:
            if k >= 0 and D.events[k].kind == "R":
                last[comp[up]] = k
        self.spin_events = frozenset(last.values())
        self.results: list[AdmissibleDisk] = []
        self._memo: dict = {}

    # corner sign at crossing event k
    def _corner(self, k, quadrant, positive) -> Corner:
        s = 1
        if self.signed and self.degree[k] % 2 == 0 and quadrant in self.shaded:
            s = -1
        return Corner(self.names[k], quadrant, positive, s)

    def run(self):
        start = [((), (), 0, 0, 0, False, ())]
        if self.D.kind == dg.ARC:
            # a sheet entering through the neck chord b, a negative corner
            c = Corner(dg.ARC_NECK, "R", False, 1)
            sheet = _Sheet(1, 2, 0, 0, 1)
            start.append(((sheet,), ((0, 1, c, 1),), 2, 1, 0, True, ()))
        for st in start:
            self._dfs(0, *st[:-1], (st[0],))
        # the same disk can be reached along several labelled histories (identical
        # sheets born together); keep one copy per boundary path
        unique = {}
        for key, disk in self.results:
            unique.setdefault(key, disk)
        return list(unique.values())

    def _dfs(self, k, sheets, links, nfrag, ncomp, npos, started, history):
        if started and not sheets:
            if npos == self.maxpos:
                self._finish(links, history)
            return
        if k == len(self.D.events):
            return
        e = self.D.events[k]
        if e.kind == "L":
            succ = [(s, l, f, c, 0, None) for s, l, f, c in self._left(sheets, e.slot, nfrag, ncomp)]
        elif e.kind == "X":
            succ = [x + (None,) for x in self._cross(sheets, e.slot, k, nfrag, ncomp, npos)]
        else:
            succ = []
            for s1, l1, f1, c1, p1 in self._cross(sheets, e.slot, k, nfrag, ncomp, npos):
                for s2, l2, remap in self._right(s1, e.slot, k):
                    succ.append((s2, l1 + l2, f1, c1, p1, remap))
        for new, added, nf, nc, dpos, remap in succ:
            if len(new) > self.max_sheets:
                continue
            if sheets and new:
                # a component that disappears while others remain disconnects the disk
                before = {s.comp for s in sheets}
                if remap:
                    before = {remap.get(x, x) for x in before}
                if not before <= {s.comp for s in new}:
                    continue
            st = started or bool(new) or bool(added)
            if self.prune and not self._feasible(k + 1, tuple(sorted((s.t, s.b) for s in new)), npos + dpos, st):
                continue
            hist = history + (new,)
            self._dfs(k + 1, new, links + added, nf, nc, npos + dpos, started or bool(new) or bool(added), hist)

    def _feasible(self, k, intervals, npos, started):
        """Can this sheet layout still close up into a disk?

        Components and boundary fragments are forgotten, so the moves allowed
        here include every real move; a False answer is safe to prune on.
        """
        if started and not intervals:
            return npos == self.maxpos
        if k == len(self.D.events):
            return False
        key = (k, intervals, npos, started)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not all(self._alone(k, iv, npos) for iv in set(intervals)):
            self._memo[key] = False
            return False
        e = self.D.events[k]
        ok = False
        for iv, dpos in _coarse_moves(e.kind, e.slot, intervals, npos, self.twin_births,
                                       self._weight.get(k, 1)):
            if len(iv) > self.max_sheets:
                continue
            if self._feasible(k + 1, iv, npos + dpos, started or bool(intervals) or bool(iv) or dpos > 0):
                ok = True
                break
        self._memo[key] = ok
        return ok

    def _alone(self, k, iv, used):
        """Necessary condition for one sheet: it can still die, be split into
        sheets that can, or meet a right cusp where it could merge."""
        key = ("alone", k, iv, used)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._memo[key] = False
        ok = False
        if k < len(self.D.events):
            e = self.D.events[k]
            i = e.slot
            t, b = iv
            if e.kind == "L":
                if b < i:
                    ok = self._alone(k + 1, iv, used)
                elif t >= i:
                    ok = self._alone(k + 1, (t + 2, b + 2), used)
                else:
                    ok = (self._alone(k + 1, (t, b + 2), used)
                          or (self._alone(k + 1, (t, i), used)
                              and self._alone(k + 1, (i + 1, b + 2), used)))
            else:
                if t == i and b == i + 1:
                    after = [] if used & self._weight[k] else None
                elif t == i + 1:
                    after = [(i, b), (i + 1, b)]
                elif t == i:
                    after = [(i + 1, b)]
                elif b == i + 1:
                    after = [(t, i)]
                elif b == i:
                    after = [(t, i + 1), (t, i)]
                else:
                    after = [iv]
                if after is None:
                    ok = True
                elif e.kind == "X":
                    ok = any(self._alone(k + 1, x, used) for x in after)
                else:
                    for t2, b2 in after:
                        if (t2, b2) == (i, i + 1) or b2 == i or t2 == i + 1:
                            ok = True
                        elif t2 == i or b2 == i + 1:
                            continue
                        elif t2 > i + 1:
                            ok = self._alone(k + 1, (t2 - 2, b2 - 2), used)
                        elif b2 > i + 1:
                            ok = self._alone(k + 1, (t2, b2 - 2), used)
                        else:
                            ok = self._alone(k + 1, (t2, b2), used)
                        if ok:
                            break
        self._memo[key] = ok
        return ok

    # -- left cusp -----------------------------------------------------------
    def _left(self, sheets, i, nfrag, ncomp):
        options = []
        for s in sheets:
            if s.b < i:
                options.append([(s,)])
            elif s.t >= i:
                options.append([(_Sheet(s.t + 2, s.b + 2, s.comp, s.top, s.bot),)])
            else:  # t < i <= b: the new cusp opens inside this sheet
                through = (_Sheet(s.t, s.b + 2, s.comp, s.top, s.bot),)
                split = ("split", s)
                options.append([through, split])
        out = []
        births = [0, 1] if not self.twin_births else [0, 1, 2]
        for choice in itertools.product(*options):
            for nb in births:
                f, links, new = nfrag, [], []
                for ch in choice:
                    if isinstance(ch, tuple) and ch and ch[0] == "split":
                        s = ch[1]
                        bu, tl = f, f + 1
                        f += 2
                        new.append(_Sheet(s.t, i, s.comp, s.top, bu))
                        new.append(_Sheet(i + 1, s.b + 2, s.comp, tl, s.bot))
                        links.append((tl, bu, None, 1))
                    else:
                        new.extend(ch)
                c = ncomp
                for _ in range(nb):
                    new.append(_Sheet(i, i + 1, c, f, f + 1))
                    links.append((f, f + 1, None, 1))
                    f += 2
                    c += 1
                out.append((tuple(sorted(new, key=_key)), tuple(links), f, c))
        return out

    # -- crossing --------------------------------------------------------------
    def _cross(self, sheets, i, k, nfrag, ncomp, npos):
        options = []
        for s in sheets:
            if s.t == i and s.b == i + 1:
                options.append([("die", s)])
            elif s.t == i + 1:
                options.append([("keep", _Sheet(i, s.b, s.comp, s.top, s.bot)), ("jumptop", s)])
            elif s.t == i:
                options.append([("keep", _Sheet(i + 1, s.b, s.comp, s.top, s.bot))])
            elif s.b == i + 1:
                options.append([("keep", _Sheet(s.t, i, s.comp, s.top, s.bot))])
            elif s.b == i:
                options.append([("keep", _Sheet(s.t, i + 1, s.comp, s.top, s.bot)), ("jumpbot", s)])
            else:
                options.append([("keep", s)])
        out = []
        for choice in itertools.product(*options):
            for birth in (False, True):
                f, links, new, pos = nfrag, [], [], 0
                c = ncomp
                for kind, s in choice:
                    if kind == "keep":
                        new.append(s)
                    elif kind == "die":
                        pos += 1
                        links.append((s.bot, s.top, self._corner(k, "L", True), 1))
                    elif kind == "jumptop":
                        new.append(_Sheet(i + 1, s.b, s.comp, f, s.bot))
                        links.append((f, s.top, self._corner(k, "B", False), 1))
                        f += 1
                    else:
                        new.append(_Sheet(s.t, i, s.comp, s.top, f))
                        links.append((s.bot, f, self._corner(k, "T", False), 1))
                        f += 1
                if birth:
                    pos += 1
                    new.append(_Sheet(i, i + 1, c, f, f + 1))
                    links.append((f, f + 1, self._corner(k, "R", True), 1))
                    f += 2
                    c += 1
                w = self._weight[k]
                if pos > 1 or (pos and npos & w):
                    continue
                pos *= w
                out.append((tuple(sorted(new, key=_key)), tuple(links), f, c, pos))
        return out

    # -- right cusp loop -----------------------------------------------------------
    def _right(self, sheets, i, k):
        mark = -1 if (self.signed and k in self.spin_events) else 1
        keep, uppers, lowers, links = [], [], [], []
        for s in sheets:
            if s.t == i and s.b == i + 1:
                links.append((s.bot, s.top, None, mark))
            elif s.b == i:
                uppers.append(s)
            elif s.t == i + 1:
                lowers.append(s)
            elif s.t == i or s.b == i + 1:
                return []
            elif s.t > i + 1:
                keep.append(_Sheet(s.t - 2, s.b - 2, s.comp, s.top, s.bot))
            elif s.b > i + 1:
                keep.append(_Sheet(s.t, s.b - 2, s.comp, s.top, s.bot))
            else:
                keep.append(s)
        if len(uppers) != len(lowers):
            return []
        out = []
        for perm in itertools.permutations(lowers):
            comp = {}

            def find(x):
                while comp.get(x, x) != x:
                    x = comp[x]
                return x

            ok = True
            merged, extra = [], list(links)
            for u, l in zip(uppers, perm):
                ru, rl = find(u.comp), find(l.comp)
                if ru == rl:
                    ok = False
                    break
                comp[rl] = ru
                merged.append((u, l))
                extra.append((u.bot, l.top, None, mark))
            if not ok:
                continue
            remap = {s.comp: find(s.comp) for s in sheets}
            sheets_out = [_Sheet(s.t, s.b, remap[s.comp], s.top, s.bot) for s in keep]
            for u, l in merged:
                sheets_out.append(_Sheet(u.t, l.b - 2, remap[u.comp], u.top, l.bot))
            out.append((tuple(sorted(sheets_out, key=_key)), tuple(extra), remap))
        return out

    # -- assembling disks --------------------------------------------------------
    def _finish(self, links, history):
        nxt = {}
        for frm, to, corner, mark in links:
            if frm in nxt:
                raise AssertionError("boundary fragment with two successors")
            nxt[frm] = (to, corner, mark)
        start = None
        positives = []
        for frm, (to, corner, mark) in nxt.items():
            if corner is not None and corner.positive:
                positives.append(corner.generator)
                if self.extra is None or corner.generator != self.extra:
                    start = frm
        if start is None:
            return
        if self.extra is not None and sorted(positives).count(self.extra) != 1:
            return
        # where each fragment runs: (column, slot) pairs, column 0 being the far left
        trail = {}
        for col, state in enumerate(history):
            for sh in state:
                trail.setdefault(sh.top, []).append((col, sh.t))
                trail.setdefault(sh.bot, []).append((col, sh.b))
        corners, sign, path = [], 1, []
        x = start
        seen = 0
        while True:
            to, corner, mark = nxt[x]
            sign *= mark
            if corner is not None:
                corners.append(corner)
                sign *= corner.sign
            path.append(tuple(trail.get(to, ())))
            seen += 1
            x = to
            if x == start:
                break
        if seen != len(nxt):
            raise AssertionError("disk boundary is not a single cycle")
        slices = tuple(tuple((sh.t, sh.b) for sh in state) for state in history[1:])
        disk = AdmissibleDisk(corners[0].generator, tuple(corners), sign, slices)
        self.results.append(((tuple(corners), tuple(path)), disk))


def _coarse_moves(kind, i, intervals, npos, twins, weight=1):
    """Successor layouts of a bare list of sheet intervals, with the number of new positive corners."""
    out = set()
    if kind == "L":
        options = []
        for t, b in intervals:
            if b < i:
                options.append((((t, b),),))
            elif t >= i:
                options.append((((t + 2, b + 2),),))
            else:
                options.append((((t, b + 2),), ((t, i), (i + 1, b + 2))))
        for choice in itertools.product(*options):
            base = [x for part in choice for x in part]
            for nb in range(3 if twins else 2):
                out.add((tuple(sorted(base + [(i, i + 1)] * nb)), 0))
        return out
    options = []
    for t, b in intervals:
        if t == i and b == i + 1:
            options.append((None,))
        elif t == i + 1:
            options.append(((i, b), (i + 1, b)))
        elif t == i:
            options.append(((i + 1, b),))
        elif b == i + 1:
            options.append(((t, i),))
        elif b == i:
            options.append(((t, i + 1), (t, i)))
        else:
            options.append(((t, b),))
    crossed = set()
    for choice in itertools.product(*options):
        dies = choice.count(None)
        base = [x for x in choice if x is not None]
        for birth in (0, 1):
            if dies + birth > 1 or (dies + birth and npos & weight):
                continue
            crossed.add((tuple(sorted(base + [(i, i + 1)] * birth)), (dies + birth) * weight))
    if kind == "X":
        return crossed
    for iv, p in crossed:
        keep, ups, lows = [], [], []
        bad = False
        for t, b in iv:
            if t == i and b == i + 1:
                continue
            if b == i:
                ups.append(t)
            elif t == i + 1:
                lows.append(b)
            elif t == i or b == i + 1:
                bad = True
                break
            elif t > i + 1:
                keep.append((t - 2, b - 2))
            elif b > i + 1:
                keep.append((t, b - 2))
            else:
                keep.append((t, b))
        if bad or len(ups) != len(lows):
            continue
        for perm in set(itertools.permutations(lows)):
            merged = [(t, b - 2) for t, b in zip(ups, perm)]
            out.add((tuple(sorted(keep + merged)), p))
    return out


def _key(s: _Sheet):
    return (s.t, s.b, s.comp, s.top, s.bot)


# --------------------------------------------------------------------------

_CACHE: dict = {}
_CACHE_SIZE = 64


def _cached(D, signed, kw):
    key = (D, signed, tuple(sorted(kw.items())))
    hit = _CACHE.get(key)
    if hit is None:
        hit = sorted(_Sweep(D, signed, **kw).run(),
                     key=lambda d: (d.positive, d.word, d.sign, d.slices))
        if len(_CACHE) >= _CACHE_SIZE:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = hit
    return list(hit)


def all_disks(D: dg.FrontDiagram, signed: bool = True, **kw) -> list[AdmissibleDisk]:
    """Every admissible disk, sorted by positive corner, word, sign and shape."""
    return _cached(D, signed, kw)


def enumerate_disks(D: dg.FrontDiagram, a: str, **kw) -> list[AdmissibleDisk]:
    names = {g.name for g in dg.generators(D)}
    if a not in names:
        raise KeyError(f"{a!r} is not a generator of this diagram")
    return [d for d in all_disks(D, **kw) if d.positive == a]


def pinch_disks(D: dg.FrontDiagram, c: str, signed: bool = True, **kw) -> list[AdmissibleDisk]:
    """Disks with exactly two positive corners, one of them at the chord ``c``.

    ``positive`` names the other one, and ``word`` skips the corner at ``c``.
    These are the disks that correct the chain map of the saddle at ``c``.
    """
    return _cached(D, signed, dict(kw, extra_positive=c))


def build_dga(D: dg.FrontDiagram, ring: Ring = ZZ, check: bool = True, **kw) -> DGA:
    """The DGA over ``ring``. Over Z/2 signs are never computed."""
    gens = dg.generators(D)
    A = Algebra(gens, ring)
    signed = ring.modulus != 2
    acc = {g.name: {} for g in gens}
    for disk in all_disks(D, signed=signed, **kw):
        terms = acc[disk.positive]
        terms[disk.word] = terms.get(disk.word, 0) + disk.sign
    diff = {g: A.poly(t) for g, t in acc.items()}
    for g in gens:
        for w in diff[g.name].terms:
            if A.word_degree(w) != g.degree - 1:
                raise AssertionError(f"disk at {g.name} with word {w} has the wrong degree")
    dga = DGA(A, diff, name=D.name)
    if check:
        ok, bad = check_d_squared(dga)
        if not ok:
            raise SignError(bad, dga)
    return dga
