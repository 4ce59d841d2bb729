"""Augmentations, chain maps of elementary cobordisms, and filling recipes.

A filling is described as a list of elementary steps starting at a knot
front: pinches (saddle cobordisms that shrink a contractible degree 0 chord),
isotopies between combinatorially identical diagrams (plain relabelings), and
a final disk cap on a union of standard unknots.  The induced augmentation is
the composite of the step maps followed by the zero map of the caps.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import diagram as dg
from . import intlin
from .chekanov import build_dga, enumerate_disks, pinch_disks
from .ncalg import (DGA, Algebra, Generator, NCPoly, Ring, ZZ, AlgebraError,
                    apply_algebra_map, apply_derivation)

DEFAULT_BUDGET = int(os.environ.get("LEGDGA_AUG_BUDGET", "5000000"))
CORRECTION_MAX_LEN = 4


class AugmentationError(ValueError):
    pass


class PinchError(ValueError):
    pass


class Augmentation:
    """Values of a graded unital map from a DGA to its ground ring."""

    def __init__(self, values, ring: Ring = ZZ, name: str = ""):
        self.ring = ring
        self.name = name
        self._values = {g: ring.symmetric(v) for g, v in dict(values).items()}

    def __call__(self, g: str) -> int:
        return self._values.get(g, 0)

    def __eq__(self, other):
        return (isinstance(other, Augmentation) and self.ring == other.ring
                and self.support() == other.support())

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.support().items()))))

    def __repr__(self):
        return f"Augmentation({self.name or '?'}: {self.support()} over {self.ring})"

    def support(self) -> dict[str, int]:
        return {g: v for g, v in sorted(self._values.items()) if v}

    @property
    def values(self) -> dict[str, int]:
        return dict(sorted(self._values.items()))

    def evaluate(self, p: NCPoly) -> int:
        total = 0
        for word, c in p.items():
            term = c
            for x in word:
                term *= self(x)
                if not term:
                    break
            total += term
        return self.ring.symmetric(total)

    def reduce(self, ring: Ring) -> "Augmentation":
        return Augmentation(self._values, ring, self.name)

    def images(self, A: DGA) -> dict[str, NCPoly]:
        """The map as generator images in the ground ring (constants of A)."""
        return {g.name: A.algebra.const(self(g.name)) for g in A.generators}

    def to_json(self) -> dict:
        return {"name": self.name, "ring": self.ring.name, "values": self.values}

    @classmethod
    def from_json(cls, data) -> "Augmentation":
        return cls({k: int(v) for k, v in data["values"].items()}, Ring.parse(data.get("ring", "Z")),
                   data.get("name", ""))


def is_augmentation(eps: Augmentation, A: DGA) -> bool:
    for g in A.generators:
        if g.degree != 0 and A.ring.reduce(eps(g.name)) != 0:
            return False
    for g in A.generators:
        if A.ring.reduce(eps.evaluate(A.d(g.name))):
            return False
    return True


def check_augmentation(eps: Augmentation, A: DGA) -> None:
    for g in A.generators:
        if g.degree != 0 and A.ring.reduce(eps(g.name)) != 0:
            raise AugmentationError(f"{g.name} has degree {g.degree} but value {eps(g.name)}")
        v = A.ring.reduce(eps.evaluate(A.d(g.name)))
        if v:
            raise AugmentationError(f"eps(d {g.name}) = {A.ring.symmetric(v)}, not 0")


def enumerate_augmentations(A: DGA, ring: Ring | None = None, budget: int | None = None
                            ) -> list[Augmentation]:
    """All augmentations with values in ``ring`` (default the DGA's own ring).

    Over a finite ring this is exhaustive.  Over Z only the values -1, 0, 1 are
    tried.  Branches are cut as soon as some eps(d c) is fully determined and
    nonzero.
    """
    ring = A.ring if ring is None else ring
    if ring != A.ring:
        A = A.reduce(ring)
    values = [-1, 0, 1] if ring.modulus is None else [ring.symmetric(v) for v in ring.elements()]
    zero_gens = [g.name for g in A.generators if g.degree == 0]
    budget = DEFAULT_BUDGET if budget is None else budget
    if len(values) ** len(zero_gens) > budget:
        raise AugmentationError(
            f"{len(values)}^{len(zero_gens)} assignments exceed the search budget {budget} "
            "(set LEGDGA_AUG_BUDGET to raise it)")
    pos = {g: i for i, g in enumerate(zero_gens)}
    # only words made of degree 0 letters survive evaluation
    checks = []
    for g in A.generators:
        terms = [(w, c) for w, c in A.d(g.name).items() if all(x in pos for x in w)]
        if not terms:
            continue
        last = max((pos[x] for w, _ in terms for x in w), default=-1)
        checks.append((last, terms))
    by_level = {}
    for last, terms in checks:
        by_level.setdefault(last, []).append(terms)
    out = []
    assign = [0] * len(zero_gens)

    def ok(level):
        for terms in by_level.get(level, ()):
            total = 0
            for w, c in terms:
                t = c
                for x in w:
                    t *= assign[pos[x]]
                total += t
            if ring.reduce(total):
                return False
        return True

    if not ok(-1):
        return []

    def rec(i):
        if i == len(zero_gens):
            out.append(Augmentation(dict(zip(zero_gens, assign)), ring))
            return
        for v in values:
            assign[i] = v
            if ok(i):
                rec(i + 1)
        assign[i] = 0

    rec(0)
    for eps in out:
        assert is_augmentation(eps, A)
    return out


# -- chain maps --------------------------------------------------------------

@dataclass
class ChainMap:
    source: DGA
    target: DGA
    images: dict[str, NCPoly]
    label: str = ""

    def __call__(self, p: NCPoly) -> NCPoly:
        return apply_algebra_map(self.images, p, self.target.algebra)

    def failure(self) -> str | None:
        """First generator where the map fails to commute with d, or has the wrong degree."""
        for g in self.source.generators:
            img = self.images[g.name]
            for w, _ in img.items():
                if self.target.algebra.word_degree(w) != g.degree:
                    return g.name
            lhs = self(self.source.d(g.name))
            rhs = apply_derivation(self.target.diff, img)
            if lhs != rhs:
                return g.name
        return None

    def then(self, other: "ChainMap") -> "ChainMap":
        """``other`` after ``self``."""
        if other.source.algebra != self.target.algebra:
            raise AugmentationError("maps do not compose: target and source differ")
        imgs = {g: other(p) for g, p in self.images.items()}
        return ChainMap(self.source, other.target, imgs, f"{self.label}; {other.label}".strip("; "))

    def augmentation(self) -> Augmentation:
        """For a map into the ground ring (a DGA with no generators)."""
        vals = {}
        for g, p in self.images.items():
            if any(w for w, _ in p.items()):
                raise AugmentationError(f"{g} is not sent to a constant")
            vals[g] = p.constant_term()
        return Augmentation(vals, self.source.ring)


def ground_dga(ring: Ring) -> DGA:
    return DGA(Algebra([], ring), {}, name="ground ring")


# -- simplicity screen and pinch maps -------------------------------------------

def simplicity_screen(D: dg.FrontDiagram, chord: str, A: DGA | None = None) -> str | None:
    """Why ``chord`` cannot be pinched, or None if it passes."""
    ev = dg.generator_events(D)
    if chord not in ev:
        return f"{chord!r} is not a chord of {D.name or 'the diagram'}"
    k = ev[chord]
    if D.events[k].kind != "X":
        return f"{chord} is a right cusp, not a crossing"
    A = build_dga(D) if A is None else A
    if A.degree(chord) != 0:
        return f"{chord} has degree {A.degree(chord)}, not 0"
    if not A.d(chord).is_zero():
        return f"d {chord} = {A.d(chord)} is not zero"
    if enumerate_disks(D, chord):
        return f"{chord} is the positive corner of some disk"
    return None


@dataclass
class PinchResult:
    chord: str
    source_diagram: dg.FrontDiagram
    target_diagram: dg.FrontDiagram
    map: ChainMap
    sign: int
    corrected: list[str] = field(default_factory=list)


def _words(alg: Algebra, degree: int, max_len: int):
    gens = alg.names
    for n in range(1, max_len + 1):
        for w in itertools.product(gens, repeat=n):
            if alg.word_degree(w) == degree:
                yield w


def _correction(target: DGA, residual: NCPoly, degree: int, max_len: int, budget: int):
    """Some y of the given degree with d y = residual, using words of length <= max_len."""
    alg = target.algebra
    cand = []
    for w in _words(alg, degree, max_len):
        cand.append(w)
        if len(cand) > budget:
            raise PinchError("correction search exceeds its budget")
    cols = [apply_derivation(target.diff, alg.word(*w)) for w in cand]
    rows = sorted({w for c in cols for w, _ in c.items()} | {w for w, _ in residual.items()})
    idx = {w: i for i, w in enumerate(rows)}
    M = [[0] * len(cand) for _ in rows]
    for j, c in enumerate(cols):
        for w, v in c.items():
            M[idx[w]][j] = v
    rhs = [0] * len(rows)
    for w, v in residual.items():
        rhs[idx[w]] = v
    x = intlin.solve(intlin.matrix(M, len(rows), len(cand)), rhs)
    if x is None:
        return None
    return alg.poly({w: v for w, v in zip(cand, x) if v})


def _dependency_order(A: DGA) -> list[str]:
    """Generators ordered so that d x only involves earlier ones, as far as possible."""
    deps = {g.name: {y for w, _ in A.d(g.name).items() for y in w} - {g.name}
            for g in A.generators}
    order, placed = [], set()
    while len(order) < len(deps):
        ready = [g for g in deps if g not in placed and deps[g] <= placed]
        if not ready:   # a cycle; take the rest in generator order
            ready = [g for g in deps if g not in placed][:1]
        for g in ready:
            order.append(g)
            placed.add(g)
    return order


def _signed_corrections(A: DGA, B: DGA, chord: str, s: int, extra, signs):
    """Search phi(x) = sx * x + tx * extra(x) with sx, tx = +-1, phi(chord) = s.

    Orientation data on the two diagrams need not match generator by generator,
    so each image may come with its own sign.  Generators are fixed in dependency
    order; each only has to commute with d once its inputs are fixed.
    """
    order = [g for g in _dependency_order(A) if g != chord]
    imgs = {chord: B.algebra.const(s)}

    def options(g):
        seen = []
        for sx in signs:
            for tx in (signs if g in extra else (1,)):
                p = sx * B.gen(g) + tx * extra.get(g, B.algebra.zero())
                if p not in seen:
                    seen.append(p)
        return seen

    def ok(g):
        lhs = apply_algebra_map(imgs, A.d(g), B.algebra)
        return lhs == apply_derivation(B.diff, imgs[g])

    def rec(i):
        if i == len(order):
            return True
        g = order[i]
        for p in options(g):
            imgs[g] = p
            if all(y in imgs for w, _ in A.d(g).items() for y in w) and not ok(g):
                continue
            if rec(i + 1):
                return True
        del imgs[g]
        return False

    if A.d(chord).is_zero() and rec(0):
        phi = ChainMap(A, B, dict(imgs), f"pinch {chord}")
        if phi.failure() is None:
            return phi
    return None


def saddle_pinch_map(D: dg.FrontDiagram, chord: str, ring: Ring = ZZ,
                     max_len: int = CORRECTION_MAX_LEN, budget: int = 20000) -> PinchResult:
    """Chain map of the saddle cobordism that shrinks ``chord`` away.

    The pinched diagram is D with that crossing removed.  Candidates, in order:

    1. first order: the chord goes to +1 or -1, every other generator to itself;
    2. x goes to +-x plus +-(the signed words of the disks with positive corners
       at x and at the chord), signs chosen generator by generator;
    3. a search that fixes failing generators one at a time by solving
       d y = residual exactly with words of length at most ``max_len``.

    Whatever is returned has been checked to commute with the differentials.
    """
    A = build_dga(D, ring)
    why = simplicity_screen(D, chord, A)
    if why:
        raise PinchError(why)
    k = dg.generator_events(D)[chord]
    D2 = dg.delete_event(D, k, name=f"{D.name}/{chord}" if D.name else chord)
    B = build_dga(D2, ring)
    signs = (1,) if ring.modulus == 2 else (1, -1)

    def first_order(s):
        imgs = {g.name: B.gen(g.name) for g in A.generators if g.name != chord}
        imgs[chord] = B.algebra.const(s)
        return ChainMap(A, B, imgs, f"pinch {chord}")

    for s in signs:
        phi = first_order(s)
        if phi.failure() is None:
            return PinchResult(chord, D, D2, phi, s)

    extra = {}
    for disk in pinch_disks(D, chord, signed=ring.modulus != 2):
        if A.algebra.word_degree(disk.word) != A.degree(disk.positive):
            continue
        terms = extra.setdefault(disk.positive, {})
        terms[disk.word] = terms.get(disk.word, 0) + disk.sign
    extra = {g: B.algebra.poly(t) for g, t in extra.items()}
    for s in signs:
        phi = _signed_corrections(A, B, chord, s, extra, signs)
        if phi is not None:
            return PinchResult(chord, D, D2, phi, s, sorted(g for g in extra if extra[g]))

    for s in signs:
        phi = first_order(s)
        fixed = []
        for _ in range(2 * len(A.generators)):
            bad = phi.failure()
            if bad is None:
                return PinchResult(chord, D, D2, phi, s, fixed)
            residual = phi(A.d(bad)) - apply_derivation(B.diff, phi.images[bad])
            y = None
            for n in range(1, max_len + 1):
                y = _correction(B, residual, A.degree(bad), n, budget)
                if y is not None:
                    break
            if y is None:
                break
            phi.images[bad] = phi.images[bad] + y
            fixed.append(bad)
    raise PinchError(f"no chain map found for the pinch at {chord}")


def neck_pinch_map(D: dg.FrontDiagram, ring: Ring = ZZ) -> ChainMap:
    """For an arc: the saddle at the neck chord b, b -> 1.

    The target is the closed knot (the arc with its left cusp put back) together
    with the central chord a of the split-off half unknot, which is a cycle.
    """
    if D.kind != dg.ARC:
        raise PinchError("the neck pinch needs an arc diagram")
    A = build_dga(D, ring)
    K = dg.as_knot(D)
    KA = build_dga(K, ring)
    gens = list(KA.generators) + [Generator(dg.ARC_CENTRAL, A.degree(dg.ARC_CENTRAL))]
    alg = Algebra(gens, ring)
    diff = {g.name: KA.d(g.name).in_algebra(alg) for g in KA.generators}
    B = DGA(alg, diff, name=f"{K.name} + half unknot")
    imgs = {g.name: alg.gen(g.name) for g in A.generators if g.name != dg.ARC_NECK}
    imgs[dg.ARC_NECK] = alg.one()
    phi = ChainMap(A, B, imgs, "pinch b")
    bad = phi.failure()
    if bad is not None:
        raise PinchError(f"the neck pinch is not a chain map (fails at {bad})")
    return phi


def cap_map(D: dg.FrontDiagram, A: DGA) -> ChainMap:
    """Disk caps on a union of standard unknots: every generator goes to 0."""
    if not dg.is_standard_unlink(D):
        raise AugmentationError(f"{D.name or 'diagram'} is not a union of standard unknots")
    G = ground_dga(A.ring)
    phi = ChainMap(A, G, {g.name: G.algebra.zero() for g in A.generators}, "cap")
    bad = phi.failure()
    if bad is not None:
        raise AugmentationError(f"the zero map is not an augmentation (fails at {bad})")
    return phi


# -- recipes -------------------------------------------------------------------

@dataclass
class CobordismStep:
    kind: str                 # "pinch", "isotopy" or "cap"
    chord: str | None = None
    target_file: str | None = None
    source: dg.FrontDiagram | None = None
    target: dg.FrontDiagram | None = None
    line: int | None = None


@dataclass
class Recipe:
    name: str
    source_file: Path
    steps: list[CobordismStep]


def parse_recipe(text: str, base: Path | str = ".", name: str = "") -> Recipe:
    base = Path(base)
    source, steps = None, []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "name:":
            name = rest
        elif head == "source":
            source = base / rest
        elif head == "pinch" and rest:
            steps.append(CobordismStep("pinch", chord=rest, line=n))
        elif head == "isotopy" and rest:
            steps.append(CobordismStep("isotopy", target_file=str(base / rest), line=n))
        elif head == "cap" and not rest:
            steps.append(CobordismStep("cap", line=n))
        else:
            raise AugmentationError(f"line {n}: cannot read step {line!r}")
    if source is None:
        raise AugmentationError("recipe has no 'source' line")
    if not steps or steps[-1].kind != "cap" or any(s.kind == "cap" for s in steps[:-1]):
        raise AugmentationError("a recipe must end with exactly one 'cap' step")
    return Recipe(name, source, steps)


def load_recipe(path) -> Recipe:
    path = Path(path)
    return parse_recipe(path.read_text(), path.parent, path.stem)


def _relabel(D: dg.FrontDiagram, T: dg.FrontDiagram, A: DGA, B: DGA) -> ChainMap:
    if D.events != T.events or D.kind != T.kind:
        raise AugmentationError(f"isotopy target {T.name or '?'} is not combinatorially identical "
                                "to the current diagram")
    src, dst = dg.chord_names(D), dg.chord_names(T)
    imgs = {src[k]: B.gen(dst[k]) for k in src}
    for g in (dg.ARC_CENTRAL, dg.ARC_NECK):
        if g in A.algebra:
            imgs[g] = B.gen(g)
    phi = ChainMap(A, B, imgs, f"isotopy to {T.name}")
    bad = phi.failure()
    if bad is not None:
        raise AugmentationError(f"relabeling is not a chain map (fails at {bad})")
    return phi


@dataclass
class FillingResult:
    augmentation: Augmentation
    dga: DGA
    steps: list[CobordismStep]
    pinches: list[PinchResult]
    map: ChainMap


def filling_augmentation(recipe: Recipe, ring: Ring = ZZ, A: DGA | None = None) -> FillingResult:
    D = dg.load(recipe.source_file)
    A0 = build_dga(D, ring)
    if A is not None and A != A0:
        raise AugmentationError("the given DGA is not the DGA of the recipe's source diagram")
    total = ChainMap(A0, A0, {g.name: A0.gen(g.name) for g in A0.generators}, "")
    cur, curA = D, A0
    done, pinches = [], []
    for st in recipe.steps:
        st.source = cur
        if st.kind == "pinch":
            res = saddle_pinch_map(cur, st.chord, ring)
            pinches.append(res)
            step_map, cur = res.map, res.target_diagram
        elif st.kind == "isotopy":
            T = dg.load(st.target_file)
            B = build_dga(T, ring)
            step_map, cur = _relabel(cur, T, curA, B), T
        else:
            step_map = cap_map(cur, curA)
        st.target = cur
        total = total.then(step_map)
        bad = total.failure()
        if bad is not None:
            raise AugmentationError(f"composite map stops being a chain map at {bad} "
                                    f"(step on line {st.line})")
        curA = step_map.target
        done.append(st)
    eps = total.augmentation()
    eps.name = recipe.name
    check_augmentation(eps, A0)
    return FillingResult(eps, A0, done, pinches, total)


def arc_augmentation(eps: Augmentation, D_arc: dg.FrontDiagram, ring: Ring | None = None
                     ) -> Augmentation:
    """Extend a knot augmentation to the arc obtained by cutting the knot open.

    Composite of the neck pinch (b -> 1) with eps on the knot chords and the
    cap on the half unknot (a -> 0).
    """
    ring = eps.ring if ring is None else ring
    phi = neck_pinch_map(D_arc, ring)
    vals = {}
    for g, p in phi.images.items():
        vals[g] = Augmentation(eps.values, ring).evaluate(p)
    out = Augmentation(vals, ring, eps.name)
    check_augmentation(out, phi.source)
    return out
