"""DGAs of glued cobordisms and of their spun higher dimensional versions.

Given a DGA (A, d) and two augmentations eps_F, eps_G, the glued DGA has one
generator c^ of degree |c| + 1 for every generator c, with

    d^(c^) = Omega(dc) - eps_F(c) + eps_G(c),

where Omega replaces one letter of each word by its hat, evaluates eps_F on the
letters to its left and eps_G on the letters to its right.

Spinning an arc DGA (base chords, neck chord b, central chord a) into dimension
n adds a tilde generator c~ of degree |c| + n for every non-central chord and
keeps a single central a of degree n, with D a = b~, D b~ = 0 and
D c~ = Gamma(d^ c^), Gamma replacing one hat letter by its tilde.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import diagram as dg
from .augment import Augmentation, AugmentationError, check_augmentation
from .ncalg import DGA, Algebra, AlgebraError, Generator, NCPoly, Ring, check_d_squared

HAT = "^"
TILDE = "~"


class GluingError(ValueError):
    pass


class DSquaredError(GluingError):
    """The constructed differential does not square to zero."""


def hat(name: str) -> str:
    return name + HAT


def tilde(name: str) -> str:
    return name + TILDE


def unhat(name: str) -> str:
    if not name.endswith(HAT):
        raise GluingError(f"{name!r} is not a hat generator")
    return name[:-1]


@dataclass(frozen=True)
class GluedSpec:
    base: DGA
    eps_F: Augmentation
    eps_G: Augmentation
    spin_n: int | None = None
    name: str = ""

    def validate(self):
        for eps in (self.eps_F, self.eps_G):
            check_augmentation(eps, self.base)
        if self.spin_n is not None:
            if self.spin_n < 2:
                raise GluingError("the spin dimension must be at least 2")
            names = self.base.algebra.names
            for g in (dg.ARC_CENTRAL, dg.ARC_NECK):
                if g not in names:
                    raise GluingError(f"spinning needs an arc DGA with chord {g!r}")
            for label, eps in (("eps_F", self.eps_F), ("eps_G", self.eps_G)):
                if eps(dg.ARC_NECK) != self.base.ring.reduce(1):
                    raise GluingError(f"{label} must send the neck chord {dg.ARC_NECK} to 1")

    def reduce(self, ring: Ring) -> "GluedSpec":
        return GluedSpec(self.base.reduce(ring), self.eps_F.reduce(ring), self.eps_G.reduce(ring),
                         self.spin_n, self.name)


def hat_algebra(A: DGA, skip=()) -> Algebra:
    return Algebra([Generator(hat(g.name), g.degree + 1) for g in A.generators
                    if g.name not in skip], A.ring)


def omega(eps_F: Augmentation, eps_G: Augmentation, p: NCPoly, target: Algebra) -> NCPoly:
    """Omega_{F;G}(p) in the hat algebra ``target``; Omega(1) = 0."""
    A = p.algebra
    acc: dict = {}
    for w, c in p.terms.items():
        m = len(w)
        # right[j] = eps_G(w[j]) ... eps_G(w[m-1])
        right = [1] * (m + 1)
        for j in range(m - 1, -1, -1):
            right[j] = right[j + 1] * eps_G(w[j])
        left, sign = 1, 1
        for j, x in enumerate(w):
            coeff = c * sign * left * right[j + 1]
            if coeff:
                key = (hat(x),)
                acc[key] = acc.get(key, 0) + coeff
            left *= eps_F(x)
            if A.degree(x) % 2:
                sign = -sign
            if not left:
                break
    return NCPoly(target, acc)


def glue(spec: GluedSpec) -> DGA:
    """The DGA with generators c^, |c^| = |c| + 1, and the differential above."""
    if spec.spin_n is not None:
        raise GluingError("use spin() for a spec with a spin dimension")
    spec.validate()
    A = spec.base
    H = hat_algebra(A)
    diff = {}
    for g in A.generators:
        c = g.name
        diff[hat(c)] = omega(spec.eps_F, spec.eps_G, A.d(c), H) - spec.eps_F(c) + spec.eps_G(c)
    out = DGA(H, diff, name=spec.name or f"glued {A.name}")
    _require_d_squared(out)
    return out


def gamma_tilde(p: NCPoly, target: Algebra) -> NCPoly:
    """Gamma(c1^ ... cr^) = sum_k (-1)^(|c1^|+...+|c(k-1)^|) c1^ ... ck~ ... cr^."""
    H = p.algebra
    acc: dict = {}
    for w, c in p.terms.items():
        sign = 1
        for k, x in enumerate(w):
            key = w[:k] + (tilde(unhat(x)),) + w[k + 1:]
            acc[key] = acc.get(key, 0) + sign * c
            if H.degree(x) % 2:
                sign = -sign
    return NCPoly(target, acc)


def spin(spec: GluedSpec) -> DGA:
    n = spec.spin_n
    if n is None:
        raise GluingError("the spec has no spin dimension")
    spec.validate()
    A = spec.base
    a, b = dg.ARC_CENTRAL, dg.ARC_NECK
    chords = [g for g in A.generators if g.name != a]
    gens = ([Generator(hat(g.name), g.degree + 1) for g in chords]
            + [Generator(tilde(g.name), g.degree + n) for g in chords]
            + [Generator(a, n)])
    S = Algebra(gens, A.ring)
    H = hat_algebra(A, skip=(a,))
    diff = {}
    for g in chords:
        c = g.name
        dc = A.d(c)
        if a in dc.generators_used():
            raise GluingError(f"d({c}) involves the central chord; the spun differential is undefined")
        dhat = omega(spec.eps_F, spec.eps_G, dc, H) - spec.eps_F(c) + spec.eps_G(c)
        diff[hat(c)] = dhat.in_algebra(S)
        # Omega only produces words with one hat letter, so d^ is affine and
        # Gamma acts on it as a linear substitution
        diff[tilde(c)] = gamma_tilde(dhat, S)
    diff[a] = S.gen(tilde(b))
    # |a| = |b~| = n, so D a = b~ cannot lower the degree; a is exempt from the check
    out = DGA(S, diff, name=spec.name or f"spun {A.name} n={n}", degree_exempt=(a,))
    _require_d_squared(out)
    return out


def build(spec: GluedSpec) -> DGA:
    return glue(spec) if spec.spin_n is None else spin(spec)


def _require_d_squared(A: DGA):
    ok, bad = check_d_squared(A)
    if not ok:
        raise DSquaredError(f"D^2 != 0 on {bad} in {A.name}")


def hat_closed(A: DGA) -> bool:
    """D of every hat generator involves only hat generators."""
    for g in A.generators:
        if g.name.endswith(HAT):
            if any(not x.endswith(HAT) for x in A.d(g.name).generators_used()):
                return False
    return True


def tilde_ideal_closed(A: DGA) -> bool:
    """D of every tilde generator and of a lies in the ideal they generate."""
    ideal = {g.name for g in A.generators if not g.name.endswith(HAT)}
    for g in ideal:
        for w in A.d(g).terms:
            if not ideal.intersection(w):
                return False
    return True


# -- spec files ---------------------------------------------------------------

def load_spec(path, ring: Ring | None = None) -> GluedSpec:
    """Read a JSON spec.

    Keys: ``base`` (a .front file or a DGA .json file), ``eps_F`` and ``eps_G``
    (a .steps filling recipe, an augmentation .json file, or an inline value
    map), optional ``spin_n``, ``name`` and ``ring``.  Paths are relative to
    the spec file.  When the base is an arc and the augmentations belong to the
    closed knot, they are extended over the arc by the neck pinch.
    """
    from . import chekanov
    from .augment import arc_augmentation, filling_augmentation, load_recipe

    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise GluingError(f"{path}: not valid JSON ({e})") from e
    for key in ("base", "eps_F", "eps_G"):
        if key not in data:
            raise GluingError(f"{path}: missing key {key!r}")
    ring = Ring.parse(data.get("ring", "Z")) if ring is None else ring
    here = path.parent

    base_path = here / data["base"]
    D = None
    if base_path.suffix == ".json":
        A = DGA.from_json(json.loads(base_path.read_text())).reduce(ring)
    else:
        D = dg.parse(base_path.read_text(), name=base_path.stem)
        A = chekanov.build_dga(D, ring)

    def aug(ref):
        if isinstance(ref, dict):
            return Augmentation({k: int(v) for k, v in ref.items()}, ring)
        p = here / ref
        if p.suffix == ".steps":
            if D is not None and D.kind == dg.ARC:
                eps = filling_augmentation(load_recipe(p), ring).augmentation
            else:
                eps = filling_augmentation(load_recipe(p), ring, A).augmentation
        else:
            eps = Augmentation.from_json(json.loads(p.read_text())).reduce(ring)
        if D is not None and D.kind == dg.ARC and dg.ARC_NECK not in eps.values:
            eps = arc_augmentation(eps, D, ring)
        return eps

    try:
        eps_F, eps_G = aug(data["eps_F"]), aug(data["eps_G"])
    except (OSError, AugmentationError, AlgebraError) as e:
        raise GluingError(f"{path}: {e}") from e
    n = data.get("spin_n")
    return GluedSpec(A, eps_F, eps_G, None if n is None else int(n), data.get("name", path.stem))
