"""Certificates of triviality and nontriviality, and linearized homology."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from . import intlin
from .augment import Augmentation, AugmentationError, check_augmentation, enumerate_augmentations
from .ncalg import DGA, NCPoly, apply_derivation, check_d_squared

DEFAULT_MAX_LEN = 3
WITNESS_BUDGET = int(os.environ.get("LEGDGA_WITNESS_BUDGET", "200000"))


class CertifyError(ValueError):
    pass


@dataclass(frozen=True)
class TrivialityWitness:
    element: NCPoly

    def verify(self, A: DGA) -> bool:
        return self.element.degree() == 1 and apply_derivation(A.diff, self.element) == 1

    def to_json(self):
        return self.element.to_json()


def has_zero_augmentation(A: DGA) -> bool:
    """True iff no differential has a constant term."""
    return all(A.d(g.name).constant_term() == 0 for g in A.generators)


def _words_of_degree(A: DGA, degree: int, length: int):
    names = A.algebra.names
    for w in itertools.product(names, repeat=length):
        if A.algebra.word_degree(w) == degree:
            yield w


def find_unit_witness(A: DGA, max_len: int = DEFAULT_MAX_LEN, budget: int | None = None
                      ) -> TrivialityWitness | None:
    """Look for x of degree 1, built from words of length <= max_len, with dx = 1.

    Lengths are tried in increasing order, so the witness found has the shortest
    possible words.  None means nothing was found in that span.
    """
    if max_len < 1:
        raise CertifyError("max_len must be at least 1")
    budget = WITNESS_BUDGET if budget is None else budget
    if has_zero_augmentation(A):
        # eps(dx) = 0 for the zero augmentation, so dx = 1 is impossible
        return None
    n = len(A.generators)
    if sum(n ** k for k in range(1, max_len + 1)) > budget:
        raise CertifyError(f"{n} generators up to length {max_len} exceed the search budget {budget} "
                           "(set LEGDGA_WITNESS_BUDGET to raise it)")
    cols, images = [], []
    for length in range(1, max_len + 1):
        for w in _words_of_degree(A, 1, length):
            cols.append(w)
            images.append(apply_derivation(A.diff, A.algebra.word(*w)))
        if not cols:
            continue
        rows = sorted({u for img in images for u in img.terms} | {()})
        index = {u: i for i, u in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for j, img in enumerate(images):
            for u, c in img.terms.items():
                M[index[u]][j] = A.ring.symmetric(c)
        rhs = [0] * len(rows)
        rhs[index[()]] = 1
        p = A.ring.modulus
        x = intlin.solve(M, rhs) if p is None else intlin.solve_mod(M, rhs, p)
        if x is None:
            continue
        element = A.algebra.poly({cols[j]: v for j, v in enumerate(x) if v})
        witness = TrivialityWitness(element)
        if not witness.verify(A):
            raise CertifyError("witness failed independent verification")
        return witness
    return None


@dataclass
class Verdict:
    status: str                          # "trivial", "nontrivial" or "inconclusive"
    witness: TrivialityWitness | None = None
    augmentation: Augmentation | None = None
    reason: str = ""

    def to_json(self):
        out = {"verdict": self.status}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.augmentation is not None:
            out["augmentation"] = self.augmentation.support()
        if self.reason:
            out["reason"] = self.reason
        return out


def certify(A: DGA, max_len: int = DEFAULT_MAX_LEN, search_augmentations: bool = True) -> Verdict:
    if has_zero_augmentation(A):
        return Verdict("nontrivial", augmentation=Augmentation({}, A.ring),
                       reason="the zero map is an augmentation")
    w = find_unit_witness(A, max_len)
    if w is not None:
        return Verdict("trivial", witness=w, reason="d x = 1")
    if search_augmentations:
        try:
            augs = enumerate_augmentations(A)
        except AugmentationError as e:
            return Verdict("inconclusive", reason=str(e))
        if augs:
            return Verdict("nontrivial", augmentation=augs[0], reason="an augmentation exists")
    return Verdict("inconclusive", reason=f"no witness up to length {max_len} and no augmentation found")


# -- linearized homology ------------------------------------------------------

@dataclass
class LinearizedHomology:
    ranks: dict[int, int]
    torsion: dict[int, list[int]] = field(default_factory=dict)
    ring: str = "Z"

    def nonzero(self) -> dict[int, int]:
        return {k: r for k, r in self.ranks.items() if r}

    def to_json(self):
        return {"ring": self.ring,
                "ranks": {str(k): r for k, r in sorted(self.ranks.items())},
                "torsion": {str(k): t for k, t in sorted(self.torsion.items()) if t}}


def linear_part(A: DGA, eps: Augmentation) -> dict[str, dict[str, int]]:
    """Word-length one part of the differential conjugated by c -> c + eps(c)."""
    out = {}
    for g in A.generators:
        acc: dict[str, int] = {}
        for w, c in A.d(g.name).terms.items():
            vals = [eps(x) for x in w]
            for j, x in enumerate(w):
                k = c
                for i, v in enumerate(vals):
                    if i != j:
                        k *= v
                        if not k:
                            break
                if k:
                    acc[x] = acc.get(x, 0) + k
        out[g.name] = {x: A.ring.symmetric(A.ring.reduce(k)) for x, k in acc.items()
                       if A.ring.reduce(k)}
    return out


def linearized_homology(A: DGA, eps: Augmentation) -> LinearizedHomology:
    try:
        check_augmentation(eps, A)
    except AugmentationError as e:
        raise CertifyError(str(e)) from e
    d1 = linear_part(A, eps)
    by_deg: dict[int, list[str]] = {}
    for g in A.generators:
        by_deg.setdefault(g.degree, []).append(g.name)
        for x in d1[g.name]:
            if A.degree(x) != g.degree - 1:
                raise CertifyError(f"linearized d({g.name}) leaves the expected degree")
    # d1 o d1 = 0
    for g in A.generators:
        acc: dict[str, int] = {}
        for x, c in d1[g.name].items():
            for y, e in d1[x].items():
                acc[y] = acc.get(y, 0) + c * e
        if any(A.ring.reduce(v) for v in acc.values()):
            raise CertifyError(f"linearized differential does not square to zero at {g.name}")

    p = A.ring.modulus

    def boundary(k):
        """Matrix of d1: C_k -> C_{k-1}; returns (rank, invariant factors)."""
        src, dst = by_deg.get(k, []), by_deg.get(k - 1, [])
        if not src or not dst:
            return 0, []
        index = {x: i for i, x in enumerate(dst)}
        rows = [[0] * len(src) for _ in dst]
        for j, g in enumerate(src):
            for x, c in d1[g].items():
                rows[index[x]][j] = c
        M = intlin.matrix(rows, len(dst), len(src))
        if p is None:
            return intlin.rank_and_factors(M)
        return intlin.rank_mod(M, p), []

    degs = sorted(by_deg)
    info = {k: boundary(k) for k in set(degs) | {k + 1 for k in degs}}
    ranks, torsion = {}, {}
    for k in degs:
        ranks[k] = len(by_deg[k]) - info[k][0] - info[k + 1][0]
        torsion[k] = info[k + 1][1]
    euler_h = sum((-1) ** k * r for k, r in ranks.items())
    euler_c = sum((-1) ** k * len(v) for k, v in by_deg.items())
    if euler_h != euler_c:
        raise CertifyError("Euler characteristic mismatch")
    return LinearizedHomology(ranks, torsion, A.ring.name)


def check_dga(A: DGA) -> None:
    ok, bad = check_d_squared(A)
    if not ok:
        raise CertifyError(f"d^2 != 0 at {bad}")
