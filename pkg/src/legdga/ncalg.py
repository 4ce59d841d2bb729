"""Free noncommutative graded algebras over Z and Z/p.

Polynomials are finite maps from words (tuples of generator names, the empty
tuple being the unit) to nonzero ring elements. Everything here is immutable;
operations return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

MIXED = "mixed"


class AlgebraError(ValueError):
    """Raised on mismatched algebras, unknown generators or bad gradings."""


@dataclass(frozen=True)
class Ring:
    """Z when ``modulus`` is None, otherwise Z/modulus."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise AlgebraError(f"bad modulus {self.modulus}")

    def reduce(self, x: int) -> int:
        if self.modulus is None:
            return int(x)
        return int(x) % self.modulus

    def elements(self) -> list[int]:
        if self.modulus is None:
            raise AlgebraError("Z is infinite")
        return list(range(self.modulus))

    def symmetric(self, x: int) -> int:
        """Representative in (-p/2, p/2]; identity over Z."""
        x = self.reduce(x)
        if self.modulus is not None and x > self.modulus // 2:
            x -= self.modulus
        return x

    @property
    def name(self) -> str:
        return "Z" if self.modulus is None else f"Z/{self.modulus}"

    @classmethod
    def parse(cls, text: str) -> "Ring":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return ZZ
        for prefix in ("Z/", "Zmod", "F"):
            if text.startswith(prefix):
                return cls(int(text[len(prefix):]))
        raise AlgebraError(f"unknown ring {text!r}")

    def __str__(self):
        return self.name


ZZ = Ring(None)


def Zmod(p: int) -> Ring:
    return Ring(p)


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


class Algebra:
    """The free unital algebra on a finite set of graded generators."""

    __slots__ = ("ring", "generators", "_deg")

    def __init__(self, generators: Iterable[Generator], ring: Ring = ZZ):
        gens = tuple(generators)
        deg = {}
        for g in gens:
            if g.name in deg:
                raise AlgebraError(f"duplicate generator {g.name!r}")
            if not g.name or " " in g.name:
                raise AlgebraError(f"bad generator name {g.name!r}")
            deg[g.name] = int(g.degree)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_deg", deg)

    def __setattr__(self, key, value):
        raise AttributeError("Algebra is immutable")

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"Algebra<{self.ring}>({gens})"

    def __contains__(self, name: str) -> bool:
        return name in self._deg

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def degree(self, name: str) -> int:
        try:
            return self._deg[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def word_degree(self, word: tuple[str, ...]) -> int:
        return sum(self.degree(x) for x in word)

    def with_ring(self, ring: Ring) -> "Algebra":
        return Algebra(self.generators, ring)

    # constructors
    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): 1})

    def const(self, k: int) -> "NCPoly":
        return NCPoly(self, {(): k})

    def gen(self, name: str) -> "NCPoly":
        self.degree(name)
        return NCPoly(self, {(name,): 1})

    def word(self, *names: str, coeff: int = 1) -> "NCPoly":
        for x in names:
            self.degree(x)
        return NCPoly(self, {tuple(names): coeff})

    def poly(self, terms: Mapping[tuple[str, ...], int] | Iterable) -> "NCPoly":
        if not isinstance(terms, Mapping):
            acc: dict = {}
            for w, c in terms:
                acc[tuple(w)] = acc.get(tuple(w), 0) + c
            terms = acc
        for w in terms:
            for x in w:
                self.degree(x)
        return NCPoly(self, terms)


class NCPoly:
    """An element of a free noncommutative algebra."""

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: Algebra, terms: Mapping[tuple[str, ...], int]):
        ring = algebra.ring
        clean = {}
        for w, c in terms.items():
            c = ring.reduce(c)
            if c:
                clean[tuple(w)] = c
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("NCPoly is immutable")

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[str, ...], int]:
        return dict(self._terms)

    def items(self) -> list[tuple[tuple[str, ...], int]]:
        """Terms in canonical order: degree, then length, then lexicographic."""
        A = self.algebra
        return sorted(self._terms.items(),
                      key=lambda t: (A.word_degree(t[0]), len(t[0]), t[0]))

    def coefficient(self, word: Iterable[str]) -> int:
        return self._terms.get(tuple(word), 0)

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def generators_used(self) -> set[str]:
        return {x for w in self._terms for x in w}

    def degree(self):
        """Common degree of all words, ``MIXED``, or None for zero."""
        degs = {self.algebra.word_degree(w) for w in self._terms}
        if not degs:
            return None
        if len(degs) > 1:
            return MIXED
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return self.degree() != MIXED

    def length_part(self, n: int) -> "NCPoly":
        return NCPoly(self.algebra, {w: c for w, c in self._terms.items() if len(w) == n})

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.algebra != self.algebra:
                raise AlgebraError("polynomials live in different algebras")
            return other
        if isinstance(other, int):
            return self.algebra.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return NCPoly(self.algebra, acc)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.algebra, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return NCPoly(self.algebra, {w: c * other for w, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.const(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.algebra == other.algebra and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.algebra, frozenset(self._terms.items()))))
        return self._hash

    def reduce(self, ring: Ring) -> "NCPoly":
        """Image under Z -> Z/p (or identity when rings agree)."""
        if self.algebra.ring.modulus is not None and ring != self.algebra.ring:
            raise AlgebraError(f"cannot convert {self.algebra.ring} to {ring}")
        return NCPoly(self.algebra.with_ring(ring), self._terms)

    def in_algebra(self, algebra: Algebra) -> "NCPoly":
        """The same element viewed in a larger algebra over the same ring."""
        if algebra.ring != self.algebra.ring:
            raise AlgebraError("ring mismatch")
        for x in self.generators_used():
            if algebra.degree(x) != self.algebra.degree(x):
                raise AlgebraError(f"degree of {x!r} differs")
        return NCPoly(algebra, self._terms)

    # -- display ----------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for w, c in self.items():
            c = self.algebra.ring.symmetric(c)
            body = "*".join(w)
            if not w:
                piece = str(abs(c))
            elif abs(c) == 1:
                piece = body
            else:
                piece = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            out.append((sign, piece))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, piece in out[1:]:
            text += f" {sign} {piece}"
        return text

    def __repr__(self):
        return f"NCPoly({self})"

    def to_json(self) -> dict[str, int]:
        return {" ".join(w): self.algebra.ring.symmetric(c) for w, c in self.items()}


def mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Concatenation product."""
    if p.algebra != q.algebra:
        raise AlgebraError("polynomials live in different algebras")
    acc: dict = {}
    for w1, c1 in p._terms.items():
        for w2, c2 in q._terms.items():
            w = w1 + w2
            acc[w] = acc.get(w, 0) + c1 * c2
    return NCPoly(p.algebra, acc)


def poly_from_json(algebra: Algebra, data: Mapping[str, int]) -> NCPoly:
    return algebra.poly({tuple(k.split()): int(v) for k, v in data.items()})


def _lookup(images: Mapping[str, NCPoly] | Callable[[str], NCPoly], name: str) -> NCPoly:
    if callable(images) and not isinstance(images, Mapping):
        return images(name)
    try:
        return images[name]
    except KeyError:
        raise AlgebraError(f"generator {name!r} missing from map") from None


def apply_derivation(d: Mapping[str, NCPoly], p: NCPoly) -> NCPoly:
    """Extend ``d`` to ``p`` by d(xy) = d(x)y + (-1)^|x| x d(y); d(1) = 0.

    The target polynomials of ``d`` must live in ``p``'s algebra.
    """
    A = p.algebra
    acc: dict = {}
    for word, coeff in p._terms.items():
        sign = 1
        for k, x in enumerate(word):
            dx = _lookup(d, x)
            if dx.algebra != A:
                raise AlgebraError("derivation leaves the algebra")
            prefix, suffix = word[:k], word[k + 1:]
            for w, c in dx._terms.items():
                nw = prefix + w + suffix
                acc[nw] = acc.get(nw, 0) + sign * coeff * c
            if A.degree(x) % 2:
                sign = -sign
    return NCPoly(A, acc)


def apply_algebra_map(phi: Mapping[str, NCPoly] | Callable[[str], NCPoly], p: NCPoly,
                      target: Algebra | None = None) -> NCPoly:
    """Unital ring homomorphism determined by generator images."""
    if target is None:
        sample = next(iter(phi.values()), None) if isinstance(phi, Mapping) else None
        target = sample.algebra if sample is not None else p.algebra
    cache: dict[str, NCPoly] = {}
    total = target.zero()
    for word, coeff in p._terms.items():
        term = target.const(coeff)
        for x in word:
            if x not in cache:
                img = _lookup(phi, x)
                if img.algebra != target:
                    raise AlgebraError(f"image of {x!r} is in the wrong algebra")
                cache[x] = img
            term = mul(term, cache[x])
            if term.is_zero():
                break
        total = total + term
    return total


# ---------------------------------------------------------------------------

class DGA:
    """A free algebra with a degree -1 differential given on generators."""

    def __init__(self, algebra: Algebra, diff: Mapping[str, NCPoly], name: str = "",
                 check_degrees: bool = True, degree_exempt=()):
        self.algebra = algebra
        self.name = name
        # generators whose differential is allowed to break the degree rule
        self.degree_exempt = tuple(sorted(degree_exempt))
        d = {}
        for g in algebra.generators:
            p = diff.get(g.name, algebra.zero())
            if p.algebra != algebra:
                p = p.in_algebra(algebra)
            d[g.name] = p
        extra = set(diff) - set(d)
        if extra:
            raise AlgebraError(f"differential given on unknown generators {sorted(extra)}")
        self._diff = d
        if check_degrees:
            for g in algebra.generators:
                if g.name in self.degree_exempt:
                    continue
                for w in d[g.name]._terms:
                    if algebra.word_degree(w) != g.degree - 1:
                        raise AlgebraError(
                            f"d({g.name}) contains {' '.join(w) or '1'} of degree "
                            f"{algebra.word_degree(w)}, expected {g.degree - 1}")

    @property
    def ring(self) -> Ring:
        return self.algebra.ring

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.algebra.generators

    def degree(self, name: str) -> int:
        return self.algebra.degree(name)

    def d(self, x: str | NCPoly) -> NCPoly:
        if isinstance(x, str):
            self.algebra.degree(x)
            return self._diff[x]
        return apply_derivation(self._diff, x)

    @property
    def diff(self) -> dict[str, NCPoly]:
        return dict(self._diff)

    def gen(self, name: str) -> NCPoly:
        return self.algebra.gen(name)

    def reduce(self, ring: Ring) -> "DGA":
        A = self.algebra.with_ring(ring)
        return DGA(A, {k: NCPoly(A, v._terms) for k, v in self._diff.items()},
                   name=self.name, check_degrees=False, degree_exempt=self.degree_exempt)

    def __eq__(self, other):
        return (isinstance(other, DGA) and self.algebra == other.algebra
                and self._diff == other._diff)

    def __repr__(self):
        return f"DGA({self.name or '?'}, {len(self.generators)} generators over {self.ring})"

    def summary(self) -> str:
        lines = []
        for g in self.generators:
            lines.append(f"  {g.name} [{g.degree}]: d = {self._diff[g.name]}")
        return "\n".join(lines)

    # serialization
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ring": self.ring.name,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.generators],
            "differential": {g.name: self._diff[g.name].to_json() for g in self.generators},
            **({"degree_exempt": list(self.degree_exempt)} if self.degree_exempt else {}),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DGA":
        ring = Ring.parse(data.get("ring", "Z"))
        A = Algebra([Generator(g["name"], int(g["degree"])) for g in data["generators"]], ring)
        diff = {k: poly_from_json(A, v) for k, v in data.get("differential", {}).items()}
        return cls(A, diff, name=data.get("name", ""),
                   degree_exempt=data.get("degree_exempt", ()))


def check_d_squared(A: DGA) -> tuple[bool, str | None]:
    """Return (True, None) if d^2 = 0 on every generator, else (False, first bad generator)."""
    for g in A.generators:
        if not apply_derivation(A.diff, A.d(g.name)).is_zero():
            return False, g.name
    return True, None
