"""Presentations, reduced words, ball enumeration and word evaluation.

Letters are nonzero signed integers: generator i is ``i``, its inverse
``-i``.  The ASCII form maps generator i to the i-th lowercase letter and
its inverse to the uppercase letter, so the word a b a^-1 b^-1 prints as
"abAB".  Shortlex order is induced by a < A < b < B < ...

Free groups use free reduction as the normal form.  Surface groups (genus g,
single relator [a1,b1]...[ag,bg]) use Dehn reduction, replacing any subword
longer than half the cyclic relator by its shorter complement, followed by a
closure over the length-preserving half-relator replacements from which the
shortlex-least representative is taken.  At the desk radii used here this
yields unique canonical forms (checked in the tests against a pairwise
word-problem oracle).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    ConstructionFailure,
    DimensionMismatch,
    InvalidParams,
    ResourceLimit,
    UnknownLetter,
)
from .linalg import ScaledMatrix

BALL_GUARD = 1_000_000

_SURFACE_RELATOR_TOL = 1e-6


def letter_str(letter: int) -> str:
    idx = abs(letter) - 1
    if not 0 <= idx < 26:
        raise UnknownLetter(f"letter {letter} outside a-z range")
    ch = chr(ord("a") + idx)
    return ch if letter > 0 else ch.upper()


def word_str(letters: Sequence[int]) -> str:
    return "".join(letter_str(l) for l in letters) or "<id>"


def parse_word(text: str) -> tuple[int, ...]:
    """Inverse of :func:`word_str`; accepts "<id>" or "" for the identity."""
    if text in ("", "<id>"):
        return ()
    out = []
    for ch in text:
        if not ch.isalpha():
            raise UnknownLetter(f"bad character {ch!r} in word {text!r}")
        idx = ord(ch.lower()) - ord("a") + 1
        out.append(idx if ch.islower() else -idx)
    return tuple(out)


def _letter_key(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def shortlex_key(letters: Sequence[int]) -> tuple:
    return (len(letters), tuple(_letter_key(l) for l in letters))


@dataclass(frozen=True)
class Presentation:
    """Free group of given rank, or closed-surface group of given genus."""

    family: str  # "free" | "surface"
    n: int

    def __post_init__(self) -> None:
        if self.family not in ("free", "surface"):
            raise InvalidParams(f"unknown presentation family {self.family!r}")
        if self.family == "free" and self.n < 1:
            raise InvalidParams("free rank must be at least 1")
        if self.family == "surface" and self.n < 2:
            raise InvalidParams("surface genus must be at least 2")
        if self.n_generators > 26:
            raise InvalidParams("alphabet limited to 26 generators")

    @classmethod
    def free(cls, rank: int) -> "Presentation":
        return cls("free", rank)

    @classmethod
    def surface(cls, genus: int) -> "Presentation":
        return cls("surface", genus)

    @property
    def n_generators(self) -> int:
        return self.n if self.family == "free" else 2 * self.n

    @property
    def relator(self) -> tuple[int, ...]:
        if self.family == "free":
            return ()
        out: list[int] = []
        for p in range(self.n):
            a, b = 2 * p + 1, 2 * p + 2
            out += [a, b, -a, -b]
        return tuple(out)

    def letters(self) -> tuple[int, ...]:
        gens = range(1, self.n_generators + 1)
        return tuple(l for g in gens for l in (g, -g))

    def check_letters(self, letters: Iterable[int]) -> tuple[int, ...]:
        seq = tuple(letters)
        for l in seq:
            if not isinstance(l, (int, np.integer)) or l == 0 or abs(l) > self.n_generators:
                raise UnknownLetter(f"letter {l} not in alphabet of {self}")
        return tuple(int(l) for l in seq)

    def describe(self) -> str:
        kind = "free rank" if self.family == "free" else "surface genus"
        return f"{kind} {self.n}"


@dataclass(frozen=True)
class Word:
    """A reduced word; ``canonical`` marks the shortlex-minimal representative."""

    letters: tuple[int, ...]
    canonical: bool = False

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return word_str(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)), canonical=False)


def _free_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for l in letters:
        if stack and stack[-1] == -l:
            stack.pop()
        else:
            stack.append(l)
    return tuple(stack)


def _inverse(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-l for l in reversed(letters))


@lru_cache(maxsize=None)
def _dehn_tables(family: str, n: int):
    """(over-half replacements, exactly-half replacements) for the relator.

    Keys are subwords of rotations of the relator and its inverse; values are
    the freely-equal shorter (or equal-length) complements.
    """
    p = Presentation(family, n)
    r = p.relator
    if not r:
        return (), {}
    length = len(r)
    half = length // 2
    rotations = []
    for base in (r, _inverse(r)):
        for s in range(length):
            rotations.append(base[s:] + base[:s])
    over: dict[tuple[int, ...], tuple[int, ...]] = {}
    halves: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for rho in rotations:
        for m in range(half + 1, length + 1):
            over.setdefault(rho[:m], _inverse(rho[m:]))
        u, v = rho[:half], _inverse(rho[half:])
        if u != v:
            halves.setdefault(u, [])
            if v not in halves[u]:
                halves[u].append(v)
    # longest patterns first so one left-to-right scan takes the biggest bite
    over_sorted = tuple(sorted(over.items(), key=lambda kv: -len(kv[0])))
    return over_sorted, halves


def _dehn_reduce(letters: tuple[int, ...], over) -> tuple[int, ...]:
    w = _free_reduce(letters)
    changed = True
    while changed:
        changed = False
        for pattern, repl in over:
            m = len(pattern)
            if m > len(w):
                continue
            for i in range(len(w) - m + 1):
                if w[i : i + m] == pattern:
                    w = _free_reduce(w[:i] + repl + w[i + m :])
                    changed = True
                    break
            if changed:
                break
    return w


def _surface_canonical(letters: tuple[int, ...], family: str, n: int) -> tuple[int, ...]:
    over, halves = _dehn_tables(family, n)
    w = _dehn_reduce(letters, over)
    half = len(Presentation(family, n).relator) // 2
    while True:
        # close under length-preserving half-relator replacements
        seen = {w}
        frontier = [w]
        shorter = None
        while frontier:
            cur = frontier.pop()
            for i in range(len(cur) - half + 1):
                repls = halves.get(cur[i : i + half])
                if not repls:
                    continue
                for repl in repls:
                    cand = _free_reduce(cur[:i] + repl + cur[i + half :])
                    if len(cand) < len(cur):
                        shorter = cand
                        break
                    if cand not in seen:
                        seen.add(cand)
                        frontier.append(cand)
                if shorter:
                    break
            if shorter:
                break
        if shorter is None:
            return min(seen, key=shortlex_key)
        w = _dehn_reduce(shorter, over)


def reduce_word(letters: Iterable[int] | Word, p: Presentation) -> Word:
    """Canonical form: free reduction, plus Dehn reduction for surface groups.

    Idempotent and length-nonincreasing; the result is the shortlex-least
    geodesic spelling of the group element.
    """
    if isinstance(letters, Word):
        letters = letters.letters
    seq = p.check_letters(letters)
    if p.family == "free":
        return Word(_free_reduce(seq), canonical=True)
    return Word(_surface_canonical(seq, p.family, p.n), canonical=True)


@dataclass(frozen=True)
class Ball:
    """All canonical words up to a radius, grouped by length."""

    presentation: Presentation
    radius: int
    spheres: tuple[tuple[Word, ...], ...]

    def words(self) -> Iterator[Word]:
        for sphere in self.spheres:
            yield from sphere

    def sphere_sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.spheres)

    def __len__(self) -> int:
        return sum(len(s) for s in self.spheres)


def enumerate_ball(p: Presentation, radius: int, guard: int = BALL_GUARD) -> Ball:
    """Breadth-first enumeration of canonical words of length <= radius.

    Extensions of canonical words are re-canonicalized and deduplicated, so
    the ball is complete and duplicate-free as a set of group elements.
    """
    if radius < 0:
        raise InvalidParams("radius must be nonnegative")
    spheres: list[tuple[Word, ...]] = [(Word((), canonical=True),)]
    seen: set[tuple[int, ...]] = {()}
    total = 1
    for target in range(1, radius + 1):
        new: list[tuple[int, ...]] = []
        for w in spheres[target - 1]:
            for l in p.letters():
                if w.letters and w.letters[-1] == -l:
                    continue
                cand = reduce_word(w.letters + (l,), p)
                if len(cand.letters) != target or cand.letters in seen:
                    continue
                seen.add(cand.letters)
                new.append(cand.letters)
                total += 1
                if total > guard:
                    raise ResourceLimit(f"ball size exceeds guard {guard}")
        new.sort(key=shortlex_key)
        spheres.append(tuple(Word(l, canonical=True) for l in new))
    return Ball(presentation=p, radius=radius, spheres=tuple(spheres))


@dataclass(frozen=True)
class Representation:
    """Generator images (with precomputed inverses) over a presentation."""

    presentation: Presentation
    images: tuple[ScaledMatrix, ...]
    inverse_images: tuple[ScaledMatrix, ...]
    relator_defect: float

    @classmethod
    def from_generators(
        cls, presentation: Presentation, matrices: Sequence[ScaledMatrix | np.ndarray]
    ) -> "Representation":
        if len(matrices) != presentation.n_generators:
            raise DimensionMismatch(
                f"{presentation.describe()} needs {presentation.n_generators} images, "
                f"got {len(matrices)}"
            )
        images = tuple(
            m if isinstance(m, ScaledMatrix) else ScaledMatrix.from_array(m)
            for m in matrices
        )
        dims = {m.dim for m in images}
        if len(dims) != 1:
            raise DimensionMismatch(f"generator images of mixed dimensions {dims}")
        inverses = tuple(m.inverse() for m in images)
        rep = cls(
            presentation=presentation,
            images=images,
            inverse_images=inverses,
            relator_defect=0.0,
        )
        if presentation.family == "surface":
            defect = evaluate(rep, presentation.relator).distance_to_identity()
            if defect >= _SURFACE_RELATOR_TOL:
                raise ConstructionFailure(
                    f"relator defect {defect:.3e} exceeds {_SURFACE_RELATOR_TOL:.0e}"
                )
            rep = cls(
                presentation=presentation,
                images=images,
                inverse_images=inverses,
                relator_defect=defect,
            )
        return rep

    @property
    def dim(self) -> int:
        return self.images[0].dim

    def image(self, letter: int) -> ScaledMatrix:
        if letter > 0 and letter <= len(self.images):
            return self.images[letter - 1]
        if letter < 0 and -letter <= len(self.images):
            return self.inverse_images[-letter - 1]
        raise UnknownLetter(f"letter {letter} not in alphabet")

    def to_json_dict(self) -> dict:
        return {
            "presentation": {"family": self.presentation.family, "n": self.presentation.n},
            "dimension": self.dim,
            "generators": [
                {"entries": m.entries.tolist(), "log_scale": m.log_scale}
                for m in self.images
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Representation":
        pres = Presentation(data["presentation"]["family"], int(data["presentation"]["n"]))
        mats = []
        for gen in data["generators"]:
            entries = np.array(gen["entries"], dtype=float)
            if entries.shape != (data["dimension"], data["dimension"]):
                raise DimensionMismatch("generator block has wrong shape")
            mats.append(ScaledMatrix.from_array(entries, float(gen["log_scale"])))
        return cls.from_generators(pres, mats)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Representation":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def evaluate(
    rep: Representation,
    word: Word | Sequence[int],
    cache: dict[tuple[int, ...], ScaledMatrix] | None = None,
) -> ScaledMatrix:
    """Product of generator images along a reduced word.

    With a caller-supplied ``cache`` dict, prefixes are memoized so that
    evaluating a whole ball costs one matrix multiply per word.
    """
    letters = word.letters if isinstance(word, Word) else rep.presentation.check_letters(word)
    if cache is None:
        m = ScaledMatrix.identity(rep.dim)
        for l in letters:
            m = m @ rep.image(l)
        return m
    missing: list[tuple[int, ...]] = []
    seq = letters
    while seq not in cache:
        missing.append(seq)
        if not seq:
            cache[()] = ScaledMatrix.identity(rep.dim)
            break
        seq = seq[:-1]
    for seq in reversed(missing):
        if seq:
            cache[seq] = cache[seq[:-1]] @ rep.image(seq[-1])
    return cache[letters]


def cyclic_reduce(letters: tuple[int, ...]) -> tuple[int, ...]:
    w = _free_reduce(letters)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def conjugacy_key(letters: tuple[int, ...]) -> tuple[int, ...]:
    """Shortlex-least rotation of the cyclic reduction of the word or its inverse.

    This identifies words equal up to cyclic rotation and inversion (axis
    identity), which is deduplication at the level of cyclic words only.
    """
    w = cyclic_reduce(letters)
    if not w:
        return ()
    candidates = []
    for base in (w, _inverse(w)):
        for s in range(len(base)):
            candidates.append(base[s:] + base[:s])
    return min(candidates, key=shortlex_key)


def is_primitive_cyclic(letters: tuple[int, ...]) -> bool:
    """Whether the cyclic reduction is not a proper power, at the letter level."""
    w = cyclic_reduce(letters)
    n = len(w)
    if n == 0:
        return False
    for period in range(1, n):
        if n % period == 0 and w == w[period:] + w[:period]:
            return False
    return True


def words_equal(u: Sequence[int], v: Sequence[int], p: Presentation) -> bool:
    """Word-problem oracle: u == v iff u v^-1 reduces to the empty word."""
    seq = tuple(u) + _inverse(tuple(v))
    return len(reduce_word(seq, p).letters) == 0
