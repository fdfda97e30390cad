"""Free-group words over a named alphabet, and endomorphisms acting on them.

Letters are stored Tietze-style: generator ``i`` (0-based) is the integer
``i + 1`` and its inverse is ``-(i + 1)``.  Words are kept freely reduced.
"""
from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence


class GenAlphabet:
    """An ordered, immutable list of generator names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for n in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", n) or n == "e":
                raise ValueError(f"bad generator name {n!r}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, GenAlphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"GenAlphabet({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> "Word":
        return Word(self, (self.index(name) + 1,))

    def gens(self) -> list["Word"]:
        return [Word(self, (i + 1,)) for i in range(len(self.names))]

    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, text: str) -> "Word":
        return parse_word(self, text)


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence with a single stack pass."""
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


class Word:
    """A freely reduced word.  Construct via :class:`GenAlphabet` helpers."""

    __slots__ = ("alphabet", "letters", "_hash")

    def __init__(self, alphabet: GenAlphabet, letters: Iterable[int], reduced: bool = False):
        letters = tuple(letters) if reduced else reduce_letters(letters)
        n = len(alphabet)
        for x in letters:
            if x == 0 or abs(x) > n:
                raise ValueError(f"letter {x} out of range for alphabet of size {n}")
        self.alphabet = alphabet
        self.letters = letters
        self._hash = None

    def _check(self, other: "Word") -> None:
        if self.alphabet != other.alphabet:
            raise ValueError("words over different alphabets")

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, self.letters))
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.alphabet, invert_letters(self.letters), reduced=True)

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(self.alphabet, base.letters * abs(n))

    def is_identity(self) -> bool:
        return not self.letters

    def conjugate(self, by: "Word") -> "Word":
        """Return ``by * self * by^-1``."""
        return by * self * by.inverse()

    def exponent_sums(self) -> list[int]:
        sums = [0] * len(self.alphabet)
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return sums

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``, reduced."""
    u._check(v)
    return Word(u.alphabet, u.letters + v.letters + invert_letters(u.letters) + invert_letters(v.letters))


_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?")


def parse_word(alphabet: GenAlphabet, text: str) -> Word:
    """Parse ``"a1 b1^-1 c a2^3"``; ``e`` (or an empty string) is the identity."""
    letters: list[int] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at position {pos}: {text[pos:]!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if name != "e":
            g = alphabet.index(name) + 1
            letters.extend([g if exp > 0 else -g] * abs(exp))
        pos = m.end()
    return Word(alphabet, letters)


def format_word(w: Word) -> str:
    """Inverse of :func:`parse_word`, grouping runs into powers."""
    if not w.letters:
        return "e"
    parts = []
    names = w.alphabet.names
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        x, n = letters[i], j - i
        e = n if x > 0 else -n
        parts.append(names[abs(x) - 1] + ("" if e == 1 else f"^{e}"))
        i = j
    return " ".join(parts)


class Hom:
    """A homomorphism between free groups, given by generator images."""

    __slots__ = ("source", "target", "images", "_inv_images")

    def __init__(self, source: GenAlphabet, target: GenAlphabet, images: Sequence[Word]):
        if len(images) != len(source):
            raise ValueError("need one image per generator")
        for w in images:
            if w.alphabet != target:
                raise ValueError("image word over the wrong alphabet")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self._inv_images = tuple(invert_letters(w.letters) for w in self.images)

    def __call__(self, w: Word) -> Word:
        return self.apply(w)

    def apply(self, w: Word) -> Word:
        if w.alphabet != self.source:
            raise ValueError("word over a different alphabet")
        out: list[int] = []
        fwd = [w_.letters for w_ in self.images]
        inv = self._inv_images
        for x in w.letters:
            chunk = fwd[x - 1] if x > 0 else inv[-x - 1]
            for y in chunk:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return Word(self.target, out, reduced=True)

    def image(self, name: str) -> Word:
        return self.images[self.source.index(name)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.images))

    def __repr__(self) -> str:
        body = ", ".join(f"{n} -> {format_word(img)}" for n, img in zip(self.source.names, self.images))
        return f"{type(self).__name__}({body})"


class Endo(Hom):
    """An endomorphism of the free group on ``alphabet``."""

    __slots__ = ()

    def __init__(self, alphabet: GenAlphabet, images: Sequence[Word]):
        super().__init__(alphabet, alphabet, images)

    @property
    def alphabet(self) -> GenAlphabet:
        return self.source

    @classmethod
    def identity(cls, alphabet: GenAlphabet) -> "Endo":
        return cls(alphabet, alphabet.gens())

    @classmethod
    def from_dict(cls, alphabet: GenAlphabet, moves: dict[str, "Word | str"]) -> "Endo":
        """Identity except on the generators named in ``moves``."""
        images = alphabet.gens()
        for name, img in moves.items():
            images[alphabet.index(name)] = alphabet.word(img) if isinstance(img, str) else img
        return cls(alphabet, images)

    def __mul__(self, other: "Endo") -> "Endo":
        return compose(self, other)

    def __pow__(self, n: int) -> "Endo":
        if n < 0:
            raise ValueError("negative powers need an explicit inverse")
        result = Endo.identity(self.alphabet)
        for _ in range(n):
            result = compose(result, self)
        return result

    def is_identity(self) -> bool:
        return all(img.letters == (i + 1,) for i, img in enumerate(self.images))

    def __repr__(self) -> str:
        moved = [
            f"{n} -> {format_word(img)}"
            for i, (n, img) in enumerate(zip(self.alphabet.names, self.images))
            if img.letters != (i + 1,)
        ]
        return "Endo(" + (", ".join(moved) or "id") + ")"


def apply_endo(phi: Hom, w: Word) -> Word:
    """Substitute generator images into ``w`` with streaming free reduction."""
    return phi.apply(w)


def compose(phi: Endo, psi: Endo) -> Endo:
    """``(phi o psi)(x) = phi(psi(x))``."""
    if phi.alphabet != psi.alphabet:
        raise ValueError("endomorphisms over different alphabets")
    return Endo(phi.alphabet, [phi.apply(img) for img in psi.images])


def inner(w: Word) -> Endo:
    """The inner automorphism ``x -> w x w^-1``."""
    return Endo(w.alphabet, [x.conjugate(w) for x in w.alphabet.gens()])


def invert_free_auto(phi: Endo, moved: Optional[Sequence[int]] = None) -> Optional[Endo]:
    """Inverse of a free-group automorphism by Nielsen reduction, or None.

    Only the generators in ``moved`` (0-based; default: those whose image is
    not the generator itself) take part; the rest must be fixed by ``phi``.
    The images are shortened by elementary Nielsen moves while recording each
    one as a word in the images; if they end up as the generators (up to
    inversion and order) the recorded words give the inverse.
    """
    alph = phi.alphabet
    if moved is None:
        moved = [i for i, img in enumerate(phi.images) if img.letters != (i + 1,)]
    moved = list(moved)
    # record expressions as letter tuples over the full alphabet, letter i+1 = phi(x_i)
    cur = [list(phi.images[i].letters) for i in moved]
    expr = [(i + 1,) for i in moved]
    changed = True
    while changed:
        changed = False
        for a in range(len(cur)):
            for b in range(len(cur)):
                if a == b:
                    continue
                for sa in (1, -1):
                    for sb in (1, -1):
                        u = cur[a] if sa > 0 else list(invert_letters(cur[a]))
                        v = cur[b] if sb > 0 else list(invert_letters(cur[b]))
                        eu = expr[a] if sa > 0 else invert_letters(expr[a])
                        ev = expr[b] if sb > 0 else invert_letters(expr[b])
                        for new, ne in ((reduce_letters(v + u), ev + eu), (reduce_letters(u + v), eu + ev)):
                            if len(new) < len(cur[a]):
                                cur[a] = list(new)
                                expr[a] = reduce_letters(ne)
                                changed = True
                                break
                        if changed:
                            break
                    if changed:
                        break
                if changed:
                    break
            if changed:
                break
    targets = {i + 1 for i in moved}
    images = alph.gens()
    for word, e in zip(cur, expr):
        if len(word) != 1 or abs(word[0]) not in targets:
            return None
        x = word[0]
        w = Word(alph, e, reduced=True)
        images[abs(x) - 1] = w if x > 0 else w.inverse()
    inv = Endo(alph, images)
    if not compose(phi, inv).is_identity() or not compose(inv, phi).is_identity():
        return None
    return inv
