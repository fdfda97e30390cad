"""The fundamental group of the non-orientable surface N_{2r+1}.

pi = < a1, b1, ..., ar, br, c | [a1,b1]...[ar,br] = c^2 >, homomorphisms
v : pi -> Z/h x Z/k given by exponent tables, the word problem in pi, and the
map induced by the orientation double cover Sigma_{2r} -> N_{2r+1}.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .words import Endo, GenAlphabet, Hom, Word, commutator, invert_letters, reduce_letters


class SurfacePresentation:
    """One-relator presentation of pi_1(N_{2r+1}); requires r >= 2."""

    def __init__(self, r: int):
        if r < 2:
            raise ValueError("need r >= 2")
        self.r = r
        self.g = 2 * r
        names = []
        for i in range(1, r + 1):
            names += [f"a{i}", f"b{i}"]
        names.append("c")
        self.alphabet = GenAlphabet(names)
        self.relator = relator(r, self.alphabet)
        self._dehn = DehnReducer(self.relator.letters)

    def __repr__(self) -> str:
        return f"SurfacePresentation(r={self.r})"

    def word(self, text: str) -> Word:
        return self.alphabet.word(text)

    def gen(self, name: str) -> Word:
        return self.alphabet.gen(name)

    def __eq__(self, other) -> bool:
        return isinstance(other, SurfacePresentation) and other.r == self.r

    def __hash__(self) -> int:
        return hash(("pi", self.r))

    def is_identity(self, w: Word, depth: int = 6, budget: int = 20000) -> "IdentityCertificate":
        return is_identity(self, w, depth=depth, budget=budget)


def relator(r: int, alphabet: Optional[GenAlphabet] = None) -> Word:
    """``[a1,b1]...[ar,br] c^-2``."""
    if r < 2:
        raise ValueError("need r >= 2")
    if alphabet is None:
        alphabet = SurfacePresentation(r).alphabet
    w = alphabet.identity()
    for i in range(1, r + 1):
        w = w * commutator(alphabet.gen(f"a{i}"), alphabet.gen(f"b{i}"))
    return w * alphabet.gen("c") ** -2


# ---------------------------------------------------------------------------
# Homomorphisms to Z/h x Z/k


@dataclass(frozen=True)
class CoverSpec:
    """v : pi -> Z/h x Z/k, stored as an exponent table."""

    pres: SurfacePresentation
    h: int
    k: int
    table: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.h < 1 or self.k < 1:
            raise ValueError("cyclic orders must be positive")
        if len(self.table) != len(self.pres.alphabet):
            raise ValueError("exponent table needs one entry per generator")
        object.__setattr__(
            self, "table", tuple((x % self.h, y % self.k) for x, y in self.table)
        )
        if self.v_image(self.pres.relator) != (0, 0):
            raise ValueError("v does not kill the surface relator")
        if len(self._reachable()) != self.h * self.k:
            raise ValueError("v is not surjective")

    @classmethod
    def default(cls, pres: SurfacePresentation, h: int, k: int) -> "CoverSpec":
        """a1 -> (1,0), b1 -> (0,1), everything else trivial."""
        table = [(0, 0)] * len(pres.alphabet)
        table[pres.alphabet.index("a1")] = (1, 0)
        table[pres.alphabet.index("b1")] = (0, 1)
        return cls(pres, h, k, tuple(table))

    @classmethod
    def from_text(cls, pres: SurfacePresentation, h: int, k: int, text: str) -> "CoverSpec":
        """Parse ``"a1=(1,0),b1=(0,1)"``; unlisted generators map to (0, 0)."""
        table = [(0, 0)] * len(pres.alphabet)
        for m in re.finditer(r"(\w+)\s*=\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text):
            table[pres.alphabet.index(m.group(1))] = (int(m.group(2)), int(m.group(3)))
        return cls(pres, h, k, tuple(table))

    @property
    def order(self) -> int:
        return self.h * self.k

    def elements(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.h) for y in range(self.k)]

    def add(self, p, q):
        return ((p[0] + q[0]) % self.h, (p[1] + q[1]) % self.k)

    def v_image(self, w: Word) -> tuple[int, int]:
        x = y = 0
        for letter in w.letters:
            tx, ty = self.table[abs(letter) - 1]
            if letter > 0:
                x += tx
                y += ty
            else:
                x -= tx
                y -= ty
        return (x % self.h, y % self.k)

    def in_kernel(self, w: Word) -> bool:
        return self.v_image(w) == (0, 0)

    def _reachable(self) -> dict[tuple[int, int], Word]:
        """A word for every element of v(pi), found breadth first."""
        alph = self.pres.alphabet
        found = {(0, 0): alph.identity()}
        frontier = [(0, 0)]
        steps = [(alph.gens()[i], self.table[i]) for i in range(len(alph))]
        while frontier:
            nxt = []
            for p in frontier:
                for gen, t in steps:
                    q = self.add(p, t)
                    if q not in found:
                        found[q] = found[p] * gen
                        nxt.append(q)
            frontier = nxt
        return found

    @cached_property
    def section(self) -> dict[tuple[int, int], Word]:
        return self._reachable()


def v_image(spec: CoverSpec, w: Word) -> tuple[int, int]:
    return spec.v_image(w)


def in_kernel(spec: CoverSpec, w: Word) -> bool:
    return spec.in_kernel(w)


def orientation_character(pres: SurfacePresentation) -> CoverSpec:
    """c -> 1 mod 2, all a_i, b_i -> 0; the kernel is pi_1 of the orientation cover."""
    table = [(0, 0)] * len(pres.alphabet)
    table[pres.alphabet.index("c")] = (1, 0)
    return CoverSpec(pres, 2, 1, tuple(table))


@dataclass(frozen=True)
class GroupAuto:
    """An endomorphism chi of Z/h x Z/k given by the images of (1,0) and (0,1)."""

    h: int
    k: int
    e1: tuple[int, int]
    e2: tuple[int, int]

    def __call__(self, p: tuple[int, int]) -> tuple[int, int]:
        x, y = p
        return (
            (x * self.e1[0] + y * self.e2[0]) % self.h,
            (x * self.e1[1] + y * self.e2[1]) % self.k,
        )

    def is_identity(self) -> bool:
        return self.e1 == (1 % self.h, 0) and self.e2 == (0, 1 % self.k)

    def is_bijective(self) -> bool:
        pts = {self((x, y)) for x in range(self.h) for y in range(self.k)}
        return len(pts) == self.h * self.k

    def inverse(self) -> "GroupAuto":
        table = {self((x, y)): (x, y) for x in range(self.h) for y in range(self.k)}
        return GroupAuto(self.h, self.k, table[(1 % self.h, 0)], table[(0, 1 % self.k)])

    def compose(self, other: "GroupAuto") -> "GroupAuto":
        """``self o other``."""
        return GroupAuto(self.h, self.k, self(other.e1), self(other.e2))


def preserves_U(spec: CoverSpec, phi: Endo) -> Optional[GroupAuto]:
    """The automorphism chi with chi o v = v o phi, or None if there is none."""
    h, k = spec.h, spec.k
    vphi = [spec.v_image(img) for img in phi.images]

    def vphi_word(w: Word):
        x = y = 0
        for letter in w.letters:
            tx, ty = vphi[abs(letter) - 1]
            s = 1 if letter > 0 else -1
            x += s * tx
            y += s * ty
        return (x % h, y % k)

    chi = GroupAuto(h, k, vphi_word(spec.section[(1 % h, 0)]), vphi_word(spec.section[(0, 1 % k)]))
    if chi((h, 0)) != (0, 0) or chi((0, k)) != (0, 0):
        return None
    # well defined on G: h*e1 and k*e2 must vanish
    if ((h * chi.e1[0]) % h, (h * chi.e1[1]) % k) != (0, 0):
        return None
    if ((k * chi.e2[0]) % h, (k * chi.e2[1]) % k) != (0, 0):
        return None
    for i in range(len(spec.table)):
        if chi(spec.table[i]) != vphi[i]:
            return None
    if not chi.is_bijective():
        return None
    return chi


def in_gamma(spec: CoverSpec, phi: Endo) -> bool:
    """Membership in Gamma(v), i.e. v o phi = v."""
    return all(spec.v_image(img) == t for img, t in zip(phi.images, spec.table))


# ---------------------------------------------------------------------------
# Word problem


class DehnReducer:
    """Dehn's algorithm for a single cyclically reduced relator.

    A subword longer than half of a cyclic conjugate of the relator (or its
    inverse) is replaced by the inverse of the complementary piece.  Rewriting
    is stack based, so each window is examined once, when its last letter is
    pushed.
    """

    def __init__(self, rel: tuple[int, ...]):
        self.rel = rel
        n = len(rel)
        self.length = n
        self.window = n // 2 + 1
        self.table: dict[tuple[int, ...], tuple[int, ...]] = {}
        for r in (rel, invert_letters(rel)):
            for s in range(n):
                rot = r[s:] + r[:s]
                u, v = rot[: self.window], rot[self.window:]
                self.table.setdefault(u, invert_letters(v))
        self.max_piece = self._max_piece()

    def _max_piece(self) -> int:
        # longest common prefix of two distinct cyclic conjugates of rel^{+-1}
        n = len(self.rel)
        rots = set()
        for r in (self.rel, invert_letters(self.rel)):
            for s in range(n):
                rots.add(r[s:] + r[:s])
        rots = sorted(rots)
        best = 0
        for a, b in zip(rots, rots[1:]):
            i = 0
            while i < n and a[i] == b[i]:
                i += 1
            best = max(best, i)
        return best

    @property
    def small_cancellation(self) -> bool:
        """C'(1/6): every piece is shorter than a sixth of the relator."""
        return 6 * self.max_piece < self.length

    def reduce(self, letters, trace: Optional[list] = None) -> tuple[int, ...]:
        stack: list[int] = []
        pending = list(reversed(letters))
        w = self.window
        table = self.table
        while pending:
            x = pending.pop()
            if stack and stack[-1] == -x:
                if trace is not None:
                    trace.append(("free", len(stack) - 1, (stack[-1], x), ()))
                stack.pop()
                continue
            stack.append(x)
            if len(stack) >= w:
                key = tuple(stack[-w:])
                repl = table.get(key)
                if repl is not None:
                    if trace is not None:
                        trace.append(("dehn", len(stack) - w, key, repl))
                    del stack[-w:]
                    pending.extend(reversed(repl))
        return tuple(stack)


@dataclass
class IdentityCertificate:
    """Outcome of deciding ``w = 1`` in pi."""

    status: str  # "proven-identity" | "proven-nonidentity" | "inconclusive"
    trace: list = field(default_factory=list)
    invariant: Optional[str] = None

    @property
    def proven(self) -> bool:
        return self.status == "proven-identity"

    def __bool__(self) -> bool:
        return self.proven


def replay_trace(pres: SurfacePresentation, w: Word, trace: list) -> bool:
    """Check that the rewriting steps of a certificate take ``w`` to the empty word.

    Positions in a trace index the word as it stands when the step is taken;
    unread input sits to the right of the rewritten prefix.
    """
    rel = pres.relator.letters
    n = len(rel)
    conj = set()
    for r in (rel, invert_letters(rel)):
        for s in range(n):
            conj.add(r[s:] + r[:s])
    cur = list(w.letters)
    for step in trace:
        kind, pos = step[0], step[1]
        removed, inserted = tuple(step[2]), tuple(step[3])
        if kind == "insert":
            if reduce_letters(inserted) and tuple(inserted) not in conj:
                return False
            cur[pos:pos] = list(inserted)
            continue
        if tuple(cur[pos:pos + len(removed)]) != removed:
            return False
        if kind == "free":
            if len(removed) != 2 or removed[0] != -removed[1] or inserted:
                return False
        elif kind == "dehn":
            if removed + invert_letters(inserted) not in conj:
                return False
        else:
            return False
        cur[pos:pos + len(removed)] = list(inserted)
    return not reduce_letters(cur)


def _invariants(pres: SurfacePresentation, w: Word) -> Optional[str]:
    """A homomorphic invariant separating ``w`` from 1, if one is found."""
    sums = w.exponent_sums()
    names = pres.alphabet.names
    # H_1(pi; Z) = Z^{2r} + Z/2, the Z/2 generated by c
    for name, e in zip(names[:-1], sums[:-1]):
        if e:
            return f"abelianization: exponent sum of {name} is {e}"
    if sums[-1] % 2:
        return f"abelianization: exponent sum of c is odd ({sums[-1]})"
    return None


def is_identity(pres: SurfacePresentation, w: Word, depth: int = 6, budget: int = 20000) -> IdentityCertificate:
    """Decide ``w = 1`` in pi.

    Dehn reduction first; then homomorphic invariants; then a bounded search
    inserting cyclic conjugates of the relator before reducing again.  Since
    the relator satisfies C'(1/6) the first stage already decides every
    identity, but the later stages keep the verdict honest for any relator.
    """
    if w.alphabet != pres.alphabet:
        raise ValueError("word not over the presentation alphabet")
    dehn = pres._dehn
    trace: list = []
    rest = dehn.reduce(w.letters, trace)
    if not rest:
        return IdentityCertificate("proven-identity", trace)
    inv = _invariants(pres, w)
    if inv is not None:
        return IdentityCertificate("proven-nonidentity", [], inv)
    found = _insertion_search(dehn, rest, depth, budget)
    if found is not None:
        full = trace + found
        return IdentityCertificate("proven-identity", full)
    return IdentityCertificate(
        "inconclusive",
        [("stuck", 0, rest, ())],
        "Dehn-irreducible; small cancellation holds" if dehn.small_cancellation else None,
    )


def _insertion_search(dehn: DehnReducer, start: tuple[int, ...], depth: int, budget: int):
    rel = dehn.rel
    n = len(rel)
    conj = []
    for r in (rel, invert_letters(rel)):
        for s in range(n):
            conj.append(r[s:] + r[:s])
    seen = {start}
    frontier = [(start, [])]
    used = 0
    for _ in range(depth):
        nxt = []
        for cur, path in frontier:
            for pos in range(len(cur) + 1):
                for c in conj:
                    used += 1
                    if used > budget:
                        return None
                    cand = cur[:pos] + c + cur[pos:]
                    sub: list = []
                    out = dehn.reduce(cand, sub)
                    steps = path + [("insert", pos, (), c)] + sub
                    if not out:
                        return steps
                    if out not in seen and len(out) <= len(start) + n:
                        seen.add(out)
                        nxt.append((out, steps))
        frontier = nxt
    return None


def validate_endo(pres: SurfacePresentation, phi: Endo, **kw) -> IdentityCertificate:
    """Certificate that ``phi(relator) = 1``, i.e. that phi descends to pi."""
    return is_identity(pres, phi.apply(pres.relator), **kw)


def inner(pres: SurfacePresentation, w: Word) -> Endo:
    return Endo(pres.alphabet, [x.conjugate(w) for x in pres.alphabet.gens()])


# ---------------------------------------------------------------------------
# The orientation cover


def sigma_alphabet(g: int) -> GenAlphabet:
    names = []
    for i in range(1, g + 1):
        names += [f"a{i}", f"b{i}"]
    return GenAlphabet(names)


def sigma_relator(g: int) -> Word:
    alph = sigma_alphabet(g)
    w = alph.identity()
    for i in range(1, g + 1):
        w = w * commutator(alph.gen(f"a{i}"), alph.gen(f"b{i}"))
    return w


def p_star(pres: SurfacePresentation, name: str) -> Word:
    """Image in pi of a standard generator of pi_1(Sigma_{2r}) under the cover."""
    r = pres.r
    m = re.fullmatch(r"([ab])(\d+)", name)
    if not m or not 1 <= int(m.group(2)) <= 2 * r:
        raise ValueError(f"no generator {name!r} in pi_1 of the genus {2 * r} surface")
    kind, j = m.group(1), int(m.group(2))
    W = pres.word
    if j <= r:
        return W(f"{kind}{j}")
    i = 2 * r + 1 - j
    if kind == "a":
        conj = W("c " + " ".join(f"b{t}" for t in range(r, i, -1)))
        mid = pres.alphabet.identity()
        for t in range(i + 1, r + 1):
            mid = mid * commutator(W(f"a{t}"), W(f"b{t}"))
        mid = mid * W(f"c^-2 b{i} a{i}^-1 b{i}^-1")
        return mid.conjugate(conj)
    conj = W("c " + " ".join(f"b{t}" for t in range(r, i - 1, -1)) + f" a{i}")
    return W(f"b{i}").conjugate(conj)


def p_star_hom(pres: SurfacePresentation) -> Hom:
    src = sigma_alphabet(pres.g)
    return Hom(src, pres.alphabet, [p_star(pres, n) for n in src.names])
