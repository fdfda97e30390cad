"""Named automorphisms of pi: the generators R_i, S_i, T_i, Y, the derived
elements V = T_1^k and W = P Y P^-1, inner automorphisms, and words in them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .surface import SurfacePresentation, inner as inner_endo
from .words import Endo, Word, compose, format_word, invert_free_auto


@dataclass(frozen=True)
class NamedAuto:
    name: str
    endo: Endo
    inverse: Endo

    def power(self, n: int) -> Endo:
        base = self.endo if n >= 0 else self.inverse
        out = Endo.identity(base.alphabet)
        for _ in range(abs(n)):
            out = compose(out, base)
        return out


def w_element(pres: SurfacePresentation, i: int) -> Word:
    """``w_i = b_i a_i^-1 b_i^-1 a_{i+1}``."""
    return pres.word(f"b{i} a{i}^-1 b{i}^-1 a{i + 1}")


def R(pres: SurfacePresentation, i: int) -> NamedAuto:
    W = pres.word
    return NamedAuto(
        f"R{i}",
        Endo.from_dict(pres.alphabet, {f"b{i}": W(f"b{i} a{i}")}),
        Endo.from_dict(pres.alphabet, {f"b{i}": W(f"b{i} a{i}^-1")}),
    )


def S(pres: SurfacePresentation, i: int) -> NamedAuto:
    W = pres.word
    return NamedAuto(
        f"S{i}",
        Endo.from_dict(pres.alphabet, {f"a{i}": W(f"a{i} b{i}^-1")}),
        Endo.from_dict(pres.alphabet, {f"a{i}": W(f"a{i} b{i}")}),
    )


def T(pres: SurfacePresentation, i: int) -> NamedAuto:
    # T_i fixes w_i, so the inverse swaps w_i and w_i^-1
    W = pres.word
    w = w_element(pres, i)
    wi = w.inverse()
    b, a1, b1 = W(f"b{i}"), W(f"a{i + 1}"), W(f"b{i + 1}")
    fwd = Endo.from_dict(pres.alphabet, {f"b{i}": wi * b, f"a{i + 1}": wi * a1 * w, f"b{i + 1}": b1 * w})
    bwd = Endo.from_dict(pres.alphabet, {f"b{i}": w * b, f"a{i + 1}": w * a1 * wi, f"b{i + 1}": b1 * wi})
    return NamedAuto(f"T{i}", fwd, bwd)


def Y(pres: SurfacePresentation) -> NamedAuto:
    r = pres.r
    sub = {"a": f"a{r}", "b": f"b{r}"}

    def W(text: str) -> Word:
        return pres.word(re.sub(r"\b([ab])\b", lambda m: sub[m.group(1)], text))

    fwd = Endo.from_dict(
        pres.alphabet,
        {
            f"a{r}": W("b^-1 c^-1 b a^-1 b^-1 c^-1 b"),
            f"b{r}": W("b^-1 c b a b a^-1 b^-1 c^-1 b"),
            "c": W("c^2 b a b^-1 a^-1 b^-1 c^-1 b"),
        },
    )
    bwd = invert_free_auto(fwd)
    assert bwd is not None
    return NamedAuto("Y", fwd, bwd)


class Catalog:
    """All named automorphisms for given (r, k); V and W are built lazily and cached."""

    def __init__(self, pres: SurfacePresentation, k: int):
        if k < 2:
            raise ValueError("need k >= 2")
        self.pres = pres
        self.r = pres.r
        self.k = k
        self._table: dict[str, NamedAuto] = {}
        for i in range(1, self.r + 1):
            self._table[f"R{i}"] = R(pres, i)
            self._table[f"S{i}"] = S(pres, i)
        for i in range(1, self.r):
            self._table[f"T{i}"] = T(pres, i)
        self._table["Y"] = Y(pres)

    def names(self) -> list[str]:
        return list(self._table) + ["V", "W"]

    @cached_property
    def V(self) -> NamedAuto:
        t = self._table["T1"]
        return NamedAuto("V", t.power(self.k), t.power(-self.k))

    @cached_property
    def conjugator(self) -> NamedAuto:
        """P = S_1 T_1 ... S_{r-1} T_{r-1}."""
        fwd = Endo.identity(self.pres.alphabet)
        bwd = Endo.identity(self.pres.alphabet)
        for i in range(1, self.r):
            for name in (f"S{i}", f"T{i}"):
                x = self._table[name]
                fwd = compose(fwd, x.endo)
                bwd = compose(x.inverse, bwd)
        return NamedAuto("P", fwd, bwd)

    @cached_property
    def W(self) -> NamedAuto:
        p, y = self.conjugator, self._table["Y"]
        return NamedAuto(
            "W",
            compose(p.endo, compose(y.endo, p.inverse)),
            compose(p.endo, compose(y.inverse, p.inverse)),
        )

    def __getitem__(self, name: str) -> NamedAuto:
        if name == "V":
            return self.V
        if name == "W":
            return self.W
        if name == "P":
            return self.conjugator
        m = re.fullmatch(r"inner\((.*)\)", name)
        if m:
            w = self.pres.word(m.group(1))
            return NamedAuto(f"inner({format_word(w)})", inner_endo(self.pres, w), inner_endo(self.pres, w.inverse()))
        try:
            return self._table[name]
        except KeyError:
            raise KeyError(f"no automorphism named {name!r} for r={self.r}") from None

    def __contains__(self, name: str) -> bool:
        try:
            self[name]
        except (KeyError, ValueError):
            return False
        return True

    def __iter__(self) -> Iterator[NamedAuto]:
        for name in self.names():
            yield self[name]

    def evaluate(self, word: "AutoWord", defs: Optional[dict[str, "AutoWord"]] = None) -> Endo:
        """Compose the factors left to right, using catalog inverses for negative powers.

        ``$name`` factors are looked up in ``defs`` and expanded recursively.
        """
        out = Endo.identity(self.pres.alphabet)
        memo: dict[str, NamedAuto] = {}
        for name, e in word.factors:
            out = compose(out, self._resolve(name, defs, memo).power(e))
        return out

    def _resolve(self, name: str, defs, memo) -> NamedAuto:
        if not name.startswith("$"):
            return self[name]
        if name not in memo:
            if not defs or name[1:] not in defs:
                raise KeyError(f"undefined reference {name}")
            body = defs[name[1:]]
            fwd = Endo.identity(self.pres.alphabet)
            for n2, e in body.factors:
                fwd = compose(fwd, self._resolve(n2, defs, memo).power(e))
            bwd = Endo.identity(self.pres.alphabet)
            for n2, e in reversed(body.factors):
                bwd = compose(bwd, self._resolve(n2, defs, memo).power(-e))
            memo[name] = NamedAuto(name, fwd, bwd)
        return memo[name]


def catalog(r: int, k: int) -> Catalog:
    return Catalog(SurfacePresentation(r), k)


# ---------------------------------------------------------------------------
# Words in named automorphisms


class AutoWord:
    """A product of named automorphisms with nonzero integer exponents."""

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[tuple[str, int]] = ()):
        merged: list[tuple[str, int]] = []
        for name, e in factors:
            if e == 0:
                raise ValueError(f"zero exponent on {name}")
            if merged and merged[-1][0] == name:
                e2 = merged[-1][1] + e
                merged.pop()
                if e2:
                    merged.append((name, e2))
            else:
                merged.append((name, e))
        self.factors = tuple(merged)

    @classmethod
    def atom(cls, name: str, e: int = 1) -> "AutoWord":
        return cls([(name, e)])

    def __mul__(self, other: "AutoWord") -> "AutoWord":
        return AutoWord(self.factors + other.factors)

    def inverse(self) -> "AutoWord":
        return AutoWord([(n, -e) for n, e in reversed(self.factors)])

    def __pow__(self, n: int) -> "AutoWord":
        base = self if n >= 0 else self.inverse()
        return AutoWord(base.factors * abs(n))

    def __len__(self) -> int:
        return len(self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, AutoWord) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "id"
        return " * ".join(n if e == 1 else f"{n}^{e}" for n, e in self.factors)

    def __repr__(self) -> str:
        return f"AutoWord({str(self)!r})"


def auto_commutator(x: AutoWord, y: AutoWord) -> AutoWord:
    return x * y * x.inverse() * y.inverse()


class AutoWordSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class _Parser:
    # expr   := term ('*' term)*
    # term   := atom ('^' int)?
    # atom   := NAME | '$' REF | 'inner(' word ')' | '(' expr ')' | '[' expr ',' expr ']' | 'id'
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise AutoWordSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def expr(self) -> AutoWord:
        out = self.term()
        while self.peek() == "*":
            self.pos += 1
            out = out * self.term()
        return out

    def term(self) -> AutoWord:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.ws()
            m = re.compile(r"-?\d+").match(self.text, self.pos)
            if not m:
                raise AutoWordSyntaxError("expected integer exponent", self.pos)
            n = int(m.group())
            if n == 0:
                raise AutoWordSyntaxError("zero exponent", m.start())
            self.pos = m.end()
            base = base ** n
        return base

    def atom(self) -> AutoWord:
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch == "[":
            self.pos += 1
            x = self.expr()
            self.expect(",")
            y = self.expr()
            self.expect("]")
            return auto_commutator(x, y)
        if self.text.startswith("inner(", self.pos):
            end = self.text.find(")", self.pos)
            if end < 0:
                raise AutoWordSyntaxError("unterminated inner(", self.pos)
            body = " ".join(self.text[self.pos + 6:end].split())
            self.pos = end + 1
            return AutoWord.atom(f"inner({body})")
        m = re.compile(r"(R|S|T)(\d+)|Y|V|W|P|\$[A-Za-z0-9_]+|id\b").match(self.text, self.pos)
        if not m:
            raise AutoWordSyntaxError("expected automorphism name", start)
        self.pos = m.end()
        if m.group() == "id":
            return AutoWord()
        return AutoWord.atom(m.group())


def parse(text: str) -> AutoWord:
    """Parse e.g. ``"S1*T1*Y*T1^-1*S1^-1"`` or ``"[W, R2^-1]"``."""
    p = _Parser(text)
    out = p.expr()
    p.ws()
    if p.pos != len(text):
        raise AutoWordSyntaxError("unexpected input", p.pos)
    return out
