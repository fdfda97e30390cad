"""Rational first homology of the abelian cover defined by v : pi -> Z/h x Z/k.

H_1 of the cover is U^ab (x) Q for U = ker v.  It is computed by
Reidemeister-Schreier rewriting over a Schreier transversal; every Schreier
generator is then expressed in a chosen coordinate system.  For the standard
table (a1 -> (1,0), b1 -> (0,1)) the coordinates are the classes

    A = q(a1^h),  B = q(b1^k),  D^{nu,mu} = q(a1^nu b1^mu d b1^-mu a1^-nu)

for d in a2, b2, ..., ar, br, c, with C^{h-1,k-1} eliminated through the
single relation sum C^{nu,mu} = 0.  Other tables fall back to a basis of
Schreier generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from . import linalg
from .cyclotomic import CycloContext, CycloNum, lcm
from .surface import CoverSpec, SurfacePresentation, preserves_U
from .words import Endo, Word

Label = tuple[int, int]


class HomologyError(RuntimeError):
    pass


@dataclass(frozen=True)
class HomClass:
    """A class in H_1 of the cover, as a coordinate vector."""

    model: "HomologyModel"
    coords: tuple

    def __add__(self, other: "HomClass") -> "HomClass":
        return HomClass(self.model, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "HomClass") -> "HomClass":
        return HomClass(self.model, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def scale(self, s) -> "HomClass":
        return HomClass(self.model, tuple(s * x for x in self.coords))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomClass)
            and other.model is self.model
            and all(x == y for x, y in zip(self.coords, other.coords))
        )

    def __hash__(self) -> int:
        return hash(tuple(str(x) for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def support(self) -> dict[str, object]:
        return {self.model.coord_names[i]: x for i, x in enumerate(self.coords) if x}


class HomologyModel:
    """H_1(cover; Q) with coordinates, deck actions and eigenbases."""

    def __init__(self, pres: SurfacePresentation, spec: CoverSpec):
        if spec.pres != pres:
            raise ValueError("cover spec belongs to a different presentation")
        self.pres = pres
        self.spec = spec
        self.h, self.k = spec.h, spec.k
        self.r, self.g = pres.r, pres.g
        self.standard_coords = spec.table == CoverSpec.default(pres, spec.h, spec.k).table
        self.cosets: list[Label] = spec.elements()
        alph = pres.alphabet
        if self.standard_coords:
            a1, b1 = alph.gen("a1"), alph.gen("b1")
            self.reps = {(n, m): a1 ** n * b1 ** m for n, m in self.cosets}
        else:
            self.reps = dict(spec.section)
        self._build_schreier()
        self._build_coordinates()

    # --- Reidemeister-Schreier ----------------------------------------
    def _build_schreier(self):
        spec = self.spec
        self.schreier: list[tuple[Label, int]] = []
        self._gen_index: dict[tuple[Label, int], int] = {}
        gens = self.pres.alphabet.gens()
        for p in self.cosets:
            for x in range(len(gens)):
                q = spec.add(p, spec.table[x])
                w = self.reps[p] * gens[x] * self.reps[q].inverse()
                if w:
                    self._gen_index[(p, x)] = len(self.schreier)
                    self.schreier.append((p, x))
        self.relator_rows = []
        for p in self.cosets:
            t = self.reps[p]
            raw, end = self.rewrite(t * self.pres.relator * t.inverse())
            assert end == (0, 0)
            self.relator_rows.append(raw)

    def schreier_word(self, i: int) -> Word:
        p, x = self.schreier[i]
        q = self.spec.add(p, self.spec.table[x])
        return self.reps[p] * self.pres.alphabet.gens()[x] * self.reps[q].inverse()

    def schreier_name(self, i: int) -> str:
        p, x = self.schreier[i]
        return f"{self.pres.alphabet.names[x]}@{p[0]},{p[1]}"

    def rewrite(self, w: Word) -> tuple[dict[int, int], Label]:
        """Abelianized Reidemeister rewriting: Schreier-generator exponents and end coset."""
        spec = self.spec
        table = spec.table
        h, k = spec.h, spec.k
        idx = self._gen_index
        vec: dict[int, int] = {}
        cx = cy = 0
        for letter in w.letters:
            if letter > 0:
                x = letter - 1
                j = idx.get(((cx, cy), x))
                if j is not None:
                    vec[j] = vec.get(j, 0) + 1
                cx, cy = (cx + table[x][0]) % h, (cy + table[x][1]) % k
            else:
                x = -letter - 1
                cx, cy = (cx - table[x][0]) % h, (cy - table[x][1]) % k
                j = idx.get(((cx, cy), x))
                if j is not None:
                    vec[j] = vec.get(j, 0) - 1
        return vec, (cx, cy)

    # --- coordinates ----------------------------------------------------
    @property
    def d_symbols(self) -> list[tuple[str, str]]:
        """(class symbol, generator name) for A2, B2, ..., Ar, Br, C."""
        out = [(f"A{i}", f"a{i}") for i in range(2, self.r + 1)]
        out += [(f"B{i}", f"b{i}") for i in range(2, self.r + 1)]
        out.append(("C", "c"))
        return out

    def d_word(self, gen: str, nu: int, mu: int) -> Word:
        W = self.pres.alphabet
        t = W.gen("a1") ** nu * W.gen("b1") ** mu
        return W.gen(gen).conjugate(t)

    def _build_coordinates(self):
        N = len(self.schreier)
        rels = [[Fraction(row.get(j, 0)) for j in range(N)] for row in self.relator_rows]
        self.relator_rank = linalg.rank(rels)
        self.dimension = N - self.relator_rank
        if self.standard_coords:
            self._standard_coordinates(rels)
        else:
            self._schreier_coordinates(rels)
        if len(self.coord_names) != self.dimension:
            raise HomologyError("coordinate count does not match the dimension")
        expected = (self.g - 1) * self.h * self.k + 1
        if self.is_orientable_cover():
            expected = (self.g - 1) * self.h * self.k + 2
        if self.dimension != expected:
            raise HomologyError(f"dimension {self.dimension}, expected {expected}")
        # columns of the coordinate map, indexed by Schreier generator
        self._coord_cols = [[self._coord_map[i][j] for i in range(self.dimension)] for j in range(N)]

    def _standard_coordinates(self, rels):
        h, k = self.h, self.k
        a1, b1 = self.pres.gen("a1"), self.pres.gen("b1")
        names = ["A", "B"]
        words = [a1 ** h, b1 ** k]
        for sym, gen in self.d_symbols:
            for nu, mu in self.cosets:
                names.append(f"{sym}^{{{nu},{mu}}}")
                words.append(self.d_word(gen, nu, mu))
        self.spanning_names = list(names)
        self.spanning_words = list(words)
        last = f"C^{{{h - 1},{k - 1}}}"
        self.eliminated = last
        keep = [i for i, n in enumerate(names) if n != last]
        self.coord_names = [names[i] for i in keep]
        self.coord_words = [words[i] for i in keep]
        self.elimination_rule = f"{last} = -(sum of the other C^{{nu,mu}})"
        N = len(self.schreier)
        raw = [self._raw(w) for w in self.coord_words]
        if len(raw) + self.relator_rank != N:
            raise HomologyError("spanning set has the wrong size for one relation")
        # columns: coordinates then relator rows; invertible iff coordinates span modulo relators
        cols = raw + rels
        M = linalg.transpose(cols)
        try:
            inv = linalg.inverse(M)
        except ZeroDivisionError:
            raise HomologyError("coordinate classes do not form a basis") from None
        self._coord_map = inv[: len(raw)]
        # the relation among the C's, verified rather than assumed
        c_last = self._coords_of_raw(self._raw(words[names.index(last)]))
        c_idx = {i for i, n in enumerate(self.coord_names) if n.startswith("C^")}
        ok = all(c_last[i] == (-1 if i in c_idx else 0) for i in range(len(c_last)))
        if not ok:
            raise HomologyError("sum of the C^{nu,mu} is not zero")
        self.index = {n: i for i, n in enumerate(self.coord_names)}

    def _schreier_coordinates(self, rels):
        N = len(self.schreier)
        red, piv = linalg.rref(rels) if rels else ([], [])
        red = red[: len(piv)]
        free = [j for j in range(N) if j not in piv]
        cmap = [[Fraction(0)] * N for _ in free]
        pos = {j: i for i, j in enumerate(free)}
        for j in free:
            cmap[pos[j]][j] = Fraction(1)
        for row, p in zip(red, piv):
            for j in free:
                if row[j]:
                    cmap[pos[j]][p] -= row[j]
        self._coord_map = cmap
        self.coord_names = [self.schreier_name(j) for j in free]
        self.coord_words = [self.schreier_word(j) for j in free]
        self.spanning_names = list(self.coord_names)
        self.spanning_words = list(self.coord_words)
        self.eliminated = None
        self.elimination_rule = "pivot Schreier generators eliminated by the relator rows"
        self.index = {n: i for i, n in enumerate(self.coord_names)}

    def _raw(self, w: Word) -> list[Fraction]:
        vec, end = self.rewrite(w)
        if end != (0, 0):
            raise ValueError(f"{w} is not in the kernel of v")
        out = [Fraction(0)] * len(self.schreier)
        for j, c in vec.items():
            out[j] = Fraction(c)
        return out

    def _coords_of_raw(self, raw) -> list[Fraction]:
        return [sum((row[j] * raw[j] for j in range(len(raw)) if raw[j]), Fraction(0)) for row in self._coord_map]

    def q_vector(self, w: Word) -> list[Fraction]:
        vec, end = self.rewrite(w)
        if end != (0, 0):
            raise ValueError(f"word is not in U: {w}")
        out = [Fraction(0)] * self.dimension
        cols = self._coord_cols
        for j, c in vec.items():
            if c:
                col = cols[j]
                for i, x in enumerate(col):
                    if x:
                        out[i] += c * x
        return out

    def q_map(self, w: Word) -> HomClass:
        return HomClass(self, tuple(self.q_vector(w)))

    def coordinate(self, name: str) -> HomClass:
        """Coordinate class by name; the eliminated C is expanded by the relation."""
        if name == self.eliminated:
            return self.q_map(self.spanning_words[self.spanning_names.index(name)])
        v = [Fraction(0)] * self.dimension
        v[self.index[name]] = Fraction(1)
        return HomClass(self, tuple(v))

    # --- induced maps ---------------------------------------------------
    def induced_matrix(self, phi: Endo) -> linalg.Matrix:
        """Matrix (columns = images of coordinate classes) of the map phi induces on H_1."""
        if preserves_U(self.spec, phi) is None:
            raise ValueError("automorphism does not preserve U")
        cols = [self.q_vector(phi.apply(w)) for w in self.coord_words]
        return linalg.transpose(cols)

    @cached_property
    def deck_matrices(self) -> tuple[linalg.Matrix, linalg.Matrix]:
        """J_1, J_2: the deck transformations for (-1, 0) and (0, -1)."""
        from .surface import inner

        sec = self.spec.section
        j1 = inner(self.pres, sec[((-1) % self.h, 0)])
        j2 = inner(self.pres, sec[(0, (-1) % self.k)])
        return self.induced_matrix(j1), self.induced_matrix(j2)

    def deck_action(self, axis: int, x: HomClass) -> HomClass:
        if axis not in (1, 2):
            raise ValueError("axis is 1 or 2")
        J = self.deck_matrices[axis - 1]
        return HomClass(self, tuple(linalg.matvec(J, list(x.coords))))

    # --- characters and eigenspaces ------------------------------------
    @cached_property
    def field(self) -> CycloContext:
        return CycloContext(lcm(self.h, self.k))

    @cached_property
    def zeta(self) -> CycloNum:
        return self.field.zeta(self.h)

    @cached_property
    def eta(self) -> CycloNum:
        return self.field.zeta(self.k)

    def labels(self) -> list[Label]:
        return list(self.cosets)

    def character(self, label: Label, element: Label) -> CycloNum:
        """Scalar by which the deck transformation of ``element`` acts on H^label."""
        a, b = label
        x, y = element
        return self.zeta ** (-a * x % self.h) * self.eta ** (-b * y % self.k)

    def weight(self, label: Label, nu: int, mu: int) -> CycloNum:
        a, b = label
        return self.zeta ** (a * nu % self.h) * self.eta ** (b * mu % self.k)

    @cached_property
    def deck_traces(self) -> dict[Label, Fraction]:
        J1, J2 = self.deck_matrices
        n = self.dimension
        out = {}
        powers1 = [linalg.identity(n)]
        for _ in range(self.h - 1):
            powers1.append(linalg.matmul(J1, powers1[-1]))
        powers2 = [linalg.identity(n)]
        for _ in range(self.k - 1):
            powers2.append(linalg.matmul(J2, powers2[-1]))
        for x in range(self.h):
            for y in range(self.k):
                # J1^x J2^y is the deck transformation of (-x, -y)
                out[((-x) % self.h, (-y) % self.k)] = linalg.trace(linalg.matmul(powers1[x], powers2[y]))
        return out

    def eigen_dimension(self, label: Label) -> int:
        """dim H^label by the character inner product with the deck-group traces."""
        F = self.field
        tot = F.zero()
        for g, t in self.deck_traces.items():
            tot = tot + self.character(label, g).conjugate() * t
        d = tot / (self.h * self.k)
        if not d.is_rational() or d.to_fraction().denominator != 1:
            raise HomologyError(f"non-integral multiplicity {d}")
        return int(d.to_fraction())

    def eigenbasis(self, label: Label) -> list[HomClass]:
        """The classes D-hat^{alpha,beta} = sum zeta^{alpha nu} eta^{beta mu} D^{nu,mu}."""
        if not self.standard_coords:
            raise ValueError("eigenbasis needs the standard cover coordinates")
        a, b = label[0] % self.h, label[1] % self.k
        if (a, b) == (0, 0):
            raise ValueError("label (0,0) has no basis of this form")
        return [HomClass(self, tuple(v)) for v in self._eigen_vectors((a, b))]

    def eigen_symbols(self) -> list[str]:
        return [sym for sym, _ in self.d_symbols]

    def _eigen_vectors(self, label: Label) -> list[list[CycloNum]]:
        cache = self.__dict__.setdefault("_eig_cache", {})
        if label in cache:
            return cache[label]
        F = self.field
        h, k = self.h, self.k
        w_last = self.weight(label, h - 1, k - 1)
        vecs = []
        for sym, _ in self.d_symbols:
            v = [F.zero()] * self.dimension
            for nu, mu in self.cosets:
                name = f"{sym}^{{{nu},{mu}}}"
                w = self.weight(label, nu, mu)
                if name == self.eliminated:
                    continue
                v[self.index[name]] = w - w_last if sym == "C" else w
            vecs.append(v)
        cache[label] = vecs
        return vecs

    def eigen_coefficients(self, label: Label, y: list) -> Optional[list[CycloNum]]:
        """Coordinates of ``y`` in the eigenbasis of ``label``, or None if y is not in H^label."""
        F = self.field
        vecs = self._eigen_vectors(label)
        h, k = self.h, self.k
        w_last = self.weight(label, h - 1, k - 1)
        out = []
        for sym, _ in self.d_symbols:
            if sym == "C":
                # first C coordinate whose weight differs from the eliminated one
                for nu, mu in self.cosets:
                    d = self.weight(label, nu, mu) - w_last
                    if d:
                        break
                x = y[self.index[f"C^{{{nu},{mu}}}"]]
                x = (x if isinstance(x, CycloNum) else F(x)) / d
            else:
                x = y[self.index[f"{sym}^{{0,0}}"]]
                x = x if isinstance(x, CycloNum) else F(x)
            out.append(x)
        # the A and B coordinates vanish on nontrivial eigenspaces
        recon = [F.zero()] * self.dimension
        for c, v in zip(out, vecs):
            if c:
                recon = [r + c * e if e else r for r, e in zip(recon, v)]
        if any(F(0) + yy != rr for yy, rr in zip(y, recon)):
            return None
        return out

    def expected_structure(self) -> dict[Label, int]:
        g = self.g
        dims = {lab: g - 1 for lab in self.labels()}
        dims[(0, 0)] = g
        minus = self.orientation_label()
        if minus is not None:
            dims[minus] += 1
        return dims

    def is_orientable_cover(self) -> bool:
        return self.orientation_label() is not None

    def orientation_label(self) -> Optional[Label]:
        """Label of Q^- when the cover is orientable, else None."""
        # the cover is orientable iff the orientation character factors through v
        o = [0] * (len(self.pres.alphabet) - 1) + [1]
        h, k = self.h, self.k
        for p in range(2):
            for q in range(2):
                if (p * h) % 2 or (q * k) % 2:
                    continue
                if all((p * tx + q * ty) % 2 == oi for (tx, ty), oi in zip(self.spec.table, o)):
                    # character (x,y) -> (-1)^(p x + q y)
                    a = (p * h // 2) % h if h > 1 else 0
                    b = (q * k // 2) % k if k > 1 else 0
                    return (a, b)
        return None

    def verify_structure(self) -> dict:
        expected = self.expected_structure()
        rows = []
        for lab in self.labels():
            got = self.eigen_dimension(lab)
            rows.append({"label": list(lab), "dimension": got, "expected": expected[lab], "ok": got == expected[lab]})
        return {
            "case": "c" if self.is_orientable_cover() else "b",
            "dimension": self.dimension,
            "eigenspaces": rows,
            "ok": all(r["ok"] for r in rows),
        }

    def to_json(self) -> dict:
        table = {}
        for j in range(len(self.schreier)):
            col = self._coord_cols[j]
            table[self.schreier_name(j)] = {self.coord_names[i]: str(x) for i, x in enumerate(col) if x}
        return {
            "r": self.r,
            "h": self.h,
            "k": self.k,
            "dimension": self.dimension,
            "coordinates": self.coord_names,
            "elimination_rule": self.elimination_rule,
            "schreier_expressions": table,
        }


def build_model(pres: SurfacePresentation, spec: CoverSpec) -> HomologyModel:
    return HomologyModel(pres, spec)


_MODELS: dict[tuple, HomologyModel] = {}


def standard_model(r: int, h: int, k: int) -> HomologyModel:
    """Cached model for the standard exponent table."""
    key = (r, h, k)
    if key not in _MODELS:
        pres = SurfacePresentation(r)
        _MODELS[key] = HomologyModel(pres, CoverSpec.default(pres, h, k))
    return _MODELS[key]
