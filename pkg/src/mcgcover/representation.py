"""Matrices of automorphisms of pi acting on the homology of the cover.

``rho(model, (a, b), phi)`` is the matrix of phi on the eigenspace H^{a,b}
in the basis (A2^, ..., Ar^, B2^, ..., Br^, C^).  ``varrho`` conjugates the
(0,1) matrix by the elementary matrix E_{g-1,r-1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import linalg
from .cyclotomic import CycloContext, CycloNum
from .homology import HomologyModel, Label
from .surface import GroupAuto, preserves_U
from .words import Endo


@dataclass
class RepMatrix:
    label: Label
    entries: list  # rows of CycloNum
    basis: str = "eigen"

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def field(self) -> CycloContext:
        return self.entries[0][0].ctx

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(self.label, linalg.matmul(self.entries, other.entries), self.basis)

    def __eq__(self, other) -> bool:
        if isinstance(other, RepMatrix):
            other = other.entries
        return linalg.mat_eq(self.entries, other)

    def inverse(self) -> "RepMatrix":
        return RepMatrix(self.label, linalg.inverse(self.entries), self.basis)

    def det(self) -> CycloNum:
        return linalg.det(self.entries)

    def trace(self) -> CycloNum:
        return linalg.trace(self.entries)

    def is_identity(self) -> bool:
        return linalg.is_identity(self.entries)

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.entries for x in row)

    def is_scalar(self) -> Optional[CycloNum]:
        s = self.entries[0][0]
        n = self.size
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != (s if i == j else 0):
                    return None
        return s

    def galois(self, l: int) -> "RepMatrix":
        return RepMatrix(self.label, linalg.mat_map(lambda x: x.galois(l), self.entries), self.basis)

    def to_json(self) -> dict:
        return {
            "label": list(self.label),
            "basis": self.basis,
            "rows": [[x.to_json() for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RepMatrix":
        rows = [[CycloNum.from_json(x) for x in row] for row in data["rows"]]
        return cls(tuple(data["label"]), rows, data.get("basis", "eigen"))

    def __str__(self) -> str:
        cells = [[str(x) for x in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


# ---------------------------------------------------------------------------
# elementary matrices


def elementary(ctx: CycloContext, n: int, i: int, j: int, z=1) -> list:
    """E_{i,j}(z) of size n, 1-based indices."""
    if i == j:
        raise ValueError("E_{i,j} needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("index out of range")
    m = linalg.identity(n, ctx.one(), ctx.zero())
    m[i - 1][j - 1] = z if isinstance(z, CycloNum) else ctx(z)
    return m


def diagonal_sign(ctx: CycloContext, n: int, i: int) -> list:
    """D_i = diag(1, ..., -1, ..., 1) with -1 in place i."""
    m = linalg.identity(n, ctx.one(), ctx.zero())
    m[i - 1][i - 1] = ctx(-1)
    return m


def mat_product(ctx: CycloContext, n: int, factors: Sequence) -> list:
    out = linalg.identity(n, ctx.one(), ctx.zero())
    for f in factors:
        out = linalg.matmul(out, f)
    return out


# ---------------------------------------------------------------------------
# induced maps


@dataclass
class InducedMap:
    """The map on H_1 induced by a U-preserving automorphism."""

    model: HomologyModel
    matrix: list  # rational, columns are images of coordinate classes
    chi: GroupAuto

    def __matmul__(self, other: "InducedMap") -> "InducedMap":
        return InducedMap(self.model, linalg.matmul(self.matrix, other.matrix), self.chi.compose(other.chi))

    def is_equivariant(self) -> bool:
        return self.chi.is_identity()

    def target_label(self, label: Label) -> Label:
        """phi maps H^label onto H^{label o chi^-1}."""
        m = self.model
        cinv = self.chi.inverse()
        e1, e2 = (1 % m.h, 0), (0, 1 % m.k)
        want1 = m.character(label, cinv(e1))
        want2 = m.character(label, cinv(e2))
        for lab in m.labels():
            if m.character(lab, e1) == want1 and m.character(lab, e2) == want2:
                return lab
        raise AssertionError("no target character")

    def label_permutation(self) -> dict[Label, Label]:
        return {lab: self.target_label(lab) for lab in self.model.labels()}

    def block(self, label: Label) -> RepMatrix:
        """Matrix from the eigenbasis of ``label`` to the eigenbasis of its target."""
        m = self.model
        tgt = self.target_label(label)
        cols = []
        for v in m._eigen_vectors(label):
            y = linalg.matvec(self.matrix, v)
            c = m.eigen_coefficients(tgt, y)
            if c is None:
                raise AssertionError(f"image of an H^{label} basis vector is not in H^{tgt}")
            cols.append(c)
        return RepMatrix(label, linalg.transpose(cols))


def induced_map(model: HomologyModel, phi: Endo) -> InducedMap:
    chi = preserves_U(model.spec, phi)
    if chi is None:
        raise ValueError("automorphism does not preserve U")
    return InducedMap(model, model.induced_matrix(phi), chi)


def induced_matrix(model: HomologyModel, phi: Endo) -> InducedMap:
    return induced_map(model, phi)


def _normalize_label(model: HomologyModel, label) -> Label:
    a, b = label
    lab = (a % model.h, b % model.k)
    if lab == (0, 0):
        raise ValueError("label (0,0) is excluded")
    return lab


def rho_from_induced(ind: InducedMap, label) -> RepMatrix:
    if not ind.is_equivariant():
        raise ValueError("automorphism is not in Gamma(v)")
    return ind.block(_normalize_label(ind.model, label))


def rho(model: HomologyModel, label, phi: Endo) -> RepMatrix:
    """rho^{alpha,beta}(phi) for phi in Gamma(v)."""
    return rho_from_induced(induced_map(model, phi), label)


def conjugator(model: HomologyModel) -> list:
    """E_{g-1,r-1}."""
    return elementary(model.field, model.g - 1, model.g - 1, model.r - 1)


def varrho_from_rho(model: HomologyModel, m: RepMatrix) -> RepMatrix:
    E = conjugator(model)
    Einv = linalg.inverse(E)
    return RepMatrix(m.label, linalg.matmul(Einv, linalg.matmul(m.entries, E)), "varrho")


def varrho(model: HomologyModel, phi: Endo) -> RepMatrix:
    return varrho_from_rho(model, rho(model, (0, 1), phi))


def rho_product(model: HomologyModel, phi: Endo) -> list[RepMatrix]:
    """(rho^{alpha,1}(phi) for alpha in Z/k); needs h = k."""
    if model.h != model.k:
        raise ValueError("rho_product needs h = k")
    ind = induced_map(model, phi)
    return [rho_from_induced(ind, (a, 1)) for a in range(model.k)]


def is_concentrated_induced(ind: InducedMap, alpha: int) -> bool:
    m = ind.model
    if m.h != m.k:
        raise ValueError("concentration needs h = k")
    if not ind.is_equivariant():
        return False
    return all(rho_from_induced(ind, (d, 1)).is_identity() for d in range(m.k) if d != alpha % m.k)


def in_gamma_alpha_induced(ind: InducedMap, alpha: int) -> bool:
    if not is_concentrated_induced(ind, alpha):
        return False
    m = ind.model
    return all(rho_from_induced(ind, lab).det() == 1 for lab in m.labels() if lab != (0, 0))


def is_concentrated(model: HomologyModel, phi: Endo, alpha: int) -> bool:
    return is_concentrated_induced(induced_map(model, phi), alpha)


def gamma_alpha(model: HomologyModel, phi: Endo, alpha: int) -> bool:
    return in_gamma_alpha_induced(induced_map(model, phi), alpha)


def inner_scalar(model: HomologyModel, label, w) -> Optional[CycloNum]:
    """The scalar by which inner(w) acts on H^label, or None if it is not scalar."""
    from .surface import inner

    return rho(model, label, inner(model.pres, w)).is_scalar()


# ---------------------------------------------------------------------------
# conjugation and Galois identities


def conjugate_endo(phi: Endo, by) -> Endo:
    """by^-1 o phi o by, where ``by`` is a NamedAuto."""
    from .words import compose

    return compose(by.inverse, compose(phi, by.endo))


def verify_identities(model: HomologyModel, phi: Endo, l: int = 1, cat=None) -> dict:
    """Check rho(S1^-1 phi S1), rho(R1^-1 phi R1) and the Galois relabeling on every label."""
    from .mcg import Catalog

    h, k = model.h, model.k
    if h != k:
        raise ValueError("the conjugation identities need h = k")
    m = model.field.m
    if gcd(l, m) != 1:
        raise ValueError(f"l={l} is not coprime to {m}")
    cat = cat or Catalog(model.pres, k)
    base = induced_map(model, phi)
    if not base.is_equivariant():
        raise ValueError("automorphism is not in Gamma(v)")
    via_s = induced_map(model, conjugate_endo(phi, cat["S1"]))
    via_r = induced_map(model, conjugate_endo(phi, cat["R1"]))
    rows = []
    for a, b in model.labels():
        if (a, b) == (0, 0):
            continue
        lab = (a, b)
        here = rho_from_induced(base, lab)
        checks = [
            ("S1-conjugation", rho_from_induced(via_s, lab), rho_from_induced(base, ((a + b) % h, b))),
            ("R1-conjugation", rho_from_induced(via_r, lab), rho_from_induced(base, (a, (b - a) % k))),
            ("galois", here.galois(l), rho_from_induced(base, ((l * a) % h, (l * b) % k))),
        ]
        for name, lhs, rhs in checks:
            rows.append({"identity": name, "label": list(lab), "ok": lhs == rhs})
    return {"l": l, "checks": rows, "ok": all(r["ok"] for r in rows)}


# ---------------------------------------------------------------------------
# orientation cover


class OrientationModel:
    """H^+ and H^- of the orientation double cover, with fixed rational bases."""

    def __init__(self, pres):
        from .homology import build_model
        from .surface import orientation_character

        self.pres = pres
        self.model = build_model(pres, orientation_character(pres))
        J = self.model.deck_matrices[0]
        n = self.model.dimension
        I = linalg.identity(n)
        self.bases = {}
        for sign in (1, -1):
            proj = [[I[i][j] + sign * J[i][j] for j in range(n)] for i in range(n)]
            red, piv = linalg.rref(linalg.transpose(proj))
            self.bases[sign] = [red[t] for t in range(len(piv))]

    def dimension(self, sign: int) -> int:
        return len(self.bases[sign])

    def matrices(self, phi: Endo) -> tuple[list, list]:
        """Rational matrices of phi on (H^+, H^-) in the stored bases."""
        full = self.model.induced_matrix(phi)
        out = []
        for sign in (1, -1):
            basis = self.bases[sign]
            A = linalg.transpose(basis)
            cols = []
            for v in basis:
                c = linalg.solve(A, linalg.matvec(full, v))
                if c is None:
                    raise AssertionError("eigenspace is not invariant")
                cols.append(c)
            out.append(linalg.transpose(cols))
        return out[0], out[1]


def orientation_reps(pres, phi: Endo, om: Optional[OrientationModel] = None) -> tuple[list, list]:
    om = om or OrientationModel(pres)
    return om.matrices(phi)


def duality_intertwiner(pres, endos: Sequence[Endo], om: Optional[OrientationModel] = None):
    """An invertible P with rho^-(phi) P = P (rho^+(phi)^T)^-1 for every phi, or None."""
    om = om or OrientationModel(pres)
    n = om.dimension(1)
    if om.dimension(-1) != n:
        return None
    rows = []
    for phi in endos:
        plus, minus = om.matrices(phi)
        B = linalg.transpose(linalg.inverse(plus))
        # unknown P[p][q] at index p*n+q; (minus P - P B)[i][j] = 0
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for t in range(n):
                    row[t * n + j] += minus[i][t]
                    row[i * n + t] -= B[t][j]
                rows.append(row)
    basis = linalg.nullspace(rows)
    if not basis:
        return None
    # deterministic search for an invertible combination
    for weights in _weight_sequence(len(basis)):
        vec = [sum((w * b[x] for w, b in zip(weights, basis)), Fraction(0)) for x in range(n * n)]
        P = [vec[i * n:(i + 1) * n] for i in range(n)]
        if linalg.det(P) != 0:
            return P
    return None


def _weight_sequence(d: int):
    yield [Fraction(1)] * d
    for t in range(1, 20):
        yield [Fraction((t * (i + 1)) ** 2 % 97 + 1) for i in range(d)]
