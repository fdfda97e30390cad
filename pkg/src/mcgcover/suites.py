"""Verification suites shared by the command line and the test-suite.

Each suite returns a list of result rows ``{"name", "status", "details"}``
with status "pass" or "fail".
"""
from __future__ import annotations

import random
from math import gcd
from typing import Optional

from . import linalg
from .closed_forms import all_forms, z_value, z_value_series
from .homology import HomologyModel
from .mcg import AutoWord, Catalog, parse
from .representation import (
    OrientationModel,
    duality_intertwiner,
    gamma_alpha,
    induced_map,
    rho_from_induced,
    varrho,
    verify_identities,
)
from .surface import SurfacePresentation, inner, orientation_character, p_star, p_star_hom, sigma_relator


def _row(name: str, ok: bool, details=None) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", "details": details if details is not None else {}}


def gamma_atoms(r: int) -> list[str]:
    """Catalog names that lie in Gamma(v) for the standard cover."""
    out = [f"R{i}" for i in range(2, r + 1)] + [f"S{i}" for i in range(2, r + 1)]
    out += [f"T{i}" for i in range(2, r)]
    return out + ["Y", "W", "V"]


def random_gamma_word(rng: random.Random, r: int, length: Optional[int] = None) -> AutoWord:
    atoms = gamma_atoms(r)
    length = length or rng.randint(1, 3)
    return AutoWord([(rng.choice(atoms), rng.choice((1, -1))) for _ in range(length)])


def random_pi_word(rng: random.Random, pres: SurfacePresentation, length: int = 4):
    letters = [rng.choice((1, -1)) * rng.randint(1, len(pres.alphabet)) for _ in range(length)]
    from .words import Word

    return Word(pres.alphabet, letters)


# ---------------------------------------------------------------------------


def paper_formulas(model: HomologyModel, cat: Optional[Catalog] = None) -> list[dict]:
    """varrho of generators, V, W, L_i and the two commutators against their closed forms."""
    cat = cat or Catalog(model.pres, model.k)
    rows = []
    if model.h != model.k:
        return [_row("h = k", False, {"reason": "closed forms are stated for h = k"})]
    for e in all_forms(model):
        got = varrho(model, cat.evaluate(parse(e.word)))
        ok = got == e.matrix
        det = {"word": e.word}
        if not ok:
            det["got"] = [[str(x) for x in row] for row in got.entries]
            det["expected"] = [[str(x) for x in row] for row in e.matrix]
        rows.append(_row(f"varrho({e.name})", ok, det))
    ctx = model.field
    rows.append(_row("z closed forms agree", z_value(ctx, model.k) == z_value_series(ctx, model.k), {"z": str(z_value(ctx, model.k))}))
    V = cat.evaluate(parse("V"))
    rows.append(_row("V in Gamma^0", gamma_alpha(model, V, 0)))
    return rows


def identities(model: HomologyModel, count: int = 20, seed: int = 0, cat: Optional[Catalog] = None) -> list[dict]:
    """Conjugation by S1, R1 and every Galois relabeling, on random Gamma(v) words."""
    cat = cat or Catalog(model.pres, model.k)
    rng = random.Random(seed)
    m = model.field.m
    units = [l for l in range(1, m + 1) if gcd(l, m) == 1]
    rows = []
    for t in range(count):
        w = random_gamma_word(rng, model.r)
        phi = cat.evaluate(w)
        bad = []
        for l in units:
            rep = verify_identities(model, phi, l, cat)
            bad += [dict(c, l=l) for c in rep["checks"] if not c["ok"]]
        rows.append(_row(f"identities[{t}] {w}", not bad, {"units": units, "failures": bad}))
    return rows


def functoriality(model: HomologyModel, count: int = 100, seed: int = 0, cat: Optional[Catalog] = None) -> list[dict]:
    """Composition versus matrix products, integrality, and inner automorphisms acting by roots of unity."""
    cat = cat or Catalog(model.pres, model.k)
    rng = random.Random(seed)
    rows = []
    labels = [lab for lab in model.labels() if lab != (0, 0)]
    for t in range(count):
        u, v = random_gamma_word(rng, model.r, 2), random_gamma_word(rng, model.r, 2)
        pu, pv = cat.evaluate(u), cat.evaluate(v)
        iu, iv = induced_map(model, pu), induced_map(model, pv)
        iuv = induced_map(model, cat.evaluate(u * v))
        ok_prod = linalg.mat_eq(iuv.matrix, linalg.matmul(iu.matrix, iv.matrix))
        ok_int = all(rho_from_induced(iuv, lab).is_integral() for lab in labels)
        rows.append(_row(f"functoriality[{t}] ({u}) * ({v})", ok_prod and ok_int, {"product": ok_prod, "integral": ok_int}))
    hk = model.h * model.k
    for t in range(max(1, count // 10)):
        w = random_pi_word(rng, model.pres, rng.randint(1, 5))
        ind = induced_map(model, inner(model.pres, w))
        bad = []
        for lab in labels:
            s = rho_from_induced(ind, lab).is_scalar()
            if s is None or not (s ** hk) == 1:
                bad.append(list(lab))
        rows.append(_row(f"inner({w}) scalar", not bad, {"bad_labels": bad}))
    return rows


def structure(model: HomologyModel) -> list[dict]:
    rep = model.verify_structure()
    rows = [_row(f"dimension (r,h,k)=({model.r},{model.h},{model.k})", model.dimension == (model.g - 1) * model.h * model.k + 1, {"dimension": model.dimension})]
    rows.append(_row("eigenspace dimensions", rep["ok"], rep))
    om = OrientationModel(model.pres)
    orep = om.model.verify_structure()
    g = model.g
    ok = orep["ok"] and om.dimension(1) == g and om.dimension(-1) == g
    rows.append(_row("orientation cover H^+ and H^-", ok, {"plus": om.dimension(1), "minus": om.dimension(-1), "case": orep["case"]}))
    return rows


def orientation(pres: SurfacePresentation, words: Optional[list[str]] = None, depth: int = 6) -> list[dict]:
    """p_* checks, the well-definedness of p_* and the duality intertwiner."""
    rows = []
    spec = orientation_character(pres)
    g = pres.g
    names = [f"{x}{i}" for i in range(1, g + 1) for x in ("a", "b")]
    bad = [nm for nm in names if not spec.in_kernel(p_star(pres, nm))]
    rows.append(_row("p_* images in the orientation kernel", not bad, {"bad": bad}))
    image = p_star_hom(pres)(sigma_relator(g))
    cert = pres.is_identity(image, depth=depth)
    rows.append(_row("p_* of the surface relator is trivial", cert.status == "proven-identity", {"status": cert.status}))
    om = OrientationModel(pres)
    cat = Catalog(pres, 2)
    gens = words or [f"R{i}" for i in range(1, pres.r + 1)] + [f"S{i}" for i in range(1, pres.r + 1)] + [f"T{i}" for i in range(1, pres.r)] + ["Y"]
    P = duality_intertwiner(pres, [cat.evaluate(parse(w)) for w in gens], om)
    rows.append(_row("rho^- is dual to rho^+", P is not None, {"generators": gens, "intertwiner": [[str(x) for x in row] for row in P] if P else None}))
    return rows


SUITES = {
    "paper-formulas": lambda model, **kw: paper_formulas(model),
    "identities": lambda model, count=20, seed=0, **kw: identities(model, count, seed),
    "random-functoriality": lambda model, count=100, seed=0, **kw: functoriality(model, count, seed),
    "structure": lambda model, **kw: structure(model),
}
