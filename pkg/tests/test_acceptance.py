"""Acceptance criteria 1-10, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary (or directly when run as a script)."""
import time

import pytest

from mcgcover.closed_forms import commutator_forms, generator_forms, v_form, w_form, z_value, z_value_series
from mcgcover.homology import build_model, standard_model
from mcgcover.mcg import Catalog, parse
from mcgcover.representation import OrientationModel, gamma_alpha, varrho
from mcgcover.steinberg import certify, replay
from mcgcover.suites import functoriality, identities, orientation
from mcgcover.surface import CoverSpec, SurfacePresentation

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str = "") -> None:
    RESULTS[n] = (ok, detail)


def timed(fn, *a, **kw):
    t = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t


def _varrho(model, cat, word):
    return varrho(model, cat.evaluate(parse(word)))


# ---------------------------------------------------------------------------


def test_criterion_1_dimensions():
    notes, ok = [], True
    for r, h, k in [(2, 2, 2), (2, 3, 3), (3, 2, 2), (3, 2, 3)]:
        def run():
            pres = SurfacePresentation(r)
            m = build_model(pres, CoverSpec.default(pres, h, k))
            return m, m.verify_structure()

        (m, rep), dt = timed(run)
        good = m.dimension == (m.g - 1) * h * k + 1 and rep["ok"] and dt < 5
        good = good and all(e["dimension"] == (m.g if e["label"] == [0, 0] else m.g - 1) for e in rep["eigenspaces"])
        ok &= good
        notes.append(f"({r},{h},{k}) dim {m.dimension} {dt:.2f}s")
    record(1, ok, "; ".join(notes))
    assert ok


def test_criterion_2_character_profiles():
    notes, ok = [], True
    for r in (2, 3):
        pres = SurfacePresentation(r)
        g = pres.g

        def run():
            main = standard_model(r, 2, 2).verify_structure()
            om = OrientationModel(pres)
            return main, om.model.verify_structure(), om

        (main, orient, om), dt = timed(run)
        # Q + Q[G]^(g-1): trivial character g times, the others g-1 times
        good = main["ok"] and main["case"] == "b"
        # Q + Q^- + Q[G]^(g-1) with G = Z/2: both characters g times
        good &= orient["ok"] and orient["case"] == "c"
        good &= all(e["dimension"] == g for e in orient["eigenspaces"])
        good &= om.dimension(1) == om.dimension(-1) == g and dt < 5
        ok &= good
        notes.append(f"r={r} H+={om.dimension(1)} H-={om.dimension(-1)} {dt:.2f}s")
    record(2, ok, "; ".join(notes))
    assert ok


def test_criterion_3_generator_formulas():
    t0 = time.perf_counter()
    failures = []
    for r, k in [(2, 2), (3, 2), (3, 3)]:
        m = standard_model(r, k, k)
        cat = Catalog(m.pres, k)
        for e in generator_forms(m):
            if not _varrho(m, cat, e.word) == e.matrix:
                failures.append(f"({r},{k}) {e.name}")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30
    record(3, ok, f"{dt:.2f}s" + (f" failures {failures}" if failures else ""))
    assert ok


@pytest.mark.parametrize("r", [3, pytest.param(2, marks=pytest.mark.xfail(strict=True, reason="closed form for varrho(V) needs r >= 3"))])
def test_criterion_4_v(r):
    t0 = time.perf_counter()
    notes, ok = [], True
    for k in (2, 3):
        m = standard_model(r, k, k)
        cat = Catalog(m.pres, k)
        V = cat.evaluate(parse("V"))
        ctx = m.field
        forms_agree = z_value(ctx, k) == z_value_series(ctx, k)
        match = varrho(m, V) == v_form(m).matrix
        g0 = gamma_alpha(m, V, 0)
        good = forms_agree and match and g0
        ok &= good
        notes.append(f"r={r} k={k} formula={'ok' if match else 'MISMATCH'} Gamma0={g0}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    prev = RESULTS.get(4, (True, ""))
    record(4, prev[0] and ok, "; ".join(filter(None, [prev[1], *notes])) + f" {dt:.2f}s")
    assert ok


def test_criterion_5_w():
    t0 = time.perf_counter()
    failures = []
    for r, k in [(2, 2), (3, 2), (3, 3)]:
        m = standard_model(r, k, k)
        if not _varrho(m, Catalog(m.pres, k), "W") == w_form(m).matrix:
            failures.append((r, k))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 60
    record(5, ok, f"{dt:.2f}s" + (f" failures {failures}" if failures else ""))
    assert ok


def test_criterion_6_commutators():
    t0 = time.perf_counter()
    failures = []
    for r, k in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        m = standard_model(r, k, k)
        cat = Catalog(m.pres, k)
        for e in commutator_forms(m):
            if not _varrho(m, cat, e.word) == e.matrix:
                failures.append(f"({r},{k}) {e.name}")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 60
    record(6, ok, f"{dt:.2f}s" + (f" failures {failures}" if failures else ""))
    assert ok


def test_criterion_7_identities():
    t0 = time.perf_counter()
    notes, ok = [], True
    for r, k in [(2, 2), (2, 3)]:
        rows = identities(standard_model(r, k, k), count=20, seed=2024)
        passed = sum(r_["status"] == "pass" for r_ in rows)
        ok &= passed == len(rows) == 20
        notes.append(f"({r},{k}) {passed}/{len(rows)}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    record(7, ok, "; ".join(notes) + f" {dt:.2f}s")
    assert ok


def test_criterion_8_functoriality():
    t0 = time.perf_counter()
    notes, ok = [], True
    for r, k in [(2, 2), (2, 3), (3, 2)]:
        rows = functoriality(standard_model(r, k, k), count=100, seed=2024)
        pairs = [x for x in rows if x["name"].startswith("functoriality")]
        inner = [x for x in rows if x["name"].startswith("inner")]
        good = len(pairs) == 100 and all(x["status"] == "pass" for x in rows)
        ok &= good
        notes.append(f"({r},{k}) pairs {sum(x['status'] == 'pass' for x in pairs)}/100 inner {len(inner)}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    record(8, ok, "; ".join(notes) + f" {dt:.2f}s")
    assert ok


def test_criterion_9_certificates():
    t0 = time.perf_counter()
    notes, ok = [], True
    for r, k in [(3, 2), (3, 3)]:
        m = standard_model(r, k, k)
        data = certify(m, seed=0)
        n = m.g - 1
        proven = [a for a in data["assertions"] if a["status"] == "proven"]
        gp = data["galois_product"]
        conc = data["concentrate"] or {}
        wit = conc.get("witnesses", [])
        good = data["closed"] and len(proven) == n * (n - 1)
        good &= gp is not None and all(isinstance(gp[x], int) for x in ("lambda", "mu", "nu")) and gp["nu"] != 0
        good &= conc.get("n", 0) != 0 and len(wit) == n * (n - 1) * k and all(w["ok"] for w in wit)
        good &= {(w["i"], w["j"], w["l"]) for w in wit} == {(i, j, l) for i in range(1, n + 1) for j in range(1, n + 1) if i != j for l in range(k)}
        rep = replay(data)
        good &= rep["ok"] and rep["checked"] == len(proven) + len(wit)
        ok &= good
        notes.append(
            f"({r},{k}) closed={data['closed']} (lambda,mu,nu)=({gp['lambda']},{gp['mu']},{gp['nu']}) n={conc.get('n')} "
            f"witnesses={len(wit)} replayed={rep['checked']} clearing={data['pending_before_clearing']}"
        )
    for r, k in [(2, 2), (2, 3)]:
        data = certify(standard_model(r, k, k))
        pending = data["pending"]
        notes.append(f"({r},{k}) closed={data['closed']} pending={pending} pending_before_clearing={data['pending_before_clearing']}")
        ok &= data["closed"] or bool(pending)
    dt = time.perf_counter() - t0
    ok &= dt < 600
    record(9, ok, "; ".join(notes) + f" {dt:.2f}s")
    assert ok


def test_criterion_10_orientation():
    t0 = time.perf_counter()
    notes, ok = [], True
    for r in (2, 3):
        rows = orientation(SurfacePresentation(r))
        good = all(x["status"] == "pass" for x in rows) and len(rows) == 3
        ok &= good
        notes.append(f"r={r} " + ", ".join(f"{x['name']}={x['status']}" for x in rows))
    dt = time.perf_counter() - t0
    ok &= dt < 60
    record(10, ok, "; ".join(notes) + f" {dt:.2f}s")
    assert ok


def summary_lines() -> list[str]:
    out = []
    for n in range(1, 11):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            out.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            out.append(f"criterion {n:2d}: NOT RUN")
    return out


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
