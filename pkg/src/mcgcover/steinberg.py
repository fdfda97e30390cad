"""Elementary matrices, Steinberg relations and the certificate engine.

The engine proves assertions A[i,j]: some gamma in Gamma(v) has
varrho(gamma) = E_{i,j}(m) with m a nonzero integer.  Every proof is a
witness word in the named automorphisms; witnesses may refer to earlier
witnesses as ``$name``.  Nothing is taken on trust: every witness is
evaluated and its matrix compared with the claimed one before it enters
the table.
"""
from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from operator import mul
from typing import Callable, Iterable, Optional

from . import linalg
from .closed_forms import generator_forms, l_word
from .cyclotomic import CycloContext, CycloNum
from .homology import HomologyModel
from .mcg import AutoWord, Catalog, parse
from .representation import (
    InducedMap,
    RepMatrix,
    elementary as _elementary,
    in_gamma_alpha_induced,
    rho_from_induced,
    varrho_from_rho,
)
from .surface import GroupAuto, preserves_U


class CertificateError(RuntimeError):
    """A witness failed verification."""

    def __init__(self, msg: str, witness: str = ""):
        super().__init__(f"{msg}: {witness}" if witness else msg)
        self.witness = witness


class FormulaMismatch(CertificateError):
    pass


# ---------------------------------------------------------------------------
# elementary matrices and Steinberg relations


@dataclass(frozen=True)
class ElemSpec:
    i: int
    j: int
    z: CycloNum

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("E_{i,j} needs i != j")

    def matrix(self, n: int) -> list:
        return _elementary(self.z.ctx, n, self.i, self.j, self.z)

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "z": self.z.to_json()}


def elementary(ctx: CycloContext, n: int, i: int, j: int, z=1) -> list:
    return _elementary(ctx, n, i, j, z)


def mat_commutator(a: list, b: list) -> list:
    """a b a^-1 b^-1."""
    return linalg.matmul(linalg.matmul(a, b), linalg.matmul(linalg.inverse(a), linalg.inverse(b)))


def _random_cyclo(ctx: CycloContext, rng: random.Random) -> CycloNum:
    return ctx.from_coeffs([rng.randint(-3, 3) for _ in range(ctx.degree)])


class SteinbergChecker:
    """Checks the commutator identities on random samples before they are used."""

    def __init__(self, ctx: CycloContext, n: int, seed: int = 0, samples: int = 2):
        self.ctx, self.n = ctx, n
        self.rng = random.Random(seed)
        self.samples = samples
        self._done: dict[tuple, bool] = {}

    def chain(self, i: int, l: int, j: int) -> bool:
        """[E_il(x), E_lj(y)] = E_ij(xy) for pairwise distinct i, l, j."""
        key = ("chain", i, l, j)
        if key not in self._done:
            ok = len({i, l, j}) == 3
            for _ in range(self.samples if ok else 0):
                x, y = _random_cyclo(self.ctx, self.rng), _random_cyclo(self.ctx, self.rng)
                lhs = mat_commutator(self.E(i, l, x), self.E(l, j, y))
                ok = ok and linalg.mat_eq(lhs, self.E(i, j, x * y))
            self._done[key] = ok
        return self._done[key]

    def disjoint(self, i: int, j: int, p: int, q: int) -> bool:
        """E_ij(x) and E_pq(y) commute when j != p and q != i."""
        key = ("disjoint", i, j, p, q)
        if key not in self._done:
            ok = i != j and p != q and j != p and q != i
            for _ in range(self.samples if ok else 0):
                a = self.E(i, j, _random_cyclo(self.ctx, self.rng))
                b = self.E(p, q, _random_cyclo(self.ctx, self.rng))
                ok = ok and linalg.mat_eq(linalg.matmul(a, b), linalg.matmul(b, a))
            self._done[key] = ok
        return self._done[key]

    def additive(self, i: int, j: int) -> bool:
        key = ("add", i, j)
        if key not in self._done:
            x, y = _random_cyclo(self.ctx, self.rng), _random_cyclo(self.ctx, self.rng)
            self._done[key] = linalg.mat_eq(linalg.matmul(self.E(i, j, x), self.E(i, j, y)), self.E(i, j, x + y))
        return self._done[key]

    def E(self, i, j, z) -> list:
        return _elementary(self.ctx, self.n, i, j, z)


def steinberg_check(ctx: CycloContext, n: int, seed: int = 0, samples: int = 2) -> dict:
    """Check every chain, disjoint-commutation and additivity relation of size n."""
    chk = SteinbergChecker(ctx, n, seed, samples)
    idx = range(1, n + 1)
    failures = []
    count = 0
    for i in idx:
        for j in idx:
            if i == j:
                continue
            count += 1
            if not chk.additive(i, j):
                failures.append(("additive", i, j))
            for l in idx:
                if l in (i, j):
                    continue
                count += 1
                if not chk.chain(i, l, j):
                    failures.append(("chain", i, l, j))
    for i, j in ((a, b) for a in idx for b in idx if a != b):
        for p, q in ((a, b) for a in idx for b in idx if a != b):
            if j != p and q != i and (i, j) < (p, q):
                count += 1
                if not chk.disjoint(i, j, p, q):
                    failures.append(("disjoint", i, j, p, q))
    return {"n": n, "checked": count, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# replaying witness words


def _imatmul(a: list, b: list) -> list:
    bt = list(zip(*b))
    return [[sum(map(mul, row, col)) for col in bt] for row in a]


def _integral(m: list) -> list:
    return [[int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in row] for row in m]


class Evaluator:
    """Matrices on H_1 of automorphism words, by products of cached atom matrices.

    Functoriality of the induced action makes this equal to inducing the
    composed endomorphism; it keeps deep nested commutators cheap.
    """

    def __init__(self, model: HomologyModel, catalog: Optional[Catalog] = None):
        self.model = model
        self.catalog = catalog or Catalog(model.pres, max(model.k, 2))
        self.defs: dict[str, AutoWord] = {}
        self._cache: dict[tuple[str, int], tuple[list, GroupAuto]] = {}
        n = model.dimension
        self._one = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        self._id_chi = GroupAuto(model.h, model.k, (1 % model.h, 0), (0, 1 % model.k))

    def define(self, name: str, word: AutoWord) -> str:
        for n2, _ in word.factors:
            if n2.startswith("$") and n2[1:] not in self.defs:
                raise CertificateError(f"definition {name} uses undefined {n2}")
        if name in self.defs and self.defs[name] != word:
            raise CertificateError(f"{name} is already defined differently")
        self.defs[name] = word
        return "$" + name

    def _unit(self, name: str, sign: int) -> tuple[list, GroupAuto]:
        key = (name, sign)
        if key in self._cache:
            return self._cache[key]
        if name.startswith("$"):
            body = self.defs[name[1:]]
            val = self.value(body if sign > 0 else body.inverse())
        else:
            na = self.catalog[name]
            endo = na.endo if sign > 0 else na.inverse
            chi = preserves_U(self.model.spec, endo)
            if chi is None:
                raise CertificateError(f"{name} does not preserve U")
            val = (_integral(self.model.induced_matrix(endo)), chi)
        self._cache[key] = val
        return val

    def _power(self, name: str, e: int) -> tuple[list, GroupAuto]:
        base, chi = self._unit(name, 1 if e > 0 else -1)
        n = abs(e)
        out, out_chi = None, self._id_chi
        while n:
            if n & 1:
                out = base if out is None else _imatmul(out, base)
                out_chi = out_chi.compose(chi)
            n >>= 1
            if n:
                base = _imatmul(base, base)
                chi = chi.compose(chi)
        return out, out_chi

    def value(self, word: AutoWord) -> tuple[list, GroupAuto]:
        out, chi = self._one, self._id_chi
        for name, e in word.factors:
            m, c = self._power(name, e)
            out = m if out is self._one else _imatmul(out, m)
            chi = chi.compose(c)
        return out, chi

    def induced(self, word: AutoWord) -> InducedMap:
        m, chi = self.value(word)
        return InducedMap(self.model, m, chi)

    def varrho(self, word: AutoWord) -> RepMatrix:
        ind = self.induced(word)
        if not ind.is_equivariant():
            raise CertificateError("witness is not in Gamma(v)", str(word))
        return varrho_from_rho(self.model, rho_from_induced(ind, (0, 1)))

    def expand(self, word: AutoWord) -> AutoWord:
        """The word with every reference substituted (can be long)."""
        out: list = []
        for name, e in word.factors:
            if name.startswith("$"):
                body = self.expand(self.defs[name[1:]])
                out.extend((body if e > 0 else body.inverse()).factors * abs(e))
            else:
                out.append((name, e))
        return AutoWord(out)


def matrix_hash(m: RepMatrix) -> str:
    data = json.dumps([[x.to_json() for x in row] for row in m.entries], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(data.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# the assertion table


@dataclass
class Assertion:
    i: int
    j: int
    witness: Optional[AutoWord] = None
    m: int = 0
    status: str = "pending"
    rule: str = ""
    premises: tuple = ()
    depth: int = 0
    digest: str = ""

    @property
    def ref(self) -> str:
        return f"A_{self.i}_{self.j}"

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "status": self.status,
            "witness": str(self.witness) if self.witness is not None else None,
            "m": self.m,
            "rule": self.rule,
            "premises": list(self.premises),
            "replay_hash": self.digest,
        }


class CertificateTable:
    def __init__(self, model: HomologyModel, catalog: Optional[Catalog] = None, seed: int = 0):
        if model.h != model.k:
            raise ValueError("the certificate engine needs h = k")
        self.model = model
        self.r, self.k = model.r, model.k
        self.s = model.r - 1
        self.n = model.g - 1
        self.ctx = model.field
        self.ev = Evaluator(model, catalog)
        self.catalog = self.ev.catalog
        self.steinberg = SteinbergChecker(self.ctx, self.n, seed)
        self.entries = {(i, j): Assertion(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j}
        self.log: list[dict] = []
        self.galois: Optional[dict] = None
        self.rules_pending: list = []

    # -- bookkeeping
    def proven(self, i: int, j: int) -> bool:
        return (i, j) in self.entries and self.entries[(i, j)].proven

    def get(self, i: int, j: int) -> Assertion:
        return self.entries[(i, j)]

    def pending(self) -> list[tuple[int, int]]:
        return sorted(p for p, a in self.entries.items() if not a.proven)

    def closed(self) -> bool:
        return not self.pending()

    def expected(self, i: int, j: int, z) -> list:
        return _elementary(self.ctx, self.n, i, j, z)

    def prove(self, i: int, j: int, witness: AutoWord, m: int, rule: str, premises: Iterable[str] = ()) -> Assertion:
        premises = tuple(premises)
        for p in premises:
            a = self._by_ref(p)
            if a is not None and not a.proven:
                raise CertificateError(f"{rule} cites unproven {p}", str(witness))
        if m == 0 or int(m) != m:
            raise CertificateError(f"{rule} produced m={m}", str(witness))
        got = self.ev.varrho(witness)
        if not got == self.expected(i, j, m):
            raise CertificateError(f"{rule} witness for ({i},{j}) does not give E({m})", str(witness))
        a = self.entries[(i, j)]
        a.witness, a.m, a.status, a.rule, a.premises = witness, int(m), "proven", rule, premises
        a.depth = 1 + max((self._by_ref(p).depth for p in premises if self._by_ref(p) is not None), default=0)
        a.digest = matrix_hash(got)
        self.ev.define(a.ref, witness)
        self.log.append({"rule": rule, "proves": [i, j], "premises": list(premises), "m": int(m)})
        return a

    def _by_ref(self, ref: str) -> Optional[Assertion]:
        if ref.startswith("A_"):
            _, i, j = ref.split("_")
            return self.entries[(int(i), int(j))]
        return None

    def to_json(self) -> dict:
        return {
            "config": {"r": self.r, "h": self.model.h, "k": self.k},
            "definitions": [{"name": k, "word": str(v)} for k, v in self.ev.defs.items()],
            "assertions": [self.entries[p].to_json() for p in sorted(self.entries)],
            "pending": [list(p) for p in self.pending()],
            "pending_before_clearing": [list(p) for p in self.rules_pending],
            "galois_product": self.galois,
            "log": self.log,
        }


def verify_generator_forms(model: HomologyModel, ev: Evaluator) -> list[dict]:
    rows = []
    for e in generator_forms(model):
        got = ev.varrho(parse(e.word))
        ok = got == e.matrix
        row = {"name": e.name, "word": e.word, "ok": ok}
        if not ok:
            row["expected"] = str(RepMatrix((0, 1), e.matrix))
            row["got"] = str(got)
        rows.append(row)
    return rows


def seed_table(model: HomologyModel, catalog: Optional[Catalog] = None, seed: int = 0) -> CertificateTable:
    t = CertificateTable(model, catalog, seed)
    s = t.s
    report = verify_generator_forms(model, t.ev)
    bad = [r for r in report if not r["ok"]]
    if bad:
        diff = "\n".join(f"{r['name']}:\nexpected\n{r['expected']}\ngot\n{r['got']}" for r in bad)
        raise FormulaMismatch("generator formulas do not match\n" + diff)
    for i in range(1, s):
        t.prove(i, i + s, parse(f"R{i + 1}"), 1, "seed: R_{i+1}")
    for i in range(1, s + 1):
        t.prove(i + s, i, parse(f"S{i + 1}^-1"), 1, "seed: S_{i+1}")
    t.prove(s, s + 1, parse("[W, R2^-1]"), 2, "seed: [W, R2^-1]")
    return t


def L_element(model: HomologyModel, i: int, ev: Optional[Evaluator] = None) -> tuple[AutoWord, RepMatrix]:
    s = model.r - 1
    if not 1 <= i <= s - 1:
        raise ValueError(f"L_i needs 1 <= i <= {s - 1}")
    ev = ev or Evaluator(model)
    w = parse(l_word(i))
    return w, ev.varrho(w)


# ---------------------------------------------------------------------------
# closing the table


def _candidates(t: CertificateTable) -> dict[tuple[int, int], list[tuple]]:
    """All one-step derivations from the currently proven entries."""
    s, n = t.s, t.n
    P = t.proven
    out: dict[tuple[int, int], list] = {}

    def add(key, depth, order, rule, build):
        out.setdefault(key, []).append((depth, order, rule, build))

    def dep(*pairs):
        return 1 + max(t.get(*p).depth for p in pairs)

    # [E_{s,i}(m), L_i] = E_{s,i+1+s}(m)
    for i in range(1, s):
        if P(s, i) and not P(s, i + 1 + s):
            add((s, i + 1 + s), dep((s, i)), 1, "row s with L_i", lambda i=i: _rule_iv(t, i))
    # [L_i, E_{i+1+s,s+1}(m)] = E_{i,s+1}(m)
    for i in range(2, s):
        if P(i + 1 + s, s + 1) and not P(i, s + 1):
            add((i, s + 1), dep((i + 1 + s, s + 1)), 2, "L_i with column s+1", lambda i=i: _rule_v(t, i))
    # R_{s+1} together with A[s,2s] gives A[2s+1,2s]
    if P(s, 2 * s) and not P(2 * s + 1, 2 * s):
        add((2 * s + 1, 2 * s), dep((s, 2 * s)), 3, "R_{s+1}", lambda: _rule_last_row(t))
    # [E_il(a), E_lj(b)] = E_ij(ab)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or P(i, j):
                continue
            for l in range(1, n + 1):
                if l in (i, j) or not (P(i, l) and P(l, j)):
                    continue
                add((i, j), dep((i, l), (l, j)), 4, "commutator", lambda i=i, l=l, j=j: _rule_i(t, i, l, j))
    return out


def _rule_i(t: CertificateTable, i: int, l: int, j: int):
    if not t.steinberg.chain(i, l, j):
        raise CertificateError(f"Steinberg relation ({i},{l},{j}) failed")
    a, b = t.get(i, l), t.get(l, j)
    w = parse(f"[${a.ref}, ${b.ref}]")
    return t.prove(i, j, w, a.m * b.m, "commutator", (a.ref, b.ref))


def _rule_iv(t: CertificateTable, i: int):
    s = t.s
    a = t.get(s, i)
    w = parse(f"[${a.ref}, {l_word(i)}]")
    return t.prove(s, i + 1 + s, w, a.m, "row s with L_i", (a.ref,))


def _rule_v(t: CertificateTable, i: int):
    s = t.s
    a = t.get(i + 1 + s, s + 1)
    w = parse(f"[{l_word(i)}, ${a.ref}]")
    return t.prove(i, s + 1, w, a.m, "L_i with column s+1", (a.ref,))


def _rule_last_row(t: CertificateTable):
    # varrho(R_{s+1}^m) = E_{s,2s}(m) E_{2s+1,2s}(-m), and the two factors commute
    s = t.s
    a = t.get(s, 2 * s)
    if not t.steinberg.disjoint(s, 2 * s, 2 * s + 1, 2 * s):
        raise CertificateError("commutation check failed")
    w = parse(f"${a.ref}^-1 * R{s + 1}^{a.m}")
    return t.prove(2 * s + 1, 2 * s, w, -a.m, "R_{s+1}", (a.ref,))


def apply_rules(t: CertificateTable) -> CertificateTable:
    """Close under the rules; each pass uses only entries proven before it began."""
    while True:
        cands = _candidates(t)
        if not cands:
            return t
        for key in sorted(cands):
            if t.proven(*key):
                continue
            depth, order, rule, build = min(cands[key], key=lambda c: (c[0], c[1]))
            build()


# ---------------------------------------------------------------------------
# Galois conjugation through R_1 and S_1


def _label_step(name: str, e: int, lab: tuple[int, int], k: int) -> tuple[int, int]:
    # rho^lab(x^-1 g x) = rho^{step(lab)}(g)
    a, b = lab
    if name == "S1":
        return ((a + e * b) % k, b)
    return (a, (b - e * a) % k)


def galois_conjugator(k: int, l: int) -> AutoWord:
    """A word w in R1, S1 with rho^{0,1}(w^-1 g w) = rho^{0,l}(g), by breadth-first search."""
    target = (0, l % k)
    start = (0, 1 % k)
    seen = {start: AutoWord()}
    queue = deque([start])
    moves = [("S1", 1), ("S1", -1), ("R1", 1), ("R1", -1)]
    while queue:
        lab = queue.popleft()
        if lab == target:
            return seen[lab]
        for name, e in moves:
            nxt = _label_step(name, e, lab, k)
            if nxt not in seen:
                seen[nxt] = AutoWord([(name, e)]) * seen[lab]
                queue.append(nxt)
    raise ValueError(f"no conjugator for l={l}")


def galois_conjugate(w: AutoWord, k: int, l: int) -> AutoWord:
    c = galois_conjugator(k, l)
    if not c.factors:
        return w
    return c.inverse() * w * c


def _units(k: int) -> list[int]:
    return [l for l in range(1, k + 1) if gcd(l, k) == 1] if k > 1 else [1]


def galois_product_step(t: CertificateTable) -> dict:
    """Product of the Galois conjugates of varrho([W, Y]); derives A[s, 2s+1]."""
    s, n, k = t.s, t.n, t.k
    base = parse("[W, Y]")
    base_m = t.ev.varrho(base)
    factors = []
    for l in _units(k):
        w = galois_conjugate(base, k, l)
        got = t.ev.varrho(w)
        if not got == base_m.galois(l):
            raise CertificateError(f"conjugate for l={l} is not the Galois image", str(w))
        factors.append(w)
    word = AutoWord([f for w in factors for f in w.factors])
    ref = t.ev.define("G", word)
    M = t.ev.varrho(parse(ref)).entries
    report = {"word": str(word), "matrix": [[x.to_json() for x in row] for row in M]}
    # expected shape: identity except row s = (lam..lam, 1, 0..0, mu, nu)
    shape_ok = all(M[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n) if i != s - 1)
    row = M[s - 1]
    ints = all(x.is_rational() and x.to_fraction().denominator == 1 for x in row)
    lam_vals = {row[j] for j in range(s - 1)}
    shape_ok = shape_ok and row[s - 1] == 1 and all(row[j] == 0 for j in range(s, 2 * s - 1)) and len(lam_vals) <= 1
    lam = int(row[0].to_fraction()) if s > 1 and ints else 0
    mu = int(row[2 * s - 1].to_fraction()) if ints else None
    nu = int(row[2 * s].to_fraction()) if ints else None
    report.update({"lambda": lam, "mu": mu, "nu": nu, "shape_ok": shape_ok, "integral": ints})
    t.galois = report
    if not (shape_ok and ints):
        raise CertificateError("Galois product does not have the bordered integral shape", str(word))
    if nu == 0:
        raise CertificateError("Galois product has nu = 0", str(word))
    if t.proven(s, 2 * s + 1):
        return report
    # clear the lambda and mu entries with proven row-s witnesses
    needed = [(j, lam) for j in range(1, s) if lam] + ([(2 * s, mu)] if mu else [])
    for j, _ in needed:
        if not t.proven(s, j):
            report["blocked_by"] = [s, j]
            return report
    L = 1
    for j, _ in needed:
        mj = abs(t.get(s, j).m)
        L = L * mj // gcd(L, mj)
    parts = [f"{ref}^{L}"]
    prem = []
    for j, c in needed:
        a = t.get(s, j)
        e = -(c * L) // a.m
        parts.append(f"${a.ref}^{e}")
        prem.append(a.ref)
    t.prove(s, 2 * s + 1, parse(" * ".join(parts)), nu * L, "galois product", prem)
    return report


def clearing_candidates(t: CertificateTable) -> list[str]:
    """Gamma(v) words tried by the clearing rule, in a fixed order."""
    words = [f"T{i}" for i in range(2, t.r)]
    words += [l_word(i) for i in range(1, t.s)]
    return words


def apply_clearing(t: CertificateTable) -> bool:
    """One step of the clearing rule; True if it proved something.

    If varrho(g) = I + U with integral U, the rows of U disjoint from its
    columns, and every position of U but one already proven, then g^M times
    suitable powers of the proven witnesses is elementary at the last position.
    Used only for entries the commutator rules cannot reach.
    """
    for text in clearing_candidates(t):
        word = parse(text)
        M = t.ev.varrho(word).entries
        n = t.n
        U = {(i + 1, j + 1): M[i][j] - (1 if i == j else 0) for i in range(n) for j in range(n)}
        U = {p: x for p, x in U.items() if x}
        if not U or not all(x.is_rational() and x.to_fraction().denominator == 1 for x in U.values()):
            continue
        rows = {p[0] for p in U}
        cols = {p[1] for p in U}
        if rows & cols:
            continue
        open_ = [p for p in U if not t.proven(*p)]
        if len(open_) != 1:
            continue
        target = open_[0]
        coeff = {p: int(x.to_fraction()) for p, x in U.items()}
        done = sorted(p for p in U if p != target)
        for a in done:
            for b in done:
                if a < b and not t.steinberg.disjoint(*a, *b):
                    raise CertificateError("commutation check failed")
        L = 1
        for p in done:
            m = abs(t.get(*p).m)
            q = m // gcd(m, abs(coeff[p]))
            L = L * q // gcd(L, q)
        name = t.ev.define(f"K_{target[0]}_{target[1]}", word)
        parts = [f"{name}^{L}" if L != 1 else name]
        prem = []
        for p in done:
            a = t.get(*p)
            parts.append(f"${a.ref}^{-(coeff[p] * L) // a.m}")
            prem.append(a.ref)
        t.prove(*target, parse(" * ".join(parts)), coeff[target] * L, f"clearing via {text}", prem)
        return True
    return False


def close_table(model: HomologyModel, catalog: Optional[Catalog] = None, seed: int = 0) -> CertificateTable:
    """Commutator rules and the Galois step first; clearing only for what they leave open."""
    t = seed_table(model, catalog, seed)
    apply_rules(t)
    try:
        galois_product_step(t)
    except CertificateError as exc:
        t.log.append({"rule": "galois product", "error": str(exc)})
    apply_rules(t)
    t.rules_pending = t.pending()
    while not t.closed() and apply_clearing(t):
        apply_rules(t)
        if not t.proven(t.s, 2 * t.s + 1) and t.galois and "blocked_by" in t.galois:
            galois_product_step(t)
            apply_rules(t)
    return t


# ---------------------------------------------------------------------------
# Gamma^0 elements


@dataclass
class Entry:
    i: int
    j: int
    ell: int  # zeta exponent mod k
    coeff: int
    ref: str
    depth: int
    gamma0: bool

    def value(self, ctx: CycloContext, k: int) -> CycloNum:
        return self.coeff * ctx.zeta(k) ** self.ell


@dataclass
class Concentration:
    n: int
    m_zeta: dict  # (i,j) -> coefficient of zeta in delta_ij
    witnesses: list = field(default_factory=list)  # dicts

    def to_json(self) -> dict:
        ok = self.n != 0 and all(w.get("ok", False) for w in self.witnesses)
        return {"n": self.n, "ok": ok, "witnesses": self.witnesses}


def _closure(t: CertificateTable, pool: dict, want: Callable[[tuple], bool], keyf, tag: str, gamma0_only: bool):
    """Add commutators [x, y] of pool entries with value E_ij(ab) until ``want`` holds for all keys.

    ``pool`` maps keys to Entry; only commutators with at least one Gamma^0
    factor are formed when gamma0_only is set.
    """
    k = t.k
    while True:
        todo = [key for key in want() if key not in pool]
        if not todo:
            return
        by_pos: dict[tuple[int, int], list[Entry]] = {}
        for e in pool.values():
            by_pos.setdefault((e.i, e.j), []).append(e)
        found: dict[tuple, tuple] = {}
        for (i, l), left in sorted(by_pos.items()):
            for (l2, j), right in sorted(by_pos.items()):
                if l2 != l or j == i:
                    continue
                for x in left:
                    for y in right:
                        if gamma0_only and not (x.gamma0 or y.gamma0):
                            continue
                        key = keyf(i, j, (x.ell + y.ell) % k)
                        if key in pool:
                            continue
                        cand = (max(x.depth, y.depth) + 1, x.ref, y.ref)
                        if key not in found or cand < found[key][0]:
                            found[key] = (cand, x, y)
        if not found:
            raise CertificateError(f"{tag} closure is stuck; missing {todo[:5]}")
        for key in sorted(found):
            (_, _, _), x, y = found[key]
            i, j = x.i, y.j
            if not t.steinberg.chain(i, x.j, j):
                raise CertificateError(f"Steinberg relation ({i},{x.j},{j}) failed")
            ell = (x.ell + y.ell) % k
            name = f"{tag}_{i}_{j}_{ell}"
            ref = t.ev.define(name, parse(f"[{x.ref}, {y.ref}]"))
            e = Entry(i, j, ell, x.coeff * y.coeff, ref, max(x.depth, y.depth) + 1, x.gamma0 or y.gamma0)
            got = t.ev.varrho(parse(ref))
            if not got == t.expected(i, j, e.value(t.ctx, k)):
                raise CertificateError(f"{tag} commutator for ({i},{j}) has the wrong value", ref)
            pool[key] = e


def concentrate(t: CertificateTable, verify: bool = True) -> Concentration:
    """Gamma^0 witnesses for E_ij(n zeta^l), all i != j and l mod k, with one n."""
    if not t.closed():
        raise CertificateError(f"table is not closed; pending {t.pending()}")
    s, n, k, r = t.s, t.n, t.k, t.r
    ctx = t.ctx
    zeta = ctx.zeta(k)
    # X with varrho(X) = E_{s,s+1}(2 zeta), from [R2, W^-1] and conjugation realizing l = -1
    x0 = parse("[R2, W^-1]")
    if not t.ev.varrho(x0) == t.expected(s, s + 1, 2 * zeta.galois(-1)):
        raise CertificateError("[R2, W^-1] does not give E_{s,s+1}(2 zeta^-1)", str(x0))
    X = t.ev.define("X", galois_conjugate(x0, k, -1))
    if not t.ev.varrho(parse(X)) == t.expected(s, s + 1, 2 * zeta):
        raise CertificateError("Galois conjugate of [R2, W^-1] is wrong", X)

    # integer entries from the table, zeta entries by commutators with X
    base = {}
    for (i, j), a in sorted(t.entries.items()):
        base[(i, j, 0)] = Entry(i, j, 0, a.m, "$" + a.ref, 0, False)
    base[(s, s + 1, 1)] = Entry(s, s + 1, 1, 2, X, 1, False)

    def want_delta():
        return [(i, j, 1) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]

    pool = dict(base)
    _closure(t, pool, want_delta, lambda i, j, ell: (i, j, ell), "D", False)
    delta = {(i, j): pool[(i, j, 1)] for i in range(1, n + 1) for j in range(1, n + 1) if i != j}

    # [delta_{j,1}, V] lies in Gamma^0 with varrho = E_{j,r}(k m zeta)
    g0: dict[tuple, Entry] = {}
    for j in range(2, n + 1):
        if j == r:
            continue
        d = delta[(j, 1)]
        ref = t.ev.define(f"Z_{j}_{r}_1", parse(f"[{d.ref}, V]"))
        e = Entry(j, r, 1, k * d.coeff, ref, d.depth + 1, True)
        if not t.ev.varrho(parse(ref)) == t.expected(j, r, e.value(ctx, k)):
            raise CertificateError(f"[delta_{j},1, V] has the wrong value", ref)
        g0[(j, r, 1, True)] = e

    def want_g0():
        return [(i, j, l, True) for i in range(1, n + 1) for j in range(1, n + 1) if i != j for l in range(k)]

    # Gamma(v) factors: integer table entries and zeta entries
    pool = {(e.i, e.j, e.ell, False): e for e in list(base.values()) + list(delta.values())}
    pool.update(g0)
    _closure(t, pool, want_g0, lambda i, j, ell: (i, j, ell, True), "Z", True)

    finals = {key: pool[key] for key in want_g0()}
    N = 1
    for e in finals.values():
        c = abs(e.coeff)
        N = N * c // gcd(N, c)
    out = Concentration(N, {key: e.coeff for key, e in delta.items()})
    for (i, j, ell, _), e in sorted(finals.items()):
        p = N // e.coeff
        word = parse(e.ref if p == 1 else f"{e.ref}^{p}")
        row = {"i": i, "j": j, "l": ell, "witness": str(word), "value": (N * zeta ** ell).to_json()}
        if verify:
            row.update(verify_gamma0_witness(t, word, i, j, N * zeta ** ell))
            if not row["ok"]:
                raise CertificateError(f"Gamma^0 witness for ({i},{j},{ell}) failed verification", str(word))
        out.witnesses.append(row)
    return out


def verify_gamma0_witness(t: CertificateTable, word: AutoWord, i: int, j: int, z: CycloNum) -> dict:
    ind = t.ev.induced(word)
    got = varrho_from_rho(t.model, rho_from_induced(ind, (0, 1)))
    value_ok = got == t.expected(i, j, z)
    g0 = in_gamma_alpha_induced(ind, 0)
    return {"value_ok": value_ok, "gamma0": g0, "ok": value_ok and g0, "replay_hash": matrix_hash(got)}


# ---------------------------------------------------------------------------
# full run and replay


def certify(model: HomologyModel, seed: int = 0, verify: bool = True) -> dict:
    """Seed, close, run the Galois step, close again and concentrate when possible."""
    t = close_table(model, seed=seed)
    out = t.to_json()
    if t.closed():
        conc = concentrate(t, verify=verify)
        out["concentrate"] = conc.to_json()
        out["definitions"] = [{"name": k, "word": str(v)} for k, v in t.ev.defs.items()]
    else:
        out["concentrate"] = None
    out["closed"] = t.closed()
    return out


def replay(data: dict) -> dict:
    """Re-verify a certificate document from scratch."""
    from .homology import standard_model

    cfg = data["config"]
    model = standard_model(cfg["r"], cfg["h"], cfg["k"])
    ev = Evaluator(model)
    for d in data["definitions"]:
        ev.define(d["name"], parse(d["word"]))
    n = model.g - 1
    ctx = model.field
    results = []
    for a in data["assertions"]:
        if a["status"] != "proven":
            continue
        got = ev.varrho(parse(a["witness"]))
        ok = got == _elementary(ctx, n, a["i"], a["j"], a["m"]) and matrix_hash(got) == a["replay_hash"]
        results.append({"name": f"A[{a['i']},{a['j']}]", "ok": ok})
    shell = _ReplayTable(model, ev)
    conc = data.get("concentrate") or {}
    for w in conc.get("witnesses", []):
        z = CycloNum.from_json(w["value"])
        rep = verify_gamma0_witness(shell, parse(w["witness"]), w["i"], w["j"], z)
        ok = rep["ok"] and rep["replay_hash"] == w.get("replay_hash", rep["replay_hash"])
        results.append({"name": f"Gamma0 E[{w['i']},{w['j']}](n z^{w['l']})", "ok": ok})
    return {"checked": len(results), "failures": [r["name"] for r in results if not r["ok"]], "ok": all(r["ok"] for r in results)}


class _ReplayTable:
    def __init__(self, model, ev):
        self.model, self.ev = model, ev
        self.ctx, self.n = model.field, model.g - 1

    def expected(self, i, j, z):
        return _elementary(self.ctx, self.n, i, j, z)
