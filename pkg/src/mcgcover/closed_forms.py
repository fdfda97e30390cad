"""Expected varrho matrices of the catalog generators and of a few composites.

Indices are 1-based, ``s = r - 1`` and matrices have size ``n = 2s + 1 = g - 1``.
Each entry pairs an automorphism word with the matrix it should map to.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .cyclotomic import CycloContext, CycloNum
from .homology import HomologyModel
from .representation import diagonal_sign, elementary, mat_product


@dataclass
class Expectation:
    name: str  # short family tag, e.g. "R_{i+1}, i=2"
    word: str  # AutoWord text
    matrix: list


def _E(ctx: CycloContext, n: int):
    def E(i, j, z=1):
        return elementary(ctx, n, i, j, z)

    def Einv(i, j, z=1):
        return elementary(ctx, n, i, j, -(z if isinstance(z, CycloNum) else ctx(z)))

    return E, Einv


def z_value(ctx: CycloContext, k: int) -> CycloNum:
    """z = 2k / (1 - zeta) with zeta of order k."""
    zeta = ctx.zeta(k)
    return ctx(2 * k) / (1 - zeta)


def z_value_series(ctx: CycloContext, k: int) -> CycloNum:
    """z = -2 (1 + 2 zeta + ... + k zeta^(k-1))."""
    zeta = ctx.zeta(k)
    acc = ctx.zero()
    for j in range(k):
        acc = acc + (j + 1) * zeta ** j
    return -2 * acc


def generator_forms(model: HomologyModel) -> list[Expectation]:
    """R_{i+1}, R_{s+1}, S_{i+1}, T_{i+1}, T_s and Y."""
    ctx, r = model.field, model.r
    s, n = r - 1, model.g - 1
    E, Einv = _E(ctx, n)
    out = []
    for i in range(1, s):
        out.append(Expectation(f"R_{{i+1}}, i={i}", f"R{i + 1}", E(i, i + s)))
    out.append(Expectation("R_{s+1}", f"R{s + 1}", mat_product(ctx, n, [E(s, 2 * s), Einv(2 * s + 1, 2 * s)])))
    for i in range(1, s + 1):
        out.append(Expectation(f"S_{{i+1}}, i={i}", f"S{i + 1}", Einv(i + s, i)))
    for i in range(1, s - 1):
        m = mat_product(ctx, n, [E(i, i + s), E(i + 1, i + 1 + s), Einv(i, i + 1 + s), Einv(i + 1, i + s)])
        out.append(Expectation(f"T_{{i+1}}, i={i}", f"T{i + 1}", m))
    if r >= 3:
        m = mat_product(
            ctx,
            n,
            [
                E(s - 1, 2 * s - 1),
                E(s, 2 * s),
                Einv(s - 1, 2 * s),
                Einv(s, 2 * s - 1),
                E(2 * s + 1, 2 * s - 1),
                Einv(2 * s + 1, 2 * s),
            ],
        )
        out.append(Expectation("T_s", f"T{s}", m))
    out.append(Expectation("Y", "Y", diagonal_sign(ctx, n, s)))
    return out


def v_form(model: HomologyModel) -> Expectation:
    ctx, r, k = model.field, model.r, model.k
    n = model.g - 1
    E, _ = _E(ctx, n)
    return Expectation("V", "V", mat_product(ctx, n, [E(1, r, k), E(n, r, z_value(ctx, k))]))


def w_form(model: HomologyModel) -> Expectation:
    """Identity except row s: (-2, ..., -2, -zeta | 0, ..., 0, 1+zeta | 1-zeta)."""
    ctx = model.field
    s, n = model.r - 1, model.g - 1
    zeta = model.zeta
    m = linalg.identity(n, ctx.one(), ctx.zero())
    row = m[s - 1]
    for j in range(1, s):
        row[j - 1] = ctx(-2)
    row[s - 1] = -zeta
    row[2 * s - 1] = 1 + zeta
    row[2 * s] = 1 - zeta
    return Expectation("W", "W", m)


def l_forms(model: HomologyModel) -> list[Expectation]:
    """L_i = varrho(T_{i+1}^-1 R_{i+1} R_{i+2}), 1 <= i <= s-1."""
    ctx = model.field
    s, n = model.r - 1, model.g - 1
    E, Einv = _E(ctx, n)
    out = []
    for i in range(1, s):
        word = l_word(i)
        if i <= s - 2:
            m = mat_product(ctx, n, [E(i, i + 1 + s), E(i + 1, i + s)])
        else:
            m = mat_product(ctx, n, [E(s - 1, 2 * s), E(s, 2 * s - 1), Einv(2 * s + 1, 2 * s - 1)])
        out.append(Expectation(f"L_i, i={i}", word, m))
    return out


def l_word(i: int) -> str:
    return f"T{i + 1}^-1 * R{i + 1} * R{i + 2}"


def commutator_forms(model: HomologyModel) -> list[Expectation]:
    ctx = model.field
    s, n = model.r - 1, model.g - 1
    zbar = model.zeta.galois(-1)
    return [
        Expectation("[W, R2^-1]", "[W, R2^-1]", elementary(ctx, n, s, s + 1, 2)),
        Expectation("[R2, W^-1]", "[R2, W^-1]", elementary(ctx, n, s, s + 1, 2 * zbar)),
    ]


def all_forms(model: HomologyModel) -> list[Expectation]:
    return generator_forms(model) + [v_form(model), w_form(model)] + l_forms(model) + commutator_forms(model)
