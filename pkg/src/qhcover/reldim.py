"""Relative dominant and codominant dimension with respect to a module.

Two independent algorithms are provided and cross-checked in the tests:

* the default method computes B = End(Q)^op, the evaluation map
  Q tensor_B Hom(Q, M) -> M and a ladder of Tor groups over B
  (cohomological characterization);
* the chain method iterates surjective right add(Q)-approximations on
  successive kernels and reports the witness chain.

Infinity is only claimed when the minimal resolution over B terminates;
otherwise the result is capped as AtLeast(cap).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .algebra import Algebra, opposite
from .homology import DimValue, minimal_projective_resolution, tor_dim
from .linalg import Mat
from .modules import (
    Module,
    ModuleMap,
    counit_analysis,
    direct_sum,
    dual,
    dual_map,
    hom_space,
    is_isomorphic,
    regular_module,
    zero_module,
)

__all__ = [
    "DimValue",
    "ApproximationChain",
    "RelDimReport",
    "right_add_approximation",
    "left_add_approximation",
    "relative_codomdim",
    "relative_domdim",
    "codomdim_chain",
    "domdim_chain",
    "find_projective_injectives",
    "classical_domdim",
    "classical_domdim_of_module",
    "classical_codomdim_of_module",
    "reduced_cograde",
]


@dataclass
class ApproximationChain:
    """Witness chain of approximation steps on successive kernels."""

    base: Module
    steps: list[ModuleMap] = dc_field(default_factory=list)
    surjective_flags: list[bool] = dc_field(default_factory=list)

    def to_json(self, with_matrices: bool = True) -> dict:
        steps = []
        for f, s in zip(self.steps, self.surjective_flags):
            entry = {"source_dim": f.source.dim, "target_dim": f.target.dim, "surjective": s}
            if with_matrices:
                field = f.matrix.field
                entry["matrix"] = [[field.to_str(f.matrix[i, j]) for j in range(f.matrix.cols)] for i in range(f.matrix.rows)]
            steps.append(entry)
        return {"steps": steps}


@dataclass
class RelDimReport:
    value: DimValue
    method: str
    b_dim: Optional[int] = None
    tor_dims: list[int] = dc_field(default_factory=list)
    witness: Optional[ApproximationChain] = None

    def to_json(self) -> dict:
        out = {"value": self.value.to_json(), "method": self.method}
        if self.b_dim is not None:
            out["B_dim"] = self.b_dim
        if self.tor_dims:
            out["tor_dims"] = self.tor_dims
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def right_add_approximation(q: Module, m: Module) -> ModuleMap:
    """Evaluation map q^h -> m assembled from a Hom basis (h = dim Hom(q, m)).

    Any map from add(q) factors through it, so it is a right add(q)-
    approximation; surjectivity is what the chain method branches on.
    """
    hs = hom_space(q, m)
    if hs.dim == 0:
        z = zero_module(m.algebra)
        return ModuleMap(z, m, Mat.zeros(m.algebra.field, m.dim, 0))
    if hs.dim == 1:
        return hs.maps[0]
    source, _, _ = direct_sum([q] * hs.dim)
    matrix = Mat.hstack([f.matrix for f in hs.maps])
    return ModuleMap(source, m, matrix)


def left_add_approximation(q: Module, m: Module) -> ModuleMap:
    """Dual of the right approximation of the duals; kernel 0 iff injective."""
    rap = right_add_approximation(dual(q), dual(m))
    if rap.source.dim == 0:
        z = zero_module(m.algebra)
        return ModuleMap(m, z, Mat.zeros(m.algebra.field, 0, m.dim))
    return dual_map(rap)


def _indec_summand_list(q: Module) -> list[Module]:
    cached = getattr(q, "_indec_parts", None)
    if cached is None:
        from .modules import indecomposable_summands

        cached = [s for s, _, _ in indecomposable_summands(q)]
        q._indec_parts = cached
    return cached


def _split_off_add_q(m: Module, q: Module) -> Module:
    """Complement of the add(q)-part in a decomposition of m.

    Kernels of canonical approximations carry split add(q) summands; by the
    direct-sum rule those contribute value infinity, so dropping them keeps
    the computed value and lets the chain terminate.
    """
    from .modules import indecomposable_summands

    if m.dim == 0:
        return m
    q_parts = _indec_summand_list(q)
    keep = []
    for s, _, _ in indecomposable_summands(m):
        if not any(s.dim == t.dim and is_isomorphic(s, t) is not None for t in q_parts):
            keep.append(s)
    if not keep:
        return zero_module(m.algebra)
    if len(keep) == 1:
        return keep[0]
    return direct_sum(keep)[0]


def codomdim_chain(q: Module, m: Module, cap: int) -> tuple[DimValue, ApproximationChain]:
    """Chain oracle: iterate right approximations on successive kernels.

    After each surjective step the split add(q)-part of the kernel is
    dropped (it has infinite value, and value of a direct sum is the min).
    """
    chain = ApproximationChain(base=m)
    current = _split_off_add_q(m, q)
    for step in range(cap):
        if current.dim == 0:
            return DimValue.infinite(), chain
        f = right_add_approximation(q, current)
        surj = f.is_surjective()
        chain.steps.append(f)
        chain.surjective_flags.append(surj)
        if not surj:
            return DimValue.exact(step), chain
        ker, _ = f.kernel_submodule()
        current = _split_off_add_q(ker, q)
    return DimValue.at_least(cap), chain


def domdim_chain(q: Module, m: Module, cap: int) -> tuple[DimValue, ApproximationChain]:
    """Chain oracle on the dual side."""
    return codomdim_chain(dual(q), dual(m), cap)


def relative_codomdim(q: Module, m: Module, cap: int = 20) -> RelDimReport:
    """Codominant dimension of m with respect to q (cohomological method).

    Value 0: no surjective right approximation (evaluation not surjective).
    Value 1: evaluation surjective but not bijective.  Value >= 2: 1 plus
    the first degree with nonvanishing Tor^B(q, Hom(q, m)); infinite when
    the minimal resolution of Hom(q, m) over B terminates with all the Tor
    groups zero.
    """
    if cap < 2:
        raise ValueError("relative dimension cap must be at least 2")
    if m.dim == 0:
        return RelDimReport(DimValue.infinite(), "mueller", b_dim=None)
    cd = counit_analysis(q, m)
    b_dim = cd.b.dim
    if not cd.surjective:
        return RelDimReport(DimValue.exact(0), "mueller", b_dim=b_dim)
    if not cd.bijective:
        return RelDimReport(DimValue.exact(1), "mueller", b_dim=b_dim)
    from .modules import end_algebra_with_bimodule

    x = end_algebra_with_bimodule(q)[1].right  # q as module over opposite(B)
    h = cd.hom_module
    tor_dims: list[int] = []
    i = 1
    while True:
        res = minimal_projective_resolution(h, min(i + 1, cap))
        if res.terminated and i > res.length():
            return RelDimReport(DimValue.infinite(), "mueller", b_dim=b_dim, tor_dims=tor_dims)
        if not res.terminated and i > cap - 2:
            return RelDimReport(DimValue.at_least(cap), "mueller", b_dim=b_dim, tor_dims=tor_dims)
        t = tor_dim(x, h, i, cap=max(cap, i + 1))
        tor_dims.append(t)
        if t != 0:
            return RelDimReport(DimValue.exact(i + 1), "mueller", b_dim=b_dim, tor_dims=tor_dims)
        i += 1


def relative_domdim(q: Module, m: Module, cap: int = 20) -> RelDimReport:
    """Dominant dimension via duality: Q-domdim M = DQ-codomdim DM over A^op."""
    report = relative_codomdim(dual(q), dual(m), cap)
    return RelDimReport(report.value, "mueller-dual", b_dim=report.b_dim, tor_dims=report.tor_dims)


def find_projective_injectives(a: Algebra) -> Module:
    """Multiplicity-free direct sum of the projective-injective indecomposables."""
    from .modules import _indec_projective

    prim = a.primitive_idempotents()
    aop = opposite(a)
    injectives = []
    for ci in range(aop.primitive_idempotents().n_blocks):
        pop = _indec_projective(aop, ci)[0]
        injectives.append(dual(pop))
    keep = []
    for ci in range(prim.n_blocks):
        p = _indec_projective(a, ci)[0]
        if any(p.dim == i.dim and is_isomorphic(p, i) is not None for i in injectives):
            keep.append(p)
    if not keep:
        return zero_module(a)
    if len(keep) == 1:
        return keep[0]
    return direct_sum(keep, name="proj-inj")[0]


def classical_domdim(a: Algebra, cap: int = 20) -> tuple[RelDimReport, Module]:
    """Dominant dimension of the algebra: relative to its projective-injective part."""
    p = find_projective_injectives(a)
    if p.dim == 0:
        return RelDimReport(DimValue.exact(0), "mueller-dual", b_dim=0), p
    return relative_domdim(p, regular_module(a), cap), p


def classical_domdim_of_module(a: Algebra, m: Module, cap: int = 20) -> RelDimReport:
    p = find_projective_injectives(a)
    if p.dim == 0:
        return RelDimReport(DimValue.exact(0), "mueller-dual", b_dim=0)
    return relative_domdim(p, m, cap)


def classical_codomdim_of_module(a: Algebra, m: Module, cap: int = 20) -> RelDimReport:
    p = find_projective_injectives(a)
    if p.dim == 0:
        return RelDimReport(DimValue.exact(0), "mueller", b_dim=0)
    return relative_codomdim(p, m, cap)


def reduced_cograde(x: Module, m: Module, cap: int = 20) -> DimValue:
    """First positive degree with Tor_i^A(x, m) != 0.

    ``x`` is a right A-module encoded over opposite(A); ``m`` is a left
    A-module.  Infinite when the resolution of m terminates with all Tor
    vanishing; AtLeast(cap) when the ladder is exhausted.
    """
    if cap < 1:
        raise ValueError("cograde cap must be at least 1")
    i = 1
    while True:
        res = minimal_projective_resolution(m, min(i + 1, cap))
        if res.terminated and i > res.length():
            return DimValue.infinite()
        if not res.terminated and i > cap - 1:
            return DimValue.at_least(cap)
        t = tor_dim(x, m, i, cap=max(cap, i + 1))
        if t != 0:
            return DimValue.exact(i)
        i += 1


def cograde_cross_check(q: Module, y: Module, cap: int = 8):
    """Both sides of the reduced-cograde reformulation of Q-domdim.

    Builds an add(q)-presentation Q1 -> Q0 -> y -> 0 from two chain steps
    (requires them to be surjective), forms X = coker Hom(f, q) as a right
    End(q)^op-module, and returns (Q-domdim y, cograde_{DQ} X).  The theorem
    asserts domdim >= n iff cograde >= n + 1.
    """
    from .modules import (
        ModuleMap,
        end_algebra_with_bimodule,
        hom_into_q_as_right_module,
        induced_map_on_hom_into_q,
        quotient_module,
    )
    from .linalg import Subspace

    f1 = right_add_approximation(q, y)
    if not f1.is_surjective():
        return None
    k, kincl = f1.kernel_submodule()
    if k.dim == 0:
        q1 = zero_module(y.algebra)
        f = ModuleMap(q1, f1.source, Mat.zeros(y.algebra.field, f1.source.dim, 0))
    else:
        f2 = right_add_approximation(q, k)
        if not f2.is_surjective():
            return None
        f = ModuleMap(f2.source, f1.source, kincl.matrix @ f2.matrix)
    hom_q0 = hom_into_q_as_right_module(q, f1.source)
    hom_q1 = hom_into_q_as_right_module(q, f.source)
    induced = induced_map_on_hom_into_q(q, f, hom_q0, hom_q1)
    x_total = hom_q1[0]
    span = Subspace.from_columns(induced)
    xmod, _ = quotient_module(x_total, span)
    b, bim, _ = end_algebra_with_bimodule(q)
    dq = dual(bim.right)  # DQ as a left B-module
    domdim = relative_domdim(q, y, cap).value
    cograde = reduced_cograde(xmod, dq, cap + 1)
    return domdim, cograde
