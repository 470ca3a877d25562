"""Finite-dimensional left modules as tuples of action matrices.

Right modules are uniformly encoded as left modules over the opposite
algebra; the standard duality D sends a left module to the left module over
the opposite algebra acting by transposed matrices.

Hom spaces are computed through projective presentations rather than one
big intertwining solve: Hom(A e, N) is the slice e N, so Hom(M, N) is the
kernel of the induced map between slice spaces of a presentation
P1 -> P0 -> M -> 0.  This keeps the Schur-algebra instances (dimension 165)
inside small eliminations.  A naive intertwiner solve is kept as an
independent oracle for the tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

import os

from .algebra import Algebra, opposite
from .fields import PrimeField
from .linalg import Mat, Subspace

_DEBUG_VALIDATE = bool(os.environ.get("QHCOVER_DEBUG"))


class ModuleError(ValueError):
    """Raised on malformed modules or maps."""


class Module:
    """Left module over an Algebra: one action matrix per basis element."""

    def __init__(self, algebra: Algebra, action: list[Mat], name: str = "", validate: bool = False):
        self.algebra = algebra
        self.action = action
        self.dim = action[0].rows if action else 0
        self.name = name
        self._stack: Optional[np.ndarray] = None
        self._presentation = None
        self._dual: Optional[Module] = None
        if len(action) != algebra.dim:
            raise ModuleError("need one action matrix per algebra basis element")
        for m in action:
            if m.rows != self.dim or m.cols != self.dim:
                raise ModuleError("action matrices must be square of the module dimension")
        if validate:
            self.validate()

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"Module(dim={self.dim}{tag})"

    def stack(self) -> np.ndarray:
        if self._stack is None:
            self._stack = np.stack([m.data for m in self.action])
        return self._stack

    def act(self, x: Mat) -> Mat:
        """Action matrix of an algebra element (column vector of coords)."""
        f = self.algebra.field
        if isinstance(f, PrimeField):
            out = np.tensordot(x.data[:, 0], self.stack(), axes=(0, 0)) % f.p
            return Mat(f, out, copy=False)
        acc = Mat.zeros(f, self.dim, self.dim)
        for i in range(self.algebra.dim):
            xi = x[i, 0]
            if xi != 0:
                acc = acc + self.action[i].scale(xi)
        return acc

    def act_many(self, xs: Mat) -> list[Mat]:
        """Action matrices for several elements (columns of xs)."""
        f = self.algebra.field
        if isinstance(f, PrimeField) and xs.cols:
            out = np.einsum("ac,aij->cij", xs.data, self.stack(), optimize=True) % f.p
            return [Mat(f, out[c], copy=False) for c in range(xs.cols)]
        return [self.act(xs.take_cols([c])) for c in range(xs.cols)]

    def validate(self) -> None:
        """Representation axioms, checked on a generating set."""
        a = self.algebra
        ident = Mat.identity(a.field, self.dim)
        if self.act(a.one) != ident:
            raise ModuleError("unit does not act as identity")
        gens = a.generator_elements()
        for x in gens:
            for y in gens:
                if self.act(a.multiply(x, y)) != self.act(x) @ self.act(y):
                    raise ModuleError("action is not multiplicative")

    def is_zero(self) -> bool:
        return self.dim == 0


class ModuleMap:
    """A-linear map stored as a (target.dim x source.dim) matrix.

    With QHCOVER_DEBUG set in the environment, every constructed map is
    re-validated against the intertwining relations.
    """

    def __init__(self, source: Module, target: Module, matrix: Mat, validate: bool = False):
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ModuleError(f"map shape {matrix.rows}x{matrix.cols} does not match modules")
        self.source = source
        self.target = target
        self.matrix = matrix
        if validate or _DEBUG_VALIDATE:
            self.validate()

    def validate(self) -> None:
        a = self.source.algebra
        for x in a.generator_elements():
            if self.matrix @ self.source.act(x) != self.target.act(x) @ self.matrix:
                raise ModuleError("matrix does not intertwine the actions")

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other (apply other first)."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_surjective(self) -> bool:
        return self.matrix.rank() == self.target.dim

    def is_injective(self) -> bool:
        return self.matrix.kernel().cols == 0

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.matrix.is_invertible()

    def kernel_submodule(self) -> tuple[Module, "ModuleMap"]:
        ker = self.matrix.kernel()
        return submodule(self.source, Subspace(self.matrix.field, self.source.dim, ker.transpose()))

    def image_submodule(self) -> tuple[Module, "ModuleMap"]:
        return submodule(self.target, Subspace.from_columns(self.matrix))

    def cokernel(self) -> tuple[Module, "ModuleMap"]:
        return quotient_module(self.target, Subspace.from_columns(self.matrix))


class Bimodule:
    """(A, B)-bimodule: commuting left A-action and right B-action.

    The right action is stored as a left action of opposite(B).
    """

    def __init__(self, left: Module, right: Module):
        if left.dim != right.dim:
            raise ModuleError("bimodule actions live on different spaces")
        self.left = left
        self.right = right
        self.dim = left.dim

    def validate(self) -> None:
        self.left.validate()
        self.right.validate()
        for x in self.left.algebra.generator_elements():
            lx = self.left.act(x)
            for y in self.right.algebra.generator_elements():
                ry = self.right.act(y)
                if lx @ ry != ry @ lx:
                    raise ModuleError("left and right actions do not commute")


# ---------------------------------------------------------------------------
# basic constructions
# ---------------------------------------------------------------------------


def zero_module(a: Algebra) -> Module:
    return Module(a, [Mat.zeros(a.field, 0, 0) for _ in range(a.dim)], name="0")


def regular_module(a: Algebra) -> Module:
    return Module(a, a.left_regular_action(), name="A")


def submodule(m: Module, span: Subspace) -> tuple[Module, ModuleMap]:
    """Module on an invariant subspace, with its inclusion map."""
    w = span.basis.transpose()  # columns = basis
    action = []
    for g in m.action:
        img = (g @ w).transpose()
        coords = span.coords(img)
        if coords is None:
            raise ModuleError("subspace is not invariant under the action")
        action.append(coords.transpose())
    sub = Module(m.algebra, action)
    return sub, ModuleMap(sub, m, w)


def quotient_module(m: Module, span: Subspace) -> tuple[Module, ModuleMap]:
    """Quotient by an invariant subspace, with its projection map."""
    field = m.algebra.field
    proj = span.quotient_coords(Mat.identity(field, m.dim)).transpose()  # (q x t)
    sect = Mat.zeros(field, m.dim, span.quotient_dim()).mutable()
    onef = field.one()
    for t, np_idx in enumerate(span.nonpivots):
        if isinstance(sect, np.ndarray):
            sect[np_idx, t] = 1
        else:
            sect[np_idx][t] = onef
    sect_m = Mat(field, sect, copy=False)
    action = [proj @ (g @ sect_m) for g in m.action]
    quot = Module(m.algebra, action)
    return quot, ModuleMap(m, quot, proj)


def direct_sum(mods: Sequence[Module], name: str = "") -> tuple[Module, list[ModuleMap], list[ModuleMap]]:
    """Direct sum with injections and projections."""
    mods = list(mods)
    if not mods:
        raise ModuleError("empty direct sum needs an algebra; use zero_module")
    a = mods[0].algebra
    if any(m.algebra is not a for m in mods):
        raise ModuleError("direct sum of modules over different algebras")
    action = [Mat.block_diag(a.field, [m.action[i] for m in mods]) for i in range(a.dim)]
    total = Module(a, action, name=name or "+".join(m.name or "?" for m in mods))
    injections, projections = [], []
    offset = 0
    ident = Mat.identity(a.field, total.dim)
    for m in mods:
        cols = list(range(offset, offset + m.dim))
        injections.append(ModuleMap(m, total, ident.take_cols(cols)))
        projections.append(ModuleMap(total, m, ident.take_rows(cols)))
        offset += m.dim
    return total, injections, projections


def dual(m: Module) -> Module:
    """Standard duality: left module over the opposite algebra."""
    if m._dual is None:
        opp = opposite(m.algebra)
        d = Module(opp, [g.transpose() for g in m.action], name=f"D({m.name})" if m.name else "")
        d._dual = m
        m._dual = d
    return m._dual


def dual_map(f: ModuleMap) -> ModuleMap:
    """D is contravariant: the dual of f: M -> N is D(N) -> D(M)."""
    return ModuleMap(dual(f.target), dual(f.source), f.matrix.transpose())


# ---------------------------------------------------------------------------
# radical series, top, socle
# ---------------------------------------------------------------------------


def radical_span(m: Module) -> Subspace:
    """J(A) . M as a subspace."""
    a = m.algebra
    rad = a.radical_subspace()
    if rad.dim == 0 or m.dim == 0:
        return Subspace(a.field, m.dim)
    mats = m.act_many(rad.basis.transpose())
    return Subspace.from_columns(Mat.hstack([g for g in mats]))


def module_radical(m: Module) -> tuple[Module, ModuleMap]:
    return submodule(m, radical_span(m))


def top(m: Module) -> tuple[Module, ModuleMap]:
    """M / rad M with the quotient map."""
    return quotient_module(m, radical_span(m))


def socle(m: Module) -> tuple[Module, ModuleMap]:
    """Annihilator of J(A) in M, with the inclusion."""
    a = m.algebra
    rad = a.radical_subspace()
    if rad.dim == 0 or m.dim == 0:
        ident = Mat.identity(a.field, m.dim)
        return submodule(m, Subspace(a.field, m.dim, ident))
    mats = m.act_many(rad.basis.transpose())
    stacked = Mat.vstack(mats)
    ker = stacked.kernel()
    return submodule(m, Subspace(a.field, m.dim, ker.transpose()))


# ---------------------------------------------------------------------------
# projective modules and presentations
# ---------------------------------------------------------------------------


class ProjSummand:
    """One copy of A e inside an explicit direct sum of such modules."""

    def __init__(self, class_index: int, idem: Mat, incl: Mat, offset: int, dim: int):
        self.class_index = class_index
        self.idem = idem  # idempotent, coordinates in A
        self.incl = incl  # (A.dim x dim): basis of A e as columns
        self.offset = offset
        self.dim = dim


class ProjSum:
    """Explicit realization of a direct sum of projectives A e_i.

    ``generators``: coordinates (in module basis) of the idempotent e of
    each summand; the map f -> (f(gen_j))_j identifies Hom(P, N) with the
    product of slices e_j N.
    """

    def __init__(self, module: Module, summands: list[ProjSummand]):
        self.module = module
        self.summands = summands

    @property
    def dim(self) -> int:
        return self.module.dim

    def generator_columns(self) -> list[Mat]:
        cols = []
        field = self.module.algebra.field
        a_dim = self.module.algebra.dim
        for s in self.summands:
            # incl columns are an echelonized basis of A e, so Subspace
            # reconstruction reproduces exactly that basis
            sub = Subspace(field, a_dim, s.incl.transpose())
            gcoords = sub.coords(s.idem.transpose())
            if gcoords is None:
                raise ModuleError("idempotent not in its own projective summand")
            vec = Mat.zeros(field, self.module.dim, 1).mutable()
            for i in range(s.dim):
                v = gcoords[0, i]
                if v != 0:
                    if isinstance(vec, np.ndarray):
                        vec[s.offset + i, 0] = int(v)
                    else:
                        vec[s.offset + i][0] = v
            cols.append(Mat(field, vec, copy=False))
        return cols


def _indec_projective(a: Algebra, class_index: int) -> tuple[Module, Mat, Mat]:
    """A e for the class representative idempotent; returns (module, incl, e)."""
    cache = getattr(a, "_indec_proj_cache", None)
    if cache is None:
        cache = {}
        a._indec_proj_cache = cache
    if class_index in cache:
        return cache[class_index]
    prim = a.primitive_idempotents()
    e = prim.idempotents[prim.class_reps[class_index]]
    span = Subspace.from_columns(a.right_mult_matrix(e))  # A e
    w = span.basis.transpose()
    if isinstance(a.field, PrimeField):
        stack = a._left_regular_stack()
        imgs = np.einsum("aij,jd->aid", stack, w.data, optimize=True) % a.field.p
        action = []
        for i in range(a.dim):
            coords = span.coords(Mat(a.field, imgs[i].T, copy=False))
            if coords is None:
                raise ModuleError("projective summand is not invariant")
            action.append(coords.transpose())
    else:
        action = []
        for g in a.left_regular_action():
            img = (g @ w).transpose()
            coords = span.coords(img)
            if coords is None:
                raise ModuleError("projective summand is not invariant")
            action.append(coords.transpose())
    mod = Module(a, action, name=f"P[{class_index}]")
    cache[class_index] = (mod, w, e)
    return cache[class_index]


def proj_sum(a: Algebra, class_indices: Sequence[int]) -> ProjSum:
    """Direct sum of indecomposable projectives for the given classes."""
    mods = []
    summands = []
    offset = 0
    for ci in class_indices:
        mod, incl, e = _indec_projective(a, ci)
        mods.append(mod)
        summands.append(ProjSummand(ci, e, incl, offset, mod.dim))
        offset += mod.dim
    if not mods:
        return ProjSum(zero_module(a), [])
    if len(mods) == 1:
        total = mods[0]
    else:
        total, _, _ = direct_sum(mods)
    return ProjSum(total, summands)


class Presentation:
    """Projective presentation P1 -> P0 -> M -> 0 with a linear section of the cover."""

    def __init__(self, module, p0: ProjSum, cover: Mat, section: Mat, p1: ProjSum, d1: Mat):
        self.module = module
        self.p0 = p0
        self.cover = cover  # (M.dim x P0.dim), surjective
        self.section = section  # (P0.dim x M.dim), cover @ section = id
        self.p1 = p1
        self.d1 = d1  # (P0.dim x P1.dim), image = ker(cover)


def _top_class_generators(m: Module) -> list[tuple[int, Mat]]:
    """Pairs (class index, generator vector) realizing a basis of top(M)."""
    a = m.algebra
    prim = a.primitive_idempotents()
    rad = radical_span(m)
    out: list[tuple[int, Mat]] = []
    for ci in range(prim.n_blocks):
        e = prim.idempotents[prim.class_reps[ci]]
        cols = m.act(e)  # columns e.(basis of M)
        top_coords = rad.quotient_coords(cols.transpose()).transpose()  # images in top
        # pivot columns index vectors of e.M whose top images are independent
        for j in _independent_columns(top_coords):
            out.append((ci, cols.take_cols([j])))
    return out


def _independent_columns(mat: Mat) -> list[int]:
    # the pivot columns of the rref are a maximal independent column set
    return mat.rref()[1]


def projective_cover_data(m: Module) -> Presentation:
    """Minimal cover plus first syzygy, cached on the module."""
    if m._presentation is not None:
        return m._presentation
    a = m.algebra
    gens = _top_class_generators(m)
    p0 = proj_sum(a, [ci for ci, _ in gens])
    cover = _evaluation_matrix(p0, m, [v for _, v in gens])
    if cover.rank() != m.dim:
        raise ModuleError("projective cover is not surjective (top computation broken)")
    section = cover.solve(Mat.identity(a.field, m.dim))
    ker = cover.kernel()
    kspan = Subspace(a.field, p0.dim, ker.transpose())
    kmod, kincl = submodule(p0.module, kspan)
    kgens = _top_class_generators(kmod)
    p1 = proj_sum(a, [ci for ci, _ in kgens])
    kcover = _evaluation_matrix(p1, kmod, [v for _, v in kgens])
    if kcover.rank() != kmod.dim:
        raise ModuleError("syzygy cover is not surjective")
    d1 = kincl.matrix @ kcover
    pres = Presentation(m, p0, cover, section, p1, d1)
    m._presentation = pres
    return pres


def _evaluation_matrix(p: ProjSum, n: Module, targets: list[Mat]) -> Mat:
    """Matrix of the map P -> N sending the j-th generator to targets[j].

    On the summand A e_j the map is a e_j -> rho_N(a e_j) targets[j].
    """
    a = p.module.algebra
    field = a.field
    if not p.summands:
        return Mat.zeros(field, n.dim, 0)
    blocks = []
    if isinstance(field, PrimeField):
        stack = n.stack()
        for s, v in zip(p.summands, targets):
            sv = np.tensordot(stack, v.data[:, 0], axes=(2, 0)) % field.p  # sv[a, i] = (rho(b_a) v)_i
            blocks.append(Mat(field, (sv.T @ s.incl.data) % field.p, copy=False))
    else:
        for s, v in zip(p.summands, targets):
            cols = []
            for c in range(s.incl.cols):
                x = s.incl.take_cols([c])
                cols.append(n.act(x) @ v)
            blocks.append(Mat.hstack(cols))
    return Mat.hstack(blocks)


# ---------------------------------------------------------------------------
# hom spaces
# ---------------------------------------------------------------------------


class HomSpace:
    """Basis of Hom_A(M, N) as explicit ModuleMaps."""

    def __init__(self, source: Module, target: Module, maps: list[ModuleMap]):
        self.source = source
        self.target = target
        self.maps = maps

    @property
    def dim(self) -> int:
        return len(self.maps)

    def combination(self, coeffs: Sequence) -> ModuleMap:
        field = self.source.algebra.field
        acc = Mat.zeros(field, self.target.dim, self.source.dim)
        for c, f in zip(coeffs, self.maps):
            if c != 0:
                acc = acc + f.matrix.scale(c)
        return ModuleMap(self.source, self.target, acc)


def _slice_basis(n: Module, e: Mat) -> Mat:
    """Columns spanning e . N."""
    return Subspace.from_columns(n.act(e)).basis.transpose()


def _slice_block(n: Module, v: Mat, w: Mat) -> Mat:
    """rho_N(v) @ w for an algebra element v and slice basis w."""
    return n.act(v) @ w


def hom_space(m: Module, n: Module) -> HomSpace:
    """Basis of Hom_A(M, N) via a projective presentation of M."""
    if m.algebra is not n.algebra:
        raise ModuleError("hom_space: modules over different algebras")
    a = m.algebra
    field = a.field
    if m.dim == 0 or n.dim == 0:
        return HomSpace(m, n, [])
    pres = projective_cover_data(m)
    slices = [_slice_basis(n, s.idem) for s in pres.p0.summands]
    widths = [w.cols for w in slices]
    total_w = sum(widths)
    if total_w == 0:
        return HomSpace(m, n, [])
    # constraints: for each generator of P1, evaluation of phi at d1(gen) vanishes
    constraints = []
    gen_cols = pres.p1.generator_columns()
    for k, g in enumerate(gen_cols):
        u = pres.d1 @ g  # column in P0
        row_blocks = []
        for s, w in zip(pres.p0.summands, slices):
            uj = u.take_rows(range(s.offset, s.offset + s.dim))
            v = s.incl @ uj  # element of A
            row_blocks.append(_slice_block(n, v, w) if w.cols else Mat.zeros(field, n.dim, 0))
        constraints.append(Mat.hstack(row_blocks))
    if constraints:
        sys = Mat.vstack(constraints)
        sol = sys.kernel()  # (total_w x h)
    else:
        sol = Mat.identity(field, total_w)
    maps = _extract_hom_matrices(pres, n, slices, sol)
    return HomSpace(m, n, [ModuleMap(m, n, f) for f in maps])


def _extract_hom_matrices(pres: Presentation, n: Module, slices: list[Mat], sol: Mat) -> list[Mat]:
    """Convert slice-coordinate solutions into (N.dim x M.dim) matrices."""
    a = pres.module.algebra
    field = a.field
    m_dim = pres.module.dim
    h = sol.cols
    if h == 0:
        return []
    out = [Mat.zeros(field, n.dim, m_dim) for _ in range(h)]
    offset = 0
    for s, w in zip(pres.p0.summands, slices):
        hw = w.cols
        if hw == 0:
            continue
        wsol = w @ sol.take_rows(range(offset, offset + hw))  # (n.dim x h): images of gen j
        # lifted section slice: element of A for each basis vector of M
        lift = s.incl @ pres.section.take_rows(range(s.offset, s.offset + s.dim))  # (A.dim x m_dim)
        if isinstance(field, PrimeField):
            stack = n.stack()
            y = np.einsum("aij,jh->aih", stack, wsol.data, optimize=True) % field.p
            f = np.einsum("aih,ac->hic", y, lift.data, optimize=True) % field.p
            for t in range(h):
                out[t] = out[t] + Mat(field, f[t], copy=False)
        else:
            for t in range(h):
                cols = []
                wv = wsol.take_cols([t])
                for c in range(m_dim):
                    cols.append(n.act(lift.take_cols([c])) @ wv)
                out[t] = out[t] + Mat.hstack(cols)
        offset += hw
    return out


def hom_space_naive(m: Module, n: Module) -> list[Mat]:
    """Oracle: direct intertwiner solve over the algebra generators."""
    a = m.algebra
    field = a.field
    gens = a.generator_elements()
    t, s = n.dim, m.dim
    if t == 0 or s == 0:
        return []
    rows = []
    for g in gens:
        gm, gn = m.act(g), n.act(g)
        if isinstance(field, PrimeField):
            block = (np.kron(np.eye(t, dtype=np.int64), gm.data.T) - np.kron(gn.data, np.eye(s, dtype=np.int64))) % field.p
            rows.append(Mat(field, block, copy=False))
        else:
            block = [[Fraction(0)] * (t * s) for _ in range(t * s)]
            for i in range(t):
                for j in range(s):
                    r = i * s + j
                    for k in range(s):
                        block[r][i * s + k] += gm[k, j]
                    for k in range(t):
                        block[r][k * s + j] -= gn[i, k]
            rows.append(Mat(field, block, cols=t * s))
    ker = Mat.vstack(rows).kernel()
    mats = []
    for c in range(ker.cols):
        col = ker.take_cols([c])
        if isinstance(field, PrimeField):
            mats.append(Mat(field, col.data[:, 0].reshape(t, s), copy=False))
        else:
            mats.append(Mat(field, [[col[i * s + j, 0] for j in range(s)] for i in range(t)], cols=s))
    return mats


# ---------------------------------------------------------------------------
# covers, envelopes, traces, corners
# ---------------------------------------------------------------------------


def projective_cover(m: Module) -> ModuleMap:
    """Surjection from a projective with superfluous kernel."""
    pres = projective_cover_data(m)
    return ModuleMap(pres.p0.module, m, pres.cover)


def injective_envelope(m: Module) -> ModuleMap:
    """Envelope computed as the dual of the projective cover of D(m)."""
    # dual(dual(m)) is m itself, so the dualized cover starts at m
    return dual_map(projective_cover(dual(m)))


def trace_submodule(x: Module, m: Module) -> tuple[Module, ModuleMap]:
    """Sum of images of all maps x -> m, as a submodule inclusion."""
    maps = hom_space(x, m).maps
    if not maps:
        z = zero_module(m.algebra)
        return z, ModuleMap(z, m, Mat.zeros(m.algebra.field, m.dim, 0))
    cols = Mat.hstack([f.matrix for f in maps])
    return submodule(m, Subspace.from_columns(cols))


def corner_module(m: Module, e: Mat, corner: Algebra, corner_incl: Mat) -> Module:
    """e . M as a module over the corner algebra eAe."""
    field = m.algebra.field
    span = Subspace.from_columns(m.act(e))
    w = span.basis.transpose()
    action = []
    for c in range(corner.dim):
        x = corner_incl.take_cols([c])  # corner basis element as element of A
        img = (m.act(x) @ w).transpose()
        coords = span.coords(img)
        if coords is None:
            raise ModuleError("corner action left the corner subspace")
        action.append(coords.transpose())
    return Module(corner, action, name=f"e.{m.name}" if m.name else "")


# ---------------------------------------------------------------------------
# endomorphism algebras, isomorphism testing, decomposition
# ---------------------------------------------------------------------------


def endomorphism_algebra(m: Module) -> tuple[Algebra, list[ModuleMap]]:
    """End_A(M) with multiplication f * g = f o g, plus the basis maps."""
    hs = hom_space(m, m)
    basis = hs.maps
    n = len(basis)
    field = m.algebra.field
    if n == 0:
        raise ModuleError("endomorphism algebra of the zero module")
    flat = _flatten_maps(basis, m.dim)
    rows_idx = _pivot_rows(flat)
    square_inv = flat.take_rows(rows_idx).inv()
    if isinstance(field, PrimeField):
        stack = np.stack([f.matrix.data for f in basis])
        prods = np.einsum("aij,bjk->abik", stack, stack, optimize=True) % field.p
        flatp = prods.reshape(n * n, m.dim * m.dim).T
        coords = (square_inv @ Mat(field, flatp[rows_idx, :], copy=False)).data
        mult = np.ascontiguousarray(coords.T.reshape(n, n, n))
    else:
        mult = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                pr = basis[i].matrix @ basis[j].matrix
                col = Mat(field, [[pr[r // m.dim, r % m.dim]] for r in range(m.dim * m.dim)], cols=1)
                coord = square_inv @ col.take_rows(rows_idx)
                for k in range(n):
                    mult[i][j][k] = coord[k, 0]
    ident = Mat.identity(field, m.dim)
    idcol = Mat(field, [[ident[r // m.dim, r % m.dim]] for r in range(m.dim * m.dim)], cols=1)
    one = square_inv @ idcol.take_rows(rows_idx)
    alg = Algebra(field, n, mult, one, provenance="endomorphism", rep=[f.matrix for f in basis])
    return alg, basis


def _flatten_maps(maps: list[ModuleMap], dim: int = 0) -> Mat:
    field = maps[0].matrix.field
    nr, nc = maps[0].matrix.rows, maps[0].matrix.cols
    if isinstance(field, PrimeField):
        return Mat(field, np.stack([f.matrix.data.reshape(nr * nc) for f in maps]).T, copy=False)
    rows = [[f.matrix[r // nc, r % nc] for f in maps] for r in range(nr * nc)]
    return Mat(field, rows, cols=len(maps))


def _pivot_rows(mat: Mat) -> list[int]:
    _, piv = mat.transpose().rref()
    return piv


def end_element_matrix(basis: list[ModuleMap], coords: Mat) -> Mat:
    field = basis[0].matrix.field
    acc = Mat.zeros(field, basis[0].matrix.rows, basis[0].matrix.cols)
    for i, f in enumerate(basis):
        c = coords[i, 0]
        if c != 0:
            acc = acc + f.matrix.scale(c)
    return acc


def indecomposable_summands(m: Module) -> list[tuple[Module, ModuleMap, ModuleMap]]:
    """Split into indecomposables via idempotents of End(M).

    Returns (summand, inclusion, projection) triples with
    sum of incl o proj = identity.
    """
    if m.dim == 0:
        return []
    end, basis = endomorphism_algebra(m)
    prim = end.primitive_idempotents()
    out = []
    for e in prim.idempotents:
        mat = end_element_matrix(basis, e)
        span = Subspace.from_columns(mat)
        summand, incl = submodule(m, span)
        proj_mat = span.coords((mat).transpose())
        # projection onto the summand: first apply the idempotent, then coordinates
        proj = proj_mat.transpose()
        out.append((summand, incl, ModuleMap(m, summand, proj)))
    return out


def _local_end_radical(m: Module) -> tuple[Algebra, list[ModuleMap], Subspace]:
    end, basis = endomorphism_algebra(m)
    return end, basis, end.radical_subspace()


def is_isomorphic(m: Module, n: Module, seed: int = 1) -> Optional[ModuleMap]:
    """An explicit isomorphism or None; decomposition-certified on failure."""
    if m.algebra is not n.algebra:
        raise ModuleError("is_isomorphic: modules over different algebras")
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ModuleMap(m, n, Mat.zeros(m.algebra.field, 0, 0))
    hs = hom_space(m, n)
    if hs.dim == 0:
        return None
    field = m.algebra.field
    # cheap attempts: basis elements, then seeded random combinations
    for f in hs.maps:
        if f.matrix.is_invertible():
            return f
    rng = np.random.default_rng(seed)
    for _ in range(24):
        if isinstance(field, PrimeField):
            coeffs = [int(c) for c in rng.integers(0, field.p, size=hs.dim)]
        else:
            coeffs = [Fraction(int(c)) for c in rng.integers(-4, 5, size=hs.dim)]
        f = hs.combination(coeffs)
        if f.matrix.is_invertible():
            return f
    # certified path: match indecomposable summands
    return _isomorphism_by_decomposition(m, n)


def _indec_isomorphic(m: Module, n: Module) -> Optional[ModuleMap]:
    """Certified iso test for indecomposable modules of equal dimension.

    m and n (indecomposable) are isomorphic iff some composite g o f with
    f: m -> n, g: n -> m basis elements avoids the radical of End(m); such
    an f is then itself an isomorphism.
    """
    fs = hom_space(m, n).maps
    gs = hom_space(n, m).maps
    if not fs or not gs:
        return None
    end, basis, rad = _local_end_radical(m)
    flat = _flatten_maps(basis, m.dim)
    rows_idx = _pivot_rows(flat)
    square_inv = flat.take_rows(rows_idx).inv()
    for f in fs:
        for g in gs:
            comp = g.matrix @ f.matrix
            col = _flatten_single(comp)
            coords = square_inv @ col.take_rows(rows_idx)
            if not rad.contains(coords.transpose()):
                # g o f invertible in the local ring End(m), so f is injective
                # and a dimension count makes it an isomorphism
                if f.matrix.is_invertible():
                    return f
                raise ModuleError("local-ring certificate disagrees with rank")
    return None


def _flatten_single(mat: Mat) -> Mat:
    field = mat.field
    d = mat.rows
    if isinstance(field, PrimeField):
        return Mat(field, mat.data.reshape(d * mat.cols, 1), copy=False)
    return Mat(field, [[mat[r // mat.cols, r % mat.cols]] for r in range(d * mat.cols)], cols=1)


def _isomorphism_by_decomposition(m: Module, n: Module) -> Optional[ModuleMap]:
    msum = indecomposable_summands(m)
    nsum = indecomposable_summands(n)
    if len(msum) != len(nsum):
        return None
    used = [False] * len(nsum)
    total = Mat.zeros(m.algebra.field, n.dim, m.dim)
    for sm, incl_m, proj_m in msum:
        found = False
        for j, (sn, incl_n, proj_n) in enumerate(nsum):
            if used[j] or sn.dim != sm.dim:
                continue
            iso = _indec_isomorphic(sm, sn)
            if iso is not None:
                used[j] = True
                total = total + (incl_n.matrix @ iso.matrix @ proj_m.matrix)
                found = True
                break
        if not found:
            return None
    f = ModuleMap(m, n, total)
    if not f.is_isomorphism():
        raise ModuleError("assembled summand matching is not invertible")
    return f


# ---------------------------------------------------------------------------
# endomorphism algebra with bimodule, tensor products over it
# ---------------------------------------------------------------------------


def end_algebra_with_bimodule(q: Module) -> tuple[Algebra, Bimodule, list[ModuleMap]]:
    """B = End_A(q)^op together with q as an (A, B)-bimodule.

    The right B-action is encoded as a left module over opposite(B), which
    is the plain endomorphism algebra acting by application.
    """
    cached = getattr(q, "_end_cache", None)
    if cached is not None:
        return cached
    end, basis = endomorphism_algebra(q)
    b = opposite(end)
    right = Module(end, [f.matrix for f in basis], name=f"{q.name}|B" if q.name else "")
    bim = Bimodule(left=q, right=right)
    q._end_cache = (b, bim, basis)
    return q._end_cache


def hom_module_over_endop(q: Module, m: Module) -> tuple[Module, list[ModuleMap]]:
    """Hom_A(q, m) as a left module over B = End_A(q)^op (action h -> h o b)."""
    b, bim, end_basis = end_algebra_with_bimodule(q)
    hs = hom_space(q, m)
    hdim = hs.dim
    field = q.algebra.field
    if hdim == 0:
        return Module(b, [Mat.zeros(field, 0, 0) for _ in range(b.dim)]), []
    flat = _flatten_maps(hs.maps, m.dim)
    rows_idx = _pivot_rows(flat)
    square_inv = flat.take_rows(rows_idx).inv()
    action = []
    for f in end_basis:
        cols = []
        for h in hs.maps:
            comp = h.matrix @ f.matrix  # h o f
            col = _flatten_single(comp)
            cols.append(square_inv @ col.take_rows(rows_idx))
        action.append(Mat.hstack(cols))
    return Module(b, action, name=f"Hom({q.name},{m.name})" if q.name or m.name else ""), hs.maps


def right_slice(x: Module, e: Mat) -> tuple[Mat, Subspace]:
    """x . e for a right module x (stored over B^op) and idempotent e of B."""
    mat = x.act(e)
    span = Subspace.from_columns(mat)
    return span.basis.transpose(), span


class TensorData:
    """x tensor_B y computed from a projective presentation of y.

    ``slice_maps`` realize x tensor B e_j = x.e_j; the tensor space is the
    cokernel of ``relation_matrix`` inside the direct sum of the slices.
    """

    def __init__(self, dim: int, slice_info, relation_matrix: Mat, total_dim: int, module=None, proj=None):
        self.dim = dim
        self.slice_info = slice_info
        self.relation_matrix = relation_matrix
        self.total_dim = total_dim
        self.module = module  # induced A-module when x is a bimodule
        self.proj = proj


def tensor_over(x: Module, y: Module, left_structure: Optional[Module] = None) -> TensorData:
    """Balanced tensor product of a right B-module with a left B-module.

    ``x`` must be the left opposite(B)-encoding of the right module.  When
    ``left_structure`` carries a commuting left A-action on the same space
    as x, the result includes the induced A-module.
    """
    bop = x.algebra
    b = y.algebra
    if opposite(b) is not bop:
        raise ModuleError("tensor_over: algebras do not match (x over opposite(B), y over B)")
    field = b.field
    pres = projective_cover_data(y)
    slices = []
    offsets = []
    total = 0
    for s in pres.p0.summands:
        w, span = right_slice(x, s.idem)
        slices.append((w, span))
        offsets.append(total)
        total += span.dim
    blocks_rows = []
    gen_cols = pres.p1.generator_columns()
    rel_cols = []
    for k, s1 in enumerate(pres.p1.summands):
        g = gen_cols[k]
        u = pres.d1 @ g
        wk, spank = right_slice(x, s1.idem)
        if wk.cols == 0:
            continue
        col_blocks = []
        for j, s0 in enumerate(pres.p0.summands):
            uj = u.take_rows(range(s0.offset, s0.offset + s0.dim))
            v = s0.incl @ uj  # element of B
            wj, spanj = slices[j]
            if spanj.dim == 0:
                col_blocks.append(Mat.zeros(field, 0, wk.cols))
                continue
            img = x.act(v) @ wk  # x.f_k -> x.e_j, columns in x-space
            coords = spanj.coords(img.transpose())
            if coords is None:
                raise ModuleError("tensor slice map left its target slice")
            col_blocks.append(coords.transpose())
        rel_cols.append(Mat.vstack(col_blocks) if col_blocks else Mat.zeros(field, total, wk.cols))
    relation = Mat.hstack(rel_cols) if rel_cols else Mat.zeros(field, total, 0)
    dim = total - relation.rank()
    module = None
    proj = None
    if left_structure is not None:
        # assemble the direct sum of slices as an A-module and take the cokernel
        amods = []
        for (w, span) in slices:
            sub, _ = submodule(left_structure, span)
            amods.append(sub)
        if amods:
            summod, injs, _ = direct_sum(amods) if len(amods) > 1 else (amods[0], None, None)
            quot, projmap = quotient_module(summod, Subspace.from_columns(relation))
            module = quot
            proj = projmap
        else:
            module = zero_module(left_structure.algebra)
    return TensorData(dim, slices, relation, total, module=module, proj=proj)


class CounitData:
    """The counit chi_m: q tensor_B Hom_A(q, m) -> m, in presentation form."""

    def __init__(self, surjective: bool, bijective: bool, b: Algebra, hom_module: Module, composite: Mat, relation_rank: int):
        self.surjective = surjective
        self.bijective = bijective
        self.b = b
        self.hom_module = hom_module
        self.composite = composite
        self.relation_rank = relation_rank


def counit_analysis(q: Module, m: Module) -> CounitData:
    """Surjectivity/bijectivity of the evaluation map q tensor_B Hom(q, m) -> m."""
    b, bim, end_basis = end_algebra_with_bimodule(q)
    field = q.algebra.field
    hmod, hom_basis = hom_module_over_endop(q, m)
    if hmod.dim == 0:
        return CounitData(m.dim == 0, m.dim == 0, b, hmod, Mat.zeros(field, m.dim, 0), 0)
    pres = projective_cover_data(hmod)
    x = bim.right  # q as left module over opposite(B)
    slices = []
    total = 0
    comp_blocks = []
    gen_cols0 = pres.p0.generator_columns()
    for j, s in enumerate(pres.p0.summands):
        w, span = right_slice(x, s.idem)
        slices.append((w, span))
        total += span.dim
        hj = pres.cover @ gen_cols0[j]  # element of Hom(q,m) in hom-basis coords
        hmat = Mat.zeros(field, m.dim, q.dim)
        for kk in range(len(hom_basis)):
            c = hj[kk, 0]
            if c != 0:
                hmat = hmat + hom_basis[kk].matrix.scale(c)
        comp_blocks.append(hmat @ w)
    composite = Mat.hstack(comp_blocks) if comp_blocks else Mat.zeros(field, m.dim, 0)
    # relation image: q tensor (image of d1)
    rel_rank = 0
    rel_cols = []
    gen_cols1 = pres.p1.generator_columns()
    for k, s1 in enumerate(pres.p1.summands):
        g = gen_cols1[k]
        u = pres.d1 @ g
        wk, spank = right_slice(x, s1.idem)
        if wk.cols == 0:
            continue
        col_blocks = []
        for j, s0 in enumerate(pres.p0.summands):
            uj = u.take_rows(range(s0.offset, s0.offset + s0.dim))
            v = s0.incl @ uj
            wj, spanj = slices[j]
            if spanj.dim == 0:
                col_blocks.append(Mat.zeros(field, 0, wk.cols))
                continue
            img = x.act(v) @ wk
            coords = spanj.coords(img.transpose())
            if coords is None:
                raise ModuleError("counit slice map left its target slice")
            col_blocks.append(coords.transpose())
        rel_cols.append(Mat.vstack(col_blocks))
    relation = Mat.hstack(rel_cols) if rel_cols else Mat.zeros(field, total, 0)
    if relation.cols and not (composite @ relation).is_zero():
        raise ModuleError("counit relations do not die under evaluation (internal error)")
    rel_rank = relation.rank()
    surjective = composite.rank() == m.dim
    ker_dim = composite.kernel().cols
    bijective = surjective and (ker_dim == rel_rank)
    return CounitData(surjective, bijective, b, hmod, composite, rel_rank)


def hom_into_q_as_right_module(q: Module, m: Module) -> tuple[Module, list[ModuleMap]]:
    """Hom_A(m, q) as a right module over B = End_A(q)^op.

    The right action h . b = (b as endomorphism) o h is encoded, as usual,
    as a left module over opposite(B).
    """
    b, bim, end_basis = end_algebra_with_bimodule(q)
    bop = opposite(b)  # the plain endomorphism algebra, composition order
    hs = hom_space(m, q)
    hdim = hs.dim
    field = q.algebra.field
    if hdim == 0:
        return Module(bop, [Mat.zeros(field, 0, 0) for _ in range(bop.dim)]), []
    flat = _flatten_maps(hs.maps)
    rows_idx = _pivot_rows(flat)
    square_inv = flat.take_rows(rows_idx).inv()
    action = []
    for f in end_basis:
        cols = []
        for h in hs.maps:
            comp = f.matrix @ h.matrix  # f o h
            col = _flatten_single(comp)
            cols.append(square_inv @ col.take_rows(rows_idx))
        action.append(Mat.hstack(cols))
    return Module(bop, action), hs.maps


def induced_map_on_hom_into_q(q: Module, f: ModuleMap, src_data, tgt_data) -> Mat:
    """Matrix of Hom(f, q): Hom(target(f), q) -> Hom(source(f), q)."""
    tgt_mod, tgt_maps = src_data  # Hom(target, q)
    src_mod, src_maps = tgt_data  # Hom(source, q)
    field = q.algebra.field
    if not tgt_maps or not src_maps:
        return Mat.zeros(field, len(src_maps), len(tgt_maps))
    flat = _flatten_maps(src_maps)
    rows_idx = _pivot_rows(flat)
    square_inv = flat.take_rows(rows_idx).inv()
    cols = []
    for h in tgt_maps:
        comp = h.matrix @ f.matrix
        col = _flatten_single(comp)
        cols.append(square_inv @ col.take_rows(rows_idx))
    return Mat.hstack(cols)
