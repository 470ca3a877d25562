"""Finite-dimensional associative unital algebras over exact fields.

An algebra is stored by structure constants c[i][j][k] (b_i b_j = sum_k
c[i][j][k] b_k) together with the coordinates of the unit.  Structural
analysis lives here: Jacobson radical, Wedderburn decomposition of the
semisimple quotient, complete sets of primitive orthogonal idempotents,
corner algebras eAe, centralizer algebras and direct products.

Radical algorithms: over QQ the radical is the kernel of the trace form
tr(L_x L_y) (Dickson's criterion); over GF(p) a descending chain of ideals
is computed from p-power trace functions evaluated on integer lifts of a
faithful matrix representation, layer by layer, which is correct in small
characteristic.  The result is certified nilpotent before being returned.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import sympy

from .fields import Field, PrimeField, QQ, RationalField, as_fraction
from .linalg import Mat, Subspace, lift_idempotent


class AlgebraError(ValueError):
    """Raised when algebra-level validation fails."""


class Algebra:
    """Associative unital algebra given by structure constants.

    ``mult`` is an (n, n, n) int64 array over GF(p) or a nested tuple of
    Fractions over QQ; ``one`` is a column Mat.  ``rep`` optionally holds a
    faithful matrix representation (used by the radical computation when it
    is smaller than the regular representation).
    """

    def __init__(
        self,
        field: Field,
        dim: int,
        mult,
        one: Mat,
        provenance: str = "raw",
        rep: Optional[list[Mat]] = None,
    ):
        self.field = field
        self.dim = dim
        if isinstance(field, PrimeField):
            arr = np.asarray(mult, dtype=np.int64) % field.p
            arr = np.ascontiguousarray(arr)
            if arr.shape != (dim, dim, dim):
                raise AlgebraError(f"structure tensor shape {arr.shape} != {(dim, dim, dim)}")
            arr.setflags(write=False)
            self.mult = arr
        else:
            self.mult = tuple(
                tuple(tuple(as_fraction(x) for x in row) for row in plane) for plane in mult
            )
            if dim and (len(self.mult) != dim or any(len(p_) != dim for p_ in self.mult)):
                raise AlgebraError("structure tensor shape mismatch")
        if one.rows != dim or one.cols != 1:
            raise AlgebraError("unit vector has wrong shape")
        self.one = one
        self.provenance = provenance
        self._rep = rep
        self._left_stack: Optional[np.ndarray] = None
        self._right_stack: Optional[np.ndarray] = None
        self._radical: Optional[Subspace] = None
        self._prim: Optional[PrimitiveDecomposition] = None
        self._gens: Optional[list[int]] = None
        self._op_link: Optional["Algebra"] = None

    # -- basic element arithmetic -----------------------------------------
    def basis_element(self, i: int) -> Mat:
        v = Mat.zeros(self.field, self.dim, 1).mutable()
        if isinstance(self.field, PrimeField):
            v[i, 0] = 1
        else:
            v[i][0] = Fraction(1)
        return Mat(self.field, v, copy=False)

    def zero_element(self) -> Mat:
        return Mat.zeros(self.field, self.dim, 1)

    def multiply(self, x: Mat, y: Mat) -> Mat:
        return self.left_mult_matrix(x) @ y

    def left_mult_matrix(self, x: Mat) -> Mat:
        """Matrix of left multiplication by x: (L_x)[k, j] = sum_i x_i c_ijk."""
        if isinstance(self.field, PrimeField):
            xv = x.data[:, 0]
            m = np.tensordot(xv, self.mult, axes=(0, 0)) % self.field.p  # (j, k)
            return Mat(self.field, m.T, copy=False)
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            xi = x[i, 0]
            if xi == 0:
                continue
            plane = self.mult[i]
            for j in range(n):
                row = plane[j]
                for k in range(n):
                    if row[k]:
                        out[k][j] += xi * row[k]
        return Mat(self.field, out)

    def right_mult_matrix(self, y: Mat) -> Mat:
        """Matrix of right multiplication by y: (R_y)[k, i] = sum_j y_j c_ijk."""
        if isinstance(self.field, PrimeField):
            yv = y.data[:, 0]
            m = np.tensordot(self.mult, yv, axes=(1, 0)) % self.field.p  # (i, k)
            return Mat(self.field, m.T, copy=False)
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            yj = y[j, 0]
            if yj == 0:
                continue
            for i in range(n):
                row = self.mult[i][j]
                for k in range(n):
                    if row[k]:
                        out[k][i] += yj * row[k]
        return Mat(self.field, out)

    def multiply_batches(self, xs: Mat, ys: Mat) -> Mat:
        """All pairwise products of column sets: column (r*s) order r-major."""
        if isinstance(self.field, PrimeField):
            X = xs.data.T  # (r, n)
            Y = ys.data.T  # (s, n)
            prod = np.einsum("ri,sj,ijk->rsk", X, Y, self.mult, optimize=True) % self.field.p
            r, s, n = prod.shape
            return Mat(self.field, prod.reshape(r * s, n).T, copy=False)
        cols = []
        for r in range(xs.cols):
            lx = self.left_mult_matrix(xs.take_cols([r]))
            for s in range(ys.cols):
                cols.append(lx @ ys.take_cols([s]))
        return Mat.hstack(cols) if cols else Mat.zeros(self.field, self.dim, 0)

    def left_regular_action(self) -> list[Mat]:
        """Left multiplication matrices of the basis elements."""
        if isinstance(self.field, PrimeField):
            stack = self._left_regular_stack()
            return [Mat(self.field, stack[i], copy=False) for i in range(self.dim)]
        return [self.left_mult_matrix(self.basis_element(i)) for i in range(self.dim)]

    def right_regular_action(self) -> list[Mat]:
        if isinstance(self.field, PrimeField):
            if self._right_stack is None:
                self._right_stack = np.ascontiguousarray(np.transpose(self.mult, (1, 2, 0)))
            return [Mat(self.field, self._right_stack[j], copy=False) for j in range(self.dim)]
        return [self.right_mult_matrix(self.basis_element(j)) for j in range(self.dim)]

    def _left_regular_stack(self) -> np.ndarray:
        if self._left_stack is None:
            self._left_stack = np.ascontiguousarray(np.transpose(self.mult, (0, 2, 1)))
        return self._left_stack

    def rep_matrices(self) -> list[Mat]:
        """A faithful representation of the basis (left regular by default)."""
        if self._rep is not None:
            return self._rep
        return self.left_regular_action()

    # -- generators ---------------------------------------------------------
    def generator_indices(self) -> list[int]:
        """Indices of a small basis subset generating A as unital algebra."""
        if self._gens is not None:
            return self._gens
        n = self.dim
        span = Subspace(self.field, n, self.one.transpose())
        gens: list[int] = []
        while span.dim < n:
            new_idx = next(i for i in range(n) if not span.contains(self.basis_element(i).transpose()))
            gens.append(new_idx)
            rows = Mat.vstack([span.basis, self.basis_element(new_idx).transpose()])
            span = Subspace(self.field, n, rows)
            while span.dim < n:
                cols = span.basis.transpose()
                prods = self.multiply_batches(cols, cols)
                newspan = Subspace(self.field, n, Mat.vstack([span.basis, prods.transpose()]))
                if newspan.dim == span.dim:
                    break
                span = newspan
        self._gens = gens
        return gens

    def generator_elements(self) -> list[Mat]:
        return [self.basis_element(i) for i in self.generator_indices()]

    # -- validation ----------------------------------------------------------
    def validate_unit(self) -> None:
        ident = Mat.identity(self.field, self.dim)
        if self.left_mult_matrix(self.one) != ident:
            raise AlgebraError("unit axiom fails: one * x != x")
        if self.right_mult_matrix(self.one) != ident:
            raise AlgebraError("unit axiom fails: x * one != x")

    def validate_associativity(self) -> None:
        if isinstance(self.field, PrimeField):
            p = self.field.p
            t1 = np.einsum("ijl,lkm->ijkm", self.mult, self.mult, optimize=True) % p
            t2 = np.einsum("jkl,ilm->ijkm", self.mult, self.mult, optimize=True) % p
            if not np.array_equal(t1, t2):
                bad = np.argwhere(t1 != t2)[0]
                i, j, k = int(bad[0]), int(bad[1]), int(bad[2])
                raise AlgebraError(f"associativity fails at basis triple ({i}, {j}, {k})")
            return
        n = self.dim
        for i in range(n):
            bi = self.basis_element(i)
            for j in range(n):
                bij = self.multiply(bi, self.basis_element(j))
                for k in range(n):
                    bk = self.basis_element(k)
                    lhs = self.multiply(bij, bk)
                    rhs = self.multiply(bi, self.multiply(self.basis_element(j), bk))
                    if lhs != rhs:
                        raise AlgebraError(f"associativity fails at basis triple ({i}, {j}, {k})")

    # -- radical ---------------------------------------------------------------
    def radical_subspace(self) -> Subspace:
        """The Jacobson radical as a subspace of coordinate space (cached)."""
        if self._radical is not None:
            return self._radical
        if self._op_link is not None and self._op_link._radical is not None:
            self._radical = self._op_link._radical
            return self._radical
        if isinstance(self.field, RationalField):
            rad = _radical_trace_form(self)
        else:
            rad = _radical_gfp_layers(self)
        _assert_nilpotent_ideal(self, rad)
        self._radical = rad
        if self._op_link is not None:
            self._op_link._radical = rad
        return rad

    def radical_basis(self) -> list[Mat]:
        rad = self.radical_subspace()
        return [rad.basis.take_rows([i]).transpose() for i in range(rad.dim)]

    def is_semisimple(self) -> bool:
        return self.radical_subspace().dim == 0

    # -- primitive idempotents ---------------------------------------------------
    def primitive_idempotents(self) -> "PrimitiveDecomposition":
        if self._prim is not None:
            return self._prim
        if self._op_link is not None and self._op_link._prim is not None:
            self._prim = self._op_link._prim
            return self._prim
        self._prim = _primitive_idempotents(self)
        if self._op_link is not None:
            self._op_link._prim = self._prim
        return self._prim


class PrimitiveDecomposition:
    """Complete orthogonal set of primitive idempotents with block labels.

    Two idempotents share a block exactly when their projective covers are
    isomorphic; ``class_reps`` holds one index per block.
    """

    def __init__(self, idempotents: list[Mat], block_of: list[int]):
        self.idempotents = idempotents
        self.block_of = block_of
        self.n_blocks = (max(block_of) + 1) if block_of else 0
        self.class_reps = [block_of.index(b) for b in range(self.n_blocks)]

    def __len__(self) -> int:
        return len(self.idempotents)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_structure_constants(field: Field, dim: int, mult, one, provenance: str = "raw") -> Algebra:
    """Build and exhaustively validate an algebra from raw structure data."""
    one_mat = one if isinstance(one, Mat) else Mat.column(field, one)
    a = Algebra(field, dim, mult, one_mat, provenance=provenance)
    a.validate_unit()
    a.validate_associativity()
    return a


def opposite(a: Algebra) -> Algebra:
    """Opposite algebra: c_op[i][j][k] = c[j][i][k]; caches are shared."""
    if a._op_link is not None:
        return a._op_link
    if isinstance(a.field, PrimeField):
        mult = np.transpose(a.mult, (1, 0, 2))
    else:
        n = a.dim
        mult = [[[a.mult[j][i][k] for k in range(n)] for j in range(n)] for i in range(n)]
    rep = None
    if a._rep is not None:
        rep = [m.transpose() for m in a._rep]
    opp = Algebra(a.field, a.dim, mult, a.one, provenance=a.provenance, rep=rep)
    opp._op_link = a
    a._op_link = opp
    return opp


def direct_product(a: Algebra, b: Algebra) -> Algebra:
    """Block-diagonal product algebra with unit (1, 1)."""
    if a.field != b.field:
        raise AlgebraError("direct product of algebras over different fields")
    n, m = a.dim, b.dim
    field = a.field
    if isinstance(field, PrimeField):
        mult = np.zeros((n + m, n + m, n + m), dtype=np.int64)
        mult[:n, :n, :n] = a.mult
        mult[n:, n:, n:] = b.mult
    else:
        mult = [[[Fraction(0)] * (n + m) for _ in range(n + m)] for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    mult[i][j][k] = a.mult[i][j][k]
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    mult[n + i][n + j][n + k] = b.mult[i][j][k]
    one = Mat.vstack([a.one, b.one])
    rep = None
    if a._rep is not None and b._rep is not None:
        za = Mat.zeros(field, a._rep[0].rows, b._rep[0].cols)
        zb = Mat.zeros(field, b._rep[0].rows, a._rep[0].cols)
        rep = [Mat.vstack([Mat.hstack([ra, za]), Mat.hstack([zb, Mat.zeros(field, b._rep[0].rows, b._rep[0].cols)])]) for ra in a._rep]
        rep += [
            Mat.vstack([Mat.hstack([Mat.zeros(field, a._rep[0].rows, a._rep[0].cols), za]), Mat.hstack([zb, rb])])
            for rb in b._rep
        ]
    return Algebra(field, n + m, mult, one, provenance="product", rep=rep)


def corner_algebra(a: Algebra, e: Mat) -> tuple[Algebra, Mat]:
    """Corner algebra eAe with unit e; also returns the inclusion matrix.

    The inclusion matrix (dim A x dim eAe) carries corner coordinates back
    to coordinates in A.
    """
    if a.multiply(e, e) != e:
        raise AlgebraError("corner_algebra: input is not idempotent")
    proj_full = a.left_mult_matrix(e) @ a.right_mult_matrix(e)  # x -> e x e
    sub = Subspace.from_columns(proj_full)
    incl = sub.basis.transpose()  # columns form a basis of eAe
    m = sub.dim
    field = a.field
    # products of basis columns, re-expressed in corner coordinates
    prods = a.multiply_batches(incl, incl)  # columns r-major pairs
    coords = sub.coords(prods.transpose())
    if coords is None:
        raise AlgebraError("corner product left the corner subspace")
    if isinstance(field, PrimeField):
        mult = coords.data.reshape(m, m, m)
    else:
        mult = [[[coords[r * m + s, k] for k in range(m)] for s in range(m)] for r in range(m)]
    one_coords = sub.coords(e.transpose())
    if one_coords is None:
        raise AlgebraError("corner unit is not in the corner subspace")
    rep = None
    if a._rep is not None:
        rep_e = _combine_rep(a, e)
        img = Subspace.from_columns(rep_e)
        if img.dim:
            w = img.basis.transpose()  # columns: basis of e.V
            wl = _left_inverse(w)
            rep = []
            for c in range(m):
                elem = incl.take_cols([c])
                rep.append(wl @ (_combine_rep(a, elem) @ w))
    corner = Algebra(field, m, mult, one_coords.transpose(), provenance="corner", rep=rep)
    return corner, incl


def _combine_rep(a: Algebra, x: Mat) -> Mat:
    mats = a.rep_matrices()
    acc = Mat.zeros(a.field, mats[0].rows, mats[0].cols)
    for i in range(a.dim):
        xi = x[i, 0]
        if xi != 0:
            acc = acc + mats[i].scale(xi)
    return acc


def _left_inverse(w: Mat) -> Mat:
    """Left inverse of a full-column-rank matrix, via pivot row selection."""
    rows = _pivot_rows_of_columns(w)
    inv = w.take_rows(rows).inv()
    sel = Mat.zeros(w.field, w.cols, w.rows).mutable()
    one = w.field.one()
    for i, r in enumerate(rows):
        if isinstance(sel, np.ndarray):
            sel[i, r] = 1
        else:
            sel[i][r] = one
    return inv @ Mat(w.field, sel, copy=False)


def _pivot_rows_of_columns(w: Mat) -> list[int]:
    """Row indices such that w restricted to them is invertible."""
    red, piv = w.transpose().rref()
    return piv


def centralizer_algebra(generators: Sequence[Mat]) -> tuple[Algebra, Mat]:
    """Algebra of matrices commuting with all generators on a common space.

    Returns the abstract algebra plus the (t^2 x dim) flattening of its
    matrix basis; the algebra's faithful ``rep`` is that matrix basis.
    """
    gens = list(generators)
    if not gens:
        raise AlgebraError("centralizer needs at least one generator (use identity)")
    t = gens[0].rows
    field = gens[0].field
    if isinstance(field, PrimeField):
        blocks = []
        ident = np.eye(t, dtype=np.int64)
        for g in gens:
            G = g.data
            blocks.append((np.kron(G, ident) - np.kron(ident, G.T)) % field.p)
        sys = Mat(field, np.vstack(blocks), copy=False)
    else:
        rows = []
        for g in gens:
            for i in range(t):
                for j in range(t):
                    # row for entry (i, j) of G M - M G, unknowns vec(M) row-major
                    row = [Fraction(0)] * (t * t)
                    for k in range(t):
                        row[k * t + j] += g[i, k]
                        row[i * t + k] -= g[k, j]
                    rows.append(row)
        sys = Mat(field, rows, cols=t * t)
    basis_flat = sys.kernel()  # (t^2, dim) columns
    n = basis_flat.cols
    mats = [Mat(field, _unflatten(basis_flat.take_cols([c]), t), copy=False) for c in range(n)]
    # structure constants: flatten(m_i @ m_j) expressed in the flat basis
    rows_idx = _pivot_rows_of_columns(basis_flat)
    square_inv = basis_flat.take_rows(rows_idx).inv()
    if isinstance(field, PrimeField):
        stack = np.stack([m.data for m in mats])  # (n, t, t)
        prods = np.einsum("aij,bjk->abik", stack, stack, optimize=True) % field.p
        flat = prods.reshape(n * n, t * t).T  # (t^2, n^2)
        coords = (square_inv @ Mat(field, flat[rows_idx, :], copy=False)).data  # (n, n^2)
        mult = np.ascontiguousarray(coords.T.reshape(n, n, n))
    else:
        mult = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i_ in range(n):
            for j_ in range(n):
                pr = mats[i_] @ mats[j_]
                flatv = Mat(field, [[pr[r // t, r % t]] for r in range(t * t)], cols=1)
                coord = square_inv @ flatv.take_rows(rows_idx)
                for k in range(n):
                    mult[i_][j_][k] = coord[k, 0]
    ident_flat = Mat(field, [[field.one() if (r // t == r % t) else field.zero()] for r in range(t * t)], cols=1)
    one = square_inv @ ident_flat.take_rows(rows_idx)
    alg = Algebra(field, n, mult, one, provenance="centralizer", rep=mats)
    return alg, basis_flat


def _unflatten(col: Mat, t: int):
    if isinstance(col.field, PrimeField):
        return col.data[:, 0].reshape(t, t)
    return [[col[i * t + j, 0] for j in range(t)] for i in range(t)]


# ---------------------------------------------------------------------------
# radical computations
# ---------------------------------------------------------------------------


def _radical_trace_form(a: Algebra) -> Subspace:
    """Characteristic zero: radical of the bilinear form tr(L_x L_y)."""
    n = a.dim
    left = a.left_regular_action()
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = left[i] @ left[j]
            tr = sum(prod[k, k] for k in range(n))
            gram[i][j] = tr
            gram[j][i] = tr
    ker = Mat(QQ, gram, cols=n).kernel()
    return Subspace(a.field, n, ker.transpose())


def _radical_gfp_layers(a: Algebra) -> Subspace:
    """GF(p): descending ideal chain from p-power trace functions.

    Works on a faithful representation of dimension m; layer i constrains
    with gamma_i(z) = tr(lift(z)^(p^i)) / p^i mod p, for i = 0..ceil(log_p m).
    """
    p = a.field.p
    rep = a.rep_matrices()
    m = rep[0].rows
    stack = np.stack([r.data for r in rep])  # (n, m, m)
    n = a.dim
    level = 0
    while p**level < m:
        level += 1
    basis = np.eye(n, dtype=np.int64)  # rows = current ideal basis in A-coords
    for layer in range(level + 1):
        if basis.shape[0] == 0:
            break
        r = basis.shape[0]
        repbasis = np.tensordot(basis, stack, axes=(1, 0)) % p  # (r, m, m)
        prods = np.einsum("aij,bjk->abik", repbasis, repbasis, optimize=True) % p
        prods = prods.reshape(r * r, m, m)
        gammas = _gamma_traces(prods, p, layer)  # (r*r,)
        constraint = gammas.reshape(r, r)  # [x_index, y_index]
        ker = Mat(a.field, constraint.T).kernel()  # constraints rows indexed by y
        if ker.cols == r:
            continue
        basis = (ker.data.T @ basis) % p
        red, piv = Mat(a.field, basis).rref()
        basis = red.data[: len(piv)]
    return Subspace(a.field, n, Mat(a.field, basis, copy=False, cols=n))


def _gamma_traces(zs: np.ndarray, p: int, layer: int) -> np.ndarray:
    """gamma_layer for a batch of reduced matrices (entries in [0, p))."""
    if layer == 0:
        return np.trace(zs, axis1=1, axis2=2) % p
    mod = p ** (layer + 1)
    power = _batched_matrix_power_mod(zs % mod, p**layer, mod)
    traces = np.trace(power, axis1=1, axis2=2) % mod
    if np.any(traces % (p**layer)):
        raise AlgebraError("p-power trace not divisible; radical layering failed")
    return (traces // (p**layer)) % p


def _batched_matrix_power_mod(zs: np.ndarray, e: int, mod: int) -> np.ndarray:
    k, m, _ = zs.shape
    result = np.broadcast_to(np.eye(m, dtype=np.int64), (k, m, m)).copy()
    base = zs % mod
    while e > 0:
        if e & 1:
            result = np.einsum("aij,ajk->aik", result, base, optimize=True) % mod
        e >>= 1
        if e:
            base = np.einsum("aij,ajk->aik", base, base, optimize=True) % mod
    return result


def _assert_nilpotent_ideal(a: Algebra, rad: Subspace) -> None:
    """Certify the computed radical: a nilpotent two-sided ideal."""
    if rad.dim == 0:
        return
    basis_cols = rad.basis.transpose()
    # two-sided ideal: A*J and J*A stay inside J
    all_cols = Mat.identity(a.field, a.dim)
    left_prods = a.multiply_batches(all_cols, basis_cols)
    right_prods = a.multiply_batches(basis_cols, all_cols)
    if not rad.contains(left_prods.transpose()) or not rad.contains(right_prods.transpose()):
        raise AlgebraError("computed radical is not a two-sided ideal")
    current = basis_cols
    for _ in range(a.dim + 1):
        nxt = a.multiply_batches(current, basis_cols)
        sub = Subspace(a.field, a.dim, nxt.transpose())
        if sub.dim == 0:
            return
        current = sub.basis.transpose()
    raise AlgebraError("computed radical is not nilpotent")


# ---------------------------------------------------------------------------
# semisimple quotient and Wedderburn decomposition
# ---------------------------------------------------------------------------


class QuotientAlgebra:
    """A/J with projection (quotient coords) and a linear section."""

    def __init__(self, algebra: Algebra, quotient: Algebra, proj: Mat, sect: Mat):
        self.parent = algebra
        self.quotient = quotient
        self.proj = proj  # (s x n)
        self.sect = sect  # (n x s)


def semisimple_quotient(a: Algebra) -> QuotientAlgebra:
    rad = a.radical_subspace()
    n, s = a.dim, a.dim - rad.dim
    field = a.field
    # projection = quotient coordinates, section = non-pivot coordinate vectors
    proj_m = rad.quotient_coords(Mat.identity(field, n)).transpose()
    sect = Mat.zeros(field, n, s).mutable()
    one_f = field.one()
    for t, np_idx in enumerate(rad.nonpivots):
        if isinstance(sect, np.ndarray):
            sect[np_idx, t] = 1
        else:
            sect[np_idx][t] = one_f
    sect_m = Mat(field, sect, copy=False)
    prods = a.multiply_batches(sect_m, sect_m)  # (s*s) columns in A
    coords = proj_m @ prods  # (s, s*s)
    if isinstance(field, PrimeField):
        mult = np.ascontiguousarray(coords.data.T.reshape(s, s, s))
    else:
        mult = [[[coords[k, r * s + c] for k in range(s)] for c in range(s)] for r in range(s)]
    one = proj_m @ a.one
    quot = Algebra(field, s, mult, one, provenance="quotient")
    return QuotientAlgebra(a, quot, proj_m, sect_m)


def center_basis(a: Algebra) -> Mat:
    """Columns spanning the center {x : xy = yx for all y}."""
    rows = []
    for j in a.generator_indices():
        bj = a.basis_element(j)
        rows.append(a.right_mult_matrix(bj) - a.left_mult_matrix(bj))
    if not rows:
        return Mat.identity(a.field, a.dim)
    return Mat.vstack(rows).kernel()


def _poly_to_sympy(coeffs: list, field: Field, x):
    if isinstance(field, PrimeField):
        return sympy.Poly([int(c) for c in reversed(coeffs)], x, modulus=field.p)
    return sympy.Poly([sympy.Rational(c) for c in reversed(coeffs)], x, domain="QQ")


def _poly_coeffs_from_sympy(poly, field: Field) -> list:
    cs = poly.all_coeffs()  # leading first
    if isinstance(field, PrimeField):
        return [int(c) % field.p for c in reversed(cs)]
    return [Fraction(c.p, c.q) for c in reversed(cs)]


def central_primitive_idempotents(a: Algebra) -> list[Mat]:
    """Primitive central idempotents of a (semisimple, split or not) algebra."""
    x = sympy.Symbol("x")
    field = a.field
    blocks: list[Mat] = [a.one]
    zc = center_basis(a)
    for c in range(zc.cols):
        z = zc.take_cols([c])
        new_blocks: list[Mat] = []
        for eps in blocks:
            zeps = a.multiply(z, eps)
            # minimal polynomial of z*eps in the unital algebra eps*A*eps
            coeffs = _minimal_poly_in_corner(a, zeps, eps)
            poly = _poly_to_sympy(coeffs, field, x)
            factors = poly.factor_list()[1]
            if len(factors) == 1 and factors[0][1] == 1:
                new_blocks.append(eps)
                continue
            for fac, mult_ in factors:
                if mult_ != 1:
                    raise AlgebraError("center not semisimple: repeated factor in minimal polynomial")
                cofactor = poly.exquo(fac)
                inv = _poly_invert(cofactor, fac, field, x)
                g = (cofactor * inv).rem(poly)
                e = _evaluate_poly_corner(a, _poly_coeffs_from_sympy(g, field), zeps, eps)
                if e.is_zero():
                    raise AlgebraError("central idempotent construction failed")
                new_blocks.append(e)
        blocks = new_blocks
    total = a.zero_element()
    for i, e in enumerate(blocks):
        if a.multiply(e, e) != e:
            raise AlgebraError("central idempotent is not idempotent")
        for j, f2 in enumerate(blocks):
            if i != j and not a.multiply(e, f2).is_zero():
                raise AlgebraError("central idempotents are not orthogonal")
        total = total + e
    if total != a.one:
        raise AlgebraError("central idempotents do not sum to one")
    return blocks


def _poly_invert(f, g, field: Field, x):
    if isinstance(field, PrimeField):
        return sympy.Poly(sympy.invert(f.as_expr(), g.as_expr(), x, modulus=field.p), x, modulus=field.p)
    return sympy.Poly(sympy.invert(f.as_expr(), g.as_expr(), x), x, domain="QQ")


def _minimal_poly_in_corner(a: Algebra, z: Mat, eps: Mat) -> list:
    """Minimal polynomial of z in the unital algebra (eps A eps, unit eps)."""
    vecs = [eps]
    power = eps
    while True:
        power = a.multiply(z, power)
        span = Mat.hstack(vecs)
        sol = span.solve(power)
        if sol is not None:
            coeffs = [a.field.neg(sol[i, 0]) for i in range(len(vecs))]
            return coeffs + [a.field.one()]
        vecs.append(power)


def _evaluate_poly_corner(a: Algebra, coeffs: list, z: Mat, eps: Mat) -> Mat:
    acc = a.zero_element()
    power = eps
    for i, c in enumerate(coeffs):
        if c != 0:
            acc = acc + power.scale(c)
        if i + 1 < len(coeffs):
            power = a.multiply(z, power)
    return acc


def _primitive_idempotent_in_simple_block(a: Algebra, rng: np.random.Generator) -> Mat:
    """One primitive idempotent of a split simple algebra.

    Strategy: locate a minimal left ideal L (dimension sqrt(dim)), then the
    unique e in L with e z = z for suitable z in L is a primitive idempotent.
    """
    d = a.dim
    s = int(round(d**0.5))
    if s * s != d:
        raise AlgebraError("simple block is not split: dimension is not a perfect square")
    if d == 1:
        return a.one
    # find x with dim(Ax) == s (minimal left ideal)
    best_vec, best_dim = None, None
    candidates = [a.basis_element(i) for i in range(d)]
    tries = 0
    while True:
        for x in candidates:
            if x.is_zero():
                continue
            lx = _left_ideal(a, x)
            if lx.dim and (best_dim is None or lx.dim < best_dim):
                best_vec, best_dim = x, lx.dim
                if best_dim == s:
                    break
        if best_dim == s:
            break
        # refine inside the current smallest ideal with seeded random picks
        tries += 1
        if tries > 60:
            raise AlgebraError("failed to locate a minimal left ideal (block not split?)")
        ideal = _left_ideal(a, best_vec)
        coeff = rng.integers(0, a.field.p, size=ideal.dim) if isinstance(a.field, PrimeField) else None
        if coeff is None:
            coeff = rng.integers(-3, 4, size=ideal.dim)
        vec = Mat.zeros(a.field, d, 1)
        for i in range(ideal.dim):
            c = int(coeff[i])
            if c:
                vec = vec + ideal.basis.take_rows([i]).transpose().scale(a.field.normalize(c) if isinstance(a.field, PrimeField) else Fraction(c))
        candidates = [vec]
    ideal = _left_ideal(a, best_vec)
    # choose z in L with L z != 0, solve e z = z within L
    basis_cols = ideal.basis.transpose()
    for j in range(ideal.dim):
        z = basis_cols.take_cols([j])
        lz = a.multiply_batches(basis_cols, z)
        if not lz.is_zero():
            rz = a.right_mult_matrix(z)
            sys = rz @ basis_cols  # columns: w_i * z for basis w_i of L
            sol = sys.solve(z)
            if sol is None:
                continue
            e = basis_cols @ sol
            if not a.multiply(e, e) == e or e.is_zero():
                raise AlgebraError("minimal-ideal idempotent construction failed")
            return e
    raise AlgebraError("no usable element in minimal left ideal (L^2 = 0 in semisimple?)")


def _left_ideal(a: Algebra, x: Mat) -> Subspace:
    # columns of R_x are the products b_i * x, so its column space is A x
    return Subspace.from_columns(a.right_mult_matrix(x))


def _primitive_set_semisimple(a: Algebra, rng: np.random.Generator) -> tuple[list[Mat], list[int]]:
    """All primitive idempotents of a split semisimple algebra, with block ids."""
    if a.dim == 0:
        return [], []
    centrals = central_primitive_idempotents(a)
    idems: list[Mat] = []
    blocks: list[int] = []
    for b_id, eps in enumerate(centrals):
        block, incl = corner_algebra(a, eps)
        if _corner_center_dim(block) != 1:
            raise AlgebraError("field not splitting: simple block has a larger center (extend the base field)")
        remaining = block
        rem_incl = incl
        while True:
            dim = remaining.dim
            if dim == 0:
                break
            if dim == 1:
                idems.append(rem_incl @ remaining.one)
                blocks.append(b_id)
                break
            e = _primitive_idempotent_in_simple_block(remaining, rng)
            idems.append(rem_incl @ e)
            blocks.append(b_id)
            f = remaining.one - e
            if f.is_zero():
                break
            sub, sub_incl = corner_algebra(remaining, f)
            rem_incl = rem_incl @ sub_incl
            remaining = sub
    return idems, blocks


def _corner_center_dim(block: Algebra) -> int:
    return center_basis(block).cols


def _primitive_idempotents(a: Algebra) -> PrimitiveDecomposition:
    rng = np.random.default_rng(20240 + a.dim)
    quot = semisimple_quotient(a)
    bar_idems, blocks = _primitive_set_semisimple(quot.quotient, rng)
    lifted: list[Mat] = []
    total = a.zero_element()
    nil_bound = a.dim + 1
    for bar in bar_idems:
        x = quot.sect @ bar
        # project into the corner orthogonal to previously lifted idempotents
        cmpl = a.one - total
        x = a.multiply(cmpl, a.multiply(x, cmpl))
        e = _lift_idempotent_element(a, x, nil_bound)
        lifted.append(e)
        total = total + e
    if lifted and total != a.one:
        raise AlgebraError("lifted idempotents do not sum to the unit")
    if not lifted and a.dim > 0:
        raise AlgebraError("no idempotents found in a nonzero algebra")
    # orthogonality and primitivity certificates
    for i, e in enumerate(lifted):
        for j, f in enumerate(lifted):
            prod = a.multiply(e, f)
            expected = e if i == j else a.zero_element()
            if prod != expected:
                raise AlgebraError("lifted idempotents are not orthogonal")
    rad = a.radical_subspace()
    for e in lifted:
        pe = a.left_mult_matrix(e) @ a.right_mult_matrix(e)
        corner_dim = Subspace.from_columns(pe).dim
        rad_corner = Subspace.from_columns(pe @ rad.basis.transpose()).dim if rad.dim else 0
        if corner_dim - rad_corner != 1:
            raise AlgebraError("field not splitting: corner of idempotent is not local of residue dimension 1")
    return PrimitiveDecomposition(lifted, blocks)


def _lift_idempotent_element(a: Algebra, x: Mat, nil_bound: int) -> Mat:
    e = x
    for _ in range(2 * max(nil_bound, 1)):
        e2 = a.multiply(e, e)
        if e2 == e:
            return e
        e = e2.scale(3) - a.multiply(e2, e).scale(2)
    e2 = a.multiply(e, e)
    if e2 == e:
        return e
    raise AlgebraError("idempotent lifting did not stabilize")
