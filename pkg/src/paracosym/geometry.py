"""Coordinate-chart tensor calculus.

Conventions used throughout the package:

- TensorField of valence (r, s) stores components with the r contravariant
  indices first, then the s covariant ones.
- Curvature: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
  stored as a (1,3) field R[l, i, j, k] = (R(d_i, d_j) d_k)^l.
- Ricci tensor S_jk = sum_i R[i, i, j, k]; Ricci operator Q = g^{-1} S;
  scalar curvature r = tr Q.  This sign choice is the one for which the
  three-dimensional decomposition of R through Q holds identically, which
  the test suite pins down empirically.
- Covariant derivative appends its direction index as a trailing covariant
  slot: (nabla T)[..., c].

Components are raw sympy expressions canonicalized with cancel(); they are
exact rational functions of the coordinates and any declared exponential
generators (see scalars.ScalarField for the derivative rule).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp
from sympy.combinatorics import Permutation

from .errors import (
    DegenerateMetricError,
    SingularMetricError,
    ValenceError,
)
from .scalars import GeneratorDecl, ScalarContext, ScalarField


class Chart:
    """An odd-dimensional coordinate chart with a rational base point."""

    def __init__(self, context: ScalarContext, base_point: Sequence):
        if len(base_point) != context.dim:
            raise ValueError("base point dimension mismatch")
        self.context = context
        self.base_point = tuple(Fraction(p) for p in base_point)

    @property
    def dim(self) -> int:
        return self.context.dim

    def __eq__(self, other):
        return (
            isinstance(other, Chart)
            and self.context == other.context
            and self.base_point == other.base_point
        )

    def __hash__(self):
        return hash((self.context, self.base_point))

    def pdiff(self, expr: sp.Expr, coord_index: int) -> sp.Expr:
        """Partial derivative with the exponential-generator chain rule."""
        ctx = self.context
        x = ctx.coord_symbols[coord_index]
        d = sp.diff(expr, x)
        for gen, gsym in zip(ctx.generators, ctx.gen_symbols):
            if gen.coord_index == coord_index and gsym in expr.free_symbols:
                d = d + gen.rate * gsym * sp.diff(expr, gsym)
        return d

    def point_subs(self, point: Optional[Sequence] = None) -> dict:
        pt = self.base_point if point is None else [Fraction(p) for p in point]
        subs = {
            s: sp.Rational(Fraction(p).numerator, Fraction(p).denominator)
            for s, p in zip(self.context.coord_symbols, pt)
        }
        return subs


def _canon(e):
    return sp.cancel(sp.together(e))


class TensorField:
    """Componentwise exact (r,s)-tensor field on a chart."""

    __slots__ = ("chart", "r", "s", "array")

    def __init__(self, chart: Chart, r: int, s: int, array):
        self.chart = chart
        self.r = r
        self.s = s
        n = chart.dim
        if r + s == 0:
            expr = array if isinstance(array, sp.Expr) else sp.sympify(array)
            self.array = sp.ImmutableDenseNDimArray([_canon(expr)], (1,))
        else:
            arr = sp.ImmutableDenseNDimArray(array)
            if arr.shape != (n,) * (r + s):
                raise ValenceError(
                    f"component array shape {arr.shape} does not match valence "
                    f"({r},{s}) in dimension {n}"
                )
            self.array = arr.applyfunc(_canon)

    # -- construction helpers -----------------------------------------

    @staticmethod
    def zeros(chart: Chart, r: int, s: int) -> "TensorField":
        n = chart.dim
        if r + s == 0:
            return TensorField(chart, 0, 0, sp.Integer(0))
        return TensorField(
            chart, r, s, sp.ImmutableDenseNDimArray.zeros(*((n,) * (r + s)))
        )

    @staticmethod
    def from_scalars(chart: Chart, r: int, s: int, fields) -> "TensorField":
        def strip(x):
            if isinstance(x, ScalarField):
                return x.expr
            if isinstance(x, (list, tuple)):
                return [strip(y) for y in x]
            return sp.sympify(x)

        return TensorField(chart, r, s, strip(fields))

    def __getitem__(self, idx):
        if self.r + self.s == 0:
            return self.array[0]
        return self.array[idx]

    @property
    def rank(self) -> int:
        return self.r + self.s

    def indices(self):
        return itertools.product(range(self.chart.dim), repeat=self.rank)

    # -- algebra -------------------------------------------------------

    def _check_same_valence(self, other: "TensorField"):
        if self.chart != other.chart:
            raise ValenceError("tensors live on different charts")
        if (self.r, self.s) != (other.r, other.s):
            raise ValenceError(
                f"valence mismatch: ({self.r},{self.s}) vs ({other.r},{other.s})"
            )

    def __add__(self, other):
        self._check_same_valence(other)
        return TensorField(self.chart, self.r, self.s, self.array + other.array)

    def __sub__(self, other):
        self._check_same_valence(other)
        return TensorField(self.chart, self.r, self.s, self.array - other.array)

    def __neg__(self):
        return TensorField(self.chart, self.r, self.s, -self.array)

    def scale(self, f) -> "TensorField":
        expr = f.expr if isinstance(f, ScalarField) else sp.sympify(f)
        return TensorField(self.chart, self.r, self.s, self.array * expr)

    def is_zero(self) -> bool:
        return all(self.array[i] == 0 for i in self.indices()) if self.rank else self.array[0] == 0

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        if self.chart != other.chart or (self.r, self.s) != (other.r, other.s):
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.chart, self.r, self.s, self.array))

    def first_nonzero(self) -> Optional[Tuple[Tuple[int, ...], sp.Expr]]:
        """Witness component for a failed identity, or None if zero."""
        if self.rank == 0:
            return None if self.array[0] == 0 else ((), self.array[0])
        for idx in self.indices():
            if self.array[idx] != 0:
                return idx, self.array[idx]
        return None

    # -- evaluation ----------------------------------------------------

    def eval_at(self, point: Optional[Sequence] = None):
        """Exact nested value at a rational point (generator-free only)."""
        subs = self.chart.point_subs(point)
        gens = set(self.chart.context.gen_symbols)

        def value(e):
            if e.free_symbols & gens:
                raise ValueError("exact evaluation of a generator-bearing tensor")
            num, den = sp.fraction(sp.cancel(e))
            d = den.subs(subs)
            if d == 0:
                from .errors import PoleError

                raise PoleError(tuple(subs.values()))
            return sp.Rational(num.subs(subs)) / sp.Rational(d)

        if self.rank == 0:
            return value(self.array[0])
        return self.array.applyfunc(value)

    def numeric_at(self, point: Optional[Sequence] = None):
        """Float nested value; generators evaluate as exp(rate*coord)."""
        subs = self.chart.point_subs(point)
        pt = self.chart.base_point if point is None else [Fraction(p) for p in point]
        for gen, gsym in zip(self.chart.context.generators, self.chart.context.gen_symbols):
            p = Fraction(pt[gen.coord_index])
            subs[gsym] = sp.exp(gen.rate * sp.Rational(p.numerator, p.denominator))
        if self.rank == 0:
            return float(self.array[0].subs(subs))
        return self.array.applyfunc(lambda e: sp.Float(e.subs(subs), 30))

    def component(self, *idx) -> ScalarField:
        return ScalarField(self.chart.context, self[idx] if idx else self.array[0])


# --------------------------------------------------------------------
# pointwise linear algebra helpers


def tensor_product(a: TensorField, b: TensorField) -> TensorField:
    """Outer product; index order (a-upper, b-upper, a-lower, b-lower)."""
    if a.chart != b.chart:
        raise ValenceError("tensors live on different charts")
    n = a.chart.dim
    r, s = a.r + b.r, a.s + b.s
    if a.rank == 0:
        return b.scale(ScalarField(a.chart.context, a.array[0]))
    if b.rank == 0:
        return a.scale(ScalarField(b.chart.context, b.array[0]))
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (r + s)))
    for ia in a.indices():
        va = a.array[ia]
        if va == 0:
            continue
        au, al = ia[: a.r], ia[a.r :]
        for ib in b.indices():
            vb = b.array[ib]
            if vb == 0:
                continue
            bu, bl = ib[: b.r], ib[b.r :]
            out[au + bu + al + bl] = va * vb
    return TensorField(a.chart, r, s, out)


def contract(t: TensorField, upper: int, lower: int) -> TensorField:
    """Contract the upper-th contravariant with the lower-th covariant index."""
    if not (0 <= upper < t.r and 0 <= lower < t.s):
        raise ValenceError(f"cannot contract ({upper},{lower}) on valence ({t.r},{t.s})")
    n = t.chart.dim
    pos_u, pos_l = upper, t.r + lower
    r, s = t.r - 1, t.s - 1
    if r + s == 0:
        total = sum(t.array[(k, k)] for k in range(n))
        return TensorField(t.chart, 0, 0, total)
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (r + s)))
    for idx in itertools.product(range(n), repeat=r + s):
        total = sp.Integer(0)
        for k in range(n):
            full = list(idx)
            full.insert(pos_u, k)
            full.insert(pos_l, k)
            total += t.array[tuple(full)]
        out[idx] = total
    return TensorField(t.chart, r, s, out)


def compose11(a: TensorField, b: TensorField) -> TensorField:
    """(a . b)^i_j = a^i_k b^k_j for (1,1)-tensors."""
    for t in (a, b):
        if (t.r, t.s) != (1, 1):
            raise ValenceError("compose11 needs (1,1)-tensors")
    n = a.chart.dim
    ma = sp.Matrix(n, n, lambda i, j: a.array[i, j])
    mb = sp.Matrix(n, n, lambda i, j: b.array[i, j])
    return TensorField(a.chart, 1, 1, sp.ImmutableDenseNDimArray(ma * mb))


def apply11(a: TensorField, v: TensorField) -> TensorField:
    """(a v)^i = a^i_k v^k."""
    if (a.r, a.s) != (1, 1) or (v.r, v.s) != (1, 0):
        raise ValenceError("apply11 needs a (1,1)-tensor and a vector")
    n = a.chart.dim
    out = [sum(a.array[i, k] * v.array[k] for k in range(n)) for i in range(n)]
    return TensorField(a.chart, 1, 0, out)


def covector_apply(w: TensorField, v: TensorField) -> ScalarField:
    """w(v) for a (0,1) and a (1,0) field."""
    if (w.r, w.s) != (0, 1) or (v.r, v.s) != (1, 0):
        raise ValenceError("covector_apply needs a covector and a vector")
    n = w.chart.dim
    return ScalarField(
        w.chart.context, sum(w.array[k] * v.array[k] for k in range(n))
    )


def metric_apply(g: TensorField, v: TensorField, w: TensorField) -> ScalarField:
    """g(v, w) for a (0,2) field and two vectors."""
    n = g.chart.dim
    total = sum(
        g.array[i, j] * v.array[i] * w.array[j] for i in range(n) for j in range(n)
    )
    return ScalarField(g.chart.context, total)


def lower_index(g: TensorField, v: TensorField) -> TensorField:
    """v^i -> g_ij v^j (vector to covector)."""
    n = g.chart.dim
    out = [sum(g.array[j, i] * v.array[j] for j in range(n)) for i in range(n)]
    return TensorField(g.chart, 0, 1, out)


def trace11(t: TensorField) -> ScalarField:
    if (t.r, t.s) != (1, 1):
        raise ValenceError("trace11 needs a (1,1)-tensor")
    n = t.chart.dim
    return ScalarField(t.chart.context, sum(t.array[i, i] for i in range(n)))


def identity_tensor(chart: Chart) -> TensorField:
    n = chart.dim
    return TensorField(chart, 1, 1, sp.ImmutableDenseNDimArray(sp.eye(n)))


# --------------------------------------------------------------------
# metric machinery


def metric_matrix(g: TensorField) -> sp.Matrix:
    n = g.chart.dim
    return sp.Matrix(n, n, lambda i, j: g.array[i, j])


def metric_inverse(g: TensorField) -> TensorField:
    n = g.chart.dim
    m = metric_matrix(g)
    det = sp.cancel(m.det())
    if det == 0:
        raise SingularMetricError(f"metric determinant is identically zero")
    inv = m.adjugate().applyfunc(lambda e: sp.cancel(e / det))
    return TensorField(g.chart, 2, 0, sp.ImmutableDenseNDimArray(inv))


def christoffel(g: TensorField) -> "ConnectionCoefficients":
    return ConnectionCoefficients.from_metric(g)


class ConnectionCoefficients:
    """Levi-Civita connection coefficients Gamma^k_ij on a chart."""

    def __init__(self, chart: Chart, gamma):
        self.chart = chart
        self.gamma = sp.ImmutableDenseNDimArray(gamma).applyfunc(_canon)

    @staticmethod
    def from_metric(g: TensorField) -> "ConnectionCoefficients":
        chart = g.chart
        n = chart.dim
        ginv = metric_inverse(g)
        dg = [
            [[chart.pdiff(g.array[i, j], k) for j in range(n)] for i in range(n)]
            for k in range(n)
        ]
        gamma = sp.MutableDenseNDimArray.zeros(n, n, n)
        for k in range(n):
            for i in range(n):
                for j in range(i, n):
                    val = sum(
                        ginv.array[k, l]
                        * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])
                        for l in range(n)
                    ) / 2
                    gamma[k, i, j] = val
                    gamma[k, j, i] = val
        return ConnectionCoefficients(chart, gamma)

    def __getitem__(self, idx):
        return self.gamma[idx]


def covariant_derivative(t: TensorField, conn: ConnectionCoefficients) -> TensorField:
    """nabla T with the direction index appended as the last covariant slot."""
    chart = t.chart
    n = chart.dim
    r, s = t.r, t.s
    if r + s == 0:
        return TensorField(chart, 0, 1, [chart.pdiff(t.array[0], c) for c in range(n)])
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (r + s + 1)))
    for idx in t.indices():
        for c in range(n):
            val = chart.pdiff(t.array[idx], c)
            for p in range(r):
                for m in range(n):
                    swapped = idx[:p] + (m,) + idx[p + 1 :]
                    val += conn.gamma[idx[p], c, m] * t.array[swapped]
            for q in range(s):
                pos = r + q
                for m in range(n):
                    swapped = idx[:pos] + (m,) + idx[pos + 1 :]
                    val -= conn.gamma[m, c, idx[pos]] * t.array[swapped]
            out[idx + (c,)] = val
    return TensorField(chart, r, s + 1, out)


def directional_covariant(t: TensorField, conn: ConnectionCoefficients, v: TensorField) -> TensorField:
    """nabla_v T: contract the trailing direction slot of nabla T with v."""
    nt = covariant_derivative(t, conn)
    n = t.chart.dim
    if t.rank == 0:
        return TensorField(t.chart, 0, 0, sum(nt.array[c] * v.array[c] for c in range(n)))
    out = sp.MutableDenseNDimArray.zeros(*((n,) * t.rank))
    for idx in t.indices():
        out[idx] = sum(nt.array[idx + (c,)] * v.array[c] for c in range(n))
    return TensorField(t.chart, t.r, t.s, out)


def lie_derivative(v: TensorField, t: TensorField) -> TensorField:
    """Connection-free Lie derivative along the vector field v."""
    if (v.r, v.s) != (1, 0):
        raise ValenceError("lie_derivative direction must be a vector field")
    chart = t.chart
    n = chart.dim
    r, s = t.r, t.s
    if r + s == 0:
        return TensorField(
            chart, 0, 0, sum(v.array[c] * chart.pdiff(t.array[0], c) for c in range(n))
        )
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (r + s)))
    for idx in t.indices():
        val = sum(v.array[c] * chart.pdiff(t.array[idx], c) for c in range(n))
        for p in range(r):
            for m in range(n):
                swapped = idx[:p] + (m,) + idx[p + 1 :]
                val -= chart.pdiff(v.array[idx[p]], m) * t.array[swapped]
        for q in range(s):
            pos = r + q
            for m in range(n):
                swapped = idx[:pos] + (m,) + idx[pos + 1 :]
                val += chart.pdiff(v.array[m], idx[pos]) * t.array[swapped]
        out[idx] = val
    return TensorField(chart, r, s, out)


def lie_derivative_nabla(v: TensorField, t: TensorField, conn: ConnectionCoefficients) -> TensorField:
    """Lie derivative via any torsion-free connection; must agree with lie_derivative."""
    chart = t.chart
    n = chart.dim
    r, s = t.r, t.s
    nt = covariant_derivative(t, conn)
    nv = covariant_derivative(v, conn)
    if r + s == 0:
        return TensorField(chart, 0, 0, sum(v.array[c] * nt.array[c] for c in range(n)))
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (r + s)))
    for idx in t.indices():
        val = sum(v.array[c] * nt.array[idx + (c,)] for c in range(n))
        for p in range(r):
            for m in range(n):
                swapped = idx[:p] + (m,) + idx[p + 1 :]
                val -= nv.array[idx[p], m] * t.array[swapped]
        for q in range(s):
            pos = r + q
            for m in range(n):
                swapped = idx[:pos] + (m,) + idx[pos + 1 :]
                val += nv.array[m, idx[pos]] * t.array[swapped]
        out[idx] = val
    return TensorField(chart, r, s, out)


def bracket(v: TensorField, w: TensorField) -> TensorField:
    """[v, w] = L_v w."""
    return lie_derivative(v, w)


def is_antisymmetric(t: TensorField) -> bool:
    if t.r != 0:
        return False
    k = t.s
    if k <= 1:
        return True
    for idx in t.indices():
        for a in range(k - 1):
            swapped = list(idx)
            swapped[a], swapped[a + 1] = swapped[a + 1], swapped[a]
            if sp.cancel(t.array[idx] + t.array[tuple(swapped)]) != 0:
                return False
    return True


def exterior_derivative(omega: TensorField) -> TensorField:
    """d of an antisymmetric (0,k) field, shuffle-normalized."""
    if omega.r != 0:
        raise ValenceError("exterior derivative needs a (0,k) field")
    if not is_antisymmetric(omega):
        raise ValenceError("exterior derivative input must be antisymmetric")
    chart = omega.chart
    n = chart.dim
    k = omega.s
    if k == 0:
        return TensorField(chart, 0, 1, [chart.pdiff(omega.array[0], c) for c in range(n)])
    out = sp.MutableDenseNDimArray.zeros(*((n,) * (k + 1)))
    for idx in itertools.product(range(n), repeat=k + 1):
        val = sp.Integer(0)
        for j in range(k + 1):
            rest = idx[:j] + idx[j + 1 :]
            val += (-1) ** j * chart.pdiff(omega.array[rest], idx[j])
        out[idx] = val
    return TensorField(chart, 0, k + 1, out)


def wedge(a: TensorField, b: TensorField) -> TensorField:
    """Wedge of antisymmetric forms with (dx^dy)(d_x, d_y) = 1 normalization."""
    if a.r != 0 or b.r != 0:
        raise ValenceError("wedge needs (0,k) fields")
    if not is_antisymmetric(a) or not is_antisymmetric(b):
        raise ValenceError("wedge inputs must be antisymmetric")
    chart = a.chart
    n = chart.dim
    k1, k2 = a.s, b.s
    if k1 == 0 or k2 == 0:
        return tensor_product(a, b)
    k = k1 + k2
    norm = sp.Rational(1, sp.factorial(k1) * sp.factorial(k2))
    out = sp.MutableDenseNDimArray.zeros(*((n,) * k))
    for idx in itertools.product(range(n), repeat=k):
        if len(set(idx)) < k:
            continue
        val = sp.Integer(0)
        for perm in itertools.permutations(range(k)):
            sign = Permutation(perm).signature()
            p = tuple(idx[perm[t]] for t in range(k))
            val += sign * a.array[p[:k1]] * b.array[p[k1:]]
        out[idx] = val * norm
    return TensorField(chart, 0, k, out)


# --------------------------------------------------------------------
# curvature


def riemann(conn: ConnectionCoefficients) -> TensorField:
    """R[l, i, j, k] = component of R(d_i, d_j) d_k along d_l."""
    chart = conn.chart
    n = chart.dim
    G = conn.gamma
    out = sp.MutableDenseNDimArray.zeros(n, n, n, n)
    for l in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    val = chart.pdiff(G[l, j, k], i) - chart.pdiff(G[l, i, k], j)
                    val += sum(
                        G[l, i, m] * G[m, j, k] - G[l, j, m] * G[m, i, k]
                        for m in range(n)
                    )
                    val = _canon(val)
                    out[l, i, j, k] = val
                    out[l, j, i, k] = -val
    return TensorField(chart, 1, 3, out)


def riemann_apply(R: TensorField, x: TensorField, y: TensorField, z: TensorField) -> TensorField:
    """The vector field R(x, y) z."""
    n = R.chart.dim
    out = [
        sum(
            R.array[l, i, j, k] * x.array[i] * y.array[j] * z.array[k]
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )
        for l in range(n)
    ]
    return TensorField(R.chart, 1, 0, out)


def ricci_tensor(R: TensorField) -> TensorField:
    n = R.chart.dim
    out = sp.MutableDenseNDimArray.zeros(n, n)
    for j in range(n):
        for k in range(n):
            out[j, k] = sum(R.array[i, i, j, k] for i in range(n))
    return TensorField(R.chart, 0, 2, out)


def ricci_operator(S: TensorField, g: TensorField) -> TensorField:
    n = g.chart.dim
    ginv = metric_inverse(g)
    out = sp.MutableDenseNDimArray.zeros(n, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = sum(ginv.array[i, k] * S.array[k, j] for k in range(n))
    return TensorField(g.chart, 1, 1, out)


def scalar_curvature(S: TensorField, g: TensorField) -> ScalarField:
    return trace11(ricci_operator(S, g))


# --------------------------------------------------------------------
# signature


def signature_at(g: TensorField, point: Optional[Sequence] = None) -> Tuple[int, int]:
    """(positive, negative) inertia of g at a rational point.

    Exact symmetric congruence diagonalization over the rationals; never
    touches eigenvalues, so no irrationals appear.  Generator symbols are
    substituted by their exact exp(rate*coord) values at the point, which
    keeps the elimination symbolic but still decidable.
    """
    n = g.chart.dim
    subs = g.chart.point_subs(point)
    ctx = g.chart.context
    for gen, gsym in zip(ctx.generators, ctx.gen_symbols):
        coord_val = subs[ctx.coord_symbols[gen.coord_index]]
        subs[gsym] = sp.exp(gen.rate * coord_val)
    m = sp.Matrix(n, n, lambda i, j: sp.simplify(g.array[i, j].subs(subs)))
    pos = neg = 0
    work = m[:, :]
    size = n
    while size > 0:
        work = work.applyfunc(sp.simplify)
        # find a nonzero diagonal pivot
        piv = next((i for i in range(size) if work[i, i] != 0), None)
        if piv is None:
            ij = next(
                (
                    (i, j)
                    for i in range(size)
                    for j in range(i + 1, size)
                    if work[i, j] != 0
                ),
                None,
            )
            if ij is None:
                raise DegenerateMetricError(
                    f"metric degenerate at point {point if point is not None else g.chart.base_point}"
                )
            i, j = ij
            # congruence: add row/col j to row/col i to surface a diagonal entry
            work[i, :] = work[i, :] + work[j, :]
            work[:, i] = work[:, i] + work[:, j]
            piv = i
        d = work[piv, piv]
        is_pos = d.is_positive
        if is_pos is None:
            is_pos = float(d.evalf(30)) > 0
        if is_pos:
            pos += 1
        else:
            neg += 1
        # eliminate the pivot row/column symmetrically (E m E^T)
        keep = [i for i in range(size) if i != piv]
        factors = {i: work[i, piv] / d for i in keep}
        for i in keep:
            if factors[i] != 0:
                work[i, :] = work[i, :] - factors[i] * work[piv, :]
        for i in keep:
            if factors[i] != 0:
                work[:, i] = work[:, i] - factors[i] * work[:, piv]
        work = work.extract(keep, keep)
        size -= 1
    if pos + neg < n:
        raise DegenerateMetricError("metric degenerate at point")
    return pos, neg
