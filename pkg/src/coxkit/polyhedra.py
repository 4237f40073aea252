"""Exact rational polyhedral cones and lattice polytopes.

Cones carry both a generator and a facet (inward normal) representation,
kept consistent by exact double-description conversion.  Polytopes are
vertex lists with exact rational coordinates; facet representations are
derived through the cone over the polytope.  Hilbert bases are computed
by triangulating a pointed cone and enumerating fundamental
parallelepipeds.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import PreconditionError
from .linalg import (
    IntMatrix,
    dot,
    hermite_normal_form,
    int_inverse_unimodular,
    integer_kernel_saturated,
    primitive,
    rational_solve,
    smith_normal_form,
    vec_gcd,
)


class EmptyInput(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class DimensionTooLarge(PreconditionError):
    pass


class NotPointed(PreconditionError):
    pass


class DeterminantTooLarge(PreconditionError):
    pass


HILBERT_DET_CAP = 10**6
LATTICE_DIM_CAP = 4


def _scale_primitive(v):
    """Primitive integer vector on the ray through a rational vector v."""
    v = [Fraction(x) for x in v]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return primitive([int(x * lcm) for x in v])


def _extreme_rays_of_halfspaces(normals, dim):
    """Extreme rays and lineality basis of {x : <n, x> >= 0 for all n}.

    Returns (rays, lineality_rows).  Rays are primitive representatives of
    the extreme rays of the pointed quotient by the lineality space,
    lifted back to Z^dim; together with +/- the lineality rows they
    generate the cone.
    """
    normals = [tuple(int(x) for x in n) for n in normals]
    normals = sorted(set(n for n in normals if any(n)))
    A = IntMatrix(normals, cols=dim)
    lin = integer_kernel_saturated(A)
    s = lin.rows
    q = dim - s
    if q == 0:
        return [], lin.row_list()

    if s == 0:
        trans = None
        qnormals = normals
    else:
        # unimodular T mapping the lineality lattice onto Z^s x 0
        snf = smith_normal_form(lin.transpose())
        T = snf.U
        T_inv = int_inverse_unimodular(T)
        tit = T_inv.transpose()
        qnormals = []
        for n in normals:
            g = tit.apply(n)
            assert all(x == 0 for x in g[:s])
            qnormals.append(g[s:])
        trans = T_inv

    qnormals_u = sorted(set(qnormals))
    rays_q = set()
    if q == 1:
        signs = {1 if n[0] > 0 else -1 for n in qnormals_u}
        if len(signs) == 1:
            rays_q.add((signs.pop(),))
    else:
        B = IntMatrix(qnormals_u, cols=q)
        for subset in itertools.combinations(range(B.rows), q - 1):
            sub = IntMatrix([B.row(i) for i in subset], cols=q)
            ker = integer_kernel_saturated(sub)
            if ker.rows != 1:
                continue
            v = ker.row(0)
            for cand in (v, tuple(-x for x in v)):
                if all(dot(n, cand) >= 0 for n in qnormals_u):
                    rays_q.add(cand)
    rays = []
    for v in sorted(rays_q):
        if trans is None:
            rays.append(v)
        else:
            z = (0,) * s + v
            rays.append(trans.apply(z))
    return sorted(rays), lin.row_list()


def _with_lineality(rays, lin_rows):
    out = list(rays)
    for row in lin_rows:
        out.append(tuple(row))
        out.append(tuple(-x for x in row))
    return sorted(out)


class Cone:
    """Rational polyhedral cone with generator and facet representations.

    Facets are primitive inward normals.  A lower-dimensional cone's facet
    list contains +/- pairs spanning the orthogonal complement of the
    cone's span, so the facets always cut out the cone exactly.
    """

    __slots__ = ("ambient_dim", "generators", "facets", "lineality_dim")

    def __init__(self, ambient_dim, generators, facets, lineality_dim):
        self.ambient_dim = ambient_dim
        self.generators = tuple(tuple(int(x) for x in g) for g in generators)
        self.facets = tuple(tuple(int(x) for x in f) for f in facets)
        self.lineality_dim = lineality_dim

    def __repr__(self):
        return (
            f"Cone(dim={self.ambient_dim}, generators={list(self.generators)}, "
            f"lineality={self.lineality_dim})"
        )

    def __eq__(self, other):
        if not isinstance(other, Cone) or self.ambient_dim != other.ambient_dim:
            return False
        return self.contains_cone(other) and other.contains_cone(self)

    def contains_cone(self, other):
        return all(
            dot(f, g) >= 0 for f in self.facets for g in other.generators
        )

    def membership(self, v):
        """'inside' (ambient interior), 'boundary', or 'outside'."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("point dimension mismatch")
        vals = [sum(Fraction(f[i]) * Fraction(v[i]) for i in range(len(v))) for f in self.facets]
        if any(x < 0 for x in vals):
            return "outside"
        if all(x > 0 for x in vals):
            return "inside"
        return "boundary"

    def contains(self, v):
        return self.membership(v) != "outside"

    def is_pointed(self):
        return self.lineality_dim == 0

    def dim(self):
        if not self.generators:
            return 0
        return smith_normal_form(IntMatrix(self.generators, cols=self.ambient_dim)).rank

    def is_full_dimensional(self):
        return self.dim() == self.ambient_dim

    def relative_interior_point(self):
        """A rational point strictly inside every non-degenerate facet."""
        if not self.generators:
            return (0,) * self.ambient_dim
        return tuple(sum(g[i] for g in self.generators) for i in range(self.ambient_dim))

    def dual(self):
        """The dual cone; generator and facet roles swap exactly."""
        return Cone(
            ambient_dim=self.ambient_dim,
            generators=self.facets,
            facets=self.generators,
            lineality_dim=self.ambient_dim
            - (
                smith_normal_form(
                    IntMatrix(self.generators, cols=self.ambient_dim)
                ).rank
                if self.generators
                else 0
            ),
        )

    def canonical_key(self):
        return (self.ambient_dim, self.facets, self.generators)


def dd_convert(generators=None, facets=None, ambient_dim=None):
    """Build a Cone from generators or from facet normals.

    Exactly one of `generators`/`facets` must be given.  Input vectors
    must be nonzero; an empty facet list describes the whole space, while
    an empty generator list is rejected.
    """
    if (generators is None) == (facets is None):
        raise ValueError("exactly one of generators or facets required")
    if ambient_dim is None:
        raise ValueError("ambient_dim required")
    if generators is not None:
        if len(generators) == 0:
            raise EmptyInput("no generators given")
        gens = [primitive(g) for g in generators]
        if any(not any(g) for g in gens):
            raise EmptyInput("zero vector among generators")
        if any(len(g) != ambient_dim for g in gens):
            raise DimensionMismatch("generator dimension mismatch")
        frays, flin = _extreme_rays_of_halfspaces(gens, ambient_dim)
        facet_list = _with_lineality(frays, flin)
        grays, glin = _extreme_rays_of_halfspaces(facet_list, ambient_dim)
        return Cone(ambient_dim, _with_lineality(grays, glin), facet_list, len(glin))
    else:
        fac = [primitive(f) for f in facets]
        if any(not any(f) for f in fac):
            raise EmptyInput("zero vector among facets")
        if any(len(f) != ambient_dim for f in fac):
            raise DimensionMismatch("facet dimension mismatch")
        grays, glin = _extreme_rays_of_halfspaces(fac, ambient_dim)
        gens = _with_lineality(grays, glin)
        if not gens:
            # the zero cone: facets +/- e_i cut it out exactly
            eye = IntMatrix.identity(ambient_dim).row_list()
            facet_list = _with_lineality([], eye)
            return Cone(ambient_dim, (), facet_list, 0)
        frays, flin = _extreme_rays_of_halfspaces(gens, ambient_dim)
        return Cone(ambient_dim, gens, _with_lineality(frays, flin), len(glin))


def cone_from_generators(generators, ambient_dim):
    return dd_convert(generators=generators, ambient_dim=ambient_dim)


def cone_from_facets(facets, ambient_dim):
    return dd_convert(facets=facets, ambient_dim=ambient_dim)


def zero_cone(ambient_dim):
    eye = IntMatrix.identity(ambient_dim).row_list()
    return Cone(ambient_dim, (), _with_lineality([], eye), 0)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def intersect(c1: Cone, c2: Cone) -> Cone:
    """Intersection as the cone cut out by the union of the facet lists."""
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    fac = sorted(set(c1.facets) | set(c2.facets))
    if not fac:
        return dd_convert(facets=[], ambient_dim=c1.ambient_dim)
    return dd_convert(facets=fac, ambient_dim=c1.ambient_dim)


def membership(c: Cone, v):
    return c.membership(v)


def relative_interior_point(c: Cone):
    return c.relative_interior_point()


def is_pointed(c: Cone) -> bool:
    return c.is_pointed()


# ------------------------------------------------------------- polytopes


def _orient(o, a, b):
    """Sign of the cross product (a - o) x (b - o)."""
    v = (Fraction(a[0]) - Fraction(o[0])) * (Fraction(b[1]) - Fraction(o[1])) - (
        Fraction(a[1]) - Fraction(o[1])
    ) * (Fraction(b[0]) - Fraction(o[0]))
    return (v > 0) - (v < 0)


def convex_hull_2d(points):
    """Convex hull in the plane: counterclockwise irredundant vertices.

    Degenerate inputs give segment or point polytopes.  The vertex list
    starts at the lexicographically smallest vertex.
    """
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if not pts:
        raise EmptyInput("no points given")
    if len(pts) == 1:
        return Polytope(2, pts)
    if all(_orient(pts[0], pts[1], p) == 0 for p in pts[2:]):
        return Polytope(2, [pts[0], pts[-1]])
    lower = []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return Polytope(2, lower[:-1] + upper[:-1])


class Polytope:
    """Polytope given by exact rational vertices (irredundant).

    In the plane the vertex tuple is stored in counterclockwise order;
    in higher dimensions it is sorted lexicographically.  Use
    :func:`polytope_from_points` or :func:`convex_hull_2d` to build one
    from an arbitrary point set.
    """

    __slots__ = ("ambient_dim", "vertices", "_ineqs")

    def __init__(self, ambient_dim, vertices):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        self._ineqs = None

    def __repr__(self):
        return f"Polytope(dim={self.ambient_dim}, vertices={[tuple(map(str, v)) for v in self.vertices]})"

    def __eq__(self, other):
        return (
            isinstance(other, Polytope)
            and self.ambient_dim == other.ambient_dim
            and sorted(self.vertices) == sorted(other.vertices)
        )

    def is_empty(self):
        return not self.vertices

    def is_lattice(self):
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def dim(self):
        if not self.vertices:
            return -1
        if len(self.vertices) == 1:
            return 0
        v0 = self.vertices[0]
        diffs = [
            _scale_primitive([x - y for x, y in zip(v, v0)])
            for v in self.vertices[1:]
        ]
        return smith_normal_form(IntMatrix(diffs, cols=self.ambient_dim)).rank

    def inequalities(self):
        """Facet inequalities (u, c) meaning <u, x> + c >= 0, primitive.

        Lower-dimensional polytopes include +/- pairs cutting out the
        affine span.
        """
        if self._ineqs is not None:
            return self._ineqs
        if not self.vertices:
            raise ValueError("empty polytope has no inequality description")
        d = self.ambient_dim
        gens = []
        for v in self.vertices:
            gens.append(_scale_primitive(list(v) + [1]))
        cone = dd_convert(generators=gens, ambient_dim=d + 1)
        out = []
        for f in cone.facets:
            u, c = f[:d], f[d]
            if not any(u):
                continue  # trivial t >= 0 facet
            out.append((tuple(u), c))
        self._ineqs = sorted(out)
        return self._ineqs

    def contains(self, point):
        if not self.vertices:
            return False
        pt = [Fraction(x) for x in point]
        return all(
            sum(Fraction(ui) * xi for ui, xi in zip(u, pt)) + c >= 0
            for u, c in self.inequalities()
        )

    def dilate(self, m):
        return Polytope(
            self.ambient_dim, [tuple(Fraction(m) * x for x in v) for v in self.vertices]
        )

    def translate(self, t):
        return Polytope(
            self.ambient_dim,
            [tuple(x + Fraction(ti) for x, ti in zip(v, t)) for v in self.vertices],
        )

    def area(self):
        """Euclidean area of a planar polytope (shoelace, exact)."""
        if self.ambient_dim != 2:
            raise DimensionMismatch("area is only defined in the plane")
        vs = self.vertices
        if len(vs) < 3:
            return Fraction(0)
        total = Fraction(0)
        for i in range(len(vs)):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % len(vs)]
            total += x1 * y2 - x2 * y1
        return abs(total) / 2


def polytope_from_points(points, ambient_dim=None):
    """Irredundant Polytope from an arbitrary finite point set."""
    points = [tuple(Fraction(x) for x in p) for p in points]
    if ambient_dim is None:
        if not points:
            raise EmptyInput("no points given")
        ambient_dim = len(points[0])
    if not points:
        return Polytope(ambient_dim, [])
    if ambient_dim == 2:
        return convex_hull_2d(points)
    gens = [_scale_primitive(list(p) + [1]) for p in points]
    cone = dd_convert(generators=gens, ambient_dim=ambient_dim + 1)
    verts = []
    for g in cone.generators:
        t = g[ambient_dim]
        if t <= 0:
            raise ValueError("point set produced an unbounded hull")
        verts.append(tuple(Fraction(x, t) for x in g[:ambient_dim]))
    return Polytope(ambient_dim, sorted(set(verts)))


def polytope_from_inequalities(ineqs, ambient_dim):
    """Polytope {x : <u, x> + c >= 0 for all (u, c)}; must be bounded.

    Returns an empty Polytope when the system is infeasible; raises
    ValueError when unbounded.
    """
    facets = [tuple(list(u) + [c]) for u, c in ineqs]
    facets.append(tuple([0] * ambient_dim + [1]))  # homogenization t >= 0
    cone = dd_convert(facets=facets, ambient_dim=ambient_dim + 1)
    verts = [
        tuple(Fraction(x, g[ambient_dim]) for x in g[:ambient_dim])
        for g in cone.generators
        if g[ambient_dim] > 0
    ]
    if not verts:
        return Polytope(ambient_dim, [])
    if any(g[ambient_dim] == 0 for g in cone.generators):
        raise ValueError("inequality system is unbounded")
    if ambient_dim == 2 and len(verts) >= 3:
        return convex_hull_2d(verts)
    return Polytope(ambient_dim, sorted(set(verts)))


def lattice_points(poly: Polytope, dilation=1):
    """All integer points of dilation * poly, sorted lexicographically."""
    if poly.ambient_dim > LATTICE_DIM_CAP:
        raise DimensionTooLarge(
            f"lattice point enumeration capped at dimension {LATTICE_DIM_CAP}"
        )
    if dilation < 1:
        raise PreconditionError("dilation must be a positive integer")
    q = poly.dilate(dilation)
    if q.is_empty():
        return []
    d = q.ambient_dim
    if d == 0:
        return [()]
    lows = [min(v[i] for v in q.vertices) for i in range(d)]
    highs = [max(v[i] for v in q.vertices) for i in range(d)]
    boxes = [
        range(math.ceil(lows[i]), math.floor(highs[i]) + 1) for i in range(d)
    ]
    ineqs = q.inequalities() if len(q.vertices) > 1 else None
    out = []
    if len(q.vertices) == 1:
        v = q.vertices[0]
        if all(x.denominator == 1 for x in v):
            out.append(tuple(int(x) for x in v))
        return out
    for prefix in itertools.product(*boxes[: d - 1]):
        lo, hi = lows[d - 1], highs[d - 1]
        lo = Fraction(math.ceil(lo))
        hi = Fraction(math.floor(hi))
        feasible = True
        for u, c in ineqs:
            s = c + sum(Fraction(ui) * pi for ui, pi in zip(u[: d - 1], prefix))
            ul = u[d - 1]
            if ul == 0:
                if s < 0:
                    feasible = False
                    break
            elif ul > 0:
                bound = Fraction(-s, ul)
                if bound > lo:
                    lo = bound
            else:
                bound = Fraction(s, -ul)
                if bound < hi:
                    hi = bound
        if not feasible:
            continue
        start = math.ceil(lo)
        stop = math.floor(hi)
        for last in range(start, stop + 1):
            out.append(tuple(prefix) + (last,))
    out.sort()
    return out


# ---------------------------------------------------------- hilbert basis


def _triangulate_pointed(rays, ambient_dim):
    """Pulling triangulation of a pointed cone into simplicial ray subsets."""
    cone = dd_convert(generators=rays, ambient_dim=ambient_dim)
    k = cone.dim()
    gens = list(cone.generators)
    if len(gens) == k:
        return [gens]
    apex = gens[0]
    out = []
    for f in cone.facets:
        if dot(f, apex) == 0:
            continue
        face_rays = [g for g in gens if dot(f, g) == 0]
        if not face_rays:
            continue
        for simplex in _triangulate_pointed(face_rays, ambient_dim):
            out.append(simplex + [apex])
    return out


def _parallelepiped_points(ray_rows, dim):
    """Integer points of the half-open parallelepiped of a simplicial cone.

    ray_rows: dim linearly independent integer vectors; returns all x in
    Z^dim with x = sum lambda_i r_i, 0 <= lambda_i < 1 (including 0).
    """
    C = IntMatrix(ray_rows, cols=dim).transpose()  # columns are the rays
    snf = smith_normal_form(C)
    diag = snf.D.diagonal()
    detp = 1
    for x in diag:
        detp *= x
    if detp > HILBERT_DET_CAP:
        raise DeterminantTooLarge(
            f"simplicial piece has index {detp} > {HILBERT_DET_CAP}"
        )
    U_inv = int_inverse_unimodular(snf.U)
    pts = set()
    for combo in itertools.product(*[range(x) for x in diag]):
        x0 = U_inv.apply(combo)
        lam = rational_solve(C, x0)
        frac = [Fraction(l) - (Fraction(l) // 1) for l in lam]
        x = []
        for i in range(dim):
            val = sum(Fraction(ray_rows[j][i]) * frac[j] for j in range(dim))
            assert val.denominator == 1
            x.append(int(val))
        pts.add(tuple(x))
    return pts


def hilbert_basis(cone: Cone):
    """Minimal generating set of the monoid of lattice points of a cone.

    The cone must be pointed and of ambient dimension at most 4; the
    simplicial pieces of the triangulation must have index at most 10^6.
    """
    if not cone.is_pointed():
        raise NotPointed("hilbert basis requires a pointed cone")
    if cone.ambient_dim > LATTICE_DIM_CAP:
        raise DimensionTooLarge(
            f"hilbert basis capped at ambient dimension {LATTICE_DIM_CAP}"
        )
    if not cone.generators:
        return []
    d = cone.ambient_dim
    k = cone.dim()
    if k < d:
        # work in the saturated lattice of the cone's span
        G = IntMatrix(cone.generators, cols=d)
        orth = integer_kernel_saturated(G)
        span_basis = integer_kernel_saturated(orth)  # k x d rows
        bt = span_basis.transpose()
        new_gens = []
        for g in cone.generators:
            y = rational_solve(bt, g)
            assert y is not None and all(Fraction(x).denominator == 1 for x in y)
            new_gens.append(tuple(int(x) for x in y))
        sub = dd_convert(generators=new_gens, ambient_dim=k)
        hb = hilbert_basis(sub)
        return sorted(bt.apply(h) for h in hb)

    candidates = set(cone.generators)
    for simplex in _triangulate_pointed(list(cone.generators), d):
        for p in _parallelepiped_points(simplex, d):
            if any(p):
                candidates.add(p)

    # remove elements that split as a sum of two nonzero monoid elements
    cands = sorted(candidates)
    basis = []
    for x in cands:
        reducible = False
        for c in cands:
            if c == x or not any(c):
                continue
            diff = tuple(a - b for a, b in zip(x, c))
            if not any(diff):
                continue
            if all(dot(f, diff) >= 0 for f in cone.facets):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis
