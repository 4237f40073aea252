"""Blow-ups of toric surfaces at the unit point of the torus.

Fat-point interpolation: matrices of derivative functionals at (1,1)
against Laurent monomials supported on a dilated polygon, their kernel
dimensions (section counts of m*H - k*E pullback classes), vanishing
orders of explicit Laurent polynomials, forced-vertex base point
certificates, the full nef-but-not-semiample certificate for blown-up
weighted projective planes, the blow-up finite-generation inequality for
point configurations in projective space, and ray projections of the
Losev-Manin fans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .fans import fans_unimodular_equivalent, normal_fan, weighted_projective_fan
from .linalg import (
    IntMatrix,
    RatMatrix,
    default_modular_primes,
    int_rank,
    int_rank_mod,
    kernel_dimension,
    primitive,
    smith_normal_form,
    MODULAR_PRIME_BOUND,
)
from .polyhedra import Polytope, lattice_points, polytope_from_points


class ZeroPolynomial(PreconditionError):
    pass


class FunctionalOrderTooHigh(PreconditionError):
    pass


class PreconditionFailed(PreconditionError):
    """A certificate-level identity failed; the message names it."""


class BadRange(PreconditionError):
    pass


class NotSurjective(PreconditionError):
    pass


# input data for the blown-up P(12,13,17) analysis
WPS_12_13_17_TRIANGLE = ((11, -26), (50, 0), (-1, 34))
WPS_12_13_17_CURVE_ORDER = 52

# the 7-vertex polygon and lattice projection used for the Losev-Manin
# reduction from 10 marked points
LM10_PROJECTION_MATRIX = ((1, 0, 1, -2, -1, 1, 0), (0, 1, -1, -3, -2, 2, 1))
LM10_V1 = (1, 0, 1, 1, 1, 0, 0)
LM10_V2 = (0, 0, 0, -1, -1, 0, 0)
LM10_V3 = (-1, 0, -1, 0, 0, -1, 0)
LM10_POLYGON_COLUMNS = ((-1, 6), (-4, 5), (-3, 1), (-2, 8), (-6, 0), (-7, 0), (0, 3))


def falling_factorial(a: int, i: int) -> int:
    """a * (a-1) * ... * (a-i+1); the empty product for i = 0 is 1."""
    out = 1
    for t in range(i):
        out *= a - t
    return out


def derivative_functionals(order: int):
    """All (i, j) with i + j < order, in lexicographic order."""
    return sorted((i, j) for i in range(order) for j in range(order - i))


def vanishing_entry(functional, point) -> int:
    i, j = functional
    a, b = point
    return falling_factorial(a, i) * falling_factorial(b, j)


@dataclass(frozen=True)
class InterpolationProblem:
    """Laurent polynomials supported on dilation * polygon vanishing to
    the given order at the torus unit (1, 1)."""

    polygon: Polytope
    dilation: int = 1
    order: int = 0

    def __post_init__(self):
        if self.polygon.dim() != 2:
            raise PreconditionError("interpolation polygon must be 2-dimensional")
        if self.dilation < 1 or self.order < 0:
            raise PreconditionError("need dilation >= 1 and order >= 0")

    def points(self):
        return lattice_points(self.polygon, self.dilation)

    def functionals(self):
        return derivative_functionals(self.order)


def vanishing_matrix(problem: InterpolationProblem) -> RatMatrix:
    """Rows: derivative functionals of total order < k; columns: lattice
    points of the dilated polygon; entries are products of falling
    factorials (integers, possibly huge)."""
    pts = problem.points()
    rows = []
    for i, j in problem.functionals():
        rows.append([vanishing_entry((i, j), p) for p in pts])
    return RatMatrix(rows, cols=len(pts))


def _modular_primes_checked(primes):
    if primes is None:
        primes = default_modular_primes()
    primes = list(primes)
    if len(set(primes)) < 3:
        raise PreconditionError("modular mode requires at least 3 distinct primes")
    if any(p <= MODULAR_PRIME_BOUND for p in primes):
        raise PreconditionError("modular primes must exceed 2^20")
    return primes


def h0(problem: InterpolationProblem, mode="modular", primes=None) -> int:
    """Dimension of the space of Laurent polynomials supported on the
    dilated polygon vanishing to the given order at (1, 1).

    Equals the nullity of the vanishing matrix.  The modular mode reduces
    the falling-factorial tables per prime and computes GF(p) ranks,
    requiring all primes to agree; disagreement escalates to the exact
    fraction-free rank.
    """
    pts = problem.points()
    funcs = problem.functionals()
    if not funcs:
        return len(pts)
    if mode == "exact":
        return kernel_dimension(vanishing_matrix(problem), "exact")
    if mode != "modular":
        raise ValueError(f"unknown mode {mode!r}")
    primes = _modular_primes_checked(primes)
    xs = sorted({p[0] for p in pts})
    ys = sorted({p[1] for p in pts})
    maxi = max(i for i, _ in funcs)
    maxj = max(j for _, j in funcs)
    ranks = set()
    for p in primes:
        ffx = {
            (a, i): falling_factorial(a, i) % p
            for a in xs
            for i in range(maxi + 1)
        }
        ffy = {
            (b, j): falling_factorial(b, j) % p
            for b in ys
            for j in range(maxj + 1)
        }
        rows = [
            [ffx[(a, i)] * ffy[(b, j)] % p for (a, b) in pts]
            for (i, j) in funcs
        ]
        ranks.add(int_rank_mod(rows, p))
        del rows
    if len(ranks) == 1:
        return len(pts) - ranks.pop()
    return kernel_dimension(vanishing_matrix(problem), "exact")


# ------------------------------------------------------ laurent polynomials


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial in two variables with exact coefficients."""

    terms: tuple  # ((a, b), Fraction) pairs, sorted, nonzero coefficients

    @classmethod
    def from_terms(cls, items):
        acc = {}
        for (a, b), c in items:
            key = (int(a), int(b))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        terms = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        return cls(terms)

    @classmethod
    def monomial(cls, a, b, coeff=1):
        return cls.from_terms([((a, b), coeff)])

    def is_zero(self):
        return not self.terms

    def support(self):
        return [k for k, _ in self.terms]

    def coeff(self, a, b):
        for k, v in self.terms:
            if k == (a, b):
                return v
        return Fraction(0)

    def __add__(self, other):
        return LaurentPoly.from_terms(list(self.terms) + list(other.terms))

    def __neg__(self):
        return LaurentPoly(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.from_terms(
                [(k, v * Fraction(other)) for k, v in self.terms]
            )
        items = []
        for (a1, b1), c1 in self.terms:
            for (a2, b2), c2 in other.terms:
                items.append(((a1 + a2, b1 + b2), c1 * c2))
        return LaurentPoly.from_terms(items)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers not supported")
        out = LaurentPoly.monomial(0, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def flagship_curve() -> LaurentPoly:
    """x^11 y^-26 (1 - y)^52, the explicit order-52 section on the
    triangle of the blown-up P(12,13,17) analysis."""
    one_minus_y = LaurentPoly.from_terms([((0, 0), 1), ((0, 1), -1)])
    return LaurentPoly.monomial(11, -26) * one_minus_y**52


def order_at_e(f: LaurentPoly) -> int:
    """Smallest total order i+j of a derivative functional at (1,1) that
    does not annihilate f."""
    if f.is_zero():
        raise ZeroPolynomial("order of the zero polynomial is undefined")
    supp = f.support()
    bound = (
        max(a for a, _ in supp)
        - min(a for a, _ in supp)
        + max(b for _, b in supp)
        - min(b for _, b in supp)
    )
    for total in range(bound + 1):
        for i in range(total + 1):
            j = total - i
            val = sum(
                c * vanishing_entry((i, j), k) for k, c in f.terms
            )
            if val != 0:
                return total
    raise AssertionError("vanishing order exceeded the support bound")


# ------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Certificate:
    """Exact, re-verifiable payload for one of the blow-up conclusions.

    kinds: forced_vertex, negative_curve, nef_not_semiample.  verify()
    re-runs every check from the payload alone.
    """

    kind: str
    payload: dict
    transcript: tuple

    def verify(self) -> bool:
        if self.kind == "forced_vertex":
            return _verify_forced_vertex(self.payload)
        if self.kind == "negative_curve":
            return _verify_negative_curve(self.payload)
        if self.kind == "nef_not_semiample":
            return _verify_nef_not_semiample(self.payload)
        return False


def _translated_points(polygon_vertices, m, translation):
    poly = polytope_from_points(polygon_vertices)
    pts = lattice_points(poly, m)
    tx, ty = translation
    return [(a + tx, b + ty) for a, b in pts]


def _verify_forced_vertex(payload) -> bool:
    i, j = payload["functional"]
    k = payload["order"]
    if i + j > k - 1:
        return False
    pts = _translated_points(
        payload["polygon"], payload["dilation"], payload["translation"]
    )
    vertex = tuple(payload["vertex"])
    if vertex not in pts:
        return False
    for p in pts:
        val = vanishing_entry((i, j), p)
        if p == vertex:
            if val == 0 or val != payload["vertex_value"]:
                return False
        elif val != 0:
            return False
    return True


def _verify_negative_curve(payload) -> bool:
    h2 = Fraction(payload["h_self_intersection"])
    w = payload["curve_order"]
    c2 = Fraction(payload["curve_self_intersection"])
    return w > 0 and c2 == h2 / w**2 - 1 and c2 < 0


def _verify_nef_not_semiample(payload) -> bool:
    h2 = Fraction(payload["h_self_intersection"])
    w = payload["curve_order"]
    k = payload["k"]
    if Fraction(payload["d_dot_c"]) != h2 / w - k or payload["d_dot_c"] != 0:
        return False
    if payload["d_dot_e"] != k or k <= 0:
        return False
    if not _verify_negative_curve(payload["negative_curve"].payload):
        return False
    forced = payload["forced_vertex_certificates"]
    if len(forced) != payload["m_max"]:
        return False
    return all(cert.verify() for cert in forced)


def forced_vertex_coefficient(
    polygon, dilation, order, vertex, functional, translation=(0, 0)
):
    """Certificate that one polygon vertex coefficient is forced to zero.

    Checks that the falling-factorial functional annihilates every lattice
    point of the translated dilated polygon except the named vertex, where
    it is nonzero.  Such a functional shows that every section vanishing
    to the given order at (1,1) has zero coefficient at that vertex, so
    the corresponding divisor class has a base point.  Returns None when
    the functional fails to single out the vertex.
    """
    if isinstance(polygon, Polytope):
        polygon_vertices = tuple(
            tuple(int(x) for x in v) for v in polygon.vertices
        )
    else:
        polygon_vertices = tuple(tuple(int(x) for x in v) for v in polygon)
    i, j = functional
    if i + j > order - 1:
        raise FunctionalOrderTooHigh(
            f"functional ({i},{j}) has order {i + j} > {order - 1}"
        )
    pts = _translated_points(polygon_vertices, dilation, translation)
    vertex = tuple(int(x) for x in vertex)
    if vertex not in pts:
        return None
    vertex_value = None
    for p in pts:
        val = vanishing_entry((i, j), p)
        if p == vertex:
            if val == 0:
                return None
            vertex_value = val
        elif val != 0:
            return None
    payload = {
        "polygon": polygon_vertices,
        "dilation": dilation,
        "order": order,
        "functional": (i, j),
        "translation": tuple(translation),
        "vertex": vertex,
        "vertex_value": vertex_value,
    }
    transcript = (
        f"functional d_x^{i} d_y^{j} at (1,1) annihilates all "
        f"{len(pts) - 1} non-vertex lattice points of the translated polygon",
        f"value at vertex {vertex} is {vertex_value} != 0",
        f"every section vanishing to order {order} at (1,1) has zero "
        f"coefficient at {vertex}",
    )
    cert = Certificate("forced_vertex", payload, transcript)
    assert cert.verify()
    return cert


def blowup_certificate(weights, polygon, curve, k, m_max=5):
    """Certify that pulled-back ample minus k times the exceptional class
    is nef but not basepoint free at multiples 1..m_max.

    `curve` is a pair (w, f): a Laurent polynomial supported on the
    polygon whose vanishing order at (1,1) is w, exhibiting an
    irreducible curve of class (1/w) * pullback - exceptional.  All
    identities are checked exactly; the first violated one raises
    PreconditionFailed.  The statement for all multiples m is recorded as
    an external conclusion, certified here for m <= m_max.
    """
    poly = (
        polygon
        if isinstance(polygon, Polytope)
        else polytope_from_points(polygon)
    )
    if poly.dim() != 2 or not poly.is_lattice():
        raise PreconditionFailed("polygon must be a 2-dimensional lattice polygon")
    w, f = curve
    if f.is_zero():
        raise PreconditionFailed("curve polynomial is zero")
    if not all(poly.contains(p) for p in f.support()):
        raise PreconditionFailed("curve polynomial is not supported on the polygon")
    order = order_at_e(f)
    if order != w:
        raise PreconditionFailed(f"order_at_e(f) = {order} != w = {w}")
    h2 = 2 * poly.area()
    if h2.denominator != 1:
        raise PreconditionFailed("twice the polygon area is not an integer")
    h2 = int(h2)
    c2 = Fraction(h2, w**2) - 1
    if not c2 < 0:
        raise PreconditionFailed(f"C^2 = H^2/w^2 - 1 = {c2} is not negative")
    dc = Fraction(h2, w) - k
    if dc != 0:
        raise PreconditionFailed(f"D.C = H^2/w - k = {dc} != 0")
    de = k
    if not de > 0:
        raise PreconditionFailed(f"D.E = k = {de} is not positive")
    if weights is not None:
        target = weighted_projective_fan(*weights)
        nf = normal_fan(poly)
        if fans_unimodular_equivalent(nf, target) is None:
            raise PreconditionFailed(
                f"normal fan of the polygon is not the P{tuple(weights)} fan"
            )

    verts = [(int(x), int(y)) for x, y in poly.vertices]
    right = max(verts)
    left = min(verts)
    forced = []
    for m in range(1, m_max + 1):
        translation = (k * m - 1 - m * right[0], -m * right[1])
        vertex = (
            m * left[0] + translation[0],
            m * left[1] + translation[1],
        )
        functional = (k * m - 2, 1)
        cert = forced_vertex_coefficient(
            verts, m, k * m, vertex, functional, translation
        )
        if cert is None:
            raise PreconditionFailed(
                f"forced vertex argument fails at multiple m = {m}"
            )
        forced.append(cert)

    neg = Certificate(
        "negative_curve",
        {
            "h_self_intersection": h2,
            "curve_order": w,
            "curve_self_intersection": c2,
            "curve_class": (Fraction(1, w), -1),
        },
        (
            f"H^2 = 2 * area = {h2}",
            f"curve class is (1/{w}) pullback(H) - E since f has order {w} at (1,1)",
            f"C^2 = H^2/w^2 - 1 = {c2} < 0",
        ),
    )
    payload = {
        "weights": tuple(weights) if weights is not None else None,
        "polygon": tuple(verts),
        "curve_order": w,
        "k": k,
        "h_self_intersection": h2,
        "curve_self_intersection": c2,
        "d_dot_c": dc,
        "d_dot_e": de,
        "m_max": m_max,
        "negative_curve": neg,
        "forced_vertex_certificates": tuple(forced),
    }
    transcript = (
        f"D = pullback(H) - {k} E with D.C = {dc} and D.E = {de} > 0",
        f"D is nef: it pairs nonnegatively with the negative curves C and E "
        f"spanning the effective cone",
        f"forced-vertex certificates show m D has a base point for m = 1..{m_max}",
        "non-semiampleness for every multiple m is an external statement, "
        f"certified here for m <= {m_max}",
        "a nef divisor that is not semiample rules out finite generation "
        "of the total coordinate ring",
    )
    cert = Certificate("nef_not_semiample", payload, transcript)
    assert cert.verify()
    return cert


# ------------------------------------------------------------------ mukai


def mukai_predicate(r: int, n: int) -> bool:
    """Finite generation test for blow-ups of projective space at points:
    1/r + 1/(n-r) > 1/2, exact."""
    if not (n > r >= 2):
        raise BadRange("need n > r >= 2")
    return Fraction(1, r) + Fraction(1, n - r) > Fraction(1, 2)


# ---------------------------------------------------------- Losev-Manin


def lm_rays(n: int):
    """Primitive ray generators of the Losev-Manin fan for n markings:
    all nonzero 0/1 vectors in Z^(n-3) and their negatives."""
    if n < 4:
        raise BadRange("Losev-Manin spaces need n >= 4")
    d = n - 3
    out = []
    for bits in itertools.product((0, 1), repeat=d):
        if not any(bits):
            continue
        out.append(bits)
        out.append(tuple(-x for x in bits))
    return sorted(out)


@dataclass(frozen=True)
class LmProjectionReport:
    ray_image_multiset: tuple  # sorted (primitive image, multiplicity) pairs
    kernel_ray_count: int
    images: tuple  # images of v1, v2, v3
    generates: bool
    relations: tuple  # ((a1,a2,a3) weights on v1,v2,v3, (s1,s2,s3) signs)
    quotient_weights: tuple | None


def lm_projection(n, pi: IntMatrix, v1, v2, v3, weights) -> LmProjectionReport:
    """Project the Losev-Manin rays and identify the induced weighted
    projective plane.

    Searches all assignments of the three pairwise-coprime weights to
    v1, v2, v3 and all relative signs for a combination lying in the
    kernel of the projection; reports every verified assignment rather
    than assuming a labeling.
    """
    if pi.rows != 2 or pi.cols != n - 3:
        raise PreconditionError("projection matrix must be 2 x (n-3)")
    snf = smith_normal_form(pi)
    if snf.rank != 2 or set(snf.invariant_factors) != {1}:
        raise NotSurjective("projection is not surjective onto Z^2")
    a, b, c = (int(w) for w in weights)

    images = {}
    zero_count = 0
    for v in lm_rays(n):
        img = pi.apply(v)
        if not any(img):
            zero_count += 1
            continue
        key = primitive(img)
        images[key] = images.get(key, 0) + 1

    iv = tuple(tuple(pi.apply(v)) for v in (v1, v2, v3))
    gen_matrix = IntMatrix(list(iv), cols=2)
    gsnf = smith_normal_form(gen_matrix)
    generates = gsnf.rank == 2 and set(gsnf.invariant_factors) == {1}

    relations = []
    for perm in itertools.permutations((a, b, c)):
        for s2, s3 in itertools.product((1, -1), repeat=2):
            combo = tuple(
                perm[0] * x1 + s2 * perm[1] * x2 + s3 * perm[2] * x3
                for x1, x2, x3 in zip(iv[0], iv[1], iv[2])
            )
            if not any(combo):
                relations.append((perm, (1, s2, s3)))
    quotient = tuple(sorted((a, b, c))) if (relations and generates) else None
    return LmProjectionReport(
        ray_image_multiset=tuple(sorted(images.items())),
        kernel_ray_count=zero_count,
        images=iv,
        generates=generates,
        relations=tuple(relations),
        quotient_weights=quotient,
    )
