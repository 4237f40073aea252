"""Divisor theory on a fan.

Class group and Cox grading via Smith normal form of the ray matrix,
divisor polytopes and section counts, positivity predicates, nef
intersection numbers on surfaces through mixed areas, irrelevant
monomial supports, and Hilbert-basis generators of section rings and
Veronese subalgebras.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .fans import Fan, fan_predicates, normal_fan, validate_fan
from .linalg import (
    IntMatrix,
    hermite_normal_form,
    int_inverse_unimodular,
    integer_kernel_saturated,
    rational_solve,
    smith_normal_form,
)
from .polyhedra import (
    Cone,
    DimensionTooLarge,
    NotPointed,
    Polytope,
    dd_convert,
    hilbert_basis,
    lattice_points,
    polytope_from_inequalities,
)


class RaysDoNotSpan(PreconditionError):
    pass


class NotComplete(PreconditionError):
    pass


class NotSimplicial(PreconditionError):
    pass


class NotNef(PreconditionError):
    pass


class NotSurface(PreconditionError):
    pass


@dataclass(frozen=True)
class ToricDivisor:
    """Torus-invariant divisor sum(a_i * D_i), one coefficient per ray."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(int(a) for a in self.coefficients)
        )

    def __add__(self, other):
        return ToricDivisor(
            tuple(a + b for a, b in zip(self.coefficients, _coeffs(other)))
        )

    def __rmul__(self, k):
        return ToricDivisor(tuple(int(k) * a for a in self.coefficients))

    def __iter__(self):
        return iter(self.coefficients)

    def __len__(self):
        return len(self.coefficients)


def _coeffs(divisor):
    if isinstance(divisor, ToricDivisor):
        return divisor.coefficients
    return tuple(int(a) for a in divisor)


def _check_divisor(fan, divisor):
    a = _coeffs(divisor)
    if len(a) != len(fan.rays):
        raise PreconditionError(
            f"divisor has {len(a)} coefficients, fan has {len(fan.rays)} rays"
        )
    return a


class ClassGroup:
    """Divisor class group of a fan with its Cox grading data.

    The group is Z^rank + sum Z/torsion_i in a basis fixed by the Smith
    normal form of the ray matrix; class vectors list free coordinates
    first, then torsion coordinates reduced modulo their invariant factor.
    The sign of each free coordinate is normalized so that the first
    variable with a nonzero entry there has a positive one.
    """

    def __init__(self, fan: Fan):
        d = fan.lattice_dim
        r = len(fan.rays)
        ray_matrix = IntMatrix(fan.rays, cols=d)
        snf = smith_normal_form(ray_matrix)
        if snf.rank < d:
            raise RaysDoNotSpan("fan rays do not span the ambient lattice")
        diag = snf.D.diagonal()
        self.fan = fan
        self.rank = r - d
        self._tor_pos = [i for i in range(d) if diag[i] > 1]
        self.torsion = tuple(diag[i] for i in self._tor_pos)
        self._free_pos = list(range(d, r))
        self._U = snf.U
        self._U_inv = int_inverse_unimodular(snf.U)
        # sign normalization per free coordinate
        flips = []
        for t, pos in enumerate(self._free_pos):
            col = [self._U[pos, i] for i in range(r)]
            lead = next((x for x in col if x != 0), 1)
            flips.append(-1 if lead < 0 else 1)
        self._flips = flips
        self.degrees = tuple(
            self.class_of(tuple(1 if j == i else 0 for j in range(r)))
            for i in range(r)
        )

    @property
    def degree_map(self) -> IntMatrix:
        """r x (rank + #torsion) matrix; row i is the class of D_i."""
        ncols = self.rank + len(self.torsion)
        return IntMatrix([list(row) for row in self.degrees], cols=ncols)

    def class_of(self, divisor):
        """Class of a torus-invariant divisor in the fixed basis."""
        a = _check_divisor(self.fan, divisor)
        y = self._U.apply(a)
        free = tuple(
            self._flips[t] * y[pos] for t, pos in enumerate(self._free_pos)
        )
        tor = tuple(
            y[pos] % self.torsion[t] for t, pos in enumerate(self._tor_pos)
        )
        return free + tor

    def divisor_with_class(self, cls) -> ToricDivisor:
        """Some torus-invariant divisor whose class is `cls`."""
        cls = tuple(int(x) for x in cls)
        if len(cls) != self.rank + len(self.torsion):
            raise PreconditionError("class vector has wrong length")
        r = len(self.fan.rays)
        y = [0] * r
        for t, pos in enumerate(self._free_pos):
            y[pos] = self._flips[t] * cls[t]
        for t, pos in enumerate(self._tor_pos):
            y[pos] = cls[self.rank + t]
        a = self._U_inv.apply(y)
        div = ToricDivisor(a)
        assert self.class_of(div) == tuple(cls)
        return div


def class_group(fan: Fan) -> ClassGroup:
    return ClassGroup(fan)


def principal_divisor(fan: Fan, m) -> ToricDivisor:
    """div of the character with exponent m: coefficients <m, v_i>."""
    m = tuple(int(x) for x in m)
    if len(m) != fan.lattice_dim:
        raise PreconditionError("character exponent has wrong dimension")
    return ToricDivisor(tuple(sum(mi * vi for mi, vi in zip(m, v)) for v in fan.rays))


def divisor_polytope(fan: Fan, divisor) -> Polytope:
    """The polytope {m : <m, v_i> + a_i >= 0}; requires a complete fan."""
    a = _check_divisor(fan, divisor)
    if not fan_predicates(fan).complete:
        raise NotComplete("divisor polytopes need a complete fan")
    ineqs = [(v, ai) for v, ai in zip(fan.rays, a)]
    return polytope_from_inequalities(ineqs, fan.lattice_dim)


def section_count(fan: Fan, divisor) -> int:
    """dim H^0 = number of lattice points of the divisor polytope."""
    poly = divisor_polytope(fan, divisor)
    if poly.is_empty():
        return 0
    return len(lattice_points(poly, 1))


@dataclass(frozen=True)
class PositivityRecord:
    basepoint_free: bool
    nef: bool
    ample: bool


def positivity(fan: Fan, divisor) -> PositivityRecord:
    """Basepoint-freeness / nefness / ampleness on a complete simplicial fan.

    For each maximal cone the linear system <m, v_i> = -a_i (i in the
    cone) has a unique rational solution m_sigma; the divisor is nef when
    every m_sigma lies in the divisor polytope, basepoint free when these
    witnesses are integral, and ample when it is basepoint free with
    pairwise distinct witnesses and the divisor polytope has the fan as
    its normal fan.  (Requiring integral witnesses keeps ample => bpf on
    singular fans, where a Q-ample Weil divisor can have base points.)
    """
    a = _check_divisor(fan, divisor)
    preds = fan_predicates(fan)
    if not preds.complete:
        raise NotComplete("positivity tests need a complete fan")
    if not preds.simplicial:
        raise NotSimplicial("positivity tests need a simplicial fan")
    poly = divisor_polytope(fan, divisor)
    witnesses = []
    for idx in fan.max_cones:
        rows = [fan.rays[i] for i in idx]
        rhs = [-a[i] for i in idx]
        m = rational_solve(rows, rhs)
        witnesses.append(m)
    nef = (not poly.is_empty()) and all(
        poly.contains(m) for m in witnesses
    )
    bpf = nef and all(
        all(Fraction(x).denominator == 1 for x in m) for m in witnesses
    )
    ample = False
    if bpf and len(set(witnesses)) == len(witnesses) and poly.dim() == fan.lattice_dim:
        nf = normal_fan(poly)
        same_rays = set(nf.rays) == set(fan.rays)
        if same_rays:
            fam1 = {frozenset(nf.rays[i] for i in c) for c in nf.max_cones}
            fam2 = {frozenset(fan.rays[i] for i in c) for c in fan.max_cones}
            ample = fam1 == fam2
    return PositivityRecord(basepoint_free=bpf, nef=nef, ample=ample)


def intersection_number_nef_surface(fan: Fan, d1, d2) -> Fraction:
    """Intersection number of two nef divisors on a complete toric surface.

    Computed as the mixed area area(P1 + P2) - area(P1) - area(P2) of the
    divisor polytopes, normalized so that D^2 is twice the area of its
    polytope.
    """
    if fan.lattice_dim != 2:
        raise NotSurface("intersection numbers implemented for surfaces only")
    for d in (d1, d2):
        if not positivity(fan, d).nef:
            raise NotNef("intersection numbers require nef divisors")
    a1 = _check_divisor(fan, d1)
    a2 = _check_divisor(fan, d2)
    total = tuple(x + y for x, y in zip(a1, a2))

    def area_of(div):
        poly = divisor_polytope(fan, div)
        if poly.is_empty():
            return Fraction(0)
        return poly.area()

    return area_of(total) - area_of(a1) - area_of(a2)


def irrelevant_monomials(fan: Fan):
    """Variable supports of the irrelevant ideal: one per maximal cone."""
    report = validate_fan(fan)
    if not report.ok:
        raise PreconditionError("; ".join(report.violations))
    r = len(fan.rays)
    return [tuple(sorted(set(range(r)) - set(c))) for c in fan.max_cones]


def section_ring_generators(fan: Fan, divisors):
    """Minimal generator degrees of the multigraded section ring.

    divisors is a list of divisor coefficient vectors D_1..D_s; the result
    is the Hilbert basis of the cone {(m, t) : t >= 0, <m, v_i> +
    sum_j t_j a_{ji} >= 0}, returned as (lattice point, multidegree) pairs.
    """
    div_list = [_check_divisor(fan, d) for d in divisors]
    s = len(div_list)
    d = fan.lattice_dim
    if d + s > 4:
        raise DimensionTooLarge("section ring cone capped at total dimension 4")
    if s == 0:
        raise PreconditionError("need at least one divisor")
    facets = []
    for i, v in enumerate(fan.rays):
        facets.append(tuple(v) + tuple(div[i] for div in div_list))
    for j in range(s):
        facets.append((0,) * d + tuple(1 if jj == j else 0 for jj in range(s)))
    cone = dd_convert(facets=facets, ambient_dim=d + s)
    if not cone.is_pointed():
        raise NotPointed("section ring cone is not pointed")
    return [(h[:d], h[d:]) for h in hilbert_basis(cone)]


def veronese_generators(Q: IntMatrix, H: Cone, sublattice=None):
    """Generator exponents of a Veronese subalgebra of a free algebra.

    Q maps exponent vectors to degrees, H is a cone of degrees; the result
    is the Hilbert basis of {x >= 0 : Q x in H}.  An optional `sublattice`
    (an IntMatrix whose rows span a finite-index sublattice L of the
    degree lattice) restricts to degrees lying in L.
    """
    r = Q.cols
    k = Q.rows
    if r > 4:
        raise DimensionTooLarge("veronese cone capped at 4 variables")
    if H.ambient_dim != k:
        raise PreconditionError("degree cone dimension mismatch")
    facets = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    qt = Q.transpose()
    for h in H.facets:
        facets.append(qt.apply(h))
    facets = [f for f in facets if any(f)]
    cone = dd_convert(facets=facets, ambient_dim=r)
    if not cone.is_pointed():
        raise NotPointed("veronese cone is not pointed")
    if sublattice is None:
        return hilbert_basis(cone)
    L = sublattice
    if L.cols != k:
        raise PreconditionError("sublattice basis has wrong dimension")
    lt = L.transpose()
    block = IntMatrix(
        [list(Q.row(i)) + [-lt[i, j] for j in range(lt.cols)] for i in range(k)],
        cols=r + lt.cols,
    )
    ker = integer_kernel_saturated(block)
    proj = IntMatrix([row[:r] for row in ker.row_list()], cols=r)
    basis, _ = hermite_normal_form(proj)
    rows = [row for row in basis.row_list() if any(row)]
    if len(rows) != r:
        raise PreconditionError("sublattice preimage does not have full rank")
    A = IntMatrix(rows, cols=r)
    at = A.transpose()
    new_facets = [A.apply(f) for f in cone.facets]
    sub_cone = dd_convert(facets=new_facets, ambient_dim=r)
    if not sub_cone.is_pointed():
        raise NotPointed("veronese cone is not pointed")
    return sorted(at.apply(h) for h in hilbert_basis(sub_cone))
