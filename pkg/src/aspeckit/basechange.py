"""Extension and contraction of modules, and k-points under Q in Q(i).

Q(i) over Q stands in for C over R: conjugation is the Galois action and
a point is a k-point when it comes from a simple module defined over Q.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, NonRationalRelations, PresentationMismatch, RelationViolation, \
    SourceRelationViolation
from .linalg import Mat, rank
from .modules import ModuleRep, is_isomorphic, is_simple, validate
from .ncalgebra import AlgHom, Presentation
from .scalars import QQ, QQI, Field
from .spectrum import FiniteTopology, InducedSubscheme, Universe, induced_subscheme, mask_of


@dataclass(frozen=True)
class FieldEmbedding:
    base: Field = QQ
    extension: Field = QQI
    degree: int = 2


def contract_along(phi: AlgHom, N: ModuleRep, name: str | None = None) -> ModuleRep:
    """View a module over phi's target as a module over its source: X_g = N(phi(g))."""
    if N.presentation != phi.target:
        raise PresentationMismatch(f"{N.name} is not a module over the target of the homomorphism")
    bad = validate(N)
    if bad:
        raise RelationViolation(f"module {N.name} violates {', '.join(map(str, bad))}", bad)
    mats = tuple(N.evaluate(im) for im in phi.images)
    M = ModuleRep(name or N.name, phi.source, N.dim, mats)
    bad = validate(M)
    if bad:
        raise SourceRelationViolation(
            f"contraction of {N.name} violates source relations {', '.join(map(str, bad))}", bad)
    return M


def extend_scalars(M: ModuleRep, name: str | None = None) -> ModuleRep:
    """The same matrices read over Q(i)."""
    if M.field != QQ:
        raise FieldMismatch("scalar extension starts from a module over QQ")
    pres = M.presentation.over(QQI)
    return ModuleRep(name or M.name, pres, M.dim, tuple(m.over(QQI) for m in M.action))


def _require_rational(pres: Presentation):
    if pres.field != QQI:
        raise FieldMismatch("expected a presentation over QQ(i)")
    if not pres.has_rational_relations():
        raise NonRationalRelations("relations must have rational coefficients")


def realify(m: Mat) -> Mat:
    """Entrywise a+bi -> [[a, -b], [b, a]]."""
    rows = []
    for r in m.data:
        top, bottom = [], []
        for z in r:
            z = QQI(z)
            top += [z.re, -z.im]
            bottom += [z.im, z.re]
        rows += [top, bottom]
    return Mat(rows, QQ, 2 * m.ncols)


def restrict_scalars(M: ModuleRep, name: str | None = None) -> ModuleRep:
    """A Q(i)-module of dimension d as a Q-module of dimension 2d."""
    _require_rational(M.presentation)
    pres = M.presentation.over(QQ)
    out = ModuleRep(name or M.name, pres, 2 * M.dim, tuple(realify(m) for m in M.action))
    bad = validate(out)
    if bad:
        raise RelationViolation(f"restriction of {M.name} violates {', '.join(map(str, bad))}", bad)
    return out


def conj_module(M: ModuleRep, name: str | None = None) -> ModuleRep:
    """Entrywise complex conjugate of the action."""
    _require_rational(M.presentation)
    return ModuleRep(name or f"conj({M.name})", M.presentation, M.dim,
                     tuple(m.map(QQI.conj) for m in M.action))


def has_rational_entries(M: ModuleRep) -> bool:
    return all(QQI.is_rational(x) for m in M.action for row in m.data for x in row)


def base_module(M: ModuleRep) -> ModuleRep:
    """The Q-module whose scalar extension is M; M must have rational entries."""
    _require_rational(M.presentation)
    if not has_rational_entries(M):
        raise FieldMismatch(f"{M.name} has non-rational entries")
    return ModuleRep(M.name, M.presentation.over(QQ), M.dim, tuple(m.map(QQ, QQ) for m in M.action))


@dataclass(frozen=True)
class KPointVerdict:
    verdict: str  # "yes", "no" or "unknown"
    reason: str


def is_k_point(M: ModuleRep) -> KPointVerdict:
    """Is M the scalar extension of a module over Q?  Descent is detected, not constructed."""
    _require_rational(M.presentation)
    if has_rational_entries(M):
        return KPointVerdict("yes", "action matrices are rational")
    if M.dim == 1:
        return KPointVerdict("no", "a one-dimensional action with a non-rational entry")
    iso = is_isomorphic(conj_module(M), M)
    if iso.verdict == "no":
        return KPointVerdict("no", "the conjugate module is not isomorphic to the module")
    return KPointVerdict("unknown", "conjugation-stable but no rational form exhibited")


@dataclass(frozen=True)
class KPointsResult:
    subscheme: InducedSubscheme
    verdicts: dict  # point name -> (k-point verdict, base simplicity status or None)


def k_points_subscheme(u: Universe, t: FiniteTopology) -> KPointsResult:
    """Keep the points that are k-points whose rational form is simple."""
    _require_rational(u.presentation)
    keep = []
    verdicts = {}
    for k, M in enumerate(u.points):
        kp = is_k_point(M)
        base_status = None
        if kp.verdict == "yes":
            base_status = is_simple(base_module(M)).status.value
            if base_status == "simple":
                keep.append(k)
        verdicts[M.name] = (kp.verdict, base_status)
    return KPointsResult(induced_subscheme(u, t, mask_of(keep)), verdicts)


def rank_stability(m: Mat) -> tuple[int, int]:
    """Ranks of a rational matrix over Q and over Q(i)."""
    if m.field != QQ:
        raise FieldMismatch("expected a rational matrix")
    return rank(m), rank(m.over(QQI))
