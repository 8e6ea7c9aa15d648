"""Transform for local systems fibred over a Lagrangian torus fibration.

The total space carries base coordinates x^1..x^g and fibre angles
y_1..y_g; the dual side replaces the angles by w^1..w^g.  A support that
projects onto a k-dimensional graph in the base is stored in solved form:
the base image is x^{k+i} = zeta^{k+i}(x^1..x^k) and each fibre trace is
the affine subtorus

    y_{g-k+j} = sum_m a[j][m] y_m + chi[j],    j = 1..k,

with every coefficient a function of the free base coordinates alone.
Symbols x1..xk in stored expressions always mean those free coordinates;
nothing may depend on the angles, which keeps invariance under the
fibrewise torus action structural rather than checked.

The transform dualizes fibre by fibre, exactly as `fm_absolute` does for
a single torus: each fibre trace is traded for its annihilator subtorus
on the dual side, holonomy and offset changing places.  Assembled over
the base this produces a dual support

    x^{k+i} = zeta^{k+i},    w^{k+i} = sum_j gamma[i][j] w^j + varsigma[i],

whose slope gamma is the Jacobian of zeta, together with a connection
written as one row of dx-coefficients and one row of dw-coefficients.
The dual support is a complex submanifold for z^j = x^j + i w^j exactly
when gamma is constant, and the (0,2) Hodge component of the curvature
vanishes exactly when the input support was Lagrangian.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exact_linalg import RatMatrix, mod1, rat_vector
from .expr import (
    PI,
    ZERO,
    Expr,
    Verdict,
    add,
    all_zero,
    diff,
    eval_at,
    eval_exact,
    is_constant,
    is_zero,
    linear_combination,
    max_var,
    mul,
    neg,
    num,
    sub,
    var,
    weyl_points,
)
from .fm_absolute import SubtorusLocalSystem
from .torus import AffineSubtorus, Torus, subtorus_from_equations

__all__ = [
    "ConditionError",
    "ConditionReport",
    "DualBundleInput",
    "InverseResult",
    "LocalSystemData",
    "RelativeSupport",
    "SectionSupport",
    "TransformedBundle",
    "check_C1_lagrangian",
    "check_C2_C3",
    "check_D_conditions",
    "check_F02_iff_lagrangian",
    "check_cauchy_riemann",
    "curvature_hodge",
    "dual_input_from_bundle",
    "fibre_of_transform",
    "fibre_support",
    "fibre_system",
    "hodge_components",
    "inverse_transform",
    "relative_from_section",
    "transform_nontransversal",
    "transform_section",
    "wit_index",
]

_HALF_PI = mul(num(Fraction(1, 2)), PI)


def _as_expr(value) -> Expr:
    if isinstance(value, (int, Fraction)):
        return num(value)
    return value


def _check_base_only(entries, k: int, what: str) -> None:
    for e in entries:
        v = max_var(e)
        if v > k:
            raise ValueError(
                f"{what} may depend on x1..x{k} only, found x{v}"
            )


# ------------------------------------------------------------- condition data


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one named condition check.

    The verdict tests the obstruction, so the condition holds exactly
    when verdict.is_zero; failures names the offending components.
    """

    name: str
    verdict: Verdict
    failures: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict.is_zero


class ConditionError(ValueError):
    """A precondition of a transform does not hold."""

    def __init__(
        self,
        condition: str,
        report: ConditionReport | None = None,
        message: str | None = None,
    ):
        if message is None:
            message = f"condition {condition} does not hold"
            if report is not None and report.failures:
                message += ": " + ", ".join(report.failures)
        super().__init__(message)
        self.condition = condition
        self.report = report


def _gather(name: str, labelled, tol: float, grid: int) -> ConditionReport:
    labels = []
    verdicts = []
    for label, e in labelled:
        labels.append(label)
        verdicts.append(is_zero(e, tol, grid))
    failures = tuple(l for l, v in zip(labels, verdicts) if not v.is_zero)
    return ConditionReport(name, all_zero(verdicts), failures)


# ------------------------------------------------------------------ supports


@dataclass(frozen=True)
class RelativeSupport:
    """Support fibred over a k-dimensional graph in the base.

    zeta holds the g-k functions cutting the base image as
    x^{k+i} = zeta[i](x^1..x^k).  Row j of the slope matrix gives the
    fibre equation y_{g-k+j} = sum_m a[j][m] y_m + chi[j]; the free
    angles are y_1..y_{g-k}.  Entries may be Expr, int or Fraction.
    """

    g: int
    k: int
    zeta: tuple[Expr, ...]
    a: tuple[tuple[Expr, ...], ...]
    chi: tuple[Expr, ...]

    def __post_init__(self):
        if self.g < 1 or not 0 <= self.k <= self.g:
            raise ValueError("need g >= 1 and 0 <= k <= g")
        object.__setattr__(self, "zeta", tuple(_as_expr(e) for e in self.zeta))
        object.__setattr__(
            self, "a", tuple(tuple(_as_expr(e) for e in row) for row in self.a)
        )
        object.__setattr__(self, "chi", tuple(_as_expr(e) for e in self.chi))
        m = self.g - self.k
        if len(self.zeta) != m:
            raise ValueError("one base equation per constrained base coordinate")
        if len(self.a) != self.k or any(len(row) != m for row in self.a):
            raise ValueError(f"slope matrix must be {self.k} by {m}")
        if len(self.chi) != self.k:
            raise ValueError("one fibre offset per constrained angle")
        _check_base_only(self.zeta, self.k, "base equations")
        _check_base_only((e for row in self.a for e in row), self.k, "fibre slopes")
        _check_base_only(self.chi, self.k, "fibre offsets")

    @property
    def fibre_dim(self) -> int:
        return self.g - self.k


@dataclass(frozen=True)
class SectionSupport:
    """Graph support y_j = epsilon[j](x^1..x^g) over the whole base."""

    epsilon: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "epsilon", tuple(_as_expr(e) for e in self.epsilon)
        )
        if not self.epsilon:
            raise ValueError("a section needs a positive-dimensional base")
        _check_base_only(self.epsilon, len(self.epsilon), "section components")

    @property
    def g(self) -> int:
        return len(self.epsilon)


def relative_from_section(s: SectionSupport) -> RelativeSupport:
    """The same graph viewed as a fibred support with k = g.

    The base image is everything, the fibre traces are points, so the
    slope matrix is empty and chi is the section itself.
    """
    g = s.g
    return RelativeSupport(g, g, (), tuple(() for _ in range(g)), s.epsilon)


@dataclass(frozen=True)
class LocalSystemData:
    """Unitary rank-one data on a fibred support.

    alpha lists the dx-coefficients of the connection in the free base
    coordinates (phase convention: the connection form is
    i * sum alpha[j] dx^j).  xi lists constant holonomy phases in [0,1)
    along the free angle directions y_1..y_{g-k} of each fibre.
    """

    alpha: tuple[Expr, ...]
    xi: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(_as_expr(e) for e in self.alpha))
        object.__setattr__(
            self, "xi", tuple(mod1(Fraction(x)) for x in self.xi)
        )


# --------------------------------------------------------- coordinate frame


def _frame(s: RelativeSupport) -> list[Expr]:
    """The base coordinates as functions on the support chart.

    Entry c-1 is x^c restricted to the support: the variable itself for
    c <= k, the defining function zeta^{c} beyond.
    """
    return [var(c) for c in range(1, s.k + 1)] + list(s.zeta)


def _e1_terms(s: RelativeSupport, z: list[Expr]):
    """The dy^m wedge dx^j coefficients of the symplectic form pulled back.

    Vanishing for all j = 1..k, m = 1..g-k makes the y-constant part of
    the support Lagrangian and simultaneously makes the fibre equations
    solvable on the dual side.
    """
    k, m_free = s.k, s.g - s.k
    for j in range(1, k + 1):
        for m in range(1, m_free + 1):
            e = diff(z[m - 1], j)
            for jp in range(1, k + 1):
                c = m_free + jp
                e = add(e, mul(s.a[jp - 1][m - 1], diff(z[c - 1], j)))
            yield f"dy{m}^dx{j}", e


def _curl_terms(s: RelativeSupport, z: list[Expr]):
    """The dx^j wedge dx^m coefficients of the pulled-back symplectic form.

    These involve only the offsets chi; the slope contribution is already
    absorbed by the dy^dx system via the mixed partial derivatives.
    """
    k, m_free = s.k, s.g - s.k
    for j in range(1, k + 1):
        for m in range(j + 1, k + 1):
            e = ZERO
            for jp in range(1, k + 1):
                c = m_free + jp
                chi_c = s.chi[jp - 1]
                e = add(e, mul(diff(z[c - 1], j), diff(chi_c, m)))
                e = sub(e, mul(diff(z[c - 1], m), diff(chi_c, j)))
            yield f"dx{j}^dx{m}", e


def check_C1_lagrangian(
    s: RelativeSupport, tol: float = 1e-9, grid: int = 17
) -> ConditionReport:
    """Whether the support is Lagrangian for sum dx^c wedge dy_c.

    Pulls the symplectic form back along the chart and tests each wedge
    coefficient; failures are labelled by the coefficient, dy{m}^dx{j}
    for the angle block and dx{j}^dx{m} for the offset curl.
    """
    z = _frame(s)
    labelled = itertools.chain(_e1_terms(s, z), _curl_terms(s, z))
    return _gather("C1", labelled, tol, grid)


def _expr_minor_det(rows: list[list[Expr]]) -> Expr:
    if len(rows) == 1:
        return rows[0][0]
    total = ZERO
    for r in range(len(rows)):
        sub_rows = [row[1:] for j, row in enumerate(rows) if j != r]
        cof = mul(rows[r][0], _expr_minor_det(sub_rows))
        total = add(total, cof) if r % 2 == 0 else sub(total, cof)
    return total


def check_C2_C3(
    s: RelativeSupport, tol: float = 1e-9, grid: int = 17
) -> tuple[ConditionReport, ConditionReport]:
    """Constant fibre dimension (C2) and constant slope matrix (C3).

    C2 asks that the rank of the slope matrix not drop anywhere on the
    base: the top nonvanishing minor size is found symbolically, then
    sampled for common zeros of all its minors.  C3 asks that every
    entry be constant, with offending entries named a[j][m], 1-based.
    """
    k, m_free = s.k, s.g - s.k

    c3_labels = []
    c3_verdicts = []
    for j in range(k):
        for m in range(m_free):
            vs = [is_zero(diff(s.a[j][m], v), tol, grid) for v in range(1, k + 1)]
            c3_labels.append(f"a[{j + 1}][{m + 1}]")
            c3_verdicts.append(all_zero(vs))
    c3_failures = tuple(
        l for l, v in zip(c3_labels, c3_verdicts) if not v.is_zero
    )
    c3 = ConditionReport("C3", all_zero(c3_verdicts), c3_failures)

    c2 = ConditionReport("C2", _constant_rank_verdict(s.a, k, tol, grid))
    return c2, c3


def _constant_rank_verdict(a, k: int, tol: float, grid: int) -> Verdict:
    m_free = len(a[0]) if a else 0
    if k == 0 or m_free == 0:
        return Verdict.proven_zero()
    if all(is_constant(e) for row in a for e in row):
        return Verdict.proven_zero()

    top_minors: list[Expr] = []
    top_verdicts: list[Verdict] = []
    larger_sizes_proven = True
    for r in range(min(k, m_free), 0, -1):
        minors = []
        verdicts = []
        for rows in itertools.combinations(range(k), r):
            for cols in itertools.combinations(range(m_free), r):
                d = _expr_minor_det([[a[i][j] for j in cols] for i in rows])
                minors.append(d)
                verdicts.append(is_zero(d, tol, grid))
        if any(not v.is_zero for v in verdicts):
            top_minors = minors
            top_verdicts = verdicts
            break
        larger_sizes_proven = larger_sizes_proven and all(v.proven for v in verdicts)
    if not top_minors:
        return Verdict.proven_zero() if larger_sizes_proven else Verdict.numerically_zero(tol)

    for d, v in zip(top_minors, top_verdicts):
        if is_constant(d) and not v.is_zero:
            return (
                Verdict.proven_zero()
                if larger_sizes_proven
                else Verdict.numerically_zero(tol)
            )

    # Search for a common zero of the top minors, where the rank drops.
    # Generic sampling misses measure-zero drops, so simple rational
    # points are probed as well; a sign change of a lone minor implies a
    # zero between two samples.
    nvars = max([max_var(d) for d in top_minors] + [1])
    points = weyl_points(nvars, grid)
    for t in (0.0, 0.5, 1 / 3, 2 / 3, 0.25, 0.75):
        points.append((t,) * nvars)
        for i in range(nvars):
            points.append(tuple(t if i == j else 0.0 for j in range(nvars)))
    for p in points:
        if all(abs(eval_at(d, p)) <= tol for d in top_minors):
            return Verdict.numerically_nonzero(tol)
    if len(top_minors) == 1:
        vals = [eval_at(top_minors[0], p) for p in points]
        if min(vals) < -tol and max(vals) > tol:
            return Verdict.numerically_nonzero(tol)
    return Verdict.numerically_zero(tol)


def wit_index(s: RelativeSupport, tol: float = 1e-9, grid: int = 17) -> int:
    """Index of the single nonvanishing transform degree: the fibre dimension.

    Requires constant fibre dimension; raises ConditionError otherwise.
    """
    c2, _ = check_C2_C3(s, tol, grid)
    if not c2.holds:
        raise ConditionError("C2", c2)
    return s.g - s.k


# ------------------------------------------------------------ transform data


@dataclass(frozen=True)
class TransformedBundle:
    """Dual-side bundle produced by the transform.

    The support is x^{k+i} = zeta[i] together with
    w^{k+i} = sum_j gamma_tilde[i][j] w^j + varsigma[i]; the connection
    form is i * sum alpha[j] dx^j + 2 pi i * sum fibre_turns[j] dw^j.
    holomorphic records whether gamma_tilde is constant, which is the
    Cauchy-Riemann condition for the support in z^j = x^j + i w^j.
    """

    g: int
    k: int
    zeta: tuple[Expr, ...]
    gamma_tilde: tuple[tuple[Expr, ...], ...]
    varsigma: tuple[Expr, ...]
    alpha: tuple[Expr, ...]
    fibre_turns: tuple[Expr, ...]
    holomorphic: Verdict
    wit_index: int

    def __post_init__(self):
        for name in ("zeta", "gamma_tilde", "varsigma", "alpha", "fibre_turns"):
            val = getattr(self, name)
            if name == "gamma_tilde":
                conv = tuple(tuple(_as_expr(e) for e in row) for row in val)
            else:
                conv = tuple(_as_expr(e) for e in val)
            object.__setattr__(self, name, conv)
        m = self.g - self.k
        if (
            len(self.zeta) != m
            or len(self.gamma_tilde) != m
            or len(self.varsigma) != m
        ):
            raise ValueError("one dual fibre equation per constrained coordinate")
        if any(len(row) != self.k for row in self.gamma_tilde):
            raise ValueError(f"slope matrix must be {m} by {self.k}")
        if len(self.alpha) != self.k or len(self.fibre_turns) != self.k:
            raise ValueError("one connection coefficient per free coordinate")


def _validate_system(s: RelativeSupport, system: LocalSystemData) -> None:
    if len(system.alpha) != s.k:
        raise ValueError("one dx-coefficient per free base coordinate")
    if len(system.xi) != s.g - s.k:
        raise ValueError("holonomy dimension mismatch")
    _check_base_only(system.alpha, s.k, "connection coefficients")


def transform_nontransversal(
    s: RelativeSupport,
    system: LocalSystemData,
    tol: float = 1e-9,
    grid: int = 17,
) -> TransformedBundle:
    """Fibrewise dual of a local system on a fibred Lagrangian support.

    Each fibre trace is dualized exactly as in `fm_absolute`: the dual
    fibre trace is the annihilator subtorus offset by the holonomy xi,
    and the offsets chi become dw-coefficients of the connection.  The
    support must be Lagrangian with constant fibre dimension; the slope
    of the dual fibre equations comes out as the Jacobian of zeta.

    Constancy of the slope matrix is not required.  When it fails, the
    support data and every fibrewise slice are still exact, but the
    stored dx-row keeps the input alpha: the chart rewrite would add
    dx-terms (derivatives of varsigma and of the slope against the dual
    angles) that this representation cannot carry.  The holomorphic
    verdict flags exactly these inputs.
    """
    _validate_system(s, system)
    c1 = check_C1_lagrangian(s, tol, grid)
    if not c1.holds:
        raise ConditionError("C1", c1)
    c2, _ = check_C2_C3(s, tol, grid)
    if not c2.holds:
        raise ConditionError("C2", c2)

    g, k = s.g, s.k
    m_free = g - k
    gamma = tuple(
        tuple(diff(s.zeta[i], j) for j in range(1, k + 1)) for i in range(m_free)
    )

    # Offset of the dual fibre equation for w^{k+1+i}, fixed by requiring
    # each base slice to agree with the absolute transform of that fibre.
    n = min(k, m_free)
    varsigma = []
    for i in range(m_free):
        e = linear_combination(system.xi[:n], gamma[i][:n])
        if k + 1 + i <= m_free:
            e = sub(e, num(system.xi[k + i]))
        varsigma.append(e)

    turns = []
    for j in range(1, k + 1):
        t: Expr = ZERO
        for jp in range(1, k + 1):
            c = m_free + jp
            if c <= k:
                w = num(1) if c == j else ZERO
            else:
                w = gamma[c - k - 1][j - 1]
            t = add(t, mul(s.chi[jp - 1], w))
        turns.append(neg(t))

    holomorphic = all_zero(
        is_zero(diff(e, v), tol, grid)
        for row in gamma
        for e in row
        for v in range(1, k + 1)
    )
    return TransformedBundle(
        g=g,
        k=k,
        zeta=s.zeta,
        gamma_tilde=gamma,
        varsigma=tuple(varsigma),
        alpha=system.alpha,
        fibre_turns=tuple(turns),
        holomorphic=holomorphic,
        wit_index=m_free,
    )


def check_section_lagrangian(
    s: SectionSupport, tol: float = 1e-9, grid: int = 17
) -> ConditionReport:
    """Whether the graph is Lagrangian: the Jacobian of epsilon symmetric.

    Failing pairs are labelled dx{j}^dx{m} like the curl part of the
    fibred Lagrangian check, which this specializes at k = g.
    """
    g = s.g
    sym = [
        (f"dx{j}^dx{m}", sub(diff(s.epsilon[m - 1], j), diff(s.epsilon[j - 1], m)))
        for j in range(1, g + 1)
        for m in range(j + 1, g + 1)
    ]
    return _gather("lagrangian", sym, tol, grid)


def check_flat(alpha, tol: float = 1e-9, grid: int = 17) -> ConditionReport:
    """Whether i * sum alpha[j] dx^j is a flat connection, i.e. closed."""
    return _closure_report(tuple(_as_expr(e) for e in alpha), tol, grid)


def transform_section(
    s: SectionSupport,
    system: LocalSystemData,
    tol: float = 1e-9,
    grid: int = 17,
) -> TransformedBundle:
    """Dual of a local system on a graph over the whole base.

    The graph is Lagrangian exactly when the Jacobian of epsilon is
    symmetric; the dual support is then the whole dual fibration and the
    connection is i * sum alpha[j] dx^j - 2 pi i * sum epsilon[j] dw^j.
    """
    g = s.g
    if len(system.alpha) != g:
        raise ValueError("one dx-coefficient per base coordinate")
    if system.xi:
        raise ValueError("holonomy dimension mismatch")
    _check_base_only(system.alpha, g, "connection coefficients")

    lag = check_section_lagrangian(s, tol, grid)
    if not lag.holds:
        raise ConditionError("lagrangian", lag)

    closed = _closure_report(system.alpha, tol, grid)
    if not closed.holds:
        raise ConditionError("flat", closed)

    return TransformedBundle(
        g=g,
        k=g,
        zeta=(),
        gamma_tilde=(),
        varsigma=(),
        alpha=system.alpha,
        fibre_turns=tuple(neg(e) for e in s.epsilon),
        holomorphic=Verdict.proven_zero(),
        wit_index=0,
    )


def _closure_report(alpha, tol: float, grid: int) -> ConditionReport:
    n = len(alpha)
    labelled = [
        (f"dalpha[{j}][{m}]", sub(diff(alpha[m - 1], j), diff(alpha[j - 1], m)))
        for j in range(1, n + 1)
        for m in range(j + 1, n + 1)
    ]
    return _gather("flat", labelled, tol, grid)


# ------------------------------------------------------------------ curvature


def _hodge_from_turns(turns):
    """Hodge components of d(2 pi i sum t_j dw^j) for z^j = x^j + i w^j.

    Substituting dx = (dz + conj dz)/2 and dw = (dz - conj dz)/(2i) into
    2 pi i sum dt_j wedge dw^j sorts the curvature into types; the three
    returned matrices are the dz^m dz^j, dz^m conj-dz^j and conj-dz^m
    conj-dz^j coefficient grids.
    """
    n = len(turns)
    dt = [[diff(turns[j], m + 1) for j in range(n)] for m in range(n)]
    f20 = tuple(
        tuple(mul(_HALF_PI, sub(dt[m][j], dt[j][m])) for j in range(n))
        for m in range(n)
    )
    f11 = tuple(
        tuple(neg(mul(_HALF_PI, add(dt[m][j], dt[j][m]))) for j in range(n))
        for m in range(n)
    )
    f02 = tuple(
        tuple(mul(_HALF_PI, sub(dt[j][m], dt[m][j])) for j in range(n))
        for m in range(n)
    )
    return f20, f11, f02


def hodge_components(
    alpha, turns, tol: float = 1e-9, grid: int = 17
):
    """Hodge type decomposition of the curvature of a dual-side connection.

    The dx-part must be closed: a closed i * sum alpha[j] dx^j is flat
    and contributes nothing, while a non-closed one would add imaginary
    terms this real representation cannot carry, so that case raises
    ConditionError("flat").
    """
    alpha = tuple(_as_expr(e) for e in alpha)
    turns = tuple(_as_expr(e) for e in turns)
    if len(alpha) not in (0, len(turns)):
        raise ValueError("coefficient rows must have matching length")
    if alpha:
        closed = _closure_report(alpha, tol, grid)
        if not closed.holds:
            raise ConditionError("flat", closed)
    return _hodge_from_turns(turns)


def curvature_hodge(data, tol: float = 1e-9, grid: int = 17):
    """Hodge components (F20, F11, F02) for a transformed bundle.

    Accepts a TransformedBundle or, directly, a SectionSupport (whose
    dual connection has dw-row -epsilon and no dx-part).
    """
    if isinstance(data, SectionSupport):
        return hodge_components((), tuple(neg(e) for e in data.epsilon), tol, grid)
    return hodge_components(data.alpha, data.fibre_turns, tol, grid)


def check_F02_iff_lagrangian(
    s: RelativeSupport,
    bundle: TransformedBundle,
    tol: float = 1e-9,
    grid: int = 17,
) -> Verdict:
    """Whether F02 of the bundle equals the Lagrangian curl of s.

    The (0,2) curvature of the transform is pi/2 times the dx^dx curl
    obstruction of the input support, entry by entry; this checks that
    identity symbolically, so it holds whether or not s is Lagrangian.
    """
    _, _, f02 = _hodge_from_turns(bundle.fibre_turns)
    z = _frame(s)
    curls = dict()
    for label, e in _curl_terms(s, z):
        curls[label] = e
    verdicts = []
    for j in range(1, s.k + 1):
        for m in range(j + 1, s.k + 1):
            expected = mul(_HALF_PI, curls[f"dx{j}^dx{m}"])
            verdicts.append(
                is_zero(sub(f02[m - 1][j - 1], expected), tol, grid)
            )
    return all_zero(verdicts)


# ------------------------------------------------------------------- inverse


@dataclass(frozen=True)
class DualBundleInput:
    """Bundle data on the dual side, as input to the inverse transform.

    The support is x^{k+j} = zeta[j] and w^{k+j} = sum_i P[j][i] w^i +
    Q[j]; the connection form is i * sum alpha[j] dx^j +
    2 pi i * sum beta[j] dw^j.  P and Q must be constant for the inverse
    to exist; that is checked, not assumed.
    """

    g: int
    k: int
    zeta: tuple[Expr, ...]
    P: tuple[tuple[Expr, ...], ...]
    Q: tuple[Expr, ...]
    alpha: tuple[Expr, ...]
    beta: tuple[Expr, ...]

    def __post_init__(self):
        if self.g < 1 or not 0 <= self.k <= self.g:
            raise ValueError("need g >= 1 and 0 <= k <= g")
        for name in ("zeta", "P", "Q", "alpha", "beta"):
            val = getattr(self, name)
            if name == "P":
                conv = tuple(tuple(_as_expr(e) for e in row) for row in val)
            else:
                conv = tuple(_as_expr(e) for e in val)
            object.__setattr__(self, name, conv)
        m = self.g - self.k
        if len(self.zeta) != m or len(self.P) != m or len(self.Q) != m:
            raise ValueError("one dual fibre equation per constrained coordinate")
        if any(len(row) != self.k for row in self.P):
            raise ValueError(f"slope matrix must be {m} by {self.k}")
        if len(self.alpha) != self.k or len(self.beta) != self.k:
            raise ValueError("one connection coefficient per free coordinate")
        _check_base_only(self.zeta, self.k, "base equations")
        _check_base_only(
            itertools.chain((e for row in self.P for e in row), self.Q),
            self.k,
            "dual fibre coefficients",
        )
        _check_base_only(self.alpha, self.k, "connection coefficients")
        _check_base_only(self.beta, self.k, "connection coefficients")


def dual_input_from_bundle(bundle: TransformedBundle) -> DualBundleInput:
    """Repackage a transform output as input for the inverse transform."""
    return DualBundleInput(
        g=bundle.g,
        k=bundle.k,
        zeta=bundle.zeta,
        P=bundle.gamma_tilde,
        Q=bundle.varsigma,
        alpha=bundle.alpha,
        beta=bundle.fibre_turns,
    )


def check_D_conditions(
    bundle: DualBundleInput, tol: float = 1e-9, grid: int = 17
) -> tuple[ConditionReport, ConditionReport, ConditionReport]:
    """The three dual-side conditions, one report each.

    D1: the dual fibre equations have constant coefficients, so the
    support is affine along the fibres.  D2: the dx-part of the
    connection is closed.  D3: no coefficient depends on the dual
    angles, which the representation enforces, so it is reported proven.
    """
    k = bundle.k
    d1_labelled = []
    for j, row in enumerate(bundle.P):
        for i, e in enumerate(row):
            for v in range(1, k + 1):
                d1_labelled.append((f"P[{j + 1}][{i + 1}]", diff(e, v)))
    for j, e in enumerate(bundle.Q):
        for v in range(1, k + 1):
            d1_labelled.append((f"Q[{j + 1}]", diff(e, v)))
    d1_raw = _gather("D1", d1_labelled, tol, grid)
    seen = []
    for f in d1_raw.failures:
        if f not in seen:
            seen.append(f)
    d1 = ConditionReport("D1", d1_raw.verdict, tuple(seen))

    d2_raw = _closure_report(bundle.alpha, tol, grid)
    d2 = ConditionReport("D2", d2_raw.verdict, d2_raw.failures)

    d3 = ConditionReport("D3", Verdict.proven_zero())
    return d1, d2, d3


def check_cauchy_riemann(
    bundle: DualBundleInput, tol: float = 1e-9, grid: int = 17
) -> ConditionReport:
    """Whether the dual support is complex for z^j = x^j + i w^j.

    Requires the w-slope to equal the Jacobian of the base equations,
    entry by entry; offending entries are named P[j][i], 1-based.
    """
    labelled = [
        (
            f"P[{j + 1}][{i + 1}]",
            sub(bundle.P[j][i], diff(bundle.zeta[j], i + 1)),
        )
        for j in range(len(bundle.P))
        for i in range(bundle.k)
    ]
    return _gather("cauchy-riemann", labelled, tol, grid)


class InverseResult(NamedTuple):
    support: RelativeSupport
    system: LocalSystemData
    wit_index: int


def inverse_transform(
    bundle: DualBundleInput, tol: float = 1e-9, grid: int = 17
) -> InverseResult:
    """Local system on the original side whose transform is the bundle.

    Dualizing the fibre equations w^{k+j} = sum_i P[j][i] w^i + Q[j]
    back gives, with M = (delta_{l,c} + P^c_l), the support equations
    sum_c M[l][c] y_c + beta_l = 0, re-solved for the last k angles; the
    dw-coefficients beta return to fibre offsets and the constants Q
    return to holonomy phases.  The wit_index reported is that of the
    input bundle, the dimension k of its fibre traces.

    The returned alpha is the chart form of the induced connection,
    which differs from the dx-row fed into the forward transform by the
    exact gauge term 2 pi d(sum_c Q_c chi_c); for constant offsets the
    two agree and the round trip is an identity.
    """
    d1, d2, _ = check_D_conditions(bundle, tol, grid)
    if not d1.holds:
        raise ConditionError("D1", d1)
    if not d2.holds:
        raise ConditionError("D2", d2)

    g, k = bundle.g, bundle.k
    m_free = g - k
    try:
        p_val = [
            [eval_exact(e, ()) for e in row] for row in bundle.P
        ]
        q_val = [eval_exact(e, ()) for e in bundle.Q]
    except ValueError as exc:
        raise ValueError(
            "inverse transform needs rational constant fibre coefficients"
        ) from exc

    # M[l][c] = delta + P^c_l over c = 1..g; split into the free block
    # (columns 1..g-k) and the block of the angles being solved for.
    m_last_rows = []
    m_free_rows = []
    for l in range(1, k + 1):
        row_last = []
        row_free = []
        for c in range(1, g + 1):
            e = Fraction(1 if c == l else 0)
            if c > k:
                e += p_val[c - k - 1][l - 1]
            if c > m_free:
                row_last.append(e)
            else:
                row_free.append(e)
        m_last_rows.append(row_last)
        m_free_rows.append(row_free)
    m_last = RatMatrix(m_last_rows, k)
    try:
        m_inv = m_last.inverse()
    except ValueError:
        raise ConditionError(
            "chart",
            message=(
                "the inverse support is not a graph over the angles "
                f"y_1..y_{m_free}; it has no equations of the solved form"
            ),
        )

    a_exact = [
        [
            -sum(m_inv.rows[l][lp] * m_free_rows[lp][m] for lp in range(k))
            for m in range(m_free)
        ]
        for l in range(k)
    ]
    a_rows = tuple(tuple(num(e) for e in row) for row in a_exact)
    chi_out = tuple(
        linear_combination([-m_inv.rows[l][lp] for lp in range(k)], bundle.beta)
        for l in range(k)
    )

    def q_of(c: int) -> Fraction:
        return q_val[c - k - 1] if c > k else Fraction(0)

    xi_out = tuple(
        mod1(
            -q_of(m + 1)
            - sum(q_of(m_free + l + 1) * a_exact[l][m] for l in range(k))
        )
        for m in range(m_free)
    )

    alpha_out = []
    for j in range(1, k + 1):
        corr: Expr = ZERO
        for l in range(k):
            q = q_of(m_free + l + 1)
            if q:
                corr = add(corr, mul(num(q), diff(chi_out[l], j)))
        alpha_out.append(sub(bundle.alpha[j - 1], mul(num(2), mul(PI, corr))))

    support = RelativeSupport(g, k, bundle.zeta, a_rows, chi_out)
    system = LocalSystemData(tuple(alpha_out), xi_out)
    return InverseResult(support, system, k)


# ------------------------------------------------------------- fibre slices


def _rational_rows_to_subtorus(torus: Torus, rows, offsets) -> AffineSubtorus:
    int_rows = []
    int_offsets = []
    for row, off in zip(rows, offsets):
        scale = 1
        for e in list(row) + [off]:
            scale = scale * e.denominator // math.gcd(scale, e.denominator)
        int_rows.append([int(e * scale) for e in row])
        int_offsets.append(off * scale)
    return subtorus_from_equations(torus, int_rows, int_offsets)


def fibre_support(
    s: RelativeSupport, base: Sequence, torus: Torus | None = None
) -> AffineSubtorus:
    """The fibre trace of the support over a rational base point.

    base gives the free coordinates x^1..x^k; coefficients are evaluated
    there and the solved equations are rewritten as integer constraints.
    """
    t = torus if torus is not None else Torus(s.g)
    b = rat_vector(base)
    if len(b) != s.k:
        raise ValueError("one coordinate per free base direction")
    m_free = s.g - s.k
    rows = []
    offsets = []
    for j in range(s.k):
        row = [Fraction(0)] * s.g
        for m in range(m_free):
            row[m] = -eval_exact(s.a[j][m], b)
        row[m_free + j] = Fraction(1)
        rows.append(row)
        offsets.append(-eval_exact(s.chi[j], b))
    return _rational_rows_to_subtorus(t, rows, offsets)


def fibre_system(
    s: RelativeSupport,
    system: LocalSystemData,
    base: Sequence,
    torus: Torus | None = None,
) -> SubtorusLocalSystem:
    """The sliced local system on the fibre trace over a base point.

    Holonomy along a canonical direction of the slice is the pairing of
    xi with the free-angle part of that direction.
    """
    _validate_system(s, system)
    sup = fibre_support(s, base, torus)
    m_free = s.g - s.k
    hol = tuple(
        sum(Fraction(d[m]) * system.xi[m] for m in range(m_free))
        for d in sup.direction_basis().rows
    )
    return SubtorusLocalSystem(sup, hol)


def fibre_of_transform(
    bundle: TransformedBundle, base: Sequence, torus: Torus | None = None
) -> SubtorusLocalSystem:
    """The dual-side slice of a transformed bundle over a base point.

    The support equations are the evaluated dual fibre equations; the
    holonomy along a canonical direction is the pairing of the direction
    with the dw-coefficient row.
    """
    t = torus if torus is not None else Torus(bundle.g).dual()
    b = rat_vector(base)
    if len(b) != bundle.k:
        raise ValueError("one coordinate per free base direction")
    g, k = bundle.g, bundle.k
    m_free = g - k
    rows = []
    offsets = []
    for i in range(m_free):
        row = [Fraction(0)] * g
        for j in range(k):
            row[j] = -eval_exact(bundle.gamma_tilde[i][j], b)
        row[k + i] = Fraction(1)
        rows.append(row)
        offsets.append(-eval_exact(bundle.varsigma[i], b))
    sup = _rational_rows_to_subtorus(t, rows, offsets)
    turns_at_b = [eval_exact(e, b) for e in bundle.fibre_turns]
    hol = tuple(
        mod1(sum(Fraction(d[j]) * turns_at_b[j] for j in range(k)))
        for d in sup.direction_basis().rows
    )
    return SubtorusLocalSystem(sup, hol)
