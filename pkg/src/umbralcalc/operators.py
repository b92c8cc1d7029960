"""Linear operators on the degree-bounded polynomial space.

An operator is stored as its matrix in the monomial basis: column j is the
image of x^j, itself a polynomial of degree at most the bound N. Operators
that genuinely raise degree lose their top column to truncation; validity
windows downstream account for that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameterError,
    BasisMismatchError,
    DegreeOverflowError,
    EigenSeriesError,
    NotDegreeLoweringError,
    SingularOperatorError,
)
from .poly import (
    ONE,
    Polynomial,
    SequenceTable,
    coordinates_in_table,
    fr,
    polynomial_from_json,
)
from .psi import AdmissibleSequence
from .series import DeltaSeries

LOWERS_BY_ONE = "lowers_by_one"
RAISES_BY_ONE = "raises_by_one"
PRESERVES = "preserves"
UNGRADED = "ungraded"


@dataclass(frozen=True)
class OperatorMatrix:
    """Columns (images of the monomials) of an operator on degrees 0..bound."""

    columns: tuple

    def __post_init__(self):
        columns = tuple(self.columns)
        object.__setattr__(self, "columns", columns)
        bound = len(columns) - 1
        if bound < 0:
            raise BadParameterError("operator needs at least one column")
        for j, col in enumerate(columns):
            if col.degree > bound:
                raise DegreeOverflowError(
                    f"column {j} has degree {col.degree} above bound {bound}"
                )

    @property
    def bound(self) -> int:
        return len(self.columns) - 1

    def column(self, j: int) -> Polynomial:
        return self.columns[j]

    def apply(self, p: Polynomial) -> Polynomial:
        if p.degree > self.bound:
            raise DegreeOverflowError(
                f"input degree {p.degree} exceeds operator bound {self.bound}"
            )
        out = Polynomial()
        for j, c in enumerate(p.coeffs):
            if c != 0:
                out = out + self.columns[j].scale(c)
        return out

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """Matrix of self applied after other."""
        if other.bound != self.bound:
            raise BadParameterError("operator bounds differ")
        return OperatorMatrix(tuple(self.apply(col) for col in other.columns))

    def add(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.bound != self.bound:
            raise BadParameterError("operator bounds differ")
        return OperatorMatrix(
            tuple(a + b for a, b in zip(self.columns, other.columns))
        )

    def subtract(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.bound != self.bound:
            raise BadParameterError("operator bounds differ")
        return OperatorMatrix(
            tuple(a - b for a, b in zip(self.columns, other.columns))
        )

    def scale(self, c) -> "OperatorMatrix":
        c = fr(c)
        return OperatorMatrix(tuple(col.scale(c) for col in self.columns))

    def power(self, n: int) -> "OperatorMatrix":
        if n < 0:
            raise BadParameterError("negative operator power")
        out = identity_operator(self.bound)
        for _ in range(n):
            out = self.compose(out)
        return out

    @property
    def grading(self) -> str:
        n = self.bound
        cols = self.columns
        if cols[0].is_zero() and all(cols[j].degree == j - 1 for j in range(1, n + 1)):
            return LOWERS_BY_ONE
        if all(cols[j].degree == j + 1 for j in range(n)):
            return RAISES_BY_ONE
        if all(cols[j].is_zero() or cols[j].degree == j for j in range(n + 1)):
            return PRESERVES
        return UNGRADED

    def agreement_window(self, other: "OperatorMatrix") -> int:
        """Largest d with columns 0..d identical (-1 if none agree)."""
        d = -1
        for j in range(min(self.bound, other.bound) + 1):
            if self.columns[j] != other.columns[j]:
                break
            d = j
        return d

    def equal_on(self, other: "OperatorMatrix", window: int) -> bool:
        return self.agreement_window(other) >= window

    def to_json(self) -> list:
        return [col.to_json_list() for col in self.columns]

    @staticmethod
    def from_json(data) -> "OperatorMatrix":
        return OperatorMatrix(tuple(polynomial_from_json(col) for col in data))

    @staticmethod
    def from_columns(columns) -> "OperatorMatrix":
        return OperatorMatrix(tuple(columns))


def identity_operator(bound: int) -> OperatorMatrix:
    return OperatorMatrix(tuple(Polynomial.monomial(j) for j in range(bound + 1)))


def zero_operator(bound: int) -> OperatorMatrix:
    return OperatorMatrix(tuple(Polynomial() for _ in range(bound + 1)))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a.compose(b).subtract(b.compose(a))


def require_lowers_by_one(op: OperatorMatrix) -> OperatorMatrix:
    if op.grading != LOWERS_BY_ONE:
        raise NotDegreeLoweringError(
            f"operator grading is {op.grading}, expected {LOWERS_BY_ONE}"
        )
    return op


# -- generators ------------------------------------------------------------


def psi_derivative(seq: AdmissibleSequence, bound: int) -> OperatorMatrix:
    """Lowering operator graded by the family: x^n -> n_psi x^{n-1}."""
    cols = [Polynomial()]
    for j in range(1, bound + 1):
        cols.append(Polynomial.monomial(j - 1, seq.n_psi(j)))
    return OperatorMatrix(tuple(cols))


def xhat_psi(seq: AdmissibleSequence, bound: int) -> OperatorMatrix:
    """Dual raising operator: x^n -> ((n+1)/(n+1)_psi) x^{n+1}, top truncated."""
    cols = []
    for j in range(bound):
        cols.append(Polynomial.monomial(j + 1, Fraction(j + 1) / seq.n_psi(j + 1)))
    cols.append(Polynomial())
    return OperatorMatrix(tuple(cols))


def multiplication_x(bound: int) -> OperatorMatrix:
    """Multiplication by x with the top column truncated away."""
    cols = [Polynomial.monomial(j + 1) for j in range(bound)]
    cols.append(Polynomial())
    return OperatorMatrix(tuple(cols))


def dilation(q, bound: int) -> OperatorMatrix:
    """Scale substitution p(x) -> p(q x)."""
    q = fr(q)
    return OperatorMatrix(
        tuple(Polynomial.monomial(j, q**j) for j in range(bound + 1))
    )


def jackson_derivative(p: Polynomial, q) -> Polynomial:
    """(p(x) - p(qx)) / ((1-q) x), exact on polynomials."""
    q = fr(q)
    if q == 1:
        raise BadParameterError("jackson derivative undefined at q = 1")
    out = []
    for j in range(p.degree):
        out.append(p.coefficient(j + 1) * (1 - q ** (j + 1)) / (1 - q))
    return Polynomial(out)


def jackson_operator(q, bound: int) -> OperatorMatrix:
    q = fr(q)
    if q == 1:
        raise BadParameterError("jackson derivative undefined at q = 1")
    cols = [Polynomial()]
    for j in range(1, bound + 1):
        cols.append(Polynomial.monomial(j - 1, (1 - q**j) / (1 - q)))
    return OperatorMatrix(tuple(cols))


def divided_difference_apply(p: Polynomial) -> Polynomial:
    """(p(x) - p(0)) / x."""
    return Polynomial(p.coeffs[1:])


def divided_difference(bound: int) -> OperatorMatrix:
    cols = [Polynomial()]
    for j in range(1, bound + 1):
        cols.append(Polynomial.monomial(j - 1))
    return OperatorMatrix(tuple(cols))


def forward_difference(bound: int) -> OperatorMatrix:
    """p(x) -> p(x+1) - p(x)."""
    shifted = Polynomial([1, 1])
    cols = []
    for j in range(bound + 1):
        cols.append(shifted**j - Polynomial.monomial(j))
    return OperatorMatrix(tuple(cols))


def nhat_diagonal(seq: AdmissibleSequence, bound: int) -> OperatorMatrix:
    """Diagonal x^m -> (m+1)_psi x^m (needs the family valid to bound+1)."""
    return OperatorMatrix(
        tuple(Polynomial.monomial(j, seq.n_psi(j + 1)) for j in range(bound + 1))
    )


def evaluation_at_zero(bound: int) -> OperatorMatrix:
    cols = [ONE] + [Polynomial() for _ in range(bound)]
    return OperatorMatrix(tuple(cols))


def generalized_shift(seq: AdmissibleSequence, p: Polynomial, y) -> Polynomial:
    """Shift-like smearing of p by y, graded by the family binomials."""
    y = fr(y)
    out = Polynomial()
    for j, c in enumerate(p.coeffs):
        if c == 0:
            continue
        # index i of row holds the x^i coefficient (k = j - i in the sum)
        row = [c * seq.binomial(j, k) * y**k for k in range(j, -1, -1)]
        out = out + Polynomial(row)
    return out


def generalized_shift_operator(seq: AdmissibleSequence, y, bound: int) -> OperatorMatrix:
    y = fr(y)
    cols = []
    for j in range(bound + 1):
        coeffs = [Fraction(0)] * (j + 1)
        for k in range(j + 1):
            coeffs[j - k] = seq.binomial(j, k) * y**k
        cols.append(Polynomial(coeffs))
    return OperatorMatrix(tuple(cols))


def realize_delta_series(s: DeltaSeries, bound: int) -> OperatorMatrix:
    """Matrix of sum_k c_k Q^k with Q the family lowering operator."""
    seq = s.base
    cols = []
    for j in range(bound + 1):
        coeffs = [Fraction(0)] * (j + 1)
        for k in range(min(s.order, j) + 1):
            c = s.coefficient(k)
            if c != 0:
                coeffs[j - k] += c * seq.falling_factorial(j, k)
        cols.append(Polynomial(coeffs))
    return OperatorMatrix(tuple(cols))


def multiplication_operator(p: Polynomial, bound: int) -> OperatorMatrix:
    """Multiplication by a fixed polynomial, overflow truncated away."""
    cols = []
    for j in range(bound + 1):
        cols.append((p * Polynomial.monomial(j)).truncate(bound))
    return OperatorMatrix(tuple(cols))


def operator_polynomial(p: Polynomial, m: OperatorMatrix) -> OperatorMatrix:
    """Matrix of p(M) = sum_k p_k M^k."""
    out = zero_operator(m.bound)
    power = identity_operator(m.bound)
    for k, c in enumerate(p.coeffs):
        if c != 0:
            out = out.add(power.scale(c))
        if k < p.degree:
            power = m.compose(power)
    return out


def operator_polynomial_applied(p: Polynomial, m: OperatorMatrix, start: Polynomial) -> Polynomial:
    """p(M) applied to `start` without building the matrix."""
    out = Polynomial()
    vec = start
    for k, c in enumerate(p.coeffs):
        if c != 0:
            out = out + vec.scale(c)
        if k < p.degree:
            vec = m.apply(vec)
    return out


def pincherle_derivative(t: OperatorMatrix, raiser: OperatorMatrix) -> OperatorMatrix:
    """Commutator [T, raiser]; for series in the lowering operator this is
    the formal derivative of the series."""
    return commutator(t, raiser)


# -- dual raising operator --------------------------------------------------


def verify_basic_for(q_op: OperatorMatrix, table: SequenceTable, seq: AdmissibleSequence) -> None:
    if table.bound != q_op.bound:
        raise BasisMismatchError("table bound differs from operator bound")
    if not q_op.apply(table[0]).is_zero():
        raise BasisMismatchError("entry 0 is not annihilated")
    for n in range(1, table.bound + 1):
        expected = table[n - 1].scale(seq.n_psi(n))
        if q_op.apply(table[n]) != expected:
            raise BasisMismatchError(f"lowering recurrence fails at entry {n}")


def dual_operator(
    q_op: OperatorMatrix, table: SequenceTable, seq: AdmissibleSequence
) -> OperatorMatrix:
    """Raising companion of a lowering operator in its own basic basis.

    Sends entry n to ((n+1)/(n+1)_psi) entry n+1; the image of the top entry
    is lost to truncation. Raises BasisMismatchError if the table is not the
    basic sequence of the operator.
    """
    verify_basic_for(q_op, table, seq)
    bound = q_op.bound
    cols = []
    for j in range(bound + 1):
        coords = coordinates_in_table(table, Polynomial.monomial(j))
        image = Polynomial()
        for i in range(bound):
            if coords[i] != 0:
                factor = Fraction(i + 1) / seq.n_psi(i + 1)
                image = image + table[i + 1].scale(coords[i] * factor)
        cols.append(image)
    return OperatorMatrix(tuple(cols))


# -- psi-form detection ------------------------------------------------------


@dataclass(frozen=True)
class PsiFormResult:
    """Outcome of reading a lowering operator as a graded series.

    `candidate` holds the diagonal-read generalized integers b_{n,1}; when all
    are nonzero, `seq`/`coefficients` give the reconstruction data. `consistent`
    states whether every cross coefficient matches the graded-series pattern;
    `violation` holds the first (n, k, expected, found) mismatch otherwise.
    """

    candidate: tuple
    scale: Fraction
    consistent: bool
    violation: tuple | None
    seq: AdmissibleSequence | None
    series: DeltaSeries | None


def detect_psi_form(q_op: OperatorMatrix) -> PsiFormResult:
    require_lowers_by_one(q_op)
    bound = q_op.bound
    b = {}
    for n in range(1, bound + 1):
        col = q_op.column(n)
        for k in range(1, n + 1):
            b[(n, k)] = col.coefficient(n - k)
    candidate = tuple(b[(n, 1)] for n in range(1, bound + 1))
    scale = candidate[0]
    for n in range(1, bound + 1):
        if b[(n, 1)] == 0:
            return PsiFormResult(
                candidate, scale, False, (n, 1, None, Fraction(0)), None, None
            )
    seq = AdmissibleSequence.custom(candidate, bound, label="detected")
    coeffs = [Fraction(0)] + [
        b[(k, k)] / seq.factorial(k) for k in range(1, bound + 1)
    ]
    series = DeltaSeries.from_list(seq, coeffs, bound)
    for n in range(1, bound + 1):
        for k in range(1, n + 1):
            expected = seq.binomial(n, k) * b[(k, k)]
            if b[(n, k)] != expected:
                return PsiFormResult(
                    candidate, scale, False, (n, k, expected, b[(n, k)]), seq, series
                )
    return PsiFormResult(candidate, scale, True, None, seq, series)


def realize_psi_form(result: PsiFormResult, bound: int | None = None) -> OperatorMatrix:
    if result.series is None:
        raise BadParameterError("detection produced no reconstruction data")
    return realize_delta_series(result.series, bound if bound is not None else result.seq.bound)


# -- expansion in a dual pair -------------------------------------------------


@dataclass(frozen=True)
class ExpansionResult:
    """T = sum_n q_n(raiser) Q^n, solved degree by degree."""

    coefficients: tuple  # Polynomial q_n, n = 0..bound
    reassembled: OperatorMatrix

    def coefficient(self, n: int) -> Polynomial:
        return self.coefficients[n]


def _raiser_ladder(raiser: OperatorMatrix):
    """Powers of the raiser and the triangular basis raiser^i(1)."""
    bound = raiser.bound
    powers = [identity_operator(bound)]
    for _ in range(bound):
        powers.append(raiser.compose(powers[-1]))
    ladder = [p.apply(ONE) for p in powers]
    for i, entry in enumerate(ladder):
        if entry.degree != i:
            raise SingularOperatorError(
                f"raiser power {i} applied to 1 has degree {entry.degree}, not {i}"
            )
    return powers, ladder


def expand_in_dual_pair(
    t: OperatorMatrix, q_op: OperatorMatrix, raiser: OperatorMatrix
) -> ExpansionResult:
    require_lowers_by_one(q_op)
    bound = t.bound
    if q_op.bound != bound or raiser.bound != bound:
        raise BadParameterError("operator bounds differ")
    r_powers, ladder = _raiser_ladder(raiser)
    q_powers = [identity_operator(bound)]
    for _ in range(bound):
        q_powers.append(q_op.compose(q_powers[-1]))

    acc = zero_operator(bound)
    coefficients = []
    for j in range(bound + 1):
        rho = t.column(j) - acc.column(j)
        # expand rho in the triangular ladder {raiser^i 1}
        u = [Fraction(0)] * (bound + 1)
        residue = rho
        for i in range(bound, -1, -1):
            c = residue.coefficient(i)
            if c != 0:
                u[i] = c / ladder[i].coefficient(i)
                residue = residue - ladder[i].scale(u[i])
        pivot = q_powers[j].apply(Polynomial.monomial(j)).constant_term
        q_j = Polynomial([ui / pivot for ui in u])
        coefficients.append(q_j)
        if not q_j.is_zero():
            step = zero_operator(bound)
            for i, c in enumerate(q_j.coeffs):
                if c != 0:
                    step = step.add(r_powers[i].scale(c))
            acc = acc.add(step.compose(q_powers[j]))
    return ExpansionResult(tuple(coefficients), acc)


# -- eigenseries and indicator ------------------------------------------------


def eigen_series(q_op: OperatorMatrix, truncation: int) -> list:
    """Graded ladder phi_0 = 1, Q phi_n = phi_{n-1}, phi_n(0) = 0.

    These are the coefficients of the normalized eigenfunction expansion of
    the lowering operator; existence needs every subdiagonal pivot nonzero.
    """
    require_lowers_by_one(q_op)
    if truncation > q_op.bound:
        raise DegreeOverflowError("eigenseries truncation beyond operator bound")
    phis = [ONE]
    for n in range(1, truncation + 1):
        target = phis[-1]
        coeffs = [Fraction(0)] * (n + 1)
        residue = target
        for i in range(n, 0, -1):
            pivot_poly = q_op.column(i)
            pivot = pivot_poly.coefficient(i - 1)
            if pivot == 0:
                raise EigenSeriesError(f"zero pivot at degree {i}")
            c = residue.coefficient(i - 1)
            coeffs[i] = c / pivot
            if c != 0:
                residue = residue - pivot_poly.scale(coeffs[i])
        if not residue.is_zero():
            raise EigenSeriesError("ladder solve left a residue")
        phis.append(Polynomial(coeffs))
    return phis


@dataclass(frozen=True)
class IndicatorResult:
    """Lambda-expansion of an operator over a lowering operator.

    `coefficients[n]` multiplies lambda^n; `conjugated[n]` is the same
    coefficient obtained through the eigenfunction conjugation route, and
    `routes_agree` states whether the two match on all computed orders.
    """

    coefficients: tuple
    conjugated: tuple
    routes_agree: bool


def indicator(t: OperatorMatrix, q_op: OperatorMatrix, truncation: int) -> IndicatorResult:
    expansion = expand_in_dual_pair(t, q_op, multiplication_x(t.bound))
    direct = tuple(expansion.coefficients[: truncation + 1])

    phis = eigen_series(q_op, truncation)
    t_phis = [t.apply(p) for p in phis]
    inv = [ONE]
    for r in range(1, truncation + 1):
        acc = Polynomial()
        for i in range(1, r + 1):
            acc = acc + phis[i] * inv[r - i]
        inv.append(-acc)
    conjugated = []
    for j in range(truncation + 1):
        acc = Polynomial()
        for i in range(j + 1):
            acc = acc + inv[i] * t_phis[j - i]
        conjugated.append(acc)
    agree = list(direct) == conjugated
    return IndicatorResult(direct, tuple(conjugated), agree)
