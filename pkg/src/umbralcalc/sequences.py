"""Graded polynomial sequences attached to lowering operators.

A basic sequence {p_n} of a lowering operator Q satisfies p_0 = 1,
p_n(0) = 0 and Q p_n = n_psi p_{n-1}. A Sheffer companion relative to an
invertible series S is s_n = S^{-1} p_n. The triangular solve is the ground
truth here; the closed-form routes are checked against it, never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParameterError, SingularOperatorError
from .operators import (
    OperatorMatrix,
    eigen_series,
    generalized_shift,
    realize_delta_series,
    require_lowers_by_one,
    xhat_psi,
)
from .poly import ONE, Polynomial, SequenceTable, coordinates_in_table
from .psi import AdmissibleSequence
from .series import (
    DeltaSeries,
    series_compose,
    series_derivative,
    series_inverse,
    series_mul,
    series_pad,
)


@dataclass(frozen=True)
class BasicSequence:
    seq: AdmissibleSequence
    q_op: OperatorMatrix
    table: SequenceTable

    @property
    def bound(self) -> int:
        return self.table.bound

    def __getitem__(self, n: int) -> Polynomial:
        return self.table[n]


@dataclass(frozen=True)
class ShefferSequence:
    seq: AdmissibleSequence
    basic: BasicSequence
    q_series: DeltaSeries | None
    s_series: DeltaSeries
    table: SequenceTable

    @property
    def bound(self) -> int:
        return self.table.bound

    @property
    def q_op(self) -> OperatorMatrix:
        return self.basic.q_op

    def __getitem__(self, n: int) -> Polynomial:
        return self.table[n]


def basic_sequence(
    q_op: OperatorMatrix, seq: AdmissibleSequence, bound: int | None = None
) -> BasicSequence:
    """Solve the graded recurrence degree by degree (unique, exact)."""
    require_lowers_by_one(q_op)
    bound = q_op.bound if bound is None else bound
    if bound > q_op.bound:
        raise BadParameterError("bound exceeds operator bound")
    entries = [ONE]
    for n in range(1, bound + 1):
        target = entries[-1].scale(seq.n_psi(n))
        coeffs = [Fraction(0)] * (n + 1)
        residue = target
        for i in range(n, 0, -1):
            col = q_op.column(i)
            pivot = col.coefficient(i - 1)
            if pivot == 0:
                raise SingularOperatorError(f"zero subdiagonal pivot at degree {i}")
            c = residue.coefficient(i - 1)
            if c != 0:
                coeffs[i] = c / pivot
                residue = residue - col.scale(coeffs[i])
        if not residue.is_zero():
            raise SingularOperatorError("graded solve left a residue")
        entries.append(Polynomial(coeffs))
    return BasicSequence(seq, q_op, SequenceTable(tuple(entries)))


def basic_sequence_from_series(q_series: DeltaSeries, bound: int) -> BasicSequence:
    q_series.require_delta()
    op = realize_delta_series(q_series, bound)
    return basic_sequence(op, q_series.base, bound)


def closed_form_routes(q_series: DeltaSeries, bound: int) -> dict:
    """Four closed-form constructions of the basic sequence of q(Q).

    Writing q(t) = t * s(t) with s invertible:
      prefactor:        p_n = q'(Q) s(Q)^{-n-1} x^n
      corrected_power:  p_n = s(Q)^{-n} x^n - (n_psi/n) (s^{-n})'(Q) x^{n-1}
      raising:          p_n = (n_psi/n) xhat s(Q)^{-n} x^{n-1}
      iterative:        p_n = (n_psi/n) xhat q'(Q)^{-1} p_{n-1}
    All applications stay inside the degree bound, so each route is exact.
    """
    q_series.require_delta()
    seq = q_series.base
    order = q_series.order
    s_coeffs = list(q_series.shift_down().coeffs)  # s(t), invertible
    s_inv = series_inverse(s_coeffs, order)
    qprime = q_series.formal_derivative()
    qprime_inv = series_inverse(qprime.coeffs, order)

    raiser = xhat_psi(seq, bound)

    def realize(coeffs):
        return realize_delta_series(DeltaSeries.from_list(seq, coeffs, order), bound)

    qprime_op = realize(qprime.coeffs)
    qprime_inv_op = realize(qprime_inv)

    # s^{-k} series, k = 0..bound+1
    s_inv_powers = [series_pad([1], order)]
    for _ in range(bound + 1):
        s_inv_powers.append(series_mul(s_inv_powers[-1], s_inv, order))

    prefactor, corrected, raising, iterative = [ONE], [ONE], [ONE], [ONE]
    for n in range(1, bound + 1):
        xn = Polynomial.monomial(n)
        xnm1 = Polynomial.monomial(n - 1)
        weight = seq.n_psi(n) / Fraction(n)

        route1 = qprime_op.apply(realize(s_inv_powers[n + 1]).apply(xn))
        prefactor.append(route1)

        s_inv_n = s_inv_powers[n]
        route2 = realize(s_inv_n).apply(xn) - realize(
            series_derivative(s_inv_n, order)
        ).apply(xnm1).scale(weight)
        corrected.append(route2)

        route3 = raiser.apply(realize(s_inv_n).apply(xnm1)).scale(weight)
        raising.append(route3)

        route4 = raiser.apply(qprime_inv_op.apply(iterative[-1])).scale(weight)
        iterative.append(route4)

    return {
        "prefactor": SequenceTable(tuple(prefactor)),
        "corrected_power": SequenceTable(tuple(corrected)),
        "raising": SequenceTable(tuple(raising)),
        "iterative": SequenceTable(tuple(iterative)),
    }


def rodrigues_sequence(q_series: DeltaSeries, bound: int) -> BasicSequence:
    """Basic sequence by iterated raising, cross-checked against all routes."""
    routes = closed_form_routes(q_series, bound)
    table = routes["iterative"]
    for name, other in routes.items():
        if other.entries != table.entries:
            raise SingularOperatorError(
                f"closed-form route {name} disagrees with the iterative route"
            )
    op = realize_delta_series(q_series, bound)
    return BasicSequence(q_series.base, op, table)


def sheffer_sequence(
    q_series: DeltaSeries, s_series: DeltaSeries, bound: int
) -> ShefferSequence:
    q_series.require_delta()
    s_series.require_invertible()
    basic = basic_sequence_from_series(q_series, bound)
    s_inv_op = realize_delta_series(s_series.multiplicative_inverse(), bound)
    entries = tuple(s_inv_op.apply(p) for p in basic.table)
    return ShefferSequence(
        q_series.base, basic, q_series, s_series, SequenceTable(entries)
    )


def appell_sequence(s_series: DeltaSeries, bound: int) -> ShefferSequence:
    q = DeltaSeries.from_list(s_series.base, [0, 1], s_series.order)
    return sheffer_sequence(q, s_series, bound)


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification; witness holds the first failure."""

    passed: bool
    description: str
    witness: dict | None = None


def default_shift_samples(count: int) -> list:
    out = [Fraction(0), Fraction(1), Fraction(-1)]
    k = 2
    while len(out) < count:
        out.append(Fraction(k))
        k += 1
    return out[:count]


def verify_sheffer_definition(sheffer: ShefferSequence) -> CheckReport:
    """Degree grading, nonzero constant start, and the lowering recurrence."""
    table = sheffer.table
    q_op = sheffer.q_op
    seq = sheffer.seq
    if table[0].degree != 0:
        return CheckReport(False, "start entry not a constant", {"n": 0})
    for n in range(1, table.bound + 1):
        got = q_op.apply(table[n])
        expected = table[n - 1].scale(seq.n_psi(n))
        if got != expected:
            return CheckReport(
                False,
                "lowering recurrence fails",
                {"n": n, "got": got.to_text(), "expected": expected.to_text()},
            )
    return CheckReport(True, "graded lowering recurrence holds")


def reconstruct_inverse_series(sheffer: ShefferSequence) -> DeltaSeries:
    """Rebuild S^{-1} from constant terms: sum_k (s_k(0)/k_psi!) q(t)^k."""
    if sheffer.q_series is None:
        raise BadParameterError("reconstruction needs the series form of Q")
    seq = sheffer.seq
    order = sheffer.q_series.order
    outer = [
        sheffer.table[k].constant_term / seq.factorial(k)
        for k in range(sheffer.bound + 1)
    ]
    composed = series_compose(
        series_pad(outer, order), sheffer.q_series.coeffs, order
    )
    return DeltaSeries.from_list(seq, composed, order)


def verify_inverse_reconstruction(sheffer: ShefferSequence) -> CheckReport:
    rebuilt = reconstruct_inverse_series(sheffer)
    actual = sheffer.s_series.multiplicative_inverse()
    order = min(rebuilt.order, actual.order)
    if rebuilt.coeffs[: order + 1] != actual.coeffs[: order + 1]:
        return CheckReport(
            False,
            "series reconstruction mismatch",
            {
                "rebuilt": [str(c) for c in rebuilt.coeffs[: order + 1]],
                "actual": [str(c) for c in actual.coeffs[: order + 1]],
            },
        )
    return CheckReport(True, "constant-term reconstruction matches S^{-1}")


def verify_binomial_type(
    table: SequenceTable, seq: AdmissibleSequence, y_values=None
) -> CheckReport:
    """Graded addition rule for a basic-type table."""
    ys = default_shift_samples(table.bound + 2) if y_values is None else y_values
    for n in range(table.bound + 1):
        p_n = table[n]
        for y in ys:
            lhs = generalized_shift(seq, p_n, y)
            rhs = Polynomial()
            for k in range(n + 1):
                rhs = rhs + table[k].scale(seq.binomial(n, k) * table[n - k](y))
            if lhs != rhs:
                return CheckReport(
                    False,
                    "addition rule fails",
                    {"n": n, "y": str(y), "lhs": lhs.to_text(), "rhs": rhs.to_text()},
                )
    return CheckReport(True, "addition rule holds at all sampled shifts")


def verify_sheffer_binomial(sheffer: ShefferSequence, y_values=None) -> CheckReport:
    """Mixed addition rule: shifted Sheffer entries expand over the basic table."""
    table, basic, seq = sheffer.table, sheffer.basic.table, sheffer.seq
    ys = default_shift_samples(table.bound + 2) if y_values is None else y_values
    for n in range(table.bound + 1):
        for y in ys:
            lhs = generalized_shift(seq, table[n], y)
            rhs = Polynomial()
            for k in range(n + 1):
                rhs = rhs + table[k].scale(seq.binomial(n, k) * basic[n - k](y))
            if lhs != rhs:
                return CheckReport(
                    False,
                    "mixed addition rule fails",
                    {"n": n, "y": str(y), "lhs": lhs.to_text(), "rhs": rhs.to_text()},
                )
    return CheckReport(True, "mixed addition rule holds at all sampled shifts")


def generating_function_check(sheffer: ShefferSequence, z_order: int) -> CheckReport:
    """Compare s_j(x)/j_psi! with the product of the reciprocal prefactor and
    the graded exponential, both composed with the inverse of q(t)."""
    if sheffer.q_series is None:
        raise BadParameterError("generating function needs the series form of Q")
    seq = sheffer.seq
    if z_order > sheffer.bound:
        raise BadParameterError("z order beyond the table bound")
    g = sheffer.q_series.compositional_inverse()  # q^{-1}(z)
    order = g.order
    # prefactor series A(z) = 1 / s(q^{-1}(z))
    s_at_g = series_compose(sheffer.s_series.coeffs, g.coeffs, order)
    prefactor = series_inverse(s_at_g, order)
    # graded exponential factor: B_j(x) = sum_m x^m [g^m]_j / m_psi!
    g_powers = [series_pad([1], order)]
    for _ in range(z_order):
        g_powers.append(series_mul(g_powers[-1], g.coeffs, order))
    for j in range(z_order + 1):
        rhs = Polynomial()
        for i in range(j + 1):
            # prefactor_i times the degree part of order j - i
            part = Polynomial(
                [g_powers[m][j - i] / seq.factorial(m) for m in range(j - i + 1)]
            )
            rhs = rhs + part.scale(prefactor[i])
        lhs = sheffer.table[j].scale(1 / seq.factorial(j))
        if lhs != rhs:
            return CheckReport(
                False,
                "generating function mismatch",
                {"order": j, "lhs": lhs.to_text(), "rhs": rhs.to_text()},
            )
    return CheckReport(True, f"generating function matches to order {z_order}")


@dataclass(frozen=True)
class EigenSeriesResult:
    """Normalized eigen-ladder of a lowering operator.

    `table[n]` multiplies the n-th power of the eigenvalue; when every entry
    is a monomial the operator is the lowering operator of the family read
    off the diagonal and `exp_coefficients` holds the monomial coefficients.
    """

    table: tuple
    exp_coefficients: tuple | None


def eigenfunction_series(q_op: OperatorMatrix, truncation: int) -> EigenSeriesResult:
    phis = eigen_series(q_op, truncation)
    if all(p.degree == n and all(c == 0 for c in p.coeffs[:-1]) for n, p in enumerate(phis)):
        return EigenSeriesResult(tuple(phis), tuple(p.coefficient(p.degree) for p in phis))
    return EigenSeriesResult(tuple(phis), None)


def verify_expansion_constants(
    sheffer: ShefferSequence, a_coeffs, sample_orders=None
) -> dict:
    """Expand A = sum a_j Q^j against the Sheffer table under both binomial
    conventions; returns which convention admits constants."""
    seq = sheffer.seq
    bound = sheffer.bound
    q_op = sheffer.q_op
    a_coeffs = series_pad(list(a_coeffs), bound)
    # A = sum a_j Q^j as a matrix, then its action in Sheffer coordinates
    from .operators import identity_operator, zero_operator

    a_of_q = zero_operator(bound)
    power = identity_operator(bound)
    for k, c in enumerate(a_coeffs):
        if c != 0:
            a_of_q = a_of_q.add(power.scale(c))
        if k < bound:
            power = q_op.compose(power)
    rows = []
    for n in range(bound + 1):
        image = a_of_q.apply(sheffer.table[n])
        rows.append(coordinates_in_table(sheffer.table, image))

    def convention_holds(binom):
        constants = [rows[j][0] for j in range(bound + 1)]
        for n in range(bound + 1):
            for j in range(n + 1):
                expected = binom(n, j) * constants[j]
                if rows[n][n - j] != expected:
                    return False, constants, (n, j)
        return True, constants, None

    import math

    psi_ok, psi_constants, psi_witness = convention_holds(seq.binomial)
    plain_ok, plain_constants, plain_witness = convention_holds(
        lambda n, j: Fraction(math.comb(n, j))
    )
    return {
        "psi_binomial_holds": psi_ok,
        "psi_constants": psi_constants if psi_ok else None,
        "psi_witness": psi_witness,
        "plain_binomial_holds": plain_ok,
        "plain_constants": plain_constants if plain_ok else None,
        "plain_witness": plain_witness,
    }


def sheffer_product_shift(sheffer: ShefferSequence, extra_s: DeltaSeries) -> ShefferSequence:
    """Move along the Sheffer orbit: divide the table by an invertible series."""
    extra_inv = extra_s.multiplicative_inverse()
    op = realize_delta_series(
        DeltaSeries.from_list(sheffer.seq, extra_inv.coeffs, extra_inv.order),
        sheffer.bound,
    )
    entries = tuple(op.apply(p) for p in sheffer.table)
    return ShefferSequence(
        sheffer.seq,
        sheffer.basic,
        sheffer.q_series,
        sheffer.s_series.multiply(extra_s),
        SequenceTable(entries),
    )
