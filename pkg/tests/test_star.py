from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bohmstar.bohm import PolarFields, polar_decompose
from bohmstar.errors import UnsupportedKernel, YRangeInsufficient
from bohmstar.grids import PhaseSpaceGrid, SpatialGrid
from bohmstar.kernels import ANTISTANDARD, BORNJORDAN, BUILTIN, STANDARD, WIGNER, custom_kernel
from bohmstar.oracles import oracle_ordering
from bohmstar.star import (STAR_KINDS, genvalue_residuals, moyal_bracket, poisson_bracket, poly_star,
                           sandwich_standard, star_delta_standard, star_delta_weyl,
                           star_delta_weyl_expansion, symbol_transform, weyl_delta_thetas)
from bohmstar.cohen import mehta
from bohmstar.symbols import I, ONE, P, X, PolynomialSymbol, parse_symbol

from conftest import golden
from test_symbols import polynomials

ORDER_KERNEL = {"standard": STANDARD, "antistandard": ANTISTANDARD, "weyl": WIGNER}


@pytest.mark.parametrize("kind", STAR_KINDS)
def test_canonical_commutator(kind):
    c = poly_star(X, P, kind) - poly_star(P, X, kind)
    sign = -1 if kind == "standard_dual" else 1
    assert c == ONE * I * sign


def test_weyl_product_of_coordinates():
    assert poly_star(X, P, "weyl") == X * P + I / 2
    assert poly_star(X, P, "standard") == X * P
    assert poly_star(P, X, "standard") == X * P - I
    assert poly_star(P, X, "antistandard") == X * P


@settings(max_examples=25)
@given(polynomials(2), polynomials(2), polynomials(2), st.sampled_from(STAR_KINDS))
def test_associativity(a, b, c, kind):
    assert poly_star(poly_star(a, b, kind), c, kind) == poly_star(a, poly_star(b, c, kind), kind)


def test_associativity_degree_four():
    rng = np.random.default_rng(7)
    def rand():
        return PolynomialSymbol({(m, n): int(rng.integers(-3, 4)) for m in range(5) for n in range(5 - m)})
    a, b, c = rand(), rand(), rand()
    for kind in STAR_KINDS:
        assert poly_star(poly_star(a, b, kind), c, kind) == poly_star(a, poly_star(b, c, kind), kind)


@given(polynomials(), polynomials(), st.sampled_from(STAR_KINDS))
def test_zero_hbar_is_pointwise(a, b, kind):
    assert poly_star(a, b, kind, hbar=0) == a * b


@given(polynomials(), polynomials())
def test_moyal_bracket_leading_term_is_poisson(a, b):
    # bracket = c1 hbar + c3 hbar^3 for degree <= 3; isolate c1 exactly
    m1 = moyal_bracket(a, b, 1)
    m2 = moyal_bracket(a, b, 2)
    c1 = (m1 * 8 - m2) * Fraction(1, 6)
    assert c1 == poisson_bracket(a, b) * I


def test_moyal_bracket_quadratic_is_exact():
    H = P * P * Fraction(1, 2) + X * X * Fraction(1, 2)
    for f in (X, P, X * P, X ** 2):
        assert moyal_bracket(f, H, Fraction(1, 3)) == poisson_bracket(f, H) * I * Fraction(1, 3)


def test_float_hbar():
    r = poly_star(X, P, "weyl", hbar=0.5)
    assert r.approx_equal(X * P + ONE * 0.25j)


def test_unknown_kind():
    with pytest.raises(ValueError):
        poly_star(X, P, "bogus")


def test_symbol_transform_matches_ordering_oracle():
    """Operator x^m p^n has standard symbol x^m p^n; the transform must
    reproduce the frozen word-reduction results."""
    rows = golden("ordering.json")["outputs"]["rows"]
    for row in rows:
        if "word" in row:
            continue
        src = PolynomialSymbol.monomial(row["m"], row["n"])
        got = symbol_transform(src, STANDARD, ORDER_KERNEL[row["ordering"]])
        assert got == parse_symbol(row["symbol"]), row


def test_ordering_oracle_words_frozen():
    for row in golden("ordering.json")["outputs"]["rows"]:
        if "word" in row:
            assert oracle_ordering(0, 0, "weyl", word=row["word"]) == parse_symbol(row["symbol"])


def test_known_weyl_symbols():
    # the Weyl symbol of p x is x p - i hbar/2, and (p x x p) gives x^2 p^2 + hbar^2/2
    assert oracle_ordering(0, 0, "weyl", word="px") == X * P - I / 2
    assert oracle_ordering(0, 0, "weyl", word="pxxp") == X * X * P * P + ONE * Fraction(1, 2)


@given(polynomials(), st.sampled_from(list(ORDER_KERNEL)), st.sampled_from(list(ORDER_KERNEL)))
def test_transform_round_trip(a, s, t):
    ks, kt = ORDER_KERNEL[s], ORDER_KERNEL[t]
    assert symbol_transform(symbol_transform(a, ks, kt), kt, ks) == a


@given(polynomials(2), polynomials(2))
def test_transform_intertwines_products(a, b):
    """Mapping standard symbols to Weyl symbols turns one product into the other."""
    lhs = symbol_transform(poly_star(a, b, "standard"), STANDARD, WIGNER)
    rhs = poly_star(symbol_transform(a, STANDARD, WIGNER), symbol_transform(b, STANDARD, WIGNER), "weyl")
    assert lhs == rhs


def test_bornjordan_transform():
    # Born-Jordan symbol of x p (operator) is x p + i hbar/2, same as Weyl at this degree
    assert symbol_transform(X * P, STANDARD, BORNJORDAN) == X * P + I / 2
    # at degree 2 x 2 the two differ: the Weyl symbol has -hbar^2/2, Born-Jordan -hbar^2/3
    bj = symbol_transform(X * X * P * P, STANDARD, BORNJORDAN)
    assert bj.coefficient(0, 0) == Fraction(-1, 3)


def test_transform_rejects_custom():
    k = custom_kernel(lambda xi, eta: np.ones_like(xi * eta))
    with pytest.raises(UnsupportedKernel):
        symbol_transform(X * P, STANDARD, k)


# --- star-delta expansion -----------------------------------------------------

def test_thetas_vanish_for_linear_argument():
    t1, t2 = weyl_delta_thetas(X - 3)
    assert t1.terms == {} and t2.terms == {}


def test_theta_of_cubic_phase():
    exp = star_delta_weyl_expansion(X ** 3)
    assert exp.theta1.terms == {}
    assert exp.theta2 == ONE * -6
    assert not exp.is_ordinary()


def test_quadratic_phase_gives_ordinary_delta():
    exp = star_delta_weyl_expansion(X * X * Fraction(1, 2) + X * 3)
    assert exp.is_ordinary()


def test_expansion_needs_p_free_phase():
    with pytest.raises(ValueError):
        star_delta_weyl_expansion(X * P)


def test_sampled_expansion(grid):
    S = 0.1 * grid.x ** 3
    exp = star_delta_weyl_expansion(S, 1.0, grid)
    np.testing.assert_allclose(exp.theta2, -0.6, atol=1e-8)
    np.testing.assert_allclose(exp.argument, 0.3 * grid.x ** 2, atol=1e-8)


# --- grid star-deltas ----------------------------------------------------------

def test_sandwich_reproduces_mehta(packets, polar):
    for t in (0, 1, 2):
        F = sandwich_standard(polar[t])
        M = mehta(packets[t])
        assert np.max(np.abs(F.values - M.values)) < 1e-12


def test_weyl_delta_is_plane_wave_for_quadratic_phase(polar):
    for t in (0, 1, 2):
        pf = polar[t]
        D = star_delta_weyl(pf)
        g = D.grid
        ref = np.exp(1j * g.y[None, :] * pf.phase_derivative(1)[:, None])
        err = np.abs(D.values - ref)[D.defined]
        assert D.defined.sum() > 1000
        assert err.max() < 1e-10


def test_standard_delta_carries_a_chirp(polar):
    """For quadratic S the standard-order delta is not a plane wave in y."""
    pf = polar[2]
    D = star_delta_standard(pf)
    ref = np.exp(1j * D.grid.y[None, :] * pf.phase_derivative(1)[:, None])
    assert np.max(np.abs(D.values - ref)[D.defined & (pf.R[:, None] > 1e-2 * pf.R.max())]) > 0.1


def test_genvalue_residuals(polar):
    for t in (0, 1, 2):
        pf = polar[t]
        left, right = genvalue_residuals(star_delta_standard(pf), pf)
        assert left < 1e-4 and right < 1e-4


def test_star_delta_range_check():
    g = SpatialGrid(-5, 5, 64)
    x = g.x
    pf = PolarFields(g, np.exp(-x**2), np.zeros(64), np.zeros(64, bool))
    with pytest.raises(YRangeInsufficient):
        star_delta_standard(pf, PhaseSpaceGrid(g, 1.0, n_p=128))
