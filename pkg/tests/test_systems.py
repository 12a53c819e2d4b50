"""Total derivatives and on-solution normal-form reduction."""

import random

import pytest

from lieforge.expr_core import DomainError, eval_numeric, jet, sym
from lieforge.parser import parse_expr
from lieforge.systems import JetSpec, ODESystem, PDESystem, total_derivative

PDE = JetSpec(("t", "x"), ("v", "w"), constants=None)


def P(text):
    return parse_expr(text, PDE)


class TestTotalDerivative:
    def test_raises_order(self):
        assert total_derivative(P("v"), "x") == P("v_x")
        assert total_derivative(P("v_x^2"), "x") == P("2*v_x*v_xx")

    def test_chain_through_transcendentals(self):
        got = total_derivative(P("exp(-w)*cos(v)"), "x")
        want = P("-exp(-w)*(w_x*cos(v) + v_x*sin(v))")
        assert got == want
        # numeric spot check along w(x) = x^2, v(x) = sin x
        rng = random.Random(5)
        for _ in range(10):
            xv = rng.uniform(-1, 1)
            point = {jet("v"): __import__("math").sin(xv), jet("w"): xv * xv,
                     jet("v", ("x",)): __import__("math").cos(xv),
                     jet("w", ("x",)): 2 * xv, sym("x"): xv}
            h = 1e-6
            f = lambda z: __import__("math").exp(-z * z) * \
                __import__("math").cos(__import__("math").sin(z))
            fd = (f(xv + h) - f(xv - h)) / (2 * h)
            assert abs(eval_numeric(got, point) - fd) < 1e-8

    def test_mixed_index_sorted(self):
        e = total_derivative(total_derivative(P("v"), "x"), "t")
        assert e == jet("v", ("t", "x")).as_expr()
        assert e == total_derivative(total_derivative(P("v"), "t"), "x")


class TestPDESystem:
    def test_evolution_guard(self):
        with pytest.raises(DomainError):
            PDESystem(jet=PDE, rhs={"v": P("v_t"), "w": P("0")})

    def test_missing_equation(self):
        with pytest.raises(DomainError):
            PDESystem(jet=PDE, rhs={"v": P("v_x")})

    def test_reducer_eliminates_t(self):
        S = PDESystem(jet=PDE, rhs={"v": P("v_xx"), "w": P("w_xx")})
        r = S.reducer()
        # v_tt -> v_xxxx, v_tx -> v_xxx
        assert r.reduce(jet("v", ("t", "t")).as_expr()) == P("v_xxxx")
        assert r.reduce(jet("v", ("t", "x")).as_expr()) == P("v_xxx")
        assert r.reduce(P("v_t*w_t")) == P("v_xx*w_xx")


class TestODESystem:
    def test_lead_order_guard(self):
        ctx = JetSpec(("s",), ("f",), constants=None)
        with pytest.raises(DomainError):
            ODESystem(jet=ctx, leads={"f": (2, parse_expr("f''", ctx))})

    def test_reduction_chain(self):
        ctx = JetSpec(("s",), ("f",), constants=None)
        S = ODESystem(jet=ctx, leads={"f": (2, parse_expr("-f", ctx))})
        r = S.reducer()
        # f'''' -> f  (harmonic oscillator)
        got = r.reduce(jet("f", ("s",) * 4).as_expr())
        assert got == parse_expr("f", ctx)

    def test_needs_single_independent(self):
        with pytest.raises(DomainError):
            ODESystem(jet=PDE, leads={})
