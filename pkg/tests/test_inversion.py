import pytest

from conftest import random_contractive
from twistconv.convinv import InversionConfig, invert_convolution
from twistconv.errors import MaxIterExceeded, NotContractive, NotInvertible
from twistconv.inversion import invert_twisted, neumann_inverse, verify_inverse
from twistconv.sequences import Sequence, TwistParams, l1_norm, make_delta

TP21 = TwistParams(2, 1)
DELTA = make_delta()
A_RUN = Sequence(1, {(0, 0): 1, (1, 1): 0.5})


def test_delta_and_scalar():
    for tp in (TP21, TwistParams(3, 2), TwistParams(5, 1)):
        rep = invert_twisted(DELTA, tp)
        assert rep.inverse == DELTA
        assert rep.residual_right == 0 and rep.residual_left == 0
    rep = invert_twisted(Sequence(1, {(0, 0): 4}), TwistParams(3, 1))
    assert l1_norm(rep.inverse - Sequence(1, {(0, 0): 0.25})) < 1e-14


def test_monomial_inverse():
    # delta_{1,1} # c delta_{-1,-1} = c omega^{-1} delta
    a = Sequence(1, {(1, 1): 1})
    b = invert_twisted(a, TwistParams(3, 1)).inverse
    assert verify_inverse(a, b, TwistParams(3, 1))[0] < 1e-12
    assert list(b.to_dict()) == [(-1, -1)]


def test_running_example():
    rep = invert_twisted(A_RUN, TP21)
    assert max(rep.residual_right, rep.residual_left) <= 1e-8
    assert rep.det_symbol_min == pytest.approx(0.75)
    b = rep.inverse
    # b supported on the diagonal, b_{n,n} = c_n with c_{n+1} = -(-1)^n c_n / 2
    assert all(k == l for k, l in b.to_dict())
    c = 1.0
    for n in range(13):
        assert abs(b[n, n] - c) <= 1e-10
        c = -((-1) ** n) * c / 2
    assert l1_norm(b - neumann_inverse(A_RUN, TP21)) <= 2e-8


def test_negative_control():
    with pytest.raises(NotInvertible):
        invert_twisted(Sequence(1, {(0, 0): 1, (1, 1): 1}), TP21)


def test_p1_matches_convolution_inverse():
    c = Sequence(1, {(0, 0): 1, (2, 2): 0.25})
    b = invert_twisted(c, TwistParams(1, 0)).inverse
    assert l1_norm(b - invert_convolution(c)) <= 1e-10


def test_verify_inverse():
    assert verify_inverse(A_RUN, DELTA, TP21) == (0.5, 0.5)


def test_neumann():
    with pytest.raises(NotContractive):
        neumann_inverse(Sequence(1, {(0, 0): 1, (1, 1): 1.2}), TP21)
    with pytest.raises(MaxIterExceeded):
        neumann_inverse(Sequence(1, {(0, 0): 1, (1, 1): 0.9}), TP21, max_iter=5)
    assert neumann_inverse(DELTA, TP21) == DELTA


@pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_against_neumann(rng, p, q):
    tp = TwistParams(p, q)
    for _ in range(3):
        a = random_contractive(rng)
        rep = invert_twisted(a, tp)
        assert max(rep.residual_right, rep.residual_left) <= 1e-8
        assert l1_norm(rep.inverse - neumann_inverse(a, tp)) <= 1e-7


def test_d2():
    tp = TwistParams(2, 1, 2)
    a = Sequence(2, {((0, 0), (0, 0)): 1, ((1, 0), (0, 1)): 0.1, ((0, 1), (1, 1)): -0.05})
    rep = invert_twisted(a, tp)
    assert max(rep.residual_right, rep.residual_left) <= 1e-8
    assert l1_norm(rep.inverse - neumann_inverse(a, tp)) <= 1e-7


def test_independent_of_grid_size():
    a = Sequence(1, {(0, 0): 1, (1, 1): 0.3, (-1, 2): 0.2j})
    tp = TwistParams(3, 1)
    b64 = invert_twisted(a, tp, InversionConfig(grid_size=64)).inverse
    b256 = invert_twisted(a, tp, InversionConfig(grid_size=256)).inverse
    assert l1_norm(b64 - b256) <= 1e-9


def test_inverse_of_inverse():
    tp = TwistParams(2, 1)
    b = invert_twisted(A_RUN, tp).inverse
    back = invert_twisted(b, tp).inverse
    assert l1_norm(back - A_RUN) <= 1e-8


def test_argument_checks():
    with pytest.raises(ValueError):
        invert_twisted(DELTA, TwistParams(2, 1, 2))
    with pytest.raises(ValueError):
        invert_twisted(DELTA, TwistParams(7, 1))
