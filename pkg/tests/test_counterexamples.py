import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framesign import counterexamples as ce
from framesign.errors import Exhausted, GridCollision, GridMismatch, NotContraction, ValidationError
from framesign.frames import gram_matrix
from framesign.grid import make_grid
from framesign.signmass import equidistribution_ratio, partial_mass


def _dilation(depth, **kw):
    v = ce.dyadic_system(depth, make_grid(0, 1, 2 ** (depth + 1)))
    return v, ce.dilation_basis(v, make_grid(0, 2, 2 ** (depth + 2)), **kw)


def test_dyadic_system_small():
    g = make_grid(0, 1, 16)
    assert len(ce.dyadic_system(0, g)) == 1
    sys_ = ce.dyadic_system(1, g)
    i = int(np.argmin(np.abs(g.points - 0.3)))
    np.testing.assert_array_equal(sys_.values[:, i], [1, 1, 0])


def test_dyadic_sum_of_squares():
    L = 5
    sys_ = ce.dyadic_system(L, make_grid(0, 1, 128))
    np.testing.assert_array_equal((sys_.values**2).sum(axis=0), L + 1)


def test_dyadic_errors():
    with pytest.raises(GridMismatch):
        ce.dyadic_system(2, make_grid(0, 2, 16))
    with pytest.raises(GridCollision):
        ce.dyadic_system(3, make_grid(0, 1, 4))


def test_dyadic_interval_nesting():
    I = ce.DyadicInterval(1, 1)
    assert I.left == 0.5 and I.right == 1.0
    assert I.contains(ce.DyadicInterval(3, 7)) and not I.contains(ce.DyadicInterval(3, 3))
    with pytest.raises(ValidationError):
        ce.DyadicInterval(1, 2)


def _brute_force_carleson(weight, depth):
    ivs = ce.dyadic_intervals(depth)
    return max(sum(weight(I) for I in ivs if J.contains(I)) / J.length for J in ivs)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0, 3.0])
def test_carleson_matches_brute_force(alpha):
    w = ce.power_weight(alpha)
    rep = ce.carleson_constant(w, 6)
    assert rep.constant == pytest.approx(_brute_force_carleson(w, 6), rel=1e-12)


def test_carleson_square_weights():
    rep = ce.carleson_constant(ce.power_weight(2.0), 12)
    assert abs(rep.constant - (2 - 2.0**-12)) <= 1e-12
    assert rep.maximizer == ce.DyadicInterval(0, 0)
    assert rep.to_dict()["maximizer"] == {"level": 0, "index": 0}


def test_carleson_limits():
    assert ce.carleson_constant(ce.power_weight(2.0), 16).constant == pytest.approx(2.0, abs=2e-5)
    assert ce.carleson_constant(ce.power_weight(3.0), 16).constant == pytest.approx(4 / 3, abs=2e-5)
    assert ce.carleson_constant(lambda I: 0.0, 5).constant == 0
    assert ce.carleson_constant(ce.power_weight(1.0), 7).constant == 8


def test_carleson_mapping_weights():
    w = {I: (1.0 if I == ce.DyadicInterval(2, 3) else 0.0) for I in ce.dyadic_intervals(2)}
    rep = ce.carleson_constant(w, 2)
    assert rep.constant == 4.0 and rep.maximizer == ce.DyadicInterval(2, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=15, max_size=15))
def test_carleson_random_weights(ws):
    ivs = ce.dyadic_intervals(3)
    w = dict(zip(ivs, ws))
    assert ce.carleson_constant(w, 3).constant == pytest.approx(_brute_force_carleson(w.__getitem__, 3), rel=1e-12)


def test_bessel_trace_closed_form():
    trace = ce.dyadic_bessel_trace(8)
    for L, lam in trace:
        assert lam == pytest.approx(2 - 2.0**-L, rel=1e-12)
        assert lam <= 4 * ce.carleson_constant(ce.power_weight(2.0), L).constant + 1


def test_dilation_properties():
    v, db = _dilation(4)
    assert db.isometry_defect <= 1e-9 and db.gram_defect <= 1e-8
    np.testing.assert_array_equal(db.system.values[db.even][:, db.E], db.scale * v.values)
    assert len(db.system) == db.system.grid.m
    lam = np.linalg.eigvalsh(gram_matrix(v))[-1]
    assert db.scale == pytest.approx(0.6 / math.sqrt(lam))


def test_dilation_second_half_in_range_of_V():
    # the (1, 2) part of the even members is V D, i.e. it lies in the span of
    # the first K Haar functions on (1, 2)
    from framesign.bases import haar_system

    v, db = _dilation(3)
    g2 = db.system.grid
    H = haar_system(g2, len(v), 1.0, 2.0).values
    right = db.system.values[db.even] * (~db.E)
    np.testing.assert_allclose(right, db.defect @ H, atol=1e-13)


def test_dilation_odd_members_oriented():
    _, db = _dilation(3)
    w = db.system.grid.weights
    assert np.all(db.system.values[db.odd][:, db.E] @ w[db.E] >= 0)


def test_dilation_rejects_non_contraction():
    v = ce.dyadic_system(2, make_grid(0, 1, 8))
    with pytest.raises(NotContraction):
        ce.dilation_basis(v, make_grid(0, 2, 16), scale=1.0)


def test_reorder_trivial_target():
    _, db = _dilation(3)
    r = ce.reorder_nonequidistributed(db, [1.0])
    assert r.ratios == (0.0,) and r.block_ends == (1,)
    assert sorted(r.system.labels) == sorted(db.system.labels)


def test_reorder_targets_met_when_attainable():
    _, db = _dilation(8, scale=None)
    r = ce.reorder_nonequidistributed(db, [0.5, 0.25])
    prof = partial_mass(r.system, 2.0, list(r.block_positions))
    ratio = equidistribution_ratio(prof)[:, db.E]
    for j, t in enumerate(r.targets):
        assert np.nanmax(ratio[j]) <= t
        assert r.ratios[j] == pytest.approx(np.nanmax(ratio[j]))
    assert sorted(r.system.labels) == sorted(db.system.labels)


def test_reorder_with_less_headroom_reaches_eighth():
    v = ce.dyadic_system(8, make_grid(0, 1, 2**9))
    lam = np.linalg.eigvalsh(gram_matrix(v))[-1]
    db = ce.dilation_basis(v, make_grid(0, 2, 2**10), scale=0.99 / math.sqrt(lam), n_random=5)
    r = ce.reorder_nonequidistributed(db, [0.5, 0.25, 0.125])
    assert r.ratios[-1] <= 0.125 and r.block_ends[-1] > 100


def test_reorder_exhaustion_reports_partial():
    _, db = _dilation(4)
    with pytest.raises(Exhausted) as info:
        ce.reorder_nonequidistributed(db, [0.5, 0.25, 0.125])
    assert info.value.partial["block_ends"] == (1, 2)


def test_reorder_validates_targets():
    _, db = _dilation(2)
    for bad in ([0.5, 0.5], [0.25, 0.5], [-1.0]):
        with pytest.raises(ValidationError):
            ce.reorder_nonequidistributed(db, bad)


def test_cosine_system():
    g = make_grid(0, 1, 8192)
    primal, dual, rep = ce.cosine_system(6, g)
    assert rep.min_primal >= 0
    assert rep.biorthogonality_defect <= 1e-12
    np.testing.assert_allclose(rep.raw_norms**2, 1.5, atol=1e-8)
    P = 1 + np.cos(np.pi * np.outer(np.arange(1, 7), g.points))
    C = np.cos(np.pi * np.outer(np.arange(1, 7), g.points))
    cross = (P * g.weights) @ C.T
    off = cross - np.diag(np.diag(cross))
    assert np.abs(off).max() <= 1e-8
    assert not rep.nominal_consistent
    np.testing.assert_allclose(rep.nominal_pairing, math.sqrt(2) / 2, atol=1e-8)
    np.testing.assert_allclose(np.linalg.norm(primal.values * np.sqrt(g.weights), axis=1), 1, atol=1e-12)
    assert dual.labels[0] == "u'1"


def test_carleson_depth_cap():
    from framesign.errors import InvalidSize

    with pytest.raises(InvalidSize):
        ce.carleson_constant(ce.power_weight(2.0), ce.MAX_CARLESON_DEPTH + 1)
