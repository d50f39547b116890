import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from entropic_bell import prob_core as pc
from entropic_bell.errors import UsageError, ValidationError

HALF_ZERO_QUARTERS = [[0.5, 0.0], [0.25, 0.25]]

# frozen from a plain-loop enumeration of the 8 cells of a uniform-bit chain
# through two binary symmetric channels with flip probability 0.1
BSC01_I_XY = 0.5310044064107187
BSC01_I_XZ = 0.31992295427172035


def test_shannon_examples():
    assert pc.shannon_entropy(pc.ProbDist([0.5, 0.5])) == 1.0
    assert pc.shannon_entropy(pc.ProbDist([1.0, 0.0])) == 0.0
    assert pc.shannon_entropy(pc.ProbDist([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-15)


@pytest.mark.parametrize("bad", [[0.5, 0.6], [1.2, -0.2], [0.5, 0.5 + 2e-9], []])
def test_invalid_distributions_rejected(bad):
    with pytest.raises(ValidationError):
        pc.ProbDist(bad)


def test_renormalize_is_opt_in():
    d = pc.ProbDist([1.0, 3.0], renormalize=True)
    np.testing.assert_allclose(d.probs, [0.25, 0.75])
    with pytest.raises(ValidationError):
        pc.ProbDist([1.0, 3.0])


def test_labels_length_checked():
    assert pc.ProbDist([0.5, 0.5], labels=["h", "t"]).labels == ("h", "t")
    with pytest.raises(ValidationError):
        pc.ProbDist([0.5, 0.5], labels=["h"])


def test_joint_entropy_examples():
    assert pc.joint_entropy2(pc.JointDist2(np.full((2, 2), 0.25))) == 2.0
    assert pc.joint_entropy2(pc.JointDist2(np.eye(2) / 2)) == 1.0
    assert pc.joint_entropy2(pc.JointDist2(HALF_ZERO_QUARTERS)) == pytest.approx(1.5, abs=1e-15)


def test_marginal_examples():
    np.testing.assert_allclose(pc.marginal(pc.JointDist2(np.eye(2) / 2), 0).probs, [0.5, 0.5])
    np.testing.assert_allclose(pc.marginal(pc.JointDist2(np.full((2, 2), 0.25)), 1).probs, [0.5, 0.5])
    j = pc.JointDist2(HALF_ZERO_QUARTERS)
    np.testing.assert_allclose(pc.marginal(j, 0).probs, [0.5, 0.5])
    np.testing.assert_allclose(pc.marginal(j, 1).probs, [0.75, 0.25])


def test_marginal_order_and_errors(rng):
    p = rng.dirichlet(np.ones(24)).reshape(2, 3, 4)
    j = pc.JointDist3(p)
    zy = pc.marginal(j, (2, 1))
    np.testing.assert_allclose(zy.probs, p.sum(axis=0).T)
    assert isinstance(pc.marginal(j, (0, 1, 2)), pc.JointDist3)
    for keep in [(), (3,), (0, 0), (-1,)]:
        with pytest.raises(UsageError):
            pc.marginal(j, keep)


def test_relative_entropy_examples():
    assert pc.relative_entropy(pc.JointDist2(np.outer([0.3, 0.7], [0.6, 0.4]))) == pytest.approx(0.0, abs=1e-15)
    assert pc.relative_entropy(pc.JointDist2(np.eye(2) / 2)) == pytest.approx(1.0, abs=1e-15)
    # direct oracle: sum p log2(p / (px py)) over the three nonzero cells
    oracle = 0.5 * math.log2(4 / 3) + 0.25 * math.log2(2 / 3) + 0.25 * 1.0
    assert pc.relative_entropy(pc.JointDist2(HALF_ZERO_QUARTERS)) == pytest.approx(oracle, abs=1e-14)
    assert oracle == pytest.approx(0.31127812445913294, abs=1e-15)


def test_relative_entropy_infinite_case():
    p = pc.JointDist2([[0.5, 0.5], [0.0, 0.0]])
    q = pc.JointDist2([[1.0, 0.0], [0.0, 0.0]])
    assert pc.relative_entropy(p, reference=q) == pc.INFINITE_DIVERGENCE
    assert math.isinf(pc.INFINITE_DIVERGENCE)
    assert pc.relative_entropy(p, reference=p) == 0.0


def test_mutual_entropy_examples():
    assert pc.mutual_entropy(pc.JointDist2(np.full((2, 2), 0.25))) == 0.0
    assert pc.mutual_entropy(pc.JointDist2(np.eye(2) / 2)) == pytest.approx(1.0, abs=1e-15)
    j = pc.JointDist2(HALF_ZERO_QUARTERS)
    assert pc.mutual_entropy(j) == pc.mutual_entropy(j.transpose())


def test_clip_information():
    assert pc.clip_information(-5e-10) == 0.0
    with pytest.raises(ArithmeticError):
        pc.clip_information(-1e-8)


def test_markov_chain_examples():
    u = pc.ProbDist.uniform(2)
    eye = pc.StochasticMatrix.identity(2)
    j = pc.markov_chain(u, eye, eye)
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 0] = expected[1, 1, 1] = 0.5
    np.testing.assert_array_equal(j.probs, expected)

    erase = pc.StochasticMatrix([[0.3, 0.7], [0.3, 0.7]])
    j = pc.markov_chain(u, pc.StochasticMatrix.binary_symmetric(0.2), erase)
    assert pc.pairwise_mutual(j, 0, 2) == pytest.approx(0.0, abs=1e-15)

    bsc = pc.StochasticMatrix.binary_symmetric(0.1)
    j = pc.markov_chain(u, bsc, bsc)
    assert pc.pairwise_mutual(j, 0, 1) == pytest.approx(BSC01_I_XY, abs=1e-14)
    assert pc.pairwise_mutual(j, 0, 2) == pytest.approx(BSC01_I_XZ, abs=1e-14)
    assert pc.pairwise_mutual(j, 2, 1) >= pc.pairwise_mutual(j, 2, 0)


def test_markov_chain_dimension_mismatch():
    with pytest.raises(UsageError):
        pc.markov_chain(pc.ProbDist.uniform(3), pc.StochasticMatrix.identity(2), pc.StochasticMatrix.identity(2))
    with pytest.raises(UsageError):
        pc.markov_chain(pc.ProbDist.uniform(2), pc.StochasticMatrix.identity(2), pc.StochasticMatrix.identity(3))


def test_stochastic_rows_validated():
    with pytest.raises(ValidationError):
        pc.StochasticMatrix([[0.5, 0.4], [0.5, 0.5]])


def test_markov_conditional_independence(rng):
    for _ in range(20):
        j = pc.random_markov_chain(rng).probs
        py = j.sum(axis=(0, 2))
        for y in range(j.shape[1]):
            slab = j[:, y, :] / py[y]
            np.testing.assert_allclose(slab, np.outer(slab.sum(1), slab.sum(0)), atol=1e-14)


def test_uniform_bit_chain_marginals(rng):
    for _ in range(20):
        j = pc.random_uniform_bit_chain(rng)
        for ax in range(3):
            np.testing.assert_allclose(pc.marginal(j, ax).probs, [0.5, 0.5], atol=1e-15)


def test_json_round_trip(rng):
    d = pc.ProbDist(rng.dirichlet(np.ones(5)), labels=list("abcde"))
    back = pc.loads(pc.dumps(d))
    np.testing.assert_allclose(back.probs, d.probs, atol=1e-12)
    assert back.labels == d.labels
    j = pc.JointDist3(rng.dirichlet(np.ones(12)).reshape(2, 3, 2))
    doc = json.loads(pc.dumps(j))
    assert doc["shape"] == [2, 3, 2]
    np.testing.assert_allclose(pc.loads(pc.dumps(j)).probs, j.probs, atol=1e-12)
    doc["shape"] = [3, 2, 2]
    with pytest.raises(ValidationError):
        pc.dist_from_dict(doc)


# -- properties ---------------------------------------------------------------

def _normalized(raw):
    raw = np.asarray(raw, dtype=float)
    return raw / raw.sum()


weights = st.floats(0.0, 1.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.integers(1, 12), elements=weights).filter(lambda a: a.sum() > 1e-3))
def test_entropy_within_bounds(raw):
    d = pc.ProbDist(_normalized(raw))
    h = pc.shannon_entropy(d)
    assert -1e-12 <= h <= math.log2(len(d)) + 1e-12


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=weights)
       .filter(lambda a: a.sum() > 1e-3))
def test_mutual_entropy_bounds(raw):
    j = pc.JointDist2(_normalized(raw))
    mi = pc.mutual_entropy(j)
    hx = pc.shannon_entropy(pc.marginal(j, 0))
    hy = pc.shannon_entropy(pc.marginal(j, 1))
    assert mi >= 0.0
    assert mi <= min(hx, hy) + 1e-9
    assert pc.joint_entropy2(j) >= max(hx, hy) - 1e-9


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 5), st.integers(1, 5)),
              elements=st.floats(1e-3, 1.0, allow_nan=False)))
def test_relative_equals_mutual_on_positive_joints(raw):
    j = pc.JointDist2(_normalized(raw))
    assert abs(pc.relative_entropy(j) - pc.mutual_entropy(j)) <= 1e-10
    # the explicit-reference route is an independent evaluation of the same value
    ref = pc.JointDist2(np.outer(j.probs.sum(1), j.probs.sum(0)))
    assert abs(pc.relative_entropy(j, reference=ref) - pc.mutual_entropy(j)) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.integers(1, 6), elements=weights).filter(lambda a: a.sum() > 1e-3),
       arrays(float, st.integers(1, 6), elements=weights).filter(lambda a: a.sum() > 1e-3))
def test_product_marginals_recover_factor_entropies(ra, rb):
    a, b = pc.ProbDist(_normalized(ra)), pc.ProbDist(_normalized(rb))
    j = pc.JointDist2(np.outer(a.probs, b.probs))
    assert pc.shannon_entropy(pc.marginal(j, 0)) == pytest.approx(pc.shannon_entropy(a), abs=1e-12)
    assert pc.shannon_entropy(pc.marginal(j, 1)) == pytest.approx(pc.shannon_entropy(b), abs=1e-12)
    assert pc.mutual_entropy(j) == pytest.approx(0.0, abs=1e-9)
