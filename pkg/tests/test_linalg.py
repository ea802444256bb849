import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mrtlb.errors import SingularMatrix
from mrtlb.lattice import Family, build_lattice
from mrtlb.linalg import (complex_eigenvalues, eigvals_batched, hessenberg, lu_factor, lu_invert, lu_solve,
                          sym_eigenvalues)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def _sorted(z):
    z = np.asarray(z)
    return z[np.lexsort((np.round(z.imag, 8), np.round(z.real, 8)))]


@pytest.mark.parametrize("a, expected", [
    (np.eye(3), np.eye(3)),
    (np.diag([2.0, 4.0]), np.diag([0.5, 0.25])),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [1.0, 0.0]])),
])
def test_lu_invert_small(a, expected):
    assert np.allclose(lu_invert(a), expected, atol=1e-15)


@pytest.mark.parametrize("d, family", [(1, Family.FULL), (2, Family.FULL), (3, Family.FULL), (4, Family.FULL),
                                       (2, Family.AXIS), (3, Family.AXIS)])
def test_lu_invert_moment_matrices(d, family):
    lat = build_lattice(d, family)
    inv = lu_invert(lat.M)
    assert np.abs(lat.M @ inv - np.eye(lat.q)).max() < 1e-12
    assert np.allclose(inv, np.linalg.inv(lat.M), atol=1e-12)


def test_lu_factor_reconstructs():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(7, 7))
    lu, perm = lu_factor(a)
    low = np.tril(lu, -1) + np.eye(7)
    up = np.triu(lu)
    assert np.allclose(low @ up, a[perm], atol=1e-13)
    b = rng.normal(size=7)
    assert np.allclose(a @ lu_solve(lu, perm, b), b, atol=1e-12)


@pytest.mark.parametrize("a", [np.zeros((3, 3)), np.array([[1.0, 2.0], [2.0, 4.0]]),
                               np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 0.0], [2.0, 1.0, 3.0]])])
def test_lu_singular(a):
    with pytest.raises(SingularMatrix):
        lu_invert(a)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        lu_factor(np.ones((2, 3)))
    with pytest.raises(ValueError):
        sym_eigenvalues(np.ones((3, 2)))


@given(arrays(float, (5, 5), elements=finite))
@settings(max_examples=60, deadline=None)
def test_lu_diagonally_dominant(a):
    a = a + np.diag(np.abs(a).sum(axis=1) + 1.0)
    inv = lu_invert(a)
    assert np.abs(a @ inv - np.eye(5)).max() < 1e-11


@pytest.mark.parametrize("a, expected", [
    (np.diag([3.0, -1.0, 2.0]), [-1.0, 2.0, 3.0]),
    (np.array([[2.0, 1.0], [1.0, 2.0]]), [1.0, 3.0]),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), [-1.0, 1.0]),
])
def test_sym_eigenvalues_examples(a, expected):
    assert np.allclose(sym_eigenvalues(a), expected, atol=1e-13)


def test_sym_eigenvalues_rejects_asymmetric():
    with pytest.raises(ValueError):
        sym_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))


@given(arrays(float, (6, 6), elements=finite))
@settings(max_examples=60, deadline=None)
def test_sym_eigenvalues_vs_numpy(a):
    s = a + a.T
    got = sym_eigenvalues(s)
    ref = np.linalg.eigvalsh(s)
    assert np.allclose(got, ref, atol=1e-9 * max(1.0, np.abs(ref).max()))


def test_hessenberg_is_similarity():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    assert np.isclose(np.trace(h), np.trace(a))
    assert np.allclose(_sorted(np.linalg.eigvals(h)), _sorted(np.linalg.eigvals(a)), atol=1e-10)


@pytest.mark.parametrize("a, expected", [
    (np.diag(np.exp(1j * np.array([0.3, 1.7, -2.5]))), np.exp(1j * np.array([0.3, 1.7, -2.5]))),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), [-1.0, 1.0]),  # companion matrix of z^2 - 1
    (np.array([[0.0, -1.0], [1.0, 0.0]]), [-1j, 1j]),
    (np.array([[1.0, 1.0], [0.0, 1.0]]), [1.0, 1.0]),
])
def test_complex_eigenvalues_examples(a, expected):
    assert np.allclose(_sorted(complex_eigenvalues(a)), _sorted(np.asarray(expected, dtype=complex)), atol=1e-7)


@given(arrays(float, (6, 6), elements=finite), arrays(float, (6, 6), elements=finite))
@settings(max_examples=40, deadline=None)
def test_complex_eigenvalues_backward_error(re, im):
    a = re + 1j * im
    norm = max(np.linalg.norm(a, 2), 1.0)
    for lam in complex_eigenvalues(a):
        smallest = np.linalg.svd(a - lam * np.eye(6), compute_uv=False)[-1]
        assert smallest <= 1e-9 * norm


def _match(a, b):
    # greedy nearest-neighbour pairing; returns the worst distance
    b = list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(k)))
    return worst


def test_batched_matches_reference(d2q9_model):
    from mrtlb.stability import amplification
    ks = [(0.0, 0.0), (0.4, -1.3), (np.pi, np.pi / 2)]
    stack = np.stack([amplification(d2q9_model, k) for k in ks])
    batched = eigvals_batched(stack)
    for g, lam in zip(stack, batched):
        # I + J can have a defective eigenvalue near 0, resolved only to ~sqrt(eps)
        assert _match(lam, complex_eigenvalues(g)) < 1e-6
        assert _match(lam[np.abs(lam) > 1e-3], complex_eigenvalues(g)) < 1e-10
