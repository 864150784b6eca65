"""Real canonical bases and the conversion to and from i-FOCS form."""

import numpy as np
import pytest

from indefcanon import (
    BlockSpec,
    JordanSpec,
    NotConjugateSymmetricError,
    conjugate_symmetry_gamma,
    focs_basis,
    focs_from_rc,
    generate_instance,
    mixing_matrix,
    mixing_matrix_inv,
    rc_basis,
    real_jordan_form,
    sip_form,
    spectral_norm,
)
from indefcanon.linalg import affiliation_residuals

from conftest import random_spec


def test_rc_paper_example(ex_a, ex_h, ex_spec, ex_jr, ex_p, ex_r):
    basis, _ = rc_basis(ex_a, ex_h, ex_spec)
    assert not np.iscomplexobj(basis.matrix)
    assert basis.cert.similarity <= 1e-10
    assert basis.cert.congruence <= 1e-10
    assert basis.cert.max_imag <= 1e-9 * spectral_norm(basis.matrix)
    # the printed reference basis is one valid gauge representative: the
    # connecting matrix must commute with the real Jordan form and preserve
    # the sip Gram
    c = np.linalg.solve(basis.matrix, ex_r)
    assert spectral_norm(np.imag(c)) <= 1e-12
    c = np.real(c)
    assert spectral_norm(c @ ex_jr - ex_jr @ c) <= 1e-10
    assert spectral_norm(c.T @ ex_p @ c - ex_p) <= 1e-10


def test_rc_canonical_pair(ex_spec):
    jr = real_jordan_form(ex_spec)
    p = sip_form(ex_spec)
    basis, _ = rc_basis(jr, p, ex_spec)
    assert basis.cert.similarity <= 1e-12 and basis.cert.congruence <= 1e-12
    assert not np.iscomplexobj(basis.matrix)


def test_rc_single_pair_hand_expansion():
    # p = 1: the real columns are (t + conj t)/sqrt(2) and i(conj t - t)/sqrt(2)
    spec = JordanSpec((BlockSpec("pair", 1j, 1),))
    inst = generate_instance(spec, 3)
    focs, _ = focs_basis(inst.a0, inst.h0, spec, 1.0j)
    rc, _ = rc_basis(inst.a0, inst.h0, spec)
    t1 = focs.matrix[:, 0]
    hand = np.stack([(t1 + np.conj(t1)) / np.sqrt(2),
                     1j * (np.conj(t1) - t1) / np.sqrt(2)], axis=1)
    assert spectral_norm(np.imag(hand)) <= 1e-12
    np.testing.assert_allclose(rc.matrix, np.real(hand), atol=1e-12)


def test_rc_round_trip(ex_a, ex_h, ex_spec):
    basis, _ = rc_basis(ex_a, ex_h, ex_spec)
    focs = focs_from_rc(basis.matrix, ex_spec, a=ex_a, h=ex_h)
    assert focs.gamma == pytest.approx(1.0j, abs=1e-10)
    assert focs.cert.similarity <= 1e-10 and focs.cert.congruence <= 1e-10
    back = focs.matrix @ mixing_matrix(ex_spec)
    assert spectral_norm(back - basis.matrix) <= 1e-12 * max(1.0, spectral_norm(basis.matrix))


def test_focs_from_rc_paper_r(ex_r, ex_spec, ex_a, ex_h):
    focs = focs_from_rc(ex_r, ex_spec, a=ex_a, h=ex_h)
    assert focs.gamma == pytest.approx(1.0j, abs=1e-12)
    assert focs.cert.similarity <= 1e-10 and focs.cert.congruence <= 1e-10


def test_focs_from_rc_identity_on_canonical(ex_spec):
    # R = I for the real canonical pair recovers the inverse mixing matrix,
    # which is i-conjugate-symmetric by its printed structure
    t = focs_from_rc(np.eye(4), ex_spec)
    np.testing.assert_allclose(t.matrix, mixing_matrix_inv(ex_spec), atol=1e-15)
    assert conjugate_symmetry_gamma(t.matrix, ex_spec) == pytest.approx(1.0j)


def test_focs_from_rc_rejects_non_rc(ex_spec):
    # any real matrix times the inverse mixing transform is automatically
    # i-conjugate-symmetric, so the failure mode is a basis that is not real
    rng = np.random.default_rng(2)
    bad = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    with pytest.raises(NotConjugateSymmetricError):
        focs_from_rc(bad, ex_spec)
    real_r = rng.normal(size=(4, 4))
    assert focs_from_rc(real_r, ex_spec).gamma == pytest.approx(1.0j)


def test_rc_realness_randomized():
    rng = np.random.default_rng(23)
    for k in range(10):
        spec = random_spec(rng, max_total=8)
        inst = generate_instance(spec, 1000 + k, kind="rc")
        r = inst.t0
        assert not np.iscomplexobj(r.matrix)
        assert r.cert.max_imag <= 1e-9 * max(1.0, spectral_norm(r.matrix))
        sim, cong = affiliation_residuals(inst.a0, inst.h0, r.matrix,
                                          real_jordan_form(spec), sip_form(spec))
        assert sim <= 1e-10 and cong <= 1e-10


def test_rc_gauge_closure(ex_a, ex_h, ex_spec):
    # a conjugate-symmetry-preserving phase gauge on the i-FOCS basis still
    # realifies; the block sign gauge additionally preserves the affiliation
    focs, _ = focs_basis(ex_a, ex_h, ex_spec, 1.0j)
    rng = np.random.default_rng(8)
    for _ in range(6):
        th = rng.uniform(-np.pi, np.pi)
        d = np.diag([np.exp(1j * th)] * 2 + [np.exp(-1j * th)] * 2)
        r = (focs.matrix @ d) @ mixing_matrix(ex_spec)
        assert np.max(np.abs(r.imag)) <= 1e-12 * max(1.0, spectral_norm(r.real))
    for sign in (1.0, -1.0):
        r = (sign * focs.matrix) @ mixing_matrix(ex_spec)
        assert np.max(np.abs(r.imag)) <= 1e-12 * max(1.0, spectral_norm(r.real))
        sim, cong = affiliation_residuals(ex_a, ex_h, np.real(r),
                                          real_jordan_form(ex_spec), sip_form(ex_spec))
        assert sim <= 1e-10 and cong <= 1e-10
