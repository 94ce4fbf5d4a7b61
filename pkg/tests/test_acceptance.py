"""End-to-end acceptance checks for the package's headline guarantees.

Each test covers one numbered check and prints a single PASS or FAIL line
straight to the terminal, so a plain ``pytest -v`` run shows the scorecard
inline.  Time budgets are asserted with ``time.perf_counter`` inside each
body; the expensive 400-map corpus is built once per module and shared.
"""

import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

import helpers
from extremalmaps import (RANK_EXCEEDS_ONE, ROTATION_NONTRIVIAL,
                          BlaschkeProduct, BlockShape, DiscCompositionOp,
                          Functional, Superoperator, adjoint_images,
                          boundary_extremality_check, build_form1,
                          check_pure_preserving_sampled,
                          classify_extremal_global, classify_pure_preserving,
                          classify_single_block, extremal_distance, frobenius,
                          functional_extremity, haar_isometry, is_pure_state,
                          pure_state_chain, random_form1, random_form2,
                          random_unit, rank_one_factor, schur_counterexample)

SQRT2_GAP = 2.0 - np.sqrt(2.0)


def _emit(capsys, line):
    with capsys.disabled():
        sys.stdout.write("\n" + line + "\n")
        sys.stdout.flush()


@pytest.fixture
def scorecard(capsys):
    """Run one check body, print its PASS/FAIL line, re-raise on failure."""

    def run(label, body):
        try:
            detail = body()
        except BaseException as exc:
            text = str(exc).strip()
            note = text.splitlines()[0] if text else type(exc).__name__
            _emit(capsys, f"{label}: FAIL ({note})")
            raise
        _emit(capsys, f"{label}: PASS ({detail})")

    return run


@dataclass(frozen=True)
class CorpusEntry:
    form: int
    variant: bool  # transposed flag (form 1) or adjoint flavour (form 2)
    psi: Superoperator


@dataclass(frozen=True)
class Corpus:
    entries: tuple
    results: tuple
    build_seconds: float
    classify_seconds: float


@pytest.fixture(scope="module")
def corpus():
    """200 form-1 and 200 form-2 maps (both variants each), classified once.

    Dimensions cycle through h in {2, 3} with k drawn up to 9; the form-2
    half needs k >= h^2, which pins k = 9 whenever h = 3.
    """
    rng = np.random.default_rng(820)
    entries = []
    t0 = time.perf_counter()
    for idx in range(200):
        h = 2 + idx % 2
        variant = bool((idx // 2) % 2)
        k = int(rng.integers(h, 10))
        psi, _ = random_form1(rng, k, h, transposed=variant)
        entries.append(CorpusEntry(1, variant, psi))
    for idx in range(200):
        h = 2 + idx % 2
        variant = bool((idx // 2) % 2)
        k = int(rng.integers(h * h, 10))
        psi, _ = random_form2(rng, k, h, adjoint_variant=variant)
        entries.append(CorpusEntry(2, variant, psi))
    build_seconds = time.perf_counter() - t0
    t0 = time.perf_counter()
    results = tuple(classify_single_block(e.psi) for e in entries)
    classify_seconds = time.perf_counter() - t0
    return Corpus(tuple(entries), results, build_seconds, classify_seconds)


def _distinct_block_distance():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        n_blocks = int(rng.integers(2, 4))
        dims = tuple(int(rng.integers(1, 5)) for _ in range(n_blocks))
        shape = BlockShape(dims)
        b1, b2 = (int(b) for b in rng.choice(n_blocks, size=2, replace=False))
        rho1 = Functional.rank_one(shape, b1, random_unit(rng, dims[b1]),
                                   random_unit(rng, dims[b1]))
        rho2 = Functional.rank_one(shape, b2, random_unit(rng, dims[b2]),
                                   random_unit(rng, dims[b2]))
        worst = max(worst, abs(extremal_distance(rho1, rho2) - 2.0))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-9, f"max |distance - 2| = {worst:.3e}"
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    return f"100 pairs, max |distance - 2| = {worst:.2e}, {elapsed:.3f}s"


def test_distinct_block_distance(scorecard):
    scorecard("[1/9] distinct-block distance is 2", _distinct_block_distance)


def _orthogonal_chain_steps():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst_first = 0.0
    worst_excess = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        omega = random_unit(rng, n)
        while True:
            raw = random_unit(rng, n)
            raw = raw - np.vdot(omega, raw) * omega
            nrm = np.linalg.norm(raw)
            if nrm > 1e-3:
                break
        w1, w2, w3 = pure_state_chain(omega, raw / nrm)
        s1 = float(np.linalg.norm(w2 - w1)) ** 2
        s2 = float(np.linalg.norm(w3 - w2)) ** 2
        worst_first = max(worst_first, abs(s1 - SQRT2_GAP))
        worst_excess = max(worst_excess, max(s1, s2) - SQRT2_GAP)
    elapsed = time.perf_counter() - start
    assert worst_first <= 1e-10, f"first step off by {worst_first:.3e}"
    assert worst_excess <= 1e-12, f"step excess {worst_excess:.3e}"
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    return (f"1000 chains, first step sq within {worst_first:.2e} of 2 - sqrt(2), "
            f"{elapsed:.3f}s")


def test_orthogonal_chain_steps(scorecard):
    scorecard("[2/9] orthogonal chain step lengths", _orthogonal_chain_steps)


def _round_trip(corpus):
    worst = 0.0
    for entry, res in zip(corpus.entries, corpus.results):
        assert res.accepted, f"rejected: {res.rejection}"
        cert = res.certificate
        assert cert.form == entry.form
        if entry.form == 1:
            assert cert.transposed == entry.variant
        else:
            assert cert.adjoint_variant == entry.variant
        worst = max(worst, res.residual)
    elapsed = corpus.build_seconds + corpus.classify_seconds
    assert worst <= 1e-8, f"max residual {worst:.3e}"
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    return f"400 maps, max residual {worst:.2e}, build+classify {elapsed:.2f}s"


def test_canonical_form_round_trip(scorecard, corpus):
    scorecard("[3/9] canonical form round trips", lambda: _round_trip(corpus))


def _pullback_soundness(corpus):
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    worst_top = 0.0
    worst_second = 0.0
    for entry in corpus.entries:
        t = entry.psi.tensors[0][0]
        h = t.shape[0]
        u = rng.standard_normal((1000, h)) + 1j * rng.standard_normal((1000, h))
        v = rng.standard_normal((1000, h)) + 1j * rng.standard_normal((1000, h))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        pulled = np.einsum("nx,ny,yxpq->nqp", u, v.conj(), t, optimize=True)
        s = np.linalg.svd(pulled, compute_uv=False)
        worst_top = max(worst_top, float(np.abs(s[:, 0] - 1.0).max()))
        worst_second = max(worst_second, float(s[:, 1].max()))
    assert worst_top <= 1e-7, f"top singular value off by {worst_top:.3e}"
    assert worst_second <= 1e-7, f"second singular value {worst_second:.3e}"

    # tie the batched oracle to the public API on a few draws
    for idx in rng.choice(len(corpus.entries), size=5, replace=False):
        psi = corpus.entries[int(idx)].psi
        h = psi.out_shape.dims[0]
        rho = Functional.rank_one(psi.out_shape, 0, random_unit(rng, h),
                                  random_unit(rng, h))
        assert functional_extremity(psi.pullback(rho), 1e-7).is_extreme

    rejected = 0
    for entry in corpus.entries[::8]:
        t = entry.psi.tensors[0][0]
        noisy = t + 1e-2 * (rng.standard_normal(t.shape)
                            + 1j * rng.standard_normal(t.shape))
        noisy_map = Superoperator.single_block(noisy)
        res = classify_single_block(noisy_map)
        assert not res.accepted, "noisy map slipped through"
        w = res.rejection.witness
        rho = Functional.rank_one(noisy_map.out_shape, w.out_block, w.u, w.v)
        verdict = functional_extremity(noisy_map.pullback(rho))
        assert not verdict.is_extreme, "witness did not replay"
        assert verdict.reason == w.reason
        rejected += 1
    elapsed = time.perf_counter() - start
    assert rejected == 50
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    return (f"400 maps x 1000 pullbacks extremal at 1e-7, "
            f"50 noisy maps rejected with replaying witnesses, {elapsed:.1f}s")


def test_pullback_soundness_and_noise_rejection(scorecard, corpus):
    scorecard("[4/9] pullback extremity and noise rejection",
              lambda: _pullback_soundness(corpus))


def _schur_rejection():
    start = time.perf_counter()
    for h in (2, 3):
        psi = schur_counterexample(h)
        ai = adjoint_images(psi, 0)
        for row in ai.images:
            for m in row:
                assert rank_one_factor(m).accepted, "unit image not rank one"
        res = classify_single_block(psi)
        assert not res.accepted, f"Schur map accepted at h={h}"
        assert res.rejection.witness.reason == RANK_EXCEEDS_ONE
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    return (f"h = 2, 3 rejected via combined-vector witnesses, every unit "
            f"image rank one, {elapsed:.3f}s")


def test_schur_map_rejection(scorecard):
    scorecard("[5/9] Schur multiplier rejection", _schur_rejection)


def _mixed_assembly():
    rng = np.random.default_rng(606)
    start = time.perf_counter()
    worst_w = 0.0
    for _ in range(100):
        n_out = int(rng.integers(2, 4))
        # force at least one block of each structural family into every map
        forms = ["1t" if rng.integers(2) else "1",
                 "2a" if rng.integers(2) else "2"]
        while len(forms) < n_out:
            forms.append(helpers.FORMS[int(rng.integers(4))])
        rng.shuffle(forms)
        perm = rng.permutation(n_out)
        parts = []
        in_dims = [0] * n_out
        for c, form in enumerate(forms):
            h = int(rng.integers(2, 4))
            k_min = h * h if form in ("2", "2a") else h
            k = int(rng.integers(k_min, 10))
            part, _ = helpers.random_block(rng, form, k, h)
            b = int(perm[c])
            parts.append((b, part))
            in_dims[b] = k
        psi = helpers.assemble(in_dims, parts)
        res = classify_extremal_global(psi)
        assert res.accepted, f"rejected: {res.rejection}"
        cert = res.certificate
        want_nondeg = tuple(c for c, f in enumerate(forms) if f in ("1", "1t"))
        want_deg = tuple(c for c, f in enumerate(forms) if f in ("2", "2a"))
        assert cert.e_partition == want_nondeg
        assert cert.degenerate_blocks == want_deg
        assert cert.assignment == tuple(b for b, _ in parts)
        for c in cert.e_partition:
            w = cert.blocks[c].partial_isometry
            worst_w = max(worst_w, frobenius(w @ w.conj().T @ w - w))
    elapsed = time.perf_counter() - start
    assert worst_w <= 1e-10, f"partial isometry deviation {worst_w:.3e}"
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    return (f"100 mixed maps, partitions exact, max partial-isometry "
            f"deviation {worst_w:.2e}, {elapsed:.2f}s")


def test_mixed_block_assembly(scorecard):
    scorecard("[6/9] mixed-form block assembly", _mixed_assembly)


def _compressions_and_rotations():
    rng = np.random.default_rng(707)
    start = time.perf_counter()
    for _ in range(100):
        n_out = int(rng.integers(2, 4))
        flags = [False, True]  # at least one plain and one transposed block
        while len(flags) < n_out:
            flags.append(bool(rng.integers(2)))
        rng.shuffle(flags)
        perm = rng.permutation(n_out)
        parts = []
        in_dims = [0] * n_out
        for c in range(n_out):
            h = int(rng.integers(2, 4))
            k = int(rng.integers(h, 10))
            u = haar_isometry(rng, k, h)
            b = int(perm[c])
            parts.append((b, build_form1(u, u, transposed=flags[c])))
            in_dims[b] = k
        psi = helpers.assemble(in_dims, parts)
        assert classify_pure_preserving(psi).accepted
        assert classify_extremal_global(psi).accepted

    for _ in range(100):
        h = int(rng.integers(2, 4))
        k = int(rng.integers(h, 10))
        u = haar_isometry(rng, k, h)
        v = haar_isometry(rng, k, h)
        psi = build_form1(u, v)
        res = classify_pure_preserving(psi)
        assert not res.accepted, "rotated map slipped through"
        assert res.reason == ROTATION_NONTRIVIAL
        sampled = check_pure_preserving_sampled(psi, n=40, seed=7)
        assert not sampled.all_pure, "sampler found no impure pullback"
        c, vec = sampled.first_failure
        rho = Functional.rank_one(psi.out_shape, c, vec, vec)
        assert not is_pure_state(psi.pullback(rho)).pure
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    return (f"100 mixed compressions accepted, 100 rotated maps rejected "
            f"with sampled confirmation, {elapsed:.2f}s")


def test_jordan_compressions_and_rotations(scorecard):
    scorecard("[7/9] compressions accepted, rotations rejected",
              _compressions_and_rotations)


def _induced_norm_bound(corpus):
    rng = np.random.default_rng(808)
    start = time.perf_counter()
    worst = 0.0
    for entry in corpus.entries:
        t = entry.psi.tensors[0][0]
        k = t.shape[2]
        z = rng.standard_normal((1000, k, k)) + 1j * rng.standard_normal((1000, k, k))
        z /= np.linalg.svd(z, compute_uv=False)[:, 0][:, None, None]
        images = np.einsum("xypq,npq->nxy", t, z, optimize=True)
        worst = max(worst, float(np.linalg.svd(images, compute_uv=False)[:, 0].max()))
    elapsed = time.perf_counter() - start
    assert worst <= 1.0 + 1e-8, f"induced norm sample {worst:.12f}"
    return (f"400 maps x 1000 norm-one inputs, max image norm "
            f"{worst:.10f}, {elapsed:.1f}s")


def test_induced_norm_bound(scorecard, corpus):
    scorecard("[8/9] sampled induced norm at most 1",
              lambda: _induced_norm_bound(corpus))


def _random_blaschke(rng, degree):
    zeros = tuple(complex(r * np.exp(1j * t)) for r, t in zip(
        0.9 * np.sqrt(rng.uniform(size=degree)),
        rng.uniform(0.0, 2.0 * np.pi, size=degree)))
    phase = complex(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
    return BlaschkeProduct(phase=phase, zeros=zeros)


def _disc_boundary():
    rng = np.random.default_rng(909)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        mult = _random_blaschke(rng, int(rng.integers(0, 7)))
        symb = _random_blaschke(rng, int(rng.integers(1, 7)))
        report = boundary_extremality_check(DiscCompositionOp(mult, symb),
                                            grid=4096, tol=1e-10)
        assert report.accepted, f"deviation {report.deviation:.3e}"
        worst = max(worst, report.deviation)
    half = DiscCompositionOp(lambda z: (1.0 + z) / 2.0,
                             BlaschkeProduct(zeros=(0.0,)))
    rej = boundary_extremality_check(half, grid=4096, tol=1e-10)
    assert not rej.accepted, "averaging multiplier slipped through"
    assert abs(rej.worst_t - np.pi) <= 1e-3, f"worst point at {rej.worst_t}"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    return (f"200 operators accepted, max deviation {worst:.2e}, "
            f"(1+z)/2 rejected at t = {rej.worst_t:.4f}, {elapsed:.2f}s")


def test_disc_operator_boundary_check(scorecard):
    scorecard("[9/9] disc operator boundary extremality", _disc_boundary)
