"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance and budget is pinned here; run with ``pytest -s
tests/test_acceptance.py`` to see the per-criterion lines.
"""

import json
import math
import time

import numpy as np
import pytest

from anosov import (
    Presentation,
    Representation,
    ScaledMatrix,
    SchottkyParams,
    certify_anosov,
    compound_matrix,
    direct_sum,
    enumerate_ball,
    evaluate,
    fuchsian_surface_rep,
    gap_profile,
    perturb_path,
    pingpong_power,
    pingpong_subgroup,
    realify_rep,
    reduce_word,
    rotation_about_i,
    scan_positivity,
    schottky_rep,
    singular_values,
    spectrum,
    sym_power_rep,
    symplectic_form,
    symplectic_pairing_matrix,
    track_ell1_along_path,
)
from anosov.cli import main as cli_main
from anosov.exterior import ExteriorVector, apply_compound
from anosov.words import parse_word

F2 = Presentation.free(2)
SCHOTTKY3 = SchottkyParams(rank=2, dilation=3.0)


class Budget:
    def __init__(self, criterion: str, seconds: float):
        self.criterion = criterion
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"[criterion {self.criterion}] {status} ({elapsed:.2f}s / budget {self.seconds:.0f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"criterion {self.criterion} exceeded its {self.seconds}s budget: {elapsed:.2f}s"
            )
        return False


def sm(a, log_scale=0.0):
    return ScaledMatrix.from_array(np.asarray(a, dtype=float), log_scale)


def test_criterion_1_spectral_identity():
    """sigma_i(g) = sqrt(lambda_i(g g^T)) to relative 1e-9 on 200 random matrices."""
    with Budget("1", 5.0):
        rng = np.random.default_rng(1)
        checked = 0
        while checked < 200:
            d = 2 + checked % 9
            a = rng.standard_normal((d, d))
            sv = np.linalg.svd(a, compute_uv=False)
            if sv[0] / sv[-1] > 1e10:
                continue
            gram_route = 0.5 * np.log(np.sort(np.linalg.eigvalsh(a @ a.T))[::-1])
            direct_route = singular_values(sm(a)).log_values
            np.testing.assert_allclose(direct_route, gram_route, atol=1e-9)
            checked += 1
        assert checked == 200


def test_criterion_2_exterior_functoriality_and_transfer():
    """compound(gh) = compound(g) compound(h) and P_k <=> P_1 transfer, d <= 8."""
    with Budget("2", 30.0):
        rng = np.random.default_rng(2)
        for d in range(2, 9):
            for k in range(1, d):
                for _ in range(100):
                    g = sm(rng.standard_normal((d, d)))
                    h = sm(rng.standard_normal((d, d)))
                    lhs = compound_matrix(g @ h, k)
                    rhs = compound_matrix(g, k) @ compound_matrix(h, k)
                    scale = math.exp(lhs.log_scale - rhs.log_scale)
                    np.testing.assert_allclose(
                        lhs.entries * scale, rhs.entries, atol=1e-9
                    )
        disagreements = 0
        for d in range(2, 9):
            for k in range(1, d):
                for trial in range(100):
                    if trial % 2 == 0:
                        a = rng.standard_normal((d, d))
                    else:
                        # engineered modulus tie straddling position k
                        mods = np.sort(rng.uniform(0.5, 3.0, d))[::-1]
                        blocks = np.diag(mods)
                        c = mods[k - 1]
                        th = rng.uniform(0.3, 2.8)
                        blocks[k - 1 : k + 1, k - 1 : k + 1] = c * np.array(
                            [[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]]
                        )
                        q, _ = np.linalg.qr(rng.standard_normal((d, d)))
                        a = q @ blocks @ q.T
                    g = sm(a)
                    base = spectrum(g).is_proximal(k)
                    lifted = spectrum(compound_matrix(g, k)).is_proximal(1)
                    if base != lifted:
                        disagreements += 1
        assert disagreements == 0


def test_criterion_3_symplectic_obstruction():
    """Invariance, exact antisymmetry, nondegeneracy of the middle wedge pairing."""
    with Budget("3", 60.0):
        rng = np.random.default_rng(3)
        for q in (1, 2):
            d, deg = 4 * q + 2, 2 * q + 1
            size = math.comb(d, deg)
            omega = symplectic_pairing_matrix(q)
            assert np.array_equal(omega, -omega.T)  # exact on all basis pairs
            assert np.isfinite(np.linalg.cond(omega))
            assert np.linalg.cond(omega) == pytest.approx(1.0)
            for _ in range(50):
                a = rng.standard_normal((d, d))
                a /= abs(np.linalg.det(a)) ** (1.0 / d)
                if np.linalg.det(a) < 0:
                    a[:, 0] *= -1
                cg = compound_matrix(sm(a), deg)
                x = ExteriorVector.from_coeffs(d, deg, rng.standard_normal(size))
                y = ExteriorVector.from_coeffs(d, deg, rng.standard_normal(size))
                before = symplectic_form(x, y, q)
                after = symplectic_form(apply_compound(cg, x), apply_compound(cg, y), q)
                assert abs(after - before) <= 1e-8 * max(1.0, abs(before))


def test_criterion_4_schottky_positive_control():
    """Schottky F2 (dilation 3), k=1, R=8: Certified with alpha_hat >= 0.5."""
    with Budget("4", 120.0):
        rep = schottky_rep(SCHOTTKY3)
        profile = gap_profile(rep, 1, 8, threads=4)
        assert len(profile.rows) == 13121
        est = certify_anosov(profile)
        assert est.verdict == "Certified"
        assert est.alpha_hat >= 0.5
        assert est.min_margin > 0
        assert est.qie_passed


def test_criterion_5_realification_gap_pattern():
    """tau2 Schottky: k=1 Refuted (length-1 witness), k=2 Certified; doubled sum
    in dimension 8: k=4 Certified, k in {1,3} Refuted."""
    with Budget("5", 180.0):
        crep = schottky_rep(
            SchottkyParams(rank=2, dilation=3.0, field="complex", twists=(0.3, 0.7))
        )
        rep4 = realify_rep(crep)
        est1 = certify_anosov(gap_profile(rep4, 1, 6))
        assert est1.verdict == "Refuted"
        assert est1.witness is not None and len(parse_word(est1.witness)) == 1
        # the witness gap vanishes: sigma_1 / sigma_2 = 1 within 1e-9
        wit = evaluate(rep4, parse_word(est1.witness))
        assert singular_values(wit).log_gap(1) < math.log(1 + 1e-9)
        est2 = certify_anosov(gap_profile(rep4, 2, 6))
        assert est2.verdict == "Certified"
        assert est2.alpha_hat > 0
        rep8 = direct_sum([rep4, rep4])
        verdicts = {k: certify_anosov(gap_profile(rep8, k, 6)).verdict for k in (1, 3, 4)}
        assert verdicts[4] == "Certified"
        assert verdicts[1] == "Refuted" and verdicts[3] == "Refuted"


def test_criterion_6_negative_witness_search():
    """Sym^5 of an all-positive-trace Schottky F2, scanned under the third
    compound (dimension 20): a proximal witness with negative top eigenvalue
    must appear at some radius <= 8 and re-verify independently."""
    with Budget("6", 300.0):
        rep = schottky_rep(SCHOTTKY3)
        for g in rep.images:
            assert np.trace(g.array()) > 0
        s5 = sym_power_rep(rep, 5)
        report = None
        for radius in range(2, 9):
            report = scan_positivity(s5, 3, radius)
            if report.verdict == "NotPositivelyProximal":
                break
        assert report is not None
        assert report.verdict == "NotPositivelyProximal", (
            "no negative-ell1 proximal witness up to radius 8: criterion fails"
        )
        assert report.dim_scanned == 20
        assert report.witness_recheck  # independent compound-of-product eigensolve
        # second independent route: the base SL(2,R) word has negative trace
        base = evaluate(rep, parse_word(report.witness))
        assert np.trace(base.array()) < 0
        assert abs(np.trace(base.array())) > 2.0


def test_criterion_7_word_machinery():
    """Ball counts, Fuchsian relator defect, reduction idempotency."""
    with Budget("7", 10.0):
        assert len(enumerate_ball(F2, 2)) == 17
        surface = Presentation.surface(2)
        assert len(enumerate_ball(surface, 2)) == 65
        assert fuchsian_surface_rep(2).relator_defect < 1e-6
        rng = np.random.default_rng(7)
        for presentation in (F2, surface):
            letters = list(presentation.letters())
            for _ in range(5000):
                n = int(rng.integers(0, 13))
                w = tuple(int(letters[i]) for i in rng.integers(0, len(letters), n))
                once = reduce_word(w, presentation)
                assert reduce_word(once.letters, presentation).letters == once.letters


def test_criterion_8_continuity_tracking():
    """Along a magnitude-0.01 path every short word keeps a constant sign; a
    magnitude-0.5 control path loses proximality and says so, never flipping
    silently."""
    with Budget("8", 60.0):
        rep = schottky_rep(SCHOTTKY3)
        path = perturb_path(rep, 0.01, seed=0, steps=50)
        words = [w for w in enumerate_ball(F2, 4).words() if len(w) > 0]
        for w in words:
            trace = track_ell1_along_path(path, w, 1)
            assert trace.verdict == "ConstantSign", (str(w), trace.verdict)
        # control: same construction scaled past the supported range
        rng = np.random.default_rng(0)
        noise = [rng.standard_normal((2, 2)) for _ in rep.images]
        base = [g.array() for g in rep.images]
        control = []
        for s in range(51):
            t = s / 50
            mats = []
            for b, nz in zip(base, noise):
                m = b + t * 0.5 * nz
                m /= abs(np.linalg.det(m)) ** 0.5
                mats.append(ScaledMatrix.from_array(m))
            control.append(Representation.from_generators(F2, mats))
        lost = 0
        for w in words:
            trace = track_ell1_along_path(control, w, 1)
            if trace.verdict == "Inconclusive":
                lost += 1
                assert trace.failing_step is not None
                assert not trace.proximal[trace.failing_step]
            elif trace.verdict == "ConstantSign":
                nonzero = {s for s in trace.signs if s != 0}
                assert len(nonzero) == 1  # no silent flip
        assert lost > 0


def test_criterion_9_pingpong_suite():
    """The standard Schottky pair plays ping-pong at N = 1 and the induced
    rank-2 subgroup re-certifies on its radius-4 ball."""
    with Budget("9", 30.0):
        rep = schottky_rep(SCHOTTKY3)
        quarter = rotation_about_i(math.pi / 2)  # t g t^-1 is the second generator
        result = pingpong_power(rep, parse_word("a"), quarter)
        assert result is not None and result.n == 1
        sub = pingpong_subgroup(rep, parse_word("a"), quarter, result.n)
        est = certify_anosov(gap_profile(sub, 1, 4))
        assert est.verdict == "Certified"
        assert est.min_margin > 0


def test_criterion_10_reproducibility(tmp_path):
    """Two runs of the positive control with equal seeds and different thread
    counts emit byte-identical CSV and JSON."""
    with Budget("10", 240.0):
        outputs = {}
        for threads in (1, 4):
            out = tmp_path / f"threads{threads}"
            code = cli_main([
                "certify",
                "--construction", json.dumps({"kind": "schottky", "rank": 2, "dilation": 3.0}),
                "--k", "1", "--radius", "8",
                "--seed", "0", "--threads", str(threads),
                "--out", str(out),
            ])
            assert code == 0
            outputs[threads] = (
                (out / "gap_profile.csv").read_bytes(),
                (out / "summary.json").read_bytes(),
            )
        assert outputs[1] == outputs[4]
