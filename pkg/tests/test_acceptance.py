"""Exit criteria, one test per criterion, tolerances pinned."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from relalter._floats import ulp_distance
from relalter.alterations import alter_energy_gap, alter_frequency, alter_mass, fractional_shift
from relalter.hamilton_jacobi import HJFamily, hj_closed_family, hj_mass_alteration, hj_residual, verify_mass_invariance
from relalter.metric import CODATA_2018, AlterationFactor, GravitationalSource, KinematicFrame, schwarzschild_lambda, special_lambda
from relalter.sepvar import Grid1D, discretize, eigenmodes, eigenvalues, verify_frame_scaling

RNG_SEED = 20261015


def test_c1_eigenvalue_oracle():
    start = time.perf_counter()
    grid = Grid1D(1.0, 1000)
    sols = eigenmodes(discretize("laplacian", grid), 5)
    for j, s in enumerate(sols, start=1):
        exact = -((j * math.pi) ** 2)
        assert abs(s.sep_constant - exact) <= 1e-3 * abs(exact)

    err_h = abs(eigenvalues(discretize("laplacian", grid), 1)[0] + math.pi**2)
    err_h2 = abs(eigenvalues(discretize("laplacian", grid.halved()), 1)[0] + math.pi**2)
    ratio = err_h / err_h2
    elapsed = time.perf_counter() - start
    print(f"c1: lambda_1={sols[0].sep_constant!r} convergence ratio={ratio:.4f} time={elapsed:.2f}s")
    assert 3.5 <= ratio <= 4.5
    assert elapsed < 5.0


def test_c2_frame_scaling_law():
    records = []
    for kind, pot in (("laplacian", None), ("schrodinger_with_potential", 1.0)):
        op = discretize(kind, Grid1D(1.0, 1000), pot)
        for s in eigenmodes(op, 5):
            for gamma in (0.5, 0.9, 0.999):
                rep = verify_frame_scaling(s, AlterationFactor.from_gamma(gamma), tol=1e-12, fd_tol=1e-6)
                assert abs(rep.lambda_m - gamma * rep.lambda_s) <= 1e-12 * abs(rep.lambda_s)
                assert rep.fd_rel_err <= 1e-6
                records.append(rep)
    passed = sum(r.passed for r in records)
    print(f"c2: {passed}/{len(records)} records pass, worst fd rel err {max(r.fd_rel_err for r in records):.2e}")
    assert len(records) == 30 and passed == 30


def test_c3_redshift_chain():
    rng = np.random.default_rng(RNG_SEED)
    h = CODATA_2018.h_planck
    worst = 0.0
    for _ in range(1000):
        dE = float(10 ** rng.uniform(-30, 10))
        f = AlterationFactor.from_gamma(float(rng.uniform(1e-6, 1.0)))
        via_energy = alter_energy_gap(dE, f).value / h
        via_frequency = alter_frequency(dE / h, f).value
        worst = max(worst, ulp_distance(via_energy, via_frequency))
    print(f"c3: worst disagreement {worst} ulps")
    assert worst <= 2


def test_c4_mass_energy_product():
    rng = np.random.default_rng(RNG_SEED + 1)
    worst = 0.0
    for _ in range(1000):
        M = float(10 ** rng.uniform(-30, 30))
        E = float(10 ** rng.uniform(-30, 30))
        f = AlterationFactor.from_gamma(float(rng.uniform(1e-6, 1.0)))
        worst = max(worst, ulp_distance(alter_mass(M, f).value * alter_energy_gap(E, f).value, M * E))
    print(f"c4: worst disagreement {worst} ulps")
    assert worst <= 4


def test_c5_weak_field_earth():
    f = schwarzschild_lambda(GravitationalSource(5.9722e24, 6.3710e6), CODATA_2018)
    deficit = 1.0 - f.lam
    shift = fractional_shift(f)
    print(f"c5: 2GM/(c^2 R)={deficit!r} 1-gamma={shift!r}")
    assert deficit == pytest.approx(1.392e-9, rel=5e-3)
    assert shift == pytest.approx(6.96e-10, rel=5e-3)


def test_c6_transverse_doppler():
    f = special_lambda(KinematicFrame(0.005 * CODATA_2018.c), CODATA_2018)
    shift = fractional_shift(f)
    plain = 1.0 - math.sqrt(1.0 - 0.005**2)
    print(f"c6: 1-gamma={shift!r} (plain subtraction {plain!r})")
    assert abs(shift - 1.2500e-5) <= 1e-9
    assert abs(shift - plain) <= 1e-15


def test_c7_hamilton_jacobi():
    rng = np.random.default_rng(RNG_SEED + 2)
    worst = 0.0
    weakest_detection = math.inf
    for _ in range(100):
        A = float(rng.uniform(0.01, 100) * rng.choice([-1.0, 1.0]))
        C = float(rng.uniform(0.01, 100))
        M = float(rng.uniform(0.01, 100))
        fam = hj_closed_family(A, C, M)
        r = np.linspace(0.0, 10.0, 21)
        t = np.linspace(0.0, C / abs(fam.sep_constant), 21)
        worst = max(worst, hj_residual(fam, r, t))
        bent = HJFamily(A, C, M, 1.01 * fam.sep_constant)
        weakest_detection = min(weakest_detection, hj_residual(bent, r, t))
    assert worst <= 1e-9
    assert weakest_detection > 1e-4

    worst_inv = 0.0
    for _ in range(100):
        mass_s = float(10 ** rng.uniform(-30, 30))
        f = AlterationFactor.from_gamma(float(rng.uniform(1e-3, 1.0)))
        rep = verify_mass_invariance(mass_s, f)
        worst_inv = max(worst_inv, rep.rel_err)
        assert rep.passed
        assert hj_mass_alteration(mass_s, f) == alter_mass(mass_s, f).value
    print(f"c7: worst residual {worst:.2e}, weakest 1% detection {weakest_detection:.2e}, worst invariance {worst_inv:.2e}")
    assert worst_inv <= 1e-12


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "relalter.cli", *args], capture_output=True, text=True)


def test_c8_cli():
    invocations = [
        ["verify", "--op", "laplacian", "--n", "1000", "--modes", "5", "--gamma", "0.5,0.9,0.999"],
        ["verify", "--op", "laplacian", "--n", "3", "--modes", "3", "--gamma", "1"],
        ["verify", "--op", "hj", "--gamma", "0.8"],
    ]
    outputs = []
    for argv in invocations:
        proc = _cli(*argv)
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    assert len(outputs[0].splitlines()) == 15
    assert len(outputs[1].splitlines()) == 3
    assert any(json.loads(l)["check"] == "mass_invariance" and json.loads(l)["pass"] for l in outputs[2].splitlines())

    superluminal = _cli("gamma", "--velocity", "1.0c")
    assert superluminal.returncode == 2 and "superluminal" in superluminal.stderr
    horizon = _cli("gamma", "--mass", "1", "--radius", "1e-30")
    assert horizon.returncode == 2 and "horizon" in horizon.stderr

    outputs.append(_cli("gamma", "--velocity", "0.6c").stdout)
    for out in outputs:
        for line in out.splitlines():
            rec = json.loads(line)
            assert json.dumps(rec) == line
            for v in rec.values():
                if isinstance(v, float):
                    assert float(repr(v)) == v
    print("c8: verify x3 exit 0; superluminal/horizon exit 2; JSON round-trips")
