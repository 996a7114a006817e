"""Acceptance gate: the twelve pinned criteria, one test each.

Each test wraps its body in the `criterion` fixture so a PASS/FAIL line per
criterion is echoed in the terminal summary.  Tolerances and runtimes are
part of the contract; do not relax them here.
"""

import json
import math
import time

import numpy as np
import pytest

from evochain import EvolutionAlgebra, LIMIT_MATRICES, LimitClass, TimeFunction
from evochain.baric import is_baric, weight_functions
from evochain.chains import (
    chain_det,
    check_period,
    constant_row,
    example1,
    example2,
    limit_classify_example2,
    numeric_limit,
    rotation,
    theorem5,
    triangular,
    two_state,
    verify_ck,
)
from evochain.cli import main as cli_main
from evochain.idempotent import (
    idempotent_critical_time,
    idempotent_oracle,
    idempotents_example2,
)
from evochain.nilpotent import NilpotentKind, nilpotent_analysis, nilpotent_oracle
from evochain.rotation2d import (
    BasisChange2,
    RotAlgebra,
    change_basis_2d,
    density_search,
    iso_rotation,
)
from evochain.transitions import (
    DiagramProperty,
    baric_fraction,
    baric_times,
    critical_times_p1,
    diagram,
    explinear_controller,
)
from evochain._roots import points_match

E = math.e


def _triangular_family():
    return triangular(
        entries=[
            [TimeFunction.const(1.0)],
            [TimeFunction.linear(1.0), TimeFunction.exp(E)],
        ]
    )


def _eight_families():
    return [
        example1(1.0),
        example2(2.0, 1.0),
        example2(0.5, 3.0),
        two_state(TimeFunction.exp(E), TimeFunction.linear(0.5)),
        _triangular_family(),
        rotation(),
        constant_row(TimeFunction.exp(2.0), 3),
        theorem5(TimeFunction.const(0.0), TimeFunction.const(2.0)),
    ]


def test_criterion_1_ck_verification(criterion):
    with criterion(1, "CK residuals <= 1e-8 for all eight families, < 2 s"):
        start = time.perf_counter()
        for fam in _eight_families():
            rep = verify_ck(fam, 5.0, 200, 42, 1e-8)
            assert rep.passed, f"{fam.variant}: {rep.max_residual}"
        assert time.perf_counter() - start < 2.0


def test_criterion_2_baric_criterion(criterion):
    with criterion(2, "baric criterion and Example 1/2' time scans"):
        assert not is_baric(EvolutionAlgebra(np.zeros((2, 2))))
        ws = weight_functions(EvolutionAlgebra([[2.0, 0.0], [0.0, 0.0]]))
        assert len(ws) == 1 and ws[0].index == 0 and ws[0].coefficient == 2.0

        grid = [k * 0.05 for k in range(101)]
        fam = example1(1.0)
        baric_at = [t for t in grid if is_baric(fam.snapshot(0.0, t), eps=1e-6)]
        assert baric_at == [0.0]

        fam = example2(2.0, 1.0)
        baric_at = [t for t in grid if is_baric(fam.snapshot(0.0, t), eps=1e-6)]
        assert baric_at == [0.0]

        fam = example2(2.0, 2.0)
        assert all(is_baric(fam.snapshot(0.0, t), eps=1e-6) for t in grid)


def test_criterion_3_triangular_weights(criterion):
    with criterion(3, "triangular family: weight at the last index, coeff e^(s-t)"):
        fam = _triangular_family()
        rng = np.random.default_rng(42)
        for _ in range(100):
            s = rng.uniform(0.0, 3.0)
            t = s + rng.uniform(0.0, 3.0)
            ws = weight_functions(fam.snapshot(s, t))
            by_index = {w.index: w.coefficient for w in ws}
            assert 1 in by_index
            assert by_index[1] == pytest.approx(math.exp(s - t), abs=1e-10)


def test_criterion_4_idempotent_transition(criterion):
    with criterion(4, "idempotent count transition, t_c formula, oracle match, < 5 s"):
        start = time.perf_counter()
        lam, mu = 3.0, 1.0
        for t in (0.1, 0.3, 0.6):
            assert len(idempotents_example2(lam, mu, t)) == 4
        for t in (0.631, 1.0, 2.0):
            assert len(idempotents_example2(lam, mu, t)) == 2
        t_c = idempotent_critical_time(lam, mu)
        assert abs(t_c - math.log(2) / math.log(3)) <= 1e-12
        for t in (0.3, 1.0):
            closed = idempotents_example2(lam, mu, t)
            alg = example2(lam, mu).snapshot(0.0, t)
            oracle = idempotent_oracle(alg, radius=10.0, step=0.05, tol=1e-12)
            assert len(oracle) == len(closed)
            assert points_match(oracle.points, closed.points, radius=1e-8)
        assert time.perf_counter() - start < 5.0


def test_criterion_5_idempotent_residuals(criterion):
    with criterion(5, "closed-form idempotent residuals <= 1e-9 on the parameter grid"):
        for lam in (0.5, 1.0, 2.0, 3.0, 5.0):
            for mu in (0.5, 1.0, 2.0, 3.0, 5.0):
                for t in (0.25, 0.5, 1.0, 2.0, 4.0):
                    alg = example2(lam, mu).snapshot(0.0, t)
                    for p in idempotents_example2(lam, mu, t).points:
                        assert np.max(np.abs(alg.evolve(p) - p)) <= 1e-9


def test_criterion_6_nilpotents(criterion):
    with criterion(6, "nilpotent classification incl. transpose-convention reproduction"):
        alg = rotation().snapshot(0.0, 1.0)
        assert nilpotent_analysis(alg).kind is NilpotentKind.UNIQUE_ZERO
        pts = nilpotent_oracle(alg)
        assert len(pts) == 1 and np.max(np.abs(pts[0])) <= 1e-6

        assert (
            nilpotent_analysis(EvolutionAlgebra([[1.0, 2.0], [1.0, 2.0]])).kind
            is NilpotentKind.UNIQUE_ZERO
        )

        cone_alg = EvolutionAlgebra([[1.0, 2.0], [-1.0, -2.0]])
        assert nilpotent_analysis(cone_alg).kind is NilpotentKind.INFINITE_CONE
        for p in nilpotent_oracle(cone_alg, radius=1.0, step=0.1):
            assert abs(abs(p[0]) - abs(p[1])) <= 1e-6

        fam = constant_row(TimeFunction.exp(2.0), 3)
        for s, t in ((0.0, 1.0), (0.5, 2.0), (1.0, 4.0)):
            res = nilpotent_analysis(fam.snapshot(s, t))
            assert res.kind is NilpotentKind.INFINITE_FREE
            assert res.free_indices == (1, 2)

        # row-convention displays classify correctly only after transposing
        m = theorem5(TimeFunction.const(0.0), TimeFunction.const(2.0)).matrix(0.5, 2.0)
        assert nilpotent_analysis(EvolutionAlgebra(m.T)).kind is NilpotentKind.INFINITE_CONE
        m0 = theorem5(TimeFunction.const(0.0), TimeFunction.const(0.0)).matrix(0.5, 2.0)
        assert nilpotent_analysis(EvolutionAlgebra(m0.T)).kind is NilpotentKind.UNIQUE_ZERO


def test_criterion_7_determinant_table(criterion):
    with criterion(7, "determinant formulas and Cantor multiplicativity"):
        rng = np.random.default_rng(7)
        fam1 = example1(1.0)
        fam2 = example2(2.0, 1.0)
        fam3 = two_state(TimeFunction.exp(E), TimeFunction.linear(0.5))
        fam5 = rotation()
        for _ in range(50):
            s = rng.uniform(0.0, 2.0)
            t = s + rng.uniform(0.0, 2.0)
            assert chain_det(fam1, s, t) == pytest.approx(math.exp(-3 * (t - s)), rel=1e-9)
            assert chain_det(fam2, s, t) == pytest.approx(2.0 ** (t - s), rel=1e-9)
            assert chain_det(fam3, s, t) == pytest.approx(math.exp(t) / math.exp(s), rel=1e-9)
            assert chain_det(fam5, s, t) == pytest.approx(1.0, rel=1e-9)
        for _ in range(20):
            s = rng.uniform(0.0, 2.0)
            tau = s + rng.uniform(0.01, 1.5)
            t = tau + rng.uniform(0.01, 1.5)
            for fam in (fam1, fam3):
                assert chain_det(fam, s, t) == pytest.approx(
                    chain_det(fam, s, tau) * chain_det(fam, tau, t), rel=1e-8
                )


def test_criterion_8_critical_times(criterion):
    with criterion(8, "explinear critical times and TwoState cross-check"):
        crit = critical_times_p1(E, 0.5)
        assert abs(crit.t_c - math.log(2)) <= 1e-12
        theta = explinear_controller(E, 0.5).theta
        assert abs(theta(crit.t_c_prime) - 1.0) <= 1e-10
        assert crit.t_c_prime == pytest.approx(1.5936, abs=1e-4)

        assert critical_times_p1(2.0, 1.0).empty

        times = baric_times(explinear_controller(E, 0.5), 0.2, (0.2, 3.0))
        off_diag = [t for t in times if t > 0.2 + 1e-9]
        assert off_diag
        fam = two_state(TimeFunction.exp(E), TimeFunction.linear(0.5))
        assert is_baric(fam.snapshot(0.2, off_diag[0]), eps=1e-6)


def test_criterion_9_limits(criterion):
    with criterion(9, "limit algebras of Example 1 and the Example 2 classes"):
        m = example1(1.0).matrix(0.0, 30.0)
        assert np.max(np.abs(m - 1.0 / 3.0)) <= 1e-6

        cases = {
            (0.5, 0.5): LimitClass.E0,
            (1.0, 1.0): LimitClass.E1,
            (1.0, 0.3): LimitClass.E_HALF,
            (0.7, 1.0): LimitClass.E_MINUS_HALF,
            (2.0, 0.5): LimitClass.E_INFINITY,
        }
        for (lam, mu), cls in cases.items():
            assert limit_classify_example2(lam, mu) is cls
            probe = numeric_limit(example2(lam, mu), 0.0, 60.0)
            if cls is LimitClass.E_INFINITY:
                assert probe is None
            else:
                assert probe is not None
                assert np.max(np.abs(probe - LIMIT_MATRICES[cls])) <= 1e-6


def test_criterion_10_rotation_chain(criterion):
    with criterion(10, "rotation period, isomorphism table, basis flip, density n = 44"):
        fam = rotation()
        assert check_period(fam, 2 * math.pi, 10.0, 100, 42, 1e-9)
        assert not check_period(fam, math.pi, 10.0, 100, 42, 1e-9)

        values = (-1.0, -0.5, 0.0, 0.5, 1.0)
        for a in values:
            for b in values:
                assert iso_rotation(a, b) == (b == a or b == -a)

        flip = BasisChange2(0.0, -1.0, -1.0, 0.0)
        for a in (-0.9, -0.5, 0.0, 0.5, 0.9):
            out = change_basis_2d(RotAlgebra(a, "+"), flip)
            assert np.max(np.abs(out - RotAlgebra(-a, "+").matrix)) <= 1e-12

        assert density_search(1.0, 5e-4, 100) == (44, "+")


def test_criterion_11_measure_proxies(criterion):
    with criterion(11, "baric fraction halves for monotone theta, stays positive piecewise"):
        mono = two_state(TimeFunction.const(1.0), TimeFunction.linear(1.0))
        frac = {}
        for n in (100, 200, 400):
            d = diagram(mono, DiagramProperty.BARIC, t_max=2.0, resolution=n)
            frac[n] = baric_fraction(d)
        for n in (100, 200):
            assert 0.375 * frac[n] <= frac[2 * n] <= 0.625 * frac[n]

        psi = TimeFunction.piecewise_const((0.75, 1.5), (0.0, 1.0, 0.0))
        step_fam = two_state(TimeFunction.const(1.0), psi)
        d = diagram(step_fam, DiagramProperty.BARIC, t_max=2.0, resolution=400)
        assert baric_fraction(d) > 0.01


def test_criterion_12_cli_determinism(criterion, capsys, tmp_path):
    with criterion(12, "documented CLI invocations are byte-deterministic"):
        invocations = [
            ("verify-ck", "--family", "rotation", "--tmax", "6.28",
             "--samples", "200", "--seed", "42", "--tol", "1e-9"),
            ("verify-ck", "--family", "two_state", "--phi", "exp:2.718281828459045",
             "--psi", "linear:0.5", "--tmax", "5", "--samples", "100", "--seed", "1"),
            ("analyze", "--family", "example1", "--A", "1", "--s", "0", "--t", "0",
             "--property", "baric"),
            ("idempotents", "--lambda", "3", "--mu", "1", "--t", "1", "--oracle"),
            ("critical-times", "--analysis", "idempotent", "--lambda", "2", "--mu", "1"),
            ("critical-times", "--analysis", "p1", "--lambda", "2.718281828459045",
             "--c", "0.5"),
            ("limits", "--family", "example2", "--lambda", "0.5", "--mu", "0.5",
             "--numeric", "--tprobe", "40"),
            ("iso", "--a", "0.5", "--b", "-0.5", "--sign", "+"),
            ("density", "--a", "1", "--tol", "5e-4", "--nmax", "100"),
            ("baric-times", "--controller", "explinear", "--lambda", "2.718281828459045",
             "--c", "0.5", "--s", "0.2", "--window", "0.2", "3"),
        ]
        for argv in invocations:
            outputs = []
            for _ in range(2):
                code = cli_main(list(argv))
                out, _err = capsys.readouterr()
                assert code == 0, argv
                outputs.append(out)
            assert outputs[0] == outputs[1], argv
            json.loads(outputs[0])  # machine-format sanity

        csv_paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in csv_paths:
            code = cli_main([
                "diagram", "--family", "example2", "--lambda", "2", "--mu", "1",
                "--property", "baric", "--tmax", "2", "--grid", "25",
                "--out", str(path),
            ])
            capsys.readouterr()
            assert code == 0
        assert csv_paths[0].read_bytes() == csv_paths[1].read_bytes()
