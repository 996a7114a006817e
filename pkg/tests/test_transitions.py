"""Property transitions in time: baric times, critical times, diagrams."""

import math

import numpy as np
import pytest

from evochain import EvolutionAlgebra, InputError, TimeFunction
from evochain.chains import example2, rotation, triangular, two_state
from evochain.transitions import (
    DiagramProperty,
    analytic_baric_set,
    baric_fraction,
    baric_times,
    classify_point,
    const_controller,
    controller_from,
    critical_times_p1,
    diagram,
    explinear_controller,
    sin_controller,
    tan_controller,
    write_diagram_csv,
)

PI = math.pi


# -- controllers ---------------------------------------------------------------


def test_catalog_controllers_evaluate():
    assert tan_controller().theta(0.3) == pytest.approx(math.tan(0.3))
    assert sin_controller().theta(1.1) == pytest.approx(math.sin(1.1))
    assert const_controller(2.5).theta(9.9) == 2.5
    th = explinear_controller(math.e, 0.5).theta
    assert th(1.0) == pytest.approx(math.exp(-1) + 0.5)


def test_composed_controller():
    ctrl = controller_from(TimeFunction.exp(math.e), TimeFunction.linear(0.5))
    assert ctrl.theta(2.0) == pytest.approx(math.exp(-2) + 1.0)
    assert ctrl.theta_minus(2.0) == pytest.approx(math.exp(-2) - 1.0)


def test_catalog_controller_has_no_theta_minus():
    with pytest.raises(InputError):
        tan_controller().theta_minus(0.5)


# -- baric times ---------------------------------------------------------------


def test_baric_times_tan():
    got = baric_times(tan_controller(), 0.3, (0.0, 7.0))
    assert got[0] == 0.3  # s itself, exactly
    assert got == pytest.approx([0.3, 0.3 + PI, 0.3 + 2 * PI], abs=1e-8)


def test_baric_times_sin():
    got = baric_times(sin_controller(), 0.3, (0.0, 7.0))
    assert got == pytest.approx([0.3, PI - 0.3, 0.3 + 2 * PI], abs=1e-8)


def test_baric_times_explinear():
    got = baric_times(explinear_controller(math.e, 0.5), 0.2, (0.2, 3.0))
    assert len(got) == 2
    assert got[0] == 0.2
    assert got[1] == pytest.approx(1.2831181, abs=1e-6)


def test_baric_times_soundness():
    ctrl = explinear_controller(math.e, 0.5)
    theta_s = ctrl.theta(0.2)
    for t in baric_times(ctrl, 0.2, (0.2, 3.0)):
        assert abs(ctrl.theta(t) - theta_s) <= 1e-10


def test_baric_times_s_outside_window():
    # matches for theta(9) are reported, s itself is not in the window
    got = baric_times(tan_controller(), 9.0, (0.0, 7.0))
    assert got == pytest.approx([9.0 - 2 * PI, 9.0 - PI], abs=1e-8)


# -- critical times ------------------------------------------------------------


def test_critical_times_growth():
    crit = critical_times_p1(math.e, 0.5)
    assert crit.case == "growth"
    assert crit.t_c == pytest.approx(math.log(2), abs=1e-12)
    theta = explinear_controller(math.e, 0.5).theta
    assert abs(theta(crit.t_c_prime) - 1.0) <= 1e-10
    assert crit.t_c_prime == pytest.approx(1.5936242600, abs=1e-6)


def test_critical_times_decay():
    crit = critical_times_p1(0.5, -1.0)
    assert crit.case == "decay"
    theta = explinear_controller(0.5, -1.0).theta
    assert abs(theta(crit.t_c_prime) - 1.0) <= 1e-10
    assert crit.t_c < crit.t_c_prime


@pytest.mark.parametrize(
    "lam, c",
    [(2.0, 1.0), (2.0, -0.5), (2.0, math.log(2)), (0.5, -0.5), (0.9, 0.2)],
)
def test_critical_times_empty_branch(lam, c):
    crit = critical_times_p1(lam, c)
    assert crit.empty
    assert crit.t_c is None and crit.t_c_prime is None


def test_critical_times_rejects_lambda_one():
    with pytest.raises(InputError):
        critical_times_p1(1.0, 0.5)


# -- diagrams ------------------------------------------------------------------


def test_diagram_example2_baric_on_diagonal_only():
    d = diagram(example2(2.0, 1.0), DiagramProperty.BARIC, t_max=2.0, resolution=8)
    for i, j, _s, _t, value in d.iter_cells():
        assert value == (1 if i == j else 0)
    assert baric_fraction(d) == pytest.approx(8 / 36)


def test_diagram_triangular_all_baric():
    fam = triangular(
        entries=[[TimeFunction.const(1.0)], [TimeFunction.linear(1.0), TimeFunction.exp(math.e)]]
    )
    d = diagram(fam, DiagramProperty.BARIC, t_max=2.0, resolution=6)
    upper = [d.cells[i, j] for i in range(6) for j in range(i, 6)]
    assert set(upper) == {1}
    assert baric_fraction(d) == 1.0


def test_diagram_rotation_stripes():
    # eps comparable to the cell size picks up the isolated baric lines
    d = diagram(rotation(), DiagramProperty.BARIC, t_max=10.0, resolution=20, eps=0.25)
    hits = [(i, j) for i, j, _s, _t, v in d.iter_cells() if v == 1]
    assert hits, "expected baric cells"
    off_diagonal = [ij for ij in hits if ij[0] != ij[1]]
    assert off_diagonal, "expected stripes beyond the diagonal"
    h = 10.0 / 20
    for i, j in hits:
        tau = (j - i) * h  # center-to-center lag
        assert min(abs(tau - k * PI) for k in range(4)) <= 0.26


def test_diagram_idempotent_count_transition():
    d = diagram(
        example2(3.0, 1.0), DiagramProperty.IDEMPOTENT_COUNT, t_max=2.0, resolution=10
    )
    t_c = math.log(2) / math.log(3)
    h = 2.0 / 10
    for i, j, s, t, value in d.iter_cells():
        fam_tc = t_c  # homogeneous family: transition depends on t - s
        expected = 4 if (t - s) < fam_tc else 2
        if abs((t - s) - fam_tc) > h:  # skip cells straddling the jump
            assert value == expected, f"cell ({i},{j})"


def test_diagram_nilpotent_unique():
    d = diagram(example2(2.0, 1.0), DiagramProperty.NILPOTENT_UNIQUE, t_max=2.0, resolution=5)
    upper = [d.cells[i, j] for i in range(5) for j in range(i, 5)]
    assert set(upper) == {1}  # det = (lam*mu)^tau never vanishes


def test_diagram_pole_cells_flagged():
    fam = two_state(TimeFunction.const(1.0), TimeFunction.tan())
    d = diagram(fam, DiagramProperty.BARIC, t_max=3.0, resolution=6)
    # pi/2 lies in cell 3 of [0, 3] at h = 0.5
    assert all(d.cells[i, 3] == -1 for i in range(4))
    assert all(d.cells[3, j] == -1 for j in range(3, 6))


def test_diagram_pointwise_consistency():
    fam = example2(2.0, 1.0)
    d = diagram(fam, DiagramProperty.BARIC, t_max=2.0, resolution=9)
    rng = np.random.default_rng(8)
    cells = [(i, j) for i in range(9) for j in range(i, 9)]
    for idx in rng.choice(len(cells), size=20, replace=False):
        i, j = cells[idx]
        h = 2.0 / 9
        s, t = (i + 0.5) * h, (j + 0.5) * h
        assert d.cells[i, j] == classify_point(fam, DiagramProperty.BARIC, s, t, d.eps)


def test_diagram_rejects_idempotent_count_on_wrong_n():
    from evochain.chains import constant_row

    fam = constant_row(TimeFunction.exp(2.0), 3)
    with pytest.raises(InputError):
        diagram(fam, DiagramProperty.IDEMPOTENT_COUNT, t_max=1.0, resolution=4)


def test_write_diagram_csv(tmp_path):
    d = diagram(example2(2.0, 1.0), DiagramProperty.BARIC, t_max=1.0, resolution=3)
    path = tmp_path / "d.csv"
    write_diagram_csv(d, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "s,t,value"
    assert len(lines) == 1 + 6  # upper-triangle cells of a 3-grid
    first = lines[1].split(",")
    assert float(first[0]) == pytest.approx(1 / 6)
    assert first[2] == "1"


def test_baric_fraction_wrong_property():
    d = diagram(example2(2.0, 1.0), DiagramProperty.NILPOTENT_UNIQUE, t_max=1.0, resolution=3)
    with pytest.raises(InputError):
        baric_fraction(d)


# -- fraction scaling (measure proxies) ----------------------------------------


def test_fraction_halves_for_monotone_controller():
    fam = two_state(TimeFunction.const(1.0), TimeFunction.linear(1.0))
    fractions = {}
    for n in (50, 100, 200):
        d = diagram(fam, DiagramProperty.BARIC, t_max=2.0, resolution=n)
        fractions[n] = baric_fraction(d)
    assert 0.375 * fractions[50] <= fractions[100] <= 0.625 * fractions[50]
    assert 0.375 * fractions[100] <= fractions[200] <= 0.625 * fractions[100]


def test_fraction_positive_for_piecewise_controller():
    psi = TimeFunction.piecewise_const((0.75, 1.5), (0.0, 1.0, 0.0))
    fam = two_state(TimeFunction.const(1.0), psi)
    d = diagram(fam, DiagramProperty.BARIC, t_max=2.0, resolution=60)
    assert baric_fraction(d) > 0.01


# -- analytic description --------------------------------------------------------


def test_analytic_baric_set():
    assert analytic_baric_set("tan")["kind"] == "tan"
    assert analytic_baric_set("const")["curves"] == ["0 <= s <= t"]
    out = analytic_baric_set("explinear", lam=math.e, c=0.5)
    assert out["case"] == "growth"
    assert out["t_c"] == pytest.approx(math.log(2))
    assert analytic_baric_set("explinear", lam=2.0, c=1.0)["curves"] == []
    with pytest.raises(InputError):
        analytic_baric_set("quadratic")
    with pytest.raises(InputError):
        analytic_baric_set("explinear")
