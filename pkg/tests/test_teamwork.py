import numpy as np
import pytest

from cvteamwork import circuits, graphs, teamwork
from cvteamwork import symplectic as sp
from cvteamwork.mmes import Bipartition, ChannelSpec


def pair_fidelity_alt(r_a, z):
    """Equivalent form of the two-mode teamwork fidelity."""
    return 1 / (1 + 2 * np.exp(-2 * r_a) * np.cosh(2 * z) + np.exp(-4 * r_a))


def ghz_fidelity(k, r, z):
    """Closed form for a symmetric K-mode input through K equal channels."""
    eps = np.exp(-2 * r)
    return (1 + 2 * eps * np.cosh(2 * z) + eps**2) ** (-k / 2)


class TestBkTeleport:
    def test_perfect_channels(self):
        cov = circuits.tmss_cm(0.5)
        np.testing.assert_allclose(teamwork.bk_teleport_cm(cov, [40.0, 40.0]), cov, atol=1e-30)

    def test_classical_channel(self):
        np.testing.assert_array_equal(teamwork.bk_teleport_cm(np.eye(2), [0.0]), 3 * np.eye(2))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            teamwork.bk_teleport_cm(np.eye(4), [1.0])

    def test_pair_fidelity_reproduced(self):
        z, r = 1.2, 0.9
        cov = circuits.tmss_cm(z)
        f = sp.gaussian_fidelity_pure(cov, teamwork.bk_teleport_cm(cov, ChannelSpec((r, r))))
        assert f == pytest.approx(teamwork.eq1_fidelity(r, z), abs=1e-12)


class TestEq1:
    def test_value(self):
        assert teamwork.eq1_fidelity(1.0, 0.0) == pytest.approx(0.775803, abs=1e-6)
        assert teamwork.eq1_fidelity(1.0, 0.0) == pytest.approx(pair_fidelity_alt(1.0, 0.0), rel=1e-14)

    def test_limits(self):
        assert teamwork.eq1_fidelity(30.0, 2.0) == pytest.approx(1.0, abs=1e-12)
        assert teamwork.eq1_fidelity(0.5, 30.0) < 1e-20

    def test_monotonic(self):
        r = np.linspace(0, 4, 81)
        z = np.linspace(0, 3, 61)
        f_r = [teamwork.eq1_fidelity(x, 1.0) for x in r]
        f_z = [teamwork.eq1_fidelity(1.0, x) for x in z]
        assert np.all(np.diff(f_r) > 0) and np.all(np.diff(f_z) < 0)

    def test_negative(self):
        with pytest.raises(ValueError):
            teamwork.eq1_fidelity(-1.0, 0.0)


class TestF1:
    def test_values(self):
        assert teamwork.f1(0.0) == 0.5
        assert teamwork.f1(1.0) == pytest.approx(0.880797, abs=1e-6)

    @pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 2.0])
    def test_simulated(self, r):
        f = sp.gaussian_fidelity_pure(np.eye(2), teamwork.bk_teleport_cm(np.eye(2), [r]))
        assert f == pytest.approx(teamwork.f1(r), abs=1e-12)
        assert f == pytest.approx(1 / (1 + np.exp(-2 * r)), abs=1e-12)


class TestFkBounds:
    def test_coincide_at_zero(self):
        lo, hi = teamwork.fk_bounds(3, 1.0, 0.0)
        assert lo == hi == pytest.approx(teamwork.f1(1.0) ** 3)

    @pytest.mark.parametrize("k", range(1, 6))
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("z", [0.0, 0.5, 1.0])
    def test_bracket(self, k, r, z):
        cov = circuits.ghz_input_cm(k, z)
        f, _ = teamwork.teleport_fidelity(cov, ChannelSpec((r,) * k))
        assert f == pytest.approx(ghz_fidelity(k, r, z), rel=1e-11)
        lo, hi = teamwork.fk_bounds(k, r, z)
        assert lo - 1e-9 <= f <= hi + 1e-9

    def test_bad_k(self):
        with pytest.raises(ValueError):
            teamwork.fk_bounds(0, 1.0, 0.0)


class TestTeamworkFidelity:
    @pytest.mark.parametrize("a", [(0, 3), (0, 1), (0, 2)])
    def test_psi4_matches_pair_formula(self, a):
        r, t, z = 1.0, 1 / 3, 2.0
        rep = teamwork.teamwork_fidelity(circuits.psi4(r, t), Bipartition(a, 4), circuits.tmss_cm(z))
        r_a = circuits.psi4_effective_squeezing(r, t, a)
        assert rep.fidelity == pytest.approx(teamwork.eq1_fidelity(r_a, z), abs=1e-9)

    def test_graph_resource(self):
        om = graphs.toeplitz_family(6)
        p = Bipartition((0, 2), 6)
        a = teamwork.teamwork_fidelity(om, p, circuits.vacuum(2), r=1.0)
        b = teamwork.teamwork_fidelity(graphs.graph_state_cm(om, 1.0), p, circuits.vacuum(2))
        assert a.fidelity == b.fidelity
        with pytest.raises(ValueError):
            teamwork.teamwork_fidelity(om, p, circuits.vacuum(2))

    def test_single_tmss_vacuum(self):
        rep = teamwork.teamwork_fidelity(circuits.tmss_cm(1.0), Bipartition((0,), 2), circuits.vacuum(1))
        assert rep.fidelity == pytest.approx(teamwork.f1(1.0), abs=1e-12)

    def test_assignment_reported_and_matters(self):
        om = graphs.random_graph(5, seed=4)
        cov = graphs.graph_state_cm(om, 0.8)
        p = Bipartition((0, 1), 5)
        inp = circuits.ghz_input_cm(2, 0.3)  # symmetric input: assignment is irrelevant
        x = teamwork.teamwork_fidelity(cov, p, inp)
        y = teamwork.teamwork_fidelity(cov, p, inp, assignment=[1, 0])
        assert x.fidelity == pytest.approx(y.fidelity, rel=1e-12)
        skew = circuits.single_mode_squeezer(0, 3.0, 2).apply(circuits.tmss_cm(0.4))
        u = teamwork.teamwork_fidelity(cov, p, skew)
        v = teamwork.teamwork_fidelity(cov, p, skew, assignment=[1, 0])
        if len(set(np.round(u.channels.squeezings, 9))) == 2:
            assert u.fidelity != pytest.approx(v.fidelity, rel=1e-6)
        d = v.to_dict()
        assert d["assignment"] == [2, 1] and d["block_a"] == [1, 2]

    def test_errors(self):
        with pytest.raises(ValueError):
            teamwork.teamwork_fidelity(circuits.psi4(1, 0.3), Bipartition((0, 1), 4), circuits.vacuum(1))
        with pytest.raises(sp.NotPhysicalError):
            teamwork.teamwork_fidelity(circuits.psi4(1, 0.3), Bipartition((0,), 4), 3 * np.eye(2))
        with pytest.raises(sp.NotPhysicalError):
            teamwork.teamwork_fidelity(3 * np.eye(8), Bipartition((0,), 4), np.eye(2))
        with pytest.raises(ValueError):
            teamwork.teamwork_fidelity(circuits.psi4(1, 0.3), Bipartition((0, 1), 4), np.eye(4), assignment=[0, 0])

    def test_fidelity_at_most_one(self, rng):
        for _ in range(30):
            om = graphs.random_graph(5, seed=int(rng.integers(1 << 30)))
            rep = teamwork.teamwork_fidelity(graphs.graph_state_cm(om, float(rng.uniform(0.1, 2))), Bipartition((0, 1), 5),
                                             circuits.ghz_input_cm(2, float(rng.uniform(0, 1))))
            assert 0 <= rep.fidelity <= 1 + 1e-9


class TestCurve:
    def test_rows_and_order(self):
        rows = teamwork.fidelity_curve(1 / 3, 2.0, np.linspace(0, 3, 31))
        arr = np.array(rows)
        assert arr.shape == (31, 4)
        assert np.all(np.diff(arr[:, 1:], axis=0) > 0)
        # for t < 1/2 the (1,2) split keeps more squeezing than the (1,3) split
        r12 = circuits.psi4_effective_squeezing(1.0, 1 / 3, (0, 1))
        r13 = circuits.psi4_effective_squeezing(1.0, 1 / 3, (0, 2))
        assert 1.0 > r12 > r13
        assert np.all(arr[1:, 1] >= arr[1:, 2]) and np.all(arr[1:, 2] >= arr[1:, 3])

    def test_r_zero_row(self):
        (row,) = teamwork.fidelity_curve(1 / 3, 2.0, [0.0])
        expected = 1 / (2 * (1 + np.cosh(4.0)))
        np.testing.assert_allclose(row[1:], expected, rtol=1e-12)

    def test_csv(self, tmp_path):
        rows = teamwork.fidelity_curve(0.3, 1.0, [0.0, 0.5])
        text = teamwork.format_curve_csv(rows)
        lines = text.splitlines()
        assert lines[0] == "r,F_14,F_12,F_13" and len(lines) == 3
        assert float(lines[2].split(",")[1]) == rows[1][1]  # full double precision survives
        path = tmp_path / "c.csv"
        teamwork.write_curve_csv(rows, path)
        assert path.read_text() == text

    @pytest.mark.parametrize("t,z,grid", [(0.0, 1.0, [1.0]), (1.0, 1.0, [1.0]), (0.5, -1.0, [1.0]), (0.5, 1.0, [])])
    def test_errors(self, t, z, grid):
        with pytest.raises(ValueError):
            teamwork.fidelity_curve(t, z, grid)
