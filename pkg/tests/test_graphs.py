import json
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvteamwork import circuits, graphs
from cvteamwork import symplectic as sp
from cvteamwork.graphs import AdjacencyFormatError, AdjacencyMatrix


def mp_symplectic_deviation(cov, dps=30):
    """max |nu - 1| of a float matrix evaluated in extended precision."""
    with mp.workdps(dps):
        n = cov.shape[0] // 2
        M = mp.matrix(cov.tolist())
        J = mp.matrix(sp.symplectic_form(n).tolist())
        ev = mp.eig((J * M) ** 2, left=False, right=False)
        return float(max(abs(mp.sqrt(-mp.re(e)) - 1) for e in ev))


class TestAdjacencyMatrix:
    def test_exact_entries(self):
        om = AdjacencyMatrix.from_rows([[0, "1/3"], [Fraction(1, 3), 0]])
        assert om[0, 1] == Fraction(1, 3)
        assert om.integer_rows() == [[0, 1], [1, 0]]

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            AdjacencyMatrix.from_rows([[0, 1], [2, 0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError, match="diagonal"):
            AdjacencyMatrix.from_rows([[1, 1], [1, 0]])

    def test_non_integer_float_rejected(self):
        with pytest.raises(TypeError):
            AdjacencyMatrix.from_rows([[0, 0.5], [0.5, 0]])


class TestGraphStateCovariance:
    def test_unconnected(self):
        om = AdjacencyMatrix.from_rows([[0, 0], [0, 0]])
        e = np.e
        np.testing.assert_allclose(graphs.graph_state_cm(om, 1.0), np.diag([e**2, e**2, e**-2, e**-2]), rtol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_blocks_literal(self, seed):
        om = graphs.random_graph(6, seed=seed)
        r = 0.9
        w = om.to_numpy()
        cov = graphs.graph_state_cm(om, r)
        np.testing.assert_allclose(cov[:6, :6], np.exp(2 * r) * np.eye(6), atol=1e-12)
        np.testing.assert_allclose(cov[:6, 6:], np.exp(2 * r) * w, atol=1e-12)
        np.testing.assert_allclose(cov[6:, 6:], np.exp(-2 * r) * np.eye(6) + np.exp(2 * r) * w @ w, atol=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_inverse_of_wigner_quadratic_form(self, seed):
        om = graphs.random_graph(5, seed=seed)
        r = 0.7
        prod = graphs.graph_state_cm(om, r) @ graphs.graph_state_precision(om, r)
        np.testing.assert_allclose(prod, np.eye(10), atol=1e-9)

    def test_closed_form_is_exactly_pure(self):
        # the closed form evaluated in 40-digit arithmetic from exact weights
        om = graphs.twenty_mode_fixture()
        n, r = om.n, mp.mpf(3)
        with mp.workdps(40):
            w = mp.matrix([[int(v) for v in row] for row in om.entries])
            g = mp.exp(2 * r)
            cov = mp.zeros(2 * n, 2 * n)
            w2 = w * w
            for i in range(n):
                for j in range(n):
                    cov[i, j] = g * (i == j)
                    cov[i, n + j] = cov[n + i, j] = g * w[i, j]
                    cov[n + i, n + j] = g * w2[i, j] + (i == j) / g
            J = mp.matrix(sp.symplectic_form(n).tolist())
            residual = max(abs(x) for x in (cov * J * cov - J))
        assert residual < mp.mpf(10) ** -25

    def test_nullifier_variance(self):
        om = graphs.toeplitz_family(6)
        r = 1.2
        cov = graphs.graph_state_cm(om, r)
        for a in range(6):
            v = sp.variance_of_linear_combination(cov, graphs.nullifier(om, a))
            assert v == pytest.approx(np.exp(-2 * r), rel=1e-10)
            x = np.zeros(12)
            x[a] = 1
            assert sp.variance_of_linear_combination(cov, x) == pytest.approx(np.exp(2 * r), rel=1e-14)

    def test_rejects_bad_squeezing(self):
        with pytest.raises(ValueError):
            graphs.graph_state_cm(graphs.complete_unweighted(3), 0.0)


@pytest.mark.parametrize("r", [0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
@pytest.mark.parametrize("n", [4, 8, 12, 16, 20])
def test_graph_state_purity(n, r):
    om = graphs.twenty_mode_fixture() if n == 20 else graphs.random_graph(n, seed=n)
    cov = graphs.graph_state_cm(om, r)
    dev = float(np.max(np.abs(sp.symplectic_eigenvalues(cov) - 1)))
    if dev > 1e-9:
        floor = mp_symplectic_deviation(cov)
        if floor > 1e-10 and dev < 5 * floor:
            pytest.xfail(f"float64 input is itself {floor:.1e} from pure (extended-precision check); got {dev:.1e}")
    assert dev <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 9), r=st.floats(0.1, 1.5))
def test_circuit_matches_closed_form_in_any_edge_order(seed, n, r):
    om = graphs.random_graph(n, seed=seed)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if om[a, b] != 0]
    order = list(np.random.default_rng(seed).permutation(len(edges)))
    built = circuits.graph_state_circuit(om, r, [edges[k] for k in order])
    np.testing.assert_allclose(built, graphs.graph_state_cm(om, r), rtol=0, atol=1e-12 * np.exp(2 * r) * max(1, n) ** 3)


class TestFamilies:
    def test_toeplitz_four(self):
        om = graphs.toeplitz_family(4)
        for a in range(4):
            for b in range(4):
                expected = {0: 0, 1: 1, 2: 0, 3: -4}[abs(a - b)]
                assert om[a, b] == expected

    def test_toeplitz_six_corner(self):
        assert graphs.toeplitz_family(6)[0, 5] == 9

    def test_toeplitz_offsets(self):
        om = graphs.toeplitz_family(9)
        assert [om[0, d] for d in range(9)] == [0, 1, 0, -4, 0, 9, 0, -16, 0]

    def test_toeplitz_too_small(self):
        with pytest.raises(ValueError):
            graphs.toeplitz_family(1)

    def test_complete(self):
        assert graphs.complete_unweighted(2).entries == ((0, 1), (1, 0))
        om = graphs.complete_unweighted(4)
        assert om.block([0, 1], [2, 3]) == [[1, 1], [1, 1]]
        assert all(sum(row) == 3 for row in om.entries)
        with pytest.raises(ValueError):
            graphs.complete_unweighted(1)

    def test_random_determinism_and_range(self):
        a = graphs.random_graph(12, seed=99)
        assert a == graphs.random_graph(12, seed=99)
        assert a != graphs.random_graph(12, seed=100)
        assert all(-12 <= v <= 12 for row in a.entries for v in row)
        b = graphs.random_graph(6, weight_bound=2, seed=1)
        assert all(-2 <= v <= 2 for row in b.entries for v in row)

    def test_random_invalid_bound(self):
        with pytest.raises(ValueError):
            graphs.random_graph(5, weight_bound=0)

    def test_random_weight_histogram(self):
        # chi-square sanity of the pooled off-diagonal draws (41 bins for N = 20)
        counts = np.zeros(41)
        for seed in range(50):
            w = graphs.random_graph(20, seed=seed).to_numpy()
            vals = w[np.triu_indices(20, 1)].astype(int)
            counts += np.bincount(vals + 20, minlength=41)
        expected = counts.sum() / 41
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < 80  # 40 dof; p ~ 3e-4

    def test_twenty_mode_fixture(self):
        om = graphs.twenty_mode_fixture()
        assert om.n == 20
        assert (om[0, 1], om[0, 4], om[0, 19], om[19, 18]) == (1, 16, -10, 2)
        assert om.is_integer()


class TestFileFormat:
    def test_roundtrip_text(self, tmp_path):
        om = AdjacencyMatrix.from_rows([[0, "-1/2", 3], ["-1/2", 0, 0], [3, 0, 0]])
        path = tmp_path / "g.txt"
        graphs.write_adjacency(om, path)
        assert graphs.read_adjacency(path) == om
        assert path.read_text().splitlines()[0] == "3"

    def test_roundtrip_json(self, tmp_path):
        om = graphs.random_graph(5, seed=3)
        path = tmp_path / "g.json"
        graphs.write_adjacency(om, path, fmt="json")
        doc = json.loads(path.read_text())
        assert doc["n"] == 5
        assert graphs.read_adjacency(path) == om

    def test_shipped_fixture_is_bit_exact(self):
        om = graphs.twenty_mode_fixture()
        assert graphs.parse_adjacency(graphs.format_adjacency(om)) == om

    @pytest.mark.parametrize(
        "text,line,column",
        [
            ("3\n0 1 0\n1 0 1\n", 4, None),
            ("2\n0 x\n1 0\n", 2, 2),
            ("2\n0 1 5\n1 0\n", 2, 4),
            ("two\n", 1, 1),
            ("", 1, None),
        ],
    )
    def test_diagnostics(self, text, line, column):
        with pytest.raises(AdjacencyFormatError) as info:
            graphs.parse_adjacency(text)
        assert info.value.line == line
        assert info.value.column == column

    def test_asymmetric_file(self):
        with pytest.raises(AdjacencyFormatError, match="symmetric"):
            graphs.parse_adjacency("2\n0 1\n2 0\n")

    def test_bad_json(self):
        with pytest.raises(AdjacencyFormatError):
            graphs.parse_adjacency('{"n": 2, "weights": [[0, 1.5], [1.5, 0]]}')
