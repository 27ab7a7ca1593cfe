import numpy as np
import pytest

from gridqmc import (
    ConfigurationError,
    DisconnectedNetworkError,
    Line,
    Network,
    build_ptdf,
    rate_scale_ptdf,
)


def nodal_flow_solve(network: Network, injections: dict[int, float]) -> np.ndarray:
    """Independent brute-force DC solve: nodal angles, then branch flows."""
    buses = list(network.bus_ids)
    pos = {b: i for i, b in enumerate(buses)}
    n = len(buses)
    b_nodal = np.zeros((n, n))
    for line in network.lines:
        f, t = pos[line.from_bus], pos[line.to_bus]
        b_nodal[f, f] += line.susceptance
        b_nodal[t, t] += line.susceptance
        b_nodal[f, t] -= line.susceptance
        b_nodal[t, f] -= line.susceptance
    keep = [i for i in range(n) if buses[i] != network.slack_bus]
    p = np.array([injections.get(buses[i], 0.0) for i in keep])
    theta = np.zeros(n)
    theta[keep] = np.linalg.solve(b_nodal[np.ix_(keep, keep)], p)
    return np.array(
        [line.susceptance * (theta[pos[line.from_bus]] - theta[pos[line.to_bus]]) for line in network.lines]
    )


def test_two_bus_single_line():
    net = Network((1, 2), slack_bus=2, lines=(Line(1, 2, susceptance=0.37, rating_mw=1.0),))
    ptdf = build_ptdf(net)
    assert ptdf.h[0, 0] == pytest.approx(1.0)
    assert ptdf.h[0, 1] == 0.0  # slack column


def test_three_bus_ring_column(three_bus_ring):
    ptdf = build_ptdf(three_bus_ring)
    col = ptdf.h[:, 0]
    assert col == pytest.approx([1 / 3, 2 / 3, 1 / 3])


def test_radial_chain_series_path():
    net = Network(
        (1, 2, 3),
        slack_bus=3,
        lines=(Line(1, 2, susceptance=2.0, rating_mw=1.0), Line(2, 3, susceptance=0.5, rating_mw=1.0)),
    )
    ptdf = build_ptdf(net)
    assert ptdf.h[:, 0] == pytest.approx([1.0, 1.0])


def test_slack_column_is_zero(three_bus_ring):
    ptdf = build_ptdf(three_bus_ring)
    slack_col = ptdf.bus_order.index(three_bus_ring.slack_bus)
    assert np.all(ptdf.h[:, slack_col] == 0.0)
    assert np.all(np.isfinite(ptdf.h))


def test_matches_nodal_solve_random(three_bus_ring):
    rng = np.random.default_rng(5)
    ptdf = build_ptdf(three_bus_ring)
    for _ in range(25):
        p = rng.normal(size=2)
        injections = {1: p[0], 2: p[1]}
        expected = nodal_flow_solve(three_bus_ring, injections)
        got = ptdf.h @ np.array([p[0], p[1], 0.0])
        assert got == pytest.approx(expected, abs=1e-10)


def test_flow_conservation(three_bus_ring):
    # unit injection at bus 1 leaves bus 1 and lands on the slack
    ptdf = build_ptdf(three_bus_ring)
    flows = ptdf.h @ np.array([1.0, 0.0, 0.0])
    net_out = {b: 0.0 for b in three_bus_ring.bus_ids}
    for j, line in enumerate(three_bus_ring.lines):
        net_out[line.from_bus] += flows[j]
        net_out[line.to_bus] -= flows[j]
    assert net_out[1] == pytest.approx(1.0, abs=1e-10)
    assert net_out[3] == pytest.approx(-1.0, abs=1e-10)


def test_rate_scale_examples(three_bus_ring):
    ptdf = build_ptdf(three_bus_ring)
    rated = rate_scale_ptdf(ptdf, three_bus_ring)
    assert rated.rated
    assert rated.h[:, 0] == pytest.approx([1 / 6, 1 / 3, 1 / 6])


def test_rate_scale_roundtrip(three_bus_ring):
    ptdf = build_ptdf(three_bus_ring)
    rated = rate_scale_ptdf(ptdf, three_bus_ring)
    ratings = np.array([line.rating_mw for line in three_bus_ring.lines])
    assert np.array_equal(rated.h * ratings[:, None], ptdf.h)


def test_rate_scale_rejects_rated(three_bus_ring):
    rated = rate_scale_ptdf(build_ptdf(three_bus_ring), three_bus_ring)
    with pytest.raises(ConfigurationError):
        rate_scale_ptdf(rated, three_bus_ring)


def test_row_accessor_excludes_slack(three_bus_ring):
    rated = rate_scale_ptdf(build_ptdf(three_bus_ring), three_bus_ring)
    row = rated.row("1-2")
    assert row.shape == (2,)
    assert row == pytest.approx([1 / 6, -1 / 6])


def test_disconnected_network_rejected():
    with pytest.raises(DisconnectedNetworkError):
        Network((1, 2, 3, 4), slack_bus=1, lines=(Line(1, 2, 1.0, 1.0), Line(3, 4, 1.0, 1.0)))


@pytest.mark.parametrize(
    "line",
    [
        dict(from_bus=1, to_bus=1, susceptance=1.0, rating_mw=1.0),
        dict(from_bus=1, to_bus=2, susceptance=-1.0, rating_mw=1.0),
        dict(from_bus=1, to_bus=2, susceptance=1.0, rating_mw=0.0),
    ],
)
def test_bad_line_rejected(line):
    with pytest.raises(ConfigurationError):
        Line(**line)


def test_missing_slack_rejected():
    with pytest.raises(ConfigurationError):
        Network((1, 2), slack_bus=9, lines=(Line(1, 2, 1.0, 1.0),))
