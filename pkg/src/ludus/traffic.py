"""Atomic congestion games on networks (unit demand, explicit path sets)."""

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

__all__ = [
    "Edge",
    "CongestionInstance",
    "FlowState",
    "TrafficError",
    "edge_loads",
    "potential",
    "player_cost",
    "player_cost_weighted",
    "total_cost",
    "best_response_dynamics",
    "is_nash_flow",
    "nash_flows",
    "braess_network",
    "braess_demo",
]


class TrafficError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    """Directed edge with cost table ``costs[x - 1] = c_e(x)`` for loads ``x >= 1``."""

    tail: str
    head: str
    costs: tuple

    @classmethod
    def affine(cls, tail, head, slope, offset, max_load):
        return cls(tail, head, tuple(slope * x + offset for x in range(1, max_load + 1)))

    def cost(self, load: int):
        if load < 1:
            return 0
        if load > len(self.costs):
            raise TrafficError(f"load {load} exceeds cost table of edge {self.tail}->{self.head}")
        return self.costs[load - 1]


@dataclass(frozen=True)
class CongestionInstance:
    edges: Mapping[str, Edge]
    paths: tuple  # paths[i] = tuple of paths (each a tuple of edge names) for player i
    origins: tuple = ()
    destinations: tuple = ()

    def __post_init__(self):
        for i, options in enumerate(self.paths):
            if not options:
                raise TrafficError(f"player {i} has no path")
            for path in options:
                self._check_path(i, path)

    def _check_path(self, i, path):
        for name in path:
            if name not in self.edges:
                raise TrafficError(f"unknown edge {name!r} in a path of player {i}")
        chain = [self.edges[name] for name in path]
        for a, b in zip(chain, chain[1:]):
            if a.head != b.tail:
                raise TrafficError(f"path {path} of player {i} is not contiguous")
        if self.origins and chain and chain[0].tail != self.origins[i]:
            raise TrafficError(f"path {path} does not start at {self.origins[i]}")
        if self.destinations and chain and chain[-1].head != self.destinations[i]:
            raise TrafficError(f"path {path} does not end at {self.destinations[i]}")

    @property
    def players(self) -> int:
        return len(self.paths)

    def with_costs(self, name, costs):
        edges = dict(self.edges)
        e = edges[name]
        edges[name] = Edge(e.tail, e.head, tuple(costs))
        return CongestionInstance(edges, self.paths, self.origins, self.destinations)


@dataclass(frozen=True)
class FlowState:
    """``assignment[i]`` is the index of player ``i``'s path within its path set."""

    assignment: tuple


def edge_loads(inst: CongestionInstance, flow: FlowState, skip: int | None = None) -> dict:
    loads = {name: 0 for name in inst.edges}
    for i, k in enumerate(flow.assignment):
        if i != skip:
            for name in inst.paths[i][k]:
                loads[name] += 1
    return loads


def _phi(inst, loads):
    return sum(sum(inst.edges[name].cost(t) for t in range(1, x + 1)) for name, x in loads.items())


def potential(inst: CongestionInstance, flow: FlowState):
    """Aggregated cost ``sum_e sum_{t=1}^{x_e} c_e(t)``."""
    return _phi(inst, edge_loads(inst, flow))


def player_cost(inst: CongestionInstance, flow: FlowState, player: int):
    """Cost ``sum_{e in P} c_e(x_e)`` of the player's chosen path."""
    loads = edge_loads(inst, flow)
    return sum(inst.edges[name].cost(loads[name]) for name in inst.paths[player][flow.assignment[player]])


def player_cost_weighted(inst: CongestionInstance, flow: FlowState, player: int):
    """Load-weighted variant ``sum_{e in P} c_e(x_e) x_e``."""
    loads = edge_loads(inst, flow)
    return sum(
        inst.edges[name].cost(loads[name]) * loads[name] for name in inst.paths[player][flow.assignment[player]]
    )


def total_cost(inst: CongestionInstance, flow: FlowState):
    """``sum_e c_e(x_e) x_e``."""
    return sum(inst.edges[name].cost(x) * x for name, x in edge_loads(inst, flow).items())


def _path_cost_given(inst, others, path):
    # cost of ``path`` when joining the loads ``others`` of everybody else
    return sum(inst.edges[name].cost(others[name] + 1) for name in path)


def _improving_switch(inst, flow, i):
    others = edge_loads(inst, flow, skip=i)
    options = inst.paths[i]
    current = _path_cost_given(inst, others, options[flow.assignment[i]])
    for k, path in enumerate(options):
        if _path_cost_given(inst, others, path) < current:
            return k
    return None


def is_nash_flow(inst: CongestionInstance, flow: FlowState) -> bool:
    """No player has a strictly cheaper path with all others fixed."""
    return all(_improving_switch(inst, flow, i) is None for i in range(inst.players))


@dataclass(frozen=True)
class DynamicsResult:
    flow: FlowState
    iterations: int
    converged: bool
    potentials: tuple = field(default=())


def best_response_dynamics(inst: CongestionInstance, initial: FlowState | None = None,
                           max_iters: int = 10000) -> DynamicsResult:
    """Let the first player (by index) with a strictly improving path switch to its
    first (by index) strictly cheaper path, until nobody can improve.

    Each switch lowers the potential, so the loop ends at a Nash flow.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    flow = initial or FlowState((0,) * inst.players)
    trace = [potential(inst, flow)]
    for it in range(max_iters):
        for i in range(inst.players):
            k = _improving_switch(inst, flow, i)
            if k is not None:
                a = list(flow.assignment)
                a[i] = k
                flow = FlowState(tuple(a))
                trace.append(potential(inst, flow))
                break
        else:
            return DynamicsResult(flow, it, True, tuple(trace))
    return DynamicsResult(flow, max_iters, is_nash_flow(inst, flow), tuple(trace))


def nash_flows(inst: CongestionInstance) -> list:
    """All Nash flows by enumeration (small instances only)."""
    return [
        FlowState(a)
        for a in itertools.product(*(range(len(p)) for p in inst.paths))
        if is_nash_flow(inst, FlowState(a))
    ]


BRAESS_PATHS = (("sr", "rt"), ("sq", "qt"), ("sr", "rq", "qt"))


def braess_network(rq_cost: int = 10, players: int = 4) -> CongestionInstance:
    """Four-node network s, r, q, t with paths P = s-r-t, P~ = s-q-t, Q = s-r-q-t."""
    edges = {
        "sr": Edge.affine("s", "r", 1, 0, players),
        "sq": Edge.affine("s", "q", 0, 4, players),
        "rt": Edge.affine("r", "t", 0, 4, players),
        "qt": Edge.affine("q", "t", 1, 0, players),
        "rq": Edge.affine("r", "q", 0, rq_cost, players),
    }
    return CongestionInstance(edges, (BRAESS_PATHS,) * players, ("s",) * players, ("t",) * players)


@dataclass(frozen=True)
class BraessReport:
    """``improved_total`` is the total right after the first improving switch onto
    the new link; ``equilibrium_total`` is where best-response dynamics settle."""

    base_flow: FlowState
    base_total: int
    switch_player: int
    switch_costs: tuple
    improved_flow: FlowState
    improved_total: int
    equilibrium_flow: FlowState
    equilibrium_total: int
    base_trace: tuple
    improved_trace: tuple


def braess_demo(initial: Sequence[int] | None = None) -> BraessReport:
    """Equilibrate the network, make the r->q link free, move one P-user onto Q,
    then run the dynamics from the base equilibrium again."""
    base = braess_network(10)
    start = FlowState(tuple(initial)) if initial is not None else None
    r0 = best_response_dynamics(base, start)
    improved = braess_network(0)
    # first P-user; switching to Q is strictly improving once r->q is free
    player = r0.flow.assignment.index(0)
    k = 2
    a = list(r0.flow.assignment)
    before = player_cost(improved, r0.flow, player)
    a[player] = k
    switched = FlowState(tuple(a))
    after = player_cost(improved, switched, player)
    r1 = best_response_dynamics(improved, r0.flow)
    return BraessReport(
        r0.flow, total_cost(base, r0.flow), player, (before, after), switched, total_cost(improved, switched),
        r1.flow, total_cost(improved, r1.flow), r0.potentials, r1.potentials,
    )
