"""``ludus`` command line.

Results go to stdout as compact JSON (or ``key: value`` lines with
``--format table``).  Exit status is 0 on success, 1 when the input is
rejected by the mathematics, 2 on usage errors.  Strategy and pile indices in
output are 1-based.
"""

import argparse
import hashlib
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import betting, boltzmann, combinatorial as comb, coopgame as coop, epistemic, interaction, lp, traffic, zerosum
from .serialize import (
    any_float,
    dumps,
    parse_complex_matrix,
    parse_complex_vector,
    parse_mask,
    parse_number,
    parse_numbers,
    to_jsonable,
)

__all__ = ["main", "build_parser", "DEMOS"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# --- input helpers ------------------------------------------------------------


def _load(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _game_from_json(data) -> coop.TUGame:
    n = int(data["n"])
    raw = data["values"]
    if isinstance(raw, dict):
        dense = [0] * (1 << n)
        for key, val in raw.items():
            dense[parse_mask(key)] = val
        raw = dense
    exact = not any_float(raw)
    vals = [parse_number(x, exact) for x in raw]
    return coop.TUGame(n, np.array(vals, dtype=object if exact else np.float64), exact=exact)


def _game_to_json(g: coop.TUGame):
    return {"n": g.n, "values": list(g.values)}


def _potential(data):
    if isinstance(data, dict):
        values = data["values"]
        radices = data.get("radices")
    else:
        values, radices = data, None
    return np.array([float(parse_number(x, False)) for x in values]), radices


def _traffic_from_json(data) -> traffic.CongestionInstance:
    players = data["players"]
    max_load = len(players)
    edges = {}
    for e in data["edges"]:
        if "affine" in e:
            a, b = (parse_number(x) for x in e["affine"])
            edge = traffic.Edge.affine(e["from"], e["to"], a, b, max_load)
        elif "table" in e:
            edge = traffic.Edge(e["from"], e["to"], tuple(parse_number(x) for x in e["table"]))
        else:
            raise ValueError(f"edge {e.get('name')!r} needs an affine or table cost")
        edges[e["name"]] = edge
    nodes = set(data.get("nodes", ()))
    if nodes:
        for name, edge in edges.items():
            if edge.tail not in nodes or edge.head not in nodes:
                raise ValueError(f"edge {name!r} uses an unknown node")
    return traffic.CongestionInstance(
        edges,
        tuple(tuple(tuple(p) for p in pl["paths"]) for pl in players),
        tuple(pl["origin"] for pl in players),
        tuple(pl["destination"] for pl in players),
    )


def _agents(data):
    m = int(data["states"])
    agents = []
    for cells in data["agents"]:
        P = epistemic.InfoFunction([parse_mask(c) for c in cells])
        if P.m != m:
            raise ValueError("every agent needs one cell per state")
        agents.append(P)
    return m, agents


# --- commands -------------------------------------------------------------------


def cmd_lp_solve(args):
    data = _load(args.file)
    prog = lp.LinearProgram(data["c"], data["A"], data["b"], data.get("sense", "max"))
    sol = lp.solve(prog)
    out = {"status": sol.status}
    if sol.optimal:
        out.update(x=sol.primal, y=sol.dual, value=sol.value, certificate=lp.duality_certificate(prog, sol))
    return out


def cmd_zerosum_solve(args):
    data = _load(args.file)
    if "U" in data:
        g = zerosum.MatrixGame(data["U"])
        profile, value = zerosum.solve_randomized(g)
        return {"x": profile.row_dist, "y": profile.col_dist, "value": value}
    g = zerosum.BimatrixGame(data["A"], data["B"])
    return _bimatrix_report(g)


def _bimatrix_report(g):
    t = g.tensors()
    m, n = len(g.row_payoff), len(g.row_payoff[0])
    out = {}
    for mode in zerosum.Mode:
        cells = []
        for i in range(m):
            for j in range(n):
                prof = [[int(k == i) for k in range(m)], [int(k == j) for k in range(n)]]
                if zerosum.verify_mixed_equilibrium(t, prof, mode):
                    cells.append([i + 1, j + 1])
        out[f"{mode.value}_equilibria"] = cells
    return out


def cmd_zerosum_saddle(args):
    g = zerosum.MatrixGame(_load(args.file)["U"])
    cells = zerosum.pure_equilibria(g)
    out = {"saddles": [[i + 1, j + 1] for i, j in cells]}
    if cells:
        out["value"] = g.payoff[cells[0][0]][cells[0][1]]
    return out


def _comb_target(args):
    if args.nim is not None:
        piles = [int(x) for x in args.nim.split(",") if x.strip()]
        return comb.nim(piles), piles
    if args.frogs is not None:
        n, k = (int(x) for x in args.frogs.split(","))
        return comb.frogs(n, k), None
    if args.subtract is not None:
        n, *allowed = (int(x) for x in args.subtract.split(","))
        return comb.subtraction_game(n, allowed), None
    if args.de_bruijn is not None:
        return comb.de_bruijn(args.de_bruijn), None
    raise UsageError("give one of --nim, --frogs, --subtract, --de-bruijn")


def cmd_comb_grundy(args):
    g, piles = _comb_target(args)
    value = comb.nim_value(piles) if piles is not None else comb.grundy(g)
    return {"grundy": value, "winner": "second" if value == 0 else "first"}


def cmd_comb_outcome(args):
    g, _ = _comb_target(args)
    rule = comb.Rule.MISERE if args.misere else comb.Rule.NORMAL
    first = comb.outcome(g, comb.Player.LEFT, rule)
    return {"winner": "first" if first is comb.Player.LEFT else "second", "rule": rule}


def cmd_comb_move(args):
    if args.nim is None:
        raise UsageError("move needs --nim")
    piles = [int(x) for x in args.nim.split(",") if x.strip()]
    mv = comb.winning_move(piles)
    if mv is None:
        return {"grundy": 0, "winner": "second", "move": None}
    k, size = mv
    return {
        "grundy": comb.nim_value(piles),
        "winner": "first",
        "move": {"pile": k + 1, "remove": piles[k] - size, "leave": size},
    }


def cmd_coop_shapley(args):
    return {"shapley": coop.shapley(_game_from_json(_load(args.file)))}


def cmd_coop_banzhaf(args):
    return {"banzhaf": coop.banzhaf(_game_from_json(_load(args.file)))}


def cmd_coop_core_check(args):
    g = _game_from_json(_load(args.file))
    x = parse_numbers(args.alloc, g.exact)
    tol = 1e-9 if args.tolerance is None else args.tolerance
    return {"in_core": coop.core_contains(g, x, args.mode, tol)}


def cmd_coop_core_nonempty(args):
    res = coop.core_nonempty(_game_from_json(_load(args.file)))
    return {"nonempty": res.nonempty, "witness": res.witness, "deficit": res.deficit}


def cmd_coop_monge(args):
    g = _game_from_json(_load(args.file))
    c = parse_numbers(args.c)
    if len(c) != g.n:
        raise ValueError(f"--c needs {g.n} weights")
    dual = coop.monge_dual(g, c)
    return {
        "order": [i + 1 for i in coop.monge_order(c)],
        "primal": coop.monge_primal(g, c),
        "dual": [{"coalition": [i + 1 for i in coop.members(s, g.n)], "weight": w} for s, w in dual.items()],
        "extension": coop.monge_extension(g, c),
    }


def cmd_coop_gen_voting(args):
    return _game_to_json(coop.voting_game(parse_numbers(args.weights), parse_number(args.threshold)))


def cmd_boltz_value(args):
    g = _game_from_json(_load(args.file))
    return {"value": boltzmann.boltzmann_value(g, args.T, args.convention)}


def cmd_boltz_solve_t(args):
    v, _ = _potential(_load(args.file))
    return {"T": boltzmann.temperature_solve(v, args.mu)}


def _schedule(text):
    kind, *params = text.split(":")
    if kind == "geometric" and len(params) == 2:
        return boltzmann.geometric_schedule(float(params[0]), float(params[1]))
    if kind == "constant" and len(params) == 1:
        t = float(params[0])
        return lambda _: t
    raise UsageError("schedule must be geometric:<start>:<factor> or constant:<T>")


def cmd_boltz_anneal(args):
    if args.seed is None:
        raise UsageError("anneal is stochastic and needs --seed")
    v, radices = _potential(_load(args.file))
    res = boltzmann.simulated_annealing(v, _schedule(args.schedule), args.steps, args.seed, radices)
    return {"state": res.state, "value": res.value, "final": int(res.trajectory[-1])}


def cmd_bet_kelly(args):
    bet = betting.SimpleBet(parse_number(args.p), parse_number(args.rho))
    return {"fraction": betting.kelly_fraction(bet)}


def cmd_bet_alternatives(args):
    data = _load(args.file)
    bet = betting.AlternativesBet(parse_numbers(data["p"]), parse_numbers(data["rho"]))
    alloc, util = betting.optimal_alternatives(bet)
    return {"allocation": alloc, "log_utility": util}


def cmd_bet_doubling(args):
    rep = betting.doubling_analysis(parse_number(args.budget), parse_number(args.win))
    stakes, gain = betting.doubling_stakes(rep.max_rounds)
    return {
        "rounds": rep.max_rounds,
        "success": rep.success_prob,
        "success_float": float(rep.success_prob),
        "ruin": rep.ruin_prob,
        "net_gain": gain,
    }


def cmd_bet_channel(args):
    data = _load(args.file)
    t = np.array([[float(parse_number(x, False)) for x in row] for row in data["transition"]])
    tol = 1e-9 if args.tolerance is None else args.tolerance
    out = {}
    if "report" in data:
        rep = [float(parse_number(x, False)) for x in data["report"]]
        out["transmission_rate"] = betting.transmission_rate(t, rep)
        out["conditional_entropy"] = betting.conditional_entropy(t, rep)
    cap = betting.channel_capacity(t, tol)
    out.update(capacity=cap.capacity, upper_bound=cap.upper_bound, input=cap.input_dist)
    return out


def cmd_traffic_solve(args):
    inst = _traffic_from_json(_load(args.file))
    res = traffic.best_response_dynamics(inst)
    f = res.flow
    return {
        "paths": [k + 1 for k in f.assignment],
        "loads": traffic.edge_loads(inst, f),
        "player_costs": [traffic.player_cost(inst, f, i) for i in range(inst.players)],
        "total": traffic.total_cost(inst, f),
        "potential": traffic.potential(inst, f),
        "iterations": res.iterations,
        "converged": res.converged,
    }


def cmd_traffic_braess(args):
    r = traffic.braess_demo()
    out = {"base_total": r.base_total, "improved_total": r.improved_total}
    if args.detail:
        out.update(
            switch_costs=r.switch_costs,
            equilibrium_total=r.equilibrium_total,
            equilibrium_paths=[("P", "P~", "Q")[k] for k in r.equilibrium_flow.assignment],
        )
    return out


def cmd_know_ck(args):
    data = _load(args.file)
    m, agents = _agents(data)
    E = parse_mask(data["event"])
    F = epistemic.evident_core(agents, E)
    out = {"core": epistemic.states_of(F)}
    if "state" in data:
        out["common_knowledge"] = bool(F >> int(data["state"]) & 1)
    if "prior" in data and len(agents) == 2:
        rep = epistemic.agreement_scan(agents[0], agents[1], parse_numbers(data["prior"]), E)
        out["agreement"] = {
            "estimates1": rep.estimates1,
            "estimates2": rep.estimates2,
            "disagreement": epistemic.states_of(rep.disagreement),
            "disagreement_ck_states": rep.disagreement_ck_states,
            "pair_ck_states": rep.pair_ck_states,
        }
    return out


def cmd_know_axioms(args):
    _, agents = _agents(_load(args.file))
    return {
        "agents": [
            dict(epistemic.check_axioms(P, 0 if args.seed is None else args.seed).as_dict(), partitional=P.is_partitional)
            for P in agents
        ]
    }


def cmd_know_redhats(args):
    r = epistemic.red_hats_demo()
    return {
        "entropy_before": r.entropy_before,
        "entropy_after": r.entropy_after,
        "resolved_at": {h: c for h, c in zip(r.states, r.resolved_at)},
    }


def _matrix(path):
    data = _load(path)
    return parse_complex_matrix(data["matrix"] if isinstance(data, dict) else data)


def cmd_qi_spectral(args):
    form = interaction.spectral_decomposition(_matrix(args.file))
    return {"values": form.values, "vectors": form.vectors.T, "sweeps": form.sweeps}


def cmd_qi_measure(args):
    c = _matrix(args.matrix)
    data = _load(args.vector)
    v = parse_complex_vector(data["vector"] if isinstance(data, dict) else data)
    meas = interaction.measurement(c, v)
    return {"values": meas.values, "probabilities": meas.probabilities, "expectation": meas.expectation}


def cmd_qi_decompose(args):
    a = _matrix(args.file)
    if np.any(a.imag != 0):
        raise ValueError("decompose expects a real matrix")
    plus, minus = interaction.symmetry_decomposition(a.real)
    return {"plus": plus, "minus": minus, "hermitian": interaction.hermitian_map(a.real)}


# --- demos -------------------------------------------------------------------------


def demo_braess():
    r = traffic.braess_demo()
    return {
        "base_total": r.base_total,
        "switch_costs": r.switch_costs,
        "improved_total": r.improved_total,
        "equilibrium_total": r.equilibrium_total,
        "reference": {"base_total": 24, "switch_costs": [6, 5], "improved_total": 25},
    }


def demo_redhats():
    out = cmd_know_redhats(None)
    out["reference"] = {"entropy_before": 3, "entropy_after": math.log2(7), "RRR": 3}
    return out


def demo_nim1357():
    piles = [1, 3, 5, 7]
    g = comb.nim(piles)
    reply = comb.winning_move([1, 3, 5, 4])
    return {
        "grundy": comb.grundy(g),
        "winner": "second" if comb.second_player_wins(g) else "first",
        "reply_to_7_to_4": {"pile": reply[0] + 1, "leave": reply[1]},
        "reference": {"nim_sum": 0},
    }


def demo_greedy_network():
    g, charges = coop.network_game([[0, 100, 101], [100, 0, 2], [101, 2, 0]])
    return {
        "charges": charges,
        "total": g.values[g.grand],
        "in_cost_core": coop.core_contains(g, charges, coop.CoreMode.COST),
        "reference": {"charges": [100, 2]},
    }


def demo_prisoners():
    g = zerosum.BimatrixGame.from_pairs([[(7, 7), (1, 9)], [(9, 1), (3, 3)]])
    out = _bimatrix_report(g)
    out["utilities_at_2_2"] = [g.row_payoff[1][1], g.col_payoff[1][1]]
    return out


def demo_petersburg():
    r = betting.st_petersburg(100, 20)
    return {
        "expected_return_20": r.expected_return,
        "expected_log2_utility_20": r.expected_log2_utility,
        "prob_recover_fee_100": r.prob_recover_fee,
        "reference": {"expected_return_20": 20, "prob_recover_fee_100": "1/64"},
    }


DEMOS = {
    "braess": demo_braess,
    "redhats": demo_redhats,
    "nim1357": demo_nim1357,
    "greedy-network": demo_greedy_network,
    "prisoners": demo_prisoners,
    "petersburg": demo_petersburg,
}


def cmd_demo(args):
    return DEMOS[args.name]()


# --- parser ------------------------------------------------------------------------


def _globals_parent(suppress: bool):
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="seed for stochastic commands")
    p.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS if suppress else "json")
    p.add_argument("--tolerance", type=float, default=d, help="numeric tolerance where applicable")
    p.add_argument("--report", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="wrap the result with version, input digest and timing")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _globals_parent(True)
    root = _Parser(prog="ludus", description="Game-theory toolkit.", parents=[_globals_parent(False)])
    root.add_argument("--version", action="version", version=f"ludus {__version__}")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_=None):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    def group(name, help_):
        return groups.add_parser(name, help=help_).add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = group("lp", "exact linear programs")
    leaf(g, "solve", cmd_lp_solve).add_argument("file")

    g = group("zerosum", "matrix games")
    leaf(g, "solve", cmd_zerosum_solve).add_argument("file")
    leaf(g, "saddle", cmd_zerosum_saddle).add_argument("file")

    g = group("comb", "combinatorial games")
    for name, func in (("grundy", cmd_comb_grundy), ("outcome", cmd_comb_outcome), ("move", cmd_comb_move)):
        p = leaf(g, name, func)
        p.add_argument("--nim", help="comma-separated pile sizes")
        p.add_argument("--frogs", help="n,k")
        p.add_argument("--subtract", help="n,s1,s2,...")
        p.add_argument("--de-bruijn", type=int, dest="de_bruijn")
        p.add_argument("--misere", action="store_true")

    g = group("coop", "cooperative games")
    leaf(g, "shapley", cmd_coop_shapley).add_argument("file")
    leaf(g, "banzhaf", cmd_coop_banzhaf).add_argument("file")
    p = leaf(g, "core-check", cmd_coop_core_check)
    p.add_argument("file")
    p.add_argument("--alloc", required=True)
    p.add_argument("--mode", choices=[m.value for m in coop.CoreMode], default="profit")
    leaf(g, "core-nonempty", cmd_coop_core_nonempty).add_argument("file")
    p = leaf(g, "monge", cmd_coop_monge)
    p.add_argument("file")
    p.add_argument("--c", required=True)
    gen = g.add_parser("gen", help="game generators").add_subparsers(dest="kind", required=True, parser_class=_Parser)
    p = leaf(gen, "voting", cmd_coop_gen_voting)
    p.add_argument("--weights", required=True)
    p.add_argument("--threshold", required=True)

    g = group("boltz", "Boltzmann values and Metropolis dynamics")
    p = leaf(g, "value", cmd_boltz_value)
    p.add_argument("file")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--convention", choices=[c.value for c in boltzmann.Convention], default="marginal")
    p = leaf(g, "solve-T", cmd_boltz_solve_t)
    p.add_argument("file")
    p.add_argument("--mu", type=float, required=True)
    p = leaf(g, "anneal", cmd_boltz_anneal)
    p.add_argument("file")
    p.add_argument("--schedule", default="geometric:0.01:1.05")
    p.add_argument("--steps", type=int, default=100000)

    g = group("bet", "betting and information")
    p = leaf(g, "kelly", cmd_bet_kelly)
    p.add_argument("--p", required=True)
    p.add_argument("--rho", required=True)
    leaf(g, "alternatives", cmd_bet_alternatives).add_argument("file")
    p = leaf(g, "doubling", cmd_bet_doubling)
    p.add_argument("--budget", default="32")
    p.add_argument("--win", default="18/37")
    leaf(g, "channel", cmd_bet_channel).add_argument("file")

    g = group("traffic", "congestion games")
    leaf(g, "solve", cmd_traffic_solve).add_argument("file")
    leaf(g, "braess", cmd_traffic_braess).add_argument("--detail", action="store_true")

    g = group("know", "knowledge and common knowledge")
    leaf(g, "ck", cmd_know_ck).add_argument("file")
    leaf(g, "axioms", cmd_know_axioms).add_argument("file")
    leaf(g, "redhats", cmd_know_redhats)

    g = group("qi", "hermitian representation of interaction")
    leaf(g, "spectral", cmd_qi_spectral).add_argument("file")
    p = leaf(g, "measure", cmd_qi_measure)
    p.add_argument("matrix")
    p.add_argument("vector")
    leaf(g, "decompose", cmd_qi_decompose).add_argument("file")

    p = groups.add_parser("demo", parents=[common], help="worked examples")
    p.add_argument("name", choices=sorted(DEMOS))
    p.set_defaults(func=cmd_demo)
    return root


def _table(payload, prefix="") -> list:
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, dict):
                lines += _table(v, f"{prefix}{k}.")
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v, separators=(',', ':'))}")
    else:
        lines.append(json.dumps(payload, separators=(",", ":")))
    return lines


def _digest(args, argv) -> str:
    h = hashlib.sha256()
    for key in ("file", "matrix", "vector"):
        path = getattr(args, key, None)
        if path and path != "-":
            with open(path, "rb") as fh:
                h.update(fh.read())
    h.update(" ".join(argv).encode())
    return h.hexdigest()[:16]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        start = time.perf_counter()
        payload = args.func(args)
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        print(f"ludus: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, KeyError, TypeError, OSError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        print(dumps({"error": msg}), file=sys.stderr)
        return 1
    if args.report:
        payload = {"version": __version__, "input_digest": _digest(args, argv), "seconds": elapsed, "result": payload}
    if args.format == "table":
        print("\n".join(_table(to_jsonable(payload))))
    else:
        print(dumps(payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
