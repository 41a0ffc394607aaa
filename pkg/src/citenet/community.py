"""Community detection by two-level map-equation minimization.

The flow model is the teleport-smoothed directed random walk: with
probability ``1 - tau`` the walker follows a uniformly random out-edge
(dangling nodes jump uniformly instead), with probability ``tau`` it
teleports to a node chosen uniformly at random. Teleportation steps are
recorded as flow, so for a partition M with module exit flows q_i and node
visit rates p_a the description length is

    L(M) = q * H(Q) + sum_i (p_i + q_i) * H(P_i)

with q = sum_i q_i, H(Q) the entropy of the normalized exit flows, and
H(P_i) the entropy of module i's normalized visit-plus-exit flows, all in
bits. The optimizer performs greedy node moves followed by module
aggregation, repeated until no move improves L by more than a threshold,
restarted over independent trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, GraphError
from .graph import CitationGraph

_LOG2 = math.log(2.0)
_log2 = math.log2


def _plogp(x: float) -> float:
    return x * _log2(x) if x > 1e-15 else 0.0


@dataclass(frozen=True)
class FlowDistribution:
    """Stationary visit rates of the teleport-smoothed walk."""

    rates: dict[str, float]
    tau: float
    residual: float
    iterations: int

    def entropy(self) -> float:
        """Shannon entropy of the visit rates, in bits."""
        return -sum(_plogp(p) for p in self.rates.values())


@dataclass(frozen=True)
class Codelength:
    """Two-level description length for one partition, in bits."""

    total: float
    index_term: float
    module_terms: dict[int, float]


class Partition:
    """Assignment of every node to exactly one community.

    Canonical form: community ids are consecutive integers from 0,
    ordered by descending size with ties broken by the lexicographically
    smallest member id.
    """

    def __init__(self, assignment: dict[str, int]):
        self._assignment = dict(assignment)
        ids = sorted(set(self._assignment.values()))
        self._members: dict[int, frozenset[str]] = {
            cid: frozenset(n for n, c in self._assignment.items() if c == cid)
            for cid in ids
        }

    @classmethod
    def from_assignment(cls, assignment: dict[str, int]) -> "Partition":
        """Build the canonicalized partition (relabeled community ids)."""
        groups: dict[int, list[str]] = {}
        for node, cid in assignment.items():
            groups.setdefault(cid, []).append(node)
        ordered = sorted(groups.values(), key=lambda ms: (-len(ms), min(ms)))
        relabeled = {node: new_id
                     for new_id, members in enumerate(ordered)
                     for node in members}
        return cls(relabeled)

    @property
    def assignment(self) -> dict[str, int]:
        return dict(self._assignment)

    @property
    def n_communities(self) -> int:
        return len(self._members)

    @property
    def community_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._members))

    def members(self, cid: int) -> frozenset[str]:
        return self._members[cid]

    def community_of(self, node: str) -> int:
        return self._assignment[node]

    def sizes(self) -> dict[int, int]:
        return {cid: len(ms) for cid, ms in self._members.items()}

    def nodes(self) -> set[str]:
        return set(self._assignment)

    def __len__(self) -> int:
        return len(self._assignment)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self._assignment == other._assignment

    def __repr__(self) -> str:
        return f"Partition(n={len(self._assignment)}, k={self.n_communities})"


def stationary_flow(graph: CitationGraph, tau: float = 0.15,
                    tol: float = 1e-12, max_iter: int = 10_000) -> FlowDistribution:
    """Visit rates: fixed point of the teleport-smoothed directed walk,
    found by power iteration until the L1 residual drops below ``tol``."""
    if graph.node_count == 0:
        raise GraphError("empty graph")
    if not 0.0 < tau < 1.0:
        raise GraphError(f"teleportation probability must be in (0,1), got {tau}")

    nodes = list(graph.nodes)
    index = {node: i for i, node in enumerate(nodes)}
    n = len(nodes)

    rows, cols, vals = [], [], []
    dangling = np.zeros(n)
    for u in nodes:
        ui = index[u]
        succ = graph.successors(u)
        if not succ:
            dangling[ui] = 1.0
            continue
        w = 1.0 / len(succ)
        for v in succ:
            rows.append(index[v])
            cols.append(ui)
            vals.append(w)
    step = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    x = np.full(n, 1.0 / n)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        dangling_mass = float(dangling @ x)
        x_new = tau / n + (1.0 - tau) * (step @ x + dangling_mass / n)
        residual = float(np.abs(x_new - x).sum())
        x = x_new
        if residual < tol:
            x = x / x.sum()
            return FlowDistribution(
                rates={node: float(x[index[node]]) for node in nodes},
                tau=tau, residual=residual, iterations=iteration)
    raise ConvergenceError(
        f"visit rates did not converge within {max_iter} iterations "
        f"(last residual {residual:.3e})", residual)


def _module_exit_flows(graph: CitationGraph, partition: Partition,
                       flow: FlowDistribution) -> dict[int, float]:
    """Exit flow per module: teleport flow to nodes outside the module plus
    link flow across the module boundary."""
    n = graph.node_count
    tau = flow.tau
    sizes = partition.sizes()
    exits = {cid: 0.0 for cid in partition.community_ids}
    for u in graph.nodes:
        cid = partition.community_of(u)
        p = flow.rates[u]
        succ = graph.successors(u)
        tele = tau if succ else 1.0
        out = p * tele * (n - sizes[cid]) / n
        if succ:
            link = (1.0 - tau) * p / len(succ)
            out += link * sum(1 for v in succ if partition.community_of(v) != cid)
        exits[cid] += out
    return exits


def codelength(graph: CitationGraph, partition: Partition,
               flow: FlowDistribution) -> Codelength:
    """Evaluate the two-level map equation for a given partition.

    Direct evaluation from the definition; the optimizer maintains the
    same quantity incrementally and is checked against this."""
    if partition.nodes() != set(graph.nodes):
        raise GraphError("partition does not cover the graph's node set")
    if set(flow.rates) != set(graph.nodes):
        raise GraphError("flow distribution does not cover the graph's node set")

    exits = _module_exit_flows(graph, partition, flow)
    q_total = sum(exits.values())

    index_term = 0.0
    if q_total > 0.0:
        index_term = -sum(q * math.log(q / q_total) / _LOG2
                          for q in exits.values() if q > 0.0)

    module_terms: dict[int, float] = {}
    for cid in partition.community_ids:
        q = exits[cid]
        visits = [flow.rates[u] for u in partition.members(cid)]
        p_circ = q + sum(visits)
        if p_circ <= 0.0:
            module_terms[cid] = 0.0
            continue
        h = 0.0
        if q > 0.0:
            h -= (q / p_circ) * math.log(q / p_circ) / _LOG2
        for p in visits:
            if p > 0.0:
                h -= (p / p_circ) * math.log(p / p_circ) / _LOG2
        module_terms[cid] = p_circ * h

    total = index_term + sum(module_terms.values())
    return Codelength(total=total, index_term=index_term, module_terms=module_terms)


def nmi(p: Partition, q: Partition) -> float:
    """Normalized mutual information with arithmetic-mean normalization.

    1.0 for partitions identical up to relabeling; by convention 1.0 when
    both partitions carry zero entropy (e.g. both single-module)."""
    if p.nodes() != q.nodes():
        raise GraphError("partitions are over different node sets")
    n = len(p)
    if n == 0:
        raise GraphError("empty partitions")

    counts: dict[tuple[int, int], int] = {}
    for node, pc in p.assignment.items():
        key = (pc, q.community_of(node))
        counts[key] = counts.get(key, 0) + 1
    p_sizes = p.sizes()
    q_sizes = q.sizes()

    h_p = -sum(_plogp(s / n) for s in p_sizes.values())
    h_q = -sum(_plogp(s / n) for s in q_sizes.values())
    if h_p + h_q == 0.0:
        return 1.0

    mutual = 0.0
    for (pc, qc), c in counts.items():
        mutual += (c / n) * math.log(c * n / (p_sizes[pc] * q_sizes[qc])) / _LOG2
    value = 2.0 * mutual / (h_p + h_q)
    return min(1.0, max(0.0, value))


# ---------------------------------------------------------------------------
# Optimizer internals. The optimizer works on an integer-indexed flow
# network that can represent both the original graph (one unit per node)
# and aggregated module-level networks. Per unit it keeps the visit rate
# p, the teleport source mass s (= p times the unit's teleport
# probability) and the teleport target share t (= covered fraction of
# teleport landings); link flows between units are kept as dicts. The exit
# flow of a module M is then sum(s, M) * (1 - sum(t, M)) + link flow
# leaving M, which stays exact at every aggregation level.
# ---------------------------------------------------------------------------


class _FlowNet:
    __slots__ = ("p", "s", "t", "out", "inn", "node_plogp")

    def __init__(self, p, s, t, out, inn, node_plogp):
        self.p = p          # visit rate per unit
        self.s = s          # teleport source mass per unit
        self.t = t          # teleport target share per unit
        self.out = out      # out[i]: dict j -> link flow i->j (j != i)
        self.inn = inn      # inn[i]: dict j -> link flow j->i
        self.node_plogp = node_plogp  # sum of plogp(p_a) over ORIGINAL nodes

    @property
    def n(self) -> int:
        return len(self.p)


def _base_flownet(graph: CitationGraph, flow: FlowDistribution,
                  nodes: list[str]) -> _FlowNet:
    n = len(nodes)
    index = {node: i for i, node in enumerate(nodes)}
    tau = flow.tau
    p = [flow.rates[node] for node in nodes]
    s = []
    t = [1.0 / n] * n
    out: list[dict[int, float]] = [dict() for _ in range(n)]
    inn: list[dict[int, float]] = [dict() for _ in range(n)]
    for node in nodes:
        i = index[node]
        succ = graph.successors(node)
        s.append(p[i] * (tau if succ else 1.0))
        if succ:
            f = (1.0 - tau) * p[i] / len(succ)
            for v in succ:
                j = index[v]
                out[i][j] = out[i].get(j, 0.0) + f
                inn[j][i] = inn[j].get(i, 0.0) + f
    node_plogp = sum(_plogp(x) for x in p)
    return _FlowNet(p, s, t, out, inn, node_plogp)


def _aggregate(net: _FlowNet, modules: list[int], n_modules: int) -> _FlowNet:
    p = [0.0] * n_modules
    s = [0.0] * n_modules
    t = [0.0] * n_modules
    out: list[dict[int, float]] = [dict() for _ in range(n_modules)]
    inn: list[dict[int, float]] = [dict() for _ in range(n_modules)]
    for i in range(net.n):
        mi = modules[i]
        p[mi] += net.p[i]
        s[mi] += net.s[i]
        t[mi] += net.t[i]
        for j, f in net.out[i].items():
            mj = modules[j]
            if mi == mj:
                continue  # internal flow can never leave a containing module
            out[mi][mj] = out[mi].get(mj, 0.0) + f
            inn[mj][mi] = inn[mj].get(mi, 0.0) + f
    return _FlowNet(p, s, t, out, inn, net.node_plogp)


class _LevelState:
    """Greedy single-unit move optimization over one flow network level.

    Maintains, per module: size, visit sum P, teleport source S, teleport
    target share T and outward link flow W; from these the exit flow is
    q = S*(1-T) + W and the partial codelength is
    plogp(q_tot) - 2*sum plogp(q_m) + sum plogp(P_m + q_m).
    """

    # Exhaustive candidate search below this module count (cheap insurance
    # for exact optima on small networks).
    FULL_SEARCH_LIMIT = 64

    def __init__(self, net: _FlowNet, assignment: list[int]):
        self.net = net
        n = net.n
        self.assignment = list(assignment)
        cap = n + 1  # one spare slot so a unit can always split off alone
        self.size = [0] * cap
        self.P = [0.0] * cap
        self.S = [0.0] * cap
        self.T = [0.0] * cap
        self.W = [0.0] * cap
        for i in range(n):
            m = self.assignment[i]
            self.size[m] += 1
            self.P[m] += net.p[i]
            self.S[m] += net.s[i]
            self.T[m] += net.t[i]
        for i in range(n):
            mi = self.assignment[i]
            for j, f in net.out[i].items():
                if self.assignment[j] != mi:
                    self.W[mi] += f
        self.q = [self.S[m] * (1.0 - self.T[m]) + self.W[m] if self.size[m] else 0.0
                  for m in range(cap)]
        self.q_total = sum(self.q)
        self.active = sum(1 for m in range(cap) if self.size[m] > 0)
        self.free = [m for m in range(cap) if self.size[m] == 0]
        self.linkout = [sum(net.out[i].values()) for i in range(n)]

    # -- codelength bookkeeping ---------------------------------------------

    def partial(self) -> float:
        acc = _plogp(self.q_total)
        for m in range(len(self.q)):
            if self.size[m] > 0:
                acc -= 2.0 * _plogp(self.q[m])
                acc += _plogp(self.P[m] + self.q[m])
        return acc

    def full_codelength(self) -> float:
        return self.partial() - self.net.node_plogp

    # -- moves ---------------------------------------------------------------

    def _removal_terms(self, i: int, a: int, to_a: float,
                       from_a: float) -> tuple[float, float]:
        """Exit flow and codelength contribution of module a once unit i
        has left it (shared by every candidate target)."""
        if self.size[a] == 1:
            return 0.0, 0.0
        net = self.net
        S_a = self.S[a] - net.s[i]
        T_a = self.T[a] - net.t[i]
        W_a = self.W[a] - (self.linkout[i] - to_a) + from_a
        q_a = S_a * (1.0 - T_a) + W_a
        contrib = -2.0 * _plogp(q_a) + _plogp(self.P[a] - net.p[i] + q_a)
        return q_a, contrib

    def _delta(self, i: int, b: int, to_b: float, from_b: float,
               q_a: float, removal_contrib: float, base_a: float,
               q_rest: float) -> float:
        """Codelength change of moving unit i into module b, given the
        precomputed removal terms for its current module."""
        net = self.net
        p_i = net.p[i]

        S_b = self.S[b] + net.s[i]
        T_b = self.T[b] + net.t[i]
        W_b = self.W[b] + (self.linkout[i] - to_b) - from_b
        q_b = S_b * (1.0 - T_b) + W_b

        q_tot = q_rest + q_a + q_b
        delta = _plogp(q_tot) - _plogp(self.q_total)
        delta += removal_contrib - base_a
        delta += (-2.0 * _plogp(q_b) + _plogp(self.P[b] + p_i + q_b)
                  + 2.0 * _plogp(self.q[b]) - _plogp(self.P[b] + self.q[b]))
        return delta

    def _apply(self, i: int, a: int, b: int, to_a: float, from_a: float,
               to_b: float, from_b: float) -> None:
        net = self.net
        p_i, s_i, t_i = net.p[i], net.s[i], net.t[i]
        lo = self.linkout[i]

        if self.size[b] == 0:
            self.active += 1
            if self.free and self.free[-1] == b:
                self.free.pop()
            else:
                self.free.remove(b)

        self.size[a] -= 1
        if self.size[a] == 0:
            self.P[a] = self.S[a] = self.T[a] = self.W[a] = 0.0
            self.active -= 1
            self.free.append(a)
            q_a = 0.0
        else:
            self.P[a] -= p_i
            self.S[a] -= s_i
            self.T[a] -= t_i
            self.W[a] = self.W[a] - (lo - to_a) + from_a
            q_a = self.S[a] * (1.0 - self.T[a]) + self.W[a]

        self.size[b] += 1
        self.P[b] += p_i
        self.S[b] += s_i
        self.T[b] += t_i
        self.W[b] = self.W[b] + (lo - to_b) - from_b
        q_b = self.S[b] * (1.0 - self.T[b]) + self.W[b]

        self.q_total += q_a + q_b - self.q[a] - self.q[b]
        self.q[a] = q_a
        self.q[b] = q_b
        self.assignment[i] = b

    def _neighbor_flows(self, i: int) -> tuple[dict[int, float], dict[int, float]]:
        flows_to: dict[int, float] = {}
        flows_from: dict[int, float] = {}
        assign = self.assignment
        for j, f in self.net.out[i].items():
            m = assign[j]
            flows_to[m] = flows_to.get(m, 0.0) + f
        for j, f in self.net.inn[i].items():
            m = assign[j]
            flows_from[m] = flows_from.get(m, 0.0) + f
        return flows_to, flows_from

    def sweep(self, order, threshold: float, verify: bool = False) -> int:
        """One pass of best-single-move over ``order``; returns move count."""
        moves = 0
        for i in order:
            a = self.assignment[i]
            flows_to, flows_from = self._neighbor_flows(i)
            if self.active <= self.FULL_SEARCH_LIMIT:
                candidates = [m for m in range(len(self.size))
                              if self.size[m] > 0 and m != a]
            else:
                candidates = sorted(m for m in set(flows_to) | set(flows_from)
                                    if m != a and self.size[m] > 0)
            if self.size[a] > 1 and self.free:
                candidates.append(self.free[-1])
            if not candidates:
                continue

            to_a = flows_to.get(a, 0.0)
            from_a = flows_from.get(a, 0.0)
            q_a, removal_contrib = self._removal_terms(i, a, to_a, from_a)
            base_a = -2.0 * _plogp(self.q[a]) + _plogp(self.P[a] + self.q[a])
            q_rest = self.q_total - self.q[a]

            best_delta = -threshold
            best = None
            for b in candidates:
                d = self._delta(i, b, flows_to.get(b, 0.0), flows_from.get(b, 0.0),
                                q_a, removal_contrib, base_a, q_rest - self.q[b])
                if d < best_delta:
                    best_delta = d
                    best = b
            if best is not None:
                if verify:
                    before = self.partial()
                self._apply(i, a, best, to_a, from_a,
                            flows_to.get(best, 0.0), flows_from.get(best, 0.0))
                if verify:
                    after = self.partial()
                    if after - before > 1e-9:
                        raise AssertionError(
                            f"codelength increased by {after - before} on an accepted move")
                moves += 1
        return moves

    def greedy(self, rng: np.random.Generator, threshold: float,
               verify: bool = False, max_sweeps: int = 200) -> None:
        for _ in range(max_sweeps):
            order = rng.permutation(self.net.n)
            if self.sweep(order, threshold, verify=verify) == 0:
                break

    def dense_modules(self) -> tuple[list[int], int]:
        """Renumber active modules to 0..k-1 (ascending old id)."""
        active = sorted(m for m in range(len(self.size)) if self.size[m] > 0)
        remap = {m: k for k, m in enumerate(active)}
        return [remap[m] for m in self.assignment], len(active)


def _coarsen_cycle(base: _FlowNet, assignment: list[int],
                   rng: np.random.Generator, threshold: float,
                   verify: bool) -> list[int]:
    """Single-unit moves at the base level starting from ``assignment``,
    then repeated module aggregation with moves at each coarser level."""
    state = _LevelState(base, assignment)
    state.greedy(rng, threshold, verify=verify)
    level_assign, k = state.dense_modules()
    base_to_module = level_assign
    net = base
    while 0 < k < net.n:
        net = _aggregate(net, level_assign, k)
        state = _LevelState(net, list(range(net.n)))
        state.greedy(rng, threshold, verify=verify)
        level_assign, k_new = state.dense_modules()
        base_to_module = [level_assign[m] for m in base_to_module]
        if k_new == net.n:
            break
        k = k_new
    return base_to_module


def _optimize_trial(base: _FlowNet, rng: np.random.Generator,
                    threshold: float, verify: bool = False) -> tuple[list[int], float]:
    """One full optimization trial; returns (assignment over base units,
    codelength in bits)."""
    assignment = list(range(base.n))
    best_L = math.inf
    while True:
        assignment = _coarsen_cycle(base, assignment, rng, threshold, verify)
        L = _LevelState(base, assignment).full_codelength()
        if best_L - L <= threshold:
            return assignment, min(best_L, L)
        best_L = L


def detect_communities(graph: CitationGraph, trials: int = 20, seed: int = 0,
                       tau: float = 0.15, flow_tol: float = 1e-12,
                       threshold: float = 1e-10, threads: int = 1,
                       verify: bool = False,
                       trial_log: list[float] | None = None) -> tuple[Partition, Codelength]:
    """Minimize the map equation over ``trials`` independent greedy
    optimizations and return the best partition (canonical ids) with its
    codelength. Deterministic for fixed (graph, trials, seed); ties between
    trials go to the lowest trial index. Pass a list as ``trial_log`` to
    collect per-trial codelengths."""
    if graph.node_count == 0:
        raise GraphError("empty graph")
    if trials < 1:
        raise GraphError("trials must be >= 1")
    nodes = list(graph.nodes)
    flow = stationary_flow(graph, tau=tau, tol=flow_tol)

    if graph.node_count == 1:
        partition = Partition({nodes[0]: 0})
        if trial_log is not None:
            trial_log.extend([0.0] * trials)
        return partition, codelength(graph, partition, flow)

    base = _base_flownet(graph, flow, nodes)

    def run(trial: int) -> tuple[list[int], float]:
        rng = np.random.default_rng([seed, trial])
        return _optimize_trial(base, rng, threshold, verify=verify)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(t) for t in range(trials)]

    if trial_log is not None:
        trial_log.extend(L for _, L in results)

    best_trial = 0
    for t in range(1, trials):
        if results[t][1] < results[best_trial][1]:
            best_trial = t
    assignment = results[best_trial][0]

    partition = Partition.from_assignment(
        {nodes[i]: assignment[i] for i in range(len(nodes))})
    return partition, codelength(graph, partition, flow)
