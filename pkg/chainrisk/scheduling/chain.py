from typing import Dict, List, Set
import logging

from chainrisk.config import settings
from chainrisk.models.schedule import BaselineSchedule, CriticalChainPlan, FeedingChain
from chainrisk.network.cpm import topological_order

logger = logging.getLogger(__name__)


def _trace_chain(sched: BaselineSchedule) -> List[int]:
    """Backward trace from the latest-finishing task along tight arcs"""
    if not sched.finish:
        return []

    links = set(sched.resource_links)
    incoming: Dict[int, Set[int]] = {t: set() for t in sched.start}
    has_successor = set()
    for a, b in sched.all_arcs():
        incoming[b].add(a)
        has_successor.add(a)

    makespan = sched.makespan
    tolerance = settings.slack_tolerance * max(1.0, makespan)
    ends = [t for t, f in sched.finish.items() if abs(f - makespan) <= tolerance]
    current = min(ends, key=lambda t: (t in has_successor, t))

    chain = [current]
    visited = {current}
    while True:
        tight = [
            p for p in incoming[current]
            if p not in visited and abs(sched.finish[p] - sched.start[current]) <= tolerance
        ]
        if not tight:
            break
        current = min(tight, key=lambda p: ((p, current) not in links, p))
        chain.append(current)
        visited.add(current)

    chain.reverse()
    return chain


def _incoming_lengths(sched: BaselineSchedule, on_chain: Set[int]) -> Dict[int, float]:
    """Longest path of non-chain tasks ending at each non-chain task"""
    order, g = topological_order(sched.start.keys(), sched.precedence)
    inlen: Dict[int, float] = {}
    for t in order:
        if t in on_chain:
            continue
        inlen[t] = sched.durations_used[t] + max(
            (inlen[p] for p in g.predecessors(t) if p not in on_chain), default=0.0
        )
    return inlen


def _feeding_chains(sched: BaselineSchedule, critical: List[int]) -> List[FeedingChain]:
    on_chain = set(critical)
    position = {t: i for i, t in enumerate(critical)}
    inlen = _incoming_lengths(sched, on_chain)

    preds: Dict[int, List[int]] = {t: [] for t in sched.start}
    succs: Dict[int, List[int]] = {t: [] for t in sched.start}
    for a, b in sched.precedence:
        preds[b].append(a)
        succs[a].append(b)

    assigned: Dict[int, int] = {}  # task -> index into chains
    chains: List[FeedingChain] = []

    def grow(terminal: int, merge: int, joins: int):
        path = [terminal]
        current = terminal
        while True:
            open_preds = [p for p in preds[current] if p not in on_chain and p not in assigned and p not in path]
            if not open_preds:
                break
            current = max(open_preds, key=lambda p: (inlen[p], -p))
            path.append(current)
        path.reverse()
        index = len(chains)
        chains.append(FeedingChain(tasks=tuple(path), merge_task=merge, joins=joins))
        for t in path:
            assigned[t] = index

    # Paths ending in an arc into the critical chain, longest first
    terminals = [t for t in inlen if any(s in on_chain for s in succs[t])]
    for t in sorted(terminals, key=lambda t: (-inlen[t], t)):
        if t in assigned:
            continue
        merge = min((s for s in succs[t] if s in on_chain), key=lambda s: position[s])
        grow(t, merge, merge)

    # Side branches that feed an already assigned feeding chain
    while True:
        branch = [t for t in inlen if t not in assigned and any(s in assigned for s in succs[t])]
        if not branch:
            break
        t = min(branch, key=lambda t: (-inlen[t], t))
        joins = min((s for s in succs[t] if s in assigned), key=lambda s: (sched.start[s], s))
        grow(t, chains[assigned[joins]].merge_task, joins)

    stray = sorted(t for t in inlen if t not in assigned)
    if stray:
        logger.debug(f"Tasks {stray} do not feed the critical chain")

    return sorted(chains, key=lambda c: (position[c.merge_task], c.tasks[0]))


def identify_critical_chain(sched: BaselineSchedule) -> CriticalChainPlan:
    """
    Critical chain and feeding chains of a leveled schedule

    The chain is traced back from the latest-finishing task (ties: tasks
    without successors, then smaller id), stepping to the predecessor whose
    finish equals the current start. Resource links win over precedence arcs
    on ties, then smaller id.

    Feeding chains are disjoint simple paths of non-chain tasks. Paths
    ending in an arc into the chain are taken longest first and merge at
    their earliest chain successor; leftover branches join the feeding
    chain they feed and inherit its merge task.
    """
    critical = _trace_chain(sched)
    feeding = _feeding_chains(sched, critical) if critical else []

    plan = CriticalChainPlan(
        critical_chain=tuple(critical),
        feeding_chains=tuple(feeding),
        makespan=sched.makespan,
        schedule=sched,
    )
    logger.info(
        f"Critical chain {list(plan.critical_chain)} (makespan {plan.makespan:g}), "
        f"{len(plan.feeding_chains)} feeding chains"
    )
    return plan

