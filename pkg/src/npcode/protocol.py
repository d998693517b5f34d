"""The round-based protection protocol.

Each round, m of the n connections carry parity symbols and the role
rotates so no connection permanently gives up capacity. Failures erase
payloads in flight (positions are known to receivers); recovery solves the
parity equations for the lost data symbols and accounts for the queries,
XORs, and transmissions spent doing so.

Coordinate layout per round r: parity coordinate k+j rides connection
(r + j) mod n, and the data coordinates 0..k-1 fill the remaining
connections in ascending index order. For m = 1 this puts the parity
symbol on connection r, the diagonal rotation.
"""

from __future__ import annotations

import dataclasses
import enum
import random
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import codes
from .codes import AmbiguousErasure, ErasurePattern, ProtectionCode
from .gf2 import BitVector, DimensionMismatch
from .netmodel import Network, Packet, PacketKind


class Outcome(enum.Enum):
    FULL_RECOVERY = "FullRecovery"
    NO_ACTION_NEEDED = "NoActionNeeded"
    UNRECOVERABLE = "Unrecoverable"


@dataclass(frozen=True)
class Schedule:
    """Rotation of the encoded role: round r assigns it to (r + j) mod n."""

    n: int
    m: int
    rounds: int

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise ValueError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")

    def scheduled(self, r: int) -> tuple[int, ...]:
        """Connections carrying parity in round r, in rotation order."""
        if not 0 <= r < self.rounds:
            raise ValueError(f"round {r} outside [0, {self.rounds})")
        return tuple((r + j) % self.n for j in range(self.m))

    def assignment(self, r: int) -> frozenset[int]:
        return frozenset(self.scheduled(r))


def build_schedule(n: int, m: int, rounds: int) -> Schedule:
    """Rotation schedule; every window of n rounds gives each connection
    the encoded role exactly m times."""
    return Schedule(n, m, rounds)


@dataclass(frozen=True)
class FailureScenario:
    """Set of connections whose payloads are lost this round. Positions are
    always known to the receivers; that is the failure model."""

    failed: frozenset[int]
    known_to_receivers: bool = True

    def __init__(self, failed: Iterable[int], known_to_receivers: bool = True):
        object.__setattr__(self, "failed", frozenset(failed))
        object.__setattr__(self, "known_to_receivers", known_to_receivers)


@dataclass
class RecoveryReport:
    """What one round's recovery did and what it cost."""

    recovered: dict[int, int]
    queries_sent: int
    xor_operations: int
    transmissions: int
    outcome: Outcome


def connection_of_coordinate(sched: Schedule, r: int) -> tuple[int, ...]:
    """Entry j: the connection that carries codeword coordinate j in round r."""
    scheduled = sched.scheduled(r)
    taken = set(scheduled)
    data_conns = tuple(c for c in range(sched.n) if c not in taken)
    return data_conns + scheduled


def encode_round(
    sched: Schedule, r: int, code: ProtectionCode, data: BitVector | Sequence[int]
) -> list[Packet]:
    """Emit the n packets of round r: k data symbols in connection order on
    the unscheduled connections, parity symbols on the scheduled ones."""
    if code.n != sched.n or code.m != sched.m:
        raise DimensionMismatch(
            f"code [{code.n},{code.k}] does not fit schedule (n={sched.n}, m={sched.m})"
        )
    codeword = codes.encode(code, data)
    conn_of = connection_of_coordinate(sched, r)
    stamp = (r // sched.n, r % sched.n)
    payload_at = [0] * sched.n
    is_parity = [False] * sched.n
    for j, conn in enumerate(conn_of):
        payload_at[conn] = codeword[j]
        is_parity[conn] = j >= code.k
    return [
        Packet(
            sender_id=c,
            payload=payload_at[c],
            round_stamp=stamp,
            kind=PacketKind.ENCODED if is_parity[c] else PacketKind.DATA,
        )
        for c in range(sched.n)
    ]


def inject_failures(packets: Sequence[Packet], scenario: FailureScenario) -> list[Packet]:
    """Erase the payloads on the failed connections; everything else passes."""
    for i in scenario.failed:
        if not 0 <= i < len(packets):
            raise ValueError(f"failed connection {i} out of range")
    return [
        dataclasses.replace(p, payload=None) if c in scenario.failed else p
        for c, p in enumerate(packets)
    ]


def recover(
    code: ProtectionCode,
    surviving: Sequence[Packet],
    scenario: FailureScenario,
    sched: Schedule,
    r: int,
) -> RecoveryReport:
    """Rebuild the data symbols lost in round r and account for the work.

    Failures confined to parity connections need no action. Otherwise a
    receiver gathers the surviving symbols and solves for the lost ones:
    under the single-parity rotation the failed receiver itself queries the
    other n-1 receivers, while with a wider parity budget a surviving
    parity-side receiver sends n-t-1 queries. Only lost data symbols appear
    in the report; lost parity is not worth rebuilding.
    """
    n = sched.n
    if code.n != n or code.m != sched.m:
        raise DimensionMismatch(
            f"code [{code.n},{code.k}] does not fit schedule (n={n}, m={sched.m})"
        )
    if len(surviving) != n:
        raise DimensionMismatch(f"expected {n} packets, got {len(surviving)}")
    scheduled_set = sched.assignment(r)
    for c, pkt in enumerate(surviving):
        expected = PacketKind.ENCODED if c in scheduled_set else PacketKind.DATA
        if pkt.kind is not expected:
            raise ValueError(f"packet {c} kind {pkt.kind} does not match the schedule")
        if (pkt.payload is None) != (c in scenario.failed):
            raise ValueError(f"packet {c} erasure does not match the scenario")

    t = len(scenario.failed)
    data_failed = sorted(scenario.failed - scheduled_set)
    if not data_failed:
        return RecoveryReport({}, 0, 0, n, Outcome.NO_ACTION_NEEDED)

    if code.m == 1 and t == 1:
        queries = n - 1
    else:
        queries = max(0, n - t - 1)

    conn_of = connection_of_coordinate(sched, r)
    coord_of = [0] * n
    for j, conn in enumerate(conn_of):
        coord_of[conn] = j
    received = [surviving[conn].payload for conn in conn_of]
    pattern = ErasurePattern(n, (coord_of[c] for c in scenario.failed))
    try:
        message, xor_ops = codes.erasure_decode_with_cost(code, received, pattern)
    except AmbiguousErasure:
        return RecoveryReport({}, queries, 0, n, Outcome.UNRECOVERABLE)
    recovered = {c: message[coord_of[c]] for c in data_failed}
    return RecoveryReport(recovered, queries, xor_ops, n, Outcome.FULL_RECOVERY)


def no_failures() -> Callable[[int], FailureScenario]:
    scenario = FailureScenario(())
    return lambda r: scenario


def fixed_failures(failed: Iterable[int]) -> Callable[[int], FailureScenario]:
    scenario = FailureScenario(failed)
    return lambda r: scenario


def random_failures(n: int, t: int, seed: int) -> Callable[[int], FailureScenario]:
    """t distinct failed connections per round, drawn from a seeded stream.

    The model must be called once per round in round order; the seed then
    fully determines every scenario.
    """
    if not 0 <= t <= n:
        raise ValueError(f"t must be in [0, {n}], got {t}")
    rng = random.Random(seed)
    return lambda r: FailureScenario(rng.sample(range(n), t))


@dataclass
class RoundRecord:
    """Everything observable about one simulated round."""

    index: int
    sent: list[Packet]
    delivered: list[Packet]
    scenario: FailureScenario
    report: RecoveryReport


@dataclass(frozen=True)
class SimulationMetrics:
    avg_capacity: Fraction
    recovery_rate: Fraction
    total_transmissions: int
    per_connection_encoded_counts: tuple[int, ...]


def simulate_rounds(
    net: Network,
    code: ProtectionCode,
    sched: Schedule,
    failure_model: Callable[[int], FailureScenario],
    rounds: int,
    *,
    seed: int = 0,
    cross_round: bool = False,
) -> Iterator[RoundRecord]:
    """Drive encode -> fail -> recover one round at a time.

    Data symbols come from a stream seeded by ``seed``, so identical
    arguments replay identical rounds. With ``cross_round`` (single-parity
    rotation only) every source advances through its own symbol stream and
    skips a turn while it serves parity, mirroring the diagonal rotation
    where the parity row mixes neighbouring generations; the wire contents
    and the recovery arithmetic are unchanged.
    """
    if not (net.n == code.n == sched.n):
        raise DimensionMismatch(
            f"sizes disagree: network {net.n}, code {code.n}, schedule {sched.n}"
        )
    if not 1 <= rounds <= sched.rounds:
        raise ValueError(f"rounds must be in [1, {sched.rounds}]")
    if cross_round and code.m != 1:
        raise ValueError("cross-round encoding is defined for the single-parity rotation only")
    rng = random.Random(seed)
    streams = [random.Random(f"npc:{seed}:{c}") for c in range(net.n)] if cross_round else None
    for r in range(rounds):
        scenario = failure_model(r)
        for i in scenario.failed:
            if not 0 <= i < net.n:
                raise ValueError(f"failure model produced out-of-range connection {i}")
        for i in range(net.n):
            net.set_active(i, i not in scenario.failed)
        if streams is None:
            data = [rng.randrange(2) for _ in range(code.k)]
        else:
            # data coordinate j belongs to the j-th unscheduled connection,
            # which draws the next symbol of its own stream
            data_conns = connection_of_coordinate(sched, r)[: code.k]
            data = [streams[c].randrange(2) for c in data_conns]
        sent = encode_round(sched, r, code, data)
        delivered = inject_failures(sent, scenario)
        report = recover(code, delivered, scenario, sched, r)
        yield RoundRecord(r, sent, delivered, scenario, report)


def run_simulation(
    net: Network,
    code: ProtectionCode,
    sched: Schedule,
    failure_model: Callable[[int], FailureScenario],
    rounds: int,
    *,
    seed: int = 0,
    cross_round: bool = False,
) -> SimulationMetrics:
    """Aggregate a full run into the capacity and bookkeeping metrics.

    A connection contributes working capacity in a round exactly when it
    carried a data packet, so with every link up the average capacity is
    (n - m)/n. Failed links still transmit (erasure happens in flight), so
    transmissions always total rounds * n.
    """
    data_packets = 0
    ok_rounds = 0
    transmissions = 0
    encoded_counts = [0] * net.n
    for record in simulate_rounds(
        net, code, sched, failure_model, rounds, seed=seed, cross_round=cross_round
    ):
        transmissions += len(record.sent)
        for c, pkt in enumerate(record.sent):
            if pkt.kind is PacketKind.DATA:
                data_packets += 1
            else:
                encoded_counts[c] += 1
        if record.report.outcome is not Outcome.UNRECOVERABLE:
            ok_rounds += 1
    return SimulationMetrics(
        avg_capacity=Fraction(data_packets, transmissions),
        recovery_rate=Fraction(ok_rounds, rounds),
        total_transmissions=transmissions,
        per_connection_encoded_counts=tuple(encoded_counts),
    )
