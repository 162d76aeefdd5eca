import random

from relaynet.forwarding import OneWay, Schedule, Shared
from relaynet.network import AB, BA, Flow, NetworkSpec
from relaynet.oracle import check_schedule


def random_valid_schedule(spec: NetworkSpec, rng: random.Random, tries: int = 200) -> Schedule | None:
    """A random valid schedule (any rates) built by rejection, independent of the scheduler."""
    q_up, q_down = spec.q_up, spec.q_down
    for _ in range(tries):
        uplink, counter = [], [0] * (2 * spec.M)
        for _ in range(q_up):
            i = rng.randint(1, spec.M)
            kind = rng.choice(["none", "shared", AB, BA])
            if kind == "none":
                uplink.append(None)
            elif kind == "shared":
                counter[2 * i - 2] += 1
                counter[2 * i - 1] += 1
                uplink.append(Shared(i, counter[2 * i - 2], counter[2 * i - 1]))
            else:
                f = Flow(i, kind)
                counter[f.index] += 1
                uplink.append(OneWay(f, counter[f.index]))
        free = list(range(1, q_down + 1))
        rng.shuffle(free)
        forward = [None if u is None else (free.pop() if free else None) for u in uplink]
        s = Schedule(spec.M, tuple(uplink), tuple(forward), q_down, tuple(counter))
        if not check_schedule(spec, s):
            return s
    return None


def random_spec(rng: random.Random, M: int = 2, max_gain: int = 3) -> NetworkSpec:
    return NetworkSpec.from_pairs([[rng.randint(0, max_gain) for _ in range(4)] for _ in range(M)])
