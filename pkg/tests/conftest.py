import random

from hypothesis import settings, strategies as st

from bstsat.hfset import EMPTY, HFSet
from bstsat.oracle import random_hfset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def hf_sets(max_rank=3, max_width=3):
    """HF sets of bounded rank and width."""
    if max_rank == 0:
        return st.just(EMPTY)
    return st.recursive(
        st.just(EMPTY),
        lambda inner: st.lists(inner, max_size=max_width).map(HFSet),
        max_leaves=max_width ** max_rank,
    ).filter(lambda s: s.rank() <= max_rank)


def seeded_sets(seed, n, max_rank=3, max_width=3):
    rng = random.Random(seed)
    return [random_hfset(rng, max_rank, max_width) for _ in range(n)]


_POOL = [EMPTY, HFSet([EMPTY]), HFSet([HFSet([EMPTY])]), HFSet([EMPTY, HFSet([EMPTY])])]


def structured_partition(rng: random.Random, max_blocks=4, max_rank=4):
    """Random partition whose later blocks are carved out of pair-products of
    earlier ones, so ⊗-blocks actually occur."""
    from bstsat.hfset import powast12
    from bstsat.partition import Partition

    used: set = set()
    blocks: list = []
    first = {e for e in _POOL[: rng.randint(1, 4)] if rng.random() < 0.8} or {_POOL[0]}
    if HFSet(first).rank() > max_rank - 1:
        first = {_POOL[0]}
    blocks.append(first)
    used |= first
    while len(blocks) < max_blocks and rng.random() < 0.85:
        idx = rng.sample(range(len(blocks)), rng.randint(1, min(2, len(blocks))))
        prod = set(powast12([HFSet(blocks[i]) for i in idx]).members) - used
        if rng.random() < 0.3:  # noise: something not coming from a product
            prod.add(HFSet(_POOL[:3]))
            prod -= used
        prod = sorted(prod)
        if not prod or HFSet(prod).rank() > max_rank:
            break
        rng.shuffle(prod)
        if len(prod) > 1 and len(blocks) + 1 < max_blocks and rng.random() < 0.4:
            cut = rng.randint(1, len(prod) - 1)
            parts = [prod[:cut], prod[cut:]]
        else:
            parts = [prod]
        for part in parts:
            blocks.append(set(part))
            used |= set(part)
    return Partition.canonical(HFSet(b) for b in blocks)
