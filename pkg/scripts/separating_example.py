"""The formula that is satisfiable but has no hereditarily finite model.

Prints both verdicts, the ordinary certificate, and how fair stabilization
never empties its ripe set.
"""
from bstsat.construct import initialize, stabilize_fair
from bstsat.fulfill import decide
from bstsat.oracle import sample_models
from bstsat.tgraph import node_key

FORMULA = "x != x\\x and x >< x <= x"

ordinary = decide(FORMULA, "ordinary")
finite = decide(FORMULA, "finite")
print(f"formula:  {FORMULA}")
print(f"ordinary: {ordinary.status}")
print(f"finite:   {finite.status}")
print(f"sampler witness (rank <= 3): {sample_models(FORMULA, trials=2000, max_rank=3, max_width=3)}")
print(ordinary.certificate.dumps())
g = ordinary.certificate.graph
for rounds in (10, 100, 1000):
    st, residual = stabilize_fair(g, initialize(g), rounds)
    print(f"after {rounds:>4} fair rounds ({st.explicit_rounds} explicit, {st.symbolic_rounds} symbolic): "
          f"{st.total()} elements held, still ripe {sorted(node_key(n) for n in residual)}")
