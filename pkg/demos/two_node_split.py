"""Split one node of a two-variable network and read off the bounds.

A -> B with Pr(a1) = .2, Pr(b1 | a1) = .1, Pr(b1 | a2) = .7. Giving B its own
copy of A (a clone with a uniform prior) disconnects nothing here, but it
lets A and its copy disagree, which is what makes the result an upper bound.
"""

import itertools
import math

from nodesplit import Network, SplitNetwork, extend_instantiation, mpe_bound, pe_bound, split_node
from nodesplit.elimination import network_factors, ve

A, B = 0, 1
net = Network.from_tables([2, 2], [[], [A]], [[0.2, 0.8], [0.1, 0.9, 0.7, 0.3]], names=["A", "B"])

sn = split_node(SplitNetwork.of(net), A, [B])
clone = sn.net.n - 1
print(f"split network variables: {[v.name for v in sn.net.variables]}")
print(f"beta = {math.exp(sn.beta_log):g}")


def joint(network, x):
    return math.exp(network.log_prob(x))


# every joint entry of the original is beta times the matching entry with the clone agreeing
print("\n a  a'  b    Pr'      beta*Pr'")
for a, ahat, b in itertools.product(range(2), repeat=3):
    p = joint(sn.net, {A: a, clone: ahat, B: b})
    mark = "  <- clone agrees" if a == ahat else ""
    print(f" {a}  {ahat}   {b}   {p:.3f}    {math.exp(sn.beta_log) * p:.3f}{mark}")

x = {A: 1, B: 0}
print(f"\nPr(a2, b1) = {joint(net, x):.2f} = beta * Pr'(a2, a2', b1) = "
      f"{math.exp(sn.beta_log) * joint(sn.net, {**x, **extend_instantiation(sn, x)}):.2f}")

factors, origins = network_factors(net)
exact_mpe = ve(factors, [B, A], "max", origins)[0]
print(f"\nMPE exact {math.exp(exact_mpe):.2f}, split bound {math.exp(mpe_bound(sn)):.2f}")
b_factors, b_origins = network_factors(net, {B: 0})
evidence = ve(b_factors, [A], "sum", b_origins)[0]
print(f"Pr(b1) exact {math.exp(evidence):.2f}, split bound {math.exp(pe_bound(sn, {B: 0})):.2f}")
