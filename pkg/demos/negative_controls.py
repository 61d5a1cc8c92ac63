"""
Can the checkers find a false statement?
========================================

A verifier that never says "violated" proves nothing.  Break one hypothesis
on purpose, search for a counterexample, and shrink it.
"""

import json

from ineqcert.generate import GenSpec
from ineqcert.search import counterexample_search, tightness_search

for statement, kind in [("holder", "conjugacy"), ("chebyshev", "sort_order"),
                        ("menelaus", "transversal_point"), ("minkowski", "direction")]:
    found = counterexample_search(None, GenSpec(statement, mutation=kind), budget=1000, seed=1)
    w = found.to_json()
    print(f"{statement}/{kind}: draw {found.index}, {w['shrink_steps']} shrink steps")
    print("  ", json.dumps(w["witness"]["instance"])[:110])

# %%
# The valid generator should turn up nothing.

print("valid holder generator:", counterexample_search(None, GenSpec("holder"), 500, 1))

# %%
# Tightness search climbs the slack ratio toward the equality cases.

for statement in ("holder", "chebyshev", "minkowski"):
    res = tightness_search(statement, (4, 2), budget=500, seed=1)
    print(f"{statement}: best slack ~ {res.slack_estimate:.6f} after {res.evaluations} evaluations")
