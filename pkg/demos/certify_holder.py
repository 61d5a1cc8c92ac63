"""
Certifying Hölder-type inequalities exactly
===========================================

Checks a few hand-built instances, looks at how the verdict was reached,
then splits one of them into its chain of two-column steps.
"""

from fractions import Fraction as F

from ineqcert.inequalities import (
    CheckConfig,
    ExponentVector,
    Mode,
    NonNegMatrix,
    check_holder,
    check_minkowski,
    slack_ratio,
)
from ineqcert.trace import holder_trace, verify_trace

# columns (1, 2), (1, 1), (1, 1) with exponents 2, 3, 6
M = NonNegMatrix.from_columns([(1, 2), (1, 1), (1, 1)])
P = ExponentVector((2, 3, 6))
v = check_holder(M, P)
print("verdict:", v.outcome.value)

# the slack ratio is the left side over the right side; 1 means equality.
# It is an exact rational when one exists, an enclosure otherwise.
print("slack:", slack_ratio("holder", (M, P)))

# proportional columns sit exactly on the equality case
ones = NonNegMatrix.from_columns([(1, 1), (1, 1), (1, 1)])
print("all ones:", check_holder(ones, P).outcome.value, slack_ratio("holder", (ones, P)))

# %%
# Fractional powers that are not rational fall back to interval enclosures.
# Interval-only mode never uses the exact path.

cols = NonNegMatrix.from_columns([(1, 3), (2, 5), (4, 1)])
for mode in Mode:
    v = check_minkowski(cols, F(3, 2), CheckConfig(mode))
    print(f"minkowski p=3/2, {mode.value:>8}:", v.outcome.value)

# %%
# The m-column claim decomposes into m - 2 two-column steps plus a base pair.
# Each step is re-checked and its exponent bookkeeping re-derived exactly.

t = holder_trace(M, P)
for step in t.steps:
    print(f"level {step.level}: derived p = {step.derived_p}, t1 = {step.t1}, t2 = {step.t2}")
tv = verify_trace(t)
print("bookkeeping ok:", tv.bookkeeping_ok, "| overall:", tv.overall.outcome.value)
