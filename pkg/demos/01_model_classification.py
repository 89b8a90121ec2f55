"""Models, exponents, and the rationality classification.

A fixed fragmentation model is just the split proportions (p1..pm).  Its
limiting Benford behaviour depends only on the exponents
y_i = log10(p_i / p_{i+1}): Benford iff some y_i is irrational.
"""

import math
from fractions import Fraction

from stickfrag import (
    ExponentSpec,
    classify_rationality,
    exponents_from_proportions,
    make_model,
    predict_benford,
    proportions_from_exponents,
)

print("=" * 70)
print("1. From proportions to exponents and back")
print("=" * 70)

model = make_model([0.3, 0.3])          # free proportions; p3 = 0.4 is forced
spec = exponents_from_proportions(model)
print(f"model proportions : {model.p}")
print(f"exponents y_i     : {spec.values()}")

back = proportions_from_exponents(spec)
print(f"inverted back     : {tuple(round(p, 15) for p in back.p)}")

print()
print("=" * 70)
print("2. Classifying exponents: exact rationals vs floats")
print("=" * 70)

cases = {
    "y = -1/3 (exact)": ExponentSpec((Fraction(-1, 3),)),
    "y = -1/3 (float)": ExponentSpec((-1 / 3,)),
    "y = -sqrt(2)": ExponentSpec((-math.sqrt(2),)),
    "y = -sqrt(3)": ExponentSpec((-math.sqrt(3),)),
    "y = 0.25": ExponentSpec((0.25,)),
}
for label, s in cases.items():
    c = classify_rationality(s)
    v = c.verdicts[0]
    if v.rational:
        print(f"{label:22s} -> Rational({v.numerator}/{v.denominator})")
    else:
        print(
            f"{label:22s} -> PresumedIrrational   "
            f"(best convergent {v.witness_numerator}/{v.witness_denominator}, "
            f"error {v.witness_error:.2e})"
        )

print()
print("The heuristic is honest about its limits: a float within the")
print("tolerance of a small-denominator fraction counts as rational.")
near = 1 / 3 + 1e-15
c = classify_rationality(ExponentSpec((near,)))
print(f"y = 1/3 + 1e-15 -> rational: {c.verdicts[0].rational}")

print()
print("=" * 70)
print("3. The Benford prediction (necessary and sufficient condition)")
print("=" * 70)

configs = {
    "y = (-1/3, -1/2)   ": (Fraction(-1, 3), Fraction(-1, 2)),
    "y = (-1/2, -sqrt2) ": (Fraction(-1, 2), -math.sqrt(2)),
    "p = (1/2, 1/2)     ": exponents_from_proportions(make_model([0.5])).y,
}
for label, y in configs.items():
    verdict = predict_benford(classify_rationality(ExponentSpec(tuple(y))))
    print(f"{label} -> {verdict}")
