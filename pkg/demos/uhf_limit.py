"""The Cuntz semigroup of the CAR algebra as an inductive limit.

Stages are M_{2^n}; the connecting maps double ranks.  Elements of the limit
are increasing sequences, compared up to a horizon with a three-valued
verdict, and rapid representatives are built by a diagonal argument.
"""
import itertools

from cuntz.core import check_cu_axioms
from cuntz.limits import build_limit, functor_continuity_check, system_from_json

model = build_limit(system_from_json("uhf2"), horizon=64)
pool = list(itertools.islice(model.basis(), 6))
for x, y in itertools.product(pool, repeat=2):
    c = model.compare(x, y)
    print(f"{model.format(x):>12} <= {model.format(y):<12} {c.verdict} ({c.certificate})")

print("axioms:", "pass" if check_cu_axioms(model, budget=40).passed else "FAIL")
rep = functor_continuity_check([[[2]]], pairs=50, seed=0, horizon=64)
print("continuity:", rep.verdicts[0].verdict, rep.verdicts[0].note)
