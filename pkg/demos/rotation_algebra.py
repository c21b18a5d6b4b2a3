"""An irrational rotation algebra with angle sqrt(2) - 1.

K0 is Z^2 ordered by the trace 1 + theta, so (1, -1) is positive while
(-1, 1) is not.  Soft elements compare with projections through the trace.
"""
from cuntz.elliott import rotation_model
from cuntz.values import QuadraticNumber

theta = QuadraticNumber(-1, 1, 2)
r = rotation_model(theta)
for v in ((1, -1), (-1, 1), (0, 1), (3, -7)):
    print(v, "positive" if r.V.positive(v) else "not positive")

p = r.closed((0, 1))
for alpha in (theta, theta + QuadraticNumber(1, 0, 2) / 100):
    x = r.open(alpha)
    print(f"{r.format(x)} <= {r.format(p)}: {r.leq(x, p)};  {r.format(p)} <= {r.format(x)}: {r.leq(p, x)}")
