"""A contraction d with d b d* = (a - eps)+ when a and b are close.

The contraction is computed numerically and both postconditions are checked
against the tolerance.
"""
from fractions import Fraction

from cuntz.kr import kr_contraction
from cuntz.matrix import DenseElement

a = DenseElement.diag([1, 1])
b = DenseElement.diag([1, Fraction(9, 10)])
res = kr_contraction(a, b, Fraction(1, 5))
print("d =", [[round(v, 6) for v in row] for row in res.d_float()[0]])
print(f"residual {res.residual:.2e}, norm {res.norm:.6f}, iterations {res.iterations}")
