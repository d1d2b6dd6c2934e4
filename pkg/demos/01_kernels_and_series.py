"""Walk through the kernel catalog and its spectral side.

Every kernel here is a zonal function of the dot product t = x . y of two
unit vectors.  Each family also has a sequence of squared spectral symbols
A_n^2; the reciprocal-symbol Legendre series reproduces the closed forms,
which is the cross-check run at the end.
"""

import math

import numpy as np

from sphereq import KernelSpec, kernel_derivative, kernel_eval, kernel_series_eval, symbol_squared

pycke = KernelSpec("pycke")
cf = KernelSpec("cui-freeden")

print("closed forms at a few arguments")
for t in (-1.0, -1 / 3, 0.0, 0.5):
    print(f"  t={t:+.3f}  pycke={kernel_eval(pycke, t):+.6f}  "
          f"cui-freeden={kernel_eval(cf, t):+.6f}  "
          f"gine={kernel_eval(KernelSpec('gine'), t):+.6f}  "
          f"ajne={kernel_eval(KernelSpec('ajne'), t):+.6f}")

print("\nderivative kernels are closed forms too (constants dropped):")
d1 = kernel_derivative(pycke)
d2 = kernel_derivative(d1)
print(f"  {d1.name}(t=0)  = {kernel_eval(d1, 0.0):.6f}   (1/(1-t) at t=0)")
print(f"  {d2.name}(t=-1) = {kernel_eval(d2, -1.0):.6f}   (1/(1-t)^2 at t=-1)")

print("\nsquared symbols A_n^2 (None marks a missing mode):")
for n in (1, 2, 3, 4, 5):
    print(f"  n={n}:  pycke={symbol_squared('pycke', n):>6}  "
          f"cui-freeden={symbol_squared('cui-freeden', n):>6}  "
          f"gine={symbol_squared('gine', n)}  ajne={symbol_squared('ajne', n)}")

print("\ntruncated series vs closed form (pycke carries the same 1/(4pi)):")
for t in np.linspace(-0.9, 0.9, 5):
    series = kernel_series_eval("pycke", 0, float(t), 4000)
    print(f"  t={t:+.2f}  series={series.value:+.8f}  "
          f"closed={kernel_eval(pycke, float(t)):+.8f}  "
          f"tail~{series.tail_estimate:.1e}")

print("\nthe cui-freeden convention differs by exactly 4pi:")
t = 0.25
series = kernel_series_eval("cui-freeden", 0, t, 4000).value
print(f"  4pi * series = {4 * math.pi * series:+.8f}   "
      f"closed = {kernel_eval(cf, t):+.8f}")
