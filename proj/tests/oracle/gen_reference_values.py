#!/usr/bin/env python3
"""Arbitrary-precision reference values for the C++ test suite.

Run with mpmath installed; paste the printed literals into the tests.
Each block states the quantity and the quadrature/formula used, so the
values can be regenerated independently of the library under test.
"""
import mpmath as mp

mp.mp.dps = 40


def phi(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def Phi(x):
    return mp.ncdf(x)


def PhiInv(p):
    return mp.sqrt(2) * mp.erfinv(2 * p - 1)


def owens_t(h, a):
    f = lambda t: mp.exp(-h * h * (1 + t * t) / 2) / (1 + t * t)
    return mp.quad(f, [0, a]) / (2 * mp.pi)


def bvn_cdf(x, y, rho):
    # P(Z1<=x, Z2<=y) via 1-d integral of phi(t)*Phi((y-rho t)/sqrt(1-rho^2))
    s = mp.sqrt(1 - rho * rho)
    f = lambda t: phi(t) * Phi((y - rho * t) / s)
    return mp.quad(f, [-mp.inf, x])


def fmt(v):
    return mp.nstr(v, 18)


print("== standard normal quantiles (p, PhiInv(p)) ==")
for p in ["1e-300", "1e-100", "1e-20", "1e-10", "0.001", "0.025", "0.1",
          "0.3", "0.5", "0.7", "0.975", "0.999", "1-1e-10"]:
    pv = mp.mpf(p) if not p.startswith("1-") else 1 - mp.mpf(p[2:])
    print(f"  {{{p!r}, {fmt(PhiInv(pv))}}},")

print("== Owen T values (h, a, T) ==")
for h, a in [(0.0625, 0.25), (6.5, 0.4375), (7, 0.96875), (4.78125, 0.0625),
             (2, 0.5), (1, 0.9999975), (0.5, 2.0), (0.5, 100.0), (0.25, 10.0),
             (3.0, -1.5), (-2.5, 3.0), (1.5, 1.0)]:
    print(f"  {{{h}, {a}, {fmt(owens_t(mp.mpf(h), mp.mpf(a)))}}},")

print("== bivariate normal cdf (x, y, rho, P) ==")
for x, y, r in [(0, 0, 0.5), (1, -0.5, 0.3), (0.5, 1.2, -0.7), (-1, -1, 0.9),
                (2, 0.3, 0.75), (0.3, 0.2, 0.95), (-0.5, 0.25, -0.99),
                (3, 3, 0.5), (-3.5, 1, 0.35), (0, 0, -0.5), (1.5, 1.5, 0.97)]:
    print(f"  {{{x}, {y}, {r}, {fmt(bvn_cdf(mp.mpf(x), mp.mpf(y), mp.mpf(r)))}}},")

print("== bivariate normal pdf at (0,0), mu=(0,0), s=(1,1), rho=0.5 ==")
rho = mp.mpf('0.5')
print(" ", fmt(1 / (2 * mp.pi * mp.sqrt(1 - rho ** 2))))

print("== skew normal: mean=1, variance=2, skewness=0.9 ==")
# centered -> direct parameterisation
g1 = mp.mpf('0.9')
b = mp.sqrt(2 / mp.pi)
t = mp.cbrt(2 * g1 / (4 - mp.pi))
delta = t / (b * mp.sqrt(1 + t * t))
alpha = delta / mp.sqrt(1 - delta * delta)
omega = mp.sqrt(2) / mp.sqrt(1 - b * b * delta * delta)
xi = 1 - omega * b * delta
print(f"  xi={fmt(xi)} omega={fmt(omega)} alpha={fmt(alpha)} delta={fmt(delta)}")
sn_pdf = lambda x: 2 / omega * phi((x - xi) / omega) * Phi(alpha * (x - xi) / omega)
print("  pdf(1)      =", fmt(sn_pdf(mp.mpf(1))))
print("  pdf(2.5)    =", fmt(sn_pdf(mp.mpf('2.5'))))
print("  cdf(1)      =", fmt(mp.quad(sn_pdf, [-mp.inf, 1])))   # quadrature oracle on the pdf
print("  cdf(0.25)   =", fmt(mp.quad(sn_pdf, [-mp.inf, mp.mpf('0.25')])))
print("  cdf(3.7)    =", fmt(mp.quad(sn_pdf, [-mp.inf, mp.mpf('3.7')])))

print("== Luo mean estimator, q=(0,1,2,4,10), n=17 ==")
q0, q1, q2, q3, q4 = map(mp.mpf, (0, 1, 2, 4, 10))
n = mp.mpf(17)
w1 = mp.mpf('2.2') / (mp.mpf('2.2') + n ** mp.mpf('0.75'))
w2 = mp.mpf('0.7') - mp.mpf('0.72') / n ** mp.mpf('0.55')
print("  ", fmt(w1 * (q0 + q4) / 2 + w2 * (q1 + q3) / 2 + (1 - w1 - w2) * q2))

print("== Wan / Shi sd estimators, q=(30,40,50,60,70), n=21 ==")
q0, q1, q2, q3, q4 = map(mp.mpf, (30, 40, 50, 60, 70))
n = mp.mpf(21)
zeta = 2 * PhiInv((n - mp.mpf('0.375')) / (n + mp.mpf('0.25')))
eta = 2 * PhiInv((mp.mpf('0.75') * n - mp.mpf('0.125')) / (n + mp.mpf('0.25')))
th1 = (2 + mp.mpf('0.14') * n ** mp.mpf('0.6')) * PhiInv((n - mp.mpf('0.375')) / (n + mp.mpf('0.25')))
th2 = (2 + 2 / (mp.mpf('0.07') * n ** mp.mpf('0.6'))) * PhiInv((mp.mpf('0.75') * n - mp.mpf('0.125')) / (n + mp.mpf('0.25')))
print("  wan =", fmt((q4 - q0) / zeta / 2 + (q3 - q1) / eta / 2))
print("  shi =", fmt((q4 - q0) / th1 + (q3 - q1) / th2))

print("== log Phi at deep-tail points ==")
for x in [-10, -20, -38.4]:
    print(f"  {{{x}, {fmt(mp.log(Phi(mp.mpf(x))))}}},")
