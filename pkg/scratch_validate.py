"""Pre-freeze validation of closed forms against mpmath's own implementations.

Run once during development; nothing here ships.
"""
import mpmath as mp

mp.mp.dps = 50


def check(name, got, want, tol=1e-40):
    got, want = mp.mpf(got) if not isinstance(got, mp.mpc) else got, want
    err = abs(mp.mpf(1) * (got - want)) / max(abs(want), mp.mpf(1e-30))
    status = "OK " if err < tol else "FAIL"
    print(f"{status} {name:50s} rel={mp.nstr(err, 3)}")


# ---- PCF x=0 values (candidate DLMF 12.2.6-12.2.9) vs mpmath.pcfu/pcfv
for b in [mp.mpf("-6.765717"), mp.mpf("0.3"), mp.mpf("2.5"), mp.mpf("-0.5"), mp.mpf("1.25")]:
    U0 = mp.sqrt(mp.pi) / (mp.power(2, b / 2 + mp.mpf(1) / 4) * mp.gamma(b / 2 + mp.mpf(3) / 4))
    U0p = -mp.sqrt(mp.pi) / (mp.power(2, b / 2 - mp.mpf(1) / 4) * mp.gamma(b / 2 + mp.mpf(1) / 4))
    V0 = mp.power(2, b / 2 + mp.mpf(1) / 4) / mp.gamma(mp.mpf(3) / 4 - b / 2)
    V0p = mp.power(2, b / 2 + mp.mpf(3) / 4) / mp.gamma(mp.mpf(1) / 4 - b / 2)
    check(f"U({b},0)", U0, mp.pcfu(b, 0))
    check(f"U'({b},0)", U0p, mp.diff(lambda t: mp.pcfu(b, t), 0), tol=1e-30)
    check(f"V({b},0)", V0, mp.pcfv(b, 0))
    check(f"V'({b},0)", V0p, mp.diff(lambda t: mp.pcfv(b, t), 0), tol=1e-30)

# U(-1/2, x) = exp(-x^2/4)
for x in [mp.mpf("0.7"), mp.mpf("2.0")]:
    check(f"U(-1/2,{x})=e^(-x^2/4)", mp.pcfu(mp.mpf("-0.5"), x), mp.exp(-x * x / 4))

# ---- Ferrers x=0 values (DLMF 14.5.1-14.5.4 with mu -> -mu) vs mpmath type=2
nu = mp.mpf(50)
u = nu + mp.mpf(1) / 2
for a in [mp.mpf("0.5"), mp.mpf("0.1")]:
    mu = mp.sqrt(1 - a * a) * u
    P0 = mp.power(2, -mu) * mp.sqrt(mp.pi) / (mp.gamma(nu / 2 + mu / 2 + 1) * mp.gamma(mp.mpf(1) / 2 - nu / 2 + mu / 2))
    P0p = -mp.power(2, 1 - mu) * mp.sqrt(mp.pi) / (mp.gamma(nu / 2 + mu / 2 + mp.mpf(1) / 2) * mp.gamma(-nu / 2 + mu / 2))
    Q0 = -mp.power(2, -mu - 1) * mp.sqrt(mp.pi) * mp.sin((nu - mu) * mp.pi / 2) * mp.gamma(nu / 2 - mu / 2 + mp.mpf(1) / 2) / mp.gamma(nu / 2 + mu / 2 + 1)
    Q0p = mp.power(2, -mu) * mp.sqrt(mp.pi) * mp.cos((nu - mu) * mp.pi / 2) * mp.gamma(nu / 2 - mu / 2 + 1) / mp.gamma(nu / 2 + mu / 2 + mp.mpf(1) / 2)
    check(f"P(0) a={a}", P0, mp.legenp(nu, -mu, 0, type=2), tol=1e-35)
    check(f"P'(0) a={a}", P0p, mp.diff(lambda t: mp.legenp(nu, -mu, t, type=2), 0), tol=1e-25)
    check(f"Q(0) a={a}", Q0, mp.legenq(nu, -mu, 0, type=2), tol=1e-35)
    check(f"Q'(0) a={a}", Q0p, mp.diff(lambda t: mp.legenq(nu, -mu, t, type=2), 0), tol=1e-25)

    # hypergeometric representation, x on both sides of the turning point
    for x in [mp.mpf("0.2"), mp.mpf("0.8")]:
        Pseries = mp.power((1 - x) / (1 + x), mu / 2) / mp.gamma(1 + mu) * mp.hyp2f1(nu + 1, -nu, 1 + mu, (1 - x) / 2)
        check(f"P series x={x} a={a}", Pseries, mp.legenp(nu, -mu, x, type=2), tol=1e-35)

# ---- xi closed form (arctanh/arccosh) vs defining integral
for a in [mp.mpf("0.5"), mp.mpf("0.1")]:
    for x in [mp.mpf("0.9"), a + mp.mpf("0.1")]:
        xi_cf = mp.sqrt(1 - a * a) * mp.atanh(mp.sqrt((x * x - a * a) / (1 - a * a)) / x) - mp.acosh(x / a)
        xi_q = mp.quad(lambda t: mp.sqrt(t * t - a * a) / (1 - t * t), [a, x])
        check(f"xi({x}) a={a}", xi_cf, xi_q, tol=1e-35)

# ---- Wronskians at a sample point
b, x = mp.mpf("0.3"), mp.mpf("0.7")
W = mp.pcfu(-b, x) * mp.diff(lambda t: mp.pcfu(-b, -t), x) - mp.diff(lambda t: mp.pcfu(-b, t), x) * mp.pcfu(-b, -x)
check("W{U(-b,x),U(-b,-x)}", W, mp.sqrt(2 * mp.pi) / mp.gamma(mp.mpf(1) / 2 - b), tol=1e-25)
b2, x2 = mp.mpf("2.5"), mp.mpf("0.4")
W2 = mp.pcfu(b2, x2) * mp.diff(lambda t: mp.pcfv(b2, t), x2) - mp.diff(lambda t: mp.pcfu(b2, t), x2) * mp.pcfv(b2, x2)
check("W{U,V}", W2, mp.sqrt(2 / mp.pi), tol=1e-25)
