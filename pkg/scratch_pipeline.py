"""End-to-end prototype of the asymptotic pipeline. Development only."""
import time
from fractions import Fraction as Fr

import mpmath as mp

mp.mp.dps = 40

# ---------------- polynomial tables (dense: [beta_power][t_power] -> Fraction, t = a^2)


def poly_new():
    return []


def poly_get(P, k, j):
    if k < len(P) and j < len(P[k]):
        return P[k][j]
    return Fr(0)


def poly_set(P, k, j, val):
    while len(P) <= k:
        P.append([])
    row = P[k]
    while len(row) <= j:
        row.append(Fr(0))
    row[j] = val


def poly_add(P, Q):
    R = poly_new()
    for k in range(max(len(P), len(Q))):
        for j in range(max(len(P[k]) if k < len(P) else 0, len(Q[k]) if k < len(Q) else 0)):
            v = poly_get(P, k, j) + poly_get(Q, k, j)
            if v:
                poly_set(R, k, j, v)
    return R


def poly_mul(P, Q):
    R = poly_new()
    for k1, row1 in enumerate(P):
        for j1, c1 in enumerate(row1):
            if not c1:
                continue
            for k2, row2 in enumerate(Q):
                for j2, c2 in enumerate(row2):
                    if not c2:
                        continue
                    poly_set(R, k1 + k2, j1 + j2, poly_get(R, k1 + k2, j1 + j2) + c1 * c2)
    return R


def poly_scale(P, c):
    return [[ci * c for ci in row] for row in P]


def poly_diff_beta(P):
    R = poly_new()
    for k in range(1, len(P)):
        for j, c in enumerate(P[k]):
            if c:
                poly_set(R, k - 1, j, c * k)
    return R


def poly_int_beta(P):
    R = poly_new()
    for k, row in enumerate(P):
        for j, c in enumerate(row):
            if c:
                poly_set(R, k + 1, j, c / (k + 1))
    return R


def mono(k, j, c):
    P = poly_new()
    poly_set(P, k, j, Fr(c))
    return P


def poly_eval(P, beta, t):
    # Horner in beta; coefficient polys in t evaluated directly
    acc = mp.mpc(0)
    for row in reversed(P):
        cj = mp.mpc(0)
        tp = mp.mpf(1)
        for c in row:
            if c:
                cj += mp.mpf(c.numerator) / mp.mpf(c.denominator) * tp
            tp *= t
        acc = acc * beta + cj
    return acc


# ---- e / etilde seeds and recursion (variable beta-hat, t = alpha^2)
def e_seeds():
    e1 = poly_mul(mono(1, 0, Fr(1, 24)), poly_add(poly_add(mono(2, 2, 5), mono(1, 1, 15)), mono(0, 0, 9)))
    br = poly_add(mono(1, 1, 1), mono(0, 0, 2))  # t*b + 2
    e2 = poly_mul(poly_mul(mono(2, 0, Fr(1, 16)), poly_mul(br, br)),
                  poly_add(poly_add(mono(2, 2, 5), mono(1, 1, 10)), mono(0, 0, 3)))
    return e1, e2


def etilde_seeds():
    t1 = poly_mul(mono(1, 0, Fr(-1, 24)), poly_add(poly_add(mono(2, 2, 7), mono(1, 1, 21)), mono(0, 0, 15)))
    br = poly_add(mono(1, 1, 1), mono(0, 0, 2))
    t2 = poly_mul(poly_mul(mono(2, 0, Fr(-1, 16)), poly_mul(br, br)),
                  poly_add(poly_add(mono(2, 2, 7), mono(1, 1, 14)), mono(0, 0, 5)))
    return t1, t2


def recurse(seeds, G, max_s):
    """Shared recursion: E_{s+1} = (1/2) G dE_s + (1/2) Int_0^b G(p) sum_j dE_j dE_{s-j} dp."""
    tab = list(seeds)
    while len(tab) < max_s:
        s = len(tab)  # building E_{s+1} with s = current top index
        first = poly_scale(poly_mul(G, poly_diff_beta(tab[s - 1])), Fr(1, 2))
        acc = poly_new()
        for j in range(1, s - 1 + 1):
            if s - j < 1:
                continue
            acc = poly_add(acc, poly_mul(poly_diff_beta(tab[j - 1]), poly_diff_beta(tab[s - j - 1])))
        second = poly_scale(poly_int_beta(poly_mul(G, acc)), Fr(1, 2))
        tab.append(poly_add(first, second))
    return tab


# G for the pcf e-recursion: bhat^2 (t bhat + 2)^2
br = poly_add(mono(1, 1, 1), mono(0, 0, 2))
G_pcf = poly_mul(mono(2, 0, 1), poly_mul(br, br))
# G for Legendre: beta (t beta + 2) ((t - t^2) beta^2 + (2 - 2t) beta - 1)
G_leg = poly_mul(poly_mul(mono(1, 0, 1), poly_add(mono(1, 1, 1), mono(0, 0, 2))),
                 poly_add(poly_add(poly_add(mono(2, 1, 1), mono(2, 2, -1)), poly_add(mono(1, 0, 2), mono(1, 1, -2))), mono(0, 0, -1)))


def E_seeds():
    E1 = poly_mul(mono(1, 0, Fr(1, 24)),
                  poly_add(poly_add(poly_add(mono(2, 2, 5), mono(2, 3, -5)), poly_add(mono(1, 1, 15), mono(1, 2, -15))),
                           poly_add(mono(0, 1, -12), mono(0, 0, 9))))
    f1 = poly_add(mono(1, 1, 1), mono(0, 0, 2))
    f2 = poly_add(poly_add(poly_add(mono(2, 1, 1), mono(2, 2, -1)), poly_add(mono(1, 0, 2), mono(1, 1, -2))), mono(0, 0, -1))
    # corrected seed: leading term 5 a^4 (1-a^2) beta^2
    f3 = poly_add(poly_add(poly_add(mono(2, 2, 5), mono(2, 3, -5)), poly_add(mono(1, 1, 10), mono(1, 2, -10))),
                  poly_add(mono(0, 1, -4), mono(0, 0, 3)))
    E2 = poly_mul(poly_mul(poly_mul(mono(1, 0, Fr(1, 16)), f1), f2), f3)
    return E1, E2


MAXS = 7
e_tab = recurse(e_seeds(), G_pcf, MAXS)
et_tab = recurse(etilde_seeds(), G_pcf, MAXS)
E_tab = recurse(E_seeds(), G_leg, MAXS)
print("tables built; deg E7 =", len(E_tab[6]) - 1)

# ---------------- d-constants via exact Stirling pipeline (Laurent in T, then numeric)
BERN = {1: Fr(1, 6), 2: Fr(-1, 30), 3: Fr(1, 42), 4: Fr(-1, 30), 5: Fr(5, 66)}


def d_series(max_order=9):
    """Coefficients of (1/2)ln(C1/C2) as series in 1/u: dict order -> {Tpow: Fraction}."""
    out = {}

    def add(order, tpow, val):
        if order > max_order:
            return
        out.setdefault(order, {})
        out[order][tpow] = out[order].get(tpow, Fr(0)) + val

    # (1/2) u T ln(1+eps) - 1/4, eps = 1/(2uT):  sum_{j>=2} (1/2)(-1)^{j+1} 2^{-j} T^{1-j} y^{j-1}
    for j in range(2, max_order + 2):
        add(j - 1, 1 - j, Fr((-1) ** (j + 1), 2) * Fr(1, 2 ** j) / j)
    # (1/2) S(uT + 1/2) = (1/2) sum_k g_k sum_m C(1-2k, m) 2^-m T^{1-2k-m} y^{2k-1+m}
    for k in range(1, (max_order + 1) // 2 + 1):
        gk = BERN[k] / (2 * k * (2 * k - 1))
        binom = Fr(1)
        for m in range(0, max_order - (2 * k - 1) + 1):
            if m > 0:
                binom *= Fr(1 - 2 * k - (m - 1), m)
            add(2 * k - 1 + m, 1 - 2 * k - m, Fr(1, 2) * gk * binom * Fr(1, 2 ** m))
        # -S(u)
        add(2 * k - 1, 0, -gk)
    return out


DS = d_series(9)
for order in sorted(DS):
    if order % 2 == 0:
        tot = sum(abs(v) for v in DS[order].values())
        assert tot == 0, f"even order {order} nonzero: {DS[order]}"
print("even orders vanish exactly: OK")


def d_eval(order, alpha2):
    T = (4 - alpha2) / 2
    s = mp.mpf(0)
    for tp, c in DS[order].items():
        s += mp.mpf(c.numerator) / mp.mpf(c.denominator) * mp.power(T, tp)
    return s


# check printed forms
a2 = mp.mpf(0)
print("d1(0):", d_eval(1, a2), " want -3/32 =", mp.mpf(-3) / 32)
print("d3(0):", d_eval(3, a2), " want 3/1024 =", mp.mpf(3) / 1024)
print("d5(0):", d_eval(5, a2), " want -33/40960 =", mp.mpf(-33) / 40960)
for al2 in [mp.mpf("0.268"), mp.mpf("0.8")]:
    d1p = -(9 - 2 * al2) / (24 * (4 - al2))
    d3p = (135 - 96 * al2 + 24 * al2 ** 2 - 2 * al2 ** 3) / (720 * (4 - al2) ** 3)
    d5p = -(2079 - 2560 * al2 + 1280 * al2 ** 2 - 320 * al2 ** 3 + 40 * al2 ** 4 - 2 * al2 ** 5) / (2520 * (4 - al2) ** 5)
    print("alpha2=", al2, " diffs:", mp.nstr(d_eval(1, al2) - d1p, 3), mp.nstr(d_eval(3, al2) - d3p, 3), mp.nstr(d_eval(5, al2) - d5p, 3))

# ---------------- parameters
nu = mp.mpf(50)
u = nu + mp.mpf("0.5")
a = mp.mpf("0.5")
sig = mp.sqrt(1 - a * a)
muv = sig * u
alpha2 = 2 * (1 - sig)
alpha = mp.sqrt(alpha2)
bweb = muv - nu - mp.mpf("0.5")  # = -u alpha^2/2
t_a = a * a
print("u,mu,alpha,b:", u, muv, alpha, bweb, " check:", bweb + u * alpha2 / 2)


# ---------------- zeta solvers
def zeta_osc(x):
    # eq162: S(x) = T(zeta), x in (-a, a)
    Sx = mp.asin(x / a) - sig * mp.atan(x * mp.sqrt((1 - a * a) / (a * a - x * x)))
    z = alpha * x / a  # initial guess
    for _ in range(80):
        F = z * mp.sqrt(alpha2 - z * z) / 2 + alpha2 / 2 * mp.asin(z / alpha) - Sx
        dF = mp.sqrt(alpha2 - z * z)
        step = F / dF
        z -= step
        if abs(step) < mp.mpf(10) ** (-mp.mp.dps + 2):
            break
    return z


def zeta_exp(x):
    # eq163 region: x in (a,1): 0.5 z sqrt(z^2-al^2) - 0.5 al^2 arccosh(z/al) = xi(x)
    xiv = sig * mp.atanh(mp.sqrt((x * x - a * a) / (1 - a * a)) / x) - mp.acosh(x / a)
    z = alpha + mp.sqrt(xiv)  # rough
    for _ in range(120):
        F = z * mp.sqrt(z * z - alpha2) / 2 - alpha2 / 2 * mp.acosh(z / alpha) - xiv
        dF = mp.sqrt(z * z - alpha2)
        step = F / dF
        z -= step
        if abs(step) < mp.mpf(10) ** (-mp.mp.dps + 2):
            break
    return z


# ---------------- PCF series with boost
def pcf_UV(b, x, need_digits):
    q = mp.mpf(1) / 4
    est_cancel = int(mp.ceil(mp.mpf(x) ** 2 / 4 * mp.log10(mp.e))) + 10
    with mp.workdps(need_digits + est_cancel + 15):
        b = mp.mpf(b)
        x = mp.mpf(x)
        sp = mp.sqrt(mp.pi)
        U0 = sp * mp.power(2, -b / 2 - q) * mp.rgamma(b / 2 + 3 * q)
        U0p = -sp * mp.power(2, -b / 2 + q) * mp.rgamma(b / 2 + q)
        V0 = mp.power(2, b / 2 + q) * mp.sin(mp.pi * (b / 2 + q)) * mp.rgamma(3 * q - b / 2)
        V0p = mp.power(2, b / 2 + 3 * q) * mp.cos(mp.pi * (b / 2 + q)) * mp.rgamma(q - b / 2)
        vals = []
        for c0, c1 in ((U0, U0p), (V0, V0p)):
            c = [c0, c1]
            y = c0 + c1 * x
            yp = c1
            xp = x
            k = 1
            while True:
                nxt = b * c[k - 1] + (c[k - 3] / 4 if k >= 3 else 0)
                ck1 = nxt / (k * (k + 1))
                c.append(ck1)
                xp_next = xp * x  # x^(k+1)
                term = ck1 * xp_next
                y += term
                yp += (k + 1) * ck1 * xp
                xp = xp_next
                k += 1
                if k > 8 and abs(term) < mp.mpf(10) ** (-(need_digits + est_cancel + 10)) * max(abs(y), mp.mpf(1)):
                    break
            vals.extend([y, yp])
    return vals  # U, U', V, V'


# ---------------- blocks at a real x
PHI4 = mp.power(mp.pi, mp.mpf(1) / 4)


def assemble(x, n=4, dps_blocks=70):
    osc = abs(x) < a
    with mp.workdps(dps_blocks):
        if osc:
            zet = zeta_osc(x)
            X = mp.mpc(0, 1) * mp.sqrt(a * a - x * x)
            wz = mp.mpc(0, 1) * mp.sqrt(alpha2 - zet * zet)
        else:
            zet = zeta_exp(x)
            X = mp.sqrt(x * x - a * a)
            wz = mp.sqrt(zet * zet - alpha2)
        beta = x / (a * a * X) - 1 / (a * a)
        bhat = zet / (alpha2 * wz) - 1 / alpha2
        Ev = [poly_eval(E_tab[s - 1], beta, t_a) for s in range(1, MAXS + 1)]
        ev = [poly_eval(e_tab[s - 1], bhat, alpha2) for s in range(1, MAXS + 1)]
        etv = [poly_eval(et_tab[s - 1], bhat, alpha2) for s in range(1, MAXS + 1)]
        dv = {k: d_eval(k, alpha2) for k in (1, 3, 5, 7)}
        # combined
        cE = [Ev[s - 1] + (-1) ** s * ev[s - 1] for s in range(1, MAXS + 1)]
        cEt = [Ev[s - 1] + (-1) ** s * etv[s - 1] for s in range(1, MAXS + 1)]
        o1, o3, o5 = cEt[0] + dv[1], cEt[2] + dv[3], cEt[4] + dv[5]
        p2, p4, p6 = cEt[1], cEt[3], cEt[5]
        A2 = p2 + o1 ** 2 / 2
        A4 = p4 + p2 ** 2 / 2 + p2 * o1 ** 2 / 2 + o1 * o3 + o1 ** 4 / 24
        A6 = (p6 + p2 * p4 + p2 ** 3 / 6 + (p4 + p2 ** 2 / 2) * o1 ** 2 / 2
              + p2 * (o1 * o3 + o1 ** 4 / 24) + o3 ** 2 / 2 + o1 * o5 + o1 ** 3 * o3 / 6 + o1 ** 6 / 720)
        q1, q3, q5, q7 = cE[0] + dv[1], cE[2] + dv[3], cE[4] + dv[5], cE[6] + dv[7]
        r2, r4, r6 = cE[1], cE[3], cE[5]
        b1 = q1
        b3 = q3 + q1 ** 3 / 6 + r2 * q1
        b5 = (q5 + q1 ** 2 * q3 / 2 + q1 ** 5 / 120) + r2 * (q3 + q1 ** 3 / 6) + (r4 + r2 ** 2 / 2) * q1
        b7 = ((q7 + q1 ** 2 * q5 / 2 + q1 * q3 ** 2 / 2 + q1 ** 4 * q3 / 24 + q1 ** 7 / 5040)
              + r2 * (q5 + q1 ** 2 * q3 / 2 + q1 ** 5 / 120)
              + (r4 + r2 ** 2 / 2) * (q3 + q1 ** 3 / 6)
              + (r6 + r2 * r4 + r2 ** 3 / 6) * q1)
        Aser = 1 + A2 / u ** 2 + A4 / u ** 4 + A6 / u ** 6
        Bser = (b1 / u + b3 / u ** 3 + b5 / u ** 5 + b7 / u ** 7) / (u * wz)
        R4 = mp.sqrt(wz / X)
        lam = PHI4 / (mp.power(u, mp.mpf(1) / 4) * mp.sqrt(2) * mp.exp(mp.loggamma(u + muv + mp.mpf("0.5")) / 2))
        calA = lam * R4 * Aser
        calB = lam * R4 * Bser
    return mp.mpf(zet), mp.mpc(calA), mp.mpc(calB), (mp.mpc(A2), mp.mpc(A4), mp.mpc(A6))


t0 = time.time()
for x in [mp.mpf("0.2"), mp.mpf("0.8"), mp.mpf("0.3"), mp.mpf("0.44"), mp.mpf("0.6"), mp.mpf("0.02"), mp.mpf("0.9")]:
    zet, calA, calB, A2s = assemble(x)
    xU = mp.sqrt(2 * u) * zet
    U, Up, V, Vp = pcf_UV(bweb, xU, 45)
    P4 = mp.sqrt(2 / mp.pi) * (U * calA + mp.sqrt(2 * u) * Up * calB)
    Q4 = mp.sqrt(mp.pi / 2) * mp.gamma(nu - muv + 1) * (V * calA + mp.sqrt(2 * u) * Vp * calB)
    with mp.workdps(60):
        Pref = mp.legenp(nu, -muv, x, type=2)
        Qref = mp.legenq(nu, -muv, x, type=2)
    relP = abs((mp.re(P4) - Pref)) / abs(Pref)
    relQ = abs((mp.re(Q4) - Qref)) / abs(Qref)
    print(f"x={float(x):5.2f} zeta={float(zet):8.5f} relP={mp.nstr(relP, 3)} relQ={mp.nstr(relQ, 3)} ImP={mp.nstr(abs(mp.im(P4)), 2)}")
print("A2(0.5, z=0): ", mp.nstr(mp.re(assemble(mp.mpf(0))[3][0]), 12), " want ", mp.nstr(-1 / (8 * (4 - alpha2) ** 2), 12))
print("elapsed", time.time() - t0)
