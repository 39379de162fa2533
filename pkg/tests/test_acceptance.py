"""Acceptance criteria, one test per criterion, at the pinned tolerances.

Each test prints a single PASS/FAIL line (visible with pytest -s or -rA);
the assertions are the authoritative gate.
"""

import math

import numpy as np

from hypfrac.geometry import (
    BallPoint,
    ball_volume,
    dyadic_ladder,
    ring_sector_volume,
)
from hypfrac.gyro import (
    EigenParams,
    GyroElement,
    cancellation_check,
    cosub,
    cosub_compositional,
    eigenfunction,
    gyration,
    mobius_add,
    neg,
    sphere_integral_E,
    sphere_integral_E_reference,
    transport_prefactor,
)
from hypfrac.kernel import euclidean_limit_ratio, invariance_integral, kernel_sinh2
from hypfrac.operator import (
    EllipticityBounds,
    SphericalTransform,
    apply_fraclap,
    arccos_inequalities,
    barrier_alpha_sweep,
    envelope,
    gaussian_bump,
    polar_grid,
)
from hypfrac.quadrature import QuadratureConfig
from hypfrac.scale import (
    i0_closed,
    i0_quadrature,
    iinf_closed,
    iinf_quadrature,
    monotonicity_report,
    r0_solve,
)
from hypfrac.specfun import (
    bessel_i,
    bessel_k,
    c_integral,
    l_integral,
    ratio_bounds_check,
    s_integral,
)
from hypfrac.geometry import aux_H

T = 2.0
SEED = 314159


def report(num, ok, detail):
    print(f"ACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def gyro_sample(rng, frac=0.8):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return GyroElement(v * T * frac * rng.uniform() ** (1 / 3), T)


def test_criterion_01_normalizing_constant_identity():
    worst = 0.0
    for lam in (0.0, 0.5, 1.0, 2.0, 4.0):
        for g in (0.2, 0.5, 0.8, 0.95):
            got = invariance_integral(lam, g, 2.0)
            want = (lam * lam + 1.0) ** g
            worst = max(worst, abs(got / want - 1.0))
    report(1, worst <= 1e-6,
           f"invariance integral matches (lam^2+1)^gamma, worst rel {worst:.2e}")


def test_criterion_02_imaginary_part_vanishing():
    rng = np.random.default_rng(SEED)
    cfg = QuadratureConfig(rel_tol=1e-11, abs_tol=1e-13)
    worst_im = worst_re = 0.0
    for _ in range(20):
        lam = rng.uniform(0.1, 3.0)
        r = rng.uniform(0.1, 0.9 * T)
        z = BallPoint(gyro_sample(rng, 0.7).vec)
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        val = sphere_integral_E(lam, r, z, cfg=cfg, xi=xi)
        want = sphere_integral_E_reference(lam, r)
        worst_im = max(worst_im, abs(val.imag))
        worst_re = max(worst_re, abs(val.real - want) / max(1.0, abs(want)))
    ok = worst_im <= 1e-8 and worst_re <= 1e-7
    report(2, ok, f"sphere integral of E: |Im| {worst_im:.2e}, Re err {worst_re:.2e}")


GRID_R = np.linspace(0.1, 5.0, 15)
GRID_G = np.linspace(0.1, 0.95, 8)


def test_criterion_03_scale_oracle_equivalence():
    worst = 0.0
    count = 0
    for R in GRID_R:
        for g in GRID_G:
            worst = max(worst, abs(i0_closed(R, g) / i0_quadrature(R, g) - 1.0))
            worst = max(worst, abs(iinf_closed(R, g) / iinf_quadrature(R, g) - 1.0))
            count += 1
    ok = worst <= 1e-8 and count >= 100
    report(3, ok, f"scale closed forms vs quadrature on {count} points, worst {worst:.2e}")


def test_criterion_04_gamma_limits():
    gammas = (0.9, 0.99, 0.999)
    e_i0 = [abs(i0_closed(1.0, g) - 6.0) for g in gammas]
    e_ii = [iinf_closed(1.0, g) for g in gammas]
    e_r0 = [r0_solve(1.0, g, 0.25) for g in gammas]
    ok = (
        e_i0[-1] <= 0.05 and e_ii[-1] <= 0.05 and e_r0[-1] <= 0.05 * 0.25
        and e_i0 == sorted(e_i0, reverse=True)
        and e_ii == sorted(e_ii, reverse=True)
        and e_r0 == sorted(e_r0, reverse=True)
    )
    report(4, ok,
           f"limits gamma->1: |I0-6|={e_i0[-1]:.3f}, Iinf={e_ii[-1]:.3f}, "
           f"r0={e_r0[-1]:.2e}, all monotone")


def test_criterion_05_monotonicity_inequalities():
    worst = math.inf
    for g in GRID_G:
        rep = monotonicity_report(g, GRID_R)
        worst = min(worst,
                    rep.ratio_decreasing_margin_weighted,
                    rep.ratio_decreasing_margin_quadratic,
                    rep.comparison_margin)
    report(5, worst >= 0.0, f"scale monotonicity margins nonnegative, worst {worst:.2e}")


def test_criterion_06_gyrogroup_suite():
    rng = np.random.default_rng(SEED)
    zero = GyroElement((0.0, 0.0, 0.0), T)
    worst = {}

    def track(key, val):
        worst[key] = max(worst.get(key, 0.0), float(val))

    for _ in range(1000):
        a, b, z = gyro_sample(rng), gyro_sample(rng), gyro_sample(rng)
        track("left identity", np.linalg.norm(mobius_add(zero, a).vec - a.vec))
        track("left inverse", mobius_add(neg(a), a).norm())
        lhs = mobius_add(a, mobius_add(b, z))
        rhs = mobius_add(mobius_add(a, b), gyration(a, b, z))
        track("gyroassociativity", np.linalg.norm(lhs.vec - rhs.vec))
        track("left loop", np.linalg.norm(
            gyration(a, b, z).vec - gyration(mobius_add(a, b), b, z).vec))
        track("gyrocommutativity", np.linalg.norm(
            mobius_add(a, b).vec - gyration(a, b, mobius_add(b, a)).vec))
        cc = cancellation_check(a, b)
        track("cancellation", max(cc.left_residual, cc.right_residual))
        track("closed form", np.linalg.norm(
            cosub(a, b).vec - cosub_compositional(a, b).vec))
        lam = rng.uniform(-3.0, 3.0)
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        ep = EigenParams(-lam, xi, T)
        lhs_e = eigenfunction(ep, cosub(z, b).vec)
        rhs_e = transport_prefactor(lam, xi, b.vec, z.vec, T) * eigenfunction(ep, z.vec)
        track("transport", abs(lhs_e - rhs_e))
        v1 = rng.normal(size=3); v1 /= np.linalg.norm(v1)
        v2 = rng.normal(size=3); v2 /= np.linalg.norm(v2)
        cb = cancellation_check(
            GyroElement(v1 * 0.99 * T, T), GyroElement(v2 * 0.99 * T, T))
        track("boundary cancellation", max(cb.left_residual, cb.right_residual))

    limits = {k: (1e-9 if k in ("transport", "boundary cancellation") else 1e-10)
              for k in worst}
    ok = all(worst[k] <= limits[k] for k in worst)
    detail = ", ".join(f"{k}={worst[k]:.1e}" for k in sorted(worst))
    report(6, ok, f"gyro laws x1000: {detail}")


def test_criterion_07_jacobian():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(200):
        z, y = gyro_sample(rng, 0.7), gyro_sample(rng, 0.7)
        h = 1e-6
        jac = np.empty((3, 3))
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            fp = cosub(GyroElement(z.vec + e, T), y).vec
            fm = cosub(GyroElement(z.vec - e, T), y).vec
            jac[:, j] = (fp - fm) / (2 * h)
        from hypfrac.gyro import boxminus_jacobian

        det = float(np.linalg.det(jac))
        worst = max(worst, abs(boxminus_jacobian(z, y) / det - 1.0))
    report(7, worst <= 1e-6, f"cosub Jacobian vs finite differences, worst rel {worst:.2e}")


def test_criterion_08_euclidean_kernel_limit():
    vals = [euclidean_limit_ratio(0.5, 1.0, tau) for tau in (1.0, 10.0, 100.0, 1000.0)]
    ok = 0.999 <= vals[-1] <= 1.001 and all(b > a for a, b in zip(vals, vals[1:]))
    report(8, ok, f"kernel ratio to flat-space law: sweep {['%.6f' % v for v in vals]}")


def test_criterion_09_kernel_asymptotic_slopes():
    ok = True
    details = []
    for g in (0.3, 0.7):
        rhos = np.logspace(-4, -2, 30)
        slope0 = np.polyfit(
            np.log(rhos), [math.log(r * r * kernel_sinh2(g, r)) for r in rhos], 1)[0]
        rhos = np.logspace(3, 5, 30)
        slope_inf = np.polyfit(
            np.log(rhos), [math.log(kernel_sinh2(g, r)) for r in rhos], 1)[0]
        ok = ok and abs(slope0 - (1 - 2 * g)) <= 0.02 and abs(slope_inf - (-1 - g)) <= 0.02
        details.append(f"g={g}: {slope0:.4f}/{1-2*g}, {slope_inf:.4f}/{-1-g}")
    report(9, ok, "; ".join(details))


def test_criterion_10_spectral_cross_check():
    u = gaussian_bump()
    st = SphericalTransform(u)   # raises CalibrationError if round trip > 1e-6
    worst = 0.0
    for g in (0.3, 0.6, 0.9):
        for R0 in (0.0, 0.5):
            a = apply_fraclap(u, R0, g)
            b = st.multiplier_value(R0, g)
            worst = max(worst, abs(a / b - 1.0))
    report(10, worst <= 1e-3, f"jump integral vs spectral multiplier, worst rel {worst:.2e}")


def test_criterion_11_second_order_limit():
    u = gaussian_bump()
    errs = [abs(apply_fraclap(u, 0.0, g) + 6.0) for g in (0.9, 0.95, 0.99, 0.995)]
    ok = errs[-1] <= 0.05 * 6.0 and errs == sorted(errs, reverse=True)
    report(11, ok, f"gamma->1 recovers -6: errors {['%.4f' % e for e in errs]}")


def test_criterion_12_appendix_suite():
    rng = np.random.default_rng(SEED)

    def richardson(f, x, h):
        d1 = (f(x + h) - f(x - h)) / (2 * h)
        d2 = (f(x + h / 2) - f(x - h / 2)) / h
        return (4 * d2 - d1) / 3

    def l_noise_floor(two_k, nu, rho, h):
        # the closed form cancels pieces of this magnitude; differencing it
        # cannot beat eps * scale / (h * |derivative|)
        from hypfrac.specfun import struve_l

        k = two_k // 2
        arg = 0.5 - nu + k
        bnd = abs(
            math.sqrt(math.pi) * math.gamma(arg) * 2.0 ** (k - nu - 1.0)
            * math.factorial(2 * k) / (2.0 ** k * math.factorial(k)))
        piece = bnd * rho * (
            bessel_k(k - nu, rho) * struve_l(k - nu - 1.0, rho)
            + bessel_k(k - nu - 1.0, rho) * struve_l(k - nu, rho))
        scale = abs(piece) + abs(l_integral(two_k, nu, rho))
        want = rho ** (two_k - nu) * bessel_k(nu, rho)
        return 1e-16 * scale / (h * abs(want))

    worst_deriv = 0.0
    for _ in range(30):
        k = int(rng.integers(0, 6))
        nu = rng.uniform(0.2, 2.4)
        rho = rng.uniform(0.3, 5.0)
        if min(abs(k + 1 + j - 2 * nu) for j in range(k + 1)) < 0.05:
            continue
        h = max(1e-5, 1e-5 * rho)
        ds = richardson(lambda s: s_integral(k, nu, s), rho, h)
        worst_deriv = max(worst_deriv, abs(
            ds / (rho ** (k - nu) * bessel_k(nu, rho) * math.sinh(rho)) - 1.0))
        dc = richardson(lambda s: c_integral(k, nu, s), rho, h)
        worst_deriv = max(worst_deriv, abs(
            dc / (rho ** (k - nu) * bessel_k(nu, rho) * math.cosh(rho)) - 1.0))
        kk = int(rng.integers(0, 5))
        if abs((0.5 - nu + kk) - round(0.5 - nu + kk)) < 0.05:
            continue
        if l_noise_floor(2 * kk, nu, rho, h) > 3e-9:
            continue
        dl = richardson(lambda s: l_integral(2 * kk, nu, s), rho, h)
        worst_deriv = max(worst_deriv, abs(
            dl / (rho ** (2 * kk - nu) * bessel_k(nu, rho)) - 1.0))

    worst_rec = 0.0
    for _ in range(100):
        nu = rng.uniform(-5.0, 8.0)
        x = rng.uniform(0.1, 30.0)
        ik = bessel_i(nu, x) if nu >= -1.0 else None
        if ik is not None:
            lhs = bessel_i(nu - 1, x) - bessel_i(nu + 1, x)
            worst_rec = max(worst_rec, abs(lhs / (2 * nu / x * bessel_i(nu, x)) - 1.0)
                            if nu != 0 else 0.0)
            want = bessel_i(nu - 1, x) - nu / x * bessel_i(nu, x)
            got = richardson(lambda s: bessel_i(nu, s), x, 1e-5 * x)
            worst_rec = max(worst_rec, abs(got / want - 1.0))
        lhs = bessel_k(nu + 1, x) - bessel_k(nu - 1, x)
        if nu != 0:
            worst_rec = max(worst_rec, abs(lhs / (2 * nu / x * bessel_k(nu, x)) - 1.0))
        want = -bessel_k(nu - 1, x) - nu / x * bessel_k(nu, x)
        got = richardson(lambda s: bessel_k(nu, s), x, 1e-5 * x)
        worst_rec = max(worst_rec, abs(got / want - 1.0))

    worst_half = 0.0
    for r in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        pre_i = math.sqrt(2 / (math.pi * r))
        pre_k = math.sqrt(math.pi / (2 * r)) * math.exp(-r)
        table = [
            (bessel_i(0.5, r), pre_i * math.sinh(r)),
            (bessel_i(1.5, r), pre_i * (-math.sinh(r) / r + math.cosh(r))),
            (bessel_i(2.5, r), pre_i * ((1 + 3 / r ** 2) * math.sinh(r) - 3 / r * math.cosh(r))),
            (bessel_k(0.5, r), pre_k),
            (bessel_k(1.5, r), pre_k * (1 + 1 / r)),
            (bessel_k(2.5, r), pre_k * (1 + 3 / r + 3 / r ** 2)),
        ]
        for got, want in table:
            worst_half = max(worst_half, abs(got / want - 1.0))

    ratios_ok = all(
        ratio_bounds_check(nu, float(x))
        for nu in (0.5, 1.0, 2.0, 5.0)
        for x in np.linspace(0.05, 20.0, 30)
    )

    ok = (worst_deriv <= 1e-7 and worst_rec <= 1e-9
          and worst_half <= 1e-11 and ratios_ok)
    report(12, ok,
           f"appendix suite: deriv {worst_deriv:.2e}, recurrences {worst_rec:.2e}, "
           f"half-integer {worst_half:.2e}, ratio bounds {ratios_ok}")


def test_criterion_13_dyadic_geometry():
    worst_ratio = 0.0
    windows_ok = True
    for r0 in (0.1, 1.0):
        lad = dyadic_ladder(r0, 20)
        for a, b in zip(lad.radii, lad.radii[1:]):
            worst_ratio = max(worst_ratio, abs(ball_volume(b) / ball_volume(a) - 0.125))
            windows_ok = windows_ok and b >= a / 2.0
    full = ring_sector_volume(0.3, 0.9, -1.0)
    quarter = ring_sector_volume(0.3, 0.9, 0.5)
    sector_err = abs(quarter / full - 0.25)
    ok = worst_ratio <= 1e-12 * 0.125 and windows_ok and sector_err <= 1e-10
    report(13, ok,
           f"dyadic ladder ratio err {worst_ratio:.2e}, halving holds {windows_ok}, "
           f"quarter-sector err {sector_err:.2e}")


def test_criterion_14_barrier():
    radii = np.linspace(0.5 / 4, 5.0, 12)[1:-1]
    found, reports = barrier_alpha_sweep(
        0.5, 1.0, 0.99, radii, EllipticityBounds(1.0, 1.0))
    stays = found is not None and all(
        reports[a].all_nonpositive for a in reports if a >= found)
    rng = np.random.default_rng(SEED)
    arccos_ok = True
    for _ in range(100):
        alpha = rng.uniform(0.5, 8.0)
        R0 = rng.uniform(0.1, 4.0)
        t = rng.uniform(1.0 / math.cosh(R0) + 1e-6, 3.0)
        arccos_ok = arccos_ok and arccos_inequalities(alpha, R0, t).all_hold
    ok = stays and arccos_ok
    report(14, ok,
           f"barrier margins <= 0 from alpha={found} onward; arccos grid {arccos_ok}")


def test_criterion_15_envelope():
    R = 0.5
    pts = polar_grid(5 * R, 40, 96)
    d0 = pts[:, 0]

    vals_par = 1.0 - d0 ** 2 / (2 * R * R)
    res_par = envelope(pts, vals_par, R)
    parab_ok = bool(np.all(res_par.gamma_values <= vals_par)) and (
        res_par.contact_count() == len(pts))

    vals_dip = 1.0 - np.exp(-4.0 * d0 ** 2)
    res = envelope(pts, vals_dip, R)
    below_ok = bool(np.all(res.gamma_values <= vals_dip))

    radii = np.unique(pts[:, 0])
    radii = radii[radii > 0]
    h = float(np.diff(radii)[0])
    index = {(round(r, 12), round(p, 12)): i for i, (r, p) in enumerate(pts)}

    def parab_at(i_sample, j_vertex):
        rz, pz = pts[i_sample]
        ry, py = res.vertices[j_vertex]
        arg = (math.cosh(rz) * math.cosh(ry)
               - math.sinh(rz) * math.sinh(ry) * math.cos(pz - py))
        d = math.acosh(max(arg, 1.0))
        return res.c_values[j_vertex] - d * d / (2 * R * R)

    convex_ok = True
    for phi in np.unique(pts[:, 1])[:12]:
        for k in range(1, len(radii) - 1):
            iz = index[(round(radii[k], 12), round(phi, 12))]
            iz1 = index[(round(radii[k + 1], 12), round(phi, 12))]
            iz2 = index[(round(radii[k - 1], 12), round(phi, 12))]
            j = res.vertex_index[iz]
            ry, py = res.vertices[j]
            arg = (math.cosh(radii[k]) * math.cosh(ry)
                   - math.sinh(radii[k]) * math.sinh(ry) * math.cos(phi - py))
            dzy = math.acosh(max(arg, 1.0))
            lhs = res.gamma_values[iz] - parab_at(iz, j)
            rhs = 0.5 * ((res.gamma_values[iz1] - parab_at(iz1, j))
                         + (res.gamma_values[iz2] - parab_at(iz2, j)))
            rhs += (1.0 / (2 * R * R)) * 0.25 * aux_H(dzy + 2 * h) * (2 * h) ** 2
            convex_ok = convex_ok and (lhs <= rhs + 1e-12)

    ok = parab_ok and below_ok and convex_ok
    report(15, ok,
           f"envelope: paraboloid full contact {parab_ok}, Gamma<=u {below_ok}, "
           f"midpoint convexity {convex_ok}")
