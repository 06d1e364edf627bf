"""Verification front end: each subcommand turns one family of theorem-level
properties into a machine-checked report.

    verify-kernels    kernel normalization, telescoping identity, Gamma recurrence
    inversion         derivative-of-integral reconstruction residuals (dyadic table)
    representability  reconstruction of rho * bump through the truncated density
    adjoint           weighted-adjoint mismatch of the integral / derivative pairs
    restriction       formal-derivative assembly-path agreement, 1-D reduction
    norm-bound        integral operator norms against diam^alpha / Gamma(alpha+1)
    accretivity       strict accretivity margins against the closed-form constant
    sector            numerical range, sector fit, eigenvalue location of L
    eigen-bounds      comparator sandwich of the real part H, spectrum checks
    all               everything above

Every subcommand writes <out>/<name>.json and <out>/<name>.csv and prints one
PASS/FAIL line per checked inequality with its margin.  Exit code 0 means all
checks passed, 1 means a verification property failed, 2 a usage/config error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import directional, elliptic, frac1d, kernels, spectral
from .config import ConfigError, alpha_list, load_config
from .geometry import GridFunction, build_interior_grid, build_ray_grid, disk, interval, sector
from .reporting import fmt_float, write_csv, write_json, write_svg
from .spectral import SectorConstants, SpectralReport, Verdict

__all__ = ["main", "run", "convergence_study", "SUBCOMMANDS"]


@dataclass
class CheckResult:
    name: str
    verdicts: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    svg_points: np.ndarray | None = None


def _verdict(name: str, passed: bool, margin: float, detail: str) -> Verdict:
    return Verdict(name=name, passed=bool(passed), margin=float(margin), detail=detail)


def _bound_verdict(name: str, value: float, bound: float, tol_desc: str) -> Verdict:
    """value <= bound with margin bound - value."""
    return _verdict(
        name,
        value <= bound,
        bound - value,
        f"{fmt_float(value)} <= {fmt_float(bound)} [{tol_desc}]",
    )


# --- canonical grids -------------------------------------------------------

def _interval_grid(cfg, n):
    return build_ray_grid(interval(cfg["domain.interval.length"]), 1, n)


def _sector_grid(cfg, n_radial, n_dirs):
    dom = sector(cfg["domain.sector.radius"], cfg["domain.sector.angle"])
    return build_ray_grid(dom, n_dirs, n_radial)


def _disk_grid(cfg, n_radial, n_dirs):
    return build_ray_grid(disk(cfg["domain.disk.radius"]), n_dirs, n_radial)


def _elliptic_grid(cfg, n_cells):
    return build_interior_grid(interval(cfg["domain.interval.length"]), n_cells)


def _coeffs(cfg, domain):
    return elliptic.coefficient_field(
        domain,
        a_name=cfg["coeff.a.preset"],
        rho_name=cfg["coeff.rho.preset"],
        a_params={
            "value": cfg["coeff.a.value"],
            "slope": cfg["coeff.a.slope"],
            "amp": cfg["coeff.a.amp"],
            "freq": cfg["coeff.a.freq"],
        },
        rho_params={
            "value": cfg["coeff.rho.value"],
            "slope": cfg["coeff.rho.slope"],
            "amp": cfg["coeff.rho.amp"],
            "freq": cfg["coeff.rho.freq"],
        },
    )


def _dyadic(finest: int, levels: int) -> list:
    if levels < 2:
        raise ConfigError(f"levels must be >= 2, got {levels}")
    return [finest // 2 ** k for k in reversed(range(levels))]


# --- subcommands -----------------------------------------------------------

def check_kernels(cfg, levels, seed) -> CheckResult:
    res = CheckResult("verify-kernels", header=["check", "param", "value", "bound"])
    cutoff = cfg["kernels.cutoff"]
    integral_values = {}
    for a in alpha_list(cfg, "kernels.alpha_grid"):
        val = kernels.kernel_K_integral(a, cutoff)
        integral_values[f"{a:g}"] = val
        res.verdicts.append(_bound_verdict(
            f"kernel_integral[alpha={a:g}]", abs(val - 1.0), 1e-6,
            "|int K - 1| <= 1e-6",
        ))
        res.rows.append(["kernel_integral", f"alpha={a:g}", val, 1.0])
    res.values["kernel_integral"] = integral_values

    worst_tel = 0.0
    for n in range(2, 13):
        for a in alpha_list(cfg, "kernels.alpha_grid"):
            worst_tel = max(worst_tel, kernels.telescoping_residual(n, a))
    res.verdicts.append(_bound_verdict(
        "telescoping_residual[n=2..12]", worst_tel, 1e-12,
        "max |chain - C_n| <= 1e-12",
    ))
    res.rows.append(["telescoping_residual", "n=2..12", worst_tel, 1e-12])
    res.values["telescoping_worst"] = worst_tel

    xs = np.linspace(0.1, 25.0, 120)
    worst_rec = max(
        abs(kernels.gamma(x + 1.0) - x * kernels.gamma(x)) / kernels.gamma(x + 1.0)
        for x in xs
    )
    res.verdicts.append(_bound_verdict(
        "gamma_recurrence", worst_rec, 1e-12, "|G(x+1)-xG(x)|/G(x+1) <= 1e-12",
    ))
    res.rows.append(["gamma_recurrence", "x in [0.1,25]", worst_rec, 1e-12])
    res.values["gamma_recurrence_worst"] = worst_rec

    ts = np.geomspace(1e-6, 50.0, 80)
    kmin = min(
        kernels.kernel_K(float(t), a)
        for t in ts
        for a in alpha_list(cfg, "kernels.alpha_grid")
    )
    res.verdicts.append(_verdict(
        "kernel_positivity", kmin > 0.0, kmin,
        f"min K(t) = {fmt_float(kmin)} > 0",
    ))
    res.values["kernel_min_sampled"] = kmin

    diams = [0.5, 1.0, 2.0, 4.0]
    mus_d = [kernels.mu_theoretical(0.5, 2, d) for d in diams]
    mono_d = all(b < a for a, b in zip(mus_d, mus_d[1:]))
    lips = [0.0, 0.5, 1.0]
    mus_m = [
        kernels.mu_theoretical(0.5, 2, 1.0, lam=0.9, lip_m=m, inf_rho=1.0, monotone=False)
        for m in lips
    ]
    mono_m = all(b < a for a, b in zip(mus_m, mus_m[1:])) or lips[0] == lips[-1]
    res.verdicts.append(_verdict(
        "mu_monotone_decreasing", mono_d and mono_m,
        min(a - b for a, b in zip(mus_d, mus_d[1:])),
        "mu decreases in diam and in lip_M (finite-difference sign check)",
    ))
    res.values["mu_vs_diam"] = dict(zip(map(str, diams), mus_d))
    res.values["mu_vs_lip"] = dict(zip(map(str, lips), mus_m))
    return res


def _inversion_phi_1d(grid):
    d = grid.domain.length
    r = grid.flat_radii
    return GridFunction(grid, r * (d - r) / d**2)


def _inversion_phi_sector(grid):
    radius = grid.domain.radius
    chi = np.repeat(grid.chis, grid.n_radial)
    return GridFunction(
        grid, np.sin(math.pi * grid.flat_radii / radius) * (1.0 + 0.5 * np.cos(chi))
    )


def check_inversion(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "inversion",
        header=["domain", "side", "N", "residual", "observed_order"],
    )
    alpha = cfg["inversion.alpha"]
    res.values["alpha"] = alpha

    ns = _dyadic(cfg["grid.n_1d"], levels)
    for side in ("left", "right"):
        residuals = []
        for n in ns:
            grid = _interval_grid(cfg, n)
            residuals.append(
                directional.inversion_residual(grid, _inversion_phi_1d(grid), alpha, side)
            )
        for k, (n, r) in enumerate(zip(ns, residuals)):
            order = "" if k == 0 else _order(residuals[k - 1], r)
            res.rows.append(["interval", side, n, r, order])
        res.values[f"interval_{side}"] = dict(zip(map(str, ns), residuals))
        res.verdicts.append(_bound_verdict(
            f"inversion_1d_{side}[N={ns[-1]}]", residuals[-1], 5e-2,
            "relative residual <= 5e-2 at finest 1-D grid",
        ))
        for k in range(1, len(residuals)):
            ratio = residuals[k - 1] / residuals[k] if residuals[k] > 0 else math.inf
            res.verdicts.append(_verdict(
                f"inversion_1d_{side}_contraction[{ns[k - 1]}->{ns[k]}]",
                ratio >= 1.5,
                ratio - 1.5,
                f"residual ratio {fmt_float(ratio)} >= 1.5 per dyadic refinement",
            ))

    sector_levels = [
        (cfg["grid.n_radial"] // 2 ** k, max(cfg["grid.n_dirs"] // 2 ** k, 4))
        for k in reversed(range(levels))
    ]
    sres = []
    for nr, nd in sector_levels:
        grid = _sector_grid(cfg, nr, nd)
        sres.append(
            directional.inversion_residual(grid, _inversion_phi_sector(grid), alpha, "left")
        )
    for k, ((nr, nd), r) in enumerate(zip(sector_levels, sres)):
        order = "" if k == 0 else _order(sres[k - 1], r)
        res.rows.append(["sector", "left", f"{nr}x{nd}", r, order])
    res.values["sector_left"] = dict(
        (f"{nr}x{nd}", v) for (nr, nd), v in zip(sector_levels, sres)
    )
    res.verdicts.append(_bound_verdict(
        f"inversion_sector[{sector_levels[-1][0]}x{sector_levels[-1][1]}]",
        sres[-1], 1e-1, "relative residual <= 1e-1 on the sector",
    ))
    decreasing = all(b < a for a, b in zip(sres, sres[1:]))
    res.verdicts.append(_verdict(
        "inversion_sector_decreasing", decreasing,
        min(a - b for a, b in zip(sres, sres[1:])),
        "sector residual decreases under dyadic refinement",
    ))
    return res


def _order(prev: float, cur: float):
    if prev <= 0.0 or cur <= 0.0:
        return "inf"
    return math.log2(prev / cur)


def check_representability(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "representability",
        header=["rho", "N", "residual", "observed_order"],
    )
    alpha = cfg["representability.alpha"]
    res.values["alpha"] = alpha
    d = cfg["domain.interval.length"]
    profiles = {
        "constant": lambda r: np.ones_like(r),
        "lip09_ramp": lambda r: 1.0 - 0.5 * (r / d) ** 0.9,
    }
    ns = _dyadic(cfg["grid.n_1d"], levels)
    for name, rho in profiles.items():
        residuals = []
        for n in ns:
            grid = _interval_grid(cfg, n)
            r = grid.flat_radii
            f = GridFunction(grid, rho(r) * r * (d - r) / d**2)
            residuals.append(directional.representability_residual(grid, f, alpha))
        for k, (n, v) in enumerate(zip(ns, residuals)):
            order = "" if k == 0 else _order(residuals[k - 1], v)
            res.rows.append([name, n, v, order])
        res.values[name] = dict(zip(map(str, ns), residuals))
        worst_step = max(
            (b - a * 1.05) for a, b in zip(residuals, residuals[1:])
        )
        res.verdicts.append(_verdict(
            f"representability_decay[{name}]", worst_step <= 0.0, -worst_step,
            "residual decays monotonically under refinement (5% noise allowance)",
        ))
    return res


def check_adjoint(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "adjoint", header=["domain", "kind", "alpha", "grid", "residual"],
    )
    alpha = cfg["frac.alpha"]
    n_adj = cfg["grid.n_1d"] // 2

    grids_1d = {n: _interval_grid(cfg, n) for n in (n_adj // 2, n_adj)}
    r_1d = {
        n: directional.adjoint_residual(g, alpha, "integral") for n, g in grids_1d.items()
    }
    for n, v in r_1d.items():
        res.rows.append(["interval", "integral", alpha, n, v])
    res.verdicts.append(_bound_verdict(
        f"adjoint_integral_1d[N={n_adj}]", r_1d[n_adj], 5e-2,
        "relative weighted-adjoint mismatch <= 5e-2",
    ))
    res.verdicts.append(_verdict(
        "adjoint_integral_1d_decreasing",
        r_1d[n_adj] < r_1d[n_adj // 2],
        r_1d[n_adj // 2] - r_1d[n_adj],
        "mismatch decreases under refinement",
    ))

    nr, nd = cfg["grid.n_radial"], cfg["grid.n_dirs"]
    sgrids = {(nr // 2, nd // 2): None, (nr, nd): None}
    r_sec = {}
    for key in sgrids:
        g = _sector_grid(cfg, *key)
        sgrids[key] = g
        r_sec[key] = directional.adjoint_residual(g, alpha, "integral")
        res.rows.append(["sector", "integral", alpha, f"{key[0]}x{key[1]}", r_sec[key]])
    res.verdicts.append(_bound_verdict(
        f"adjoint_integral_sector[{nr}x{nd}]", r_sec[(nr, nd)], 1e-1,
        "relative weighted-adjoint mismatch <= 1e-1",
    ))
    res.verdicts.append(_verdict(
        "adjoint_integral_sector_decreasing",
        r_sec[(nr, nd)] < r_sec[(nr // 2, nd // 2)],
        r_sec[(nr // 2, nd // 2)] - r_sec[(nr, nd)],
        "mismatch decreases under refinement",
    ))

    # exact-G-adjoint bilinear identity (holds by construction, any grid)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for grid in (grids_1d[n_adj], sgrids[(nr, nd)]):
        a = directional.dir_integral_left_matrix(grid, alpha)
        astar = a.gram_adjoint()
        w = grid.flat_weights
        for _ in range(5):
            f = rng.standard_normal(grid.n_nodes)
            g = rng.standard_normal(grid.n_nodes)
            lhs = float(g @ (w * a.matvec(f)))
            rhs = float(astar.matvec(g) @ (w * f))
            scale = math.sqrt(float(f @ (w * f))) * math.sqrt(float(g @ (w * g)))
            worst = max(worst, abs(lhs - rhs) / scale)
    res.verdicts.append(_bound_verdict(
        "exact_gram_adjoint_identity", worst, 1e-10,
        "|(Af,g)_G - (f,A*g)_G| <= 1e-10 |f||g| for the exact G-adjoint",
    ))
    res.values["bilinear_identity_worst"] = worst

    for a in alpha_list(cfg, "frac.alpha_grid"):
        v1 = directional.adjoint_residual(grids_1d[n_adj], a, "integral")
        vd = directional.adjoint_residual(grids_1d[n_adj], a, "derivative")
        res.rows.append(["interval", "integral", a, n_adj, v1])
        res.rows.append(["interval", "derivative", a, n_adj, vd])
    res.values["integral_1d"] = {str(k): v for k, v in r_1d.items()}
    res.values["integral_sector"] = {f"{k[0]}x{k[1]}": v for k, v in r_sec.items()}
    return res


def check_restriction(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "restriction", header=["comparison", "grid", "max_entry_diff", "bound"],
    )
    alpha = cfg["frac.alpha"]

    grid = _interval_grid(cfg, cfg["grid.n_1d"])
    nodes, h = grid.nodes[0], float(grid.spacings[0])
    marchaud = frac1d.trunc_derivative_block(nodes, h, alpha, h)
    formal = directional.kipriyanov_formal_matrix(grid, alpha).blocks[0]
    diff_1d = float(np.max(np.abs(formal - marchaud)))
    res.verdicts.append(_bound_verdict(
        "kipriyanov_equals_marchaud_1d", diff_1d, 1e-12,
        "n=1 formal derivative matrix equals the Marchaud matrix entrywise",
    ))
    res.rows.append(["formal_vs_marchaud", f"interval N={grid.n_radial}", diff_1d, 1e-12])

    direct_1d = directional.kipriyanov_formal_matrix(grid, alpha, assembly="direct").blocks[0]
    diff_paths_1d = float(np.max(np.abs(formal - direct_1d)))
    res.rows.append(["restriction_vs_direct", f"interval N={grid.n_radial}",
                     diff_paths_1d, 1e-12])
    res.verdicts.append(_bound_verdict(
        "two_path_agreement_1d", diff_paths_1d, 1e-12,
        "restriction and direct assemblies agree entrywise (n=1)",
    ))

    sgrid = _sector_grid(cfg, cfg["grid.n_radial"], cfg["grid.n_dirs"])
    restr = directional.kipriyanov_formal_matrix(sgrid, alpha).blocks[0]
    direct = directional.kipriyanov_formal_matrix(sgrid, alpha, assembly="direct").blocks[0]
    diff_2d = float(np.max(np.abs(restr - direct)))
    res.verdicts.append(_bound_verdict(
        "two_path_agreement_sector", diff_2d, 1e-8,
        "restriction and direct assemblies agree entrywise (n=2)",
    ))
    res.rows.append(["restriction_vs_direct",
                     f"sector {sgrid.n_radial}x{sgrid.n_dirs}", diff_2d, 1e-8])
    res.values["telescoping_residual_n2"] = kernels.telescoping_residual(2, alpha)
    res.values["diffs"] = {
        "formal_vs_marchaud_1d": diff_1d,
        "two_path_1d": diff_paths_1d,
        "two_path_sector": diff_2d,
    }
    return res


def check_norm_bound(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "norm-bound", header=["domain", "side", "alpha", "norm", "bound"],
    )
    nr, nd = cfg["grid.n_radial"], cfg["grid.n_dirs"]
    grids = {
        "interval": _interval_grid(cfg, cfg["grid.n_1d"]),
        "sector": _sector_grid(cfg, nr, nd),
        "disk": _disk_grid(cfg, nr, nd),
    }
    for name, grid in grids.items():
        diam = grid.domain.diam
        for a in alpha_list(cfg, "frac.alpha_grid"):
            bound = diam**a / kernels.gamma(a + 1.0) * (1.0 + 1e-2)
            for side, builder in (
                ("left", directional.dir_integral_left_matrix),
                ("right", directional.dir_integral_right_matrix),
            ):
                norm = directional.operator_norm(grid, builder(grid, a))
                res.rows.append([name, side, a, norm, bound])
                res.verdicts.append(_bound_verdict(
                    f"norm_bound[{name},{side},alpha={a:g}]", norm, bound,
                    "G-operator norm <= diam^alpha/Gamma(alpha+1) * 1.01",
                ))
                res.values[f"{name}_{side}_alpha={a:g}"] = norm
    return res


def check_accretivity(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "accretivity", header=["domain", "alpha", "grid", "mu_hat", "mu", "ratio"],
    )
    configs = {
        "interval": [("interval", n) for n in _dyadic(cfg["grid.n_1d"], levels)],
        "sector": [
            ("sector", (cfg["grid.n_radial"] // 2 ** k, max(cfg["grid.n_dirs"] // 2 ** k, 4)))
            for k in reversed(range(levels))
        ],
    }
    for domain_name, levels_list in configs.items():
        for a in alpha_list(cfg, "frac.alpha_grid"):
            margins = []
            for _, size in levels_list:
                if domain_name == "interval":
                    grid = _interval_grid(cfg, size)
                    label = str(size)
                else:
                    grid = _sector_grid(cfg, *size)
                    label = f"{size[0]}x{size[1]}"
                mat = directional.kipriyanov_formal_matrix(grid, a)
                mu_hat = spectral.accretivity_margin(mat)
                margins.append((label, mu_hat, grid))
            mu = kernels.mu_theoretical(a, grid.n, grid.domain.diam)
            for label, mu_hat, _ in margins:
                res.rows.append([domain_name, a, label, mu_hat, mu, mu_hat / mu])
            final = margins[-1][1]
            res.verdicts.append(_verdict(
                f"accretivity[{domain_name},alpha={a:g}]",
                final >= 0.9 * mu,
                final - 0.9 * mu,
                f"mu_hat={fmt_float(final)} >= 0.9*mu={fmt_float(0.9 * mu)}",
            ))
            seq = [m for _, m, _ in margins]
            nondec = all(b >= a_ - 1e-8 * max(1.0, abs(a_)) for a_, b in zip(seq, seq[1:]))
            res.verdicts.append(_verdict(
                f"accretivity_refinement[{domain_name},alpha={a:g}]",
                nondec,
                min(b - a_ for a_, b in zip(seq, seq[1:])),
                "mu_hat non-decreasing toward mu under refinement",
            ))
            res.values[f"{domain_name}_alpha={a:g}"] = {
                "mu": mu, "mu_hat": {lbl: m for lbl, m, _ in margins},
            }
    return res


def check_sector(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "sector", header=["quantity", "grid", "value"],
    )
    alpha = cfg["spectral.alpha"]
    n_angles = cfg["spectral.n_angles"]
    n1 = cfg["spectral.n_1d"]

    fits = {}
    for n in (n1, 2 * n1):
        grid = _elliptic_grid(cfg, n)
        coeffs = _coeffs(cfg, grid.domain)
        lmat = elliptic.assemble_L(grid, coeffs, alpha)
        pts = spectral.numerical_range(lmat, n_angles=n_angles, seed=seed)
        fits[n] = (spectral.sector_fit(pts), pts, lmat, grid, coeffs)

    fit, pts, lmat, grid, coeffs = fits[n1]
    res.svg_points = pts
    res.verdicts.append(_verdict(
        "sector_vertex_positive", fit.gamma > 0.0, fit.gamma,
        f"gamma_hat={fmt_float(fit.gamma)} > 0",
    ))
    min_re = float(pts.real.min())
    res.verdicts.append(_verdict(
        "range_right_of_vertex", min_re >= fit.gamma, min_re - fit.gamma,
        "every numerical-range sample has Re >= gamma_hat",
    ))
    res.verdicts.append(_verdict(
        "sector_halfangle", fit.theta < math.pi / 2.0 and not fit.degenerate,
        math.pi / 2.0 - fit.theta,
        f"theta_hat={fmt_float(fit.theta)} < pi/2",
    ))
    fit2 = fits[2 * n1][0]
    drift = abs(fit2.theta - fit.theta) / fit.theta
    res.verdicts.append(_bound_verdict(
        f"sector_stability[{n1}->{2 * n1}]", drift, 5e-2,
        "theta_hat varies < 5% between refinements",
    ))

    eigs = spectral.general_eigs(lmat)
    min_re_eig = float(eigs.real.min())
    res.verdicts.append(_verdict(
        "eigenvalues_in_halfplane", min_re_eig >= fit.gamma - 1e-9,
        min_re_eig - fit.gamma,
        f"min Re(lambda)={fmt_float(min_re_eig)} >= gamma_hat={fmt_float(fit.gamma)}",
    ))
    hull_excess = spectral.hull_containment_margin(eigs, pts)
    res.verdicts.append(_bound_verdict(
        "spectrum_in_range_hull", hull_excess, 1e-6,
        "eigenvalues lie in the convex hull of the range samples (1e-6 inflation)",
    ))

    mu_hat = spectral.accretivity_margin(lmat)
    mu = kernels.mu_theoretical(alpha, 1, grid.domain.diam)
    h = float(grid.spacings[0])
    lam1 = 4.0 / h**2 * math.sin(math.pi * h / (2.0 * grid.domain.length)) ** 2
    coercive_floor = 0.9 * (coeffs.a0 * lam1 + mu * coeffs.inf_rho)
    res.verdicts.append(_verdict(
        "coercivity_transfer", mu_hat >= coercive_floor, mu_hat - coercive_floor,
        f"mu_hat(L)={fmt_float(mu_hat)} >= 0.9*(a0*lambda1 + mu*inf_rho)="
        f"{fmt_float(coercive_floor)}",
    ))
    nu = kernels.nu_exponent(
        1, cfg["nu.p"], cfg["nu.q"], alpha, cfg["nu.beta"], cfg["nu.l"]
    )
    consts = SectorConstants(
        a0=coeffs.a0, a1=coeffs.a1, K=cfg["sector_consts.K"],
        delta=cfg["sector_consts.delta"], eps_young=cfg["sector_consts.eps_young"],
        C2=cfg["sector_consts.C2"], C3=cfg["sector_consts.C3"],
        nu=nu, mu=mu, inf_rho=coeffs.inf_rho,
    )
    res.values.update({
        "gamma_hat": fit.gamma,
        "theta_hat": fit.theta,
        "theta_hat_refined": fit2.theta,
        "accretivity_margin": mu_hat,
        "hull_excess": hull_excess,
        "coercivity_floor": coercive_floor,
        "parametric": {
            "nu": nu, "k": consts.k, "gamma": consts.gamma, "theta": consts.theta,
        },
        "n_range_samples": int(pts.size),
    })
    report = SpectralReport(
        eigenvalues=np.sort_complex(eigs),
        range_samples=pts,
        accretivity_margin=mu_hat,
        sector=fit,
        verdicts=list(res.verdicts),
    )
    res.values["eig_min_re"] = float(report.eigenvalues.real.min())
    res.values["eig_max_im"] = float(np.max(np.abs(report.eigenvalues.imag)))
    for name, value in (
        ("gamma_hat", fit.gamma),
        ("theta_hat", fit.theta),
        ("theta_hat_refined", fit2.theta),
        ("mu_hat", mu_hat),
        ("parametric_gamma", consts.gamma),
        ("parametric_theta", consts.theta),
    ):
        res.rows.append([name, f"N={n1}", value])
    return res


def check_eigen_bounds(cfg, levels, seed) -> CheckResult:
    res = CheckResult(
        "eigen-bounds", header=["quantity", "index", "value", "reference"],
    )
    alpha = cfg["frac.alpha"]
    grid = _elliptic_grid(cfg, cfg["eigen.n_1d"])
    coeffs = _coeffs(cfg, grid.domain)

    lmat = elliptic.assemble_L(grid, coeffs, alpha)
    hmat = elliptic.assemble_H(grid, coeffs, alpha, variant="sym")
    params = elliptic.comparator_defaults(grid, coeffs, alpha)
    overrides = {
        "a0_const": cfg["eigen.l0.a"],
        "rho0_const": cfg["eigen.l0.rho"],
        "a1_const": cfg["eigen.l1.a"],
        "rho1_const": cfg["eigen.l1.rho"],
    }
    for key, val in overrides.items():
        if val != "auto":
            params[key] = float(val)
    l0 = elliptic.assemble_comparator(grid, 0, params["a0_const"], params["rho0_const"])
    l1 = elliptic.assemble_comparator(grid, 1, params["a1_const"], params["rho1_const"])

    order = elliptic.form_order_check(hmat, l0, l1, grid.flat_weights)
    res.verdicts.append(_verdict(
        "form_order_lower", order.lower_margin >= -1e-10, order.lower_margin,
        f"min eig(H - L0, G) = {fmt_float(order.lower_margin)} >= -1e-10",
    ))
    res.verdicts.append(_verdict(
        "form_order_upper", order.upper_margin >= -1e-10, order.upper_margin,
        f"min eig(L1 - H, G) = {fmt_float(order.upper_margin)} >= -1e-10",
    ))

    e0 = spectral.sym_eigs(l0)
    eh = spectral.sym_eigs(hmat)
    e1 = spectral.sym_eigs(l1)
    sandwich = spectral.eigen_bounds_check(e0, eh, e1)
    res.verdicts.append(_verdict(
        "eigen_sandwich", sandwich.passed,
        min(sandwich.lower_margin, sandwich.upper_margin),
        f"lambda_n(L0) <= lambda_n(H) <= lambda_n(L1) for all n "
        f"(worst margins {fmt_float(sandwich.lower_margin)}, "
        f"{fmt_float(sandwich.upper_margin)})",
    ))

    d = grid.domain.length
    a_c, rho_c = 1.0, 1.0
    comp = elliptic.assemble_comparator(grid, 0, a_c, rho_c)
    ec = spectral.sym_eigs(comp)
    worst_rel = 0.0
    for j in range(1, 6):
        exact = a_c * (j * math.pi / d) ** 2 + rho_c
        rel = abs(ec[j - 1] - exact) / exact
        worst_rel = max(worst_rel, rel)
        res.rows.append(["comparator_eig", j, float(ec[j - 1]), exact])
    res.verdicts.append(_bound_verdict(
        "comparator_analytic", worst_rel, 1e-2,
        "comparator eigenvalues match a (j pi/d)^2 + rho within 1%",
    ))

    mu_hat = spectral.accretivity_margin(lmat)
    res.verdicts.append(_verdict(
        "h_spectrum_positive", eh[0] > 0.0 and mu_hat > 0.0, float(eh[0]),
        f"lambda_1(H)={fmt_float(float(eh[0]))} >= mu_hat={fmt_float(mu_hat)} > 0",
    ))
    res.verdicts.append(_verdict(
        "h_matches_margin", abs(float(eh[0]) - mu_hat) <= 1e-8 * max(1.0, mu_hat),
        float(eh[0]) - mu_hat,
        "min eig of H equals the accretivity margin of L",
    ))
    gaps = np.diff(eh)
    min_gap = float(gaps.min())
    res.verdicts.append(_verdict(
        "h_spectrum_simple", min_gap > 1e-8 * max(1.0, float(abs(eh[-1]))), min_gap,
        f"min eigenvalue gap {fmt_float(min_gap)} > 0 (simple spectrum)",
    ))

    res.values.update({
        "comparator_params": {k: v for k, v in params.items()},
        "form_order": {"lower": order.lower_margin, "upper": order.upper_margin},
        "sandwich": {
            "lower": sandwich.lower_margin, "upper": sandwich.upper_margin,
        },
        "lambda1_H": float(eh[0]),
        "mu_hat": mu_hat,
        "h_variant_gap": elliptic.h_variant_gap(grid, coeffs, alpha),
        "min_gap_H": min_gap,
    })
    for idx, (v0, vh, v1) in enumerate(zip(e0[:8], eh[:8], e1[:8]), start=1):
        res.rows.append(["sandwich_eig", idx, float(vh), f"{fmt_float(v0)}..{fmt_float(v1)}"])
    return res


SUBCOMMANDS = {
    "verify-kernels": check_kernels,
    "inversion": check_inversion,
    "representability": check_representability,
    "adjoint": check_adjoint,
    "restriction": check_restriction,
    "norm-bound": check_norm_bound,
    "accretivity": check_accretivity,
    "sector": check_sector,
    "eigen-bounds": check_eigen_bounds,
}


def convergence_study(check: str, levels: int, cfg: dict | None = None,
                      seed: int = 42):
    """Dyadic refinement table (N, residual, observed_order) for a named check.

    observed_order is log2(res_N / res_2N); rows whose residual is exactly
    zero report the order as the "inf" sentinel.
    """
    if levels < 2:
        raise ConfigError(f"levels must be >= 2, got {levels}")
    cfg = dict(load_config(None), **(cfg or {}))
    ns = _dyadic(cfg["grid.n_1d"], levels)

    def residual_at(n: int) -> float:
        grid = _interval_grid(cfg, n)
        if check == "inversion":
            return directional.inversion_residual(
                grid, _inversion_phi_1d(grid), cfg["inversion.alpha"], "left"
            )
        if check == "representability":
            d = grid.domain.length
            r = grid.flat_radii
            f = GridFunction(grid, r * (d - r) / d**2)
            return directional.representability_residual(
                grid, f, cfg["representability.alpha"]
            )
        if check == "adjoint":
            return directional.adjoint_residual(grid, cfg["frac.alpha"], "integral")
        if check == "norm-bound":
            a = cfg["frac.alpha"]
            norm = directional.operator_norm(
                grid, directional.dir_integral_left_matrix(grid, a)
            )
            bound = grid.domain.diam**a / kernels.gamma(a + 1.0)
            return max(0.0, norm - bound)
        if check == "accretivity":
            a = cfg["frac.alpha"]
            mu_hat = spectral.accretivity_margin(
                directional.kipriyanov_formal_matrix(grid, a)
            )
            mu = kernels.mu_theoretical(a, 1, grid.domain.diam)
            return max(0.0, mu - mu_hat)
        raise ConfigError(f"convergence_study does not support {check!r}")

    rows = []
    prev = None
    for n in ns:
        r = residual_at(n)
        if prev is None:
            order = ""
        elif r == 0.0 or prev == 0.0:
            order = "inf"
        else:
            order = math.log2(prev / r)
        rows.append([n, r, order])
        prev = r
    return ["N", "residual", "observed_order"], rows


def _emit(result: CheckResult, cfg: dict, out_dir: str, seed: int):
    os.makedirs(out_dir, exist_ok=True)
    meta = {
        "subcommand": result.name,
        "config": cfg,
        "grids": {
            "interval_n": cfg["grid.n_1d"],
            "sector": f'{cfg["grid.n_radial"]}x{cfg["grid.n_dirs"]}',
            "disk": f'{cfg["grid.n_radial"]}x{cfg["grid.n_dirs"]}',
            "spectral_interval_n": cfg["spectral.n_1d"],
            "eigen_interval_n": cfg["eigen.n_1d"],
        },
        "seed": seed,
    }
    payload = {
        "meta": meta,
        "values": result.values,
        "verdicts": [
            {"name": v.name, "passed": v.passed, "margin": v.margin, "detail": v.detail}
            for v in result.verdicts
        ],
    }
    write_json(os.path.join(out_dir, f"{result.name}.json"), payload)
    write_csv(os.path.join(out_dir, f"{result.name}.csv"), result.header, result.rows)
    if result.svg_points is not None and cfg.get("report.svg", True):
        write_svg(
            os.path.join(out_dir, f"{result.name}.svg"),
            result.svg_points,
            title=f"{result.name} numerical range",
        )


def run(subcommand: str, config_path: str | None = None, out_dir: str = "reports",
        levels: int = 3, seed: int = 42) -> int:
    """Run one verification subcommand (or "all"); returns the exit code."""
    cfg = load_config(config_path)
    if levels < 2:
        raise ConfigError(f"levels must be >= 2, got {levels}")
    names = list(SUBCOMMANDS) if subcommand == "all" else [subcommand]
    if subcommand != "all" and subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    all_passed = True
    for name in names:
        result = SUBCOMMANDS[name](cfg, levels, seed)
        _emit(result, cfg, out_dir, seed)
        for v in result.verdicts:
            status = "PASS" if v.passed else "FAIL"
            print(f"{status} {name}.{v.name}: {v.detail} (margin={fmt_float(v.margin)})")
            all_passed = all_passed and v.passed
    return 0 if all_passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="verification suite for directional fractional operators",
    )
    parser.add_argument("subcommand", choices=list(SUBCOMMANDS) + ["all"])
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", default="reports", help="report output directory")
    parser.add_argument("--levels", type=int, default=3,
                        help="dyadic refinement levels for convergence tables")
    parser.add_argument("--seed", type=int, default=42,
                        help="seed for the random test-vector generator")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return run(args.subcommand, args.config, args.out, args.levels, args.seed)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
