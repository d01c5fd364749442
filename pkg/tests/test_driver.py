"""Driver: meshes, time steps, boundaries, norms, output files, CLI."""

import json
import os

import numpy as np
import pytest

from lwfr import cli, driver, equations as eq, numflux, presets
from lwfr.basis import build_operators
from lwfr.driver import (BC, DIRICHLET, PERIODIC, REFLECTING, Mesh1D, Mesh2D,
                         RunConfig)
from lwfr.errors import ConfigurationError


def linadv_config(ncell=50, degree=2, tfinal=0.2, **kw):
    law = eq.LinearAdvection1D(1.0)
    return RunConfig(
        law=law,
        ic=lambda x: np.sin(2 * np.pi * x)[..., None],
        exact=lambda x, t: np.sin(2 * np.pi * (x - t))[..., None],
        mesh=Mesh1D(0.0, 1.0, ncell),
        degree=degree,
        tfinal=tfinal,
        **kw,
    )


# ---------------------------------------------------------------------------
# meshes and time-step selection


def test_mesh1d_geometry():
    m = Mesh1D(0.0, 2.0, 4)
    assert m.dx == 0.5
    assert np.allclose(m.x_faces, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert np.allclose(m.centers, [0.25, 0.75, 1.25, 1.75])
    ops = build_operators("gll", 1, "radau")
    assert np.allclose(m.nodes(ops), [[0.0, 0.5], [0.5, 1.0], [1.0, 1.5], [1.5, 2.0]])


def test_mesh2d_node_coords_orientation():
    m = Mesh2D(0.0, 1.0, 0.0, 2.0, 2, 4)
    ops = build_operators("gll", 1, "radau")
    X, Y = m.node_coords(ops)
    assert X.shape == (2, 4, 2, 2)
    # x varies with the third index, y with the fourth
    assert np.allclose(X[0, 0, :, 0], [0.0, 0.5])
    assert np.allclose(Y[0, 0, 0, :], [0.0, 0.5])


def test_time_step_formula():
    # unit speed, dx = 0.01, N=2, Radau, D2, safety 0.95:
    # dt = 0.95 * 0.170 * 0.01 = 1.615e-3
    cfg = linadv_config(ncell=100, degree=2)
    ops = build_operators("gl", 2, "radau")
    u = cfg.ic(cfg.mesh.nodes(ops))
    dt = driver._compute_dt_1d(cfg, cfg.law, ops, cfg.mesh, u, driver.cfl_number(cfg))
    assert abs(dt - 1.615e-3) < 1e-12


def test_time_step_2d_respects_diagonal_bound():
    cfg = presets.preset("euler2d_vortex", ncx=20, ncy=20)
    ops = build_operators("gl", 3, "radau")
    geom = cfg.mesh.geometry(ops)
    u = np.asarray(cfg.ic(geom["X"], geom["Y"]), dtype=float)
    cfl = driver.cfl_number(cfg)
    assert abs(cfl - 0.101) < 1e-12
    dt = driver._compute_dt_2d(cfg, cfg.law, ops, cfg.mesh, u, cfl)
    ubar = driver.cell_averages_2d(ops, u)
    xc = cfg.mesh.x_faces[:-1, None] + 0.5 * cfg.mesh.dx
    yc = cfg.mesh.y_faces[None, :-1] + 0.5 * cfg.mesh.dy
    sx = cfg.law.max_speed_x(xc, yc, ubar)
    sy = cfg.law.max_speed_y(xc, yc, ubar)
    sigma_sum = dt * float((sx / cfg.mesh.dx + sy / cfg.mesh.dy).max())
    assert sigma_sum <= 0.95 * 0.101 + 1e-12


def test_zero_speed_needs_dt_max():
    cfg = linadv_config()
    cfg.law = eq.LinearAdvection1D(0.0)
    ops = build_operators("gl", 2, "radau")
    u = np.zeros((50, 3, 1))
    with pytest.raises(ConfigurationError):
        driver._compute_dt_1d(cfg, cfg.law, ops, cfg.mesh, u, 0.1)
    cfg.dt_max = 0.01
    assert driver._compute_dt_1d(cfg, cfg.law, ops, cfg.mesh, u, 0.1) == 0.01


def test_cfl_2d_d1_scaling():
    # the 2-D D1 value is the D2 value scaled by the 1-D D1/D2 ratio
    got = driver._cfl_2d("radau", "d1", 2)
    want = 0.166 * (0.117 / 0.170)
    assert abs(got - want) < 1e-12


def test_rkfr_cfl_is_method_of_lines_bound():
    cfg = linadv_config(scheme="rkfr", degree=3)
    assert driver.cfl_number(cfg) == pytest.approx(1.0 / 7.0)


# ---------------------------------------------------------------------------
# boundary handling


def test_time_quadrature_averages_sine_exactly():
    t, dt = 0.3, 0.01
    got = driver._quad_average(np.sin, t, dt, 3)
    exact = (np.cos(t) - np.cos(t + dt)) / dt
    assert abs(got - exact) < 1e-12
    # dt == 0 degenerates to pointwise evaluation
    assert driver._quad_average(np.sin, t, 0.0, 3) == np.sin(t)


def test_dirichlet_inflow_flux_is_time_average():
    # f = u with a(x)=1: the boundary flux equals the time average of g
    law = eq.LinearAdvection1D(1.0)
    mesh = Mesh1D(0.0, 1.0, 4)
    g = lambda t: np.array([np.sin(t)])
    cfg = RunConfig(law=law, ic=None, mesh=mesh, degree=2, tfinal=1.0,
                    bc=(BC(DIRICHLET, g=g), BC("outflow")))
    ops = build_operators("gl", 2, "radau")
    nv, nc = 1, 4
    z = np.zeros((nc, nv))
    t, dt = 0.3, 0.01
    fnum = driver._face_flux_1d(cfg, law, ops, mesh, z, z, z, z, z, t, dt)
    exact = (np.cos(t) - np.cos(t + dt)) / dt
    assert abs(fnum[0, 0] - exact) < 1e-12


def test_periodic_mismatch_raises():
    cfg = linadv_config(bc=(BC(PERIODIC), BC("outflow")))
    with pytest.raises(ConfigurationError):
        driver.solve(cfg)


def test_reflecting_walls_conserve_mass():
    # zero normal mass flux at both walls keeps total mass fixed
    law = eq.Euler1D()

    def ic(x):
        rho = 1.0 + 0.2 * np.sin(np.pi * x)
        v = 0.3 * np.sin(np.pi * x)
        p = np.ones_like(x)
        return law.prim_to_cons(rho, v, p)

    cfg = RunConfig(law=law, ic=ic, mesh=Mesh1D(0.0, 1.0, 30), degree=2,
                    tfinal=0.1, bc=(BC(REFLECTING), BC(REFLECTING)))
    res = driver.solve(cfg)
    ops = build_operators("gl", 2, "radau")
    m0 = driver.total_mass(ops, cfg.mesh, np.asarray(ic(cfg.mesh.nodes(ops))))
    m1 = driver.total_mass(ops, cfg.mesh, res.u)
    assert abs(m1[0] - m0[0]) < 1e-12  # density: no wall flux at all


def test_reflecting_wall_flux_has_zero_mass_component():
    law = eq.Euler1D()
    mesh = Mesh1D(0.0, 1.0, 4)
    cfg = RunConfig(law=law, ic=None, mesh=mesh, degree=2, tfinal=1.0,
                    bc=(BC(REFLECTING), BC(REFLECTING)))
    ops = build_operators("gl", 2, "radau")
    rng = np.random.default_rng(0)
    U = law.prim_to_cons(rng.uniform(0.5, 2, 4), rng.uniform(-1, 1, 4),
                         rng.uniform(0.5, 2, 4))
    F = law.flux(None, U)
    fnum = driver._face_flux_1d(cfg, law, ops, mesh, U, U, U, F, F, 0.0, 0.01)
    assert abs(fnum[0, 0]) < 1e-12
    assert abs(fnum[-1, 0]) < 1e-12


# ---------------------------------------------------------------------------
# error norms and conservation


def test_error_norms_zero_for_exact_representation():
    ops = build_operators("gl", 2, "radau")
    mesh = Mesh1D(0.0, 1.0, 8)
    xn = mesh.nodes(ops)
    u = (xn**2)[..., None]
    l2, linf = driver.error_norms_1d(u, lambda x, t: (x**2)[..., None],
                                     mesh, ops, 0.0)
    assert l2[0] < 1e-14 and linf[0] < 1e-14


def test_error_norms_unit_offset():
    ops = build_operators("gl", 2, "radau")
    mesh = Mesh1D(0.0, 1.0, 8)
    u = np.ones((8, 3, 1))
    l2, linf = driver.error_norms_1d(u, lambda x, t: np.zeros(x.shape)[..., None],
                                     mesh, ops, 0.0)
    assert abs(l2[0] - 1.0) < 1e-13 and abs(linf[0] - 1.0) < 1e-13


def test_error_norm_matches_simpson_oracle():
    # piecewise-linear interpolant of sin on 10 cells: compare the L2
    # error against a dense Simpson evaluation of the same interpolant
    ops = build_operators("gl", 1, "radau")
    mesh = Mesh1D(0.0, 1.0, 10)
    xn = mesh.nodes(ops)
    u = np.sin(2 * np.pi * xn)[..., None]
    l2, _ = driver.error_norms_1d(u, lambda x, t: np.sin(2 * np.pi * x)[..., None],
                                  mesh, ops, 0.0)
    from scipy.integrate import simpson
    from lwfr.basis import lagrange_eval
    xs = np.linspace(0.0, 1.0, 1001)
    vals = np.empty_like(xs)
    for k, x in enumerate(xs):
        c = min(int(x * 10), 9)
        xi = (x - mesh.x_faces[c]) / mesh.dx
        vals[k] = lagrange_eval(ops.nodes, xi) @ u[c, :, 0]
    ref = np.sqrt(simpson((vals - np.sin(2 * np.pi * xs)) ** 2, x=xs))
    assert abs(l2[0] - ref) / ref < 0.01


def test_error_norms_2d_trivial():
    ops = build_operators("gl", 2, "radau")
    mesh = Mesh2D(0.0, 1.0, 0.0, 1.0, 4, 4)
    u = np.ones((4, 4, 3, 3, 1))
    l2, linf = driver.error_norms_2d(
        u, lambda x, y, t: np.zeros(np.broadcast_shapes(x.shape, y.shape))[..., None],
        mesh, ops, 0.0)
    assert abs(l2[0] - 1.0) < 1e-13 and abs(linf[0] - 1.0) < 1e-13


@pytest.mark.parametrize("name", ["linadv1d_sin", "burgers1d_sin",
                                  "euler1d_density_wave"])
def test_conservation_periodic(name):
    res = driver.solve(presets.preset(name, tfinal=0.3))
    assert res.conservation_drift < 1e-11


def test_solve_reports_errors_and_steps():
    res = driver.solve(linadv_config())
    assert res.steps > 0 and res.t == pytest.approx(0.2)
    assert "u" in res.errors
    l2, linf = res.errors["u"]
    assert 0 < l2 < linf < 1e-3


def test_rkfr_reaches_expected_order():
    cfg = linadv_config(scheme="rkfr", degree=2, tfinal=0.5)
    rep = driver.convergence_study(cfg, [20, 40, 80])
    assert rep.eoc("u", "l2")[-1] > 2.9


def test_unknown_scheme_rejected():
    with pytest.raises(ConfigurationError):
        driver.solve(linadv_config(scheme="abcd"))


# ---------------------------------------------------------------------------
# determinism and file output


def test_bitwise_deterministic_rerun(tmp_path):
    paths = []
    for k in range(2):
        res = driver.solve(linadv_config(ncell=20, tfinal=0.1))
        p = tmp_path / f"sol{k}.csv"
        driver.write_solution_csv(p, res)
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_written_files_roundtrip(tmp_path):
    cfg = linadv_config(ncell=20, tfinal=0.1, name="demo")
    res = driver.solve(cfg)
    sol = tmp_path / "solution.csv"
    meta = tmp_path / "meta.json"
    driver.write_solution_csv(sol, res)
    driver.write_meta_json(meta, res)
    rows = sol.read_text().strip().split("\n")
    assert rows[0] == "x,u"
    assert len(rows) == 1 + 20 * 3
    x0, u0 = map(float, rows[1].split(","))
    assert u0 == res.u[0, 0, 0]
    m = json.loads(meta.read_text())
    assert m["name"] == "demo" and m["mesh"]["ncell"] == 20
    assert m["errors"]["u"]["l2"] == res.errors["u"][0]

    rep = driver.convergence_study(cfg, [10, 20])
    errs = tmp_path / "errors.csv"
    driver.write_errors_csv(errs, rep)
    lines = errs.read_text().strip().split("\n")
    assert lines[0] == "grid,variable,l2,linf,eoc,steps,seconds"
    assert len(lines) == 3


# ---------------------------------------------------------------------------
# presets and CLI


def test_preset_overrides_route_correctly():
    cfg = presets.preset("euler1d_sod", ncell=64, limiter_kind="tvb", M=5.0,
                         degree=2)
    assert cfg.mesh.ncell == 64
    assert cfg.limiter.kind == "tvb" and cfg.limiter.M == 5.0
    assert cfg.degree == 2


def test_preset_unknown_override_and_name():
    with pytest.raises(ConfigurationError):
        presets.preset("euler1d_sod", bogus=1)
    with pytest.raises(ConfigurationError):
        presets.preset("not_a_preset")


def test_cli_operators_json(capsys):
    assert cli.main(["operators", "--degree", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["degree"] == 2
    assert len(payload["nodes"]) == 3


def test_cli_solve_writes_outputs(tmp_path, capsys):
    rc = cli.main(["solve", "--preset", "linadv1d_sin", "--outdir",
                   str(tmp_path), "--set", "ncell=10", "--set", "tfinal=0.05"])
    assert rc == 0
    assert (tmp_path / "meta.json").exists()
    names = os.listdir(tmp_path)
    assert any(n.startswith("solution_") for n in names)


def test_cli_convergence(tmp_path, capsys):
    rc = cli.main(["convergence", "--preset", "linadv1d_sin", "--outdir",
                   str(tmp_path), "--grids", "10,20", "--set", "tfinal=0.1"])
    assert rc == 0
    assert (tmp_path / "errors.csv").exists()
    assert "eoc" in capsys.readouterr().out


def test_cli_stability_json(capsys):
    rc = cli.main(["stability", "--degree", "1", "--correction", "radau",
                   "--dissipation", "d2"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["cfl"] - 0.333) < 2e-3


def test_cli_errors_exit_2(capsys, tmp_path):
    assert cli.main(["solve", "--set", "ncell=10"]) == 2        # no preset
    assert cli.main(["solve", "--preset", "linadv1d_sin",
                     "--set", "bogus=1"]) == 2                  # bad override
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("not a key value line\n")
    assert cli.main(["solve", "--config", str(cfgfile)]) == 2


def test_cli_config_file_and_coercion(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(
        "preset = linadv1d_sin\n"
        "ncell = 10            # comment\n"
        "tfinal = 0.05\n"
    )
    rc = cli.main(["solve", "--config", str(cfgfile), "--outdir", str(tmp_path)])
    assert rc == 0
    assert cli.coerce("true") is True
    assert cli.coerce("3") == 3
    assert cli.coerce("2.5") == 2.5
    assert cli.coerce("gl") == "gl"


@pytest.mark.slow
def test_dmr_reduced_resolution_completes():
    # Mach-10 shock reflection at 240x60, degree 2, TVB M=100 with
    # positivity: the run must reach its final time with finite,
    # physically admissible states
    cfg = presets.preset("euler2d_dmr", degree=2)
    res = driver.solve(cfg)
    assert np.all(np.isfinite(res.u))
    rho, vx, vy, p = cfg.law.primitives(res.u, check=False)
    assert driver.cell_averages_2d(
        build_operators(cfg.points, cfg.degree, cfg.correction),
        res.u)[..., 0].min() > 0.0
    assert rho.min() > 0.0
