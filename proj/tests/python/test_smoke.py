"""Smoke tests for the python bindings: exercise the main operations
end-to-end without re-testing the C++ logic."""

import json
import math

import pytest

import navfuse as nf


def make_camera():
    return nf.make_pinhole(75, 75, 79.5, 59.5, -0.45, 0.45, 160, 120)


def make_grid():
    grid = nf.GridSpec()
    grid.resolution = 0.1
    grid.width = 80
    grid.height = 80
    grid.origin_x = -4.0
    grid.origin_z = 0.0
    grid.unknown_cost = 0.95
    return grid


def test_ground_intersection_geometry():
    cam = make_camera()
    hit = nf.ground_intersect(cam, 80, 110)  # low pixel: close ground point
    assert hit is not None
    x, z = hit
    assert z > 0
    assert abs(x) < 1.0
    assert nf.ground_intersect(cam, 80, 0) is None  # above the horizon


def test_sampling_and_costs():
    spec = nf.SamplerSpec()
    spec.path_count = 64
    paths = nf.sample_paths(spec, 7)
    assert len(paths) == 64
    p = paths.paths[0]
    assert p.waypoints[0] == (0.0, 0.0)
    ex, ez = p.endpoint
    assert abs(math.hypot(ex, ez) - spec.endpoint_radius) < 1e-6

    grid = make_grid()
    cmap = nf.CostMap(grid)
    cells = [(ix, iz) for ix in range(grid.width) for iz in range(grid.height)]
    cmap.set_cells(cells, 0.0)
    assert nf.traversability_cost(p, cmap) == 0.0
    assert nf.goal_cost(p, (0.0, 1.0)) >= 0.0
    assert nf.combined_cost(p, cmap, (0.0, 1.0), 2.0) == pytest.approx(
        2.0 * nf.goal_cost(p, (0.0, 1.0))
    )
    assert len(nf.top_k(paths, cmap, 8)) == 8


def test_plan_pipeline_from_rendered_observation():
    params = nf.WorldParams()
    world = nf.synthesize_world(nf.ScenarioKind.corridor, params, 5)
    state = nf.RobotState()
    state.pose = world.start
    cam = make_camera()
    mask = nf.render_observation(world, state, cam, nf.NoiseSpec())
    assert mask.count_set() > 0

    bev = nf.project_mask_to_bev(cam, mask, make_grid())
    cfg = nf.PlannerConfig()
    cfg.top_k = 24
    path, diag_json = nf.plan(nf.sample_paths(nf.SamplerSpec(), 3), bev, (0.0, 1.0), cfg)
    diag = json.loads(diag_json)
    assert diag["strategy"] == "angular"
    assert diag["k"] >= 1
    assert len(diag["representatives"]) >= 1
    ex, ez = path.endpoint
    assert ez > 0


def test_no_path_error_surfaces_in_python():
    grid = make_grid()
    lethal = nf.CostMap(grid)
    cells = [(ix, iz) for ix in range(grid.width) for iz in range(grid.height)]
    lethal.set_cells(cells, 1.0)
    cfg = nf.PlannerConfig()
    with pytest.raises(nf.NoPathError):
        nf.plan(nf.sample_paths(nf.SamplerSpec(), 3), lethal, (0.0, 1.0), cfg)


def test_mission_runs_and_scores(tmp_path):
    params = nf.WorldParams()
    params.corridor_width = 2.0
    params.corridor_length = 12.0
    world = nf.synthesize_world(nf.ScenarioKind.corridor, params, 5)
    mission = nf.Mission()
    mission.add_checkpoint(8.0, 9.0, 1.0)
    mission.difficulty = 2
    mission.time_limit = 30.0

    config = nf.SimConfig()
    config.grid = make_grid()
    sampler = nf.SamplerSpec()
    sampler.path_count = 96
    config.sampler = sampler
    planner = nf.PlannerConfig()
    planner.top_k = 24
    config.planner = planner

    log = nf.run_mission(world, mission, config, make_camera(), 11)
    assert log.outcome == "success"
    assert log.score == 2.0
    assert len(log) > 0

    log_file = tmp_path / "mission.jsonl"
    nf.save_simlog(log, str(log_file))
    loaded = nf.load_simlog(str(log_file))
    assert loaded.score == log.score
    frames = nf.replay(loaded, str(tmp_path / "frames"))
    assert frames == len(log)

    assert nf.mission_score(3, 4, 4, False) == pytest.approx(3.0)
    assert nf.mission_score(3, 4, 4, True) == 0.0


def test_iou_and_masks(tmp_path):
    a = nf.Mask(8, 8, 1)
    b = nf.Mask(8, 8, 0)
    for u in range(8):
        for v in range(4):
            b.set(u, v, True)
    assert nf.iou(a, a) == 1.0
    assert nf.iou(b, a) == 0.5
    pgm = tmp_path / "m.pgm"
    nf.save_mask_pgm(b, str(pgm))
    again = nf.load_mask_pgm(str(pgm))
    assert again.count_set() == b.count_set()
