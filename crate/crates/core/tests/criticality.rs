//! Criticality pipeline against brute-force oracles and end-to-end on the corridor world.

use llplan::criticality::{
    binarize, estimate_mu, generate_training_data, sample_critical, sample_problems, score_region, smooth,
    solve_problems, translated_mask, CriticalMask, CriticalityGrid, GridSpec, MotionPlanSet, TrainingConfig,
};
use llplan::geometry::{Aabb, ChainLink, Configuration, Environment, Obstacle, Robot, Vec2};
use llplan::io::{read_mask_pgm, write_mask_pgm};
use llplan::planner::Budget;
use llplan::planners::RrtConnectPlanner;
use llplan::worlds;
use llplan::Rng;

/// Closed-box Liang-Barsky test; agrees with half-open membership for segments that avoid
/// grid lines at their endpoints and corners, which random data does with probability one.
fn segment_hits_cell(spec: &GridSpec, cell: usize, a: Vec2, b: Vec2) -> bool {
    let r = spec.cell_rect(cell);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-dx, a.x - r.min.x),
        (dx, r.max.x - a.x),
        (-dy, a.y - r.min.y),
        (dy, r.max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else if p < 0.0 {
            t0 = t0.max(q / p);
        } else {
            t1 = t1.min(q / p);
        }
    }
    t0 <= t1
}

fn base(q: &Configuration) -> Vec2 {
    Vec2::new(q[0], q[1])
}

fn brute_force_counts(set: &MotionPlanSet, spec: &GridSpec) -> Vec<u32> {
    (0..spec.cell_count())
        .map(|c| {
            set.plans
                .iter()
                .filter(|plan| match plan.len() {
                    0 => false,
                    1 => spec.cell_of(base(&plan[0])) == c,
                    _ => plan
                        .windows(2)
                        .any(|w| segment_hits_cell(spec, c, base(&w[0]), base(&w[1]))),
                })
                .count() as u32
        })
        .collect()
}

fn random_set(rng: &mut Rng, spec: &GridSpec) -> MotionPlanSet {
    let b = spec.bounds;
    let plans = (0..1 + rng.index(6))
        .map(|_| {
            (0..1 + rng.index(6))
                .map(|_| {
                    Configuration::new(vec![
                        rng.uniform(b.min.x, b.max.x),
                        rng.uniform(b.min.y, b.max.y),
                        rng.uniform(-3.0, 3.0),
                    ])
                })
                .collect()
        })
        .collect();
    MotionPlanSet::new("random", plans)
}

#[test]
fn estimate_matches_brute_force_counting() {
    let mut rng = Rng::new(1);
    for _ in 0..50 {
        let w = 2 + rng.index(12);
        let h = 2 + rng.index(12);
        let bounds = Aabb::new(
            Vec2::new(-1.0, 2.0),
            Vec2::new(rng.uniform(0.0, 5.0), rng.uniform(3.0, 9.0)),
        );
        let spec = GridSpec::new(w, h, bounds).unwrap();
        let set = random_set(&mut rng, &spec);
        let counts = brute_force_counts(&set, &spec);
        let mu = estimate_mu(&set, &spec).unwrap();
        for (c, &k) in counts.iter().enumerate() {
            let expect = (k as f64 / set.len() as f64) * (w * h) as f64;
            assert!(
                (mu.values[c] - expect).abs() <= 1e-12 * expect.max(1.0),
                "cell {c}: {} vs {expect}",
                mu.values[c]
            );
        }
    }
}

#[test]
fn adding_a_plan_never_lowers_its_cells() {
    let mut rng = Rng::new(2);
    let spec = GridSpec::new(10, 10, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0))).unwrap();
    for _ in 0..50 {
        let mut set = random_set(&mut rng, &spec);
        let before = estimate_mu(&set, &spec).unwrap();
        let extra = random_set(&mut rng, &spec).plans.swap_remove(0);
        let touched = llplan::criticality::rasterize_trace(&extra, &spec);
        set.plans.push(extra);
        let after = estimate_mu(&set, &spec).unwrap();
        for c in touched {
            assert!(after.values[c] >= before.values[c]);
        }
    }
}

#[test]
fn smoothing_preserves_mass_and_sign_on_random_grids() {
    let mut rng = Rng::new(3);
    for _ in 0..20 {
        let spec = GridSpec::new(
            5 + rng.index(20),
            5 + rng.index(20),
            Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)),
        )
        .unwrap();
        let values = (0..spec.cell_count())
            .map(|_| if rng.chance(0.3) { rng.uniform(0.0, 50.0) } else { 0.0 })
            .collect();
        let grid = CriticalityGrid {
            spec,
            values,
            plan_count: 1,
        };
        let s = smooth(&grid, rng.uniform(0.3, 4.0)).unwrap();
        assert!(s.values.iter().all(|&v| v >= 0.0));
        assert!((s.total() - grid.total()).abs() <= 1e-6 * grid.total().max(1.0));
    }
}

#[test]
fn mask_points_round_trip_through_pgm() {
    let mut rng = Rng::new(4);
    let spec = GridSpec::new(17, 9, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(3.4, 1.8))).unwrap();
    let grid = CriticalityGrid {
        spec,
        values: (0..spec.cell_count()).map(|_| rng.uniform(0.0, 1.0)).collect(),
        plan_count: 1,
    };
    let mask = binarize(&grid, 0.2).unwrap();
    let back = read_mask_pgm(&write_mask_pgm(&mask), &spec).unwrap();
    let bits = |m: &CriticalMask| {
        m.points()
            .iter()
            .map(|p| (p.x.to_bits(), p.y.to_bits()))
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&back), bits(&mask));
}

#[test]
fn chain_samples_near_a_wall_are_collision_free() {
    let robot = Robot::Chain {
        base: llplan::geometry::box_vertices(0.2, 0.2),
        links: vec![
            ChainLink {
                length: 0.6,
                width: 0.1,
            },
            ChainLink {
                length: 0.5,
                width: 0.1,
            },
        ],
    };
    let env = Environment::new(
        Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(6.0, 6.0)),
        vec![Obstacle::rect((3.0, 0.0), (3.5, 6.0)).named("wall")],
        robot,
    )
    .unwrap();
    let spec = GridSpec::new(60, 60, *env.workspace()).unwrap();
    // column of cells whose centers lie 0.25 m left of the wall
    let cells: Vec<usize> = (5..55)
        .map(|iy| spec.index(spec.cell_of(Vec2::new(2.75, 0.0)) % 60, iy))
        .collect();
    let mask = CriticalMask::from_cells(spec, &cells);
    let mut rng = Rng::new(5);
    for _ in 0..200 {
        let q = sample_critical(&mask, &env, &mut rng).unwrap();
        assert!(env.is_collision_free(&q));
        assert!(mask.bits[spec.cell_of(base(&q))]);
    }
}

fn trainer() -> RrtConnectPlanner {
    RrtConnectPlanner {
        budget: Budget::samples(50_000),
    }
}

#[test]
fn corridor_world_pipeline() {
    let s = worlds::two_room_corridor();
    let cfg = TrainingConfig::default();
    let data = generate_training_data(&s.env, &s.name, &cfg, &trainer(), &mut Rng::new(6)).unwrap();
    assert!(data.report.warnings.is_empty());
    assert_eq!(data.report.attempted, 150);

    // corridor cells outrank the rooms
    let spec = data.mu.spec;
    let (mut corridor, mut rooms) = (Vec::new(), Vec::new());
    for c in 0..spec.cell_count() {
        let p = spec.cell_center(c);
        if p.x > 5.0 && p.x < 5.0 + worlds::CORRIDOR_LENGTH {
            let r = spec.cell_rect(c);
            if r.min.y <= 5.0 && 5.0 < r.max.y {
                corridor.push(data.mu.values[c]);
            }
        } else if !data.obstacles.occupied[c] {
            rooms.push(data.mu.values[c]);
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(
        mean(&corridor) > mean(&rooms),
        "{} vs {}",
        mean(&corridor),
        mean(&rooms)
    );

    // sampled seeds respect the mask
    let mut rng = Rng::new(7);
    for _ in 0..100 {
        let q = sample_critical(&data.mask, &s.env, &mut rng).unwrap();
        assert!(s.env.is_collision_free(&q));
        assert!(data.mask.bits[spec.cell_of(base(&q))]);
    }

    // trained mask beats a randomly placed region of equal area on held-out plans
    let problems = sample_problems(&s.env, 50, &mut rng).unwrap();
    let mut held = MotionPlanSet::new(&s.name, Vec::new());
    solve_problems(&s.env, &problems, &trainer(), &mut rng, &mut held).unwrap();
    let random = translated_mask(&data.mask, &mut rng);
    let trained = score_region(&data.mask, &held).unwrap();
    let baseline = score_region(&random, &held).unwrap();
    assert!(trained > baseline, "{trained} vs {baseline}");
}
